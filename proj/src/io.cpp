#include "io.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

namespace civd {

using nlohmann::json;

namespace {
std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(Errc::io_error, "cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(Errc::io_error, "cannot open " + path + " for writing");
  out << text;
  if (!out) fail(Errc::io_error, "write failed: " + path);
}

void check_duplicates(const PointSet& pts) {
  if (auto dup = pts.find_duplicate())
    fail(Errc::duplicate_points, "duplicate input points at indices " +
                                     std::to_string(dup->first) + " and " +
                                     std::to_string(dup->second));
}
}  // namespace

PointSet parse_points_csv(const std::string& text) {
  std::vector<double> xs;
  int dim = -1;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::size_t hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    for (char& ch : line)
      if (ch == ',' || ch == ';' || ch == '\t') ch = ' ';
    std::istringstream ls(line);
    std::vector<double> row;
    double v;
    while (ls >> v) row.push_back(v);
    if (row.empty()) continue;
    if (dim < 0) dim = static_cast<int>(row.size());
    if (static_cast<int>(row.size()) != dim)
      fail(Errc::invalid_argument, "line " + std::to_string(lineno) + ": expected " +
                                       std::to_string(dim) + " columns");
    xs.insert(xs.end(), row.begin(), row.end());
  }
  if (dim < 0) fail(Errc::empty_input, "no points in input");
  PointSet pts(std::move(xs), dim);
  check_duplicates(pts);
  return pts;
}

PointSet parse_points_json(const std::string& text) {
  json j = json::parse(text, nullptr, false);
  if (j.is_discarded()) fail(Errc::invalid_argument, "malformed JSON point file");
  if (!j.contains("dim") || !j.contains("points"))
    fail(Errc::invalid_argument, "point JSON needs \"dim\" and \"points\"");
  int dim = j["dim"].get<int>();
  std::vector<double> xs;
  for (const auto& row : j["points"]) {
    if (static_cast<int>(row.size()) != dim)
      fail(Errc::invalid_argument, "point row with wrong arity");
    for (const auto& v : row) xs.push_back(v.get<double>());
  }
  PointSet pts(std::move(xs), dim);
  check_duplicates(pts);
  return pts;
}

PointSet load_points(const std::string& path) {
  std::string text = read_file(path);
  std::size_t i = text.find_first_not_of(" \t\r\n");
  if (i != std::string::npos && (text[i] == '{' || text[i] == '['))
    return parse_points_json(text);
  return parse_points_csv(text);
}

// Serializes every structural field; derived structures (guard boxes, i-paths,
// majority paths) are rebuilt on load from the same data, so a round trip is
// bit-stable.
class ArtifactCodec {
 public:
  static json encode(const Civd& c) {
    json j;
    j["format"] = "civd-artifact";
    j["version"] = 1;
    json meta;
    meta["model"] = c.model_.kind() == ModelKind::vector ? "vector" : "density";
    meta["t"] = c.model_.exponent();
    meta["dim"] = c.pts_.dim();
    meta["epsilon"] = c.model_.epsilon();
    meta["beta"] = c.model_.beta();
    meta["beta_derived"] = c.model_.beta_derived();
    meta["n"] = c.pts_.size();
    json stats;
    stats["type1_cells"] = c.stats_.type1_cells;
    stats["type2_cells"] = c.stats_.type2_cells;
    stats["box_nodes"] = c.stats_.box_nodes;
    stats["record_events"] = c.stats_.record_events;
    stats["beta"] = c.stats_.beta;
    stats["delta_inv"] = c.stats_.delta_inv;
    stats["wall_decompose_s"] = c.stats_.wall_decompose_s;
    stats["wall_assign_s"] = c.stats_.wall_assign_s;
    stats["empty_cover_fallbacks"] = c.stats_.empty_cover_fallbacks;
    meta["stats"] = stats;
    j["meta"] = meta;
    j["points"] = c.pts_.coords();

    const DistanceTree& dt = c.dtree_;
    json t;
    t["beta"] = dt.beta_;
    t["root"] = dt.root_;
    t["leaf_order"] = dt.leaf_order_;
    json nodes;
    std::vector<double> s, mw;
    std::vector<int> rep, c0, c1, par, beg, end;
    for (const auto& nd : dt.nodes_) {
      s.push_back(nd.s);
      mw.push_back(nd.merge_w);
      rep.push_back(nd.rep);
      c0.push_back(nd.child[0]);
      c1.push_back(nd.child[1]);
      par.push_back(nd.parent);
      beg.push_back(nd.begin);
      end.push_back(nd.end);
    }
    nodes["s"] = s;
    nodes["merge_w"] = mw;
    nodes["rep"] = rep;
    nodes["child0"] = c0;
    nodes["child1"] = c1;
    nodes["parent"] = par;
    nodes["begin"] = beg;
    nodes["end"] = end;
    t["nodes"] = nodes;
    j["distance_tree"] = t;

    const BoxTree& bt = c.dec_.tree;
    json b;
    b["centers"] = bt.centers_;
    b["edges"] = bt.edges_;
    b["parent"] = bt.parents_;
    b["first_child"] = bt.first_child_;
    b["nchildren"] = bt.nchildren_;
    b["cell"] = bt.cell_;
    std::vector<int> kinds;
    for (auto k : bt.kinds_) kinds.push_back(static_cast<int>(k));
    b["kind"] = kinds;
    j["box_tree"] = b;

    json cells;
    {
      std::vector<int> bn, kind, dom, le, pl, bp;
      std::vector<double> rpm, bv;
      std::vector<std::int64_t> rec;
      for (const Cell& cl : c.dec_.cells) {
        bn.push_back(cl.box_node);
        kind.push_back(cl.kind == CellKind::type1 ? 1 : 2);
        dom.push_back(cl.dominating);
        rpm.push_back(cl.r_prime_min);
        le.push_back(cl.last_event);
        pl.push_back(cl.path_len);
        bv.push_back(cl.observer.best_value);
        bp.push_back(cl.observer.best_position);
        rec.push_back(cl.observer.points_recorded);
      }
      cells["box_node"] = bn;
      cells["kind"] = kind;
      cells["dominating"] = dom;
      cells["r_prime_min"] = rpm;
      cells["last_event"] = le;
      cells["path_len"] = pl;
      cells["best_value"] = bv;
      cells["best_position"] = bp;
      cells["points_recorded"] = rec;
    }
    j["cells"] = cells;

    json ev;
    {
      std::vector<int> node, par2, pos;
      std::vector<double> distv;
      std::vector<std::int64_t> before;
      for (const RecordEvent& e : c.dec_.events) {
        node.push_back(e.node);
        distv.push_back(e.distance);
        before.push_back(e.points_before);
        par2.push_back(e.parent);
        pos.push_back(e.position);
      }
      ev["node"] = node;
      ev["distance"] = distv;
      ev["points_before"] = before;
      ev["parent"] = par2;
      ev["position"] = pos;
    }
    j["events"] = ev;

    if (c.model_.kind() == ModelKind::vector) {
      j["vector_sites"] = c.vector_sites_;
      if (c.agg_) {
        const AggregationTree& a = *c.agg_;
        json ag;
        ag["centers"] = a.centers_;
        ag["edges"] = a.edges_;
        ag["rect_lo"] = a.rect_lo_;
        ag["rect_hi"] = a.rect_hi_;
        ag["parent"] = a.parent_;
        ag["child_label"] = a.child_label_;
        ag["begin"] = a.begin_;
        ag["end"] = a.end_;
        ag["order"] = a.order_;
        j["aggregation_tree"] = ag;
      }
    }
    return j;
  }

  static Civd decode(const json& j) {
    if (!j.contains("format") || j["format"] != "civd-artifact")
      fail(Errc::bad_artifact, "not a civd artifact");
    Civd c;
    const json& meta = j.at("meta");
    int dim = meta.at("dim").get<int>();
    double eps = meta.at("epsilon").get<double>();
    double beta = meta.at("beta").get<double>();
    bool derived = meta.at("beta_derived").get<bool>();
    bool vectorish = meta.at("model") == "vector";
    double t = meta.at("t").get<double>();
    if (vectorish)
      c.model_ = derived ? InfluenceModel::vector_model(dim, t, eps)
                         : InfluenceModel::vector_model_with_beta(dim, t, eps, beta);
    else
      c.model_ = derived ? InfluenceModel::density_model(dim, eps)
                         : InfluenceModel::density_model_with_beta(dim, eps, beta);
    c.pts_ = PointSet(j.at("points").get<std::vector<double>>(), dim);

    const json& dt = j.at("distance_tree");
    c.dtree_.beta_ = dt.at("beta").get<double>();
    c.dtree_.root_ = dt.at("root").get<int>();
    c.dtree_.leaf_order_ = dt.at("leaf_order").get<std::vector<int>>();
    c.dtree_.n_ = static_cast<int>(c.dtree_.leaf_order_.size());
    const json& nodes = dt.at("nodes");
    auto s = nodes.at("s").get<std::vector<double>>();
    auto mw = nodes.at("merge_w").get<std::vector<double>>();
    auto rep = nodes.at("rep").get<std::vector<int>>();
    auto c0 = nodes.at("child0").get<std::vector<int>>();
    auto c1 = nodes.at("child1").get<std::vector<int>>();
    auto par = nodes.at("parent").get<std::vector<int>>();
    auto beg = nodes.at("begin").get<std::vector<int>>();
    auto end = nodes.at("end").get<std::vector<int>>();
    c.dtree_.nodes_.resize(s.size());
    for (std::size_t i = 0; i < s.size(); ++i) {
      auto& nd = c.dtree_.nodes_[i];
      nd.s = s[i];
      nd.merge_w = mw[i];
      nd.rep = rep[i];
      nd.child[0] = c0[i];
      nd.child[1] = c1[i];
      nd.parent = par[i];
      nd.begin = beg[i];
      nd.end = end[i];
    }

    const json& b = j.at("box_tree");
    BoxTree& bt = c.dec_.tree;
    bt.dim_ = dim;
    bt.centers_ = b.at("centers").get<std::vector<double>>();
    bt.edges_ = b.at("edges").get<std::vector<double>>();
    bt.parents_ = b.at("parent").get<std::vector<std::int32_t>>();
    bt.first_child_ = b.at("first_child").get<std::vector<std::int32_t>>();
    bt.nchildren_ = b.at("nchildren").get<std::vector<std::uint8_t>>();
    bt.cell_ = b.at("cell").get<std::vector<std::int32_t>>();
    for (int k : b.at("kind").get<std::vector<int>>())
      bt.kinds_.push_back(static_cast<BoxTree::NodeKind>(k));

    const json& cells = j.at("cells");
    {
      auto bn = cells.at("box_node").get<std::vector<int>>();
      auto kind = cells.at("kind").get<std::vector<int>>();
      auto dom = cells.at("dominating").get<std::vector<int>>();
      auto rpm = cells.at("r_prime_min").get<std::vector<double>>();
      auto le = cells.at("last_event").get<std::vector<int>>();
      auto pl = cells.at("path_len").get<std::vector<int>>();
      auto bv = cells.at("best_value").get<std::vector<double>>();
      auto bp = cells.at("best_position").get<std::vector<int>>();
      auto rec = cells.at("points_recorded").get<std::vector<std::int64_t>>();
      c.dec_.cells.resize(bn.size());
      for (std::size_t i = 0; i < bn.size(); ++i) {
        Cell& cl = c.dec_.cells[i];
        cl.box_node = bn[i];
        cl.kind = kind[i] == 1 ? CellKind::type1 : CellKind::type2;
        cl.dominating = dom[i];
        cl.r_prime_min = rpm[i];
        cl.last_event = le[i];
        cl.path_len = pl[i];
        cl.observer.best_value = bv[i];
        cl.observer.best_position = bp[i];
        cl.observer.points_recorded = rec[i];
        if (cl.kind == CellKind::type1) ++c.dec_.type1_cells;
        else ++c.dec_.type2_cells;
      }
    }

    const json& ev = j.at("events");
    {
      auto node = ev.at("node").get<std::vector<int>>();
      auto distv = ev.at("distance").get<std::vector<double>>();
      auto before = ev.at("points_before").get<std::vector<std::int64_t>>();
      auto par2 = ev.at("parent").get<std::vector<int>>();
      auto pos = ev.at("position").get<std::vector<int>>();
      c.dec_.events.resize(node.size());
      for (std::size_t i = 0; i < node.size(); ++i) {
        RecordEvent& e = c.dec_.events[i];
        e.node = node[i];
        e.distance = distv[i];
        e.points_before = before[i];
        e.parent = par2[i];
        e.position = pos[i];
      }
    }

    if (vectorish) {
      c.vector_sites_ = j.at("vector_sites").get<std::vector<std::vector<std::int32_t>>>();
      if (j.contains("aggregation_tree")) {
        auto a = std::shared_ptr<AggregationTree>(new AggregationTree());
        const json& ag = j.at("aggregation_tree");
        a->dim_ = dim;
        a->centers_ = ag.at("centers").get<std::vector<double>>();
        a->edges_ = ag.at("edges").get<std::vector<double>>();
        a->rect_lo_ = ag.at("rect_lo").get<std::vector<double>>();
        a->rect_hi_ = ag.at("rect_hi").get<std::vector<double>>();
        a->parent_ = ag.at("parent").get<std::vector<std::int32_t>>();
        a->child_label_ = ag.at("child_label").get<std::vector<std::uint8_t>>();
        a->begin_ = ag.at("begin").get<std::vector<std::int32_t>>();
        a->end_ = ag.at("end").get<std::vector<std::int32_t>>();
        a->order_ = ag.at("order").get<std::vector<std::int32_t>>();
        int nn = static_cast<int>(a->edges_.size());
        a->point_leaf_.assign(c.pts_.size(), -1);
        a->child_first_.assign(nn, 0);
        a->child_count_.assign(nn, 0);
        std::vector<std::int32_t> cnt(nn, 0);
        for (int v = 1; v < nn; ++v) ++cnt[a->parent_[v]];
        std::vector<std::int32_t> first(nn + 1, 0);
        for (int v = 0; v < nn; ++v) first[v + 1] = first[v] + cnt[v];
        a->children_.resize(nn > 0 ? first[nn] : 0);
        std::vector<std::int32_t> fill(first.begin(), first.end() - 1);
        for (int v = 1; v < nn; ++v) a->children_[fill[a->parent_[v]]++] = v;
        for (int v = 0; v < nn; ++v) {
          a->child_first_[v] = first[v];
          a->child_count_[v] = static_cast<std::uint8_t>(cnt[v]);
        }
        for (int v = 0; v < nn; ++v)
          if (a->child_count_[v] == 0) a->point_leaf_[a->order_[a->begin_[v]]] = v;
        a->subtree_nodes_.assign(nn, 1);
        for (int v = nn - 1; v > 0; --v) a->subtree_nodes_[a->parent_[v]] += a->subtree_nodes_[v];
        a->build_ipaths();
        a->build_majority();
        c.agg_ = a;
      }
    }
    const json& st = meta.at("stats");
    c.stats_.n = c.pts_.size();
    c.stats_.dim = dim;
    c.stats_.beta = st.at("beta").get<double>();
    c.stats_.delta_inv = st.at("delta_inv").get<double>();
    c.stats_.box_nodes = st.at("box_nodes").get<std::int64_t>();
    c.stats_.record_events = st.at("record_events").get<std::int64_t>();
    c.stats_.type1_cells = st.at("type1_cells").get<std::int64_t>();
    c.stats_.type2_cells = st.at("type2_cells").get<std::int64_t>();
    c.stats_.wall_decompose_s = st.at("wall_decompose_s").get<double>();
    c.stats_.wall_assign_s = st.at("wall_assign_s").get<double>();
    c.stats_.empty_cover_fallbacks = st.at("empty_cover_fallbacks").get<std::int64_t>();
    c.dec_.type1_cells = c.stats_.type1_cells;
    c.dec_.type2_cells = c.stats_.type2_cells;
    return c;
  }
};

std::string artifact_to_json(const Civd& civd) { return ArtifactCodec::encode(civd).dump(); }

Civd artifact_from_json(const std::string& text) {
  json j = json::parse(text, nullptr, false);
  if (j.is_discarded()) fail(Errc::bad_artifact, "malformed artifact JSON");
  return ArtifactCodec::decode(j);
}

void save_artifact(const Civd& civd, const std::string& path) {
  write_file(path, artifact_to_json(civd));
}

Civd load_artifact(const std::string& path) { return artifact_from_json(read_file(path)); }

}  // namespace civd
