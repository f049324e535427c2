// Command-line front end; talks to the library exclusively through the C API.
//
// Exit codes: 0 success, 2 validation failure, 3 input/config error.

#include <cstdio>
#include <cstdlib>
#include <memory>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "civd/civd.h"

namespace {

struct HandleDeleter {
  void operator()(civd_handle* h) const { civd_destroy(h); }
};
using Handle = std::unique_ptr<civd_handle, HandleDeleter>;

int fail_status(civd_status s, const char* what) {
  std::fprintf(stderr, "error: %s: %s (%s)\n", what, civd_last_error(), civd_status_name(s));
  return 3;
}

void print_stats(const civd_build_stats& st) {
  std::printf("n=%lld dim=%d model=%s epsilon=%g beta=%.12g delta_inv=%.12g\n",
              static_cast<long long>(st.n), st.dim,
              st.model == CIVD_MODEL_VECTOR ? "vector" : "density", st.epsilon, st.beta,
              st.delta_inv);
  std::printf("cells: type1=%lld type2=%lld box_nodes=%lld record_events=%lld\n",
              static_cast<long long>(st.type1_cells), static_cast<long long>(st.type2_cells),
              static_cast<long long>(st.box_nodes), static_cast<long long>(st.record_events));
  std::printf("wall: decompose=%.3fs assign=%.3fs", st.wall_decompose_s, st.wall_assign_s);
  if (st.empty_cover_fallbacks > 0)
    std::printf("  (numerical empty-cover fallbacks: %lld)",
                static_cast<long long>(st.empty_cover_fallbacks));
  std::printf("\n");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Approximate clustering-induced Voronoi diagrams"};
  app.require_subcommand(1);

  std::string model = "density";
  double t = 2.0;
  int dim = 2;
  double epsilon = 0.2;
  double beta = 0.0;
  std::uint64_t seed = 1;
  std::string input, output, render;
  int samples = 500;

  auto* build = app.add_subcommand("build", "construct a diagram from a point file");
  build->add_option("--model", model, "vector | density")->check(CLI::IsMember({"vector", "density"}));
  build->add_option("--t", t, "vector influence exponent (>= 1)");
  build->add_option("--dim", dim, "expected dimension of the input");
  build->add_option("--epsilon", epsilon, "target error in (0, 1)");
  build->add_option("--beta", beta, "override the derived decomposition tolerance");
  build->add_option("--seed", seed, "seed recorded for downstream validation");
  build->add_option("--input", input, "points file (CSV or JSON)")->required();
  build->add_option("--output", output, "artifact path")->required();
  build->add_option("--render", render, "also write an SVG (dim = 2)");

  auto* query = app.add_subcommand("query", "evaluate the assigned site at a point");
  query->add_option("--input", input, "artifact path")->required();
  std::vector<double> qcoords;
  query->add_option("coords", qcoords, "query point coordinates")->required();

  auto* validate = app.add_subcommand("validate", "compare against the exact oracle");
  validate->add_option("--input", input, "artifact path")->required();
  validate->add_option("--samples", samples, "number of random queries");
  validate->add_option("--seed", seed, "sampling seed");
  validate->add_option("--output", output, "machine-readable report path");

  auto* rendercmd = app.add_subcommand("render", "write an SVG of the decomposition (dim = 2)");
  rendercmd->add_option("--input", input, "artifact path")->required();
  rendercmd->add_option("--output", output, "SVG path")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : 3;
  }

  if (build->parsed()) {
    civd_build_options opt;
    civd_default_options(&opt);
    opt.model = model == "vector" ? CIVD_MODEL_VECTOR : CIVD_MODEL_DENSITY;
    opt.t = t;
    opt.epsilon = epsilon;
    opt.beta_override = beta;
    civd_handle* raw = nullptr;
    if (civd_status s = civd_build_from_file(input.c_str(), &opt, &raw); s != CIVD_OK)
      return fail_status(s, "build");
    Handle h(raw);
    civd_build_stats st;
    civd_stats(h.get(), &st);
    if (st.dim != dim && build->count("--dim") > 0) {
      std::fprintf(stderr, "error: input has dim=%d, expected %d\n", st.dim, dim);
      return 3;
    }
    print_stats(st);
    if (civd_status s = civd_save(h.get(), output.c_str()); s != CIVD_OK)
      return fail_status(s, "save");
    if (!render.empty()) {
      if (civd_status s = civd_render_svg(h.get(), render.c_str()); s != CIVD_OK)
        return fail_status(s, "render");
    }
    return 0;
  }

  if (query->parsed()) {
    civd_handle* raw = nullptr;
    if (civd_status s = civd_load(input.c_str(), &raw); s != CIVD_OK) return fail_status(s, "load");
    Handle h(raw);
    civd_build_stats st;
    civd_stats(h.get(), &st);
    if (static_cast<int>(qcoords.size()) != st.dim) {
      std::fprintf(stderr, "error: expected %d coordinates\n", st.dim);
      return 3;
    }
    civd_site site;
    if (civd_status s = civd_query(h.get(), qcoords.data(), &site); s != CIVD_OK)
      return fail_status(s, "query");
    std::printf("site_size=%lld outside=%d influence=%.17g\n", static_cast<long long>(site.count),
                site.outside, site.magnitude);
    if (site.has_direction) {
      std::printf("direction=");
      for (int i = 0; i < st.dim; ++i) std::printf("%s%.17g", i ? "," : "", site.direction[i]);
      std::printf("\n");
    }
    std::printf("site=");
    for (int64_t i = 0; i < site.count; ++i)
      std::printf("%s%d", i ? "," : "", site.ids[i]);
    std::printf("\n");
    civd_site_free(&site);
    return 0;
  }

  if (validate->parsed()) {
    civd_handle* raw = nullptr;
    if (civd_status s = civd_load(input.c_str(), &raw); s != CIVD_OK) return fail_status(s, "load");
    Handle h(raw);
    civd_validation_summary sum;
    civd_status s = civd_validate(h.get(), samples, seed, 0,
                                  output.empty() ? nullptr : output.c_str(), &sum);
    if (s != CIVD_OK) return fail_status(s, "validate");
    std::printf("samples=%d failures=%d min_ratio=%.12g\n", sum.samples, sum.failures,
                sum.min_ratio);
    return sum.failures == 0 ? 0 : 2;
  }

  if (rendercmd->parsed()) {
    civd_handle* raw = nullptr;
    if (civd_status s = civd_load(input.c_str(), &raw); s != CIVD_OK) return fail_status(s, "load");
    Handle h(raw);
    if (civd_status s = civd_render_svg(h.get(), output.c_str()); s != CIVD_OK)
      return fail_status(s, "render");
    return 0;
  }
  return 3;
}
