#include "influence.hpp"

#include <cmath>
#include <limits>

namespace civd {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();

double ipow(double x, int k) {
  double r = 1.0;
  while (k > 0) {
    if (k & 1) r *= x;
    x *= x;
    k >>= 1;
  }
  return r;
}
}  // namespace

double gamma_half_integer(int d) {
  if (d < 0) fail(Errc::invalid_argument, "negative dimension");
  if (d % 2 == 0) {
    double g = 1.0;
    for (int k = 2; k <= d / 2; ++k) g *= k;
    return g;
  }
  double g = std::sqrt(M_PI);  // Gamma(1/2)
  for (double x = 0.5; x < d * 0.5 + 0.25; x += 1.0) g *= x;
  return g;
}

double ball_volume_constant(int d) { return gamma_half_integer(d) / std::pow(M_PI, d * 0.5); }

InfluenceValue eval_vector(std::span<const WeightedSite> sites, const Point& q, double t) {
  if (sites.empty()) return {};
  int d = q.dim();
  Point sum(d);
  for (const WeightedSite& s : sites) {
    double r = dist(s.location, q);
    if (r < kTol) fail(Errc::singular_query, "query coincides with a site point");
    double w = static_cast<double>(s.multiplicity) * std::pow(r, -(t + 1.0));
    for (int i = 0; i < d; ++i) sum[i] += (s.location[i] - q[i]) * w;
  }
  InfluenceValue v;
  v.magnitude = norm(sum);
  if (v.magnitude > 0) v.direction = scale(sum, 1.0 / v.magnitude);
  return v;
}

InfluenceValue eval_density(std::span<const WeightedSite> sites, const Point& q, int d) {
  if (sites.empty()) return {};
  double far = 0.0;
  std::int64_t count = 0;
  for (const WeightedSite& s : sites) {
    double r = dist(s.location, q);
    if (r < kTol) fail(Errc::singular_query, "query coincides with a site point");
    far = std::max(far, r);
    count += s.multiplicity;
  }
  InfluenceValue v;
  v.magnitude = ball_volume_constant(d) * static_cast<double>(count) / ipow(far, d);
  return v;
}

InfluenceModel InfluenceModel::make(ModelKind kind, int dim, double t, double epsilon,
                                    std::optional<double> beta_override) {
  if (dim < 1 || dim > kMaxDim) fail(Errc::unsupported_dimension, "dimension must be in [1, 8]");
  if (kind == ModelKind::vector && t < 1.0) fail(Errc::invalid_argument, "vector exponent t must be >= 1");
  if (!(epsilon > 0.0 && epsilon < 1.0)) fail(Errc::invalid_argument, "epsilon must be in (0, 1)");
  InfluenceModel m;
  m.kind_ = kind;
  m.dim_ = dim;
  m.t_ = t;
  m.epsilon_ = epsilon;
  m.delta_inv_eps_ = m.delta_capital_inverse(epsilon);
  if (beta_override) {
    if (!(*beta_override > 0.0 && *beta_override < 0.5))
      fail(Errc::invalid_argument, "beta must be in (0, 1/2)");
    m.beta_ = *beta_override;
    m.beta_derived_ = false;
  } else if (kind == ModelKind::vector) {
    m.beta_ = m.delta_inv_eps_;
  } else {
    // Tightest beta meeting both closing conditions:
    // 1 - (1+beta)^{-d} <= Dinv  and  beta <= Dinv / 3.
    double di = m.delta_inv_eps_;
    double from_volume = std::pow(1.0 - di, -1.0 / dim) - 1.0;
    m.beta_ = std::min(di / 3.0, from_volume);
  }
  if (!(m.beta_ > 0.0 && m.beta_ < 0.5)) fail(Errc::no_solution, "derived beta outside (0, 1/2)");
  if (kind == ModelKind::density && m.beta_derived_) {
    double di = m.delta_inv_eps_;
    if (1.0 - std::pow(1.0 + m.beta_, -dim) > di + 1e-12 || m.beta_ > di / 3.0 + 1e-12)
      fail(Errc::no_solution, "density beta conditions unsatisfied");
  }
  return m;
}

InfluenceModel InfluenceModel::vector_model(int dim, double t, double epsilon) {
  return make(ModelKind::vector, dim, t, epsilon, std::nullopt);
}
InfluenceModel InfluenceModel::density_model(int dim, double epsilon) {
  return make(ModelKind::density, dim, 0.0, epsilon, std::nullopt);
}
InfluenceModel InfluenceModel::vector_model_with_beta(int dim, double t, double epsilon, double beta) {
  return make(ModelKind::vector, dim, t, epsilon, beta);
}
InfluenceModel InfluenceModel::density_model_with_beta(int dim, double epsilon, double beta) {
  return make(ModelKind::density, dim, 0.0, epsilon, beta);
}

double InfluenceModel::delta(double x) const {
  if (!(x > 0.0 && x < 1.0)) fail(Errc::invalid_argument, "delta domain is (0, 1)");
  if (kind_ == ModelKind::vector) return 2.0 * dim_ * (1.0 - std::pow(1.0 - x, t_));
  return std::max(1.0 - std::pow(1.0 + x, -dim_), std::pow(1.0 - x, -dim_) - 1.0);
}

double InfluenceModel::delta_capital(double x) const {
  if (x <= 0.0) return 0.0;
  if (x >= 1.0) return kInf;
  double d1 = delta(x);
  double x2 = x / (1.0 - x);
  if (x2 >= 1.0) return kInf;
  double d2 = delta(x2);
  if (d1 >= 1.0 || d2 >= 1.0) return kInf;
  return 1.0 - (1.0 - d1) * (1.0 - x) * (1.0 - d2);
}

double InfluenceModel::delta_capital_inverse(double eps) const {
  if (!(eps > 0.0 && eps < 1.0)) fail(Errc::invalid_argument, "epsilon must be in (0, 1)");
  double hi = 1e-6;
  while (hi < 0.5 && delta_capital(hi) < eps) hi *= 2.0;
  hi = std::min(hi, 0.5);
  if (delta_capital(hi) < eps)
    fail(Errc::no_solution, "epsilon too large: Delta^{-1}(eps) would not stay below 1/2");
  double lo = hi * 0.5 > 1e-7 ? hi * 0.5 : 0.0;
  if (delta_capital(lo) >= eps) lo = 0.0;
  while (hi - lo > 1e-12) {
    double mid = 0.5 * (lo + hi);
    if (delta_capital(mid) < eps)
      lo = mid;
    else
      hi = mid;
  }
  double x = 0.5 * (lo + hi);
  if (x >= 0.5) fail(Errc::no_solution, "Delta^{-1}(eps) reached 1/2");
  return x;
}

double InfluenceModel::domination_poly(double n) const {
  if (n < 1) fail(Errc::invalid_argument, "domination_poly needs n >= 1");
  double e = kind_ == ModelKind::vector ? t_ : static_cast<double>(dim_);
  return std::pow(n, 1.0 / e);
}

InfluenceValue InfluenceModel::evaluate(std::span<const WeightedSite> sites, const Point& q) const {
  return kind_ == ModelKind::vector ? eval_vector(sites, q, t_) : eval_density(sites, q, dim_);
}

std::vector<WeightedSite> selection_map_eta(const InfluenceModel&, std::vector<WeightedSite> sites) {
  return sites;
}

}  // namespace civd
