#pragma once

#include <optional>
#include <span>
#include <vector>

#include "geometry.hpp"

namespace civd {

enum class ModelKind { vector, density };

// A cluster collapsed to a representative location with a point count.
struct WeightedSite {
  Point location;
  std::int64_t multiplicity = 1;
};

struct InfluenceValue {
  double magnitude = 0.0;
  std::optional<Point> direction;  // unit vector, vector model only (absent when magnitude is 0)
};

// Gamma(d/2 + 1) for integer d via the half-integer recurrence.
double gamma_half_integer(int d);

// c_d = Gamma(d/2+1) / pi^{d/2}; the volume of a d-ball of radius l is l^d / c_d.
double ball_volume_constant(int d);

InfluenceValue eval_vector(std::span<const WeightedSite> sites, const Point& q, double t);
InfluenceValue eval_density(std::span<const WeightedSite> sites, const Point& q, int d);

// An influence model bundles the evaluator with its error calculus: the
// stability function delta, the error estimation function Delta and its
// inverse, the domination polynomial P(n), and the derived internal
// tolerance beta used by the space decomposition.
class InfluenceModel {
 public:
  static InfluenceModel vector_model(int dim, double t, double epsilon);
  static InfluenceModel density_model(int dim, double epsilon);
  // Same models with an explicit decomposition tolerance instead of the
  // derived one. beta must lie in (0, 1/2); the error calculus still uses
  // epsilon. Intended for experiments trading guarantees for cell count.
  static InfluenceModel vector_model_with_beta(int dim, double t, double epsilon, double beta);
  static InfluenceModel density_model_with_beta(int dim, double epsilon, double beta);

  ModelKind kind() const { return kind_; }
  int dim() const { return dim_; }
  double exponent() const { return t_; }
  double epsilon() const { return epsilon_; }
  double beta() const { return beta_; }
  bool beta_derived() const { return beta_derived_; }
  double delta_inv_epsilon() const { return delta_inv_eps_; }

  double delta(double x) const;
  double delta_capital(double x) const;          // Delta; +inf outside the valid domain
  double delta_capital_inverse(double eps) const;  // bisection, abs tol 1e-12, must be < 1/2
  double domination_poly(double n) const;        // n^{1/t} or n^{1/d}

  InfluenceValue evaluate(std::span<const WeightedSite> sites, const Point& q) const;

 private:
  InfluenceModel() = default;
  static InfluenceModel make(ModelKind kind, int dim, double t, double epsilon,
                             std::optional<double> beta_override);

  ModelKind kind_ = ModelKind::density;
  int dim_ = 0;
  double t_ = 0.0;  // vector exponent; unused for density
  double epsilon_ = 0.0;
  double beta_ = 0.0;
  double delta_inv_eps_ = 0.0;
  bool beta_derived_ = true;
};

// eta: choose the optimal sub-cluster of a set of coincident points. For both
// implemented models coincident points only reinforce, so rho(k) = k and the
// mapping is the identity.
std::vector<WeightedSite> selection_map_eta(const InfluenceModel& model,
                                            std::vector<WeightedSite> sites);

}  // namespace civd
