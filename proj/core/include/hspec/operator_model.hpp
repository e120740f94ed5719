#pragma once

#include <complex>
#include <cstddef>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "hspec/hardy_basis.hpp"

namespace hspec {

using Point = std::vector<Complex>;
using WeightFn = std::function<Complex(std::span<const Complex>)>;
using MapFn = std::function<void(std::span<const Complex>, std::span<Complex>)>;
using TestFunction = std::function<Complex(std::span<const Complex>)>;

/// One term w * (f o T) of a transfer operator.
struct Branch {
  WeightFn weight;
  MapFn map;
  std::optional<double> weight_sup;  // certified sup_B |w| when known
};

/// Branches with index above the finite list, together with the bounds that
/// make truncation at a cut N certifiable.
struct BranchTail {
  std::function<Branch(std::size_t index)> generator;
  /// tau(N) >= sum_{i > N} sup_B |w_i|; non-increasing with limit 0.
  std::function<double(std::size_t cut)> weight_bound;
  /// Optional bound on sup_{i > N, z in B} |phi(T_i(z))| in normalized coordinates.
  std::function<double(std::size_t cut)> map_bound;
  /// Optional, d = 1: moments[j] = sum_{i > N} w_i(z) T_i(z)^j. Lets a
  /// polynomial test function have its omitted tail summed in closed form.
  std::function<void(Complex z, std::size_t cut, std::span<Complex> moments)> moments;
};

/// Batched evaluation of branches first, first + 1, ... at a scalar point.
/// Built-in families provide one to keep large branch counts cheap.
class ScalarBranchKernel {
 public:
  virtual ~ScalarBranchKernel() = default;
  virtual void evaluate(Complex z, std::size_t first, std::span<Complex> weights,
                        std::span<Complex> images) const = 0;
  /// sum_{i <= count} |w_i(z)|.
  virtual double weight_modulus_sum(Complex z, std::size_t count) const;
};

/// Constants registered for a built-in family (exact, not sampled).
struct ClosedForms {
  std::optional<double> W;
  std::optional<double> r;
  std::string source;
};

/// Operator data {(w_i, T_i)} on a ball. Immutable once built.
class BranchFamily {
 public:
  BranchFamily(std::string name, BallGeometry geometry, std::vector<Branch> finite,
               std::optional<BranchTail> tail = std::nullopt);

  const std::string& name() const noexcept { return name_; }
  const BallGeometry& geometry() const noexcept { return geometry_; }
  int dimension() const noexcept { return geometry_.dimension; }
  bool infinite() const noexcept { return tail_.has_value(); }
  std::size_t finite_count() const noexcept { return finite_.size(); }
  const std::optional<BranchTail>& tail() const noexcept { return tail_; }
  const ClosedForms& closed_forms() const noexcept { return closed_forms_; }

  /// Number of branches summed when truncating at `cut`: the whole finite
  /// list, plus tail branches up to index `cut`.
  std::size_t effective_count(std::size_t cut) const;

  /// Certified bound on the sup-sum of the branches beyond `cut`.
  double tail_weight_bound(std::size_t cut) const;

  /// Branch by 1-based index.
  Branch branch(std::size_t index) const;

  /// d = 1 batch evaluation of weights and images of branches first.. (1-based).
  void evaluate_scalar(Complex z, std::size_t first, std::span<Complex> weights,
                       std::span<Complex> images) const;
  double weight_modulus_sum(Complex z, std::size_t count) const;

  BranchFamily with_closed_forms(ClosedForms forms) const;
  BranchFamily with_kernel(std::shared_ptr<const ScalarBranchKernel> kernel) const;
  BranchFamily with_contraction_ratio(double r) const;

  /// Checks tau(N) >= tau(2N) >= tau(4N) and tau(4N) < tau(N) (or zero).
  void validate_tail(std::size_t sample_cut) const;

 private:
  std::string name_;
  BallGeometry geometry_;
  std::vector<Branch> finite_;
  std::optional<BranchTail> tail_;
  ClosedForms closed_forms_;
  std::shared_ptr<const ScalarBranchKernel> kernel_;
};

// Catalog ---------------------------------------------------------------

/// w_n(z) = (n + z)^{-s}, T_n(z) = 1/(n + z), n >= 1, on the disc D(center, radius)
/// with real center and center - radius > -1.
BranchFamily make_mobius_power_family(double s, double center = 1.0, double radius = 1.5);

/// Perron-Frobenius operator of the Gauss map on D(1, 3/2): W = pi^2/2, r = 2/3.
BranchFamily make_gauss_model(double center = 1.0, double radius = 1.5);

struct AffineBranchSpec {
  Complex weight{1.0};
  Complex scale{0.5};
  std::vector<Complex> shift;  // empty means zero

  friend bool operator==(const AffineBranchSpec&, const AffineBranchSpec&) = default;
};

/// Constant weights and maps T(z) = scale * z + shift; W and r in closed form.
BranchFamily make_affine_family(BallGeometry geometry, const std::vector<AffineBranchSpec>& branches);

struct ExpressionBranchSpec {
  std::string weight;
  std::vector<std::string> map;  // one expression per coordinate
  std::optional<double> weight_sup;

  friend bool operator==(const ExpressionBranchSpec&, const ExpressionBranchSpec&) = default;
};

BranchFamily make_expression_family(BallGeometry geometry, const std::vector<ExpressionBranchSpec>& branches);

// Constants -------------------------------------------------------------

struct WEstimate {
  double value = 0.0;
  bool certified = false;  // closed form rather than sampled
  std::string certificate;
  std::size_t samples = 0;
  std::size_t branch_cut = 0;
  double tail_bound = 0.0;
};

struct REstimate {
  double value = 0.0;
  bool certified = false;
  std::size_t worst_branch = 0;  // 0 when the tail map bound dominated
  Point worst_sample;
  double margin = 0.0;  // 1 - value
  std::string certificate;
};

/// Boundary points of the family's ball: equispaced on the circle for d = 1,
/// a fixed deterministic set on the sphere otherwise.
std::vector<Point> boundary_samples(const BallGeometry& geometry, std::size_t count);

/// sup_B sum_i |w_i|: the registered closed form when `prefer_closed_form`, else
/// the max over boundary samples of the truncated sum plus tau(N_b).
WEstimate estimate_W(const BranchFamily& family, std::size_t samples, std::size_t branch_cut,
                     bool prefer_closed_form = true);

/// Largest normalized image radius |phi(T_i(z))| over branches and samples.
/// Throws HypothesisError when it reaches 1.
REstimate estimate_r(const BranchFamily& family, std::size_t samples, std::size_t branch_cut,
                     bool prefer_closed_form = true);

// Operator application --------------------------------------------------

struct OperatorValue {
  Complex value{};
  double tail_error = 0.0;
};

/// sum_{i <= N_b} w_i(z) f(T_i(z)), with tail_error = tau(N_b) * f_sup.
OperatorValue apply_operator(const BranchFamily& family, const TestFunction& f, std::span<const Complex> z,
                             std::size_t branch_cut, double f_sup);
OperatorValue apply_operator(const BranchFamily& family, const TestFunction& f, Complex z, std::size_t branch_cut,
                             double f_sup);

/// d = 1 variant that also sums the omitted tail through the family's moment
/// hook, using the Taylor coefficients of f at 0 (the tail images accumulate
/// there). tail_error then estimates the remaining error from the last
/// moment used.
OperatorValue apply_operator_series(const BranchFamily& family, const TestFunction& f,
                                    std::span<const Complex> taylor, Complex z, std::size_t branch_cut,
                                    double f_sup);

}  // namespace hspec
