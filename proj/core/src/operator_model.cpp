#include "hspec/operator_model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <sstream>

#include "hspec/error.hpp"
#include "hspec/expression.hpp"
#include "hspec/hurwitz.hpp"

namespace hspec {

namespace {

constexpr std::size_t kBatch = 512;

void check_ball_shape(const BallGeometry& g) {
  if (g.dimension < 1) throw ConfigError("geometry.dimension", "must be >= 1");
  if (static_cast<int>(g.center.size()) != g.dimension) {
    throw ConfigError("geometry.center", "expected " + std::to_string(g.dimension) + " coordinates");
  }
  if (!(g.radius > 0.0) || !std::isfinite(g.radius)) {
    throw ConfigError("geometry.radius", "must be a positive finite number");
  }
}

std::string describe_point(std::span<const Complex> z) {
  std::ostringstream os;
  os << '(';
  for (std::size_t i = 0; i < z.size(); ++i) {
    if (i) os << ", ";
    os << z[i].real() << (z[i].imag() < 0 ? "-" : "+") << std::abs(z[i].imag()) << 'i';
  }
  os << ')';
  return os.str();
}

class MobiusPowerKernel final : public ScalarBranchKernel {
 public:
  explicit MobiusPowerKernel(double s) : s_(s) {}

  void evaluate(Complex z, std::size_t first, std::span<Complex> weights,
                std::span<Complex> images) const override {
    // 1/(a + ib) spelled out: std::complex division and products go through
    // the Annex G slow paths.
    for (std::size_t j = 0; j < weights.size(); ++j) {
      const double a = static_cast<double>(first + j) + z.real();
      const double b = z.imag();
      const double inv = 1.0 / (a * a + b * b);
      const double tr = a * inv;
      const double ti = -b * inv;
      images[j] = Complex{tr, ti};
      weights[j] = s_ == 2.0 ? Complex{tr * tr - ti * ti, 2.0 * tr * ti} : std::pow(images[j], s_);
    }
  }

  double weight_modulus_sum(Complex z, std::size_t count) const override {
    const double x = z.real();
    const double y2 = z.imag() * z.imag();
    double sum = 0.0;
    if (s_ == 2.0) {
      for (std::size_t n = 1; n <= count; ++n) {
        const double a = static_cast<double>(n) + x;
        sum += 1.0 / (a * a + y2);
      }
    } else {
      for (std::size_t n = 1; n <= count; ++n) {
        const double a = static_cast<double>(n) + x;
        sum += std::pow(a * a + y2, -0.5 * s_);
      }
    }
    return sum;
  }

 private:
  double s_;
};

}  // namespace

double ScalarBranchKernel::weight_modulus_sum(Complex z, std::size_t count) const {
  std::vector<Complex> w(kBatch);
  std::vector<Complex> t(kBatch);
  double sum = 0.0;
  for (std::size_t first = 1; first <= count; first += kBatch) {
    const std::size_t len = std::min(kBatch, count - first + 1);
    evaluate(z, first, std::span(w).first(len), std::span(t).first(len));
    for (std::size_t j = 0; j < len; ++j) sum += std::abs(w[j]);
  }
  return sum;
}

BranchFamily::BranchFamily(std::string name, BallGeometry geometry, std::vector<Branch> finite,
                           std::optional<BranchTail> tail)
    : name_(std::move(name)), geometry_(std::move(geometry)), finite_(std::move(finite)), tail_(std::move(tail)) {
  check_ball_shape(geometry_);
  if (tail_) {
    if (!tail_->generator) throw ConfigError("operator.tail", "infinite family needs a branch generator");
    if (!tail_->weight_bound) {
      throw ConfigError("operator.tail", "infinite family needs a tail weight bound tau(N)");
    }
  } else if (finite_.empty()) {
    throw ConfigError("operator.branches", "family has no branches");
  }
}

std::size_t BranchFamily::effective_count(std::size_t cut) const {
  return tail_ ? std::max(finite_.size(), cut) : finite_.size();
}

double BranchFamily::tail_weight_bound(std::size_t cut) const {
  if (!tail_) return 0.0;
  return tail_->weight_bound(std::max(cut, finite_.size()));
}

Branch BranchFamily::branch(std::size_t index) const {
  if (index == 0) throw std::out_of_range("branch indices start at 1");
  if (index <= finite_.size()) return finite_[index - 1];
  if (!tail_) throw std::out_of_range("branch index beyond finite family");
  return tail_->generator(index);
}

void BranchFamily::evaluate_scalar(Complex z, std::size_t first, std::span<Complex> weights,
                                   std::span<Complex> images) const {
  if (geometry_.dimension != 1) throw std::logic_error("evaluate_scalar requires d == 1");
  if (kernel_) {
    kernel_->evaluate(z, first, weights, images);
    return;
  }
  for (std::size_t j = 0; j < weights.size(); ++j) {
    const Branch b = branch(first + j);
    const Complex* zp = &z;
    weights[j] = b.weight({zp, 1});
    b.map({zp, 1}, images.subspan(j, 1));
  }
}

double BranchFamily::weight_modulus_sum(Complex z, std::size_t count) const {
  if (kernel_) return kernel_->weight_modulus_sum(z, count);
  double sum = 0.0;
  for (std::size_t i = 1; i <= count; ++i) sum += std::abs(branch(i).weight({&z, 1}));
  return sum;
}

BranchFamily BranchFamily::with_closed_forms(ClosedForms forms) const {
  BranchFamily copy = *this;
  copy.closed_forms_ = std::move(forms);
  if (copy.closed_forms_.r) copy.geometry_.contraction_ratio = *copy.closed_forms_.r;
  return copy;
}

BranchFamily BranchFamily::with_kernel(std::shared_ptr<const ScalarBranchKernel> kernel) const {
  BranchFamily copy = *this;
  copy.kernel_ = std::move(kernel);
  return copy;
}

BranchFamily BranchFamily::with_contraction_ratio(double r) const {
  BranchFamily copy = *this;
  copy.geometry_.contraction_ratio = r;
  return copy;
}

void BranchFamily::validate_tail(std::size_t sample_cut) const {
  if (!tail_) return;
  const std::size_t n = std::max<std::size_t>(sample_cut, 1);
  const double t1 = tail_weight_bound(n);
  const double t2 = tail_weight_bound(2 * n);
  const double t4 = tail_weight_bound(4 * n);
  if (!std::isfinite(t1) || t1 < 0.0 || t2 > t1 || t4 > t2 || (t1 > 0.0 && !(t4 < t1))) {
    throw ConfigError("operator.tail", "tail weight bound must be finite, non-increasing and tend to zero");
  }
}

// Catalog ---------------------------------------------------------------

BranchFamily make_mobius_power_family(double s, double center, double radius) {
  if (!(s > 1.0)) throw ConfigError("operator.s", "power must exceed 1 for a summable weight series");
  const double offset = center - radius;  // leftmost point of the disc
  if (!(offset > -1.0)) {
    throw ConfigError("geometry", "disc must stay to the right of -1 (center - radius > -1)");
  }
  BallGeometry geometry{1, {Complex{center}}, radius, 0.5};

  BranchTail tail;
  tail.generator = [s](std::size_t n) {
    const double nn = static_cast<double>(n);
    Branch b;
    b.weight = [s, nn](std::span<const Complex> z) {
      const Complex t = 1.0 / (nn + z[0]);
      return s == 2.0 ? t * t : std::pow(t, s);
    };
    b.map = [nn](std::span<const Complex> z, std::span<Complex> out) { out[0] = 1.0 / (nn + z[0]); };
    return b;
  };
  // sum_{n > N} (n + offset)^{-s} <= (N + offset)^{1-s} / (s - 1).
  tail.weight_bound = [s, offset](std::size_t cut) {
    const double base = static_cast<double>(cut) + offset;
    if (!(base > 0.0)) return std::numeric_limits<double>::infinity();
    return std::pow(base, 1.0 - s) / (s - 1.0);
  };
  // For n > N the image 1/(n + z) lies in |w| <= 1/(N + 1 + offset).
  tail.map_bound = [center, radius, offset](std::size_t cut) {
    return (std::abs(center) + 1.0 / (static_cast<double>(cut) + 1.0 + offset)) / radius;
  };
  tail.moments = [s](Complex z, std::size_t cut, std::span<Complex> moments) {
    const Complex a = static_cast<double>(cut) + 1.0 + z;
    for (std::size_t j = 0; j < moments.size(); ++j) {
      moments[j] = hurwitz_zeta(s + static_cast<double>(j), a);
    }
  };

  std::ostringstream name;
  name << "mobius_power(s=" << s << ")";
  BranchFamily family(name.str(), std::move(geometry), {}, std::move(tail));

  ClosedForms forms;
  const bool standard_disc = center == 1.0 && radius == 1.5;
  if (s == 2.0 && standard_disc) {
    forms.W = std::numbers::pi * std::numbers::pi / 2.0;
    forms.source = "closed form: sum (n - 1/2)^-2 = pi^2/2";
  } else {
    // sup over the disc is attained at z = center - radius for every n at once.
    forms.W = hurwitz_zeta(s, Complex{1.0 + offset}).real();
    forms.source = "closed form: Hurwitz zeta(s, 1 + center - radius)";
  }
  if (standard_disc) {
    forms.r = 2.0 / 3.0;
    forms.source += "; r = 2/3";
  }
  return family.with_kernel(std::make_shared<MobiusPowerKernel>(s)).with_closed_forms(std::move(forms));
}

BranchFamily make_gauss_model(double center, double radius) {
  BranchFamily family = make_mobius_power_family(2.0, center, radius);
  ClosedForms forms = family.closed_forms();
  return BranchFamily("gauss", family.geometry(), {}, family.tail())
      .with_kernel(std::make_shared<MobiusPowerKernel>(2.0))
      .with_closed_forms(std::move(forms));
}

BranchFamily make_affine_family(BallGeometry geometry, const std::vector<AffineBranchSpec>& specs) {
  check_ball_shape(geometry);
  const int d = geometry.dimension;
  std::vector<Branch> branches;
  double W = 0.0;
  double r = 0.0;
  for (std::size_t i = 0; i < specs.size(); ++i) {
    const AffineBranchSpec& spec = specs[i];
    std::vector<Complex> shift = spec.shift;
    if (shift.empty()) shift.assign(static_cast<std::size_t>(d), Complex{0.0});
    if (static_cast<int>(shift.size()) != d) {
      throw ConfigError("operator.branches[" + std::to_string(i) + "].shift",
                        "expected " + std::to_string(d) + " coordinates");
    }
    Branch b;
    const Complex weight = spec.weight;
    const Complex scale = spec.scale;
    b.weight = [weight](std::span<const Complex>) { return weight; };
    b.map = [scale, shift](std::span<const Complex> z, std::span<Complex> out) {
      for (std::size_t k = 0; k < z.size(); ++k) out[k] = scale * z[k] + shift[k];
    };
    b.weight_sup = std::abs(weight);
    branches.push_back(std::move(b));

    // The image of B(c, R) is B(scale c + shift, |scale| R).
    double offset2 = 0.0;
    for (std::size_t k = 0; k < shift.size(); ++k) {
      offset2 += std::norm(scale * geometry.center[k] + shift[k] - geometry.center[k]);
    }
    W += std::abs(weight);
    r = std::max(r, (std::sqrt(offset2) + std::abs(scale) * geometry.radius) / geometry.radius);
  }
  ClosedForms forms{W, r, "closed form: affine branches"};
  BranchFamily family("affine", std::move(geometry), std::move(branches));
  return family.with_closed_forms(std::move(forms));
}

BranchFamily make_expression_family(BallGeometry geometry, const std::vector<ExpressionBranchSpec>& specs) {
  check_ball_shape(geometry);
  const int d = geometry.dimension;
  std::vector<Branch> branches;
  for (std::size_t i = 0; i < specs.size(); ++i) {
    const std::string field = "operator.branches[" + std::to_string(i) + "]";
    const ExpressionBranchSpec& spec = specs[i];
    if (static_cast<int>(spec.map.size()) != d) {
      throw ConfigError(field + ".map", "expected " + std::to_string(d) + " coordinate expressions");
    }
    const Expression weight = Expression::parse(spec.weight, d, field + ".weight");
    std::vector<Expression> map;
    for (const std::string& m : spec.map) map.push_back(Expression::parse(m, d, field + ".map"));
    Branch b;
    b.weight = [weight](std::span<const Complex> z) { return weight.evaluate(z); };
    b.map = [map](std::span<const Complex> z, std::span<Complex> out) {
      for (std::size_t k = 0; k < map.size(); ++k) out[k] = map[k].evaluate(z);
    };
    b.weight_sup = spec.weight_sup;
    branches.push_back(std::move(b));
  }
  return BranchFamily("expression", std::move(geometry), std::move(branches));
}

// Constants -------------------------------------------------------------

std::vector<Point> boundary_samples(const BallGeometry& geometry, std::size_t count) {
  std::vector<Point> samples;
  samples.reserve(count);
  const int d = geometry.dimension;
  if (d == 1) {
    for (std::size_t m = 0; m < count; ++m) {
      const double theta = 2.0 * std::numbers::pi * static_cast<double>(m) / static_cast<double>(count);
      samples.push_back({geometry.center[0] + geometry.radius * std::polar(1.0, theta)});
    }
    return samples;
  }
  // Coordinate directions first, then a fixed pseudo-random cloud on the sphere.
  for (int k = 0; k < d && samples.size() < count; ++k) {
    for (Complex dir : {Complex{1, 0}, Complex{-1, 0}, Complex{0, 1}, Complex{0, -1}}) {
      if (samples.size() >= count) break;
      Point p = geometry.center;
      p[static_cast<std::size_t>(k)] += geometry.radius * dir;
      samples.push_back(std::move(p));
    }
  }
  std::mt19937_64 rng(0x9e3779b97f4a7c15ULL);
  std::normal_distribution<double> normal;
  while (samples.size() < count) {
    Point u(static_cast<std::size_t>(d));
    for (auto& c : u) c = {normal(rng), normal(rng)};
    const double norm = euclidean_norm(u);
    Point p(static_cast<std::size_t>(d));
    for (std::size_t k = 0; k < u.size(); ++k) p[k] = geometry.center[k] + geometry.radius * u[k] / norm;
    samples.push_back(std::move(p));
  }
  return samples;
}

WEstimate estimate_W(const BranchFamily& family, std::size_t samples, std::size_t branch_cut,
                     bool prefer_closed_form) {
  if (prefer_closed_form && family.closed_forms().W) {
    WEstimate est;
    est.value = *family.closed_forms().W;
    est.certified = true;
    est.certificate = "closed form (" + family.closed_forms().source + ")";
    return est;
  }
  if (samples < 64) throw ConfigError("numerics.samples", "boundary sampling needs at least 64 points");
  if (branch_cut < 1) throw ConfigError("numerics.branch_cut", "must be >= 1");

  const std::size_t count = family.effective_count(branch_cut);
  const double tail = family.tail_weight_bound(branch_cut);
  if (!std::isfinite(tail)) throw ConfigError("numerics.branch_cut", "tail weight bound is not finite at this cut");

  double best = 0.0;
  for (const Point& z : boundary_samples(family.geometry(), samples)) {
    double sum = 0.0;
    if (family.dimension() == 1) {
      sum = family.weight_modulus_sum(z[0], count);
    } else {
      for (std::size_t i = 1; i <= count; ++i) sum += std::abs(family.branch(i).weight(z));
    }
    if (!std::isfinite(sum)) {
      throw NumericalError("estimate_W: non-finite weight sum at boundary point " + describe_point(z));
    }
    best = std::max(best, sum);
  }

  WEstimate est;
  est.value = best + tail;
  est.samples = samples;
  est.branch_cut = count;
  est.tail_bound = tail;
  std::ostringstream cert;
  cert << "boundary sampling: M=" << samples << ", N_b=" << count << ", tau(N_b)=" << tail;
  est.certificate = cert.str();
  return est;
}

REstimate estimate_r(const BranchFamily& family, std::size_t samples, std::size_t branch_cut,
                     bool prefer_closed_form) {
  if (prefer_closed_form && family.closed_forms().r) {
    REstimate est;
    est.value = *family.closed_forms().r;
    est.certified = true;
    est.margin = 1.0 - est.value;
    est.certificate = "closed form (" + family.closed_forms().source + ")";
    return est;
  }
  if (samples < 64) throw ConfigError("numerics.samples", "boundary sampling needs at least 64 points");
  if (branch_cut < 1) throw ConfigError("numerics.branch_cut", "must be >= 1");

  const BallGeometry& g = family.geometry();
  const std::size_t count = family.effective_count(branch_cut);
  const std::size_t d = static_cast<std::size_t>(g.dimension);

  REstimate est;
  Point image(d);
  Point normalized(d);
  std::vector<Complex> w(kBatch);
  std::vector<Complex> t(kBatch);
  for (const Point& z : boundary_samples(g, samples)) {
    if (d == 1) {
      for (std::size_t first = 1; first <= count; first += kBatch) {
        const std::size_t len = std::min(kBatch, count - first + 1);
        family.evaluate_scalar(z[0], first, std::span(w).first(len), std::span(t).first(len));
        for (std::size_t j = 0; j < len; ++j) {
          const double rad = std::abs(g.normalize(t[j]));
          if (!std::isfinite(rad)) {
            throw NumericalError("estimate_r: branch " + std::to_string(first + j) +
                                 " produced a non-finite image at " + describe_point(z));
          }
          if (rad > est.value) {
            est.value = rad;
            est.worst_branch = first + j;
            est.worst_sample = z;
          }
        }
      }
    } else {
      for (std::size_t i = 1; i <= count; ++i) {
        family.branch(i).map(z, image);
        g.normalize(image, normalized);
        const double rad = euclidean_norm(normalized);
        if (!std::isfinite(rad)) {
          throw NumericalError("estimate_r: branch " + std::to_string(i) + " produced a non-finite image at " +
                               describe_point(z));
        }
        if (rad > est.value) {
          est.value = rad;
          est.worst_branch = i;
          est.worst_sample = z;
        }
      }
    }
  }

  std::ostringstream cert;
  cert << "boundary sampling: M=" << samples << ", N_b=" << count;
  if (family.infinite()) {
    if (!family.tail()->map_bound) {
      throw ConfigError("operator.tail", "infinite family needs a certified tail map bound to estimate r");
    }
    const double tail_rad = family.tail()->map_bound(count);
    cert << ", tail map bound " << tail_rad;
    if (tail_rad > est.value) {
      est.value = tail_rad;
      est.worst_branch = 0;
      est.worst_sample.clear();
    }
  }
  est.margin = 1.0 - est.value;
  est.certificate = cert.str();
  if (!(est.value < 1.0)) {
    std::ostringstream os;
    os << "estimate_r: contraction ratio " << est.value << " >= 1 ";
    if (est.worst_branch > 0) {
      os << "(branch " << est.worst_branch << " at boundary point " << describe_point(est.worst_sample) << ")";
    } else {
      os << "(tail map bound)";
    }
    throw HypothesisError(os.str());
  }
  return est;
}

// Operator application --------------------------------------------------

OperatorValue apply_operator(const BranchFamily& family, const TestFunction& f, std::span<const Complex> z,
                             std::size_t branch_cut, double f_sup) {
  const std::size_t count = family.effective_count(branch_cut);
  const std::size_t d = static_cast<std::size_t>(family.dimension());
  if (z.size() != d) throw std::invalid_argument("apply_operator: point dimension mismatch");

  OperatorValue out;
  Point image(d);
  if (d == 1) {
    std::vector<Complex> w(kBatch);
    std::vector<Complex> t(kBatch);
    for (std::size_t first = 1; first <= count; first += kBatch) {
      const std::size_t len = std::min(kBatch, count - first + 1);
      family.evaluate_scalar(z[0], first, std::span(w).first(len), std::span(t).first(len));
      for (std::size_t j = 0; j < len; ++j) {
        const Complex term = w[j] * f({&t[j], 1});
        if (!std::isfinite(term.real()) || !std::isfinite(term.imag())) {
          throw NumericalError("apply_operator: branch " + std::to_string(first + j) + " evaluated to a non-finite value");
        }
        out.value += term;
      }
    }
  } else {
    for (std::size_t i = 1; i <= count; ++i) {
      const Branch b = family.branch(i);
      b.map(z, image);
      const Complex term = b.weight(z) * f(image);
      if (!std::isfinite(term.real()) || !std::isfinite(term.imag())) {
        throw NumericalError("apply_operator: branch " + std::to_string(i) + " evaluated to a non-finite value");
      }
      out.value += term;
    }
  }
  out.tail_error = family.tail_weight_bound(branch_cut) * f_sup;
  return out;
}

OperatorValue apply_operator(const BranchFamily& family, const TestFunction& f, Complex z, std::size_t branch_cut,
                             double f_sup) {
  return apply_operator(family, f, std::span<const Complex>(&z, 1), branch_cut, f_sup);
}

OperatorValue apply_operator_series(const BranchFamily& family, const TestFunction& f,
                                    std::span<const Complex> taylor, Complex z, std::size_t branch_cut,
                                    double f_sup) {
  OperatorValue out = apply_operator(family, f, z, branch_cut, f_sup);
  if (!family.infinite() || !family.tail()->moments || taylor.empty()) return out;

  std::vector<Complex> moments(taylor.size());
  family.tail()->moments(z, family.effective_count(branch_cut), moments);
  Complex tail{0.0};
  double magnitude = 0.0;
  for (std::size_t j = 0; j < taylor.size(); ++j) {
    const Complex term = taylor[j] * moments[j];
    tail += term;
    magnitude += std::abs(term);
  }
  out.value += tail;
  out.tail_error = std::abs(taylor.back() * moments.back()) + 64.0 * std::numeric_limits<double>::epsilon() * magnitude;
  return out;
}

}  // namespace hspec
