#include "hspec/galerkin_assembly.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <limits>
#include <mutex>
#include <numbers>
#include <string>
#include <thread>

#include "hspec/error.hpp"

namespace hspec {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();
constexpr std::size_t kBatch = 512;
constexpr std::size_t kMaxMoments = 64;
// Branches are accumulated in independent lanes so the inner loop vectorizes;
// lanes are reduced in a fixed order afterwards.
constexpr std::size_t kLanes = 32;

bool finite(Complex c) { return std::isfinite(c.real()) && std::isfinite(c.imag()); }

// Taylor coefficients in w of ((w - c) / R)^k for k < size, truncated to
// `width` powers: coef[k * width + j].
std::vector<Complex> shifted_power_coefficients(std::size_t size, std::size_t width, Complex c, double R) {
  std::vector<Complex> coef(size * width, Complex{0.0});
  coef[0] = 1.0;
  for (std::size_t k = 1; k < size; ++k) {
    for (std::size_t j = 0; j < width; ++j) {
      const Complex lower = j > 0 ? coef[(k - 1) * width + j - 1] : Complex{0.0};
      coef[k * width + j] = (lower - c * coef[(k - 1) * width + j]) / R;
    }
  }
  return coef;
}

}  // namespace

std::size_t AssemblyOptions::resolved_samples() const {
  return samples.value_or(std::max<std::size_t>(8 * size, 256));
}

unsigned resolve_thread_count(unsigned requested) {
  if (requested > 0) return requested;
  if (const char* env = std::getenv("HSPEC_THREADS")) {
    const long v = std::strtol(env, nullptr, 10);
    if (v > 0) return static_cast<unsigned>(v);
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

double GalerkinMeta::entry_error_bound(std::size_t j, std::size_t k) const {
  const ColumnError& e = columns.at(k);
  const double tail = tail_corrected ? e.tail_residual : e.tail_bound;
  return std::pow(rho, -static_cast<double>(j)) * (tail + e.rounding) + e.aliasing_bound;
}

GalerkinMatrix assemble(const BranchFamily& family, const AssemblyOptions& options,
                        const AssemblyConstants& constants) {
  const auto start = std::chrono::steady_clock::now();
  if (family.dimension() != 1) {
    throw ConfigError("operator", "matrix assembly is implemented for d = 1 only");
  }
  const std::size_t N = options.size;
  const std::size_t M = options.resolved_samples();
  const double r = constants.r;
  const double rho = options.rho.value_or(0.5 * (1.0 + r));
  if (N < 2) throw ConfigError("numerics.N", "truncation size must be >= 2");
  if (M < 4 * N) throw ConfigError("numerics.M", "sample count must be >= 4N");
  if (!(r > 0.0 && r < 1.0)) throw ConfigError("params.r", "must lie in (0, 1)");
  if (!(rho > r)) throw ConfigError("numerics.rho", "sampling radius must exceed r");
  if (!(rho < 1.0)) throw ConfigError("numerics.rho", "sampling radius must be below 1");
  if (options.branch_cut < 1) throw ConfigError("numerics.branch_cut", "must be >= 1");

  const BallGeometry& g = family.geometry();
  const Complex center = g.center[0];
  const double R = g.radius;
  const std::size_t count = family.effective_count(options.branch_cut);
  const bool correct = options.tail_correction && family.infinite() && family.tail()->moments;
  const std::size_t width = correct ? std::min(N, kMaxMoments) : 0;
  const std::vector<Complex> coef = correct ? shifted_power_coefficients(N, width, center, R) : std::vector<Complex>{};

  // samples(m, k) = (L p_k)(phi^{-1}(rho e^{2 pi i m / M})).
  Eigen::MatrixXcd sampled(static_cast<Eigen::Index>(M), static_cast<Eigen::Index>(N));
  std::vector<double> residual(N, 0.0);
  std::mutex residual_mutex;

  auto work = [&](std::size_t m_begin, std::size_t m_end) {
    std::vector<Complex> w(kBatch);
    std::vector<Complex> t(kBatch);
    std::vector<Complex> acc(N);
    std::vector<double> lane_re(N * kLanes);
    std::vector<double> lane_im(N * kLanes);
    std::vector<Complex> moments(width);
    std::vector<double> local_residual(N, 0.0);
    for (std::size_t m = m_begin; m < m_end; ++m) {
      const double theta = 2.0 * std::numbers::pi * static_cast<double>(m) / static_cast<double>(M);
      const Complex z = g.denormalize(rho * std::polar(1.0, theta));
      std::fill(lane_re.begin(), lane_re.end(), 0.0);
      std::fill(lane_im.begin(), lane_im.end(), 0.0);
      for (std::size_t first = 1; first <= count; first += kBatch) {
        const std::size_t len = std::min(kBatch, count - first + 1);
        family.evaluate_scalar(z, first, std::span(w).first(len), std::span(t).first(len));
        for (std::size_t s = 0; s < len; s += kLanes) {
          alignas(64) double pr[kLanes];
          alignas(64) double pi[kLanes];
          alignas(64) double ur[kLanes];
          alignas(64) double ui[kLanes];
          for (std::size_t l = 0; l < kLanes; ++l) {
            const bool live = s + l < len;
            const Complex u = live ? (t[s + l] - center) / R : Complex{0.0};
            const Complex p = live ? w[s + l] : Complex{0.0};
            ur[l] = u.real();
            ui[l] = u.imag();
            pr[l] = p.real();
            pi[l] = p.imag();
          }
          for (std::size_t k = 0; k < N; ++k) {
            double* ar = lane_re.data() + k * kLanes;
            double* ai = lane_im.data() + k * kLanes;
            for (std::size_t l = 0; l < kLanes; ++l) {
              ar[l] += pr[l];
              ai[l] += pi[l];
              const double nr = pr[l] * ur[l] - pi[l] * ui[l];
              pi[l] = pr[l] * ui[l] + pi[l] * ur[l];
              pr[l] = nr;
            }
          }
        }
      }
      for (std::size_t k = 0; k < N; ++k) {
        double re = 0.0;
        double im = 0.0;
        for (std::size_t l = 0; l < kLanes; ++l) {
          re += lane_re[k * kLanes + l];
          im += lane_im[k * kLanes + l];
        }
        acc[k] = Complex{re, im};
      }
      if (correct) {
        family.tail()->moments(z, count, moments);
        for (std::size_t k = 0; k < N; ++k) {
          const std::size_t top = std::min(k + 1, width);
          Complex tail{0.0};
          double magnitude = 0.0;
          for (std::size_t j = 0; j < top; ++j) {
            const Complex term = coef[k * width + j] * moments[j];
            tail += term;
            magnitude += std::abs(term);
          }
          acc[k] += tail;
          const double truncation = top < k + 1 ? std::abs(coef[k * width + top - 1] * moments[top - 1]) : 0.0;
          local_residual[k] = std::max(local_residual[k], truncation + 64.0 * kEps * magnitude);
        }
      }
      for (std::size_t k = 0; k < N; ++k) {
        if (!finite(acc[k])) {
          throw NumericalError("assemble: non-finite value for column k=" + std::to_string(k) +
                               " at sample m=" + std::to_string(m));
        }
        sampled(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(k)) = acc[k];
      }
    }
    std::lock_guard lock(residual_mutex);
    for (std::size_t k = 0; k < N; ++k) residual[k] = std::max(residual[k], local_residual[k]);
  };

  const unsigned threads = std::min<unsigned>(resolve_thread_count(options.threads), static_cast<unsigned>(M));
  if (threads <= 1) {
    work(0, M);
  } else {
    std::vector<std::thread> pool;
    std::vector<std::exception_ptr> errors(threads);
    const std::size_t chunk = (M + threads - 1) / threads;
    for (unsigned tid = 0; tid < threads; ++tid) {
      const std::size_t lo = tid * chunk;
      const std::size_t hi = std::min(M, lo + chunk);
      pool.emplace_back([&, tid, lo, hi] {
        try {
          work(lo, hi);
        } catch (...) {
          errors[tid] = std::current_exception();
        }
      });
    }
    for (auto& th : pool) th.join();
    for (auto& e : errors) {
      if (e) std::rethrow_exception(e);
    }
  }

  // Coefficient extraction: entry(j, k) = rho^{-j} (1/M) sum_m g_k(m) e^{-2 pi i j m / M}.
  std::vector<Complex> twiddle(M);
  for (std::size_t q = 0; q < M; ++q) {
    twiddle[q] = std::polar(1.0, -2.0 * std::numbers::pi * static_cast<double>(q) / static_cast<double>(M));
  }
  GalerkinMatrix out;
  out.entries.resize(static_cast<Eigen::Index>(N), static_cast<Eigen::Index>(N));
  for (std::size_t k = 0; k < N; ++k) {
    for (std::size_t j = 0; j < N; ++j) {
      Complex sum{0.0};
      for (std::size_t m = 0; m < M; ++m) {
        sum += sampled(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(k)) * twiddle[(j * m) % M];
      }
      out.entries(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(k)) =
          sum / static_cast<double>(M) * std::pow(rho, -static_cast<double>(j));
    }
  }

  GalerkinMeta& meta = out.meta;
  meta.rho = rho;
  meta.samples = M;
  meta.branch_cut = count;
  meta.constants = constants;
  meta.tail_corrected = correct;
  meta.columns.resize(N);
  const double tau = family.tail_weight_bound(options.branch_cut);
  const double rho_m = std::pow(rho, static_cast<double>(M));
  const double noise = kEps * (std::sqrt(static_cast<double>(count)) + std::sqrt(static_cast<double>(M)) + 8.0);
  for (std::size_t k = 0; k < N; ++k) {
    const double rk = std::pow(r, static_cast<double>(k));
    ColumnError& e = meta.columns[k];
    e.tail_bound = tau * rk;
    e.tail_residual = correct ? residual[k] : e.tail_bound;
    e.aliasing_bound = constants.W * rk * rho_m / (1.0 - rho_m);
    e.rounding = 4.0 * noise * constants.W * rk;
  }
  // Entries below their own rounding estimate carry no information; exact
  // zeros keep structured matrices (diagonal, shifts) structured.
  for (std::size_t k = 0; k < N; ++k) {
    for (std::size_t j = 0; j < N; ++j) {
      Complex& a = out.entries(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(k));
      if (std::abs(a) <= std::pow(rho, -static_cast<double>(j)) * meta.columns[k].rounding) a = Complex{0.0};
    }
  }
  meta.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return out;
}

GalerkinMatrix assemble(const BranchFamily& family, const AssemblyOptions& options) {
  const std::size_t M = std::max<std::size_t>(options.resolved_samples(), 64);
  const REstimate r = estimate_r(family, M, options.branch_cut);
  const WEstimate W = estimate_W(family, M, options.branch_cut);
  return assemble(family, options, AssemblyConstants{r.value, W.value});
}

std::vector<ColumnDecayCheck> check_column_decay(const GalerkinMatrix& matrix) {
  const GalerkinMeta& meta = matrix.meta;
  std::vector<ColumnDecayCheck> out;
  for (std::size_t k = 0; k < matrix.size(); ++k) {
    ColumnDecayCheck c;
    c.k = k;
    c.norm = matrix.entries.col(static_cast<Eigen::Index>(k)).norm();
    const double rk = std::pow(meta.constants.r, static_cast<double>(k));
    double slack = 0.0;
    for (std::size_t j = 0; j < matrix.size(); ++j) {
      const double e = meta.entry_error_bound(j, k);
      slack += e * e;
    }
    c.bound = meta.constants.W * rk * (1.0 + 1e-6) + std::sqrt(slack);
    c.pass = c.norm <= c.bound;
    out.push_back(c);
  }
  return out;
}

}  // namespace hspec
