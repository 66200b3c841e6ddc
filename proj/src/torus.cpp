#include "kicked/torus.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace kicked::torus {

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;
}

FrequencyVector FrequencyVector::generic(std::vector<double> w) {
  if (w.empty()) throw std::invalid_argument("FrequencyVector: dimension must be >= 1");
  return {std::move(w), false, {}, 1};
}

FrequencyVector FrequencyVector::rational(std::vector<long long> num, long long den) {
  if (num.empty() || den <= 0) throw std::invalid_argument("FrequencyVector: bad rational input");
  FrequencyVector f;
  f.omega.reserve(num.size());
  for (long long v : num) f.omega.push_back(static_cast<double>(v) / static_cast<double>(den));
  f.rational_certified = true;
  f.num = std::move(num);
  f.den = den;
  return f;
}

bool FrequencyVector::orthogonal_to(std::span<const long long> h) const {
  if (!rational_certified || h.size() != num.size()) return false;
  long long dot = 0;
  for (std::size_t i = 0; i < h.size(); ++i) dot += h[i] * num[i];
  return dot == 0;
}

TorusSchedule random_kicks(std::uint64_t seed, std::size_t dim) {
  return TorusSchedule::closed_form(
      "random[" + std::to_string(seed) + "]", [seed, dim](std::uint64_t i) {
        std::vector<double> beta(dim);
        for (std::size_t j = 0; j < dim; ++j)
          beta[j] = stream_unit(seed, i * dim + static_cast<std::uint64_t>(j));
        return beta;
      });
}

TorusSchedule zero_kicks(std::size_t dim) {
  return TorusSchedule::constant(std::vector<double>(dim, 0.0));
}

TorusVector TorusKickedSystem::step(std::uint64_t i, const Point& p) const {
  std::vector<double> beta = kicks.at(i);
  if (beta.size() != p.dim() || omega.dim() != p.dim())
    throw std::invalid_argument("torus step: dimension mismatch");
  TorusVector out;
  out.x.resize(p.dim());
  for (std::size_t j = 0; j < p.dim(); ++j)
    out.x[j] = reduce(p.x[j] + beta[j] + tau * omega.omega[j]);
  return out;
}

TorusVector torus_evolution_point(const FrequencyVector& omega, double tau,
                                  const TorusSchedule& kicks, std::uint64_t k,
                                  const TorusVector& x0) {
  std::size_t d = x0.dim();
  // compensated kick prefix sum; drift for N > 1e6 scans stays bounded
  std::vector<double> alpha(d, 0.0), comp(d, 0.0);
  for (std::uint64_t i = 1; i <= k; ++i) {
    std::vector<double> beta = kicks.at(i);
    for (std::size_t j = 0; j < d; ++j) {
      double term = beta[j] - comp[j];
      double t = alpha[j] + term;
      comp[j] = (t - alpha[j]) - term;
      alpha[j] = t;
    }
  }
  TorusVector out;
  out.x.resize(d);
  for (std::size_t j = 0; j < d; ++j)
    out.x[j] = reduce(x0.x[j] + reduce(alpha[j]) + reduce(static_cast<double>(k) * tau * omega.omega[j]));
  return out;
}

WeylSumResult weyl_sum(std::span<const long long> h, const TorusKickedSystem& sys,
                       const TorusVector& x0, std::uint64_t n) {
  bool all_zero = std::all_of(h.begin(), h.end(), [](long long v) { return v == 0; });
  if (h.empty() || all_zero) throw std::invalid_argument("weyl_sum: h must be a nonzero integer vector");
  if (n < 1) throw std::invalid_argument("weyl_sum: N must be >= 1");
  std::complex<double> acc{0.0, 0.0};
  TorusVector x = x0;
  for (std::uint64_t k = 1; k <= n; ++k) {
    x = sys.step(k, x);
    double phase = 0.0;
    for (std::size_t j = 0; j < x.dim(); ++j) phase += static_cast<double>(h[j]) * x.x[j];
    acc += std::polar(1.0, kTwoPi * phase);
  }
  acc /= static_cast<double>(n);
  return {std::vector<long long>(h.begin(), h.end()), n, sys.tau, acc, std::abs(acc)};
}

WeylPhaseTable::WeylPhaseTable(std::span<const long long> h, const FrequencyVector& omega,
                               const TorusSchedule& kicks, const TorusVector& x0,
                               std::uint64_t n) {
  bool all_zero = std::all_of(h.begin(), h.end(), [](long long v) { return v == 0; });
  if (h.empty() || all_zero) throw std::invalid_argument("weyl phases: h must be nonzero");
  std::size_t d = omega.dim();
  if (x0.dim() != d) throw std::invalid_argument("weyl phases: base point dimension mismatch");
  for (std::size_t j = 0; j < d; ++j) h_dot_omega_ += static_cast<double>(h[j]) * omega.omega[j];
  phases_.reserve(n);
  std::vector<double> alpha(d, 0.0), comp(d, 0.0);
  for (std::uint64_t k = 1; k <= n; ++k) {
    std::vector<double> beta = kicks.at(k);
    double phase = 0.0;
    for (std::size_t j = 0; j < d; ++j) {
      double term = beta[j] - comp[j];
      double t = alpha[j] + term;
      comp[j] = (t - alpha[j]) - term;
      alpha[j] = t;
      phase += static_cast<double>(h[j]) * reduce(x0.x[j] + reduce(alpha[j]));
    }
    phases_.push_back(std::polar(1.0, kTwoPi * phase));
  }
}

std::complex<double> WeylPhaseTable::value(double tau) const {
  const std::complex<double> w = std::polar(1.0, kTwoPi * tau * h_dot_omega_);
  std::complex<double> p{1.0, 0.0}, acc{0.0, 0.0};
  for (const auto& e : phases_) {
    p *= w;
    acc += e * p;
  }
  return acc / static_cast<double>(phases_.size());
}

double WeylPhaseTable::diagonal_square(double tau) const {
  const std::complex<double> w = std::polar(1.0, kTwoPi * tau * h_dot_omega_);
  std::complex<double> p{1.0, 0.0};
  double acc = 0.0;
  for (const auto& e : phases_) {
    p *= w;
    acc += std::norm(e * p);
  }
  double n = static_cast<double>(phases_.size());
  return acc / (n * n);
}

double mean_square_weyl(std::span<const long long> h, const TorusSchedule& kicks,
                        const FrequencyVector& omega, double a, double b, std::uint64_t n,
                        std::size_t grid_size, bool diagonal_only, const TorusVector* x0) {
  if (!(a < b)) throw std::invalid_argument("mean_square_weyl: need a < b");
  if (grid_size < 2) throw std::invalid_argument("mean_square_weyl: grid_size must be >= 2");
  if (omega.rational_certified && omega.orthogonal_to(h))
    throw std::invalid_argument(
        "mean_square_weyl: h.omega = 0 for rational-certified omega; the bound's hypothesis fails");
  TorusVector base = x0 ? *x0 : TorusVector{std::vector<double>(omega.dim(), 0.0)};
  WeylPhaseTable table(h, omega, kicks, base, n);
  const double step = (b - a) / static_cast<double>(grid_size);
  double acc = 0.0;
  for (std::size_t j = 0; j < grid_size; ++j) {
    double tau = a + (static_cast<double>(j) + 0.5) * step;
    acc += diagonal_only ? table.diagonal_square(tau) : std::norm(table.value(tau));
  }
  return acc * step;
}

double discrepancy_1d(std::vector<double> points) {
  if (points.empty()) throw std::invalid_argument("discrepancy_1d: empty point set");
  std::sort(points.begin(), points.end());
  const double n = static_cast<double>(points.size());
  double d = 0.0;
  for (std::size_t i = 0; i < points.size(); ++i) {
    double up = static_cast<double>(i + 1) / n - points[i];
    double down = points[i] - static_cast<double>(i) / n;
    d = std::max({d, up, down});
  }
  return d;
}

int valuation_u(std::uint64_t k) {
  if (k == 0) throw std::invalid_argument("valuation_u: k must be >= 1");
  int v = 1;
  while ((k & 1) == 0) {
    k >>= 1;
    ++v;
  }
  return v;
}

namespace {

// alpha_k = -u(k) k omega mod 1 with the integer multiple folded in extended
// precision; k u(k) grows past 2^26 where a plain double product would lose
// the 1e-9 exact-hit resolution.
std::vector<double> burago_alpha(const FrequencyVector& omega, std::uint64_t k) {
  std::vector<double> alpha(omega.dim());
  long double m = -static_cast<long double>(valuation_u(k)) * static_cast<long double>(k);
  for (std::size_t j = 0; j < omega.dim(); ++j) {
    long double v = m * static_cast<long double>(omega.omega[j]);
    long double r = v - std::floor(v);
    alpha[j] = reduce(static_cast<double>(r));
  }
  return alpha;
}

}  // namespace

TorusSchedule burago_kicks(const FrequencyVector& omega) {
  FrequencyVector w = omega;
  return TorusSchedule::closed_form("burago", [w](std::uint64_t k) {
    std::vector<double> beta = burago_alpha(w, k);
    if (k > 1) {
      std::vector<double> prev = burago_alpha(w, k - 1);
      for (std::size_t j = 0; j < beta.size(); ++j) beta[j] = reduce(beta[j] - prev[j]);
    }
    return beta;
  });
}

BuragoScan burago_scan(const FrequencyVector& omega, int tau, std::uint64_t n, double hit_tol,
                       double half_width, double dstar_threshold) {
  if (tau < 1) throw std::invalid_argument("burago_scan: tau must be a positive integer");
  BuragoScan scan;
  scan.tau = static_cast<double>(tau);
  scan.n = n;
  scan.expected_density = std::pow(2.0, -static_cast<double>(tau));
  scan.interval_width = 2.0 * half_width;

  TorusKickedSystem sys{omega, static_cast<double>(tau), burago_kicks(omega)};
  std::uint64_t hits = 0, interval = 0;
  std::vector<double> pts;
  pts.reserve(n);
  TorusVector x{std::vector<double>(omega.dim(), 0.0)};
  for (std::uint64_t k = 1; k <= n; ++k) {
    x = sys.step(k, x);
    double v = x.x[0];
    double dist0 = std::min(v, 1.0 - v);  // circular distance to 0
    if (dist0 <= hit_tol) ++hits;
    if (dist0 < half_width) ++interval;
    pts.push_back(v);
  }
  scan.hit_freq = static_cast<double>(hits) / static_cast<double>(n);
  scan.interval_freq = static_cast<double>(interval) / static_cast<double>(n);
  scan.dstar = discrepancy_1d(std::move(pts));
  scan.equidistributed = scan.dstar < dstar_threshold;
  return scan;
}

}  // namespace kicked::torus
