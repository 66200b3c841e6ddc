#pragma once

#include <algorithm>
#include <cmath>
#include <concepts>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace kicked {

// A kicked sequential system exposes step(i, x) = phi_i h^tau x. Everything in
// this header is a pure template over that concept; arenas define the systems.
template <class S>
concept SequentialSystem = requires(const S& s, const typename S::Point& p, std::uint64_t i) {
  { s.step(i, p) } -> std::same_as<typename S::Point>;
};

template <class Point>
struct Orbit {
  Point x0;
  std::vector<Point> points;  // points[i] = x_i, size horizon+1
  std::uint64_t horizon() const { return points.size() - 1; }
};

template <SequentialSystem S>
Orbit<typename S::Point> evolve(const S& sys, typename S::Point x0, std::uint64_t n) {
  if (n < 1) throw std::invalid_argument("evolve: horizon must be >= 1");
  Orbit<typename S::Point> orbit;
  orbit.x0 = x0;
  orbit.points.reserve(n + 1);
  orbit.points.push_back(x0);
  for (std::uint64_t i = 1; i <= n; ++i) orbit.points.push_back(sys.step(i, orbit.points.back()));
  return orbit;
}

// Streaming traversal: visit(i, x_i) for i = 0..n without storing the orbit,
// so statistics over N = 1e7 run in constant memory.
template <SequentialSystem S, class Visit>
void scan_orbit(const S& sys, typename S::Point x0, std::uint64_t n, Visit&& visit) {
  typename S::Point x = x0;
  visit(std::uint64_t{0}, x);
  for (std::uint64_t i = 1; i <= n; ++i) {
    x = sys.step(i, x);
    visit(i, x);
  }
}

struct Window {
  std::uint64_t n_min = 1;
  std::uint64_t n_max = 1;
  void validate() const {
    if (n_min < 1 || n_max < n_min) throw std::invalid_argument("window: need 1 <= n_min <= n_max");
  }
};

// nu_{N,A}(x0) for N in [window.n_min, window.n_max]
struct CountingStats {
  Window window;
  std::string set_label;
  std::vector<std::uint64_t> counts;  // counts[j] = nu_{n_min + j}

  std::uint64_t nu(std::uint64_t n) const {
    if (n < window.n_min || n > window.n_max) throw std::out_of_range("nu: N outside window");
    return counts[n - window.n_min];
  }
};

template <SequentialSystem S, class Pred>
CountingStats counting_function(const S& sys, typename S::Point x0, Pred&& in_a, Window w,
                                std::string set_label = {}) {
  w.validate();
  CountingStats stats{w, std::move(set_label), {}};
  stats.counts.reserve(w.n_max - w.n_min + 1);
  std::uint64_t count = 0;
  scan_orbit(sys, x0, w.n_max - 1, [&](std::uint64_t i, const typename S::Point& x) {
    if (in_a(x)) ++count;
    // nu_N counts indices 0..N-1, so after visiting index i we know nu_{i+1}
    std::uint64_t n = i + 1;
    if (n >= w.n_min) stats.counts.push_back(count);
  });
  return stats;
}

template <class Point, class Pred>
CountingStats counting_function(const Orbit<Point>& orbit, Pred&& in_a, Window w,
                                std::string set_label = {}) {
  w.validate();
  if (w.n_max > orbit.horizon() + 1)
    throw std::invalid_argument("counting_function: window exceeds orbit horizon");
  CountingStats stats{w, std::move(set_label), {}};
  stats.counts.reserve(w.n_max - w.n_min + 1);
  std::uint64_t count = 0;
  for (std::uint64_t i = 0; i < w.n_max; ++i) {
    if (in_a(orbit.points[i])) ++count;
    if (i + 1 >= w.n_min) stats.counts.push_back(count);
  }
  return stats;
}

// Finite-horizon estimate of R(f_*, A) = limsup_N max_x nu_{N,A}(x)/N. The max
// runs over the given samples and window only, so r_hat is an honest lower
// bound of the limsup-max, never the limit itself; window and sample metadata
// ride along in the report.
struct RecurrenceReport {
  double r_hat = 0.0;
  double mu_a = 0.0;
  double margin = 0.01;
  bool verdict = false;  // r_hat - mu_a > margin
  Window window;
  std::size_t sample_count = 0;
  std::size_t best_sample = 0;
  std::uint64_t best_n = 0;
};

template <SequentialSystem S, class Pred>
RecurrenceReport recurrence_ratio(const S& sys, Pred&& in_a,
                                  const std::vector<typename S::Point>& samples, Window w,
                                  double mu_a, double margin = 0.01) {
  w.validate();
  if (samples.empty()) throw std::invalid_argument("recurrence_ratio: no samples");
  if (mu_a < 0.0 || mu_a > 1.0) throw std::invalid_argument("recurrence_ratio: mu_A outside [0,1]");
  RecurrenceReport report;
  report.window = w;
  report.mu_a = mu_a;
  report.margin = margin;
  report.sample_count = samples.size();
  for (std::size_t s = 0; s < samples.size(); ++s) {
    std::uint64_t count = 0;
    scan_orbit(sys, samples[s], w.n_max - 1, [&](std::uint64_t i, const typename S::Point& x) {
      if (in_a(x)) ++count;
      std::uint64_t n = i + 1;
      if (n < w.n_min) return;
      double ratio = static_cast<double>(count) / static_cast<double>(n);
      if (ratio > report.r_hat) {
        report.r_hat = ratio;
        report.best_sample = s;
        report.best_n = n;
      }
    });
  }
  report.verdict = report.r_hat - mu_a > margin;
  return report;
}

// Birkhoff averages I_N(x) = (1/N) sum_{i<N} F(x_i) for each sample, plus the
// per-N sup over samples (the finite-horizon H_N(t)).
struct BirkhoffProfile {
  Window window;
  std::vector<std::vector<double>> i_n;  // [sample][j], j = N - n_min
  std::vector<double> sup_i_n;           // max over samples per N

  double max_i() const {
    double m = -HUGE_VAL;
    for (double v : sup_i_n) m = std::max(m, v);
    return m;
  }
};

template <SequentialSystem S, class Fn>
BirkhoffProfile birkhoff_profile(const S& sys, const std::vector<typename S::Point>& samples,
                                 Fn&& f, Window w) {
  w.validate();
  if (samples.empty()) throw std::invalid_argument("birkhoff_profile: no samples");
  BirkhoffProfile profile;
  profile.window = w;
  profile.i_n.resize(samples.size());
  profile.sup_i_n.assign(w.n_max - w.n_min + 1, -HUGE_VAL);
  for (std::size_t s = 0; s < samples.size(); ++s) {
    auto& row = profile.i_n[s];
    row.reserve(w.n_max - w.n_min + 1);
    double sum = 0.0, comp = 0.0;  // Kahan: long windows must not drift
    scan_orbit(sys, samples[s], w.n_max - 1, [&](std::uint64_t i, const typename S::Point& x) {
      double term = f(x) - comp;
      double t = sum + term;
      comp = (t - sum) - term;
      sum = t;
      std::uint64_t n = i + 1;
      if (n < w.n_min) return;
      double avg = sum / static_cast<double>(n);
      row.push_back(avg);
      auto j = n - w.n_min;
      profile.sup_i_n[j] = std::max(profile.sup_i_n[j], avg);
    });
  }
  return profile;
}

// alpha_hat = (max over window and samples of I_N) / max F; evidence that F is
// an alpha-quasi-integral for any alpha <= alpha_hat. The zero-mean hypothesis
// is certified externally by the arena's measure oracle.
struct QuasiIntegralEstimate {
  double alpha_hat = 0.0;
  double max_f = 0.0;
  double certified_mean = 0.0;
};

inline QuasiIntegralEstimate quasi_integral_level(const BirkhoffProfile& profile, double max_f,
                                                  double certified_mean, double mean_tol = 1e-6) {
  if (!(max_f > 0.0)) throw std::invalid_argument("quasi_integral_level: max F must be positive");
  if (std::abs(certified_mean) > mean_tol)
    throw std::invalid_argument("quasi_integral_level: F is not zero-mean within tolerance");
  return {profile.max_i() / max_f, max_f, certified_mean};
}

// Threshold formulas behind super-recurrence of the superlevel sets
// A_c = {F >= c max F}: R(f_*, A_c) >= (alpha-c)/(1-c), mu(A_c) <= gamma/(c+gamma).
struct RecurrenceThresholds {
  double r_lower = 0.0;
  double mu_upper = 0.0;
  double delta = 0.0;       // r_lower - mu_upper
  bool admissible_c = false;  // |c - alpha/2| < sqrt(alpha^2 + 4 alpha gamma - 4 gamma)/2
  bool gamma_small = false;   // gamma < alpha^2 / (4 - 4 alpha)
};

inline RecurrenceThresholds super_recurrence_thresholds(double alpha, double c, double gamma) {
  if (!(alpha > 0.0 && alpha <= 1.0)) throw std::invalid_argument("thresholds: alpha outside (0,1]");
  if (!(c > 0.0 && c < alpha && c < 1.0)) throw std::invalid_argument("thresholds: need 0 < c < alpha");
  if (gamma < 0.0) throw std::invalid_argument("thresholds: gamma must be >= 0");
  RecurrenceThresholds t;
  t.r_lower = (alpha - c) / (1.0 - c);
  t.mu_upper = (c + gamma) > 0.0 ? gamma / (c + gamma) : 0.0;
  t.delta = t.r_lower - t.mu_upper;
  double disc = alpha * alpha + 4.0 * alpha * gamma - 4.0 * gamma;
  t.admissible_c = disc > 0.0 && std::abs(c - alpha / 2.0) < 0.5 * std::sqrt(disc);
  t.gamma_small = alpha < 1.0 ? gamma < alpha * alpha / (4.0 - 4.0 * alpha) : true;
  return t;
}

// Finite form of the counting inequality N I_N <= c maxF (N - nu_N) + maxF nu_N:
// nu_N / N >= (I_N / maxF - c) / (1 - c). Returns the worst slack
// min_N [nu_N/N - rhs]; nonnegative (up to rounding) on every valid profile.
inline double counting_inequality_margin(const std::vector<double>& i_n, const CountingStats& nu,
                                         double max_f, double c) {
  if (!(max_f > 0.0)) throw std::invalid_argument("counting_inequality_margin: max F must be positive");
  if (!(c > 0.0 && c < 1.0)) throw std::invalid_argument("counting_inequality_margin: c outside (0,1)");
  if (i_n.size() != nu.counts.size())
    throw std::invalid_argument("counting_inequality_margin: window mismatch");
  double worst = HUGE_VAL;
  for (std::size_t j = 0; j < i_n.size(); ++j) {
    double n = static_cast<double>(nu.window.n_min + j);
    double lhs = static_cast<double>(nu.counts[j]) / n;
    double rhs = (i_n[j] / max_f - c) / (1.0 - c);
    worst = std::min(worst, lhs - rhs);
  }
  return worst;
}

}  // namespace kicked
