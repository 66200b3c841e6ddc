#pragma once

#include <complex>
#include <cstdint>
#include <span>
#include <vector>

#include "kicked/schedule.hpp"
#include "kicked/sequential.hpp"

namespace kicked::torus {

// x - floor(x), the one mod-1 reduction used everywhere in this arena
inline double reduce(double v) {
  double r = v - std::floor(v);
  return r < 1.0 ? r : 0.0;  // guards r == 1.0 from rounding of tiny negatives
}

struct TorusVector {
  std::vector<double> x;  // coordinates in [0,1)

  static TorusVector of(std::vector<double> raw) {
    for (auto& v : raw) v = reduce(v);
    return {std::move(raw)};
  }
  std::size_t dim() const { return x.size(); }
};

// Frequency vector omega. Genericity (rational independence of components) is
// not certifiable in floating point; vectors are either asserted generic or
// handed over as exact integer tuples, in which case rational relations with
// integer h are decided exactly.
struct FrequencyVector {
  std::vector<double> omega;
  bool rational_certified = false;
  std::vector<long long> num;  // set when rational_certified
  long long den = 1;

  static FrequencyVector generic(std::vector<double> w);
  static FrequencyVector rational(std::vector<long long> num, long long den);
  std::size_t dim() const { return omega.size(); }
  // exact h . omega == 0 test; only meaningful when rational_certified
  bool orthogonal_to(std::span<const long long> h) const;
};

using TorusSchedule = KickSchedule<std::vector<double>>;

// beta_i uniform in [0,1)^d, reproducible from (seed, i)
TorusSchedule random_kicks(std::uint64_t seed, std::size_t dim);
TorusSchedule zero_kicks(std::size_t dim);

struct TorusKickedSystem {
  using Point = TorusVector;
  FrequencyVector omega;
  double tau = 1.0;
  TorusSchedule kicks;

  Point step(std::uint64_t i, const Point& p) const;
};

// Closed form x0 + alpha_k + k tau omega mod 1 with alpha_k the kick prefix
// sum (compensated); agrees with replaying the evolution step by step.
TorusVector torus_evolution_point(const FrequencyVector& omega, double tau,
                                  const TorusSchedule& kicks, std::uint64_t k,
                                  const TorusVector& x0);

struct WeylSumResult {
  std::vector<long long> h;
  std::uint64_t n = 0;
  double tau = 0.0;
  std::complex<double> s;
  double abs = 0.0;
};

WeylSumResult weyl_sum(std::span<const long long> h, const TorusKickedSystem& sys,
                       const TorusVector& x0, std::uint64_t n);

// Precomputed tau-independent phases e_k = exp(2 pi i h.(x0 + alpha_k)); a
// Weyl sum at any tau is then one pass of e_k * w^k with w = exp(2 pi i tau h.omega).
// This is what makes the mean-square quadrature over a tau grid affordable.
class WeylPhaseTable {
 public:
  WeylPhaseTable(std::span<const long long> h, const FrequencyVector& omega,
                 const TorusSchedule& kicks, const TorusVector& x0, std::uint64_t n);

  std::complex<double> value(double tau) const;   // S_h(N, tau)
  double diagonal_square(double tau) const;       // (1/N^2) sum |e_k w^k|^2
  std::uint64_t n() const { return static_cast<std::uint64_t>(phases_.size()); }

 private:
  std::vector<std::complex<double>> phases_;
  double h_dot_omega_ = 0.0;
};

// Composite-midpoint quadrature of int_a^b |S_h(N,tau)|^2 dtau. With
// diagonal_only the off-diagonal phases are disabled and the integral
// collapses to the analytic (b-a)/N diagonal term.
double mean_square_weyl(std::span<const long long> h, const TorusSchedule& kicks,
                        const FrequencyVector& omega, double a, double b, std::uint64_t n,
                        std::size_t grid_size, bool diagonal_only = false,
                        const TorusVector* x0 = nullptr);

// Exact star discrepancy for d = 1 via the sorted-points formula.
double discrepancy_1d(std::vector<double> points);

// Burago's kick-instability construction: alpha_k = -u(k) k omega with
// u(k) = 1 + (2-adic valuation of k), so u^{-1}(m) has density 2^{-m} and the
// evolution f^(k)(tau) = k(tau - u(k)) omega hits 0 exactly when u(k) = tau.
int valuation_u(std::uint64_t k);
TorusSchedule burago_kicks(const FrequencyVector& omega);

struct BuragoScan {
  double tau = 0.0;
  std::uint64_t n = 0;
  double hit_freq = 0.0;          // exact hits at 0 (within hit_tol)
  double expected_density = 0.0;  // 2^{-tau}
  double interval_freq = 0.0;     // visits to (-half_width, half_width)
  double interval_width = 0.0;
  double dstar = 0.0;
  bool equidistributed = false;  // dstar below verdict threshold
};

BuragoScan burago_scan(const FrequencyVector& omega, int tau, std::uint64_t n,
                       double hit_tol = 1e-9, double half_width = 0.05,
                       double dstar_threshold = 0.05);

}  // namespace kicked::torus
