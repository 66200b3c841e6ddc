#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "kicked/mat2.hpp"
#include "kicked/schedule.hpp"

namespace kicked::psl2 {

using Psl2Schedule = KickSchedule<Mat2>;

// Evolution f^(k)(tau) = phi_k h^tau ... phi_1 h^tau, f^(0) = 1.
Mat2 evolve_matrix(const Psl2Schedule& kicks, double tau, std::uint64_t k);
std::vector<Mat2> evolve_matrix_sequence(const Psl2Schedule& kicks, double tau, std::uint64_t k);

// The arena as a sequential system: PSL(2,R) acting on itself on the left.
struct Psl2KickedSystem {
  using Point = Mat2;
  double tau = 1.0;
  Psl2Schedule kicks;
  Point step(std::uint64_t i, const Point& p) const { return kicks.at(i) * horocycle(tau) * p; }
};

// Product carried as (unit-scale matrix, log scale) so norm growth can be
// tracked far past double overflow; the workhorse of escape and gauge scans.
class ScaledEvolution {
 public:
  void advance(const Mat2& kick, const Mat2& flow_step);  // kick * h^tau * current
  double log_norm() const;  // log || f^(k) ||
  std::uint64_t steps() const { return steps_; }

 private:
  double a_ = 1.0, b_ = 0.0, c_ = 0.0, d_ = 1.0;
  double log_scale_ = 0.0;
  std::uint64_t steps_ = 0;
};

struct EscapeReport {
  bool escaped = false;
  std::uint64_t first_k = 0;      // first k with ||f^(k)|| > threshold
  double max_log_norm = 0.0;      // running max of log ||f^(k)||, k <= K
  std::uint64_t argmax = 0;
  double threshold = 0.0;
  std::uint64_t k_max = 0;        // "bounded" verdict means bounded through K only
};

EscapeReport escape_detector(const Psl2Schedule& kicks, double tau, std::uint64_t k_max,
                             double threshold = 1e6);

// Entry recursions for lower-unipotent kicks (1,0;c_i,1):
//   alpha_k = alpha_{k-1} + tau gamma_{k-1},  gamma_k = gamma_{k-1} + c_k alpha_k
//   beta_k  = beta_{k-1}  + tau delta_{k-1},  delta_k = delta_{k-1} + c_k beta_k
struct EntrySequences {
  std::vector<double> alpha, beta, gamma, delta;  // index 0..K
};

EntrySequences entry_recursion(std::span<const double> c, double tau, std::uint64_t k_max);

// q_{k+1} = (2 + tau c_k) q_k - q_{k-1}; with the boundary rule q0 = (2-u) q1
// these sequences span the kernel of K_{u,tau} = tau L + Delta_u.
std::vector<double> schrodinger_solve(std::span<const double> c, double tau, double q0, double q1,
                                      std::uint64_t k_max);

// Matrix entries rebuilt from the two fundamental Schrodinger solutions
// (alpha: q0=q1=1, beta: q0=0, q1=tau; gamma/delta as difference quotients).
EntrySequences schrodinger_entries(std::span<const double> c, double tau, std::uint64_t k_max);

struct BoundednessReport {
  double max_log_norm = 0.0;
  double max_abs_alpha = 0.0;
  double max_abs_beta = 0.0;
  bool norms_bounded = false;      // through K, against the threshold
  bool solutions_bounded = false;  // both fundamental solutions, same threshold
  bool agree = false;
  double threshold = 0.0;
};

BoundednessReport boundedness_link_check(std::span<const double> c, double tau,
                                         std::uint64_t k_max, double threshold = 1e6);

// Closed form for upper-triangular kicks (a_i, b_i; 0, a_i^{-1}):
// f^(k) = (A_k, w_k + tau z_k; 0, A_k^{-1}) with A_k = a_1...a_k,
// z_k = [sum_i (a_k...a_i)^2]/A_k, and w_k the tau = 0 entry.
Mat2 upper_triangular_closed_form(std::span<const double> a, std::span<const double> b, double tau,
                                  std::uint64_t k);

// Gauge rho(g) = log max(||g||_E, 1). det-1 matrices have ||g|| >= sqrt(2), so
// the clamp only pins rho(1) = log sqrt(2) >= 0 as the definition requires.
double gauge(const Mat2& g);

struct GaugeCertificate {
  double product_excess = 0.0;     // max over samples of rho(gh) - rho(g) - rho(h)
  double conjugation_excess = 0.0; // max over samples of |rho(aga^-1) - rho(g)| - 2 rho(a)
  int samples = 0;
};

// Samples random triples and certifies the sub-additivity constants observed;
// for this gauge the product rule holds with C = 0 and conjugation shifts are
// bounded by 2 rho(a) per conjugator.
GaugeCertificate certify_gauge(std::uint64_t seed, int n_samples);

struct GaugeGrowth {
  std::vector<double> rho;   // rho(f^(k)), k = 0..K
  double slope_lower = 0.0;  // largest C2 with rho(f^(k)) >= C2 k on [K/2, K]
  std::uint64_t k_lo = 0, k_hi = 0;
};

// Flow step h^tau is passed as a matrix so all three one-parameter subgroups
// (horocycle, geodesic, elliptic) share the scan.
GaugeGrowth gauge_growth(const Psl2Schedule& kicks, const Mat2& flow_step, std::uint64_t k_max);

// log of the spectral radius; 0 for non-hyperbolic elements
double log_spectral_radius(const Mat2& g);

// Interval-cover schedule: harmonic blocks distributed to infinitely many
// subsequences give intervals I_k = [r_k, r_k + 1/k] covering every
// nonnegative real infinitely often; kicks h^{beta_k} with
// beta_k = (k-1) r_{k-1} - k r_k make the evolution f^(k)(tau) = h^{k(tau - r_k)}.
class IntervalCover {
 public:
  explicit IntervalCover(std::uint64_t k_max);

  std::uint64_t k_max() const { return static_cast<std::uint64_t>(r_.size()) - 1; }
  double r(std::uint64_t k) const { return r_.at(k); }
  double beta(std::uint64_t k) const;
  Psl2Schedule kicks() const;
  std::vector<std::uint64_t> covering(double tau) const;  // {k <= k_max : tau in I_k}

  // streaming visitor over (k, r_k) without storing the table
  template <class Fn>
  static void visit(std::uint64_t k_max, Fn&& fn);

 private:
  std::vector<double> r_;  // r_[0] = 0 unused sentinel
};

namespace detail {
// block t of the harmonic series goes to subsequence m(t): t mod 4 in {1,2,3}
// maps straight to m, t = 4s recurses as 3 + m(s); a bijection that
// front-loads the first subsequences so coverage shows up at desk scale.
inline std::uint64_t block_subsequence(std::uint64_t t) {
  std::uint64_t base = 0;
  while (t % 4 == 0) {
    base += 3;
    t /= 4;
  }
  return base + t % 4;
}
}  // namespace detail

template <class Fn>
void IntervalCover::visit(std::uint64_t k_max, Fn&& fn) {
  std::vector<double> subsequence_sum;
  std::uint64_t block = 1;
  std::uint64_t m = detail::block_subsequence(block);
  double block_sum = 0.0;
  for (std::uint64_t k = 1; k <= k_max; ++k) {
    if (m >= subsequence_sum.size()) subsequence_sum.resize(m + 1, 0.0);
    double rk = subsequence_sum[m];
    fn(k, rk);
    double term = 1.0 / static_cast<double>(k);
    subsequence_sum[m] = rk + term;
    block_sum += term;
    if (block_sum >= 1.0) {  // close the block once its harmonic sum reaches 1
      ++block;
      m = detail::block_subsequence(block);
      block_sum = 0.0;
    }
  }
}

}  // namespace kicked::psl2
