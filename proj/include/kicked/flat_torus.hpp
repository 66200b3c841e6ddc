#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <span>

#include "kicked/schedule.hpp"
#include "kicked/sequential.hpp"

namespace kicked::hamiltonian {

// The flat-torus system: h^t(x,y) = (x, y - t sin 2 pi x) on R^2/Z^2,
// generated by H(x,y) = cos(2 pi x)/(2 pi); theta(x,y) = (x + 1/2, y) is a
// time-reversing symmetry (symplectic but not Hamiltonian).
struct T2 {
  double x = 0.0, y = 0.0;
};

T2 flat_flow(double t, const T2& p);
double flat_h(const T2& p);
inline constexpr double kFlatGamma = 1.0;  // max H = -min H = 1/(2 pi)

// every kick this arena needs (theta, theta^-1, psi_k theta) is a translation
using T2Translation = std::array<double, 2>;
using FlatSchedule = KickSchedule<T2Translation>;

struct FlatTorusSystem {
  using Point = T2;
  double tau = 1.0;
  FlatSchedule kicks;

  Point step(std::uint64_t i, const Point& p) const;
};

inline constexpr T2Translation kTheta{0.5, 0.0};  // involution: theta = theta^-1

// {theta^-1, theta, ...}: evolution f^(2k) = id, f^(2k+1) = theta^-1 h^tau
FlatSchedule two_periodic_reversal();

// the randomizing schedule phi_odd = theta^-1, phi_{2k} = psi_k theta with the
// psi-evolution equal to translation by k gamma (gamma asserted generic), so
// f^(2k) = psi^(k) and Birkhoff averages converge to the space mean
FlatSchedule randomizing_schedule(const T2Translation& gamma);

double time_reversal_deviation_flat(std::span<const double> t_samples,
                                    std::span<const T2> point_samples);

double torus_mean(const std::function<double(const T2&)>& f, std::uint64_t n_samples,
                  std::uint64_t seed);

struct NonmixingReport {
  double tau = 0.0;
  double delta = 0.0;       // target measure of U
  T2 center;                // ball center
  double radius = 0.0;
  double mu_u = 0.0;        // empirical measure of U
  double corr_even = 0.0;   // correlation int chi_U(f^(i) x) chi_U(x) at even i >= 2
  double corr_odd = 0.0;    // ... at odd i
  double mixing_limit = 0.0;  // mu(U)^2, the value mixing would force
  double mc_sigma = 0.0;    // Monte-Carlo std error of the correlation estimates
  std::uint64_t samples = 0;
  bool separated = false;   // theta^-1 h^tau U and U verified disjoint on samples
};

// finds a ball U with theta^-1 h^tau U disjoint from U and reports the
// oscillating correlation sequence of the 2-periodic kicked system against
// the mixing limit mu(U)^2. The schedule argument must be the 2-periodic
// time-reversal schedule; anything else is a precondition error.
NonmixingReport nonmixing_witness(const FlatSchedule& schedule, double tau, double delta,
                                  std::uint64_t n_samples, std::uint64_t seed);

}  // namespace kicked::hamiltonian
