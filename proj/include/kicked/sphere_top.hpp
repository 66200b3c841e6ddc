#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "kicked/schedule.hpp"
#include "kicked/sequential.hpp"

namespace kicked::hamiltonian {

struct Vec3 {
  double x = 0.0, y = 0.0, z = 1.0;

  double norm() const;
  Vec3 normalized() const;
  double dot(const Vec3& o) const { return x * o.x + y * o.y + z * o.z; }
  double dist(const Vec3& o) const;
};

// the flow (rotation about the z-axis with angular velocity proportional to z)
Vec3 top_flow(double t, const Vec3& p);

// H(x,y,z) = -z^2 + 1/3; zero mean against the uniform sphere measure, with
// max 1/3 on the equator and min -2/3 at the poles
double hamiltonian_h(const Vec3& p);
inline constexpr double kTopMaxH = 1.0 / 3.0;
inline constexpr double kTopGamma = 2.0;  // |min H / max H|

// analytic measure of A_c = {H > c max H} = {|z| < sqrt((1-c)/3)} via the
// z-uniform (Archimedes) sphere measure
double measure_of_ac(double c);

// 3x3 orthogonal map (det +1 or -1); every kick is an isometry of the
// sphere, so measure preservation comes for free
struct Rot3 {
  std::array<double, 9> m{1, 0, 0, 0, 1, 0, 0, 0, 1};

  Vec3 apply(const Vec3& p) const;
  Rot3 transposed() const;  // = inverse for orthogonal maps
  friend Rot3 operator*(const Rot3& a, const Rot3& b);

  static Rot3 identity() { return {}; }
  static Rot3 kicked_top_phi();     // (x,y,z) -> (-z,y,x)
  static Rot3 theta_x();            // (x,y,z) -> (x,-y,-z): reverses the
                                    // constant-speed rotation, commutes with
                                    // the z-velocity flow
  static Rot3 reflect_xy_plane();   // (x,y,z) -> (x,y,-z): the time-reversing
                                    // symmetry of the z-velocity flow
  static Rot3 about_z(double angle);
  static Rot3 about_axis(const Vec3& axis, double angle);
};

using SphereSchedule = KickSchedule<Rot3>;

struct SphereKickedSystem {
  using Point = Vec3;
  double tau = 1.0;
  SphereSchedule kicks;

  Point step(std::uint64_t i, const Point& p) const;
};

SphereSchedule identity_kicks();
SphereSchedule constant_kick(const Rot3& r);
// {theta^-1, theta, theta^-1, ...}: the evolution is 2-periodic
SphereSchedule two_periodic_reversal(const Rot3& theta);

using SphereFlow = std::function<Vec3(double, const Vec3&)>;

// the constant-speed rotation about the z-axis (h^t = R_z(2 pi t))
Vec3 constant_rotation_flow(double t, const Vec3& p);

// max over t and point samples of |theta h^t theta^-1 p - h^{-t} p|;
// PASS when <= 1e-9
double time_reversal_deviation(const SphereFlow& flow, const Rot3& theta,
                               std::span<const double> t_samples,
                               std::span<const Vec3> point_samples);

struct FixedPointResult {
  Vec3 point;
  double residual = 0.0;  // |f(p) - p| at the reported point
};

// coarse sphere grid + local pattern-search descent of |f(p) - p|; isometries
// have no attracting fixed points, so plain iteration would not converge
FixedPointResult find_fixed_point(const std::function<Vec3(const Vec3&)>& map,
                                  double tol = 1e-10);

// z-uniform x angle-uniform sampling (Archimedes); the arena measure oracle
Vec3 sample_sphere(std::uint64_t seed, std::uint64_t index);
double sphere_mean(const std::function<double(const Vec3&)>& f, std::uint64_t n_samples,
                   std::uint64_t seed);
double sphere_measure(const std::function<bool(const Vec3&)>& pred, std::uint64_t n_samples,
                      std::uint64_t seed);

struct TopScanRow {
  double tau = 0.0;
  double eps = 0.0;
  RecurrenceReport report;
};

// per-tau recurrence reports for A_eps = {H > (1-eps) max H} = {|z| < sqrt(eps/3)}.
// Exploratory: the general super-recurrence statement rests on machinery that
// is not desk-verifiable, so only observed R_hat values and verdict densities
// are reported.
std::vector<TopScanRow> kicked_top_scan(const SphereSchedule& kicks,
                                        std::span<const double> tau_grid, double eps,
                                        std::span<const Vec3> samples, Window window,
                                        double margin = 0.01);

}  // namespace kicked::hamiltonian
