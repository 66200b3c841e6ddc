#include "kicked/sphere_top.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "kicked/rng.hpp"

namespace kicked::hamiltonian {

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;
}

double Vec3::norm() const { return std::sqrt(x * x + y * y + z * z); }

Vec3 Vec3::normalized() const {
  double n = norm();
  if (!(n > 0.0)) throw std::invalid_argument("Vec3: cannot normalize zero vector");
  return {x / n, y / n, z / n};
}

double Vec3::dist(const Vec3& o) const {
  double dx = x - o.x, dy = y - o.y, dz = z - o.z;
  return std::sqrt(dx * dx + dy * dy + dz * dz);
}

Vec3 top_flow(double t, const Vec3& p) {
  double ang = kTwoPi * t * p.z;
  double c = std::cos(ang), s = std::sin(ang);
  return {p.x * c - p.y * s, p.x * s + p.y * c, p.z};  // z untouched
}

double hamiltonian_h(const Vec3& p) { return -p.z * p.z + 1.0 / 3.0; }

double measure_of_ac(double c) {
  if (!(c > 0.0 && c < 1.0)) throw std::invalid_argument("measure_of_ac: c must be in (0,1)");
  return std::sqrt((1.0 - c) / 3.0);
}

Vec3 Rot3::apply(const Vec3& p) const {
  return {m[0] * p.x + m[1] * p.y + m[2] * p.z,
          m[3] * p.x + m[4] * p.y + m[5] * p.z,
          m[6] * p.x + m[7] * p.y + m[8] * p.z};
}

Rot3 Rot3::transposed() const {
  return {{m[0], m[3], m[6], m[1], m[4], m[7], m[2], m[5], m[8]}};
}

Rot3 operator*(const Rot3& a, const Rot3& b) {
  Rot3 r;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      double acc = 0.0;
      for (int k = 0; k < 3; ++k) acc += a.m[3 * i + k] * b.m[3 * k + j];
      r.m[3 * i + j] = acc;
    }
  return r;
}

Rot3 Rot3::kicked_top_phi() { return {{0, 0, -1, 0, 1, 0, 1, 0, 0}}; }

Rot3 Rot3::theta_x() { return {{1, 0, 0, 0, -1, 0, 0, 0, -1}}; }

Rot3 Rot3::reflect_xy_plane() { return {{1, 0, 0, 0, 1, 0, 0, 0, -1}}; }

Rot3 Rot3::about_z(double angle) {
  double c = std::cos(angle), s = std::sin(angle);
  return {{c, -s, 0, s, c, 0, 0, 0, 1}};
}

Rot3 Rot3::about_axis(const Vec3& axis, double angle) {
  Vec3 u = axis.normalized();
  double c = std::cos(angle), s = std::sin(angle), t = 1.0 - c;
  return {{t * u.x * u.x + c, t * u.x * u.y - s * u.z, t * u.x * u.z + s * u.y,
           t * u.x * u.y + s * u.z, t * u.y * u.y + c, t * u.y * u.z - s * u.x,
           t * u.x * u.z - s * u.y, t * u.y * u.z + s * u.x, t * u.z * u.z + c}};
}

Vec3 SphereKickedSystem::step(std::uint64_t i, const Point& p) const {
  Vec3 q = kicks.at(i).apply(top_flow(tau, p));
  // renormalize only when drift shows; per-step division would itself walk z
  double n2 = q.x * q.x + q.y * q.y + q.z * q.z;
  if (std::abs(n2 - 1.0) > 1e-13) q = q.normalized();
  return q;
}

SphereSchedule identity_kicks() { return SphereSchedule::constant(Rot3::identity()); }

SphereSchedule constant_kick(const Rot3& r) { return SphereSchedule::constant(r); }

SphereSchedule two_periodic_reversal(const Rot3& theta) {
  return SphereSchedule::cycled({theta.transposed(), theta});  // theta^-1 = theta^T
}

Vec3 constant_rotation_flow(double t, const Vec3& p) {
  double c = std::cos(kTwoPi * t), s = std::sin(kTwoPi * t);
  return {p.x * c - p.y * s, p.x * s + p.y * c, p.z};
}

double time_reversal_deviation(const SphereFlow& flow, const Rot3& theta,
                               std::span<const double> t_samples,
                               std::span<const Vec3> point_samples) {
  Rot3 theta_inv = theta.transposed();
  double worst = 0.0;
  for (double t : t_samples)
    for (const Vec3& p : point_samples) {
      Vec3 lhs = theta.apply(flow(t, theta_inv.apply(p)));
      Vec3 rhs = flow(-t, p);
      worst = std::max(worst, lhs.dist(rhs));
    }
  return worst;
}

FixedPointResult find_fixed_point(const std::function<Vec3(const Vec3&)>& map, double tol) {
  auto residual = [&](const Vec3& p) { return map(p).dist(p); };
  // coarse latitude/longitude grid
  Vec3 best{0, 0, 1};
  double best_r = residual(best);
  const int n_lat = 48, n_lon = 96;
  for (int i = 0; i <= n_lat; ++i) {
    double zz = -1.0 + 2.0 * static_cast<double>(i) / n_lat;
    double rxy = std::sqrt(std::max(0.0, 1.0 - zz * zz));
    for (int j = 0; j < n_lon; ++j) {
      double ang = kTwoPi * static_cast<double>(j) / n_lon;
      Vec3 p{rxy * std::cos(ang), rxy * std::sin(ang), zz};
      double r = residual(p);
      if (r < best_r) {
        best = p;
        best_r = r;
      }
    }
  }
  // pattern search on the sphere: probe along two tangent directions with a
  // shrinking step until the step is below tolerance
  double step = 0.2;
  while (step > tol * 1e-2) {
    Vec3 t1{-best.y, best.x, 0.0};
    if (t1.norm() < 1e-8) t1 = {1.0, 0.0, 0.0};
    t1 = t1.normalized();
    Vec3 t2{best.y * t1.z - best.z * t1.y, best.z * t1.x - best.x * t1.z,
            best.x * t1.y - best.y * t1.x};
    bool improved = false;
    for (const Vec3& dir : {t1, t2}) {
      for (double sgn : {1.0, -1.0}) {
        Vec3 cand{best.x + sgn * step * dir.x, best.y + sgn * step * dir.y,
                  best.z + sgn * step * dir.z};
        cand = cand.normalized();
        double r = residual(cand);
        if (r < best_r) {
          best = cand;
          best_r = r;
          improved = true;
        }
      }
    }
    if (!improved) step *= 0.5;
  }
  return {best, best_r};
}

Vec3 sample_sphere(std::uint64_t seed, std::uint64_t index) {
  double z = stream_range(seed, 2 * index, -1.0, 1.0);
  double ang = stream_range(seed, 2 * index + 1, 0.0, kTwoPi);
  double rxy = std::sqrt(std::max(0.0, 1.0 - z * z));
  return {rxy * std::cos(ang), rxy * std::sin(ang), z};
}

double sphere_mean(const std::function<double(const Vec3&)>& f, std::uint64_t n_samples,
                   std::uint64_t seed) {
  double sum = 0.0, comp = 0.0;
  for (std::uint64_t i = 0; i < n_samples; ++i) {
    double term = f(sample_sphere(seed, i)) - comp;
    double t = sum + term;
    comp = (t - sum) - term;
    sum = t;
  }
  return sum / static_cast<double>(n_samples);
}

double sphere_measure(const std::function<bool(const Vec3&)>& pred, std::uint64_t n_samples,
                      std::uint64_t seed) {
  std::uint64_t hits = 0;
  for (std::uint64_t i = 0; i < n_samples; ++i)
    if (pred(sample_sphere(seed, i))) ++hits;
  return static_cast<double>(hits) / static_cast<double>(n_samples);
}

std::vector<TopScanRow> kicked_top_scan(const SphereSchedule& kicks,
                                        std::span<const double> tau_grid, double eps,
                                        std::span<const Vec3> samples, Window window,
                                        double margin) {
  if (!(eps > 0.0 && eps < 1.0)) throw std::invalid_argument("kicked_top_scan: eps must be in (0,1)");
  double z_cut = std::sqrt(eps / 3.0);  // A_eps = {H > (1-eps) max H} = {|z| < z_cut}
  bool sample_inside = false;
  for (const Vec3& p : samples) sample_inside |= std::abs(p.z) < z_cut;
  if (!sample_inside)
    throw std::invalid_argument("kicked_top_scan: sample points must include points inside A_eps");
  double mu = measure_of_ac(1.0 - eps);
  std::vector<Vec3> sample_vec(samples.begin(), samples.end());
  std::vector<TopScanRow> rows;
  rows.reserve(tau_grid.size());
  for (double tau : tau_grid) {
    SphereKickedSystem sys{tau, kicks};
    auto report = recurrence_ratio(
        sys, [z_cut](const Vec3& p) { return std::abs(p.z) < z_cut; }, sample_vec, window, mu,
        margin);
    rows.push_back({tau, eps, report});
  }
  return rows;
}

}  // namespace kicked::hamiltonian
