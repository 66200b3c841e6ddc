#include "kicked/flat_torus.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "kicked/rng.hpp"

namespace kicked::hamiltonian {

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;

double wrap(double v) {
  double r = v - std::floor(v);
  return r < 1.0 ? r : 0.0;
}
}  // namespace

T2 flat_flow(double t, const T2& p) { return {p.x, wrap(p.y - t * std::sin(kTwoPi * p.x))}; }

double flat_h(const T2& p) { return std::cos(kTwoPi * p.x) / kTwoPi; }

T2 FlatTorusSystem::step(std::uint64_t i, const Point& p) const {
  T2 q = flat_flow(tau, p);
  T2Translation k = kicks.at(i);
  return {wrap(q.x + k[0]), wrap(q.y + k[1])};
}

FlatSchedule two_periodic_reversal() {
  return FlatSchedule::cycled({kTheta, kTheta});  // theta is an involution
}

FlatSchedule randomizing_schedule(const T2Translation& gamma) {
  return FlatSchedule::closed_form("randomizing", [gamma](std::uint64_t i) {
    if (i % 2 == 1) return kTheta;  // theta^-1 = theta
    // phi_{2k} = psi_k theta with psi_k = translation by gamma: the composed
    // psi-evolution is then translation by k gamma
    return T2Translation{wrap(gamma[0] + kTheta[0]), wrap(gamma[1])};
  });
}

double time_reversal_deviation_flat(std::span<const double> t_samples,
                                    std::span<const T2> point_samples) {
  double worst = 0.0;
  auto circ = [](double a, double b) {
    double d = std::abs(wrap(a) - wrap(b));
    return std::min(d, 1.0 - d);
  };
  for (double t : t_samples)
    for (const T2& p : point_samples) {
      T2 shifted{wrap(p.x - kTheta[0]), p.y};
      T2 lhs = flat_flow(t, shifted);
      lhs = {wrap(lhs.x + kTheta[0]), lhs.y};
      T2 rhs = flat_flow(-t, p);
      worst = std::max(worst, std::max(circ(lhs.x, rhs.x), circ(lhs.y, rhs.y)));
    }
  return worst;
}

double torus_mean(const std::function<double(const T2&)>& f, std::uint64_t n_samples,
                  std::uint64_t seed) {
  double sum = 0.0, comp = 0.0;
  for (std::uint64_t i = 0; i < n_samples; ++i) {
    T2 p{stream_unit(seed, 2 * i), stream_unit(seed, 2 * i + 1)};
    double term = f(p) - comp;
    double t = sum + term;
    comp = (t - sum) - term;
    sum = t;
  }
  return sum / static_cast<double>(n_samples);
}

NonmixingReport nonmixing_witness(const FlatSchedule& schedule, double tau, double delta,
                                  std::uint64_t n_samples, std::uint64_t seed) {
  // precondition: the 2-periodic time-reversal schedule
  for (std::uint64_t i = 1; i <= 4; ++i) {
    T2Translation k = schedule.at(i);
    if (std::abs(k[0] - kTheta[0]) > 1e-15 || std::abs(k[1] - kTheta[1]) > 1e-15)
      throw std::invalid_argument("nonmixing_witness: schedule is not the 2-periodic reversal");
  }
  NonmixingReport report;
  report.tau = tau;
  report.delta = delta;
  report.radius = std::sqrt(delta / std::numbers::pi);
  if (report.radius >= 0.25)
    throw std::invalid_argument(
        "nonmixing_witness: delta too large to separate (ball radius must stay below 1/4)");
  report.center = {0.25, 0.5};
  report.samples = n_samples;

  auto circ = [](double a, double b) {
    double d = std::abs(a - b);
    return std::min(d, 1.0 - d);
  };
  auto in_u = [&](const T2& p) {
    double dx = circ(p.x, report.center.x), dy = circ(p.y, report.center.y);
    return dx * dx + dy * dy < report.radius * report.radius;
  };
  auto theta_flow = [&](const T2& p) {
    T2 q = flat_flow(tau, p);
    return T2{wrap(q.x + kTheta[0]), wrap(q.y + kTheta[1])};
  };

  // sampled disjointness: the x-shift by 1/2 moves the ball's x-range clean off itself
  report.separated = true;
  for (std::uint64_t i = 0; i < 4096; ++i) {
    double ang = kTwoPi * stream_unit(seed ^ 0xabcdULL, 2 * i);
    double rad = report.radius * std::sqrt(stream_unit(seed ^ 0xabcdULL, 2 * i + 1));
    T2 p{wrap(report.center.x + rad * std::cos(ang)), wrap(report.center.y + rad * std::sin(ang))};
    if (in_u(theta_flow(p))) {
      report.separated = false;
      break;
    }
  }
  if (!report.separated)
    throw std::invalid_argument("nonmixing_witness: could not verify theta^-1 h^tau U disjoint from U");

  // correlation estimates: f^(even) = id, f^(odd) = theta^-1 h^tau
  std::uint64_t hits_u = 0, hits_odd = 0;
  for (std::uint64_t i = 0; i < n_samples; ++i) {
    T2 p{stream_unit(seed, 2 * i), stream_unit(seed, 2 * i + 1)};
    if (!in_u(p)) continue;
    ++hits_u;
    if (in_u(theta_flow(p))) ++hits_odd;
  }
  report.mu_u = static_cast<double>(hits_u) / static_cast<double>(n_samples);
  report.corr_even = report.mu_u;  // f^(2k) = id exactly
  report.corr_odd = static_cast<double>(hits_odd) / static_cast<double>(n_samples);
  report.mixing_limit = report.mu_u * report.mu_u;
  report.mc_sigma = std::sqrt(report.mu_u * (1.0 - report.mu_u) / static_cast<double>(n_samples));
  return report;
}

}  // namespace kicked::hamiltonian
