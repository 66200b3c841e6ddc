#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "kicked/rng.hpp"
#include "kicked/schedule.hpp"
#include "kicked/sequential.hpp"
#include "kicked/torus.hpp"

using namespace kicked;
using torus::TorusKickedSystem;
using torus::TorusVector;

namespace {

TorusKickedSystem system_1d(double omega, double tau, torus::TorusSchedule kicks) {
  return {torus::FrequencyVector::generic({omega}), tau, std::move(kicks)};
}

}  // namespace

TEST_CASE("stream draws are pure functions of (seed, index)") {
  for (std::uint64_t i : {0ull, 1ull, 17ull, 123456789ull}) {
    CHECK(stream_u64(42, i) == stream_u64(42, i));
    CHECK(stream_u64(42, i) != stream_u64(43, i));
    double u = stream_unit(7, i);
    CHECK(u >= 0.0);
    CHECK(u < 1.0);
  }
}

TEST_CASE("schedules are deterministic and reproducible") {
  auto cyc = KickSchedule<int>::cycled({1, 2, 3});
  CHECK(cyc.at(1) == 1);
  CHECK(cyc.at(2) == 2);
  CHECK(cyc.at(4) == 1);
  auto seeded = KickSchedule<int>::seeded(9, {10, 20, 30});
  for (std::uint64_t i = 1; i < 50; ++i) CHECK(seeded.at(i) == seeded.at(i));
}

TEST_CASE("evolve: identity kicks iterate the flow") {
  auto sys = system_1d(std::sqrt(2.0), 1.0, torus::zero_kicks(1));
  auto orbit = evolve(sys, TorusVector::of({0.0}), 2);
  CHECK(orbit.points.size() == 3);
  CHECK(orbit.points[0].x[0] == doctest::Approx(0.0));
  CHECK(orbit.points[1].x[0] == doctest::Approx(std::sqrt(2.0) - 1.0));
  CHECK(orbit.points[2].x[0] == doctest::Approx(2.0 * std::sqrt(2.0) - 2.0));
}

TEST_CASE("evolve replays deterministically") {
  auto sys = system_1d(std::sqrt(2.0), 1.3, torus::random_kicks(42, 1));
  auto a = evolve(sys, TorusVector::of({0.25}), 200);
  auto b = evolve(sys, TorusVector::of({0.25}), 200);
  for (std::size_t i = 0; i <= 200; ++i) CHECK(a.points[i].x[0] == b.points[i].x[0]);
}

TEST_CASE("counting: the whole space gives nu = N") {
  auto sys = system_1d(std::sqrt(2.0), 1.0, torus::random_kicks(1, 1));
  auto stats = counting_function(sys, TorusVector::of({0.1}),
                                 [](const TorusVector&) { return true; }, {1, 50});
  for (std::uint64_t n = 1; n <= 50; ++n) CHECK(stats.nu(n) == n);
}

TEST_CASE("counting monotonicity: increments in {0,1}") {
  auto sys = system_1d(std::sqrt(2.0), 0.7, torus::random_kicks(5, 1));
  auto stats = counting_function(sys, TorusVector::of({0.3}),
                                 [](const TorusVector& p) { return p.x[0] < 0.37; }, {1, 400});
  for (std::uint64_t n = 1; n < 400; ++n) {
    auto d = stats.nu(n + 1) - stats.nu(n);
    CHECK(d <= 1);
  }
  CHECK(stats.nu(400) <= 400);
}

TEST_CASE("counting rejects empty window") {
  auto sys = system_1d(1.0, 1.0, torus::zero_kicks(1));
  CHECK_THROWS_AS(counting_function(sys, TorusVector::of({0.0}),
                                    [](const TorusVector&) { return true; }, Window{5, 4}),
                  std::invalid_argument);
}

// 2-periodic reversal on the circle: theta x = -x; kicks {theta^-1 h^tau
// composed as translations cannot express reflections, so model the two-point
// orbit directly with a cycled schedule of exact betas: x1 = c, x2 = 0, ...
TEST_CASE("2-periodic orbit alternates and nu = ceil(N/2)") {
  // beta_1 maps tau*omega to c, beta_2 maps c + tau*omega back to 0
  double om = std::sqrt(2.0), tau = 1.0, c = 0.34;
  double b1 = c - tau * om, b2 = -c - tau * om;
  auto sys = system_1d(om, tau, torus::TorusSchedule::cycled({{b1}, {b2}}));
  auto orbit = evolve(sys, TorusVector::of({0.0}), 64);
  for (std::uint64_t k = 0; k <= 32; ++k)
    CHECK(std::abs(orbit.points[2 * k].x[0]) < 1e-12);
  auto stats = counting_function(orbit, [](const TorusVector& p) { return p.x[0] < 0.1; }, {1, 64});
  for (std::uint64_t n = 1; n <= 64; ++n) CHECK(stats.nu(n) == (n + 1) / 2);

  auto report = recurrence_ratio(
      sys, [](const TorusVector& p) { return p.x[0] < 0.1; },
      {TorusVector::of({0.0})}, {1, 64}, 0.1, 0.01);
  CHECK(report.r_hat >= 0.5);
  CHECK(report.verdict);
}

TEST_CASE("recurrence_ratio validates inputs") {
  auto sys = system_1d(1.0, 1.0, torus::zero_kicks(1));
  std::vector<TorusVector> empty;
  CHECK_THROWS_AS(recurrence_ratio(sys, [](const TorusVector&) { return true; }, empty,
                                   Window{1, 10}, 0.5),
                  std::invalid_argument);
  CHECK_THROWS_AS(recurrence_ratio(sys, [](const TorusVector&) { return true; },
                                   {TorusVector::of({0.0})}, Window{1, 10}, 1.5),
                  std::invalid_argument);
}

TEST_CASE("birkhoff: constant F averages to the constant") {
  auto sys = system_1d(std::sqrt(2.0), 0.9, torus::random_kicks(3, 1));
  auto prof = birkhoff_profile(sys, {TorusVector::of({0.2})},
                               [](const TorusVector&) { return 2.5; }, {1, 30});
  for (double v : prof.sup_i_n) CHECK(v == doctest::Approx(2.5));
}

TEST_CASE("birkhoff two-point average on the reversal schedule") {
  // zero-mean F on the two-point orbit {0, c}: I_{2k} = (F(0) + F(c))/2
  double om = std::sqrt(2.0), tau = 1.0, c = 0.34;
  double b1 = c - tau * om, b2 = -c - tau * om;
  auto sys = system_1d(om, tau, torus::TorusSchedule::cycled({{b1}, {b2}}));
  auto f = [c](const TorusVector& p) { return std::cos(2 * M_PI * (p.x[0] - c / 2)); };
  auto prof = birkhoff_profile(sys, {TorusVector::of({0.0})}, f, {1, 40});
  double expect = 0.5 * (f(TorusVector::of({0.0})) + f(TorusVector::of({c})));
  for (std::uint64_t k = 1; 2 * k <= 40; ++k)
    CHECK(prof.i_n[0][2 * k - 1] == doctest::Approx(expect).epsilon(1e-9));
}

TEST_CASE("quasi integral: two-point reversal orbit averages to zero at even N") {
  // F(x0) = max F = 1 and F at the partner point = min F = -1: even-N
  // averages vanish, so alpha_hat over an even window is 0
  double om = std::sqrt(2.0), tau = 1.0, c = 0.34;
  double b1 = c - tau * om, b2 = -c - tau * om;
  auto sys = system_1d(om, tau, torus::TorusSchedule::cycled({{b1}, {b2}}));
  auto f = [c](const TorusVector& p) {
    double d = std::min(std::abs(p.x[0]), 1.0 - std::abs(p.x[0]));
    double dc = std::min(std::abs(p.x[0] - c), 1.0 - std::abs(p.x[0] - c));
    return d < 1e-9 ? 1.0 : (dc < 1e-9 ? -1.0 : 0.0);
  };
  Window even_window{40, 40};
  auto prof = birkhoff_profile(sys, {TorusVector::of({0.0})}, f, even_window);
  auto est = quasi_integral_level(prof, 1.0, 0.0);
  CHECK(est.alpha_hat == doctest::Approx(0.0).epsilon(1e-12));
  // over a window containing odd N the one-point excess shows up
  auto prof2 = birkhoff_profile(sys, {TorusVector::of({0.0})}, f, Window{1, 41});
  auto est2 = quasi_integral_level(prof2, 1.0, 0.0);
  CHECK(est2.alpha_hat == doctest::Approx(1.0));
}

TEST_CASE("quasi_integral_level guards its preconditions") {
  BirkhoffProfile prof;
  prof.window = {1, 1};
  prof.sup_i_n = {0.4};
  CHECK_THROWS_AS(quasi_integral_level(prof, 0.0, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(quasi_integral_level(prof, 1.0, 1e-3), std::invalid_argument);
  auto est = quasi_integral_level(prof, 0.5, 1e-9);
  CHECK(est.alpha_hat == doctest::Approx(0.8));
}

TEST_CASE("threshold formulas reproduce the alpha=0.83, c=0.4, gamma=1 instance") {
  auto t = super_recurrence_thresholds(0.83, 0.4, 1.0);
  CHECK(t.r_lower == doctest::Approx(0.43 / 0.6).epsilon(1e-12));
  CHECK(t.mu_upper == doctest::Approx(1.0 / 1.4).epsilon(1e-12));
  CHECK(t.delta > 0.0);
  CHECK(t.admissible_c);
  CHECK(t.gamma_small);
}

TEST_CASE("threshold limits: alpha = 1, gamma = 0, c small") {
  auto t = super_recurrence_thresholds(1.0, 1e-9, 0.0);
  CHECK(t.r_lower == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(t.mu_upper == doctest::Approx(0.0));
}

TEST_CASE("threshold formulas re-evaluated independently") {
  double alpha = 0.5, c = 0.25, gamma = 0.02;
  auto t = super_recurrence_thresholds(alpha, c, gamma);
  CHECK(t.r_lower == doctest::Approx((alpha - c) / (1 - c)).epsilon(1e-15));
  CHECK(t.mu_upper == doctest::Approx(gamma / (c + gamma)).epsilon(1e-15));
  CHECK(t.delta == doctest::Approx(t.r_lower - t.mu_upper).epsilon(1e-15));
  CHECK_THROWS_AS(super_recurrence_thresholds(0.5, 0.6, 0.0), std::invalid_argument);
}

TEST_CASE("counting inequality holds on random profiles") {
  // finite counting inequality: nu_N / N >= (I_N / max F - c) / (1 - c)
  for (std::uint64_t seed : {11ull, 12ull, 13ull}) {
    auto sys = system_1d(std::sqrt(2.0), 1.1, torus::random_kicks(seed, 1));
    auto f = [](const TorusVector& p) { return std::cos(2 * M_PI * p.x[0]); };
    double max_f = 1.0;
    auto x0 = TorusVector::of({stream_unit(seed, 99)});
    Window w{1, 300};
    auto prof = birkhoff_profile(sys, {x0}, f, w);
    for (double c : {0.2, 0.5, 0.8}) {
      auto nu = counting_function(sys, x0,
                                  [&](const TorusVector& p) { return f(p) >= c * max_f; }, w);
      CHECK(counting_inequality_margin(prof.i_n[0], nu, max_f, c) >= -1e-12);
    }
  }
}
