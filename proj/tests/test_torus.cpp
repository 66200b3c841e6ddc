#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>

#include "kicked/rng.hpp"
#include "kicked/sequential.hpp"
#include "kicked/torus.hpp"

using namespace kicked;
using namespace kicked::torus;

TEST_CASE("mod-1 reduction is idempotent and lands in [0,1)") {
  for (double v : {-2.75, -1.0, -1e-18, 0.0, 0.4, 1.0, 7.3}) {
    double r = reduce(v);
    CHECK(r >= 0.0);
    CHECK(r < 1.0);
    CHECK(reduce(r) == r);
  }
}

TEST_CASE("torus_evolution_point closed forms") {
  auto om1 = FrequencyVector::generic({1.0});
  SUBCASE("k = 0 returns x0") {
    auto p = torus_evolution_point(om1, 0.7, zero_kicks(1), 0, TorusVector::of({0.25}));
    CHECK(p.x[0] == doctest::Approx(0.25));
  }
  SUBCASE("integer shifts vanish") {
    auto p = torus_evolution_point(om1, 1.0, zero_kicks(1), 7, TorusVector::of({0.0}));
    CHECK(p.x[0] == doctest::Approx(0.0));
  }
  SUBCASE("quarter kicks telescope to an integer") {
    auto om0 = FrequencyVector::generic({0.0});
    auto quarters = TorusSchedule::constant({0.25});
    auto p = torus_evolution_point(om0, 1.0, quarters, 4, TorusVector::of({0.0}));
    CHECK(p.x[0] == doctest::Approx(0.0));
  }
}

TEST_CASE("closed form agrees with step-by-step evolution") {
  auto om = FrequencyVector::generic({std::sqrt(2.0), std::sqrt(3.0)});
  TorusKickedSystem sys{om, 1.3, random_kicks(4, 2)};
  auto x0 = TorusVector::of({0.1, 0.9});
  auto orbit = evolve(sys, x0, 500);
  for (std::uint64_t k : {1ull, 17ull, 250ull, 500ull}) {
    auto direct = torus_evolution_point(om, 1.3, sys.kicks, k, x0);
    for (int j = 0; j < 2; ++j) {
      double d = std::abs(direct.x[j] - orbit.points[k].x[j]);
      CHECK(std::min(d, 1.0 - d) < 1e-10);
    }
  }
}

TEST_CASE("weyl_sum: rational lock-in gives S = 1") {
  TorusKickedSystem sys{FrequencyVector::generic({1.0}), 1.0, zero_kicks(1)};
  auto r = weyl_sum(std::vector<long long>{1}, sys, TorusVector::of({0.0}), 50);
  CHECK(r.s.real() == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(r.s.imag() == doctest::Approx(0.0));
}

TEST_CASE("weyl_sum: half-period alternation cancels at even N") {
  // tau = 1/(2 sqrt 2): phases alternate sign, so even-N sums vanish
  double om = std::sqrt(2.0);
  TorusKickedSystem sys{FrequencyVector::generic({om}), 1.0 / (2.0 * om), zero_kicks(1)};
  auto r = weyl_sum(std::vector<long long>{1}, sys, TorusVector::of({0.0}), 100);
  CHECK(r.abs < 1e-10);
}

TEST_CASE("weyl_sum: random kicks at N = 1e4 are small") {
  TorusKickedSystem sys{FrequencyVector::generic({std::sqrt(2.0)}), 1.3, random_kicks(42, 1)};
  auto r = weyl_sum(std::vector<long long>{1}, sys, TorusVector::of({0.0}), 10000);
  CHECK(r.abs < 0.05);
}

TEST_CASE("weyl_sum rejects h = 0 and modulus never exceeds 1") {
  TorusKickedSystem sys{FrequencyVector::generic({std::sqrt(2.0)}), 0.8, random_kicks(9, 1)};
  CHECK_THROWS_AS(weyl_sum(std::vector<long long>{0}, sys, TorusVector::of({0.0}), 10),
                  std::invalid_argument);
  for (std::uint64_t n : {1ull, 3ull, 10ull, 57ull}) {
    auto r = weyl_sum(std::vector<long long>{2}, sys, TorusVector::of({0.3}), n);
    CHECK(r.abs <= 1.0 + 1e-12);
  }
}

TEST_CASE("|S| is independent of the base point in this arena") {
  TorusKickedSystem sys{FrequencyVector::generic({std::sqrt(2.0)}), 1.1, random_kicks(13, 1)};
  auto a = weyl_sum(std::vector<long long>{1}, sys, TorusVector::of({0.0}), 300);
  auto b = weyl_sum(std::vector<long long>{1}, sys, TorusVector::of({0.77}), 300);
  CHECK(a.abs == doctest::Approx(b.abs).epsilon(1e-10));
}

TEST_CASE("phase table matches the direct sum") {
  auto om = FrequencyVector::generic({std::sqrt(2.0)});
  auto kicks = random_kicks(21, 1);
  TorusVector x0 = TorusVector::of({0.2});
  WeylPhaseTable table(std::vector<long long>{1}, om, kicks, x0, 200);
  for (double tau : {1.0, 1.37, 1.93}) {
    TorusKickedSystem sys{om, tau, kicks};
    auto direct = weyl_sum(std::vector<long long>{1}, sys, x0, 200);
    auto fast = table.value(tau);
    CHECK(std::abs(fast - direct.s) < 1e-10);
  }
}

TEST_CASE("mean square: N = 1 with zero kicks integrates to b - a") {
  auto om = FrequencyVector::generic({std::sqrt(2.0)});
  double v = mean_square_weyl(std::vector<long long>{1}, zero_kicks(1), om, 1.0, 2.0, 1, 100);
  CHECK(v == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("mean square: diagonal-only term is (b-a)/N") {
  auto om = FrequencyVector::generic({std::sqrt(2.0)});
  for (std::uint64_t n : {10ull, 100ull}) {
    double v =
        mean_square_weyl(std::vector<long long>{1}, random_kicks(42, 1), om, 1.0, 2.0, n, 200, true);
    CHECK(v == doctest::Approx(1.0 / static_cast<double>(n)).epsilon(1e-10));
  }
}

TEST_CASE("mean square matches a brute-force quadrature oracle") {
  auto om = FrequencyVector::generic({std::sqrt(2.0)});
  auto kicks = random_kicks(3, 1);
  const std::uint64_t n = 40;
  const std::size_t grid = 64;
  // oracle: midpoint rule with weyl_sum evaluated independently per node
  double acc = 0.0;
  double a = 1.0, b = 2.0, step = (b - a) / grid;
  for (std::size_t j = 0; j < grid; ++j) {
    double tau = a + (j + 0.5) * step;
    TorusKickedSystem sys{om, tau, kicks};
    auto s = weyl_sum(std::vector<long long>{1}, sys, TorusVector::of({0.0}), n);
    acc += s.abs * s.abs;
  }
  double oracle = acc * step;
  double fast = mean_square_weyl(std::vector<long long>{1}, kicks, om, a, b, n, grid);
  CHECK(fast == doctest::Approx(oracle).epsilon(1e-9));
}

TEST_CASE("mean square: zero kicks match the analytic geometric-series integrand") {
  // for beta = 0, |S_N(tau)|^2 = sin^2(pi N theta) / (N^2 sin^2(pi theta)),
  // theta = tau h.omega; quadrature of that closed form on the same midpoint
  // grid is an independent route to the same number
  auto om = FrequencyVector::generic({std::sqrt(2.0)});
  const std::uint64_t n = 64;
  const std::size_t grid = 512;
  double a = 1.0, b = 2.0, step = (b - a) / grid;
  double oracle = 0.0;
  for (std::size_t j = 0; j < grid; ++j) {
    double theta = (a + (j + 0.5) * step) * std::sqrt(2.0);
    double s = std::sin(M_PI * theta);
    double num = std::sin(M_PI * static_cast<double>(n) * theta);
    oracle += (num * num) / (static_cast<double>(n) * static_cast<double>(n) * s * s);
  }
  oracle *= step;
  double fast = mean_square_weyl(std::vector<long long>{1}, zero_kicks(1), om, a, b, n, grid);
  CHECK(fast == doctest::Approx(oracle).epsilon(1e-10));
}

TEST_CASE("mean square refuses h orthogonal to rational-certified omega") {
  auto om = FrequencyVector::rational({1, 2}, 3);
  std::vector<long long> h{2, -1};
  CHECK(om.orthogonal_to(h));
  CHECK_THROWS_AS(mean_square_weyl(h, zero_kicks(2), om, 0.0, 1.0, 10, 10), std::invalid_argument);
}

TEST_CASE("star discrepancy: exact values and brute-force property") {
  SUBCASE("equispaced points give 1/N") {
    std::vector<double> pts;
    for (int k = 0; k < 50; ++k) pts.push_back(k / 50.0);
    CHECK(discrepancy_1d(pts) == doctest::Approx(1.0 / 50.0));
  }
  SUBCASE("all points at 0 give 1") {
    CHECK(discrepancy_1d(std::vector<double>(20, 0.0)) == doctest::Approx(1.0));
  }
  SUBCASE("golden rotation is low-discrepancy") {
    std::vector<double> pts;
    double phi = (std::sqrt(5.0) - 1.0) / 2.0;
    for (int k = 1; k <= 1000; ++k) pts.push_back(reduce(k * phi));
    CHECK(discrepancy_1d(pts) < 0.01);
  }
  SUBCASE("matches the critical-point oracle on random sets") {
    for (std::uint64_t seed : {1ull, 2ull, 3ull}) {
      std::vector<double> pts;
      for (int k = 0; k < 37; ++k) pts.push_back(stream_unit(seed, k));
      // oracle: D* = sup_t |F_N(t) - t| is attained at sorted points from
      // either side
      std::vector<double> sorted = pts;
      std::sort(sorted.begin(), sorted.end());
      double oracle = 0.0;
      for (std::size_t i = 0; i < sorted.size(); ++i) {
        double fn_before = static_cast<double>(i) / sorted.size();
        double fn_at = static_cast<double>(i + 1) / sorted.size();
        oracle = std::max({oracle, std::abs(fn_before - sorted[i]), std::abs(fn_at - sorted[i])});
      }
      CHECK(discrepancy_1d(pts) == doctest::Approx(oracle).epsilon(1e-14));
    }
  }
}

TEST_CASE("valuation u: densities and examples") {
  CHECK(valuation_u(1) == 1);
  CHECK(valuation_u(2) == 2);
  CHECK(valuation_u(4) == 3);
  CHECK(valuation_u(6) == 2);
  std::uint64_t n = 100000, c1 = 0, c2 = 0, c3 = 0;
  for (std::uint64_t k = 1; k <= n; ++k) {
    int u = valuation_u(k);
    c1 += u == 1;
    c2 += u == 2;
    c3 += u == 3;
  }
  CHECK(static_cast<double>(c1) / n == doctest::Approx(0.5).epsilon(1e-4));
  CHECK(static_cast<double>(c2) / n == doctest::Approx(0.25).epsilon(1e-4));
  CHECK(static_cast<double>(c3) / n == doctest::Approx(0.125).epsilon(1e-3));
}

TEST_CASE("burago evolution hits 0 exactly when u(k) = tau") {
  auto om = FrequencyVector::generic({std::sqrt(2.0)});
  TorusKickedSystem sys{om, 2.0, burago_kicks(om)};
  auto orbit = evolve(sys, TorusVector::of({0.0}), 16);
  // u(2) = 2 = tau: f^(2)(2) = 0
  double v = orbit.points[2].x[0];
  CHECK(std::min(v, 1.0 - v) < 1e-11);
  // k = 3 has u = 1 != tau: the point is 3(2-1)omega mod 1
  double expect = reduce(3.0 * std::sqrt(2.0));
  CHECK(orbit.points[3].x[0] == doctest::Approx(expect).epsilon(1e-9));
}

TEST_CASE("burago scan: hit frequencies match the valuation densities") {
  auto om = FrequencyVector::generic({std::sqrt(2.0)});
  auto scan1 = burago_scan(om, 1, 100000);
  CHECK(scan1.hit_freq == doctest::Approx(0.5).epsilon(1e-3));
  CHECK(scan1.interval_freq >= 0.5 - 1e-3);  // 10x the interval half-width
  CHECK_FALSE(scan1.equidistributed);
  auto scan3 = burago_scan(om, 3, 100000);
  CHECK(scan3.hit_freq == doctest::Approx(0.125).epsilon(1e-2));
  CHECK_FALSE(scan3.equidistributed);
}
