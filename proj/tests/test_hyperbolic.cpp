#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "kicked/one_form.hpp"
#include "kicked/psl2.hpp"
#include "kicked/uhp.hpp"

using namespace kicked;
using namespace kicked::hyperbolic;
using psl2::Mat2;

namespace {

const std::vector<Mat2> kPsl2zGens{psl2::horocycle(1.0), Mat2{0.0, -1.0, 1.0, 0.0}};
const std::vector<std::string> kPsl2zNames{"T", "S"};

// ping-pong Schottky pair: A = diag(3,1/3) (axis {0, inf}),
// B = M A M^-1 with M = (2,1;1,1) (axis {1, 2})
const Mat2 kSchottkyA{3.0, 0.0, 0.0, 1.0 / 3.0};
const Mat2 kSchottkyM{2.0, 1.0, 1.0, 1.0};
const Mat2 kSchottkyB = kSchottkyM * kSchottkyA * kSchottkyM.inverse();
const std::vector<std::string> kFreeNames{"A", "B"};

}  // namespace

TEST_CASE("mobius action on the upper half-plane") {
  UHPoint p{0.0, 3.0};
  auto q = mobius_apply(Mat2::id(), p);
  CHECK(q.x == doctest::Approx(0.0));
  CHECK(q.y == doctest::Approx(3.0));
  q = mobius_apply(psl2::horocycle(1.0), p);
  CHECK(q.x == doctest::Approx(1.0));
  CHECK(q.y == doctest::Approx(3.0));
  q = mobius_apply(Mat2{0.0, -1.0, 1.0, 0.0}, UHPoint{0.0, 1.0});  // -1/i = i
  CHECK(q.x == doctest::Approx(0.0));
  CHECK(q.y == doctest::Approx(1.0));
  // Im(gz) = Im(z)/|cz+d|^2
  Mat2 g{2.0, 1.0, 1.0, 1.0};
  std::complex<double> z{0.7, 1.9};
  double expected = z.imag() / std::norm(g.c * z + g.d);
  CHECK(mobius_apply(g, z).imag() == doctest::Approx(expected).epsilon(1e-14));
}

TEST_CASE("geodesics: vertical, semicircle, endpoint reproduction") {
  auto v = geodesic_between({0.0, 1.0}, {0.0, 2.0});
  CHECK(v.kind == Geodesic::Kind::vertical);
  CHECK(std::abs(v.point(0.0) - std::complex<double>(0.0, 1.0)) < 1e-12);
  CHECK(std::abs(v.point(1.0) - std::complex<double>(0.0, 2.0)) < 1e-12);

  auto s = geodesic_between({0.0, 3.0}, {1.0, 3.0});
  CHECK(s.kind == Geodesic::Kind::semicircle);
  CHECK(s.center == doctest::Approx(0.5));
  CHECK(s.radius == doctest::Approx(std::sqrt(37.0) / 2.0));
  CHECK(s.min_height() == doctest::Approx(3.0));
  CHECK(s.max_height() == doctest::Approx(std::sqrt(37.0) / 2.0));
  CHECK(std::abs(s.point(0.0) - std::complex<double>(0.0, 3.0)) < 1e-12);
  CHECK(std::abs(s.point(1.0) - std::complex<double>(1.0, 3.0)) < 1e-12);

  CHECK_THROWS_AS(geodesic_between({0.2, 1.0}, {0.2, 1.0}), std::invalid_argument);
}

TEST_CASE("hyperbolic distance basics") {
  CHECK(hyp_dist({0.0, 1.0}, {0.0, 2.0}) == doctest::Approx(std::log(2.0)));
  CHECK(hyp_dist({0.3, 0.7}, {0.3, 0.7}) == doctest::Approx(0.0));
  // invariance under a Mobius map
  Mat2 g{1.0, 2.0, 0.5, 2.0};
  UHPoint a{0.1, 1.3}, b{-0.4, 2.2};
  CHECK(hyp_dist(mobius_apply(g, a), mobius_apply(g, b)) ==
        doctest::Approx(hyp_dist(a, b)).epsilon(1e-12));
}

TEST_CASE("parabolic form: certified bound and exact r(h^n) = n") {
  auto form = parabolic_form(kPsl2zGens, kPsl2zNames, 6);
  CHECK(form.arithmetic_cosets);
  // |d alpha0/Omega| = y^2 u'(y); quintic smoothstep peaks at 3.75, near y = 2.79
  CHECK(form.bound_c > 20.0);
  CHECK(form.bound_c < 30.0);

  QuasiMorphism qm{&form, {0.0, 3.0}, 1e-8};
  for (int n = 1; n <= 8; ++n) {
    auto r = qm.r(psl2::horocycle(static_cast<double>(n)));
    CHECK(std::abs(r.value - n) < 1e-6);
    CHECK_FALSE(r.truncation_warning);
  }
}

TEST_CASE("parabolic form: arcs outside every tile integrate to zero") {
  auto form = parabolic_form(kPsl2zGens, kPsl2zNames, 5);
  // y in (0.45, 0.49) at x = 1/2: above the Ford disk at 1/2 (height 0.1),
  // below the cusp horoball at 2.5
  auto arc = geodesic_between({0.5, 0.45}, {0.5, 0.49});
  auto r = integrate_form(form, arc, 1e-9);
  CHECK(r.value == doctest::Approx(0.0));
  CHECK_FALSE(r.truncation_warning);
}

TEST_CASE("orientation reversal negates the integral") {
  auto form = parabolic_form(kPsl2zGens, kPsl2zNames, 5);
  auto arc = geodesic_between({0.0, 3.0}, {2.3, 3.4});
  auto fwd = integrate_form(form, arc, 1e-10);
  auto bwd = integrate_form(form, arc.reversed(), 1e-10);
  CHECK(fwd.value == doctest::Approx(-bwd.value).epsilon(1e-9));
}

TEST_CASE("defect of the parabolic quasi-morphism stays under pi C") {
  auto form = parabolic_form(kPsl2zGens, kPsl2zNames, 6);
  QuasiMorphism qm{&form, {0.0, 3.0}, 1e-8};
  auto words = enumerate_words(kPsl2zGens, kPsl2zNames, 6);
  auto sample = sample_defects(qm, words, 50, 17, 3);
  CHECK(sample.max_defect <= std::numbers::pi * form.bound_c + 3e-8);
  CHECK(sample.max_defect > 0.0);
}

TEST_CASE("base-point shift is bounded by 2 pi C") {
  auto form = parabolic_form(kPsl2zGens, kPsl2zNames, 6);
  auto words = enumerate_words(kPsl2zGens, kPsl2zNames, 4);
  double bound = 2.0 * std::numbers::pi * form.bound_c + 1e-6;
  int checked = 0;
  for (std::size_t i = 0; i < words.size() && checked < 20; i += 7) {
    if (words[i].length < 2) continue;
    QuasiMorphism qx{&form, {0.0, 3.0}, 1e-8};
    QuasiMorphism qy{&form, {0.35, 4.2}, 1e-8};
    CHECK(std::abs(qx.r(words[i].g).value - qy.r(words[i].g).value) <= bound);
    ++checked;
  }
  CHECK(checked > 0);
}

TEST_CASE("tiles of distinct cosets are disjoint on support samples") {
  auto form = parabolic_form(kPsl2zGens, kPsl2zNames, 5);
  // sample points of tile j's support: pull back base-support samples
  int multi = 0, tested = 0;
  for (std::size_t j = 0; j < std::min<std::size_t>(form.tiles.size(), 40); ++j) {
    Mat2 inv = form.tiles[j].inverse();
    for (double xx : {0.1, 0.5, 0.9}) {
      for (double yy : {2.6, 3.5, 7.0}) {
        std::complex<double> z = mobius_apply(inv, std::complex<double>(xx, yy));
        int owners = 0;
        for (const Mat2& t : form.tiles)
          if (form.base_in_support(mobius_apply(t, z))) ++owners;
        ++tested;
        if (owners > 1) ++multi;
      }
    }
  }
  CHECK(tested > 0);
  CHECK(multi == 0);
}

TEST_CASE("truncation warning fires near un-enumerated cusps") {
  auto form = parabolic_form(kPsl2zGens, kPsl2zNames, 4);
  // min height 1e-3 requires cosets with c up to ~20 near x ~ 0.41: far
  // beyond a word-length-4 enumeration
  auto arc = geodesic_between({0.41, 1e-3}, {0.43, 1e-3});
  auto r = integrate_form(form, arc, 1e-8);
  CHECK(r.truncation_warning);
}

TEST_CASE("r_infinity estimator") {
  SUBCASE("exact linear data") {
    std::vector<double> vals;
    for (int n = 1; n <= 20; ++n) vals.push_back(3.0 * n);
    auto est = r_infinity(vals, 1.0);
    CHECK(est.slope == doctest::Approx(3.0).epsilon(1e-12));
    CHECK(est.endpoint_ratio == doctest::Approx(3.0));
    CHECK(est.error_bar == doctest::Approx(0.1));
  }
  SUBCASE("bounded sinusoidal noise keeps the endpoint ratio within 2C/n") {
    double c = 0.7;
    std::vector<double> vals;
    for (int n = 1; n <= 30; ++n) vals.push_back(n + c * std::sin(1.7 * n));
    auto est = r_infinity(vals, c);
    CHECK(std::abs(est.endpoint_ratio - 1.0) <= 2.0 * c / 30.0);
    CHECK(std::abs(est.slope - 1.0) <= 2.0 * c / 30.0 + 0.05);
  }
  SUBCASE("too few powers is an input error") {
    std::vector<double> vals{1.0, 2.0, 3.0};
    CHECK_THROWS_AS(r_infinity(vals, 1.0), std::invalid_argument);
  }
}

TEST_CASE("hyperbolic construction on the Schottky pair") {
  std::vector<Mat2> gens{kSchottkyA, kSchottkyB};
  auto hc = hyperbolic_form(kSchottkyA, gens, kFreeNames, 5, 10);
  CHECK(hc.lambda == doctest::Approx(3.0).epsilon(1e-9));
  CHECK(hc.translation_length == doctest::Approx(2.0 * std::log(3.0)).epsilon(1e-9));
  CHECK_FALSE(hc.time_reversal_detected);
  CHECK(hc.separation_margin > 0.0);
  CHECK(hc.form.bound_c > 0.0);

  QuasiMorphism qm{&hc.form, hc.base, 1e-8};
  std::vector<double> r_vals;
  for (int n = 1; n <= 8; ++n) {
    auto r = qm.r(hc.to_frame(kSchottkyA));  // g^n via repeated powers below
    (void)r;
    Mat2 gn = Mat2::id();
    for (int i = 0; i < n; ++i) gn = gn * hc.to_frame(kSchottkyA);
    auto rn = qm.r(gn);
    r_vals.push_back(rn.value);
    // int over I of alpha0 is 1 by construction: r(g^n) = n
    CHECK(rn.value == doctest::Approx(static_cast<double>(n)).epsilon(1e-6));
  }
  auto est = r_infinity(r_vals, std::numbers::pi * hc.form.bound_c);
  CHECK(est.slope == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("hyperbolic construction rejects non-hyperbolic g") {
  std::vector<Mat2> gens{kSchottkyA, kSchottkyB};
  CHECK_THROWS_AS(hyperbolic_form(psl2::horocycle(1.0), gens, kFreeNames, 3, 4),
                  std::invalid_argument);
}

TEST_CASE("dihedral group: time-reversing symmetry forces r_infinity to zero") {
  Mat2 inv_j{0.0, -1.0, 1.0, 0.0};
  // J A J^-1 = A^-1: A is conjugate to its inverse in <A, J>
  CHECK((inv_j * kSchottkyA * inv_j.inverse()).approx_equal(kSchottkyA.inverse(), 1e-12));
  std::vector<Mat2> gens{kSchottkyA, inv_j};
  std::vector<std::string> names{"A", "J"};
  auto hc = hyperbolic_form(kSchottkyA, gens, names, 5, 14);
  CHECK(hc.time_reversal_detected);
  // the reported witness conjugates g to g^-1 (it need not be J itself)
  Mat2 w = hc.time_reversal_witness;
  CHECK((w * kSchottkyA * w.inverse()).approx_equal(kSchottkyA.inverse(), 1e-9));

  QuasiMorphism qm{&hc.form, hc.base, 1e-8};
  std::vector<double> r_vals;
  Mat2 gn = Mat2::id();
  const int n_max = 12;
  for (int n = 1; n <= n_max; ++n) {
    gn = gn * hc.to_frame(kSchottkyA);
    r_vals.push_back(qm.r(gn).value);
  }
  double defect_bound = std::numbers::pi * hc.form.bound_c;
  auto est = r_infinity(r_vals, defect_bound);
  // homogenization kills symmetric elements
  CHECK(std::abs(est.slope) <= 2.0 * defect_bound / n_max);
  CHECK(std::abs(est.slope) < 0.05);
}

TEST_CASE("axis bump form: arcs outside the support integrate to zero") {
  std::vector<Mat2> gens{kSchottkyA, kSchottkyB};
  auto hc = hyperbolic_form(kSchottkyA, gens, kFreeNames, 4, 6);
  auto arc = geodesic_between({40.0, 0.5}, {41.0, 0.5});  // far from all tiles
  auto r = integrate_form(hc.form, arc, 1e-9);
  CHECK(r.value == doctest::Approx(0.0));
}
