#include <pybind11/complex.h>
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <numbers>

#include "kicked/flat_torus.hpp"
#include "kicked/one_form.hpp"
#include "kicked/psl2.hpp"
#include "kicked/rng.hpp"
#include "kicked/sequential.hpp"
#include "kicked/sphere_top.hpp"
#include "kicked/tau_poly.hpp"
#include "kicked/torus.hpp"
#include "kicked/uhp.hpp"

namespace py = pybind11;
using namespace kicked;

namespace {

torus::TorusSchedule torus_kicks(const std::string& kind, std::uint64_t seed, std::size_t dim) {
  if (kind == "none") return torus::zero_kicks(dim);
  if (kind == "random") return torus::random_kicks(seed, dim);
  throw std::invalid_argument("kicks must be 'none' or 'random'");
}

std::vector<double> unipotent_c(std::uint64_t seed, std::size_t n, double range) {
  std::vector<double> c(n);
  for (std::size_t i = 0; i < n; ++i) c[i] = stream_range(seed, i, -range, range);
  return c;
}

}  // namespace

PYBIND11_MODULE(_kicked, m) {
  m.doc() = "kicked sequential dynamical systems: torus, PSL(2,R), hyperbolic plane, sphere";

  // ---- core ----------------------------------------------------------------
  m.def(
      "super_recurrence_thresholds",
      [](double alpha, double c, double gamma) {
        auto t = super_recurrence_thresholds(alpha, c, gamma);
        return py::dict(py::arg("r_lower") = t.r_lower, py::arg("mu_upper") = t.mu_upper,
                        py::arg("delta") = t.delta, py::arg("admissible_c") = t.admissible_c,
                        py::arg("gamma_small") = t.gamma_small);
      },
      py::arg("alpha"), py::arg("c"), py::arg("gamma"),
      "threshold formulas (alpha-c)/(1-c) and gamma/(c+gamma) with admissibility flags");

  // ---- torus ---------------------------------------------------------------
  m.def(
      "weyl_sum",
      [](std::vector<double> omega, double tau, std::vector<long long> h, std::uint64_t n,
         const std::string& kicks, std::uint64_t seed, std::vector<double> x0) {
        auto om = torus::FrequencyVector::generic(omega);
        if (x0.empty()) x0.assign(omega.size(), 0.0);
        torus::TorusKickedSystem sys{om, tau, torus_kicks(kicks, seed, omega.size())};
        auto r = torus::weyl_sum(h, sys, torus::TorusVector::of(x0), n);
        return py::dict(py::arg("re") = r.s.real(), py::arg("im") = r.s.imag(),
                        py::arg("abs") = r.abs);
      },
      py::arg("omega"), py::arg("tau"), py::arg("h"), py::arg("n"), py::arg("kicks") = "none",
      py::arg("seed") = 0, py::arg("x0") = std::vector<double>{});

  m.def(
      "mean_square_weyl",
      [](std::vector<double> omega, std::vector<long long> h, double a, double b, std::uint64_t n,
         std::size_t grid, const std::string& kicks, std::uint64_t seed, bool diagonal_only) {
        auto om = torus::FrequencyVector::generic(omega);
        return torus::mean_square_weyl(h, torus_kicks(kicks, seed, omega.size()), om, a, b, n,
                                       grid, diagonal_only);
      },
      py::arg("omega"), py::arg("h"), py::arg("a"), py::arg("b"), py::arg("n"),
      py::arg("grid") = 10000, py::arg("kicks") = "none", py::arg("seed") = 0,
      py::arg("diagonal_only") = false);

  m.def("discrepancy_1d", [](std::vector<double> pts) { return torus::discrepancy_1d(std::move(pts)); },
        py::arg("points"), "exact star discrepancy of points in [0,1)");

  m.def(
      "burago_scan",
      [](int tau, std::uint64_t n) {
        auto scan = torus::burago_scan(torus::FrequencyVector::generic({std::sqrt(2.0)}), tau, n);
        return py::dict(py::arg("hit_freq") = scan.hit_freq,
                        py::arg("expected_density") = scan.expected_density,
                        py::arg("interval_freq") = scan.interval_freq,
                        py::arg("dstar") = scan.dstar,
                        py::arg("equidistributed") = scan.equidistributed);
      },
      py::arg("tau"), py::arg("n") = 100000);

  // ---- psl2 ----------------------------------------------------------------
  m.def(
      "evolve_unipotent",
      [](std::vector<double> c, double tau) {
        auto s = psl2::entry_recursion(c, tau, c.size());
        return py::dict(py::arg("alpha") = s.alpha, py::arg("beta") = s.beta,
                        py::arg("gamma") = s.gamma, py::arg("delta") = s.delta);
      },
      py::arg("c"), py::arg("tau"), "entry recursions of the kicked horocycle evolution");

  m.def(
      "schrodinger_solve",
      [](std::vector<double> c, double tau, double q0, double q1, std::uint64_t k) {
        return psl2::schrodinger_solve(c, tau, q0, q1, k);
      },
      py::arg("c"), py::arg("tau"), py::arg("q0"), py::arg("q1"), py::arg("k"));

  m.def(
      "escape_detector",
      [](std::vector<double> c, double tau, std::uint64_t k_max, double threshold) {
        std::vector<psl2::Mat2> kicks;
        for (double v : c) kicks.push_back(psl2::lower_unipotent(v));
        auto rep = psl2::escape_detector(psl2::Psl2Schedule::cycled(kicks), tau, k_max, threshold);
        return py::dict(py::arg("escaped") = rep.escaped, py::arg("first_k") = rep.first_k,
                        py::arg("max_log_norm") = rep.max_log_norm, py::arg("argmax") = rep.argmax);
      },
      py::arg("c"), py::arg("tau"), py::arg("k_max") = 10000, py::arg("threshold") = 1e6);

  m.def(
      "trace_polynomial",
      [](std::vector<std::array<std::array<long long, 2>, 4>> kicks) {
        std::vector<psl2::RationalMat2> rk;
        for (const auto& k : kicks)
          rk.emplace_back(psl2::Rational(k[0][0], k[0][1]), psl2::Rational(k[1][0], k[1][1]),
                          psl2::Rational(k[2][0], k[2][1]), psl2::Rational(k[3][0], k[3][1]));
        auto p = psl2::trace_polynomial(rk);
        return py::dict(py::arg("coeffs") = p.coeff_strings(), py::arg("degree") = p.degree(),
                        py::arg("leading") = p.leading().str());
      },
      py::arg("kicks"),
      "exact trace polynomial; kicks as 4 (num, den) pairs per matrix, det must be 1");

  m.def(
      "interval_cover",
      [](double tau, std::uint64_t k_max) {
        psl2::IntervalCover cover(k_max);
        return cover.covering(tau);
      },
      py::arg("tau"), py::arg("k_max") = 100000,
      "indices k <= k_max with tau in [r_k, r_k + 1/k]");

  m.def(
      "gauge_growth_slope",
      [](std::vector<double> c, double tau, std::uint64_t k_max) {
        std::vector<psl2::Mat2> kicks;
        for (double v : c) kicks.push_back(psl2::lower_unipotent(v));
        return psl2::gauge_growth(psl2::Psl2Schedule::cycled(kicks), psl2::horocycle(tau), k_max)
            .slope_lower;
      },
      py::arg("c"), py::arg("tau"), py::arg("k_max") = 1000);

  // ---- hyperbolic ----------------------------------------------------------
  m.def(
      "qm_parabolic",
      [](int w, int n_max, int pairs, std::uint64_t seed, double tol) {
        std::vector<psl2::Mat2> gens{psl2::horocycle(1.0), psl2::Mat2{0.0, -1.0, 1.0, 0.0}};
        std::vector<std::string> names{"T", "S"};
        auto form = hyperbolic::parabolic_form(gens, names, w);
        hyperbolic::QuasiMorphism qm{&form, {0.0, 3.0}, tol};
        std::vector<double> r_vals;
        for (int n = 1; n <= n_max; ++n)
          r_vals.push_back(qm.r(psl2::horocycle(static_cast<double>(n))).value);
        auto words = hyperbolic::enumerate_words(gens, names, w);
        auto defects = hyperbolic::sample_defects(qm, words, pairs, seed, 4);
        auto est = hyperbolic::r_infinity(r_vals, std::numbers::pi * form.bound_c);
        return py::dict(py::arg("C") = form.bound_c, py::arg("r_values") = r_vals,
                        py::arg("defect_max") = defects.max_defect,
                        py::arg("r_infinity") = est.slope,
                        py::arg("error_bar") = est.error_bar);
      },
      py::arg("w") = 8, py::arg("n_max") = 30, py::arg("pairs") = 200, py::arg("seed") = 0,
      py::arg("tol") = 1e-8);

  m.def(
      "qm_hyperbolic",
      [](const std::string& group, int w, int n_max, std::uint64_t seed, double tol) {
        psl2::Mat2 a{3.0, 0.0, 0.0, 1.0 / 3.0};
        std::vector<psl2::Mat2> gens;
        std::vector<std::string> names;
        if (group == "schottky") {
          psl2::Mat2 mm{2.0, 1.0, 1.0, 1.0};
          gens = {a, mm * a * mm.inverse()};
          names = {"A", "B"};
        } else {
          gens = {a, psl2::Mat2{0.0, -1.0, 1.0, 0.0}};
          names = {"A", "J"};
        }
        auto hc = hyperbolic::hyperbolic_form(a, gens, names, w, n_max + 2);
        hyperbolic::QuasiMorphism qm{&hc.form, hc.base, tol};
        std::vector<double> r_vals;
        psl2::Mat2 gn = psl2::Mat2::id();
        psl2::Mat2 gs = hc.to_frame(a);
        for (int n = 1; n <= n_max; ++n) {
          gn = gn * gs;
          r_vals.push_back(qm.r(gn).value);
        }
        auto est = hyperbolic::r_infinity(r_vals, std::numbers::pi * hc.form.bound_c);
        (void)seed;
        return py::dict(py::arg("C") = hc.form.bound_c, py::arg("r_values") = r_vals,
                        py::arg("r_infinity") = est.slope,
                        py::arg("time_reversal_detected") = hc.time_reversal_detected,
                        py::arg("separation_margin") = hc.separation_margin);
      },
      py::arg("group") = "schottky", py::arg("w") = 6, py::arg("n_max") = 12, py::arg("seed") = 0,
      py::arg("tol") = 1e-8);

  // ---- hamiltonian ---------------------------------------------------------
  m.def("measure_of_ac", &hamiltonian::measure_of_ac, py::arg("c"),
        "analytic measure of {H > c max H} on the kicked-top sphere");

  m.def(
      "top_orbit_z_drift",
      [](double tau, std::uint64_t n, std::array<double, 3> p0) {
        hamiltonian::SphereKickedSystem sys{tau, hamiltonian::identity_kicks()};
        hamiltonian::Vec3 p = hamiltonian::Vec3{p0[0], p0[1], p0[2]}.normalized();
        double drift = 0.0;
        scan_orbit(sys, p, n, [&](std::uint64_t, const hamiltonian::Vec3& q) {
          drift = std::max(drift, std::abs(q.z - p.z));
        });
        return drift;
      },
      py::arg("tau"), py::arg("n") = 100000,
      py::arg("p0") = std::array<double, 3>{0.6, -0.3, 0.1});

  m.def(
      "time_reversal_check",
      [](const std::string& flow, const std::string& theta) {
        hamiltonian::SphereFlow f = flow == "constant" ? hamiltonian::constant_rotation_flow
                                                       : hamiltonian::SphereFlow(hamiltonian::top_flow);
        hamiltonian::Rot3 th = theta == "theta-x"          ? hamiltonian::Rot3::theta_x()
                               : theta == "reflect-xy-plane" ? hamiltonian::Rot3::reflect_xy_plane()
                                                             : hamiltonian::Rot3::about_z(1.0);
        std::vector<double> ts{0.1, 0.7, 1.3, 2.9};
        std::vector<hamiltonian::Vec3> pts;
        for (std::uint64_t i = 0; i < 128; ++i) pts.push_back(hamiltonian::sample_sphere(4, i));
        double dev = hamiltonian::time_reversal_deviation(f, th, ts, pts);
        return py::dict(py::arg("max_deviation") = dev, py::arg("pass") = dev <= 1e-9);
      },
      py::arg("flow") = "top", py::arg("theta") = "reflect-xy-plane");

  m.def(
      "flat_birkhoff",
      [](double tau, std::uint64_t n) {
        hamiltonian::FlatTorusSystem sys{
            tau, hamiltonian::randomizing_schedule({std::sqrt(2.0), std::sqrt(3.0)})};
        auto prof = birkhoff_profile(
            sys, {hamiltonian::T2{0.2, 0.6}},
            [](const hamiltonian::T2& p) { return std::cos(2.0 * std::numbers::pi * p.y); },
            Window{n, n});
        return prof.i_n[0][0];
      },
      py::arg("tau"), py::arg("n") = 100000,
      "Birkhoff average of cos(2 pi y) under the randomizing schedule");

  m.def(
      "nonmixing_witness",
      [](double tau, double delta, std::uint64_t samples, std::uint64_t seed) {
        auto rep = hamiltonian::nonmixing_witness(hamiltonian::two_periodic_reversal(), tau, delta,
                                                  samples, seed);
        return py::dict(py::arg("corr_even") = rep.corr_even, py::arg("corr_odd") = rep.corr_odd,
                        py::arg("mixing_limit") = rep.mixing_limit,
                        py::arg("mc_sigma") = rep.mc_sigma, py::arg("separated") = rep.separated);
      },
      py::arg("tau"), py::arg("delta") = 0.05, py::arg("samples") = 1000000, py::arg("seed") = 0);

  m.attr("__version__") = "0.1.0";
}
