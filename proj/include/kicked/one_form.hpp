#pragma once

#include <complex>
#include <cstdint>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "kicked/mat2.hpp"
#include "kicked/uhp.hpp"

namespace kicked::hyperbolic {

// C^2 smoothstep 6t^5 - 15t^4 + 10t^3 on [0,1]
double smoothstep5(double t);
double smoothstep5_deriv(double t);

// Base tile form u(y) dx of the parabolic construction: u rises from 0 at
// y_on to 1 at y_full, so alpha0 = dx on the horoball {y >= y_full}.
struct HorocyclicCutoff {
  double y_on = 2.5;
  double y_full = 3.0;

  double u(double y) const;
  double du(double y) const;
  double pair(std::complex<double> z, std::complex<double> v) const { return u(z.imag()) * v.real(); }
  bool in_support(std::complex<double> z) const { return z.imag() >= y_on; }
};

// Base tile form phi(u) psi(s) du in Fermi coordinates around the imaginary
// axis (u = log|z| along the axis, s = asinh(x/y) signed distance from it).
// phi is a plateau bump with integral 1 over [u_lo, u_hi]; psi(0) = 1 and psi
// vanishes for |s| >= s_max, so int over the axis segment is exactly 1 and
// |d alpha0 / Omega| = |phi(u) psi'(s)| / cosh(s) is bounded.
struct AxisBump {
  double u_lo = 0.0, u_hi = 1.0;
  double edge = 0.25;   // phi ramp width at both ends
  double s_in = 0.05;   // psi == 1 for |s| <= s_in
  double s_max = 0.1;   // psi == 0 for |s| >= s_max
  double height = 1.0;  // plateau height, set to 1/(u_hi - u_lo - edge)

  double phi(double u) const;
  double psi(double s) const;
  double psi_deriv(double s) const;
  double pair(std::complex<double> z, std::complex<double> v) const;
  bool in_support(std::complex<double> z) const;
  double support_center_u() const { return 0.5 * (u_lo + u_hi); }
  // triangle bound along axis then transversally: R = half-length + s_max
  double support_radius() const { return 0.5 * (u_hi - u_lo) + s_max; }
};

// Euclidean region containing a tile's support: either a halfplane {y >= y_lo}
// or a disk (horoballs and hyperbolic balls are euclidean disks).
struct TileRegion {
  bool halfplane = false;
  double y_lo = 0.0;
  double cx = 0.0, cy = 0.0, r = 0.0;

  bool intersects_box(double x0, double x1, double ylo, double yhi, double pad = 0.0) const;
  double max_height() const;
};

// A G-invariant bounded one-form realized as a truncated periodization
// alpha = sum_j T_j^* alpha0 over an enumerated set of group elements.
struct BoundedOneForm {
  enum class BaseKind { horocyclic, axis_bump };
  BaseKind kind = BaseKind::horocyclic;
  HorocyclicCutoff cutoff;
  AxisBump bump;

  std::vector<Mat2> tiles;          // transforms T_j
  std::vector<TileRegion> supports; // region of z with T_j z in supp(alpha0)
  std::vector<int> word_lengths;    // enumeration depth per tile
  int max_word_length = 0;
  double bound_c = 0.0;             // certified sup |d alpha / Omega| (grid max)

  // set for the arithmetic (PSL(2,Z)-style) parabolic case: integer bottom
  // rows of the enumerated cosets, used by the exact truncation check
  bool arithmetic_cosets = false;
  std::set<std::pair<long long, long long>> coset_keys;

  double base_pair(std::complex<double> z, std::complex<double> v) const;
  bool base_in_support(std::complex<double> z) const;
  // pointwise value of the periodized form (for property tests; integration
  // works tile by tile instead)
  double pair(std::complex<double> z, std::complex<double> v) const;
};

struct IntegralResult {
  double value = 0.0;
  double err = 0.0;
  // set when the arc approaches regions the truncated enumeration may not
  // tile; the value returned is the truncated integral
  bool truncation_warning = false;
};

IntegralResult integrate_form(const BoundedOneForm& form, const Geodesic& arc, double tol = 1e-8);

// breadth-first reduced words over the generators and their inverses,
// deduplicated by projective matrix equality (1e-10 quantization)
struct WordElement {
  Mat2 g;
  int length = 0;
  std::string word;
};

std::vector<WordElement> enumerate_words(std::span<const Mat2> generators,
                                         std::span<const std::string> names, int max_length);

// Parabolic construction for a group normalized so that h: z -> z+1 generates
// the cusp at infinity (e.g. PSL(2,Z) = <T, S>): periodizes u(y) dx over the
// enumerated cosets <h>\G keyed by integer bottom rows.
BoundedOneForm parabolic_form(std::span<const Mat2> generators, std::span<const std::string> names,
                              int max_word_length, double y_on = 2.5, double y_full = 3.0);

// Quasi-morphism r_x(g) = int over ell(x, gx) of the form
struct QuasiMorphism {
  const BoundedOneForm* form = nullptr;
  UHPoint base{0.0, 3.0};
  double tol = 1e-8;

  IntegralResult r(const Mat2& g) const;
};

struct DefectSample {
  double max_defect = 0.0;
  int pairs = 0;
  int warnings = 0;
};

DefectSample sample_defects(const QuasiMorphism& qm, std::span<const WordElement> words,
                            int n_pairs, std::uint64_t seed, int max_word_length = 4);

struct RInfinityEstimate {
  double slope = 0.0;           // least squares over the top half of the range
  double endpoint_ratio = 0.0;  // r(g^{n_max}) / n_max
  double error_bar = 0.0;       // 2 * defect_bound / n_max
  int n_lo = 0, n_max = 0;
};

// r_values[i] = r(g^{i+1}); needs n_max >= 4
RInfinityEstimate r_infinity(std::span<const double> r_values, double defect_bound);

// Hyperbolic construction around a primitive hyperbolic g: everything is
// conjugated into the frame where g = diag(lambda, 1/lambda) and the axis is
// the imaginary axis; the bump sits on the segment I between a point and its
// g-image, midpoint-shrunk by 1/4, and the tube half-width is shrunk until
// every enumerated gamma outside <g> moves the tube off itself.
struct HyperbolicConstruction {
  BoundedOneForm form;      // std-frame form
  Mat2 frame;               // M with M g M^-1 = diag(lambda, 1/lambda)
  double lambda = 1.0;      // > 1
  double translation_length = 0.0;
  UHPoint base;             // std-frame basepoint on the axis
  double tube_half_width = 0.0;
  double separation_margin = 0.0;  // min dist(gamma I, I) - 2 * tube width
  bool time_reversal_detected = false;  // some enumerated gamma conjugates g to g^-1
  Mat2 time_reversal_witness;
  std::vector<WordElement> words;  // std-frame enumerated words (for sampling)

  Mat2 to_frame(const Mat2& g_original) const;  // M g M^-1
};

// power_closure bounds the explicit <g>-powers folded into the tile set so the
// axis is tiled deep enough for r(g^n) scans up to n ~ power_closure.
HyperbolicConstruction hyperbolic_form(const Mat2& g, std::span<const Mat2> generators,
                                       std::span<const std::string> names, int max_word_length,
                                       int power_closure = 32);

}  // namespace kicked::hyperbolic
