#pragma once

#include <cmath>
#include <stdexcept>
#include <string>

namespace kicked::psl2 {

// Real 2x2 matrix kept on det = 1 and stored with the projective sign
// convention (a > 0) or (a = 0 and b > 0): an element of PSL(2,R).
struct Mat2 {
  double a = 1.0, b = 0.0, c = 0.0, d = 1.0;

  Mat2() = default;
  Mat2(double a_, double b_, double c_, double d_, bool renorm = true)
      : a(a_), b(b_), c(c_), d(d_) {
    if (renorm) normalize();
  }

  static Mat2 id() { return {}; }

  double det() const { return a * d - b * c; }
  double trace() const { return a + d; }
  // Euclidean norm sqrt(tr g g^T); >= sqrt(2) on det-1 matrices
  double norm() const { return std::sqrt(a * a + b * b + c * c + d * d); }
  Mat2 inverse() const { return {d, -b, -c, a}; }
  Mat2 transpose() const { return {a, c, b, d}; }

  void normalize() {
    // the floating-point det of a product carries noise ~ eps * ||g||^2; at
    // large norms 1 is below that noise floor, so neither the positivity
    // check nor a sqrt(det) correction is meaningful there
    double n2 = a * a + b * b + c * c + d * d;
    double noise = 32.0 * 2.220446049250313e-16 * n2;
    double dt = det();
    if (noise < 0.5 && !(dt > 0.0))
      throw std::invalid_argument("Mat2: determinant must be positive, got " + std::to_string(dt));
    if (dt > 0.0 && std::isfinite(dt) && std::abs(dt - 1.0) > std::max(1e-12, noise)) {
      double s = std::sqrt(dt);
      a /= s; b /= s; c /= s; d /= s;
    }
    if (a < 0.0 || (a == 0.0 && b < 0.0)) {
      a = -a; b = -b; c = -c; d = -d;
    }
  }

  friend Mat2 operator*(const Mat2& l, const Mat2& r) {
    return {l.a * r.a + l.b * r.c, l.a * r.b + l.b * r.d,
            l.c * r.a + l.d * r.c, l.c * r.b + l.d * r.d};
  }

  // equality in PSL(2,R): representatives agree up to sign
  bool approx_equal(const Mat2& o, double tol = 1e-9) const {
    auto close = [tol](double u, double v) { return std::abs(u - v) <= tol; };
    bool plus = close(a, o.a) && close(b, o.b) && close(c, o.c) && close(d, o.d);
    bool minus = close(a, -o.a) && close(b, -o.b) && close(c, -o.c) && close(d, -o.d);
    return plus || minus;
  }
};

inline Mat2 horocycle(double t) { return {1.0, t, 0.0, 1.0, false}; }

inline Mat2 diagonal(double lambda) {
  if (!(lambda != 0.0)) throw std::invalid_argument("diagonal: lambda must be nonzero");
  return {lambda, 0.0, 0.0, 1.0 / lambda};
}

inline Mat2 rotation(double theta) {  // elliptic fixing i, angle 2*theta at i
  return {std::cos(theta), -std::sin(theta), std::sin(theta), std::cos(theta)};
}

inline Mat2 lower_unipotent(double c) { return {1.0, 0.0, c, 1.0, false}; }

inline double matrix_norm(const Mat2& g) { return g.norm(); }

enum class ElementClass { elliptic, parabolic, hyperbolic, identity };

struct Classification {
  ElementClass cls;
  // PSL(2,R)-level statement only: hyperbolic elements and the identity are
  // conjugate to their inverses, elliptic and parabolic ones never are.
  // Conjugacy inside a discrete subgroup is not decided here.
  bool conjugate_to_inverse_in_psl2;
};

inline const char* to_string(ElementClass c) {
  switch (c) {
    case ElementClass::elliptic: return "elliptic";
    case ElementClass::parabolic: return "parabolic";
    case ElementClass::hyperbolic: return "hyperbolic";
    case ElementClass::identity: return "identity";
  }
  return "?";
}

inline Classification classify_element(const Mat2& g, double tol = 1e-9) {
  double t = std::abs(g.trace());
  if (t > 2.0 + tol) return {ElementClass::hyperbolic, true};
  if (t < 2.0 - tol) return {ElementClass::elliptic, false};
  bool is_id = std::abs(g.b) <= tol && std::abs(g.c) <= tol && std::abs(std::abs(g.a) - 1.0) <= tol;
  if (is_id) return {ElementClass::identity, true};
  return {ElementClass::parabolic, false};
}

}  // namespace kicked::psl2
