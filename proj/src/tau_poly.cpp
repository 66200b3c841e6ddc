#include "kicked/tau_poly.hpp"

#include <array>
#include <stdexcept>

namespace kicked::psl2 {

namespace {

template <class T>
std::vector<T> poly_add(const std::vector<T>& p, const std::vector<T>& q) {
  std::vector<T> r(std::max(p.size(), q.size()), T(0));
  for (std::size_t i = 0; i < p.size(); ++i) r[i] += p[i];
  for (std::size_t i = 0; i < q.size(); ++i) r[i] += q[i];
  return r;
}

template <class T>
std::vector<T> poly_scale(const std::vector<T>& p, const T& s) {
  std::vector<T> r(p.size(), T(0));
  for (std::size_t i = 0; i < p.size(); ++i) r[i] = p[i] * s;
  return r;
}

// multiply by (u + v tau)
template <class T>
std::vector<T> poly_shift(const std::vector<T>& p, const T& u, const T& v) {
  std::vector<T> r(p.size() + 1, T(0));
  for (std::size_t i = 0; i < p.size(); ++i) {
    r[i] += p[i] * u;
    r[i + 1] += p[i] * v;
  }
  return r;
}

template <class T>
void trim(std::vector<T>& p) {
  while (p.size() > 1 && p.back() == T(0)) p.pop_back();
}

// Evolution as a matrix of polynomials in tau: M <- K_i * H(tau) * M with
// H(tau) = (1, tau; 0, 1). Entries stay degree <= k.
template <class T, class Kick>
std::array<std::vector<T>, 4> evolve_poly(std::span<const Kick> kicks,
                                          const T& (*ka)(const Kick&), const T& (*kb)(const Kick&),
                                          const T& (*kc)(const Kick&), const T& (*kd)(const Kick&)) {
  std::array<std::vector<T>, 4> m = {std::vector<T>{T(1)}, std::vector<T>{T(0)},
                                     std::vector<T>{T(0)}, std::vector<T>{T(1)}};
  for (const Kick& k : kicks) {
    // H(tau) * M: top row becomes m[0] + tau m[2], m[1] + tau m[3]
    auto t0 = poly_add(m[0], poly_shift(m[2], T(0), T(1)));
    auto t1 = poly_add(m[1], poly_shift(m[3], T(0), T(1)));
    auto n0 = poly_add(poly_scale(t0, ka(k)), poly_scale(m[2], kb(k)));
    auto n1 = poly_add(poly_scale(t1, ka(k)), poly_scale(m[3], kb(k)));
    auto n2 = poly_add(poly_scale(t0, kc(k)), poly_scale(m[2], kd(k)));
    auto n3 = poly_add(poly_scale(t1, kc(k)), poly_scale(m[3], kd(k)));
    m = {std::move(n0), std::move(n1), std::move(n2), std::move(n3)};
  }
  return m;
}

}  // namespace

RationalMat2::RationalMat2(Rational a_, Rational b_, Rational c_, Rational d_)
    : a(std::move(a_)), b(std::move(b_)), c(std::move(c_)), d(std::move(d_)) {
  if (a * d - b * c != Rational(1))
    throw std::invalid_argument("RationalMat2: determinant must be exactly 1");
}

Mat2 RationalMat2::to_double() const {
  return {a.convert_to<double>(), b.convert_to<double>(), c.convert_to<double>(),
          d.convert_to<double>()};
}

int TauPolynomial::degree() const {
  for (std::size_t i = coeffs.size(); i-- > 0;)
    if (coeffs[i] != Rational(0)) return static_cast<int>(i);
  return 0;
}

Rational TauPolynomial::leading() const { return coeffs[static_cast<std::size_t>(degree())]; }

double TauPolynomial::eval(double tau) const {
  double acc = 0.0;
  for (std::size_t i = coeffs.size(); i-- > 0;) acc = acc * tau + coeffs[i].convert_to<double>();
  return acc;
}

std::vector<std::string> TauPolynomial::coeff_strings() const {
  std::vector<std::string> out;
  out.reserve(coeffs.size());
  for (const auto& c : coeffs) out.push_back(c.str());
  return out;
}

TauPolynomial trace_polynomial(std::span<const RationalMat2> kicks) {
  if (kicks.size() > kExactDegreeCap)
    throw std::invalid_argument("trace_polynomial: exact mode capped at k = 64 (coefficient growth)");
  auto m = evolve_poly<Rational, RationalMat2>(
      kicks, [](const RationalMat2& k) -> const Rational& { return k.a; },
      [](const RationalMat2& k) -> const Rational& { return k.b; },
      [](const RationalMat2& k) -> const Rational& { return k.c; },
      [](const RationalMat2& k) -> const Rational& { return k.d; });
  TauPolynomial p;
  p.coeffs = poly_add(m[0], m[3]);
  trim(p.coeffs);
  return p;
}

std::vector<double> trace_polynomial_float(std::span<const Mat2> kicks) {
  auto m = evolve_poly<double, Mat2>(
      kicks, [](const Mat2& k) -> const double& { return k.a; },
      [](const Mat2& k) -> const double& { return k.b; },
      [](const Mat2& k) -> const double& { return k.c; },
      [](const Mat2& k) -> const double& { return k.d; });
  auto p = poly_add(m[0], m[3]);
  trim(p);
  return p;
}

double eval_poly(std::span<const double> coeffs, double tau) {
  double acc = 0.0;
  for (std::size_t i = coeffs.size(); i-- > 0;) acc = acc * tau + coeffs[i];
  return acc;
}

}  // namespace kicked::psl2
