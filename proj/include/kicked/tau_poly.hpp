#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "kicked/mat2.hpp"

namespace kicked::psl2 {

using Rational = boost::multiprecision::cpp_rational;

// Exact SL(2,Q) kick; det is checked to be exactly 1.
struct RationalMat2 {
  Rational a, b, c, d;
  RationalMat2(Rational a_, Rational b_, Rational c_, Rational d_);
  Mat2 to_double() const;
};

// Trace of the evolution f^(k)(tau) as a polynomial in tau. Exact mode keeps
// rational coefficients, so the degree-k / leading-coefficient c_1...c_k
// statement is a theorem about integers, not floats.
struct TauPolynomial {
  std::vector<Rational> coeffs;  // coeffs[i] multiplies tau^i

  int degree() const;
  Rational leading() const;
  double eval(double tau) const;  // Horner on double-converted coefficients
  std::vector<std::string> coeff_strings() const;
};

inline constexpr std::uint64_t kExactDegreeCap = 64;  // coefficient growth guard

TauPolynomial trace_polynomial(std::span<const RationalMat2> kicks);

// float mode: coefficient array with Horner evaluation
std::vector<double> trace_polynomial_float(std::span<const Mat2> kicks);
double eval_poly(std::span<const double> coeffs, double tau);

}  // namespace kicked::psl2
