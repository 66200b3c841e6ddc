#pragma once

#include <complex>

#include "kicked/mat2.hpp"

namespace kicked::hyperbolic {

using psl2::Mat2;

struct UHPoint {
  double x = 0.0;
  double y = 1.0;  // strictly positive

  std::complex<double> z() const { return {x, y}; }
  static UHPoint of(std::complex<double> z);
};

UHPoint mobius_apply(const Mat2& g, const UHPoint& p);
std::complex<double> mobius_apply(const Mat2& g, std::complex<double> z);
std::complex<double> mobius_derivative(const Mat2& g, std::complex<double> z);  // 1/(cz+d)^2

double hyp_dist(const UHPoint& p, const UHPoint& q);

// Oriented geodesic arc, parametrized by s in [0,1]. Vertical lines use a
// log-uniform height parameter; semicircles a uniform angle parameter.
struct Geodesic {
  enum class Kind { vertical, semicircle };
  Kind kind = Kind::vertical;
  // vertical
  double abscissa = 0.0, y0 = 1.0, y1 = 2.0;
  // semicircle (theta in (0, pi); point = center + radius e^{i theta})
  double center = 0.0, radius = 1.0, th0 = 0.0, th1 = 0.0;

  std::complex<double> point(double s) const;
  std::complex<double> velocity(double s) const;  // dz/ds
  UHPoint start() const { return UHPoint::of(point(0.0)); }
  UHPoint end() const { return UHPoint::of(point(1.0)); }
  Geodesic reversed() const;
  double min_height() const;
  double max_height() const;
  double x_lo() const;
  double x_hi() const;
};

// vertical line if the abscissas agree, else the semicircle centered on the
// real axis through both points; oriented from p to q
Geodesic geodesic_between(const UHPoint& p, const UHPoint& q);

}  // namespace kicked::hyperbolic
