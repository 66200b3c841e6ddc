#include "kicked/uhp.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace kicked::hyperbolic {

UHPoint UHPoint::of(std::complex<double> z) {
  if (!(z.imag() > 0.0)) throw std::invalid_argument("UHPoint: y must be > 0");
  return {z.real(), z.imag()};
}

std::complex<double> mobius_apply(const Mat2& g, std::complex<double> z) {
  return (g.a * z + g.b) / (g.c * z + g.d);
}

UHPoint mobius_apply(const Mat2& g, const UHPoint& p) {
  return UHPoint::of(mobius_apply(g, p.z()));
}

std::complex<double> mobius_derivative(const Mat2& g, std::complex<double> z) {
  std::complex<double> den = g.c * z + g.d;
  return 1.0 / (den * den);
}

double hyp_dist(const UHPoint& p, const UHPoint& q) {
  double dx = p.x - q.x, dy = p.y - q.y;
  double arg = 1.0 + (dx * dx + dy * dy) / (2.0 * p.y * q.y);
  return std::acosh(std::max(arg, 1.0));
}

std::complex<double> Geodesic::point(double s) const {
  if (kind == Kind::vertical) {
    double y = y0 * std::pow(y1 / y0, s);
    return {abscissa, y};
  }
  double th = th0 + s * (th1 - th0);
  return {center + radius * std::cos(th), radius * std::sin(th)};
}

std::complex<double> Geodesic::velocity(double s) const {
  if (kind == Kind::vertical) {
    double l = std::log(y1 / y0);
    double y = y0 * std::pow(y1 / y0, s);
    return {0.0, y * l};
  }
  double th = th0 + s * (th1 - th0);
  double dth = th1 - th0;
  return {-radius * std::sin(th) * dth, radius * std::cos(th) * dth};
}

Geodesic Geodesic::reversed() const {
  Geodesic g = *this;
  if (kind == Kind::vertical)
    std::swap(g.y0, g.y1);
  else
    std::swap(g.th0, g.th1);
  return g;
}

double Geodesic::min_height() const {
  if (kind == Kind::vertical) return std::min(y0, y1);
  // sin is concave on (0, pi): the minimum sits at an endpoint
  return radius * std::min(std::sin(th0), std::sin(th1));
}

double Geodesic::max_height() const {
  if (kind == Kind::vertical) return std::max(y0, y1);
  double lo = std::min(th0, th1), hi = std::max(th0, th1);
  double m = std::max(std::sin(th0), std::sin(th1));
  if (lo <= std::numbers::pi / 2 && hi >= std::numbers::pi / 2) m = 1.0;
  return radius * m;
}

double Geodesic::x_lo() const {
  if (kind == Kind::vertical) return abscissa;
  return center + radius * std::cos(std::max(th0, th1));  // cos decreases on (0, pi)
}

double Geodesic::x_hi() const {
  if (kind == Kind::vertical) return abscissa;
  return center + radius * std::cos(std::min(th0, th1));
}

Geodesic geodesic_between(const UHPoint& p, const UHPoint& q) {
  double scale = std::max({1.0, std::abs(p.x), std::abs(q.x)});
  if (std::abs(p.x - q.x) <= 1e-13 * scale) {
    if (std::abs(p.y - q.y) <= 1e-15 * std::max(p.y, q.y))
      throw std::invalid_argument("geodesic_between: degenerate (p == q)");
    Geodesic g;
    g.kind = Geodesic::Kind::vertical;
    g.abscissa = p.x;
    g.y0 = p.y;
    g.y1 = q.y;
    return g;
  }
  Geodesic g;
  g.kind = Geodesic::Kind::semicircle;
  g.center = (q.x * q.x + q.y * q.y - p.x * p.x - p.y * p.y) / (2.0 * (q.x - p.x));
  g.radius = std::hypot(p.x - g.center, p.y);
  g.th0 = std::atan2(p.y, p.x - g.center);
  g.th1 = std::atan2(q.y, q.x - g.center);
  return g;
}

}  // namespace kicked::hyperbolic
