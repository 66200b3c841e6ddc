#include "kicked/one_form.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <numbers>
#include <numeric>
#include <stdexcept>

#include "kicked/rng.hpp"

namespace kicked::hyperbolic {

double smoothstep5(double t) {
  if (t <= 0.0) return 0.0;
  if (t >= 1.0) return 1.0;
  return t * t * t * (10.0 + t * (-15.0 + 6.0 * t));
}

double smoothstep5_deriv(double t) {
  if (t <= 0.0 || t >= 1.0) return 0.0;
  return 30.0 * t * t * (1.0 - t) * (1.0 - t);
}

double HorocyclicCutoff::u(double y) const { return smoothstep5((y - y_on) / (y_full - y_on)); }

double HorocyclicCutoff::du(double y) const {
  return smoothstep5_deriv((y - y_on) / (y_full - y_on)) / (y_full - y_on);
}

double AxisBump::phi(double u) const {
  if (u <= u_lo || u >= u_hi) return 0.0;
  double rise = smoothstep5((u - u_lo) / edge);
  double fall = smoothstep5((u_hi - u) / edge);
  return height * std::min(rise, fall);
}

double AxisBump::psi(double s) const {
  double a = std::abs(s);
  if (a <= s_in) return 1.0;
  if (a >= s_max) return 0.0;
  return smoothstep5((s_max - a) / (s_max - s_in));
}

double AxisBump::psi_deriv(double s) const {
  double a = std::abs(s);
  if (a <= s_in || a >= s_max) return 0.0;
  double d = -smoothstep5_deriv((s_max - a) / (s_max - s_in)) / (s_max - s_in);
  return s >= 0.0 ? d : -d;
}

double AxisBump::pair(std::complex<double> z, std::complex<double> v) const {
  double x = z.real(), y = z.imag();
  double r2 = x * x + y * y;
  double u = 0.5 * std::log(r2);
  if (u <= u_lo || u >= u_hi) return 0.0;
  double s = std::asinh(x / y);
  double ps = psi(s);
  if (ps == 0.0) return 0.0;
  // du = (x dx + y dy) / |z|^2
  double du_v = (x * v.real() + y * v.imag()) / r2;
  return phi(u) * ps * du_v;
}

bool AxisBump::in_support(std::complex<double> z) const {
  double x = z.real(), y = z.imag();
  double u = 0.5 * std::log(x * x + y * y);
  if (u <= u_lo || u >= u_hi) return false;
  return std::abs(std::asinh(x / y)) < s_max;
}

bool TileRegion::intersects_box(double x0, double x1, double ylo, double yhi, double pad) const {
  if (halfplane) return yhi + pad >= y_lo;
  double px = std::clamp(cx, x0, x1);
  double py = std::clamp(cy, ylo, yhi);
  double dx = cx - px, dy = cy - py;
  double rr = r + pad;
  return dx * dx + dy * dy <= rr * rr;
}

double TileRegion::max_height() const { return halfplane ? HUGE_VAL : cy + r; }

double BoundedOneForm::base_pair(std::complex<double> z, std::complex<double> v) const {
  return kind == BaseKind::horocyclic ? cutoff.pair(z, v) : bump.pair(z, v);
}

bool BoundedOneForm::base_in_support(std::complex<double> z) const {
  return kind == BaseKind::horocyclic ? cutoff.in_support(z) : bump.in_support(z);
}

double BoundedOneForm::pair(std::complex<double> z, std::complex<double> v) const {
  double acc = 0.0;
  for (const Mat2& t : tiles) {
    std::complex<double> w = mobius_apply(t, z);
    if (!base_in_support(w)) continue;
    acc += base_pair(w, mobius_derivative(t, z) * v);
  }
  return acc;
}

namespace {

constexpr double kPi = std::numbers::pi;

template <class F>
double simpson(F&& f, double a, double fa, double m, double fm, double b, double fb) {
  (void)m;
  return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}

template <class F>
double adaptive_step(F&& f, double a, double fa, double b, double fb, double m, double fm,
                     double whole, double tol, int depth, double& err) {
  double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  double flm = f(lm), frm = f(rm);
  double left = simpson(f, a, fa, lm, flm, m, fm);
  double right = simpson(f, m, fm, rm, frm, b, fb);
  double delta = left + right - whole;
  if (depth <= 0 || std::abs(delta) <= 15.0 * tol) {
    err += std::abs(delta) / 15.0;
    return left + right + delta / 15.0;
  }
  return adaptive_step(f, a, fa, m, fm, lm, flm, left, tol / 2.0, depth - 1, err) +
         adaptive_step(f, m, fm, b, fb, rm, frm, right, tol / 2.0, depth - 1, err);
}

// adaptive Simpson over [a, b], seeded with a uniform panel split so narrow
// bumps inside the interval are not missed by the first coarse probe
template <class F>
double adaptive_integrate(F&& f, double a, double b, double tol, double& err) {
  if (!(b > a)) return 0.0;
  const int panels = 8;
  double acc = 0.0;
  double h = (b - a) / panels;
  for (int p = 0; p < panels; ++p) {
    double pa = a + p * h, pb = pa + h, pm = 0.5 * (pa + pb);
    double fa = f(pa), fb = f(pb), fm = f(pm);
    double whole = simpson(f, pa, fa, pm, fm, pb, fb);
    acc += adaptive_step(f, pa, fa, pb, fb, pm, fm, whole, tol / panels, 30, err);
  }
  return acc;
}

struct ClipInterval {
  double lo = 0.0, hi = 0.0;
  bool empty = true;
};

// s-interval of a base-frame arc inside the horoball {y >= y_on}
ClipInterval clip_horoball(const Geodesic& arc, double y_on) {
  ClipInterval c;
  if (arc.kind == Geodesic::Kind::vertical) {
    double l = std::log(arc.y1 / arc.y0);
    if (l == 0.0) return c;
    double s_at = std::log(y_on / arc.y0) / l;  // y(s) >= y_on on one side
    double lo = l > 0.0 ? s_at : 0.0;
    double hi = l > 0.0 ? 1.0 : s_at;
    lo = std::max(lo, 0.0);
    hi = std::min(hi, 1.0);
    if (lo < hi) c = {lo, hi, false};
    return c;
  }
  double ratio = y_on / arc.radius;
  if (ratio >= 1.0) return c;
  double th_min = std::asin(ratio), th_max = kPi - std::asin(ratio);
  // th(s) affine from th0 to th1; map [th_min, th_max] back to s
  double d = arc.th1 - arc.th0;
  if (d == 0.0) return c;
  double s0 = (th_min - arc.th0) / d, s1 = (th_max - arc.th0) / d;
  double lo = std::max(std::min(s0, s1), 0.0);
  double hi = std::min(std::max(s0, s1), 1.0);
  if (lo < hi) c = {lo, hi, false};
  return c;
}

// s-interval of the arc inside the hyperbolic ball B(center, R); distance to a
// point along a geodesic is unimodal in any monotone parameter
ClipInterval clip_ball(const Geodesic& arc, const UHPoint& center, double radius) {
  auto dist = [&](double s) {
    auto z = arc.point(s);
    return hyp_dist({z.real(), z.imag()}, center);
  };
  double lo = 0.0, hi = 1.0;
  for (int i = 0; i < 80; ++i) {  // golden-section toward the minimum
    double m1 = lo + 0.381966011250105 * (hi - lo);
    double m2 = hi - 0.381966011250105 * (hi - lo);
    if (dist(m1) <= dist(m2))
      hi = m2;
    else
      lo = m1;
  }
  double s_min = 0.5 * (lo + hi);
  ClipInterval c;
  if (dist(s_min) > radius) return c;
  auto bisect = [&](double inside, double outside) {
    for (int i = 0; i < 60; ++i) {
      double m = 0.5 * (inside + outside);
      (dist(m) <= radius ? inside : outside) = m;
    }
    return inside;
  };
  double s_lo = dist(0.0) <= radius ? 0.0 : bisect(s_min, 0.0);
  double s_hi = dist(1.0) <= radius ? 1.0 : bisect(s_min, 1.0);
  if (s_lo < s_hi) c = {s_lo, s_hi, false};
  return c;
}

long long gcd_ll(long long a, long long b) { return std::gcd(a, b); }

}  // namespace

IntegralResult integrate_form(const BoundedOneForm& form, const Geodesic& arc, double tol) {
  if (!(tol > 0.0)) throw std::invalid_argument("integrate_form: tol must be positive");
  IntegralResult out;
  const double x0 = arc.x_lo(), x1 = arc.x_hi();
  const double ylo = arc.min_height(), yhi = arc.max_height();

  // candidate tiles by support-region/bounding-box overlap
  std::vector<std::size_t> active;
  for (std::size_t j = 0; j < form.tiles.size(); ++j) {
    const TileRegion& reg = form.supports[j];
    if (reg.intersects_box(x0, x1, ylo, yhi)) active.push_back(j);
    // frontier heuristic: deepest enumerated tiles near the arc hint that the
    // truncated periodization may be missing deeper neighbours
    if (form.kind == BoundedOneForm::BaseKind::axis_bump &&
        form.word_lengths[j] >= form.max_word_length &&
        reg.intersects_box(x0, x1, ylo, yhi, reg.halfplane ? 0.0 : reg.r))
      out.truncation_warning = true;
  }

  // exact truncation check for arithmetic cosets: every coset whose horoball
  // is tall enough and horizontally near the arc must be enumerated
  if (form.arithmetic_cosets) {
    double need = 1.0 / (form.cutoff.y_on * ylo);
    long long c_need = static_cast<long long>(std::floor(std::sqrt(std::max(need, 0.0))));
    const long long c_cap = 300;
    if (c_need > c_cap) out.truncation_warning = true;
    for (long long c = 1; c <= std::min(c_need, c_cap) && !out.truncation_warning; ++c) {
      double rad = 0.5 / (static_cast<double>(c * c) * form.cutoff.y_on);
      long long d_lo = static_cast<long long>(std::ceil(-static_cast<double>(c) * (x1 + rad)));
      long long d_hi = static_cast<long long>(std::floor(-static_cast<double>(c) * (x0 - rad)));
      for (long long d = d_lo; d <= d_hi; ++d) {
        if (gcd_ll(c, std::llabs(d)) != 1) continue;
        if (!form.coset_keys.count({c, d})) {
          out.truncation_warning = true;
          break;
        }
      }
    }
  }

  if (active.empty()) return out;
  const double tile_tol = tol / static_cast<double>(active.size());

  const std::complex<double> p = arc.point(0.0), q = arc.point(1.0);
  for (std::size_t j : active) {
    const Mat2& t = form.tiles[j];
    std::complex<double> tp = mobius_apply(t, p), tq = mobius_apply(t, q);
    if (std::abs(tp - tq) <= 1e-14 * (1.0 + std::abs(tp))) continue;
    // integral of T*alpha0 over the arc equals the integral of alpha0 over the
    // image arc, and the image of a geodesic is the geodesic between the
    // image endpoints (the open arc never contains the pole of T)
    Geodesic image;
    try {
      image = geodesic_between(UHPoint::of(tp), UHPoint::of(tq));
    } catch (const std::invalid_argument&) {
      continue;  // collapsed to numerical degeneracy: zero-length contribution
    }
    ClipInterval clip = form.kind == BoundedOneForm::BaseKind::horocyclic
                            ? clip_horoball(image, form.cutoff.y_on)
                            : clip_ball(image,
                                        UHPoint{0.0, std::exp(form.bump.support_center_u())},
                                        form.bump.support_radius() + 1e-6);
    if (clip.empty) continue;
    auto f = [&](double s) {
      return form.base_pair(image.point(s), image.velocity(s));
    };
    out.value += adaptive_integrate(f, clip.lo, clip.hi, tile_tol, out.err);
  }
  return out;
}

std::vector<WordElement> enumerate_words(std::span<const Mat2> generators,
                                         std::span<const std::string> names, int max_length) {
  if (generators.size() != names.size())
    throw std::invalid_argument("enumerate_words: names must match generators");
  const std::size_t n = generators.size();
  std::vector<Mat2> alphabet;
  std::vector<std::string> letter;
  for (std::size_t i = 0; i < n; ++i) {
    alphabet.push_back(generators[i]);
    letter.push_back(names[i]);
  }
  for (std::size_t i = 0; i < n; ++i) {
    alphabet.push_back(generators[i].inverse());
    letter.push_back(names[i] + "'");
  }
  auto inverse_of = [n](std::size_t i) { return (i + n) % (2 * n); };

  auto key_of = [](const Mat2& m) {
    auto quant = [](double v) {
      double q = std::round(v * 1e10) / 1e10;
      return q == 0.0 ? 0.0 : q;  // normalize -0
    };
    return std::array<double, 4>{quant(m.a), quant(m.b), quant(m.c), quant(m.d)};
  };

  std::vector<WordElement> out;
  std::map<std::array<double, 4>, std::size_t> seen;
  out.push_back({Mat2::id(), 0, "1"});
  seen[key_of(Mat2::id())] = 0;

  struct Node {
    std::size_t index;    // into out
    std::size_t last;     // last letter
  };
  std::vector<Node> frontier;
  for (std::size_t i = 0; i < alphabet.size(); ++i) {
    Mat2 g = alphabet[i];
    auto key = key_of(g);
    if (seen.count(key)) continue;
    seen[key] = out.size();
    out.push_back({g, 1, letter[i]});
    frontier.push_back({out.size() - 1, i});
  }
  for (int len = 2; len <= max_length; ++len) {
    std::vector<Node> next;
    for (const Node& node : frontier) {
      for (std::size_t i = 0; i < alphabet.size(); ++i) {
        if (i == inverse_of(node.last)) continue;  // reduced words only
        Mat2 g = out[node.index].g * alphabet[i];
        auto key = key_of(g);
        if (seen.count(key)) continue;
        seen[key] = out.size();
        out.push_back({g, len, out[node.index].word + "." + letter[i]});
        next.push_back({out.size() - 1, i});
      }
    }
    frontier = std::move(next);
  }
  return out;
}

BoundedOneForm parabolic_form(std::span<const Mat2> generators, std::span<const std::string> names,
                              int max_word_length, double y_on, double y_full) {
  if (!(y_full > y_on && y_on > 1.0))
    throw std::invalid_argument("parabolic_form: need 1 < y_on < y_full (cusp-normalized group)");
  BoundedOneForm form;
  form.kind = BoundedOneForm::BaseKind::horocyclic;
  form.cutoff = {y_on, y_full};
  form.max_word_length = max_word_length;

  // certified bound: |d alpha0 / Omega| = y^2 u'(y), maximized on a fine grid
  double c = 0.0;
  for (int i = 0; i <= 20000; ++i) {
    double y = y_on + (y_full - y_on) * static_cast<double>(i) / 20000.0;
    c = std::max(c, y * y * form.cutoff.du(y));
  }
  form.bound_c = c;

  auto words = enumerate_words(generators, names, max_word_length);

  // cosets <h>\G keyed by the (sign-normalized) bottom row, which is exactly
  // h^k gamma-invariant; integer keys when the group is arithmetic
  form.arithmetic_cosets = true;
  std::map<std::pair<long long, long long>, std::size_t> reps;
  for (const auto& w : words) {
    double cc = w.g.c, dd = w.g.d;
    long long ci = std::llround(cc), di = std::llround(dd);
    if (std::abs(cc - static_cast<double>(ci)) > 1e-6 ||
        std::abs(dd - static_cast<double>(di)) > 1e-6) {
      form.arithmetic_cosets = false;
      ci = std::llround(cc * 1e9);
      di = std::llround(dd * 1e9);
    }
    if (ci < 0 || (ci == 0 && di < 0)) {
      ci = -ci;
      di = -di;
    }
    auto it = reps.find({ci, di});
    if (it != reps.end()) continue;
    reps[{ci, di}] = form.tiles.size();
    form.tiles.push_back(w.g);
    form.word_lengths.push_back(w.length);

    TileRegion reg;
    Mat2 inv = w.g.inverse();
    if (std::abs(inv.c) < 1e-12) {
      reg.halfplane = true;
      reg.y_lo = y_on / (inv.a * inv.a);  // gamma^-1 scales heights by 1/a^2... d/a with ad=1
    } else {
      double cusp = inv.a / inv.c;  // gamma^-1(infinity)
      double diam = 1.0 / (inv.c * inv.c * y_on);
      reg.cx = cusp;
      reg.cy = 0.5 * diam;
      reg.r = 0.5 * diam;
    }
    form.supports.push_back(reg);
    if (form.arithmetic_cosets) form.coset_keys.insert({ci, di});
  }
  return form;
}

IntegralResult QuasiMorphism::r(const Mat2& g) const {
  std::complex<double> image = mobius_apply(g, base.z());
  if (std::abs(image - base.z()) <= 1e-13 * (1.0 + std::abs(base.z()))) return {};
  Geodesic arc = geodesic_between(base, UHPoint::of(image));
  return integrate_form(*form, arc, tol);
}

DefectSample sample_defects(const QuasiMorphism& qm, std::span<const WordElement> words,
                            int n_pairs, std::uint64_t seed, int max_word_length) {
  std::vector<std::size_t> pool;
  for (std::size_t i = 0; i < words.size(); ++i)
    if (words[i].length >= 1 && words[i].length <= max_word_length) pool.push_back(i);
  if (pool.size() < 2) throw std::invalid_argument("sample_defects: not enough words");
  DefectSample out;
  out.pairs = n_pairs;
  for (int t = 0; t < n_pairs; ++t) {
    const Mat2& g = words[pool[stream_u64(seed, 2 * t) % pool.size()]].g;
    const Mat2& h = words[pool[stream_u64(seed, 2 * t + 1) % pool.size()]].g;
    IntegralResult rg = qm.r(g), rh = qm.r(h), rgh = qm.r(g * h);
    out.max_defect = std::max(out.max_defect, std::abs(rg.value + rh.value - rgh.value));
    out.warnings += (rg.truncation_warning ? 1 : 0) + (rh.truncation_warning ? 1 : 0) +
                    (rgh.truncation_warning ? 1 : 0);
  }
  return out;
}

RInfinityEstimate r_infinity(std::span<const double> r_values, double defect_bound) {
  int n_max = static_cast<int>(r_values.size());
  if (n_max < 4) throw std::invalid_argument("r_infinity: need at least 4 powers");
  RInfinityEstimate est;
  est.n_max = n_max;
  est.n_lo = n_max / 2;
  double sx = 0, sy = 0, sxx = 0, sxy = 0, cnt = 0;
  for (int n = est.n_lo; n <= n_max; ++n) {
    double x = n, y = r_values[static_cast<std::size_t>(n - 1)];
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    cnt += 1;
  }
  est.slope = (cnt * sxy - sx * sy) / (cnt * sxx - sx * sx);
  est.endpoint_ratio = r_values.back() / static_cast<double>(n_max);
  est.error_bar = 2.0 * defect_bound / static_cast<double>(n_max);
  return est;
}

namespace {

// sampled hyperbolic distance between two geodesic segments
double segment_distance(const std::vector<UHPoint>& a, const std::vector<UHPoint>& b) {
  double d = HUGE_VAL;
  for (const auto& p : a)
    for (const auto& q : b) d = std::min(d, hyp_dist(p, q));
  return d;
}

std::vector<UHPoint> sample_axis_segment(double u_lo, double u_hi, int n) {
  std::vector<UHPoint> pts;
  pts.reserve(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    double u = u_lo + (u_hi - u_lo) * static_cast<double>(i) / static_cast<double>(n - 1);
    pts.push_back({0.0, std::exp(u)});
  }
  return pts;
}

}  // namespace

Mat2 HyperbolicConstruction::to_frame(const Mat2& g_original) const {
  return frame * g_original * frame.inverse();
}

HyperbolicConstruction hyperbolic_form(const Mat2& g, std::span<const Mat2> generators,
                                       std::span<const std::string> names, int max_word_length,
                                       int power_closure) {
  auto cls = psl2::classify_element(g);
  if (cls.cls != psl2::ElementClass::hyperbolic)
    throw std::invalid_argument("hyperbolic_form: g must be hyperbolic");

  HyperbolicConstruction hc;

  // frame M sending the axis of g to the imaginary axis
  if (std::abs(g.c) < 1e-14) {
    double fixed = g.b / (g.d - g.a);  // finite fixed point of an upper-triangular g
    hc.frame = Mat2{1.0, -fixed, 0.0, 1.0};
  } else {
    double disc = (g.d - g.a) * (g.d - g.a) + 4.0 * g.b * g.c;
    double sq = std::sqrt(disc);
    double p = ((g.a - g.d) - sq) / (2.0 * g.c);
    double q = ((g.a - g.d) + sq) / (2.0 * g.c);
    if (p > q) std::swap(p, q);
    hc.frame = Mat2{1.0, -q, 1.0, -p};  // q -> 0, p -> infinity
  }
  Mat2 gs = hc.frame * g * hc.frame.inverse();
  if (gs.a < 1.0) {  // flip so the attracting end is at infinity
    hc.frame = Mat2{0.0, -1.0, 1.0, 0.0} * hc.frame;
    gs = hc.frame * g * hc.frame.inverse();
  }
  if (std::abs(gs.b) > 1e-7 || std::abs(gs.c) > 1e-7)
    throw std::invalid_argument("hyperbolic_form: failed to diagonalize g on its axis");
  hc.lambda = gs.a;
  hc.translation_length = 2.0 * std::log(hc.lambda);
  const double ell = hc.translation_length;

  // generators and words in the standard frame
  std::vector<Mat2> gens_std;
  for (const Mat2& gen : generators) gens_std.push_back(hc.frame * gen * hc.frame.inverse());
  hc.words = enumerate_words(gens_std, names, max_word_length);

  // segment I: arc between x and gx, midpoint-shrunk by 1/4, with the
  // basepoint at u = -ell/4 so I = [ell/8, 3 ell/8]; off-center on purpose, so
  // axis-reversing involutions (fixed points at u = 0, ell/2, ...) move I off
  // itself instead of mapping it onto itself
  const double u_lo = ell / 8.0, u_hi = 3.0 * ell / 8.0;
  hc.base = UHPoint{0.0, std::exp(-ell / 4.0)};
  auto seg = sample_axis_segment(u_lo, u_hi, 33);

  enum class AxisKind { off_axis, preserving, reversing };
  auto axis_kind = [](const Mat2& m) {
    double at0 = std::abs(m.d) < 1e-300 ? HUGE_VAL : std::abs(m.b / m.d);  // |m(0)|
    double atinf = std::abs(m.c) < 1e-300 ? HUGE_VAL : std::abs(m.a / m.c);  // |m(inf)|
    if (at0 < 1e-9 && atinf > 1e9) return AxisKind::preserving;
    if (at0 > 1e9 && atinf < 1e-9) return AxisKind::reversing;
    return AxisKind::off_axis;
  };

  double min_dist = HUGE_VAL;
  for (const auto& w : hc.words) {
    if (w.length == 0) continue;
    const Mat2& m = w.g;
    AxisKind kind = axis_kind(m);
    if (kind == AxisKind::preserving) {
      // axis-preserving, orientation-preserving: must be a power of g
      double ratio = std::log(std::abs(m.a)) / std::log(hc.lambda);
      if (std::abs(ratio - std::round(ratio)) > 1e-6)
        throw std::invalid_argument(
            "hyperbolic_form: enumerated axis element is not a power of g (g not primitive?)");
      continue;
    }
    if (kind == AxisKind::reversing) {
      // axis-reversing: conjugates g to g^-1 (a time-reversing symmetry); the
      // construction cannot separate g from g^-1 but its tiles stay legal as
      // long as the moved segment leaves a gap along the axis
      Mat2 conj = m * gs * m.inverse();
      if (conj.approx_equal(gs.inverse(), 1e-6)) {
        hc.time_reversal_detected = true;
        hc.time_reversal_witness = hc.frame.inverse() * m * hc.frame;
      }
      std::vector<UHPoint> moved;
      for (const auto& pt : seg) moved.push_back(mobius_apply(m, pt));
      double d = segment_distance(moved, seg);
      if (d < 1e-9)
        throw std::invalid_argument("hyperbolic_form: axis-reversing element overlaps I; shrink I");
      continue;
    }
    std::vector<UHPoint> moved;
    for (const auto& pt : seg) moved.push_back(mobius_apply(m, pt));
    min_dist = std::min(min_dist, segment_distance(moved, seg));
  }
  if (min_dist < 2e-3)
    throw std::invalid_argument(
        "hyperbolic_form: cannot separate the tube within the enumerated words; raise W or shrink I");

  AxisBump bump;
  bump.u_lo = u_lo;
  bump.u_hi = u_hi;
  bump.edge = (u_hi - u_lo) / 4.0;
  bump.s_max = std::min(0.3, 0.45 * min_dist);
  bump.s_in = 0.5 * bump.s_max;
  bump.height = 1.0 / ((u_hi - u_lo) - bump.edge);
  hc.tube_half_width = bump.s_max;
  hc.separation_margin = min_dist - 2.0 * bump.s_max;

  BoundedOneForm form;
  form.kind = BoundedOneForm::BaseKind::axis_bump;
  form.bump = bump;
  form.max_word_length = max_word_length;

  // |d alpha0 / Omega| = |phi(u) psi'(s)| / cosh(s) on a grid
  double c = 0.0;
  for (int i = 0; i <= 800; ++i) {
    double u = u_lo + (u_hi - u_lo) * i / 800.0;
    for (int j = 0; j <= 800; ++j) {
      double s = -bump.s_max + 2.0 * bump.s_max * j / 800.0;
      c = std::max(c, std::abs(bump.phi(u) * bump.psi_deriv(s)) / std::cosh(s));
    }
  }
  form.bound_c = c;

  // tile closure {g^m w}: deep powers of g tile the axis for the r(g^n) arcs,
  // a small power band suffices for everything off the axis. Axis-type tiles
  // are keyed by their power exponent: the same element reached through two
  // multiplication orders differs in the last bits at entries ~ lambda^30,
  // where a fixed quantization grid cannot see the match.
  auto key_of = [&](const Mat2& m) {
    AxisKind kind = axis_kind(m);
    if (kind != AxisKind::off_axis) {
      double scale = kind == AxisKind::preserving ? std::abs(m.a) : std::abs(m.b);
      double p = std::round(std::log(scale) / std::log(hc.lambda) * 1e6) / 1e6;
      return std::array<double, 4>{kind == AxisKind::preserving ? HUGE_VAL : -HUGE_VAL, p, 0.0,
                                   0.0};
    }
    auto quant = [](double v) {
      double q = std::round(v * 1e10) / 1e10;
      return q == 0.0 ? 0.0 : q;
    };
    return std::array<double, 4>{quant(m.a), quant(m.b), quant(m.c), quant(m.d)};
  };
  std::map<std::array<double, 4>, bool> seen;
  UHPoint supp_center{0.0, std::exp(bump.support_center_u())};
  double supp_radius = bump.support_radius();
  auto add_tile = [&](const Mat2& t, int length) {
    auto key = key_of(t);
    if (seen.count(key)) return;
    seen[key] = true;
    Mat2 inv = t.inverse();
    UHPoint w = mobius_apply(inv, supp_center);
    TileRegion reg;
    reg.cx = w.x;
    reg.cy = w.y * std::cosh(supp_radius);
    reg.r = w.y * std::sinh(supp_radius);
    form.tiles.push_back(t);
    form.supports.push_back(reg);
    form.word_lengths.push_back(length);
  };
  auto g_power = [&](int m) {
    // iterated products, not pow(): closure dedup needs bit-stable entries
    Mat2 acc = Mat2::id();
    Mat2 step = m >= 0 ? gs : gs.inverse();
    for (int i = 0; i < std::abs(m); ++i) acc = acc * step;
    return acc;
  };
  // axis tiles are kept inside the intended power band no matter how a word
  // spells them; deeper axis powers would only re-enter through longer words
  // and masquerade as frontier tiles
  auto within_band = [&](const Mat2& t) {
    AxisKind kind = axis_kind(t);
    if (kind == AxisKind::off_axis) return true;
    double scale = kind == AxisKind::preserving ? std::abs(t.a) : std::abs(t.b);
    double p = std::log(std::max(scale, 1e-300)) / std::log(hc.lambda);
    return std::abs(p) <= static_cast<double>(power_closure) + 1.5;
  };
  for (int m = -power_closure; m <= power_closure; ++m) add_tile(g_power(m), 0);
  for (const auto& w : hc.words) {
    if (w.length == 0) continue;
    AxisKind kind = axis_kind(w.g);
    if (kind == AxisKind::preserving) continue;  // pure powers come from the m-loop
    int band = kind == AxisKind::reversing ? power_closure : 8;
    for (int m = -band; m <= band; ++m) {
      Mat2 t = g_power(m) * w.g;
      if (within_band(t)) add_tile(t, w.length);
    }
  }
  hc.form = std::move(form);
  return hc;
}

}  // namespace kicked::hyperbolic
