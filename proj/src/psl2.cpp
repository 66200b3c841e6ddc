#include "kicked/psl2.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "kicked/rng.hpp"

namespace kicked::psl2 {

Mat2 evolve_matrix(const Psl2Schedule& kicks, double tau, std::uint64_t k) {
  Mat2 f = Mat2::id();
  for (std::uint64_t i = 1; i <= k; ++i) f = kicks.at(i) * horocycle(tau) * f;
  return f;
}

std::vector<Mat2> evolve_matrix_sequence(const Psl2Schedule& kicks, double tau, std::uint64_t k) {
  std::vector<Mat2> seq;
  seq.reserve(k + 1);
  seq.push_back(Mat2::id());
  for (std::uint64_t i = 1; i <= k; ++i) seq.push_back(kicks.at(i) * horocycle(tau) * seq.back());
  return seq;
}

void ScaledEvolution::advance(const Mat2& kick, const Mat2& flow_step) {
  // (kick * h) * current with the running scale peeled off
  Mat2 g{kick.a * flow_step.a + kick.b * flow_step.c, kick.a * flow_step.b + kick.b * flow_step.d,
         kick.c * flow_step.a + kick.d * flow_step.c, kick.c * flow_step.b + kick.d * flow_step.d,
         false};
  double na = g.a * a_ + g.b * c_;
  double nb = g.a * b_ + g.b * d_;
  double nc = g.c * a_ + g.d * c_;
  double nd = g.c * b_ + g.d * d_;
  double m = std::max(std::max(std::abs(na), std::abs(nb)), std::max(std::abs(nc), std::abs(nd)));
  if (m > 1e8 || (m > 0.0 && m < 1e-8)) {
    na /= m; nb /= m; nc /= m; nd /= m;
    log_scale_ += std::log(m);
  }
  a_ = na; b_ = nb; c_ = nc; d_ = nd;
  ++steps_;
}

double ScaledEvolution::log_norm() const {
  return log_scale_ + 0.5 * std::log(a_ * a_ + b_ * b_ + c_ * c_ + d_ * d_);
}

EscapeReport escape_detector(const Psl2Schedule& kicks, double tau, std::uint64_t k_max,
                             double threshold) {
  if (k_max < 1) throw std::invalid_argument("escape_detector: K must be >= 1");
  if (!(threshold > std::sqrt(2.0)))
    throw std::invalid_argument("escape_detector: threshold must exceed sqrt(2)");
  EscapeReport report;
  report.threshold = threshold;
  report.k_max = k_max;
  report.max_log_norm = 0.5 * std::log(2.0);
  const double log_threshold = std::log(threshold);
  const Mat2 h = horocycle(tau);
  ScaledEvolution f;
  for (std::uint64_t k = 1; k <= k_max; ++k) {
    f.advance(kicks.at(k), h);
    double ln = f.log_norm();
    if (ln > report.max_log_norm) {
      report.max_log_norm = ln;
      report.argmax = k;
    }
    if (!report.escaped && ln > log_threshold) {
      report.escaped = true;
      report.first_k = k;
    }
  }
  return report;
}

EntrySequences entry_recursion(std::span<const double> c, double tau, std::uint64_t k_max) {
  if (c.size() < k_max) throw std::invalid_argument("entry_recursion: need K potential values");
  EntrySequences s;
  s.alpha.reserve(k_max + 1);
  s.beta.reserve(k_max + 1);
  s.gamma.reserve(k_max + 1);
  s.delta.reserve(k_max + 1);
  s.alpha.push_back(1.0);
  s.beta.push_back(0.0);
  s.gamma.push_back(0.0);
  s.delta.push_back(1.0);
  for (std::uint64_t k = 1; k <= k_max; ++k) {
    double ck = c[k - 1];
    double a = s.alpha.back() + tau * s.gamma.back();
    double g = s.gamma.back() + ck * a;
    double b = s.beta.back() + tau * s.delta.back();
    double d = s.delta.back() + ck * b;
    s.alpha.push_back(a);
    s.gamma.push_back(g);
    s.beta.push_back(b);
    s.delta.push_back(d);
  }
  return s;
}

std::vector<double> schrodinger_solve(std::span<const double> c, double tau, double q0, double q1,
                                      std::uint64_t k_max) {
  if (k_max < 1) throw std::invalid_argument("schrodinger_solve: K must be >= 1");
  if (c.size() + 1 < k_max) throw std::invalid_argument("schrodinger_solve: need K-1 potential values");
  std::vector<double> q;
  q.reserve(k_max + 1);
  q.push_back(q0);
  q.push_back(q1);
  for (std::uint64_t k = 1; k + 1 <= k_max; ++k)
    q.push_back((2.0 + tau * c[k - 1]) * q[k] - q[k - 1]);
  return q;
}

EntrySequences schrodinger_entries(std::span<const double> c, double tau, std::uint64_t k_max) {
  if (c.size() < k_max + 1)
    throw std::invalid_argument("schrodinger_entries: need K+1 potential values");
  if (tau == 0.0) throw std::invalid_argument("schrodinger_entries: tau must be nonzero");
  std::vector<double> qa = schrodinger_solve(c, tau, 1.0, 1.0, k_max + 1);
  std::vector<double> qb = schrodinger_solve(c, tau, 0.0, tau, k_max + 1);
  // {alpha_k} is the solution with q0 = q1 = 1, {beta_k} the one with
  // q0 = 0, q1 = tau; gamma and delta come back as difference quotients.
  EntrySequences s;
  s.alpha.assign(qa.begin(), qa.begin() + static_cast<std::ptrdiff_t>(k_max + 1));
  s.beta.assign(qb.begin(), qb.begin() + static_cast<std::ptrdiff_t>(k_max + 1));
  s.gamma.resize(k_max + 1);
  s.delta.resize(k_max + 1);
  for (std::uint64_t k = 0; k <= k_max; ++k) {
    s.gamma[k] = (qa[k + 1] - qa[k]) / tau;
    s.delta[k] = (qb[k + 1] - qb[k]) / tau;
  }
  return s;
}

BoundednessReport boundedness_link_check(std::span<const double> c, double tau,
                                         std::uint64_t k_max, double threshold) {
  BoundednessReport report;
  report.threshold = threshold;
  std::vector<Mat2> kick_list;
  kick_list.reserve(k_max);
  for (std::uint64_t i = 0; i < k_max; ++i) kick_list.push_back(lower_unipotent(c[i]));
  auto kicks = Psl2Schedule::cycled(std::move(kick_list));
  const Mat2 h = horocycle(tau);
  ScaledEvolution f;
  double max_log = 0.5 * std::log(2.0);
  for (std::uint64_t k = 1; k <= k_max; ++k) {
    f.advance(kicks.at(k), h);
    max_log = std::max(max_log, f.log_norm());
  }
  report.max_log_norm = max_log;
  std::vector<double> qa = schrodinger_solve(c, tau, 1.0, 1.0, k_max);
  std::vector<double> qb = schrodinger_solve(c, tau, 0.0, tau, k_max);
  for (double v : qa) report.max_abs_alpha = std::max(report.max_abs_alpha, std::abs(v));
  for (double v : qb) report.max_abs_beta = std::max(report.max_abs_beta, std::abs(v));
  report.norms_bounded = max_log <= std::log(threshold);
  report.solutions_bounded =
      report.max_abs_alpha <= threshold && report.max_abs_beta <= threshold;
  report.agree = report.norms_bounded == report.solutions_bounded;
  return report;
}

Mat2 upper_triangular_closed_form(std::span<const double> a, std::span<const double> b, double tau,
                                  std::uint64_t k) {
  if (a.size() < k || b.size() < k)
    throw std::invalid_argument("upper_triangular_closed_form: need k kick rows");
  for (std::uint64_t i = 0; i < k; ++i)
    if (a[i] == 0.0) throw std::invalid_argument("upper_triangular_closed_form: all a_i must be nonzero");
  // A_k = a_1...a_k and S_k = sum_i (a_k...a_i)^2 via S_k = a_k^2 (S_{k-1} + 1)
  double prod = 1.0, s = 0.0;
  for (std::uint64_t i = 0; i < k; ++i) {
    prod *= a[i];
    s = a[i] * a[i] * (s + 1.0);
  }
  double z = s / prod;
  // w_k is the upper entry of the tau = 0 product phi_k ... phi_1
  double w = 0.0, diag = 1.0;
  for (std::uint64_t i = 0; i < k; ++i) {
    w = a[i] * w + b[i] / diag;  // new upper entry of phi_i * (diag, w; 0, diag^-1)
    diag *= a[i];
  }
  return {prod, w + tau * z, 0.0, 1.0 / prod};
}

double gauge(const Mat2& g) { return std::log(std::max(g.norm(), 1.0)); }

GaugeCertificate certify_gauge(std::uint64_t seed, int n_samples) {
  GaugeCertificate cert;
  cert.samples = n_samples;
  auto random_mat = [seed](std::uint64_t idx) {
    // random words in a fixed generator alphabet give a spread of conjugators
    Mat2 m = Mat2::id();
    for (int j = 0; j < 6; ++j) {
      switch (stream_u64(seed, idx * 8 + static_cast<std::uint64_t>(j)) % 4) {
        case 0: m = m * horocycle(stream_range(seed, idx * 8 + j + 1, -2.0, 2.0)); break;
        case 1: m = m * lower_unipotent(stream_range(seed, idx * 8 + j + 2, -2.0, 2.0)); break;
        case 2: m = m * diagonal(std::exp(stream_range(seed, idx * 8 + j + 3, -1.0, 1.0))); break;
        default: m = m * rotation(stream_range(seed, idx * 8 + j + 4, 0.0, 3.14)); break;
      }
    }
    return m;
  };
  for (int i = 0; i < n_samples; ++i) {
    Mat2 g = random_mat(3 * static_cast<std::uint64_t>(i));
    Mat2 h = random_mat(3 * static_cast<std::uint64_t>(i) + 1);
    Mat2 a = random_mat(3 * static_cast<std::uint64_t>(i) + 2);
    cert.product_excess = std::max(cert.product_excess, gauge(g * h) - gauge(g) - gauge(h));
    double conj = std::abs(gauge(a * g * a.inverse()) - gauge(g)) - 2.0 * gauge(a);
    cert.conjugation_excess = std::max(cert.conjugation_excess, conj);
  }
  return cert;
}

GaugeGrowth gauge_growth(const Psl2Schedule& kicks, const Mat2& flow_step, std::uint64_t k_max) {
  if (k_max < 2) throw std::invalid_argument("gauge_growth: K must be >= 2");
  GaugeGrowth growth;
  growth.rho.reserve(k_max + 1);
  growth.rho.push_back(std::log(std::sqrt(2.0)));
  ScaledEvolution f;
  for (std::uint64_t k = 1; k <= k_max; ++k) {
    f.advance(kicks.at(k), flow_step);
    growth.rho.push_back(std::max(f.log_norm(), 0.0));
  }
  growth.k_lo = k_max / 2;
  growth.k_hi = k_max;
  double slope = HUGE_VAL;
  for (std::uint64_t k = growth.k_lo; k <= growth.k_hi; ++k)
    slope = std::min(slope, growth.rho[k] / static_cast<double>(k));
  growth.slope_lower = slope;
  return growth;
}

double log_spectral_radius(const Mat2& g) {
  double t = std::abs(g.trace());
  if (t <= 2.0) return 0.0;
  return std::log(0.5 * (t + std::sqrt(t * t - 4.0)));
}

IntervalCover::IntervalCover(std::uint64_t k_max) {
  if (k_max < 1) throw std::invalid_argument("IntervalCover: k_max must be >= 1");
  r_.resize(k_max + 1, 0.0);
  visit(k_max, [this](std::uint64_t k, double rk) { r_[k] = rk; });
}

double IntervalCover::beta(std::uint64_t k) const {
  if (k < 1 || k > k_max()) throw std::out_of_range("IntervalCover::beta");
  double prev = k >= 2 ? static_cast<double>(k - 1) * r_[k - 1] : 0.0;
  return prev - static_cast<double>(k) * r_[k];
}

Psl2Schedule IntervalCover::kicks() const {
  auto self = std::make_shared<IntervalCover>(*this);
  return Psl2Schedule::closed_form("interval-cover",
                                   [self](std::uint64_t k) { return horocycle(self->beta(k)); });
}

std::vector<std::uint64_t> IntervalCover::covering(double tau) const {
  std::vector<std::uint64_t> ks;
  for (std::uint64_t k = 1; k <= k_max(); ++k)
    if (tau >= r_[k] && tau <= r_[k] + 1.0 / static_cast<double>(k)) ks.push_back(k);
  return ks;
}

}  // namespace kicked::psl2
