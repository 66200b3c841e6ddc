// kicked: batch CLI for kicked-system experiments.
//
// Subcommands map one-to-one onto the library's experiment families; every
// run writes its data file(s) plus a manifest with config echo, per-check
// results and content digests into --out. Exit codes: 0 success, 2
// configuration error, 3 numerical-guard trip under --strict.

#include <CLI11.hpp>
#include <chrono>
#include <cmath>
#include <complex>
#include <future>
#include <json.hpp>
#include <numbers>
#include <sstream>

#include "kicked/flat_torus.hpp"
#include "kicked/manifest.hpp"
#include "kicked/one_form.hpp"
#include "kicked/psl2.hpp"
#include "kicked/rng.hpp"
#include "kicked/sequential.hpp"
#include "kicked/sphere_top.hpp"
#include "kicked/tau_poly.hpp"
#include "kicked/torus.hpp"
#include "kicked/uhp.hpp"

namespace {

using kicked::Window;
using kicked::cli::CsvWriter;
using kicked::cli::RunManifest;
namespace torus = kicked::torus;
namespace psl2 = kicked::psl2;
namespace hyp = kicked::hyperbolic;
namespace ham = kicked::hamiltonian;

std::string fmt(double v) { return CsvWriter::format_double(v); }

struct RowTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  std::string to_csv() const {
    CsvWriter w(header);
    for (const auto& r : rows) w.row(r);
    return w.text();
  }
  std::string to_json() const {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& r : rows) {
      nlohmann::json obj;
      for (std::size_t i = 0; i < header.size(); ++i) obj[header[i]] = r[i];
      arr.push_back(obj);
    }
    return arr.dump(2) + "\n";
  }
};

struct CommonOpts {
  double tau = 1.0;
  std::string tau_grid;  // a:b:n
  std::uint64_t steps = 1000;
  std::string window;  // nmin:nmax
  std::uint64_t seed = 0;
  std::string out = "out";
  std::string format = "csv";
  bool strict = false;
  std::string mode = "canonical";
  std::string config;
};

void add_common(CLI::App* cmd, CommonOpts& o) {
  cmd->add_option("--tau", o.tau, "period tau");
  cmd->add_option("--tau-grid", o.tau_grid, "tau grid a:b:n (n+1 points, inclusive)");
  cmd->add_option("--steps", o.steps, "orbit horizon N / K");
  cmd->add_option("--window", o.window, "counting window nmin:nmax");
  cmd->add_option("--seed", o.seed, "64-bit seed");
  cmd->add_option("--out", o.out, "output directory");
  cmd->add_option("--format", o.format, "csv|json")->check(CLI::IsMember({"csv", "json"}));
  cmd->add_flag("--strict", o.strict, "escalate numerical guards to exit code 3");
  cmd->add_option("--mode", o.mode, "canonical|fast")
      ->check(CLI::IsMember({"canonical", "fast"}));
  cmd->add_option("--config", o.config, "key=value config file (flags override)");
}

std::vector<double> parse_grid(const std::string& spec, double fallback) {
  if (spec.empty()) return {fallback};
  double a, b;
  int n;
  char c1, c2;
  std::istringstream in(spec);
  if (!(in >> a >> c1 >> b >> c2 >> n) || c1 != ':' || c2 != ':' || n < 1)
    throw CLI::ValidationError("--tau-grid", "expected a:b:n");
  std::vector<double> grid;
  grid.reserve(static_cast<std::size_t>(n) + 1);
  for (int i = 0; i <= n; ++i) grid.push_back(a + (b - a) * i / n);
  return grid;
}

Window parse_window(const std::string& spec, std::uint64_t steps) {
  if (spec.empty()) return {1, steps};
  std::uint64_t lo, hi;
  char c;
  std::istringstream in(spec);
  if (!(in >> lo >> c >> hi) || c != ':') throw CLI::ValidationError("--window", "expected nmin:nmax");
  Window w{lo, hi};
  w.validate();
  return w;
}

std::vector<double> parse_doubles(const std::string& csv) {
  std::vector<double> out;
  std::istringstream in(csv);
  std::string tok;
  while (std::getline(in, tok, ',')) out.push_back(std::stod(tok));
  return out;
}

std::vector<long long> parse_ints(const std::string& csv) {
  std::vector<long long> out;
  std::istringstream in(csv);
  std::string tok;
  while (std::getline(in, tok, ',')) out.push_back(std::stoll(tok));
  return out;
}

std::string join_ints(const std::vector<long long>& v, char sep = ';') {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) s += sep;
    s += std::to_string(v[i]);
  }
  return s;
}

// run a per-tau job over the grid; fast mode fans out with std::async but
// results land in grid order either way, so outputs are identical
template <class Fn>
void over_grid(const std::vector<double>& grid, const std::string& mode, Fn&& fn) {
  if (mode == "fast" && grid.size() > 1) {
    std::vector<std::future<void>> jobs;
    jobs.reserve(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i)
      jobs.push_back(std::async(std::launch::async, [&fn, &grid, i] { fn(i, grid[i]); }));
    for (auto& j : jobs) j.get();
  } else {
    for (std::size_t i = 0; i < grid.size(); ++i) fn(i, grid[i]);
  }
}

struct Emitter {
  const CommonOpts& opts;
  RunManifest& manifest;

  void table(const std::string& stem, const RowTable& t) {
    if (opts.format == "json")
      manifest.emit(opts.out, stem + ".json", t.to_json());
    else
      manifest.emit(opts.out, stem + ".csv", t.to_csv());
  }
  void json(const std::string& stem, const nlohmann::json& j) {
    manifest.emit(opts.out, stem + ".json", j.dump(2) + "\n");
  }
};

int finish(const CommonOpts& opts, RunManifest& manifest,
           std::chrono::steady_clock::time_point t0) {
  double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  manifest.finalize(opts.out, wall);
  if (opts.strict && (!manifest.all_checks_pass() || manifest.warning_count() > 0)) return 3;
  return 0;
}

// effective configuration under the exact flag names, so feeding
// config.resolved back through --config reproduces the run; empty-valued
// options are omitted and boolean flags appear (bare) only when set
std::map<std::string, std::string> echo_common(const CommonOpts& o) {
  std::map<std::string, std::string> kv{{"tau", fmt(o.tau)},
                                        {"steps", std::to_string(o.steps)},
                                        {"seed", std::to_string(o.seed)},
                                        {"format", o.format},
                                        {"mode", o.mode}};
  if (!o.tau_grid.empty()) kv["tau-grid"] = o.tau_grid;
  if (!o.window.empty()) kv["window"] = o.window;
  if (o.strict) kv["strict"] = "";
  return kv;
}

// ---- torus ----------------------------------------------------------------

int run_torus_weyl(const CommonOpts& opts, const std::string& omega_csv, const std::string& h_csv,
                   const std::string& kicks_kind, const std::string& x0_csv) {
  auto t0 = std::chrono::steady_clock::now();
  auto omega = torus::FrequencyVector::generic(parse_doubles(omega_csv));
  auto h = parse_ints(h_csv);
  auto x0 = torus::TorusVector::of(x0_csv.empty() ? std::vector<double>(omega.dim(), 0.0)
                                                  : parse_doubles(x0_csv));
  auto kicks = kicks_kind == "none" ? torus::zero_kicks(omega.dim())
                                    : torus::random_kicks(opts.seed, omega.dim());
  auto grid = parse_grid(opts.tau_grid, opts.tau);

  auto config = echo_common(opts);
  config["omega"] = omega_csv;
  config["hvec"] = h_csv;
  config["kicks"] = kicks_kind;
  if (!x0_csv.empty()) config["x0"] = x0_csv;
  RunManifest manifest("torus-weyl", config);

  RowTable table{{"tau", "N", "h", "re", "im", "abs"}, {}};
  table.rows.resize(grid.size());
  bool modulus_ok = true;
  over_grid(grid, opts.mode, [&](std::size_t i, double tau) {
    torus::TorusKickedSystem sys{omega, tau, kicks};
    auto r = torus::weyl_sum(h, sys, x0, opts.steps);
    table.rows[i] = {fmt(tau),        std::to_string(opts.steps), join_ints(h),
                     fmt(r.s.real()), fmt(r.s.imag()),            fmt(r.abs)};
    if (r.abs > 1.0 + 1e-12) modulus_ok = false;
  });
  manifest.check("weyl_modulus_le_1", modulus_ok);
  Emitter{opts, manifest}.table("weyl", table);
  return finish(opts, manifest, t0);
}

int run_torus_meansquare(const CommonOpts& opts, const std::string& omega_csv,
                         const std::string& h_csv, const std::string& kicks_kind, double a,
                         double b, std::size_t grid_size, const std::string& n_list_csv,
                         bool diagonal_only) {
  auto t0 = std::chrono::steady_clock::now();
  auto omega = torus::FrequencyVector::generic(parse_doubles(omega_csv));
  auto h = parse_ints(h_csv);
  auto kicks = kicks_kind == "none" ? torus::zero_kicks(omega.dim())
                                    : torus::random_kicks(opts.seed, omega.dim());
  auto n_list = parse_ints(n_list_csv);

  auto config = echo_common(opts);
  config["omega"] = omega_csv;
  config["hvec"] = h_csv;
  config["kicks"] = kicks_kind;
  config["a"] = fmt(a);
  config["b"] = fmt(b);
  config["grid"] = std::to_string(grid_size);
  config["n-list"] = n_list_csv;
  if (diagonal_only) config["diagonal-only"] = "";
  RunManifest manifest("torus-meansquare", config);

  RowTable table{{"N", "a", "b", "grid_size", "diagonal_only", "value", "value_N_over_logN"}, {}};
  bool diag_ok = true;
  for (long long n : n_list) {
    double v = torus::mean_square_weyl(h, kicks, omega, a, b, static_cast<std::uint64_t>(n),
                                       grid_size, diagonal_only);
    double scaled = n > 1 ? v * static_cast<double>(n) / std::log(static_cast<double>(n)) : v;
    table.rows.push_back({std::to_string(n), fmt(a), fmt(b), std::to_string(grid_size),
                          diagonal_only ? "1" : "0", fmt(v), fmt(scaled)});
    if (diagonal_only && std::abs(v - (b - a) / static_cast<double>(n)) > 0.01 * (b - a) / n)
      diag_ok = false;
  }
  if (diagonal_only) manifest.check("diagonal_term_matches_(b-a)/N", diag_ok);
  Emitter{opts, manifest}.table("meansquare", table);
  return finish(opts, manifest, t0);
}

int run_torus_burago(const CommonOpts& opts, const std::string& tau_list_csv) {
  auto t0 = std::chrono::steady_clock::now();
  auto omega = torus::FrequencyVector::generic({std::sqrt(2.0)});
  auto taus = parse_ints(tau_list_csv);

  auto config = echo_common(opts);
  config["tau-list"] = tau_list_csv;
  RunManifest manifest("torus-burago", config);

  RowTable table{
      {"tau", "N", "hit_freq", "expected_density", "interval_freq", "dstar", "equidistributed"},
      {}};
  bool all_negative = true, hits_ok = true;
  for (long long tau : taus) {
    auto scan = torus::burago_scan(omega, static_cast<int>(tau), opts.steps);
    table.rows.push_back({std::to_string(tau), std::to_string(opts.steps), fmt(scan.hit_freq),
                          fmt(scan.expected_density), fmt(scan.interval_freq), fmt(scan.dstar),
                          scan.equidistributed ? "1" : "0"});
    all_negative &= !scan.equidistributed;
    hits_ok &= std::abs(scan.hit_freq - scan.expected_density) <= 0.01 * scan.expected_density;
  }
  manifest.check("hit_freq_within_1pct_of_2^-tau", hits_ok);
  manifest.check("equidistribution_verdict_negative", all_negative);
  Emitter{opts, manifest}.table("burago", table);
  return finish(opts, manifest, t0);
}

// ---- psl2 ------------------------------------------------------------------

psl2::Psl2Schedule make_psl2_kicks(const std::string& kind, std::uint64_t seed, double tau0,
                                   double c_range) {
  if (kind == "identity") return psl2::Psl2Schedule::constant(psl2::Mat2::id());
  if (kind == "htau0") return psl2::Psl2Schedule::constant(psl2::horocycle(-tau0));
  if (kind == "unipotent-random")
    return psl2::Psl2Schedule::closed_form("unipotent[" + std::to_string(seed) + "]",
                                           [seed, c_range](std::uint64_t i) {
                                             return psl2::lower_unipotent(
                                                 kicked::stream_range(seed, i, -c_range, c_range));
                                           });
  if (kind == "signs")
    return psl2::Psl2Schedule::closed_form("signs[" + std::to_string(seed) + "]",
                                           [seed](std::uint64_t i) {
                                             return psl2::lower_unipotent(
                                                 kicked::stream_u64(seed, i) & 1 ? 1.0 : -1.0);
                                           });
  throw CLI::ValidationError("--kicks", "unknown kick family " + kind);
}

int run_psl2_evolve(const CommonOpts& opts, const std::string& kicks_kind, double tau0,
                    double c_range) {
  auto t0 = std::chrono::steady_clock::now();
  auto kicks = make_psl2_kicks(kicks_kind, opts.seed, tau0, c_range);
  auto grid = parse_grid(opts.tau_grid, opts.tau);

  auto config = echo_common(opts);
  config["kicks"] = kicks_kind;
  config["tau0"] = fmt(tau0);
  config["c-range"] = fmt(c_range);
  RunManifest manifest("psl2-evolve", config);

  RowTable table{{"tau", "k", "norm", "log_norm", "trace"}, {}};
  for (double tau : grid) {
    auto seq = psl2::evolve_matrix_sequence(kicks, tau, opts.steps);
    for (std::uint64_t k = 0; k <= opts.steps; ++k) {
      double n = seq[k].norm();
      table.rows.push_back({fmt(tau), std::to_string(k), fmt(n), fmt(std::log(n)),
                            fmt(seq[k].trace())});
    }
  }
  manifest.check("rows_emitted", !table.rows.empty());
  Emitter{opts, manifest}.table("evolve", table);
  return finish(opts, manifest, t0);
}

int run_psl2_schrodinger(const CommonOpts& opts, double c_range, double q0, double q1) {
  auto t0 = std::chrono::steady_clock::now();
  std::vector<double> c(opts.steps + 1);
  for (std::size_t i = 0; i < c.size(); ++i)
    c[i] = kicked::stream_range(opts.seed, i, -c_range, c_range);

  auto config = echo_common(opts);
  config["c-range"] = fmt(c_range);
  config["q0"] = fmt(q0);
  config["q1"] = fmt(q1);
  RunManifest manifest("psl2-schrodinger", config);

  auto q = psl2::schrodinger_solve(c, opts.tau, q0, q1, opts.steps);
  auto entries = psl2::schrodinger_entries(c, opts.tau, opts.steps);
  auto direct = psl2::entry_recursion(c, opts.tau, opts.steps);
  double worst = 0.0;
  for (std::uint64_t k = 0; k <= opts.steps; ++k) {
    double scale = std::max({1.0, std::abs(direct.alpha[k]), std::abs(direct.beta[k])});
    worst = std::max(worst, std::abs(entries.alpha[k] - direct.alpha[k]) / scale);
    worst = std::max(worst, std::abs(entries.beta[k] - direct.beta[k]) / scale);
  }
  RowTable table{{"k", "q", "alpha", "beta"}, {}};
  for (std::uint64_t k = 0; k <= opts.steps; ++k)
    table.rows.push_back({std::to_string(k), fmt(q[k]), fmt(entries.alpha[k]),
                          fmt(entries.beta[k])});
  manifest.check("schrodinger_vs_recursion_1e-9", worst < 1e-9, fmt(worst));
  Emitter{opts, manifest}.table("schrodinger", table);
  return finish(opts, manifest, t0);
}

int run_psl2_trace(const CommonOpts& opts, std::uint64_t k, bool exact) {
  auto t0 = std::chrono::steady_clock::now();
  auto config = echo_common(opts);
  config["k"] = std::to_string(k);
  config["exact"] = exact ? "1" : "0";
  RunManifest manifest("psl2-trace", config);

  // random rational kicks with c_i != 0 (exact) or their double images
  std::vector<psl2::RationalMat2> kicks;
  psl2::Rational prod_c(1);
  for (std::uint64_t i = 0; i < k; ++i) {
    auto pick = [&](std::uint64_t j, bool nonzero) {
      long long num = static_cast<long long>(kicked::stream_u64(opts.seed, 16 * i + j) % 9) - 4;
      if (nonzero && num == 0) num = 3;
      long long den = 1 + static_cast<long long>(kicked::stream_u64(opts.seed, 16 * i + j + 8) % 4);
      return psl2::Rational(num, den);
    };
    psl2::Rational a = pick(0, true), b = pick(1, false), c = pick(2, true);
    kicks.emplace_back(a, b, c, (psl2::Rational(1) + b * c) / a);
    prod_c *= c;
  }
  nlohmann::json j;
  j["k"] = k;
  j["prod_c"] = prod_c.str();
  if (exact) {
    auto p = psl2::trace_polynomial(kicks);
    j["coeffs"] = p.coeff_strings();
    j["degree"] = p.degree();
    j["leading"] = p.leading().str();
    manifest.check("leading_equals_prod_c", p.leading() == prod_c);
    manifest.check("degree_equals_k", p.degree() == static_cast<int>(k));
  } else {
    std::vector<psl2::Mat2> dkicks;
    for (const auto& kk : kicks) dkicks.push_back(kk.to_double());
    auto coeffs = psl2::trace_polynomial_float(dkicks);
    std::vector<std::string> strs;
    for (double c : coeffs) strs.push_back(fmt(c));
    j["coeffs"] = strs;
    j["degree"] = coeffs.size() - 1;
    j["leading"] = fmt(coeffs.back());
  }
  Emitter{opts, manifest}.json("trace_poly", j);
  return finish(opts, manifest, t0);
}

int run_psl2_escape(const CommonOpts& opts, const std::string& kicks_kind, double tau0,
                    double c_range, double threshold) {
  auto t0 = std::chrono::steady_clock::now();
  auto grid = parse_grid(opts.tau_grid, opts.tau);
  auto config = echo_common(opts);
  config["kicks"] = kicks_kind;
  config["tau0"] = fmt(tau0);
  config["c-range"] = fmt(c_range);
  config["threshold"] = fmt(threshold);
  RunManifest manifest("psl2-escape-scan", config);

  RowTable table{{"tau", "escaped", "first_k", "max_log_norm", "argmax", "slope"}, {}};
  table.rows.resize(grid.size());
  over_grid(grid, opts.mode, [&](std::size_t i, double tau) {
    auto kicks = make_psl2_kicks(kicks_kind, opts.seed, tau0, c_range);
    auto rep = psl2::escape_detector(kicks, tau, opts.steps, threshold);
    auto growth = psl2::gauge_growth(kicks, psl2::horocycle(tau), std::max<std::uint64_t>(opts.steps, 2));
    table.rows[i] = {fmt(tau),
                     rep.escaped ? "1" : "0",
                     std::to_string(rep.first_k),
                     fmt(rep.max_log_norm),
                     std::to_string(rep.argmax),
                     fmt(growth.slope_lower)};
  });
  manifest.check("rows_emitted", !table.rows.empty());
  Emitter{opts, manifest}.table("escape", table);
  return finish(opts, manifest, t0);
}

int run_psl2_intervals(const CommonOpts& opts, std::uint64_t k_max, const std::string& emit) {
  auto t0 = std::chrono::steady_clock::now();
  auto config = echo_common(opts);
  config["k-max"] = std::to_string(k_max);
  config["emit"] = emit;
  RunManifest manifest("psl2-intervals", config);

  psl2::IntervalCover cover(k_max);
  RowTable table{{"k", "r", "len", "covers_tau", "norm_at_tau"}, {}};
  for (std::uint64_t k = 1; k <= k_max; ++k) {
    double len = 1.0 / static_cast<double>(k);
    bool covers = opts.tau >= cover.r(k) && opts.tau <= cover.r(k) + len;
    if (emit == "covering" && !covers) continue;
    double arg = static_cast<double>(k) * (opts.tau - cover.r(k));
    table.rows.push_back({std::to_string(k), fmt(cover.r(k)), fmt(len), covers ? "1" : "0",
                          fmt(std::sqrt(2.0 + arg * arg))});
  }
  // evolution identity spot check: f^(k)(tau) = h^{k(tau - r_k)}
  auto kicks = cover.kicks();
  bool identity_ok = true;
  for (std::uint64_t k : {1ull, 7ull, 63ull}) {
    if (k > k_max) break;
    auto f = psl2::evolve_matrix(kicks, opts.tau, k);
    double expect = static_cast<double>(k) * (opts.tau - cover.r(k));
    if (std::abs(f.b - expect) > 1e-7 * std::max(1.0, std::abs(expect))) identity_ok = false;
  }
  manifest.check("evolution_identity_h^{k(tau-r_k)}", identity_ok);
  Emitter{opts, manifest}.table("intervals", table);
  return finish(opts, manifest, t0);
}

// ---- quasi-morphisms --------------------------------------------------------

int run_qm_parabolic(const CommonOpts& opts, int w_cap, int n_max, int pairs, double tol) {
  auto t0 = std::chrono::steady_clock::now();
  auto config = echo_common(opts);
  config["w"] = std::to_string(w_cap);
  config["n-max"] = std::to_string(n_max);
  config["pairs"] = std::to_string(pairs);
  config["tol"] = fmt(tol);
  RunManifest manifest("qm-parabolic", config);

  std::vector<psl2::Mat2> gens{psl2::horocycle(1.0), psl2::Mat2{0.0, -1.0, 1.0, 0.0}};
  std::vector<std::string> names{"T", "S"};
  auto form = hyp::parabolic_form(gens, names, w_cap);
  hyp::QuasiMorphism qm{&form, {0.0, 3.0}, tol};

  nlohmann::json j;
  j["group"] = {{"generators", {"T=(1,1;0,1)", "S=(0,-1;1,0)"}}, {"name", "PSL(2,Z)"}};
  j["W"] = w_cap;
  j["C"] = form.bound_c;
  int warnings = 0;
  std::vector<double> r_vals;
  nlohmann::json rows = nlohmann::json::array();
  for (int n = 1; n <= n_max; ++n) {
    auto r = qm.r(psl2::horocycle(static_cast<double>(n)));
    warnings += r.truncation_warning ? 1 : 0;
    r_vals.push_back(r.value);
    rows.push_back({{"word", "h^" + std::to_string(n)}, {"n", n}, {"value", r.value}});
  }
  j["r_values"] = rows;
  auto words = hyp::enumerate_words(gens, names, w_cap);
  auto defects = hyp::sample_defects(qm, words, pairs, opts.seed, 4);
  warnings += defects.warnings;
  j["defect_max"] = defects.max_defect;
  j["defect_bound_piC"] = std::numbers::pi * form.bound_c;
  auto est = hyp::r_infinity(r_vals, std::numbers::pi * form.bound_c);
  j["r_infinity"] = est.slope;
  j["r_infinity_endpoint"] = est.endpoint_ratio;
  j["r_infinity_error_bar"] = est.error_bar;
  j["truncation_warnings"] = warnings;
  for (int i = 0; i < warnings; ++i) manifest.warn("truncated integral");

  manifest.check("r(h^n)=n_within_1e-6",
                 [&] {
                   for (int n = 1; n <= n_max; ++n)
                     if (std::abs(r_vals[static_cast<std::size_t>(n - 1)] - n) > 1e-6) return false;
                   return true;
                 }());
  manifest.check("defect_le_piC", defects.max_defect <= std::numbers::pi * form.bound_c + 3.0 * tol);
  manifest.check("r_infinity_is_1", std::abs(est.slope - 1.0) <= 1e-3, fmt(est.slope));
  Emitter{opts, manifest}.json("qm_parabolic", j);
  return finish(opts, manifest, t0);
}

int run_qm_hyperbolic(const CommonOpts& opts, int w_cap, int n_max, int pairs,
                      const std::string& group, double tol) {
  auto t0 = std::chrono::steady_clock::now();
  auto config = echo_common(opts);
  config["w"] = std::to_string(w_cap);
  config["n-max"] = std::to_string(n_max);
  config["pairs"] = std::to_string(pairs);
  config["group"] = group;
  config["tol"] = fmt(tol);
  RunManifest manifest("qm-hyperbolic", config);

  psl2::Mat2 a{3.0, 0.0, 0.0, 1.0 / 3.0};
  std::vector<psl2::Mat2> gens;
  std::vector<std::string> names;
  if (group == "schottky") {
    psl2::Mat2 m{2.0, 1.0, 1.0, 1.0};
    gens = {a, m * a * m.inverse()};
    names = {"A", "B"};
  } else if (group == "dihedral") {
    gens = {a, psl2::Mat2{0.0, -1.0, 1.0, 0.0}};
    names = {"A", "J"};
  } else {
    throw CLI::ValidationError("--group", "expected schottky|dihedral");
  }

  auto hc = hyp::hyperbolic_form(a, gens, names, w_cap, n_max + 2);
  hyp::QuasiMorphism qm{&hc.form, hc.base, tol};

  nlohmann::json j;
  j["group"] = {{"name", group}, {"generators", names}};
  j["W"] = w_cap;
  j["C"] = hc.form.bound_c;
  j["lambda"] = hc.lambda;
  j["translation_length"] = hc.translation_length;
  j["tube_half_width"] = hc.tube_half_width;
  j["separation_margin"] = hc.separation_margin;
  j["time_reversal_detected"] = hc.time_reversal_detected;

  int warnings = 0;
  std::vector<double> r_vals;
  nlohmann::json rows = nlohmann::json::array();
  psl2::Mat2 gn = psl2::Mat2::id();
  psl2::Mat2 gs = hc.to_frame(a);
  for (int n = 1; n <= n_max; ++n) {
    gn = gn * gs;
    auto r = hyp::integrate_form(hc.form, hyp::geodesic_between(hc.base, hyp::mobius_apply(gn, hc.base)), tol);
    warnings += r.truncation_warning ? 1 : 0;
    r_vals.push_back(r.value);
    rows.push_back({{"word", "g^" + std::to_string(n)}, {"n", n}, {"value", r.value}});
  }
  j["r_values"] = rows;
  double defect_bound = std::numbers::pi * hc.form.bound_c;
  auto est = hyp::r_infinity(r_vals, defect_bound);
  j["r_infinity"] = est.slope;
  j["r_infinity_error_bar"] = est.error_bar;
  // homogeneity: r_inf(g^2) from the even subsequence
  std::vector<double> r_even;
  for (int n = 2; n <= n_max; n += 2) r_even.push_back(r_vals[static_cast<std::size_t>(n - 1)]);
  if (r_even.size() >= 4) {
    auto est2 = hyp::r_infinity(r_even, defect_bound);
    j["r_infinity_g2"] = est2.slope;
    if (!hc.time_reversal_detected)
      manifest.check("homogeneity_r(g^2)=2r(g)",
                     std::abs(est2.slope - 2.0 * est.slope) <= 0.02 * std::max(1.0, 2.0 * std::abs(est.slope)));
  }
  auto defects = hyp::sample_defects(qm, hc.words, pairs, opts.seed, 3);
  warnings += defects.warnings;
  j["defect_max"] = defects.max_defect;
  j["defect_bound_piC"] = defect_bound;
  j["truncation_warnings"] = warnings;
  for (int i = 0; i < warnings; ++i) manifest.warn("truncated integral");

  if (group == "dihedral") {
    manifest.check("time_reversal_detected", hc.time_reversal_detected);
    manifest.check("r_infinity_killed", std::abs(est.slope) <= 2.0 * defect_bound / n_max,
                   fmt(est.slope));
  } else {
    manifest.check("construction_separated", hc.separation_margin > 0.0);
    manifest.check("r_infinity_equals_segment_integral", std::abs(est.slope - 1.0) <= 0.02,
                   fmt(est.slope));
  }
  Emitter{opts, manifest}.json("qm_hyperbolic", j);
  return finish(opts, manifest, t0);
}

// ---- hamiltonian ------------------------------------------------------------

int run_top_scan(const CommonOpts& opts, const std::string& kicks_kind, double eps,
                 std::size_t n_samples) {
  auto t0 = std::chrono::steady_clock::now();
  auto grid = parse_grid(opts.tau_grid, opts.tau);
  Window w = parse_window(opts.window, opts.steps);

  auto config = echo_common(opts);
  config["kicks"] = kicks_kind;
  config["eps"] = fmt(eps);
  config["samples"] = std::to_string(n_samples);
  RunManifest manifest("top-scan", config);

  ham::SphereSchedule kicks = ham::identity_kicks();
  if (kicks_kind == "phi")
    kicks = ham::constant_kick(ham::Rot3::kicked_top_phi());
  else if (kicks_kind == "reversal")
    kicks = ham::two_periodic_reversal(ham::Rot3::reflect_xy_plane());
  else if (kicks_kind == "random-set")
    kicks = ham::SphereSchedule::seeded(
        opts.seed, {ham::Rot3::kicked_top_phi(), ham::Rot3::about_z(1.0),
                    ham::Rot3::about_axis({0.0, 1.0, 0.0}, 0.37)});
  else if (kicks_kind != "identity")
    throw CLI::ValidationError("--kicks", "expected identity|phi|reversal|random-set");

  std::vector<ham::Vec3> samples;
  double z_cut = std::sqrt(eps / 3.0);
  samples.push_back({1.0, 0.0, 0.0});
  samples.push_back(ham::Vec3{1.0, 0.0, 0.5 * z_cut}.normalized());
  for (std::size_t i = samples.size(); i < n_samples; ++i)
    samples.push_back(ham::sample_sphere(opts.seed, i));

  auto rows = ham::kicked_top_scan(kicks, grid, eps, samples, w);
  RowTable table{{"tau", "eps", "N", "R_hat", "mu_A", "verdict"}, {}};
  bool range_ok = true;
  std::size_t verdicts = 0;
  for (const auto& row : rows) {
    table.rows.push_back({fmt(row.tau), fmt(row.eps), std::to_string(w.n_max),
                          fmt(row.report.r_hat), fmt(row.report.mu_a),
                          row.report.verdict ? "1" : "0"});
    range_ok &= row.report.r_hat >= 0.0 && row.report.r_hat <= 1.0;
    verdicts += row.report.verdict ? 1 : 0;
  }
  manifest.check("R_hat_in_[0,1]", range_ok);
  manifest.check("verdict_density_reported", true,
                 fmt(static_cast<double>(verdicts) / static_cast<double>(rows.size())));
  Emitter{opts, manifest}.table("top_scan", table);
  return finish(opts, manifest, t0);
}

int run_top_timereversal(const CommonOpts& opts) {
  auto t0 = std::chrono::steady_clock::now();
  auto config = echo_common(opts);
  RunManifest manifest("top-timereversal", config);

  std::vector<double> ts{0.1, 0.7, 1.3, 2.9};
  std::vector<ham::Vec3> pts;
  for (std::uint64_t i = 0; i < 128; ++i) pts.push_back(ham::sample_sphere(opts.seed, i));

  RowTable table{{"flow", "theta", "max_deviation", "pass"}, {}};
  auto row = [&](const std::string& flow_name, const ham::SphereFlow& flow,
                 const std::string& theta_name, const ham::Rot3& theta) {
    double dev = ham::time_reversal_deviation(flow, theta, ts, pts);
    bool pass = dev <= 1e-9;
    table.rows.push_back({flow_name, theta_name, fmt(dev), pass ? "1" : "0"});
    return pass;
  };
  bool xy = row("z-velocity", ham::top_flow, "reflect-xy-plane", ham::Rot3::reflect_xy_plane());
  bool xc = row("constant-speed", ham::constant_rotation_flow, "theta-x", ham::Rot3::theta_x());
  bool xz = row("z-velocity", ham::top_flow, "theta-x", ham::Rot3::theta_x());
  row("z-velocity", ham::top_flow, "about-z", ham::Rot3::about_z(1.0));
  manifest.check("reflect_xy_reverses_z_velocity_flow", xy);
  manifest.check("theta_x_reverses_constant_flow", xc);
  manifest.check("theta_x_commutes_with_z_velocity_flow", !xz);
  Emitter{opts, manifest}.table("timereversal", table);
  return finish(opts, manifest, t0);
}

int run_torus_hamiltonian(const CommonOpts& opts, const std::string& gamma_csv,
                          const std::string& tau_list_csv, double delta,
                          std::uint64_t mc_samples) {
  auto t0 = std::chrono::steady_clock::now();
  auto config = echo_common(opts);
  config["gamma"] = gamma_csv;
  config["tau-list"] = tau_list_csv;
  config["delta"] = fmt(delta);
  config["mc-samples"] = std::to_string(mc_samples);
  RunManifest manifest("torus-hamiltonian", config);

  auto gamma_v = parse_doubles(gamma_csv);
  ham::T2Translation gamma{gamma_v.at(0), gamma_v.at(1)};
  auto taus = parse_doubles(tau_list_csv);

  RowTable table{{"tau", "N", "I_N", "corr_even", "corr_odd", "mixing_limit", "mc_sigma",
                  "separated"},
                 {}};
  bool birkhoff_ok = true, separated_ok = true, gap_ok = true;
  for (double tau : taus) {
    ham::FlatTorusSystem sys{tau, ham::randomizing_schedule(gamma)};
    std::uint64_t n_even = opts.steps - opts.steps % 2;
    auto prof = kicked::birkhoff_profile(
        sys, {ham::T2{0.2, 0.6}},
        [](const ham::T2& p) { return std::cos(2.0 * std::numbers::pi * p.y); },
        Window{n_even, n_even});
    double i_n = prof.i_n[0][0];
    auto witness = ham::nonmixing_witness(ham::two_periodic_reversal(), tau, delta, mc_samples,
                                          opts.seed);
    table.rows.push_back({fmt(tau), std::to_string(n_even), fmt(i_n), fmt(witness.corr_even),
                          fmt(witness.corr_odd), fmt(witness.mixing_limit), fmt(witness.mc_sigma),
                          witness.separated ? "1" : "0"});
    birkhoff_ok &= std::abs(i_n) < 0.01;
    separated_ok &= witness.separated;
    gap_ok &= witness.corr_even - witness.mixing_limit > 10.0 * witness.mc_sigma &&
              witness.mixing_limit - witness.corr_odd > 10.0 * witness.mc_sigma;
  }
  manifest.check("birkhoff_abs_lt_0.01", birkhoff_ok);
  manifest.check("witness_separated", separated_ok);
  manifest.check("correlation_gaps_ge_10_sigma", gap_ok);
  Emitter{opts, manifest}.table("flat_torus", table);
  return finish(opts, manifest, t0);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"kicked: simulation and analysis of kicked sequential dynamical systems"};
  app.require_subcommand(1);

  // pre-scan for --config and splice its key=value pairs in front of the user
  // flags; options take the last value, so explicit flags override the file
  std::vector<std::string> args(argv + 1, argv + argc);
  for (std::size_t i = 0; i + 1 < args.size(); ++i) {
    if (args[i] == "--config") {
      try {
        auto kv = kicked::cli::parse_config_file(args[i + 1]);
        std::vector<std::string> spliced(args.begin(), args.begin() + 1);
        for (const auto& [k, v] : kv) spliced.push_back("--" + k + (v.empty() ? "" : "=" + v));
        spliced.insert(spliced.end(), args.begin() + 1, args.end());
        args = std::move(spliced);
      } catch (const std::exception& e) {
        std::fprintf(stderr, "configuration error: %s\n", e.what());
        return 2;
      }
      break;
    }
  }

  CommonOpts opts;

  // torus
  std::string omega_csv = "1.4142135623730951", h_csv = "1", torus_kicks = "random", x0_csv;
  auto* weyl = app.add_subcommand("torus-weyl", "normalized Weyl sums of the kicked Kronecker flow");
  add_common(weyl, opts);
  weyl->add_option("--omega", omega_csv, "frequency vector (comma separated)");
  weyl->add_option("--hvec", h_csv, "integer vector h != 0 (comma separated)");
  weyl->add_option("--kicks", torus_kicks, "none|random")->check(CLI::IsMember({"none", "random"}));
  weyl->add_option("--x0", x0_csv, "base point (comma separated)");

  double ms_a = 1.0, ms_b = 2.0;
  std::size_t ms_grid = 10000;
  std::string ms_nlist = "100,1000,10000";
  bool ms_diag = false;
  auto* meansq = app.add_subcommand("torus-meansquare",
                                    "quadrature of int |S_h(N,tau)|^2 dtau over a tau interval");
  add_common(meansq, opts);
  meansq->add_option("--omega", omega_csv, "frequency vector");
  meansq->add_option("--hvec", h_csv, "integer vector");
  meansq->add_option("--kicks", torus_kicks, "none|random")->check(CLI::IsMember({"none", "random"}));
  meansq->add_option("--a", ms_a, "interval start");
  meansq->add_option("--b", ms_b, "interval end");
  meansq->add_option("--grid", ms_grid, "quadrature grid size");
  meansq->add_option("--n-list", ms_nlist, "N values (comma separated)");
  meansq->add_flag("--diagonal-only", ms_diag, "disable off-diagonal phases");

  std::string burago_taus = "1,2,3";
  auto* burago = app.add_subcommand("torus-burago", "Burago's valuation-kick counterexample");
  add_common(burago, opts);
  burago->add_option("--tau-list", burago_taus, "integer periods (comma separated)");

  // psl2
  std::string psl2_kicks = "identity";
  double tau0 = 1.5, c_range = 1.0, threshold = 1e6;
  auto* evolve = app.add_subcommand("psl2-evolve", "kicked horocycle evolution f^(k)(tau)");
  add_common(evolve, opts);
  evolve->add_option("--kicks", psl2_kicks, "identity|htau0|unipotent-random|signs");
  evolve->add_option("--tau0", tau0, "tau0 for the h^{-tau0} kick family");
  evolve->add_option("--c-range", c_range, "uniform range of unipotent c_i");

  double q0 = 1.0, q1 = 1.0;
  auto* schro = app.add_subcommand("psl2-schrodinger", "discrete Schrodinger recursion");
  add_common(schro, opts);
  schro->add_option("--c-range", c_range, "uniform range of the potential c_i");
  schro->add_option("--q0", q0, "q_0");
  schro->add_option("--q1", q1, "q_1");

  std::uint64_t trace_k = 5;
  bool trace_exact = true;
  auto* trace = app.add_subcommand("psl2-trace", "trace of the evolution as a polynomial in tau");
  add_common(trace, opts);
  trace->add_option("--k", trace_k, "number of kicks (exact mode caps at 64)");
  trace->add_option("--exact", trace_exact, "exact rational coefficients");

  auto* escape = app.add_subcommand("psl2-escape-scan", "norm growth and escape detection");
  add_common(escape, opts);
  escape->add_option("--kicks", psl2_kicks, "identity|htau0|unipotent-random|signs");
  escape->add_option("--tau0", tau0, "tau0 for the h^{-tau0} family");
  escape->add_option("--c-range", c_range, "uniform range of unipotent c_i");
  escape->add_option("--threshold", threshold, "escape threshold (> sqrt 2)");

  std::uint64_t intervals_kmax = 100000;
  std::string intervals_emit = "covering";
  auto* intervals = app.add_subcommand("psl2-intervals", "interval-cover kick schedule");
  add_common(intervals, opts);
  intervals->add_option("--k-max", intervals_kmax, "largest index");
  intervals->add_option("--emit", intervals_emit, "covering|all")
      ->check(CLI::IsMember({"covering", "all"}));

  // quasi-morphisms
  int qm_w = 8, qm_nmax = 30, qm_pairs = 200;
  double qm_tol = 1e-8;
  std::string qm_group = "schottky";
  auto* qmp = app.add_subcommand("qm-parabolic", "parabolic quasi-morphism on PSL(2,Z)");
  add_common(qmp, opts);
  qmp->add_option("--w", qm_w, "word-length cap for the periodization");
  qmp->add_option("--n-max", qm_nmax, "powers h^n to integrate");
  qmp->add_option("--pairs", qm_pairs, "defect sample pairs");
  qmp->add_option("--tol", qm_tol, "quadrature tolerance");

  auto* qmh = app.add_subcommand("qm-hyperbolic", "hyperbolic quasi-morphism via a bump one-form");
  add_common(qmh, opts);
  qmh->add_option("--w", qm_w, "word-length cap");
  qmh->add_option("--n-max", qm_nmax, "powers g^n to integrate");
  qmh->add_option("--pairs", qm_pairs, "defect sample pairs");
  qmh->add_option("--group", qm_group, "schottky|dihedral");
  qmh->add_option("--tol", qm_tol, "quadrature tolerance");

  // hamiltonian
  std::string top_kicks = "identity";
  double top_eps = 0.12;
  std::size_t top_samples = 8;
  auto* tscan = app.add_subcommand("top-scan", "kicked-top recurrence scan over tau");
  add_common(tscan, opts);
  tscan->add_option("--kicks", top_kicks, "identity|phi|reversal|random-set");
  tscan->add_option("--eps", top_eps, "A_eps = {H > (1-eps) max H}");
  tscan->add_option("--samples", top_samples, "sample points");

  auto* trev = app.add_subcommand("top-timereversal", "time-reversing symmetry checks");
  add_common(trev, opts);

  std::string flat_gamma = "1.4142135623730951,1.7320508075688772";
  std::string flat_taus = "0.3,0.8,1.7";
  double flat_delta = 0.05;
  std::uint64_t flat_mc = 1000000;
  auto* fham = app.add_subcommand("torus-hamiltonian",
                                  "flat-torus randomizing schedule and non-mixing witness");
  add_common(fham, opts);
  fham->add_option("--gamma", flat_gamma, "translation vector (comma separated)");
  fham->add_option("--tau-list", flat_taus, "periods (comma separated)");
  fham->add_option("--delta", flat_delta, "measure of the witness ball");
  fham->add_option("--mc-samples", flat_mc, "Monte-Carlo samples");

  for (auto* sub : app.get_subcommands({}))
    for (auto* o : sub->get_options()) o->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);

  try {
    std::vector<const char*> cargs;
    cargs.push_back(argv[0]);
    for (const auto& s : args) cargs.push_back(s.c_str());
    app.parse(static_cast<int>(cargs.size()), cargs.data());

    if (weyl->parsed()) return run_torus_weyl(opts, omega_csv, h_csv, torus_kicks, x0_csv);
    if (meansq->parsed())
      return run_torus_meansquare(opts, omega_csv, h_csv, torus_kicks, ms_a, ms_b, ms_grid,
                                  ms_nlist, ms_diag);
    if (burago->parsed()) return run_torus_burago(opts, burago_taus);
    if (evolve->parsed()) return run_psl2_evolve(opts, psl2_kicks, tau0, c_range);
    if (schro->parsed()) return run_psl2_schrodinger(opts, c_range, q0, q1);
    if (trace->parsed()) return run_psl2_trace(opts, trace_k, trace_exact);
    if (escape->parsed()) return run_psl2_escape(opts, psl2_kicks, tau0, c_range, threshold);
    if (intervals->parsed()) return run_psl2_intervals(opts, intervals_kmax, intervals_emit);
    if (qmp->parsed()) return run_qm_parabolic(opts, qm_w, qm_nmax, qm_pairs, qm_tol);
    if (qmh->parsed()) return run_qm_hyperbolic(opts, qm_w, qm_nmax, qm_pairs, qm_group, qm_tol);
    if (tscan->parsed()) return run_top_scan(opts, top_kicks, top_eps, top_samples);
    if (trev->parsed()) return run_top_timereversal(opts);
    if (fham->parsed()) return run_torus_hamiltonian(opts, flat_gamma, flat_taus, flat_delta, flat_mc);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "configuration error: %s\n", e.what());
    return 2;
  }
  return 2;
}
