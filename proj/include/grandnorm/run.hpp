// Copyright 2026 The grandnorm Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
#ifndef GRANDNORM_RUN_HPP
#define GRANDNORM_RUN_HPP

// Command dispatch behind the grandnorm CLI. run() is pure apart from reading
// input files; emit() renders and writes the result.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <iostream>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "grandnorm/generators.hpp"
#include "grandnorm/grid_function.hpp"
#include "grandnorm/io.hpp"
#include "grandnorm/monotonicity.hpp"
#include "grandnorm/norms.hpp"
#include "grandnorm/pgrid.hpp"
#include "grandnorm/report.hpp"
#include "grandnorm/step_function.hpp"
#include "grandnorm/verify.hpp"
#include "grandnorm/weighted_ops.hpp"

namespace grandnorm {

inline constexpr int kExitPass = 0;
inline constexpr int kExitFail = 1;
inline constexpr int kExitCsv = 2;
inline constexpr int kExitUsage = 64;

/// Invalid configuration (maps to exit 64).
class UsageError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

enum class Command { norm, verify, operators, monotone, corpus };

inline const char* to_string(Command c) {
  switch (c) {
    case Command::norm: return "norm";
    case Command::verify: return "verify";
    case Command::operators: return "operators";
    case Command::monotone: return "monotone";
    case Command::corpus: return "corpus";
  }
  return "?";
}

struct RunConfig {
  Command command = Command::norm;
  std::string sub;                  ///< verify/operators/monotone subcommand
  std::vector<std::string> gens;    ///< generator specs
  std::string input;                ///< step CSV (norm, verify) or grid CSV (operators, monotone)
  std::string weight;               ///< weight grid CSV
  std::string boundary;             ///< boundary CSV for monotone relax
  std::vector<double> thetas;       ///< empty: command default
  double p_max = kDefaultPMax;
  double ratio = kDefaultRatio;
  std::optional<double> tol;        ///< empty: command default
  std::uint64_t seed = 1;
  std::string out;                  ///< empty: stdout
  std::string format = "json";
  std::optional<double> p;          ///< exponent for grand L^p, A_p, relax, Holder q
  std::optional<double> theta_prime;
  std::size_t pairs = 1000;         ///< verify axioms
  std::optional<std::size_t> count; ///< random corpus size
  std::optional<std::size_t> n;     ///< resolution
  double alpha = 0.5;               ///< exponent of the default power weight |x|^alpha
  std::string op = "maximal";       ///< operators opnorm: maximal | cz
  std::string form = "outer";       ///< grand L^p weighting: outer | inner
  std::string grid_out;             ///< optional CSV of the grid function produced

  void validate() const {
    auto bad = [](const std::string& m) { throw UsageError(m); };
    static const std::vector<std::string> verify_subs = {"axioms",    "inclusions", "weak-strong",
                                                         "thm31",     "exp-equiv",  "layer-cake"};
    static const std::vector<std::string> op_subs = {"maximal", "hilbert", "ap", "doubling", "opnorm"};
    static const std::vector<std::string> mono_subs = {"check", "relax"};
    auto one_of = [](const std::string& s, const std::vector<std::string>& v) {
      return std::find(v.begin(), v.end(), s) != v.end();
    };
    switch (command) {
      case Command::verify:
        if (!one_of(sub, verify_subs)) bad("verify: unknown check '" + sub + "'");
        break;
      case Command::operators:
        if (!one_of(sub, op_subs)) bad("operators: unknown operator '" + sub + "'");
        break;
      case Command::monotone:
        if (!one_of(sub, mono_subs)) bad("monotone: unknown action '" + sub + "'");
        break;
      default:
        if (!sub.empty()) bad(std::string(to_string(command)) + " takes no subcommand");
    }
    for (double t : thetas) {
      if (!(std::isfinite(t) && t >= 0.0)) bad("theta must be finite and >= 0");
    }
    if (!(std::isfinite(p_max) && p_max >= 1.0)) bad("--p-max must be >= 1");
    if (!(std::isfinite(ratio) && ratio > 1.0)) bad("--ratio must be > 1");
    if (tol && !(std::isfinite(*tol) && *tol > 0.0)) bad("--tol must be positive");
    if (format != "json" && format != "csv") bad("--format must be json or csv");
    if (op != "maximal" && op != "cz") bad("--operator must be maximal or cz");
    if (form != "outer" && form != "inner") bad("--form must be outer or inner");
    if (p && !std::isfinite(*p)) bad("--p must be finite");
    if (!input.empty() && !gens.empty()) bad("--input and --gen are mutually exclusive");
  }
};

struct RunOutcome {
  SuiteReport report;
  /// Non-report output (the corpus command emits a step CSV instead).
  std::string payload;
  int exit_code = kExitPass;
};

namespace detail {

inline double tol_or(const RunConfig& c, double fallback) { return c.tol ? *c.tol : fallback; }

inline std::vector<double> thetas_or(const RunConfig& c, std::vector<double> fallback) {
  return c.thetas.empty() ? fallback : c.thetas;
}

struct LoadedStep {
  StepFunction f;
  std::optional<AnalyticFunctionSpec> spec;
  std::string source;
};

inline std::vector<LoadedStep> load_steps(const RunConfig& c) {
  std::vector<LoadedStep> out;
  if (!c.input.empty()) {
    out.push_back({read_step_csv(c.input), std::nullopt, c.input});
    return out;
  }
  for (const auto& g : c.gens) {
    AnalyticFunctionSpec spec;
    try {
      spec = parse_spec(g);
    } catch (const std::invalid_argument& e) {
      throw UsageError(std::string("--gen: ") + e.what());
    }
    out.push_back({discretize(spec), spec, spec.describe()});
  }
  return out;
}

inline LoadedStep load_one_step(const RunConfig& c, const char* who) {
  auto all = load_steps(c);
  if (all.empty()) throw UsageError(std::string(who) + ": needs --input or --gen");
  return std::move(all.front());
}

inline PGrid make_grid(const RunConfig& c) { return PGrid(c.p_max, c.ratio); }

inline nlohmann::ordered_json vec_json(std::span<const double> v) {
  nlohmann::ordered_json a = nlohmann::ordered_json::array();
  for (double x : v) a.push_back(number(x));
  return a;
}

inline nlohmann::ordered_json provenance(const RunConfig& c, const PGrid& grid) {
  nlohmann::ordered_json gens = nlohmann::ordered_json::array();
  for (const auto& g : c.gens) gens.push_back(g);
  return {{"tool", "grandnorm"},
          {"version", kVersion},
          {"command", std::string(to_string(c.command)) + (c.sub.empty() ? "" : " " + c.sub)},
          {"seed", c.seed},
          {"generators", gens},
          {"input", c.input},
          {"weight", c.weight},
          {"pgrid", to_json(describe(grid))},
          {"defaults",
           {{"p_max", kDefaultPMax},
            {"ratio", kDefaultRatio},
            {"norm_rel_tol", kDefaultRelTol},
            {"eps_grid", {{"ratio", EpsGrid{}.ratio}, {"min_fraction", EpsGrid{}.min_fraction}}},
            {"t_grid_intervals", TGrid{}.intervals},
            {"layer_cake_tol", 1e-10},
            {"axiom_triangle_slack", 1e-10},
            {"axiom_homogeneity_tol", 1e-12},
            {"monotone_tol", 1e-9},
            {"relax_tol", RelaxOptions{}.tol},
            {"relax_max_iters", RelaxOptions{}.max_iters},
            {"exp_drift_tol", 0.05},
            {"grading_ratio", kGradingRatio}}},
          {"overrides",
           {{"tol", c.tol ? number(*c.tol) : nullptr},
            {"p", c.p ? number(*c.p) : nullptr},
            {"n", c.n ? nlohmann::ordered_json(*c.n) : nullptr},
            {"count", c.count ? nlohmann::ordered_json(*c.count) : nullptr}}}};
}

// ---------------------------------------------------------------------------
// norm
// ---------------------------------------------------------------------------

inline void run_norm(const RunConfig& c, SuiteReport& r) {
  const PGrid grid = make_grid(c);
  const double rel_tol = tol_or(c, kDefaultRelTol);
  const auto loaded = load_one_step(c, "norm");
  const StepFunction& f = loaded.f;
  r.details["source"] = loaded.source;
  r.details["atoms"] = f.size();
  r.details["total_measure"] = f.total_measure();
  r.details["sup_norm"] = f.max_abs();
  r.details["exp_class_norm"] = number(exp_class_norm(f));
  nlohmann::ordered_json per = nlohmann::ordered_json::array();
  for (double theta : thetas_or(c, {1.0})) {
    const NormReport g = grand_theta_infty_norm(f, theta, grid, rel_tol);
    const NormReport w = weak_theta_norm(f, theta, grid, rel_tol);
    per.push_back({{"theta", theta}, {"grand", to_json(g)}, {"weak", to_json(w)}});
    const std::string tag = "theta=" + format_double(theta);
    r.add(upper_check("weak<=grand " + tag, w.value, g.value));
    r.add(upper_check("grand<=sup " + tag, g.value, f.max_abs()));
  }
  r.details["norms"] = per;
  if (c.p) {
    const double p = *c.p;
    if (!(p > 1.0)) throw UsageError("--p must be > 1 for the grand L^p norm");
    const GrandLpForm form = c.form == "inner" ? GrandLpForm::inner_weight : GrandLpForm::outer_weight;
    nlohmann::ordered_json lp = {{"p", p}, {"form", c.form}, {"lp_mean", number(lp_mean(f, p))}};
    nlohmann::ordered_json glp = nlohmann::ordered_json::array();
    for (double theta : thetas_or(c, {1.0})) {
      glp.push_back({{"theta", theta}, {"report", to_json(grand_lp_norm(f, theta, p, {}, form, rel_tol))}});
    }
    lp["grand_lp"] = glp;
    if (std::abs(f.total_measure() - 1.0) <= 1e-12) {
      lp["small_lp_norm"] = number(small_lp_norm(f, p));
      lp["grand_rearrangement_norm"] = number(grand_rearrangement_norm(f, p));
    } else {
      lp["rearrangement_norms"] = "skipped: total measure is not 1";
    }
    r.details["grand_lp"] = lp;
  }
}

// ---------------------------------------------------------------------------
// verify
// ---------------------------------------------------------------------------

inline void run_axioms(const RunConfig& c, SuiteReport& r) {
  const PGrid grid = make_grid(c);
  const std::size_t atoms = c.n.value_or(64);
  std::vector<std::pair<StepFunction, StepFunction>> pairs;
  pairs.reserve(c.pairs);
  for (std::size_t k = 0; k < c.pairs; ++k) pairs.push_back(random_pair(derive_seed(c.seed, k), atoms));
  const auto thetas = thetas_or(c, {0.0, 0.5, 1.0, 2.0});
  const AxiomReport a = verify_norm_axioms(pairs, thetas, grid);
  r.details["pairs"] = a.pairs;
  r.details["atoms_per_function"] = atoms;
  r.details["thetas"] = vec_json(thetas);
  r.details["worst_triangle_ratio"] = number(a.worst_triangle_ratio);
  r.details["worst_homogeneity_error"] = number(a.worst_homogeneity_error);
  r.add(upper_check("triangle_violations", static_cast<double>(a.triangle_violations), 0.0));
  r.add(upper_check("homogeneity_violations", static_cast<double>(a.homogeneity_violations), 0.0));
  r.add(upper_check("definiteness_violations", static_cast<double>(a.definiteness_violations), 0.0));
}

inline void run_inclusions(const RunConfig& c, SuiteReport& r) {
  const PGrid grid = make_grid(c);
  const auto loaded = load_one_step(c, "verify inclusions");
  const double theta = thetas_or(c, {1.0}).front();
  const double theta_prime = c.theta_prime.value_or(theta + 1.0);
  if (!(theta_prime > theta)) throw UsageError("--theta-prime must exceed --theta");
  const double q = c.p.value_or(2.0);
  const InclusionReport inc = verify_inclusions(loaded.f, theta, theta_prime, q, grid);
  r.details["source"] = loaded.source;
  r.details["theta"] = theta;
  r.details["theta_prime"] = theta_prime;
  r.details["q"] = inc.q;
  r.details["norm_theta_prime"] = number(inc.norm_theta_prime);
  r.details["norm_theta"] = number(inc.norm_theta);
  r.details["sup_norm"] = number(inc.sup_norm);
  r.details["lq_mean"] = number(inc.lq_mean);
  r.add(upper_check("norm_theta_prime<=norm_theta", inc.norm_theta_prime, inc.norm_theta));
  r.add(upper_check("norm_theta<=sup", inc.norm_theta, inc.sup_norm));
  r.add(upper_check("lq<=q^theta'*norm_theta_prime", inc.lq_mean, inc.lq_bound * (1.0 + 1e-12)));
  if (loaded.spec && loaded.spec->kind == FunctionKind::log_power) {
    const double wt = loaded.spec->theta;
    const std::size_t n0 = loaded.spec->n;
    const std::vector<std::size_t> res = {n0, 2 * n0, 4 * n0};
    const auto w = witness_log_power(wt, res, grid);
    nlohmann::ordered_json pts = nlohmann::ordered_json::array();
    double worst = 0.0;
    for (const auto& pt : w.points) {
      pts.push_back({{"n", pt.n}, {"grand", number(pt.grand_value)}, {"sup", number(pt.sup_norm)}});
      worst = std::max(worst, pt.grand_value);
    }
    r.details["witness"] = {{"theta", wt}, {"points", pts}};
    // Gamma(p theta + 1)^(1/p) <= (p theta + 1)^theta <= (2p)^theta for theta <= 1, p >= 1.
    r.add(upper_check("witness_grand_bounded", worst, std::pow(2.0, wt)));
    r.add(flag_check("witness_sup_growing", w.sup_growing()));
  }
}

inline void run_weak_strong(const RunConfig& c, SuiteReport& r) {
  const PGrid grid = make_grid(c);
  std::vector<LoadedStep> items = load_steps(c);
  if (items.empty()) {
    for (const auto& spec : analytic_corpus(c.n.value_or(100000), c.seed)) {
      items.push_back({discretize(spec), spec, spec.describe()});
    }
  }
  const double theta = thetas_or(c, {1.0}).front();
  nlohmann::ordered_json entries = nlohmann::ordered_json::array();
  std::size_t split_pairs = 0, split_viol = 0, dom_viol = 0, chain_viol = 0;
  double split_worst = 0.0, dom_worst = 0.0, chain_worst = 0.0, constant = 0.0;
  for (const auto& it : items) {
    const EquivalenceReport e = verify_equivalence(it.f, theta, grid);
    split_pairs += e.split_pairs;
    split_viol += e.split_violations;
    dom_viol += e.domination_violations;
    chain_viol += e.chain_passed() ? 0 : 1;
    split_worst = std::max(split_worst, e.split_worst_ratio);
    dom_worst = std::max(dom_worst, e.domination_worst_ratio);
    chain_worst = std::max(chain_worst, e.chain_ratio);
    constant = std::max(constant, e.observed_constant);
    entries.push_back({{"source", it.source},
                       {"grand", number(e.grand_value)},
                       {"weak", number(e.weak_value)},
                       {"l2_mean", number(e.l2_mean)},
                       {"chain_bound", number(e.chain_bound)},
                       {"observed_constant", number(e.observed_constant)},
                       {"split_worst_ratio", number(e.split_worst_ratio)},
                       {"split_worst_s", e.split_worst_s},
                       {"split_worst_p", e.split_worst_p}});
  }
  r.details["theta"] = theta;
  r.details["entries"] = entries;
  r.details["split_pairs"] = split_pairs;
  r.details["observed_constant"] = number(constant);
  r.add(upper_check("split_bound_worst_ratio", split_worst, 1.0));
  r.add(upper_check("split_bound_violations", static_cast<double>(split_viol), 0.0));
  r.add(upper_check("weak<=strong_violations", static_cast<double>(dom_viol), 0.0));
  r.add(upper_check("chain_worst_ratio", chain_worst, 1.0));
}

inline void run_exp_equiv(const RunConfig& c, SuiteReport& r) {
  const PGrid grid = make_grid(c);
  const std::size_t n = c.n.value_or(100000);
  const auto corpus = exp_corpus(n);
  const ExpEquivalenceReport e = verify_exp_equivalence(corpus, grid);
  nlohmann::ordered_json entries = nlohmann::ordered_json::array();
  for (const auto& x : e.entries) {
    entries.push_back({{"spec", x.spec.describe()},
                       {"grand_coarse", number(x.grand_coarse)},
                       {"exp_coarse", number(x.exp_coarse)},
                       {"grand_fine", number(x.grand_fine)},
                       {"exp_fine", number(x.exp_fine)},
                       {"ratio_coarse", number(x.ratio_coarse())},
                       {"ratio_fine", number(x.ratio_fine())},
                       {"drift", number(x.drift())}});
  }
  r.details["entries"] = entries;
  r.details["ratio_bracket"] = {number(e.min_ratio), number(e.max_ratio)};
  r.add(upper_check("refinement_drift", e.worst_drift, tol_or(c, 0.05)));
  // Closed forms: ||-ln x||_EXP = 2 and ||c||_EXP = c / ln 2.
  for (const auto& x : e.entries) {
    if (x.spec.kind == FunctionKind::log_power && x.spec.theta == 1.0) {
      r.add(upper_check("exp_norm(-ln x) rel err", std::abs(x.exp_fine / 2.0 - 1.0), 0.01));
    }
    if (x.spec.kind == FunctionKind::constant) {
      const double exact = std::abs(x.spec.c) / std::numbers::ln2;
      r.add(upper_check("exp_norm(constant) rel err", std::abs(x.exp_fine / exact - 1.0), 1e-9));
    }
  }
}

inline void run_layer_cake(const RunConfig& c, SuiteReport& r) {
  std::vector<StepFunction> corpus;
  for (auto& it : load_steps(c)) corpus.push_back(std::move(it.f));
  if (corpus.empty()) {
    const std::size_t count = c.count.value_or(100);
    for (std::size_t k = 0; k < count; ++k) {
      corpus.push_back(discretize(AnalyticFunctionSpec::random_step(derive_seed(c.seed, k), c.n.value_or(64))));
    }
  }
  const std::vector<double> exps = {1.0, 1.5, 2.0, 3.0, 7.0};
  const LayerCakeSweep s = verify_layer_cake(corpus, exps, tol_or(c, 1e-10));
  r.details["functions"] = corpus.size();
  r.details["exponents"] = vec_json(exps);
  r.details["cases"] = s.cases;
  r.add(upper_check("worst_relative_discrepancy", s.worst_discrepancy, tol_or(c, 1e-10)));
}

// ---------------------------------------------------------------------------
// operators
// ---------------------------------------------------------------------------

inline Weight load_weight(const RunConfig& c, const GridFunction& like) {
  if (c.weight.empty()) return Weight::unit_like(like);
  Weight w = read_weight_csv(c.weight);
  if (!w.grid().same_geometry(like)) throw UsageError("--weight grid does not match the function grid");
  return w;
}

/// |x|^alpha at the n cell midpoints of (-1, 1).
inline Weight power_weight(double alpha, std::size_t n) {
  const double h = 2.0 / static_cast<double>(n);
  return Weight(GridFunction::sample_line(n, h, -1.0 + 0.5 * h,
                                          [alpha](double x) { return std::pow(std::abs(x), alpha); }));
}

inline void attach_grid(const RunConfig& c, SuiteReport& r, const GridFunction& g) {
  if (!c.grid_out.empty()) write_atomically(c.grid_out, grid_csv(g));
  nlohmann::ordered_json s = nlohmann::ordered_json::array();
  for (double v : g.samples()) s.push_back(number(v));
  r.details["output"] = {{"dim", g.dim()}, {"nx", g.nx()}, {"ny", g.ny()}, {"h", g.h()},
                         {"x0", g.x0()}, {"y0", g.y0()}, {"samples", s}};
}

inline void run_maximal(const RunConfig& c, SuiteReport& r) {
  const bool fallback = c.input.empty();
  const std::size_t n = c.n.value_or(512);
  const GridFunction f = fallback
                             ? GridFunction::sample_line(n, 1.0 / static_cast<double>(n),
                                                         0.5 / static_cast<double>(n),
                                                         [](double x) { return x <= 0.5 ? 1.0 : 0.0; })
                             : read_grid_csv(c.input);
  const Weight w = load_weight(c, f);
  const GridFunction m = maximal_operator(f, w);
  double worst = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < f.size(); ++k) worst = std::min(worst, m[k] - std::abs(f[k]));
  r.details["source"] = fallback ? "indicator of [0, 1/2] on [0, 1]" : c.input;
  r.add(lower_check("min(Mf-|f|)", worst, 0.0));
  if (fallback && c.weight.empty()) {
    double err = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
      const double x = f.x(k);
      if (x >= 0.6 && x <= 1.0) err = std::max(err, std::abs(m[k] * 2.0 * x - 1.0));
    }
    r.add(upper_check("max rel err vs 1/(2x) on [0.6,1]", err, 0.02));
  }
  attach_grid(c, r, m);
}

inline void run_hilbert(const RunConfig& c, SuiteReport& r) {
  const KernelSpec k = KernelSpec::hilbert();
  if (!c.input.empty()) {
    const GridFunction f = read_grid_csv(c.input);
    const GridFunction t = cz_apply(f, k);
    double ef = 0.0, et = 0.0;
    for (std::size_t i = 0; i < f.size(); ++i) {
      ef += f[i] * f[i] * f.h();
      et += t[i] * t[i] * f.h();
    }
    r.details["source"] = c.input;
    r.details["energy_in"] = number(ef);
    r.details["energy_out"] = number(et);
    r.add(flag_check("output finite", std::isfinite(et)));
    attach_grid(c, r, t);
    return;
  }
  // Indicator of [-1, 1] on [-4, 4], h = 1/256: Tf(2) = ln(3) / pi.
  const std::size_t per_unit = c.n.value_or(256);
  const double h = 1.0 / static_cast<double>(per_unit);
  const GridFunction f = GridFunction::sample_line(8 * per_unit + 1, h, -4.0,
                                                   [](double x) { return std::abs(x) <= 1.0 ? 1.0 : 0.0; });
  const GridFunction t = cz_apply(f, k);
  const double at2 = t[6 * per_unit];
  const double exact = std::log(3.0) / std::numbers::pi;
  r.details["source"] = "indicator of [-1, 1] on [-4, 4]";
  r.details["Tf(2)"] = at2;
  r.details["exact"] = exact;
  r.add(upper_check("rel err Tf(2)", std::abs(at2 / exact - 1.0), 0.02));

  // Odd bump x exp(-x^2) on [-6, 6]: the transform preserves the L^2 norm.
  // The discrete multiplier is 1 - |xi| h / pi, so the energy error is O(h).
  const double hb = 1.0 / 256.0;
  const GridFunction b =
      GridFunction::sample_line(3073, hb, -6.0, [](double x) { return x * std::exp(-x * x); });
  const GridFunction tb = cz_apply(b, k);
  double eb = 0.0, etb = 0.0;
  for (std::size_t i = 0; i < b.size(); ++i) {
    eb += b[i] * b[i];
    etb += tb[i] * tb[i];
  }
  r.details["bump_energy_ratio"] = etb / eb;
  r.add(upper_check("rel err L2 isometry", std::abs(etb / eb - 1.0), 0.01));
  attach_grid(c, r, t);
}

inline Weight operator_weight(const RunConfig& c) {
  if (!c.weight.empty()) return read_weight_csv(c.weight);
  return power_weight(c.alpha, c.n.value_or(1024));
}

inline void run_ap(const RunConfig& c, SuiteReport& r) {
  const Weight w = operator_weight(c);
  const double p = c.p.value_or(2.0);
  if (!(p > 1.0)) throw UsageError("--p must be > 1 for A_p");
  const ApReport a = ap_constant(w, p);
  r.details["weight"] = c.weight.empty() ? "|x|^" + format_double(c.alpha) + " on (-1, 1)" : c.weight;
  r.details["p"] = p;
  r.details["constant"] = number(a.constant);
  r.details["witness"] = {{"i0", a.witness.i0}, {"j0", a.witness.j0}, {"side", a.witness.side}};
  nlohmann::ordered_json res = nlohmann::ordered_json::array();
  for (const auto& x : a.resolutions) res.push_back({{"cells_per_axis", x.cells_per_axis}, {"constant", number(x.constant)}});
  r.details["resolutions"] = res;
  r.details["diverging"] = a.diverging;
  if (!a.note.empty()) r.details["note"] = a.note;
  r.add(lower_check("constant>=1", a.constant, 1.0 - 1e-12));
  r.add(flag_check("not diverging", !a.diverging));
}

inline void run_doubling(const RunConfig& c, SuiteReport& r) {
  const Weight w = operator_weight(c);
  const DoublingReport d = doubling_constant(w);
  r.details["weight"] = c.weight.empty() ? "|x|^" + format_double(c.alpha) + " on (-1, 1)" : c.weight;
  r.details["constant"] = number(d.constant);
  r.details["cubes_checked"] = d.cubes_checked;
  r.details["witness"] = {{"i0", d.witness.i0}, {"j0", d.witness.j0}, {"side", d.witness.side}};
  r.add(lower_check("constant>=1", d.constant, 1.0));
  r.add(flag_check("constant finite", std::isfinite(d.constant)));
}

inline void run_opnorm(const RunConfig& c, SuiteReport& r) {
  const PGrid grid = make_grid(c);
  const bool cz = c.op == "cz";
  const std::size_t n = c.n.value_or(512);
  GridCorpusSpec spec{c.seed, c.count.value_or(50), cz, -4.0, 4.0};
  const auto coarse = grid_corpus(spec, n);
  const auto fine = grid_corpus(spec, 2 * n);
  const Weight wc = c.weight.empty() ? Weight::unit_like(coarse.front()) : load_weight(c, coarse.front());
  const Weight wf = Weight::unit_like(fine.front());
  const double drift_tol = tol_or(c, 0.05);
  nlohmann::ordered_json per = nlohmann::ordered_json::array();
  const auto op = cz ? OperatorKind::cz : OperatorKind::maximal;
  const double q = c.p.value_or(2.0);
  for (double theta : thetas_or(c, {0.0, 1.0, 2.0})) {
    const OperatorNormReport a = operator_norm_estimate(op, wc, theta, coarse, grid, KernelSpec::hilbert(), q);
    const std::string tag = "theta=" + format_double(theta);
    nlohmann::ordered_json curve = nlohmann::ordered_json::array();
    for (const auto& pt : a.per_p) curve.push_back({number(pt.p), number(pt.ratio)});
    nlohmann::ordered_json entry = {{"theta", theta}, {"max_ratio", number(a.max_ratio)},
                                    {"skipped", a.skipped}, {"per_p", curve}};
    r.add(flag_check("max_ratio finite " + tag, std::isfinite(a.max_ratio)));
    if (c.weight.empty()) {
      const OperatorNormReport b = operator_norm_estimate(op, wf, theta, fine, grid, KernelSpec::hilbert(), q);
      const double drift = std::abs(b.max_ratio / a.max_ratio - 1.0);
      entry["max_ratio_refined"] = number(b.max_ratio);
      r.add(upper_check("refinement drift " + tag, drift, drift_tol));
    }
    if (cz) {
      entry["holder_q"] = a.holder_q;
      entry["holder_worst_ratio"] = number(a.holder_worst_ratio);
      r.add(upper_check("holder violations " + tag, static_cast<double>(a.holder_violations), 0.0));
    }
    per.push_back(entry);
  }
  r.details["operator"] = c.op;
  r.details["corpus"] = {{"count", spec.count}, {"smooth", spec.smooth}, {"n", n}, {"interval", {spec.lo, spec.hi}}};
  r.details["thetas"] = per;
}

// ---------------------------------------------------------------------------
// monotone
// ---------------------------------------------------------------------------

inline void add_monotone(SuiteReport& r, const MonotoneReport& m) {
  r.details["balls_checked"] = m.balls_checked;
  r.details["tolerance"] = m.tolerance;
  if (m.violation) {
    const auto& v = *m.violation;
    r.details["violation"] = {{"center", {v.ci, v.cj}}, {"radius", v.radius}, {"point", {v.pi, v.pj}},
                              {"value", v.value}, {"boundary_min", v.boundary_min},
                              {"boundary_max", v.boundary_max}};
  }
  r.add(flag_check("weakly monotone", m.passed));
}

inline void run_monotone_check(const RunConfig& c, SuiteReport& r) {
  if (c.input.empty()) throw UsageError("monotone check: needs --input (2D grid CSV)");
  const GridFunction u = read_grid_csv(c.input);
  if (u.dim() != 2) throw UsageError("monotone check: the grid must be 2D");
  r.details["source"] = c.input;
  add_monotone(r, weak_monotone_check(u, tol_or(c, 1e-9)));
}

inline void run_relax(const RunConfig& c, SuiteReport& r) {
  const std::size_t n = c.n.value_or(33);
  const double p = c.p.value_or(2.0);
  if (!(p > 1.0 && p <= 8.0)) throw UsageError("--p must lie in (1, 8] for relax");
  const BoundaryData g = c.boundary.empty() ? BoundaryData::random(n, n, c.seed)
                                            : read_boundary_csv(c.boundary, n, n);
  RelaxOptions opt;
  if (c.tol) opt.tol = *c.tol;
  const RelaxResult res = relax_p(g, p, opt);
  r.details["n"] = n;
  r.details["p"] = p;
  r.details["boundary"] = c.boundary.empty() ? "uniform [0,1), seed " + std::to_string(c.seed) : c.boundary;
  r.details["sweeps"] = res.sweeps;
  r.details["last_update"] = res.last_update;
  r.details["energy_initial"] = res.energy.front();
  r.details["energy_final"] = res.energy.back();
  r.add(flag_check("converged", res.converged));
  r.add(flag_check("energy nonincreasing", res.energy_monotone));
  add_monotone(r, weak_monotone_check(res.u));
  const PGrid grid = make_grid(c);
  nlohmann::ordered_json sob = nlohmann::ordered_json::array();
  double prev = std::numeric_limits<double>::infinity();
  bool decreasing = true;
  auto thetas = thetas_or(c, {0.5, 1.0, 2.0});
  std::sort(thetas.begin(), thetas.end());
  for (double theta : thetas) {
    const NormReport s = grand_sobolev_norm(res.u, theta, grid);
    sob.push_back({{"theta", theta}, {"report", to_json(s)}});
    decreasing = decreasing && s.value <= prev;
    prev = s.value;
  }
  r.details["grand_sobolev"] = sob;
  r.add(flag_check("grand sobolev norm nonincreasing in theta", decreasing));
  attach_grid(c, r, res.u);
}

}  // namespace detail

/// Executes a validated configuration. Throws UsageError, ParseError or
/// std::invalid_argument; see emit() for the exit-code mapping.
inline RunOutcome run(const RunConfig& c) {
  c.validate();
  RunOutcome o;
  SuiteReport& r = o.report;
  r.suite = std::string(to_string(c.command)) + (c.sub.empty() ? "" : " " + c.sub);
  r.provenance = detail::provenance(c, detail::make_grid(c));
  switch (c.command) {
    case Command::norm: detail::run_norm(c, r); break;
    case Command::verify:
      if (c.sub == "axioms") detail::run_axioms(c, r);
      else if (c.sub == "inclusions") detail::run_inclusions(c, r);
      else if (c.sub == "weak-strong" || c.sub == "thm31") detail::run_weak_strong(c, r);
      else if (c.sub == "exp-equiv") detail::run_exp_equiv(c, r);
      else detail::run_layer_cake(c, r);
      break;
    case Command::operators:
      if (c.sub == "maximal") detail::run_maximal(c, r);
      else if (c.sub == "hilbert") detail::run_hilbert(c, r);
      else if (c.sub == "ap") detail::run_ap(c, r);
      else if (c.sub == "doubling") detail::run_doubling(c, r);
      else detail::run_opnorm(c, r);
      break;
    case Command::monotone:
      if (c.sub == "check") detail::run_monotone_check(c, r);
      else detail::run_relax(c, r);
      break;
    case Command::corpus: {
      const auto loaded = detail::load_one_step(c, "corpus");
      o.payload = step_csv(loaded.f);
      return o;
    }
  }
  o.exit_code = r.passed() ? kExitPass : kExitFail;
  return o;
}

inline std::string render(const RunOutcome& o, const std::string& format) {
  if (!o.payload.empty()) return o.payload;
  if (format == "csv") return to_csv(o.report);
  return to_json(o.report).dump(2) + "\n";
}

/// run() plus output and error handling. Returns the process exit code:
/// 0 pass, 1 fail, 2 malformed CSV, 64 invalid configuration.
inline int emit(const RunConfig& c, std::ostream& out, std::ostream& err) {
  try {
    const RunOutcome o = run(c);
    const std::string text = render(o, c.format);
    if (c.out.empty()) out << text;
    else write_atomically(c.out, text);
    return o.exit_code;
  } catch (const ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kExitCsv;
  } catch (const std::invalid_argument& e) {
    err << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitFail;
  }
}

}  // namespace grandnorm

#endif  // GRANDNORM_RUN_HPP
