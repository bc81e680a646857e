#include "cli.hpp"

#include <CLI11.hpp>
#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "modkit/constructions.hpp"
#include "modkit/expander.hpp"
#include "modkit/io.hpp"
#include "modkit/learner.hpp"
#include "modkit/metrics.hpp"
#include "modkit/parallel.hpp"

namespace modkit::cli {
namespace {

class Report {
 public:
  explicit Report(std::string command) : command_(std::move(command)) {}

  Json inputs = Json::object();
  Json results = Json::object();

  void check(const std::string& name, bool pass, const std::vector<WideSet>& witness = {}, const std::string& detail = "") {
    Json c = {{"name", name}, {"status", pass ? "pass" : "fail"}};
    if (!detail.empty()) c["detail"] = detail;
    if (!witness.empty()) {
      Json w = Json::array();
      for (const auto& s : witness) w.push_back(format_set(s));
      c["witness"] = w;
    }
    checks_.push_back(c);
    ok_ = ok_ && pass;
  }

  bool ok() const { return ok_; }

  Json document(double seconds) const {
    return {{"command", command_}, {"inputs", inputs}, {"results", results}, {"checks", checks_}, {"timing", {{"wall_seconds", seconds}}}};
  }

 private:
  std::string command_;
  Json checks_ = Json::array();
  bool ok_ = true;
};

struct Loaded {
  SetFunction f;
  std::optional<RuleFunction> rule;
  std::optional<AdversarialInstance> adversarial;
};

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string part;
  while (std::getline(ss, part, sep)) out.push_back(part);
  return out;
}

int to_int(const std::string& s) {
  std::size_t used = 0;
  const int v = std::stoi(s, &used);
  if (used != s.size()) throw std::invalid_argument("not an integer: " + s);
  return v;
}

double to_double(const std::string& s) {
  std::size_t used = 0;
  const double v = std::stod(s, &used);
  if (used != s.size()) throw std::invalid_argument("not a number: " + s);
  return v;
}

/// A file path, or one of the builtin names (pawlik:k, symm:n:eps, four,
/// km20, km70, adversarial:n:delta:seed, noisy:n:delta:seed).
Loaded resolve(const std::string& spec) {  // NOLINT(misc-no-recursion)
  if (std::filesystem::exists(spec)) {
    const Json doc = load_json(spec);
    // Rule-evaluated and oracle builtins are stored as descriptors, not tables.
    if (doc.value("kind", std::string()) == "descriptor") return resolve(doc.at("builtin").get<std::string>());
    return {function_from_json(doc), std::nullopt, std::nullopt};
  }
  const auto p = split(spec, ':');
  const auto need = [&](std::size_t count) {
    if (p.size() != count) throw std::invalid_argument("builtin '" + p[0] + "' expects " + std::to_string(count - 1) + " parameters");
  };
  const std::string& name = p.empty() ? spec : p[0];
  if (name == "pawlik") {
    need(2);
    return {pawlik(to_int(p[1])), std::nullopt, std::nullopt};
  }
  if (name == "symm") {
    need(3);
    return {symmetric_example(to_int(p[1]), to_double(p[2])), std::nullopt, std::nullopt};
  }
  if (name == "four") {
    need(1);
    return {four_item_worstcase(), std::nullopt, std::nullopt};
  }
  if (name == "km20" || name == "km70") {
    need(1);
    RuleFunction r = name == "km20" ? km20() : km70();
    return {r.as_set_function(), r, std::nullopt};
  }
  if (name == "adversarial") {
    need(4);
    AdversarialInstance inst = adversarial(to_int(p[1]), to_double(p[2]), std::stoull(p[3]));
    return {inst.f, std::nullopt, inst};
  }
  if (name == "noisy") {
    need(4);
    const int n = to_int(p[1]);
    const std::uint64_t seed = std::stoull(p[3]);
    return {noisy_linear(random_linear(n, seed), to_double(p[2]), seed), std::nullopt, std::nullopt};
  }
  throw std::invalid_argument("no such file or builtin function: " + spec);
}

Json eps_json(const EpsResult& r) {
  Json j = {{"eps", r.eps}, {"exact", r.exact}};
  if (!r.exact) {
    j["samples"] = r.samples;
    j["seed"] = r.seed;
  }
  if (r.witness) {
    j["witness"] = {{"S", format_set(r.witness->s)}, {"T", format_set(r.witness->t)}, {"violation", r.witness->value}};
  }
  return j;
}

Json linear_coeffs(const LinearFunction& g) { return {{"c0", g.c0}, {"coeffs", g.coeffs}}; }

ScanMode mode_for(std::uint64_t samples, std::uint64_t seed) {
  return samples == 0 ? ScanMode::exact() : ScanMode::sample(samples, seed);
}

void add_rule_checks(Report& rep, const CertificateReport& cr) {
  for (const auto& c : cr.checks) rep.check(c.name, c.pass, c.witness, c.detail);
}

void verify_rule(Report& rep, const RuleFunction& f, VerifyLevel level, std::uint64_t samples, std::uint64_t pairs,
                 std::uint64_t seed) {
  const CertificateReport cr = km_certificates(f, samples, seed, level, pairs);
  add_rule_checks(rep, cr);
  rep.results["n"] = f.universe().n();
  rep.results["M"] = f.M();
  rep.results["claim"] = {{"variant", to_string(f.claim().variant)}, {"eps", f.claim().eps}};
  rep.results["max_sampled_violation"] = cr.max_sampled_violation;
  rep.results["max_structural_violation"] = cr.max_structural_violation;
  rep.results["samples"] = cr.samples;
  rep.results["pair_samples"] = cr.pair_samples;
  rep.results["seed"] = cr.seed;
  if (f.claim().variant == Variant::strong) {
    rep.check("claimed_eps_attained_structurally", cr.max_structural_violation == f.claim().eps);
  }
  const StructuralReport sr = structural_claims(f.universe());
  if (f.universe().k() >= 4) {
    rep.check("structural_containment", sr.containment.pass, sr.containment.witness, sr.containment.detail);
  } else {
    for (const auto& c : sr.weak_items) rep.check("structural_" + c.name, c.pass, c.witness, c.detail);
  }
  if (cr.exact_eps) {
    rep.results["exact_eps"] = *cr.exact_eps;
    rep.results["exact_max_abs"] = *cr.exact_max_abs;
    rep.check("claimed_eps_exact", *cr.exact_eps == f.claim().eps);
    rep.results["ratio"] = f.M() / *cr.exact_eps;
  } else if (cr.max_sampled_violation > 0) {
    rep.results["ratio"] = f.M() / cr.max_sampled_violation;
  }
}

void verify_table(Report& rep, const std::string& name, const SetFunction& f) {
  const ModularityReport mr = modularity_report(f);
  const LinearFit fit = closest_linear(f);
  rep.results["eps_weak"] = eps_json(mr.weak);
  rep.results["eps_strong"] = eps_json(mr.strong);
  rep.results["delta"] = fit.delta;
  rep.results["certificate_lower_bound"] = fit.certificate.lower_bound;
  rep.results["ratio_weak"] = mr.weak.eps > 0 ? fit.delta / mr.weak.eps : 0.0;
  rep.results["ratio_strong"] = mr.strong.eps > 0 ? fit.delta / mr.strong.eps : 0.0;
  rep.check("certificate_tight", std::abs(fit.certificate.lower_bound - fit.delta) <= 1e-6 && fit.certificate.marginal_gap <= 1e-6);
  if (name == "four") {
    rep.check("eps_strong_is_2", std::abs(mr.strong.eps - 2) <= 1e-9);
    rep.check("delta_is_1", std::abs(fit.delta - 1) <= 1e-6);
  } else if (name.rfind("pawlik", 0) == 0) {
    rep.check("eps_weak_is_1", std::abs(mr.weak.eps - 1) <= 1e-9);
    rep.check("eps_strong_is_2", std::abs(mr.strong.eps - 2) <= 1e-9);
    rep.check("delta_below_1.5", fit.delta < 1.5);
  }
}

void write_doc(const Json& doc, const std::string& path, std::ostream& out) {
  if (path.empty()) {
    out << doc.dump(2) << "\n";
  } else {
    save_json(path, doc);
  }
}

Json bounds_json(const std::vector<BoundValue>& values) {
  Json j = Json::object();
  for (const auto& v : values) j[v.name] = v.value;
  return j;
}

BoundProfile profile_from_json(const Json& doc) {
  BoundProfile p = paper_profile();
  p.name = doc.value("name", std::string("custom"));
  if (doc.contains("tuples")) {
    for (const auto& [key, t] : doc.at("tuples").items()) {
      p.tuples[key] = {t.at("alpha").get<double>(), t.at("r").get<double>(), t.at("theta").get<double>()};
    }
  }
  if (doc.contains("scalars")) {
    for (const auto& [key, v] : doc.at("scalars").items()) p.scalars[key] = v.get<double>();
  }
  return p;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"modkit: approximately modular set functions"};
  app.require_subcommand(1);
  unsigned threads = 0;
  std::string report_path;
  app.add_option("--threads", threads, "Worker threads (default: MODKIT_THREADS or all cores)");
  app.add_option("--report", report_path, "Write the JSON report here instead of stdout");

  std::string fn;
  std::string set_text;
  std::string variant = "both";
  std::uint64_t samples = 0;
  std::uint64_t pair_samples = 0;
  std::uint64_t seed = 1;

  auto* eval = app.add_subcommand("eval", "Evaluate a function on one set");
  eval->add_option("--fn", fn, "Function file or builtin")->required();
  eval->add_option("--set", set_text, "Set as 0x.., 0b.. or an item list")->required();

  auto* eps = app.add_subcommand("eps", "Modularity violation (exact, or sampled with --samples)");
  eps->add_option("--fn", fn)->required();
  eps->add_option("--variant", variant)->check(CLI::IsMember({"weak", "strong", "both"}));
  eps->add_option("--samples", samples, "Sampled pairs (0 = exhaustive)");
  eps->add_option("--seed", seed);

  auto* fit = app.add_subcommand("fit", "Closest linear function");
  fit->add_option("--fn", fn)->required();
  fit->add_option("--samples", samples, "Sampled sets (0 = exhaustive)");
  fit->add_option("--seed", seed);

  std::string method = "hadamard";
  double delta = 0.0;
  std::string out_path;
  std::string profile_path;
  int profile_samples = 1000;
  auto* learn = app.add_subcommand("learn", "Learn a linear function from nonadaptive queries");
  learn->add_option("--fn", fn)->required();
  learn->add_option("--method", method)->check(CLI::IsMember({"hadamard", "lp"}));
  learn->add_option("--delta", delta, "Noise level (LP band and profile envelope)");
  learn->add_option("--out", out_path, "Write the learned linear function here");
  learn->add_option("--profile", profile_path, "Write the error profile CSV here");
  learn->add_option("--profile-samples", profile_samples);
  learn->add_option("--seed", seed);

  std::string name;
  auto* construct = app.add_subcommand("construct", "Write a builtin function as a table file");
  construct->add_option("name", name)->required();
  construct->add_option("--out", out_path)->required();

  std::string level = "sampled";
  auto* verify = app.add_subcommand("verify", "Check the claimed properties of a construction");
  verify->add_option("name", name, "km20, km70, pawlik:k or four")->required();
  verify->add_option("--level", level)->check(CLI::IsMember({"sampled", "exact"}));
  verify->add_option("--samples", samples);
  verify->add_option("--pair-samples", pair_samples);
  verify->add_option("--seed", seed);

  int k = 6;
  int r = 5;
  double theta = 0.5;
  double alpha = 0.25;
  int items = 8;
  double eps_value = 1.0;
  auto* expander = app.add_subcommand("expander", "Expander sampling, verification and recombination");
  expander->require_subcommand(1);
  auto* ex_sample = expander->add_subcommand("sample");
  auto* ex_verify = expander->add_subcommand("verify");
  auto* ex_recombine = expander->add_subcommand("recombine");
  auto* ex_rate = expander->add_subcommand("rate");
  for (auto* sub : {ex_sample, ex_verify, ex_recombine}) {
    sub->add_option("--k", k);
    sub->add_option("--r", r);
    sub->add_option("--theta", theta);
    sub->add_option("--seed", seed);
  }
  for (auto* sub : {ex_verify, ex_recombine, ex_rate}) sub->add_option("--alpha", alpha);
  ex_rate->add_option("--r", r);
  ex_rate->add_option("--theta", theta);
  ex_recombine->add_option("--items", items);
  ex_recombine->add_option("--fn", fn, "Function for value accounting (default: linear plus 0.25 noise, weakly 1-modular)");
  ex_recombine->add_option("--eps", eps_value, "Weak modularity of --fn for the accounting inequalities");

  std::string preset = "paper";
  std::string params_path;
  auto* bounds = app.add_subcommand("bounds", "Upper-bound formulas");
  bounds->add_option("--preset", preset)->check(CLI::IsMember({"paper"}));
  bounds->add_option("--params", params_path, "JSON overriding preset tuples and scalars");

  int search_n = 4;
  int budget = 10000;
  auto* search = app.add_subcommand("search", "Random-vertex search for large ratio functions");
  search->add_option("--n", search_n);
  search->add_option("--budget", budget);
  search->add_option("--seed", seed);

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  }

  if (threads > 0) set_thread_count(threads);
  const auto start = std::chrono::steady_clock::now();
  const auto seconds = [&] {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  };

  try {
    if (eval->parsed()) {
      Report rep("eval");
      const Loaded l = resolve(fn);
      const WideSet s = parse_set(set_text, l.f.n());
      rep.inputs = {{"fn", fn}, {"set", set_text}};
      rep.results = {{"set", format_set(s)}, {"value", l.f.evaluate(s)}};
      write_doc(rep.document(seconds()), report_path, out);
      return 0;
    }
    if (eps->parsed()) {
      Report rep("eps");
      const Loaded l = resolve(fn);
      rep.inputs = {{"fn", fn}, {"variant", variant}, {"samples", samples}, {"seed", seed}};
      const ScanMode mode = mode_for(samples, seed);
      if (variant != "strong") rep.results["weak"] = eps_json(modularity_eps(l.f, Variant::weak, mode));
      if (variant != "weak") rep.results["strong"] = eps_json(modularity_eps(l.f, Variant::strong, mode));
      write_doc(rep.document(seconds()), report_path, out);
      return 0;
    }
    if (fit->parsed()) {
      Report rep("fit");
      const Loaded l = resolve(fn);
      rep.inputs = {{"fn", fn}, {"samples", samples}, {"seed", seed}};
      const LinearFit r = closest_linear(l.f, mode_for(samples, seed));
      rep.results = {{"delta", r.delta}, {"exact", r.exact}, {"rounds", r.rounds}, {"g", linear_coeffs(r.g)},
                     {"certificate_lower_bound", r.certificate.lower_bound},
                     {"certificate_marginal_gap", r.certificate.marginal_gap}};
      if (!r.exact) {
        rep.results["samples"] = r.samples;
        rep.results["seed"] = r.seed;
      }
      if (r.exact) {
        rep.check("certificate_tight",
                  std::abs(r.certificate.lower_bound - r.delta) <= 1e-6 && r.certificate.marginal_gap <= 1e-6);
      }
      write_doc(rep.document(seconds()), report_path, out);
      return rep.ok() ? 0 : 1;
    }
    if (learn->parsed()) {
      Report rep("learn");
      const Loaded l = resolve(fn);
      rep.inputs = {{"fn", fn}, {"method", method}, {"delta", delta}, {"seed", seed}, {"profile_samples", profile_samples}};
      const LearnResult res = method == "lp" ? learn_lp(l.f, delta)
                                             : (is_power_of_two(l.f.n()) ? learn_hadamard(l.f)
                                                                         : learn_padded(l.f, LearnMethod::hadamard));
      rep.results = {{"n", l.f.n()}, {"method", to_string(res.method)}, {"query_count", res.query_count},
                     {"distinct_queries", res.queries.size()}, {"feasible", res.feasible}, {"h", linear_coeffs(res.h)}};
      rep.check("query_budget", res.queries.size() <= 2 * static_cast<std::size_t>(next_power_of_two(l.f.n())) + 1);
      if (l.adversarial) {
        const double at_hidden = std::abs(linear_eval(res.h, l.adversarial->hidden) - l.f.evaluate(l.adversarial->hidden));
        rep.results["error_at_hidden"] = at_hidden;
      }
      if (!out_path.empty()) save_json(out_path, linear_to_json(res.h));
      if (!profile_path.empty()) {
        const auto rows = learner_error_profile(res.h, l.f, delta, profile_samples, seed);
        std::ofstream csv(profile_path);
        if (!csv) throw std::invalid_argument("cannot write " + profile_path);
        csv.precision(17);
        csv << "size,max_err,bound\n";
        bool within = true;
        for (const auto& row : rows) {
          csv << row.size << "," << row.max_err << "," << row.bound << "\n";
          within = within && row.max_err <= row.bound + 1e-9;
        }
        if (delta > 0) rep.check("profile_within_bound", within);
      }
      write_doc(rep.document(seconds()), report_path, out);
      return rep.ok() ? 0 : 1;
    }
    if (construct->parsed()) {
      Report rep("construct");
      const Loaded l = resolve(name);
      const FunctionKind kind = l.f.kind();
      Json doc;
      if (kind == FunctionKind::table || kind == FunctionKind::symmetric || kind == FunctionKind::linear) {
        doc = function_to_json(l.f);
      } else if (l.f.n() <= 20 && !l.adversarial) {
        doc = function_to_json(to_table(l.f));
      } else {
        doc = {{"n", l.f.n()}, {"kind", "descriptor"}, {"builtin", name}};
      }
      save_json(out_path, doc);
      rep.inputs = {{"name", name}, {"out", out_path}};
      rep.results = {{"n", l.f.n()}, {"kind", doc["kind"]}};
      write_doc(rep.document(seconds()), report_path, out);
      return 0;
    }
    if (verify->parsed()) {
      Report rep("verify");
      const VerifyLevel lv = level == "exact" ? VerifyLevel::exact : VerifyLevel::sampled;
      const std::uint64_t set_samples = samples == 0 ? 100000 : samples;
      const std::uint64_t pairs = pair_samples == 0 ? 1000000 : pair_samples;
      rep.inputs = {{"name", name}, {"level", level}, {"samples", set_samples}, {"pair_samples", pairs}, {"seed", seed}};
      const Loaded l = resolve(name);
      if (l.rule) {
        verify_rule(rep, *l.rule, lv, set_samples, pairs, seed);
      } else if (name == "four" || name.rfind("pawlik:", 0) == 0) {
        verify_table(rep, name, l.f);
      } else {
        throw std::invalid_argument("verify supports km20, km70, pawlik:k and four");
      }
      write_doc(rep.document(seconds()), report_path, out);
      if (!rep.ok()) err << "verification failed; see the checks for witnesses\n";
      return rep.ok() ? 0 : 1;
    }
    if (expander->parsed()) {
      if (ex_rate->parsed()) {
        Report rep("expander rate");
        rep.inputs = {{"alpha", alpha}, {"r", r}, {"theta", theta}};
        const double base = union_bound_rate(alpha, r, theta);
        rep.results = {{"base", base}};
        rep.check("base_below_one", base < 1);
        write_doc(rep.document(seconds()), report_path, out);
        return rep.ok() ? 0 : 1;
      }
      const BipartiteGraph g = sample_biregular(k, r, theta, seed);
      Json edges = Json::array();
      for (const auto& [v, w] : g.edges) edges.push_back({v, w});
      if (ex_sample->parsed()) {
        Report rep("expander sample");
        rep.inputs = {{"k", k}, {"r", r}, {"theta", theta}, {"seed", seed}};
        rep.results = {{"left", g.left()}, {"right", g.right}, {"edges", edges},
                       {"left_degrees", g.left_degrees()}, {"right_degrees", g.right_degrees()}};
        write_doc(rep.document(seconds()), report_path, out);
        return 0;
      }
      if (ex_verify->parsed()) {
        Report rep("expander verify");
        rep.inputs = {{"k", k}, {"r", r}, {"theta", theta}, {"alpha", alpha}, {"seed", seed}};
        const ExpansionResult ex = verify_expansion(g, alpha);
        Json worst = Json::array();
        for (int v = 0; v < g.left(); ++v) {
          if ((ex.worst >> v) & 1U) worst.push_back(v);
        }
        rep.results = {{"max_size", ex.max_size}, {"subsets_checked", ex.subsets_checked}, {"worst_subset", worst},
                       {"worst_neighbours", ex.worst_neighbours}, {"worst_deficiency", ex.worst_deficiency}};
        rep.check("expansion", ex.ok);
        write_doc(rep.document(seconds()), report_path, out);
        return rep.ok() ? 0 : 1;
      }
      Report rep("expander recombine");
      const int freq = static_cast<int>(std::lround(g.left() * alpha));
      const std::string fn_spec = fn.empty() ? "noisy:" + std::to_string(items) + ":0.25:" + std::to_string(seed) : fn;
      rep.inputs = {{"k", k}, {"r", r}, {"theta", theta}, {"alpha", alpha}, {"seed", seed}, {"items", items},
                    {"fn", fn_spec}, {"eps", eps_value}};
      const ExpansionResult ex = verify_expansion(g, alpha);
      rep.check("expansion", ex.ok);
      if (!ex.ok) {
        write_doc(rep.document(seconds()), report_path, out);
        return 1;
      }
      const Loaded l = resolve(fn_spec);
      if (l.f.n() != items) throw std::invalid_argument("--fn universe does not match --items");
      const Collection sources = frequent_collection(g.left(), items, freq, seed);
      const Recombination rec = recombine(g, sources, l.f);
      Json targets = Json::array();
      for (const auto& t : rec.targets.sets()) targets.push_back(format_set(t));
      const auto& acc = rec.accounting;
      rep.results = {{"source_frequency", rec.source_frequency},
                     {"targets", targets},
                     {"accounting",
                      {{"sources", acc.sources}, {"intermediates", acc.intermediates}, {"targets", acc.targets},
                       {"empty_value", acc.empty_value}, {"split_pieces", acc.split_pieces},
                       {"merge_pieces", acc.merge_pieces}}}};
      rep.check("partition", rec.partition_ok);
      rep.check("disjoint", rec.disjoint_ok);
      rep.check("frequency", rec.frequency_ok);
      rep.check("accounting_lower", acc.lower_holds(eps_value));
      rep.check("accounting_upper", acc.upper_holds(eps_value));
      write_doc(rep.document(seconds()), report_path, out);
      return rep.ok() ? 0 : 1;
    }
    if (bounds->parsed()) {
      Report rep("bounds");
      BoundProfile profile = paper_profile();
      if (!params_path.empty()) profile = profile_from_json(load_json(params_path));
      rep.inputs["preset"] = params_path.empty() ? preset : profile.name;
      Json tuples = Json::object();
      for (const auto& [key, t] : profile.tuples) tuples[key] = {{"alpha", t.alpha}, {"r", t.r}, {"theta", t.theta}};
      rep.inputs["tuples"] = tuples;
      rep.inputs["scalars"] = profile.scalars;
      const auto values = bound_suite(profile);
      rep.results = bounds_json(values);
      Json provenance = Json::object();
      for (const auto& v : values) provenance[v.name] = v.params;
      rep.results["provenance"] = provenance;
      bool sane = true;
      for (const auto& v : values) sane = sane && std::isfinite(v.value) && v.value >= 1;
      rep.check("bounds_finite_and_at_least_one", sane);
      const auto& w1 = profile.tuples.at("kw_first");
      const auto& w2 = profile.tuples.at("kw_second");
      rep.check("kw_min_crossing_sign_change", kw_min(w1.r, w1.theta, w2.r, w2.theta).sign_change);
      write_doc(rep.document(seconds()), report_path, out);
      return rep.ok() ? 0 : 1;
    }
    if (search->parsed()) {
      Report rep("search");
      rep.inputs = {{"n", search_n}, {"budget", budget}, {"seed", seed}};
      const KaltonSearchResult res = kalton_search(search_n, budget, seed);
      rep.results = {{"ratio", res.ratio}, {"delta", res.delta}, {"eps", res.eps}, {"vertices", res.vertices}};
      if (res.best.valid()) rep.results["best"] = function_to_json(res.best);
      write_doc(rep.document(seconds()), report_path, out);
      return 0;
    }
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}

}  // namespace modkit::cli
