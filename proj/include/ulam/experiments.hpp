#pragma once

// Experiment configs and the report builders behind the ulam_lab subcommands.
// Reports are plain JSON documents (plus a CSV table); identical config and
// seed give byte-identical output.

#include <cmath>
#include <fstream>
#include <numbers>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include "ulam/errors.hpp"
#include "ulam/group.hpp"
#include "ulam/hull.hpp"
#include "ulam/io.hpp"
#include "ulam/operator.hpp"
#include "ulam/paradox.hpp"
#include "ulam/rep_maps.hpp"
#include "ulam/stability.hpp"

namespace ulam {

struct Tolerances {
  double psd = kDefaultPsdTol;
  double membership = kDefaultMembershipTol;
  /// slack on asserted inequalities
  double assertion = 1e-9;
};

struct ExperimentConfig {
  std::string subcommand;
  std::optional<Json> group;
  std::optional<int> dim;
  std::optional<double> eps;
  std::optional<std::uint64_t> seed;
  std::optional<int> trials;
  std::optional<std::vector<int>> radii;
  Tolerances tolerances;
  std::string output_path;
  std::string output_format = "json";
  // hull-check
  std::optional<Json> operators;
  std::optional<Json> map;
  std::optional<Json> target;
  std::optional<int> n_max;
  // folner-demo
  std::optional<double> alpha;
  std::optional<std::string> phase;
  std::optional<Json> F0;
  std::optional<Json> pd_sample;
  // paradox-demo
  std::optional<int> sweep_radius;
  // classify-word
  std::optional<std::string> word;
};

inline const std::vector<std::string>& config_fields() {
  static const std::vector<std::string> fields{
      "subcommand", "group", "dim",   "eps",    "seed",  "trials", "radii", "tolerances", "output",
      "operators",  "map",   "target", "n_max", "alpha", "phase",  "F0",    "pd_sample",  "sweep_radius",
      "word"};
  return fields;
}

inline ExperimentConfig parse_config(const Json& j) {
  if (!j.is_object()) throw InvalidInput("config must be a JSON object");
  const auto& known = config_fields();
  for (const auto& [k, v] : j.items())
    if (std::find(known.begin(), known.end(), k) == known.end()) throw InvalidInput("unknown config field \"" + k + "\"");

  ExperimentConfig c;
  auto get = [&](const char* key, auto& slot) {
    if (!j.contains(key)) return;
    try {
      slot = j.at(key).get<typename std::remove_reference_t<decltype(slot)>::value_type>();
    } catch (const nlohmann::json::exception&) {
      throw InvalidInput(std::string("config field \"") + key + "\" has the wrong type");
    }
  };
  if (j.contains("subcommand")) c.subcommand = j.at("subcommand").get<std::string>();
  if (j.contains("group")) c.group = j.at("group");
  get("dim", c.dim);
  get("eps", c.eps);
  if (j.contains("seed")) {
    const Json& s = j.at("seed");
    if (!s.is_number_integer() || (s.is_number_integer() && !s.is_number_unsigned() && s.get<long long>() < 0))
      throw InvalidInput("config field \"seed\" must be a non-negative integer");
    c.seed = s.get<std::uint64_t>();
  }
  get("trials", c.trials);
  get("radii", c.radii);
  if (j.contains("tolerances")) {
    const Json& t = j.at("tolerances");
    if (!t.is_object()) throw InvalidInput("\"tolerances\" must be an object");
    for (const auto& [k, v] : t.items()) {
      if (!v.is_number()) throw InvalidInput("tolerance \"" + k + "\" must be a number");
      const double x = v.get<double>();
      if (!(x > 0) || !std::isfinite(x)) throw InvalidInput("tolerance \"" + k + "\" must be positive");
      if (k == "psd") c.tolerances.psd = x;
      else if (k == "membership") c.tolerances.membership = x;
      else if (k == "assertion") c.tolerances.assertion = x;
      else throw InvalidInput("unknown tolerance \"" + k + "\"");
    }
  }
  if (j.contains("output")) {
    const Json& o = j.at("output");
    if (!o.is_object()) throw InvalidInput("\"output\" must be an object");
    for (const auto& [k, v] : o.items()) {
      if (k == "path") c.output_path = v.get<std::string>();
      else if (k == "format") c.output_format = v.get<std::string>();
      else throw InvalidInput("unknown output field \"" + k + "\"");
    }
  }
  if (j.contains("operators")) c.operators = j.at("operators");
  if (j.contains("map")) c.map = j.at("map");
  if (j.contains("target")) c.target = j.at("target");
  get("n_max", c.n_max);
  get("alpha", c.alpha);
  get("phase", c.phase);
  if (j.contains("F0")) c.F0 = j.at("F0");
  if (j.contains("pd_sample")) c.pd_sample = j.at("pd_sample");
  get("sweep_radius", c.sweep_radius);
  get("word", c.word);
  return c;
}

inline ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidInput("cannot open config " + path);
  Json j;
  try {
    j = Json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw InvalidInput("config " + path + " is not valid JSON: " + e.what());
  }
  return parse_config(j);
}

inline Json config_to_json(const ExperimentConfig& c) {
  Json j;
  j["subcommand"] = c.subcommand;
  if (c.group) j["group"] = *c.group;
  if (c.dim) j["dim"] = *c.dim;
  if (c.eps) j["eps"] = *c.eps;
  if (c.seed) j["seed"] = *c.seed;
  if (c.trials) j["trials"] = *c.trials;
  if (c.radii) j["radii"] = *c.radii;
  j["tolerances"] = {{"psd", c.tolerances.psd},
                     {"membership", c.tolerances.membership},
                     {"assertion", c.tolerances.assertion}};
  j["output"] = {{"path", c.output_path}, {"format", c.output_format}};
  if (c.operators) j["operators"] = *c.operators;
  if (c.map) j["map"] = *c.map;
  if (c.target) j["target"] = *c.target;
  if (c.n_max) j["n_max"] = *c.n_max;
  if (c.alpha) j["alpha"] = *c.alpha;
  if (c.phase) j["phase"] = *c.phase;
  if (c.F0) j["F0"] = *c.F0;
  if (c.pd_sample) j["pd_sample"] = *c.pd_sample;
  if (c.sweep_radius) j["sweep_radius"] = *c.sweep_radius;
  if (c.word) j["word"] = *c.word;
  return j;
}

// ---------------------------------------------------------------------------
// Reports

struct Report {
  Json doc;
  Table table;
  std::vector<std::string> failures;
  bool passed() const { return failures.empty(); }
  std::string render(const std::string& format) const { return format == "csv" ? to_csv(table) : doc.dump(2) + "\n"; }
};

namespace detail {

inline Report start_report(const ExperimentConfig& cfg) {
  Report r;
  r.doc["subcommand"] = cfg.subcommand;
  r.doc["version"] = kVersion;
  r.doc["config"] = config_to_json(cfg);
  r.doc["tolerances"] = r.doc["config"]["tolerances"];
  r.doc["element_cap"] = element_cap();
  r.doc["results"] = Json::object();
  r.doc["checks"] = Json::array();
  return r;
}

/// Records `value relation bound` ("<=", ">=" or "=="), with the check's
/// slack folded into the bound by the caller.
inline void check(Report& r, const std::string& name, double value, const std::string& relation, double bound) {
  bool ok = false;
  if (relation == "<=") ok = value <= bound;
  else if (relation == ">=") ok = value >= bound;
  else ok = value == bound;
  r.doc["checks"].push_back(Json{{"name", name}, {"value", value}, {"relation", relation}, {"bound", bound}, {"passed", ok}});
  if (!ok)
    r.failures.push_back(name + ": " + format_number(value) + " violates " + relation + " " + format_number(bound));
}

inline void finish(Report& r) { r.doc["passed"] = r.passed(); }

inline std::uint64_t require_seed(const ExperimentConfig& cfg) {
  if (!cfg.seed) throw InvalidInput("a seed is required (config \"seed\" or --seed)");
  return *cfg.seed;
}

inline int positive(const std::optional<int>& v, int fallback, const char* what) {
  const int x = v.value_or(fallback);
  if (x < 1) throw InvalidInput(std::string(what) + " must be >= 1");
  return x;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// stability-demo

/// Perturbs the regular representation of a finite group to defect about
/// eps, corrects it by uniform averaging, and measures the correction.
inline Report run_stability_demo(const ExperimentConfig& cfg) {
  const auto seed = detail::require_seed(cfg);
  const AnyGroup any = parse_group(cfg.group.value_or(Json("Z6")));
  const auto* g = std::get_if<FiniteGroup>(&any);
  if (!g) throw InvalidInput("stability-demo needs a finite group");
  if (cfg.dim && *cfg.dim != g->order())
    throw InvalidInput("stability-demo perturbs the regular representation, so dim must equal |G| = " +
                       std::to_string(g->order()));
  const double eps = cfg.eps.value_or(0.05);
  if (!(eps >= 0 && eps < 1)) throw InvalidInput("eps must lie in [0, 1)");
  const int trials = detail::positive(cfg.trials, 200, "trials");

  const auto pi = regular_representation(*g);
  const auto pert = perturb_representation(pi, eps, seed);
  const auto& phi = pert.map;
  const auto psi = amenable_correction(phi);
  const auto eps_report = defect(phi);
  const double prox = proximity(phi, psi);
  const double ratio = eps_report.epsilon > 0 ? prox / eps_report.epsilon : 0.0;
  const auto elements = g->elements();
  const auto gram = pd_defect(psi, elements, cfg.tolerances.psd);
  const auto sweep = sample_condition5(phi, psi, std::span<const int>(elements),
                                       Condition5Sampling{trials, 4, 3, seed + 1});

  Report r = detail::start_report(cfg);
  auto& res = r.doc["results"];
  res["group"] = group_to_json(*g);
  res["dim"] = phi.dim();
  res["eps_target"] = eps;
  res["eps_measured"] = eps_report.epsilon;
  res["defect"] = defect_to_json(eps_report);
  res["perturbation_scale"] = pert.scale;
  res["proximity"] = prox;
  res["proximity_over_eps"] = ratio;
  res["gram_min_eig"] = gram.min_eigenvalue;
  res["gram"] = psd_to_json(gram);
  res["unital"] = is_unital(psi);
  res["condition5_trials"] = sweep.trials;
  res["condition5_witnesses"] = sweep.witnesses;
  res["condition5_witness_rate"] = sweep.rate();

  const double slack = cfg.tolerances.assertion;
  detail::check(r, "proximity_over_eps", ratio, "<=", 2.0 + slack);
  detail::check(r, "proximity_vs_eps_measured", prox, "<=", eps_report.epsilon + slack);
  detail::check(r, "gram_min_eig", gram.min_eigenvalue, ">=", -cfg.tolerances.psd);
  detail::check(r, "condition5_witness_rate", sweep.rate(), "==", 1.0);
  detail::finish(r);

  r.table.header = {"group", "dim", "eps_target", "eps_measured", "proximity", "proximity_over_eps", "gram_min_eig",
                    "condition5_witness_rate"};
  r.table.rows.push_back({g->name(), std::to_string(phi.dim()), format_number(eps), format_number(eps_report.epsilon),
                          format_number(prox), format_number(ratio), format_number(gram.min_eigenvalue),
                          format_number(sweep.rate())});
  return r;
}

// ---------------------------------------------------------------------------
// hull-check

struct LabelledOperators {
  std::vector<std::string> labels;
  std::vector<Operator> ops;
};

/// Operators come from "operators" (a list) or "map" (an operator-map object,
/// or a path to a JSON file holding one).
inline LabelledOperators hull_operators(const ExperimentConfig& cfg) {
  LabelledOperators out;
  if (cfg.operators && cfg.map) throw InvalidInput("give either \"operators\" or \"map\", not both");
  if (cfg.operators) {
    if (!cfg.operators->is_array() || cfg.operators->empty()) throw InvalidInput("\"operators\" must be a nonempty list");
    for (std::size_t i = 0; i < cfg.operators->size(); ++i) {
      out.labels.push_back(std::to_string(i));
      out.ops.push_back(operator_from_json((*cfg.operators)[i]));
    }
    return out;
  }
  if (!cfg.map) throw InvalidInput("hull-check needs \"operators\" or \"map\"");
  Json m = *cfg.map;
  if (m.is_string()) {
    std::ifstream in(m.get<std::string>());
    if (!in) throw InvalidInput("cannot open operator map " + m.get<std::string>());
    m = Json::parse(in);
  }
  if (!m.is_object() || !m.contains("entries")) throw InvalidInput("operator map needs \"entries\"");
  // Validate the map as a whole through its group when one is given.
  if (m.contains("group")) {
    std::visit([&](const auto& g) { (void)map_from_json(g, m); }, parse_group(m.at("group")));
  }
  for (const auto& e : m.at("entries")) {
    const Json& el = e.at("element");
    out.labels.push_back(el.is_string() ? el.get<std::string>() : el.dump());
    out.ops.push_back(operator_from_json(e.at("operator")));
  }
  if (out.ops.empty()) throw InvalidInput("operator map has no entries");
  return out;
}

inline Report run_hull_check(const ExperimentConfig& cfg) {
  const auto seed = detail::require_seed(cfg);
  const auto family = hull_operators(cfg);
  if (!cfg.target) throw InvalidInput("hull-check needs a \"target\" operator");
  const Operator T = operator_from_json(*cfg.target);
  const int trials = detail::positive(cfg.trials, 50, "trials");
  const int n_max = detail::positive(cfg.n_max, 3, "n_max");
  const auto rep = theorem21_equivalence_test(family.ops, T, trials, n_max, seed, cfg.tolerances.membership);
  const std::size_t n = family.ops.size();
  const int d = T.dim();

  Report r = detail::start_report(cfg);
  auto& res = r.doc["results"];
  res["dim"] = d;
  res["points"] = n;
  res["labels"] = family.labels;
  res["member"] = rep.member;
  res["distance"] = rep.hull.distance;
  res["hull"] = hull_to_json(rep.hull, n);
  res["projection_operator"] = operator_to_json(unvectorize(rep.hull.projection, d));
  if (rep.member) {
    res["condition1"] = Json{{"trials", rep.trials}, {"witnessed", rep.witnessed}, {"holds", rep.condition1}};
  } else {
    const auto& rf = *rep.refutation;
    Json xi = Json::array(), eta = Json::array();
    for (const auto& v : rf.tuple.xi) xi.push_back(vector_to_json(v));
    for (const auto& v : rf.tuple.eta) eta.push_back(vector_to_json(v));
    res["refuting_family"] = Json{{"xi", std::move(xi)},
                                  {"eta", std::move(eta)},
                                  {"margin", rf.margin},
                                  {"stacked_distance_sq", rf.stacked_distance_sq},
                                  {"verified", rf.verified}};
  }
  res["verdicts_agree"] = rep.agree();

  detail::check(r, "verdicts_agree", rep.agree() ? 1.0 : 0.0, "==", 1.0);
  if (!rep.member) detail::check(r, "refuting_margin", rep.refutation->margin, ">=", 0.0 + 1e-300);
  detail::finish(r);

  const auto w = rep.hull.dense_weights(n);
  const RVector target = vectorize(T);
  r.table.header = {"index", "label", "weight", "distance_to_target"};
  for (std::size_t i = 0; i < n; ++i)
    r.table.rows.push_back({std::to_string(i), family.labels[i], format_number(w[i]),
                            format_number((vectorize(family.ops[i]) - target).norm())});
  return r;
}

// ---------------------------------------------------------------------------
// paradox-demo

inline Report run_paradox_demo(const ExperimentConfig& cfg) {
  const auto seed = detail::require_seed(cfg);
  const auto radii = cfg.radii.value_or(std::vector<int>{1, 2, 3, 4, 5, 6});
  if (radii.empty()) throw InvalidInput("radii must be nonempty");
  for (int rad : radii)
    if (rad < 1) throw InvalidInput("radii must be >= 1");
  const int samples = detail::positive(cfg.trials, 10000, "trials");
  const int sweep_r = cfg.sweep_radius.value_or(6);
  if (sweep_r < 0 || FreeGroup::ball_size(2, sweep_r) > element_cap())
    throw CapExceeded("sweep radius " + std::to_string(sweep_r) + " exceeds the element cap");

  const FreeGroup f2(2);
  const IntegerLattice z2(2);
  const auto dec = standard_f2_decomposition();
  const double slack = cfg.tolerances.assertion;

  Report r = detail::start_report(cfg);
  r.table.header = {"group", "r", "lp_value", "bound", "support_size", "witness"};
  Json f2_rows = Json::array(), z2_rows = Json::array();
  for (int rad : radii) {
    if (rad > max_invariance_radius(f2)) continue;
    const auto lp = min_invariance_defect(f2, rad);
    const double d = tarski_defect(lp.measure, dec);
    f2_rows.push_back(Json{{"r", rad}, {"lp_value", lp.value}, {"support_size", lp.support_size},
                           {"pivots", lp.pivots}, {"tarski_defect_of_optimum", d}});
    r.table.rows.push_back({"F2", std::to_string(rad), format_number(lp.value), ">=1", std::to_string(lp.support_size),
                            "tarski_defect=" + format_number(d)});
    detail::check(r, "F2_lp_value_r" + std::to_string(rad), lp.value, ">=", 1.0 - slack);
  }
  double prev = std::numeric_limits<double>::infinity();
  for (int rad : radii) {
    if (rad > max_invariance_radius(z2)) throw CapExceeded("Z^2 radius " + std::to_string(rad) + " exceeds 8");
    const auto lp = min_invariance_defect(z2, rad);
    const double bound = 2.0 / (2.0 * rad + 1.0);
    const auto box = folner_box(2, rad);
    double box_defect = 0;
    for (const auto& s : z2.generators()) box_defect = std::max(box_defect, translation_defect(z2, box, s));
    z2_rows.push_back(Json{{"r", rad}, {"lp_value", lp.value}, {"bound", bound}, {"support_size", lp.support_size},
                           {"pivots", lp.pivots}, {"folner_box_defect", box_defect}});
    r.table.rows.push_back({"Z^2", std::to_string(rad), format_number(lp.value), format_number(bound),
                            std::to_string(lp.support_size), "folner_box_defect=" + format_number(box_defect)});
    detail::check(r, "Z2_lp_value_r" + std::to_string(rad), lp.value, "<=", bound + slack);
    if (std::isfinite(prev)) detail::check(r, "Z2_monotone_r" + std::to_string(rad), lp.value, "<=", prev + slack);
    prev = lp.value;
  }
  const auto sweep = tarski_sweep(sweep_r, samples, seed);
  auto& res = r.doc["results"];
  res["F2"] = std::move(f2_rows);
  res["Z2"] = std::move(z2_rows);
  res["tarski_sweep"] = Json{{"radius", sweep_r},
                             {"samples", sweep.samples},
                             {"min_defect", sweep.min_defect},
                             {"max_partition_error", sweep.max_partition_error},
                             {"max_piece_mass", sweep.max_piece_mass}};
  detail::check(r, "tarski_sweep_min_defect", sweep.min_defect, ">=", 1.0 - slack);
  detail::finish(r);
  return r;
}

// ---------------------------------------------------------------------------
// folner-demo

inline std::vector<Point> points_from_json(const Json& j, int d) {
  std::vector<Point> out;
  for (const auto& p : j) {
    Point q = p.is_number() ? Point{p.get<int>()} : p.get<Point>();
    if (static_cast<int>(q.size()) != d) throw InvalidInput("point dimension does not match the lattice");
    out.push_back(std::move(q));
  }
  return out;
}

inline Report run_folner_demo(const ExperimentConfig& cfg) {
  detail::require_seed(cfg);
  const AnyGroup any = parse_group(cfg.group.value_or(Json("Z^1")));
  const auto* lat = std::get_if<IntegerLattice>(&any);
  if (!lat) throw InvalidInput("folner-demo needs an integer lattice group such as \"Z^1\"");
  const int d = lat->dim();
  const double alpha = cfg.alpha.value_or(1.0);
  const std::string phase = cfg.phase.value_or("quadratic");
  if (phase != "quadratic" && phase != "linear") throw InvalidInput("phase must be \"quadratic\" or \"linear\"");
  const auto radii = cfg.radii.value_or(std::vector<int>{1, 2, 4, 8, 16});
  if (radii.empty()) throw InvalidInput("radii must be nonempty");
  std::vector<Point> F0, sample;
  if (cfg.F0) F0 = points_from_json(*cfg.F0, d);
  else
    for (const auto& p : lat->ball(2)) F0.push_back(p);
  if (cfg.pd_sample) sample = points_from_json(*cfg.pd_sample, d);
  else
    for (int k = 0; k <= 2; ++k) sample.push_back(Point(static_cast<std::size_t>(d), k));

  const int R = folner_required_radius(radii, F0, sample);
  double box = 1;
  for (int i = 0; i < d; ++i) box *= 2.0 * R + 1;
  if (box > element_cap()) throw CapExceeded("folner-demo needs a ball of " + format_number(box) + " elements");
  auto phi = OperatorMap<IntegerLattice>::from_function(*lat, lat->ball(R), [&](const Point& k) {
    double q = 0;
    for (int c : k) q += phase == "quadratic" ? static_cast<double>(c) * c : c;
    return Operator::scalar(std::polar(1.0, alpha * q));
  });
  const auto rep = folner_convergence_experiment(phi, radii, F0, sample, cfg.tolerances.psd);

  Report r = detail::start_report(cfg);
  auto& res = r.doc["results"];
  res["map"] = Json{{"phase", phase}, {"alpha", alpha}, {"domain_radius", R}};
  Json f0 = Json::array();
  for (const auto& p : rep.F0) f0.push_back(p);
  res["F0"] = std::move(f0);
  Json rows = Json::array();
  r.table.header = {"r", "increment", "shift_error", "shift_bound"};
  for (const auto& row : rep.rows) {
    Json vals = Json::array();
    for (const auto& op : row.psi_on_F0) vals.push_back(operator_to_json(op));
    rows.push_back(Json{{"r", row.radius},
                        {"increment", row.increment},
                        {"shift_error", row.shift_error},
                        {"shift_bound", row.shift_bound},
                        {"psi_on_F0", std::move(vals)}});
    r.table.rows.push_back({std::to_string(row.radius), format_number(row.increment), format_number(row.shift_error),
                            format_number(row.shift_bound)});
    detail::check(r, "shift_error_r" + std::to_string(row.radius), row.shift_error, "<=",
                  row.shift_bound + cfg.tolerances.assertion);
  }
  res["rows"] = std::move(rows);
  if (rep.rows.size() >= 2 && rep.rows.front().increment > 0)
    res["increment_ratio_last_over_first"] = rep.rows.back().increment / rep.rows.front().increment;
  Json ps = Json::array();
  for (const auto& p : rep.pd_sample) ps.push_back(p);
  res["pd_sample"] = std::move(ps);
  res["final_gram"] = psd_to_json(rep.final_psd);
  detail::finish(r);
  return r;
}

// ---------------------------------------------------------------------------
// classify-word

/// Which first-letter piece a word of F_2 lies in, and which translates
/// s_j A_j, t_k B_k contain it.
inline Report run_classify_word(const ExperimentConfig& cfg) {
  if (!cfg.word) throw InvalidInput("classify-word needs a word");
  const FreeGroup f2(2);
  const Word w = parse_word(*cfg.word);
  if (!f2.contains(w)) throw InvalidInput("classify-word works in F2 (letters a, A, b, B)");
  const auto dec = standard_f2_decomposition();
  std::string piece = "none";
  const std::vector<std::pair<std::string, const Piece*>> pieces{
      {"A1", &dec.pieces_A[0]}, {"A2", &dec.pieces_A[1]}, {"B1", &dec.pieces_B[0]}, {"B2", &dec.pieces_B[1]}};
  for (const auto& [name, p] : pieces)
    if (p->contains(w)) piece = name;
  Json translates = Json::object();
  auto mark = [&](const std::vector<Piece>& ps, const std::vector<Word>& ts, const char* stem) {
    for (std::size_t j = 0; j < ps.size(); ++j) {
      const std::string key = format_element(ts[j]) + "*" + stem + std::to_string(j + 1);
      translates[key] = ps[j].contains(f2.mul(f2.inverse(ts[j]), w));
    }
  };
  mark(dec.pieces_A, dec.translates_s, "A");
  mark(dec.pieces_B, dec.translates_t, "B");

  Report r = detail::start_report(cfg);
  r.doc["results"] = Json{{"word", format_element(w)}, {"length", w.length()}, {"piece", piece}, {"translates", translates}};
  detail::finish(r);
  r.table.header = {"word", "piece"};
  r.table.rows.push_back({format_element(w), piece});
  for (const auto& [k, v] : translates.items()) {
    r.table.header.push_back(k);
    r.table.rows.back().push_back(v.get<bool>() ? "1" : "0");
  }
  return r;
}

inline Report run_experiment(const ExperimentConfig& cfg) {
  if (cfg.output_format != "json" && cfg.output_format != "csv") throw InvalidInput("format must be json or csv");
  if (cfg.subcommand == "stability-demo") return run_stability_demo(cfg);
  if (cfg.subcommand == "hull-check") return run_hull_check(cfg);
  if (cfg.subcommand == "paradox-demo") return run_paradox_demo(cfg);
  if (cfg.subcommand == "folner-demo") return run_folner_demo(cfg);
  if (cfg.subcommand == "classify-word") return run_classify_word(cfg);
  throw InvalidInput("unknown subcommand \"" + cfg.subcommand + "\"");
}

}  // namespace ulam
