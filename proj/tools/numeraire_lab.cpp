// numeraire-lab: command-line front end. One JSON document on stdout, logs
// on stderr. Exit codes are listed in the README.

#include <chrono>
#include <fstream>
#include <iostream>
#include <iterator>
#include <sstream>

#include <CLI11.hpp>

#include "numlab/fuzz.hpp"
#include "numlab/json_io.hpp"
#include "numlab/market.hpp"
#include "numlab/oracle.hpp"
#include "numlab/prooflab.hpp"
#include "numlab/verify.hpp"

using namespace numlab;
using io::Json;

namespace {

constexpr int kInputError = 2;

struct InputError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

Json read_json(const std::string& path) {
  std::string text;
  if (path == "-") {
    text.assign(std::istreambuf_iterator<char>(std::cin), {});
  } else {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open " + path);
    text.assign(std::istreambuf_iterator<char>(in), {});
  }
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw InputError(path + ": " + e.what());
  }
}

RVector parse_list(const std::string& text) {
  std::vector<Rational> xs;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) xs.push_back(parse_rational(item));
  RVector v(static_cast<Eigen::Index>(xs.size()));
  for (std::size_t i = 0; i < xs.size(); ++i) v[static_cast<Eigen::Index>(i)] = xs[i];
  return v;
}

struct InstanceArgs {
  std::string file;
  std::string g;
  long g_index = -1;

  void attach(CLI::App* cmd) {
    cmd->add_option("body", file, "body JSON {\"points\", \"rays\", \"g\"?} or - for stdin")->required();
    cmd->add_option("--g", g, "g as comma-separated rationals");
    cmd->add_option("--g-index", g_index, "g as an index into the body's points");
  }

  std::pair<RVector, ConvexBody<Rational>> load() const {
    const Json j = read_json(file);
    auto body = io::decode_body(j);
    RVector g;
    if (!this->g.empty()) {
      g = parse_list(this->g);
    } else if (g_index >= 0) {
      if (static_cast<std::size_t>(g_index) >= body.points().size()) throw InputError("--g-index out of range");
      g = body.points()[static_cast<std::size_t>(g_index)];
    } else if (j.contains("g")) {
      g = io::decode_vector(j.at("g"));
    } else {
      throw InputError("no g given (use --g, --g-index or a \"g\" field)");
    }
    if (g.size() != body.dimension()) throw InputError("g has the wrong length");
    return {std::move(g), std::move(body)};
  }
};

struct ClosureArgs {
  int max_rounds = 50;
  std::string norm_cap;

  void attach(CLI::App* cmd) {
    cmd->add_option("--max-rounds", max_rounds, "closure iteration limit")->capture_default_str();
    cmd->add_option("--norm-cap", norm_cap, "abandon the witness search above this generator norm");
  }

  ClosureConfig<Rational> config() const {
    ClosureConfig<Rational> c;
    c.max_rounds = max_rounds;
    if (!norm_cap.empty()) c.norm_cap = parse_rational(norm_cap);
    return c;
  }
};

Json header(const std::string& command, const RVector& g, const ConvexBody<Rational>& body) {
  Json instance = io::encode_instance(g, body);
  Json out{{"command", command}, {"inputs_digest", io::digest(instance)}};
  out["instance"] = std::move(instance);
  return out;
}

void emit(const Json& j) { std::cout << j.dump(2) << '\n'; }

int cmd_check(const InstanceArgs& args) {
  const auto [g, body] = args.load();
  Json out = header("check", g, body);
  const auto outcome = is_numeraire(g, body);
  if (const auto* cert = std::get_if<NumeraireCertificate<Rational>>(&outcome)) {
    out["verdict"] = "numeraire";
    out["certificate"] = io::encode(*cert);
    emit(out);
    return 0;
  }
  if (std::holds_alternative<TrivialCase>(outcome)) {
    out["verdict"] = "numeraire";
    out["reason"] = "trivial";
    emit(out);
    return 0;
  }
  out["verdict"] = "not-numeraire";
  if (const auto* v = std::get_if<NotStrictlyPositive>(&outcome)) {
    out["reason"] = "not-strictly-positive";
    out["violation"] = Json{{"is_ray", v->is_ray}, {"index", v->index}, {"atom", v->atom}};
  } else {
    const auto& inf = std::get<NumeraireInfeasible<Rational>>(outcome);
    const auto maximal = is_maximal(g, body);
    out["reason"] = maximal.maximal ? "lp-infeasible" : "not-maximal";
    out["certificate"] = io::encode(inf.farkas);
    if (maximal.witness) out["maximality_witness"] = io::encode(*maximal.witness);
  }
  emit(out);
  return 1;
}

int cmd_closure(const InstanceArgs& args, const ClosureArgs& cargs) {
  const auto [g, body] = args.load();
  Json out = header("closure", g, body);
  const auto report = verify_theorem(g, body, cargs.config());
  out.update(io::encode(report));
  emit(out);
  switch (report.closure_verdict) {
    case ClosureVerdict::Bounded: return 0;
    case ClosureVerdict::Unbounded: return 1;
    case ClosureVerdict::Inconclusive: return 3;
  }
  return 3;
}

int cmd_prove(const InstanceArgs& args, const ClosureArgs& cargs) {
  const auto [g, body] = args.load();
  Json out = header("prove", g, body);
  const auto report = run_pipeline(g, body, cargs.config());
  out["proof"] = io::encode(report);
  emit(out);
  return report.passed() ? 0 : 1;
}

Json scenario_block(const market::Scenario& s, const ClosureConfig<Rational>& config) {
  Json out;
  out["grid"] = Json::array();
  for (const auto& gamma : s.grid.gammas()) out["grid"].push_back(io::encode(gamma));
  out["instance"] = io::encode_instance(s.g, s.body);
  out["predicted_numeraire"] = s.predicted_numeraire;
  const auto report = verify_theorem(s.g, s.body, config);
  out["numeraire"] = report.lp_verdict == LpVerdict::Feasible;
  out.update(io::encode(report));
  return out;
}

int cmd_example(const std::string& model_file, const std::string& xi, const std::string& p, const std::string& grid,
                const ClosureArgs& cargs) {
  std::optional<market::MarketModel> model;
  std::vector<Rational> gammas;
  if (!model_file.empty()) {
    const Json j = read_json(model_file);
    model = io::decode_model(j);
    if (j.contains("grid")) gammas = io::decode_grid(j.at("grid"));
  } else if (!xi.empty()) {
    RVector x = parse_list(xi);
    auto space = p.empty() ? FiniteProbSpace<Rational>::uniform(x.size()) : FiniteProbSpace<Rational>(parse_list(p));
    model.emplace(std::move(space), std::move(x));
  } else {
    model = market::MarketModel::standard();
  }
  if (!grid.empty()) {
    const RVector gv = parse_list(grid);
    gammas.assign(gv.begin(), gv.end());
  }
  if (gammas.empty()) gammas = {Rational(1, 25), Rational(1, 4), Rational(1)};

  std::optional<market::ConstraintGrid> cgrid;
  try {
    cgrid.emplace(gammas);
  } catch (const market::GridValueError& e) {
    throw InputError(std::string(e.what()) + "; nearest admissible value " + to_string(e.suggestion()));
  }
  const auto scenario = market::build_scenario(*model, *cgrid);
  const auto config = cargs.config();

  Json out{{"command", "example"}};
  out["model"] = Json{{"p", io::encode(model->space().p())},
                      {"xi", io::encode(model->xi())},
                      {"xi_min", io::encode(model->xi_min())}};
  const bool has_threshold = model->xi_min() < 1;
  out["threshold_gamma"] = has_threshold ? io::encode(market::threshold_gamma(model->xi_min())) : Json(nullptr);
  out["scenario"] = scenario_block(scenario, config);
  out["inputs_digest"] = io::digest(out["scenario"]["instance"]);

  const auto cmax = market::expected_cmax(scenario);
  Json curve = Json::array();
  for (const auto& c : cmax.curve) {
    curve.push_back(Json{{"gamma", io::encode(c.gamma)}, {"maximal", c.maximal}, {"finite_deviation", c.finite_deviation}});
  }
  out["cmax"] = Json{{"curve", std::move(curve)}, {"agrees_with_formula", cmax.agrees_with_formula}};
  const bool enlarged_bounded = is_bounded(prune(market::short_sale_enlargement(scenario)));
  out["short_sale_enlargement_bounded"] = enlarged_bounded;

  Json sweep = Json::array();
  for (const auto& row : market::threshold_sweep(*model, market::reciprocal_squares(2, 12))) {
    std::vector<Rational> gs{Rational(1, 4), Rational(1), row.gamma_min};
    const auto s = market::build_scenario(*model, market::ConstraintGrid(gs));
    Json r{{"gamma_min", io::encode(row.gamma_min)},
           {"bound", io::encode(row.bound)},
           {"predicted", row.predicted},
           {"lp_feasible", row.lp_feasible},
           {"instance", io::encode_instance(s.g, s.body)}};
    const auto outcome = detail::solve_numeraire(s.g, s.body);
    if (const auto* cert = std::get_if<NumeraireCertificate<Rational>>(&outcome)) {
      r["certificate"] = io::encode(*cert);
    } else {
      r["certificate"] = io::encode(std::get<NumeraireInfeasible<Rational>>(outcome).farkas);
    }
    sweep.push_back(std::move(r));
  }
  out["threshold_sweep"] = std::move(sweep);
  emit(out);
  return 0;
}

int cmd_fuzz(fuzz::Options options, bool timing) {
  const auto start = std::chrono::steady_clock::now();
  const auto records = fuzz::run(options);
  const auto summary = fuzz::summarize(records);
  Json out{{"command", "fuzz"},
           {"seed", options.seed},
           {"count", options.count},
           {"atoms", options.generator.max_atoms},
           {"gens", options.generator.max_gens},
           {"max_rounds", options.closure.max_rounds}};
  out["summary"] = Json{{"instances", summary.instances},
                        {"feasible", summary.feasible},
                        {"infeasible", summary.infeasible},
                        {"consistent", summary.consistent},
                        {"unresolved", summary.unresolved},
                        {"inconsistent", summary.inconsistent},
                        {"containment_failures", summary.containment_failures}};
  if (options.run_pipeline) {
    out["summary"]["pipeline_runs"] = summary.pipeline_runs;
    out["summary"]["pipeline_failures"] = summary.pipeline_failures;
  }
  Json dumps = Json::array();
  for (const auto& r : records) {
    const bool bad = r.status == Consistency::Inconsistent || (r.pipeline_passed && !*r.pipeline_passed);
    if (!bad) continue;
    const auto inst = fuzz::generate(options.seed, r.index, options.generator);
    Json d{{"index", r.index}, {"status", io::to_string(r.status)}, {"instance", io::encode_instance(inst.g, inst.body)}};
    if (!r.error.empty()) d["error"] = r.error;
    if (r.pipeline_failure) d["pipeline_failure"] = *r.pipeline_failure;
    dumps.push_back(std::move(d));
  }
  out["failures"] = std::move(dumps);
  emit(out);
  if (timing) {
    const std::chrono::duration<double> dt = std::chrono::steady_clock::now() - start;
    std::cerr << "fuzz: " << records.size() << " instances in " << dt.count() << " s\n";
  }
  return summary.inconsistent > 0 ? 1 : 0;
}

int cmd_oracle(const InstanceArgs& args, long mesh) {
  const auto [g, body] = args.load();
  Json out = header("oracle", g, body);
  out["mesh"] = mesh;
  const auto c = oracle::compare(g, body, mesh);
  out.update(io::encode(c));
  out["margin_case"] = !c.outside_margin;
  emit(out);
  return c.agree || !c.outside_margin ? 0 : 1;
}

int cmd_verify(const std::string& file) {
  const auto result = verify::verify_report(read_json(file));
  emit(Json{{"command", "verify"}, {"ok", result.ok()}, {"checked", result.checked}, {"failures", result.failures}});
  return result.ok() ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact numeraire, short-sale closure and separation checks on finite probability spaces"};
  app.require_subcommand(1);

  InstanceArgs inst;
  ClosureArgs cargs;

  auto* check = app.add_subcommand("check", "is g a numeraire of the body");
  inst.attach(check);

  auto* closure = app.add_subcommand("closure", "short-sale closure and consistency with the LP verdict");
  inst.attach(closure);
  cargs.attach(closure);

  auto* prove = app.add_subcommand("prove", "run the four-step separation pipeline");
  inst.attach(prove);
  cargs.attach(prove);

  std::string model_file, xi, p, grid;
  auto* example = app.add_subcommand("example", "constrained one-period market scenario and threshold table");
  example->add_option("--model", model_file, "market model JSON {\"p\"?, \"xi\", \"grid\"?}");
  example->add_option("--xi", xi, "xi as comma-separated positive rationals");
  example->add_option("--p", p, "probabilities (default uniform)");
  example->add_option("--grid", grid, "gamma grid, rational squares in [0, 1]");
  cargs.attach(example);

  fuzz::Options fopts;
  bool timing = false;
  bool pipeline = false;
  auto* fz = app.add_subcommand("fuzz", "cross-validate the LP against the closure on random instances");
  fz->add_option("--seed", fopts.seed, "64-bit seed")->capture_default_str();
  fz->add_option("--count", fopts.count, "number of instances")->capture_default_str();
  fz->add_option("--atoms", fopts.generator.max_atoms, "maximum atoms")->capture_default_str()->check(CLI::Range(1, 12));
  fz->add_option("--gens", fopts.generator.max_gens, "maximum generators")->capture_default_str()->check(CLI::Range(1, 64));
  fz->add_option("--jobs", fopts.jobs, "worker threads (NUMERAIRE_LAB_JOBS overrides)")->capture_default_str();
  fz->add_option("--max-rounds", cargs.max_rounds, "closure iteration limit")->capture_default_str();
  fz->add_flag("--pipeline", pipeline, "also run the proof pipeline on feasible bounded instances");
  fz->add_flag("--timing", timing, "print wall time to stderr");

  long mesh = 128;
  auto* orc = app.add_subcommand("oracle", "compare the LP with a brute-force simplex grid search");
  inst.attach(orc);
  orc->add_option("--mesh", mesh, "grid denominator")->capture_default_str();

  std::string report_file;
  auto* ver = app.add_subcommand("verify", "re-check every certificate embedded in a report, without a solver");
  ver->add_option("report", report_file, "report JSON or - for stdin")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kInputError;
  }

  try {
    if (*check) return cmd_check(inst);
    if (*closure) return cmd_closure(inst, cargs);
    if (*prove) return cmd_prove(inst, cargs);
    if (*example) return cmd_example(model_file, xi, p, grid, cargs);
    if (*fz) {
      fopts.jobs = fuzz::jobs_from_env(fopts.jobs);
      fopts.closure = cargs.config();
      fopts.run_pipeline = pipeline;
      return cmd_fuzz(fopts, timing);
    }
    if (*orc) return cmd_oracle(inst, mesh);
    if (*ver) return cmd_verify(report_file);
  } catch (const InputError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kInputError;
  } catch (const NotInBody& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kInputError;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kInputError;
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kInputError;
  }
  return kInputError;
}
