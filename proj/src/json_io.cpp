#include "numlab/json_io.hpp"

#include <cstdint>
#include <cstdio>

namespace numlab::io {

Json encode(const Rational& r) { return numlab::to_string(r); }

Json encode(const RVector& v) {
  Json out = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(encode(v[i]));
  return out;
}

Json encode(const std::vector<RVector>& vs) {
  Json out = Json::array();
  for (const auto& v : vs) out.push_back(encode(v));
  return out;
}

Json encode(const ConvexBody<Rational>& body) {
  return Json{{"points", encode(body.points())}, {"rays", encode(body.rays())}};
}

Rational decode_rational(const Json& j) {
  if (j.is_string()) return parse_rational(j.get<std::string>());
  if (j.is_number_integer()) return Rational(j.get<long long>());
  throw FormatError("expected a rational as \"a/b\" or an integer, got " + j.dump());
}

RVector decode_vector(const Json& j) {
  if (!j.is_array()) throw FormatError("expected an array of rationals");
  RVector v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) v[static_cast<Eigen::Index>(i)] = decode_rational(j[i]);
  return v;
}

std::vector<RVector> decode_vectors(const Json& j) {
  if (!j.is_array()) throw FormatError("expected an array of vectors");
  std::vector<RVector> out;
  for (const auto& e : j) out.push_back(decode_vector(e));
  return out;
}

ConvexBody<Rational> decode_body(const Json& j) {
  if (!j.is_object() || !j.contains("points")) throw FormatError("body needs a \"points\" array");
  std::vector<RVector> rays;
  if (j.contains("rays")) rays = decode_vectors(j.at("rays"));
  return ConvexBody<Rational>(decode_vectors(j.at("points")), std::move(rays));
}

Json encode_instance(const RVector& g, const ConvexBody<Rational>& body) {
  Json out = encode(body);
  out["g"] = encode(g);
  return out;
}

std::string digest(const Json& j) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : j.dump()) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

Json encode(const NumeraireCertificate<Rational>& cert) {
  return Json{{"q", encode(cert.q)}, {"epsilon", encode(cert.epsilon)}, {"binding", cert.binding}};
}

Json encode(const lp::StrictInfeasible<Rational>& cert) {
  return Json{{"farkas", encode(cert.farkas)},
              {"strict_multipliers", encode(cert.strict_multipliers)},
              {"delta_multiplier", encode(cert.delta_multiplier)}};
}

lp::StrictInfeasible<Rational> decode_farkas(const Json& j) {
  return lp::StrictInfeasible<Rational>{decode_vector(j.at("farkas")), decode_vector(j.at("strict_multipliers")),
                                        decode_rational(j.at("delta_multiplier"))};
}

Json encode(const MaximalityWitness<Rational>& w) {
  return Json{{"dominator", encode(w.dominator)}, {"weights", encode(w.weights)}};
}

std::string to_string(StepKind k) {
  switch (k) {
    case StepKind::Generator: return "generator";
    case StepKind::GeneratorRay: return "generator_ray";
    case StepKind::Combination: return "combination";
    case StepKind::Extension: return "extension";
    case StepKind::Ray: return "ray";
  }
  return "?";
}

StepKind step_kind_from_string(const std::string& s) {
  for (auto k : {StepKind::Generator, StepKind::GeneratorRay, StepKind::Combination, StepKind::Extension,
                 StepKind::Ray}) {
    if (to_string(k) == s) return k;
  }
  throw FormatError("unknown derivation step kind \"" + s + "\"");
}

Json encode(const WitnessChain<Rational>& chain) {
  Json out = Json::array();
  for (const auto& s : chain) {
    Json step{{"kind", to_string(s.kind)}, {"value", encode(s.value)}};
    switch (s.kind) {
      case StepKind::Generator:
      case StepKind::GeneratorRay:
        step["generator"] = s.generator;
        break;
      case StepKind::Combination: {
        step["parents"] = s.parents;
        Json w = Json::array();
        for (const auto& x : s.weights) w.push_back(encode(x));
        step["weights"] = std::move(w);
        break;
      }
      case StepKind::Extension:
        step["parents"] = s.parents;
        step["delta"] = encode(s.delta);
        break;
      case StepKind::Ray:
        step["parents"] = s.parents;
        break;
    }
    out.push_back(std::move(step));
  }
  return out;
}

WitnessChain<Rational> decode_chain(const Json& j) {
  if (!j.is_array()) throw FormatError("witness chain must be an array");
  WitnessChain<Rational> chain;
  for (const auto& e : j) {
    DerivationStep<Rational> s;
    s.kind = step_kind_from_string(e.at("kind").get<std::string>());
    s.value = decode_vector(e.at("value"));
    if (e.contains("generator")) s.generator = e.at("generator").get<std::size_t>();
    if (e.contains("parents")) s.parents = e.at("parents").get<std::vector<std::size_t>>();
    if (e.contains("weights")) {
      for (const auto& w : e.at("weights")) s.weights.push_back(decode_rational(w));
    }
    if (e.contains("delta")) s.delta = decode_rational(e.at("delta"));
    chain.push_back(std::move(s));
  }
  return chain;
}

std::string to_string(LpVerdict v) { return v == LpVerdict::Feasible ? "feasible" : "infeasible"; }

std::string to_string(ClosureVerdict v) {
  switch (v) {
    case ClosureVerdict::Bounded: return "bounded";
    case ClosureVerdict::Unbounded: return "unbounded";
    case ClosureVerdict::Inconclusive: return "inconclusive";
  }
  return "?";
}

std::string to_string(Consistency v) {
  switch (v) {
    case Consistency::Consistent: return "consistent";
    case Consistency::Unresolved: return "unresolved";
    case Consistency::Inconsistent: return "inconsistent";
  }
  return "?";
}

Json encode(const ClosureResult<Rational>& result) {
  Json out;
  if (const auto* cert = std::get_if<NumeraireCertificate<Rational>>(&result.lp)) {
    out["lp"] = Json{{"verdict", "feasible"}, {"certificate", encode(*cert)}};
  } else {
    out["lp"] = Json{{"verdict", "infeasible"},
                     {"certificate", encode(std::get<NumeraireInfeasible<Rational>>(result.lp).farkas)}};
  }
  if (const auto* b = std::get_if<BoundedClosure<Rational>>(&result.verdict)) {
    Json iterates = Json::array();
    for (const auto& it : b->iterates) iterates.push_back(encode(it));
    out["closure"] = Json{{"verdict", "bounded"},
                          {"rounds", b->rounds},
                          {"fixed_point_reached", b->fixed_point_reached},
                          {"fixed_point", encode(b->body)},
                          {"q", encode(b->certificate.q)},
                          {"iterates", std::move(iterates)}};
  } else if (const auto* u = std::get_if<UnboundedClosure<Rational>>(&result.verdict)) {
    out["closure"] = Json{{"verdict", "unbounded"},
                          {"rounds", u->rounds},
                          {"ray", encode(u->ray())},
                          {"chain", encode(u->chain)}};
  } else {
    const auto& inc = std::get<InconclusiveClosure<Rational>>(result.verdict);
    out["closure"] = Json{{"verdict", "inconclusive"},
                          {"rounds", inc.rounds},
                          {"max_norm", encode(inc.max_norm)},
                          {"unbounded_suspected", inc.unbounded_suspected}};
  }
  return out;
}

Json encode(const ConsistencyReport<Rational>& report) {
  Json out = encode(report.result);
  Json c{{"lp_verdict", to_string(report.lp_verdict)},
         {"closure_verdict", to_string(report.closure_verdict)},
         {"status", to_string(report.status)}};
  if (report.containment_verified) c["containment_verified"] = *report.containment_verified;
  if (report.witness_verified) c["witness_verified"] = *report.witness_verified;
  if (!report.detail.empty()) c["detail"] = report.detail;
  out["consistency"] = std::move(c);
  return out;
}

Json encode(const ProofReport<Rational>& report) {
  Json steps = Json::array();
  for (const auto& step : report.steps) {
    Json assertions = Json::array();
    for (const auto& a : step.assertions) {
      Json e{{"name", a.name}, {"passed", a.passed}};
      if (!a.detail.empty()) e["detail"] = a.detail;
      assertions.push_back(std::move(e));
    }
    Json s{{"step", step.name}, {"passed", step.passed()}, {"assertions", std::move(assertions)}};
    if (!step.notes.empty()) s["notes"] = step.notes;
    if (step.name == "reduce" && report.reduced) s["reduced"] = encode(*report.reduced);
    if (step.name == "closure" && report.closure_body) {
      s["bounded"] = report.closure_bounded;
      s["body"] = encode(*report.closure_body);
    }
    if (step.name == "solid_hull" && report.solid_generators) s["generators"] = encode(*report.solid_generators);
    if (step.name == "cone" && report.cone) {
      s["generators"] = encode(report.cone->generators);
      if (report.cone_properties) {
        const auto& p = *report.cone_properties;
        s["uniform_probe"] = encode(p.uniform_probe);
        Json probes = Json::array();
        for (const auto& v : p.atom_probes) probes.push_back(encode(v));
        s["atom_probes"] = std::move(probes);
        if (p.positive_direction) s["positive_direction"] = encode(*p.positive_direction);
      }
    }
    if (step.name == "separation" && report.separation) {
      if (const auto* f = std::get_if<lp::StrictFeasible<Rational>>(&*report.separation)) {
        s["q"] = encode(f->x);
        s["epsilon"] = encode(f->epsilon);
      } else {
        s["farkas"] = encode(std::get<lp::StrictInfeasible<Rational>>(*report.separation));
      }
    }
    steps.push_back(std::move(s));
  }
  Json out{{"passed", report.passed()}, {"steps", std::move(steps)}};
  out["first_failure"] = report.first_failure ? Json(*report.first_failure) : Json(nullptr);
  if (report.pulled_back_q) out["pulled_back_q"] = encode(*report.pulled_back_q);
  return out;
}

Json encode(const oracle::Comparison& c) {
  Json out{{"lp_feasible", c.lp_feasible},
           {"epsilon", encode(c.epsilon)},
           {"grid_feasible", c.grid_feasible},
           {"candidates", c.candidates},
           {"outside_margin", c.outside_margin},
           {"agree", c.agree}};
  if (c.grid_q) out["grid_q"] = encode(*c.grid_q);
  return out;
}

market::MarketModel decode_model(const Json& j) {
  if (!j.is_object() || !j.contains("xi")) throw FormatError("market model needs \"xi\"");
  RVector xi = decode_vector(j.at("xi"));
  if (j.contains("p")) return market::MarketModel(FiniteProbSpace<Rational>(decode_vector(j.at("p"))), std::move(xi));
  const Eigen::Index n = xi.size();
  return market::MarketModel(FiniteProbSpace<Rational>::uniform(n), std::move(xi));
}

std::vector<Rational> decode_grid(const Json& j) {
  if (!j.is_array()) throw FormatError("grid must be an array");
  std::vector<Rational> out;
  for (const auto& e : j) out.push_back(decode_rational(e));
  return out;
}

}  // namespace numlab::io
