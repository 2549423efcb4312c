#include "numlab/verify.hpp"

#include <optional>

namespace numlab::verify {

namespace {

struct Context {
  RVector g;
  ConvexBody<Rational> body;
};

class Walker {
 public:
  Result result;

  void walk(const io::Json& node, const std::optional<Context>& outer, const std::string& path) {
    if (node.is_array()) {
      for (std::size_t i = 0; i < node.size(); ++i) walk(node[i], outer, path + "[" + std::to_string(i) + "]");
      return;
    }
    if (!node.is_object()) return;

    std::optional<Context> ctx = outer;
    if (node.contains("instance")) {
      try {
        const auto& inst = node.at("instance");
        ctx = Context{io::decode_vector(inst.at("g")), io::decode_body(inst)};
      } catch (const std::exception& e) {
        fail(path + ".instance", e.what());
        return;
      }
    }

    for (const auto& [key, value] : node.items()) {
      const std::string here = path + "." + key;
      if (ctx) {
        try {
          if (key == "certificate" && value.is_object()) check_certificate(*ctx, value, here);
          if (key == "maximality_witness") check_dominator(*ctx, value, here);
          if (key == "closure" && value.is_object() && value.contains("verdict")) check_closure(*ctx, value, here);
          if (key == "grid_q" || key == "pulled_back_q") check_q(*ctx, io::decode_vector(value), here);
        } catch (const std::exception& e) {
          fail(here, std::string("malformed: ") + e.what());
        }
      }
      if (key != "instance") walk(value, ctx, here);
    }
  }

 private:
  void fail(const std::string& where, const std::string& why) { result.failures.push_back(where + ": " + why); }

  void check_q(const Context& ctx, const RVector& q, const std::string& where) {
    ++result.checked;
    if (!verify_certificate(ctx.g, ctx.body, q)) fail(where, "q is not a numeraire certificate");
  }

  void check_certificate(const Context& ctx, const io::Json& cert, const std::string& where) {
    if (cert.contains("q")) {
      check_q(ctx, io::decode_vector(cert.at("q")), where);
    } else if (cert.contains("farkas")) {
      ++result.checked;
      if (!verify_infeasibility(ctx.g, ctx.body, io::decode_farkas(cert))) {
        fail(where, "Farkas certificate does not verify");
      }
    }
  }

  void check_dominator(const Context& ctx, const io::Json& w, const std::string& where) {
    ++result.checked;
    const RVector weights = io::decode_vector(w.at("weights"));
    const RVector dominator = io::decode_vector(w.at("dominator"));
    const auto& pts = ctx.body.points();
    if (weights.size() != static_cast<Eigen::Index>(pts.size())) return fail(where, "weight count mismatch");
    if (!is_nonnegative(weights) || weights.sum() != 1) return fail(where, "weights are not convex");
    RVector h = RVector::Zero(ctx.g.size());
    for (std::size_t j = 0; j < pts.size(); ++j) h += weights[static_cast<Eigen::Index>(j)] * pts[j];
    if (!same(h, dominator)) return fail(where, "dominator is not the stated combination");
    if (!dominates(h, ctx.g) || same(h, ctx.g)) fail(where, "dominator does not strictly dominate g");
  }

  void check_closure(const Context& ctx, const io::Json& c, const std::string& where) {
    const auto verdict = c.at("verdict").get<std::string>();
    if (verdict == "bounded") {
      const RVector q = io::decode_vector(c.at("q"));
      check_q(ctx, q, where + ".q");
      ++result.checked;
      for (const auto& it : c.at("iterates")) {
        const auto body = io::decode_body(it);
        if (!body.rays().empty()) return fail(where, "bounded iterate carries a ray");
        for (const auto& h : body.points()) {
          if (!in_superset_K(q, ctx.g, h)) return fail(where, "iterate generator outside K_q");
        }
      }
    } else if (verdict == "unbounded") {
      ++result.checked;
      const auto chain = io::decode_chain(c.at("chain"));
      const auto check = verify_witness(ctx.g, ctx.body, chain);
      if (!check.ok) return fail(where, "witness chain: " + check.reason);
      if (!same(chain.back().value, io::decode_vector(c.at("ray")))) fail(where, "ray differs from chain end");
    }
  }
};

}  // namespace

Result verify_report(const io::Json& report) {
  Walker w;
  w.walk(report, std::nullopt, "$");
  return w.result;
}

}  // namespace numlab::verify
