#ifndef NUMLAB_JSON_IO_HPP
#define NUMLAB_JSON_IO_HPP

// JSON encodings. Rationals travel as canonical "a/b" strings (integers are
// also accepted on input). Key order is stable so that reports are
// byte-identical across runs.

#include <string>

#include <json.hpp>

#include "numlab/closure.hpp"
#include "numlab/core.hpp"
#include "numlab/market.hpp"
#include "numlab/numeraire.hpp"
#include "numlab/oracle.hpp"
#include "numlab/prooflab.hpp"

namespace numlab::io {

using Json = nlohmann::ordered_json;

class FormatError : public std::invalid_argument {
 public:
  explicit FormatError(const std::string& what) : std::invalid_argument(what) {}
};

Json encode(const Rational& r);
Json encode(const RVector& v);
Json encode(const std::vector<RVector>& vs);
Json encode(const ConvexBody<Rational>& body);

Rational decode_rational(const Json& j);
RVector decode_vector(const Json& j);
std::vector<RVector> decode_vectors(const Json& j);
/// {"points": [...], "rays": [...]}; "rays" may be omitted.
ConvexBody<Rational> decode_body(const Json& j);

/// {"points", "rays", "g"}: everything needed to re-check a certificate.
Json encode_instance(const RVector& g, const ConvexBody<Rational>& body);

/// 64-bit FNV-1a of the compact dump, as 16 hex digits.
std::string digest(const Json& j);

Json encode(const NumeraireCertificate<Rational>& cert);
Json encode(const lp::StrictInfeasible<Rational>& cert);
Json encode(const MaximalityWitness<Rational>& w);
Json encode(const WitnessChain<Rational>& chain);
Json encode(const ClosureResult<Rational>& result);
Json encode(const ConsistencyReport<Rational>& report);
Json encode(const ProofReport<Rational>& report);
Json encode(const oracle::Comparison& c);

std::string to_string(LpVerdict v);
std::string to_string(ClosureVerdict v);
std::string to_string(Consistency v);
std::string to_string(StepKind k);
StepKind step_kind_from_string(const std::string& s);

lp::StrictInfeasible<Rational> decode_farkas(const Json& j);
WitnessChain<Rational> decode_chain(const Json& j);

/// {"p": [...] (optional, uniform by default), "xi": [...], "grid": [...]}.
market::MarketModel decode_model(const Json& j);
std::vector<Rational> decode_grid(const Json& j);

}  // namespace numlab::io

#endif  // NUMLAB_JSON_IO_HPP
