#ifndef NUMLAB_VERIFY_HPP
#define NUMLAB_VERIFY_HPP

// Re-checks the certificates embedded in a report using substitution and
// exact arithmetic only; the simplex is never called.
//
// Any object carrying an "instance" sets the context for everything nested
// inside it. Recognised blocks:
//   "certificate": {"q", ...} or {"farkas", ...}
//   "maximality_witness": {"dominator", "weights"}
//   "closure": bounded (iterates inside K_q) or unbounded (witness chain)
//   "grid_q", "pulled_back_q": bare certificates

#include <string>
#include <vector>

#include "numlab/json_io.hpp"

namespace numlab::verify {

struct Result {
  std::size_t checked = 0;
  std::vector<std::string> failures;

  bool ok() const { return failures.empty(); }
};

Result verify_report(const io::Json& report);

}  // namespace numlab::verify

#endif  // NUMLAB_VERIFY_HPP
