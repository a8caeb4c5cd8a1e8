#pragma once

#include <string>
#include <vector>

#include "ovc/ovps.hpp"
#include "ovc/unshuffle.hpp"

namespace ovc {

/// One verified identity: symbolic checks are exact, numeric ones carry the
/// worst deviation and the tolerance they were held to.
struct CheckResult {
  std::string name;
  std::string property;
  bool exact = false;
  bool pass = true;
  std::size_t cases = 0;
  Deviation dev;
  double tol = 0;
  std::string detail;
};

inline CheckResult from_symbolic(const SymbolicCheck& s, std::string property) {
  CheckResult r;
  r.name = s.name;
  r.property = std::move(property);
  r.exact = true;
  r.pass = s.pass;
  r.cases = s.cases;
  r.detail = s.failure;
  return r;
}

inline CheckResult numeric_result(std::string name, std::string property, const Deviation& dev, double tol,
                                  std::size_t cases, std::string detail = {}) {
  CheckResult r;
  r.name = std::move(name);
  r.property = std::move(property);
  r.dev = dev;
  r.tol = tol;
  r.pass = dev.within(tol);
  r.cases = cases;
  r.detail = std::move(detail);
  return r;
}

inline bool all_pass(const std::vector<CheckResult>& rs) {
  for (const auto& r : rs)
    if (!r.pass) return false;
  return true;
}

}  // namespace ovc
