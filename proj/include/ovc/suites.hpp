#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "ovc/cumulants.hpp"
#include "ovc/report.hpp"

namespace ovc {

/// Multiplies the table of one cumulant family at one order, so that a
/// suite built on it must fail.
struct FaultSpec {
  CumulantKind kind = CumulantKind::Free;
  int length = 2;
  double factor = 1.5;
};
/// "free:2" or "boolean:3:0.5".
FaultSpec parse_fault(std::string_view s);

struct SuiteConfig {
  std::shared_ptr<const OVMatrixSpace> space;
  int max_order = 4;
  double tol = 1e-9;
  std::uint64_t seed = 1;
  std::optional<FaultSpec> fault;
};

struct SuiteReport {
  std::string name;
  bool pass = true;
  std::vector<CheckResult> checks;
};

/// hopf, shuffle, operad, oracle, moment-cumulant, splitting, monotone-scalar.
const std::vector<std::string>& suite_names();
SuiteReport run_suite(const std::string& name, const SuiteConfig& cfg);

/// Exact gap-insertion associativity and unit laws, and the generator
/// relation for arities 2..max_arity.
std::vector<CheckResult> operad_checks(int max_arity = 5);

/// The bialgebra axioms on partition words of total size <= max_size with at
/// most max_letters letters.
std::vector<CheckResult> hopf_checks(int max_size, int max_letters);

}  // namespace ovc
