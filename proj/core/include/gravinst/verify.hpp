#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace gravinst {

struct CheckResult {
  std::string name;
  bool pass = false;
  double metric = 0;  // worst deviation found
  double tol = 0;
  double seconds = 0;
  double budget = 0;  // runtime limit in seconds, 0 for none
  std::string detail;
};

/// `CHECK <name> PASS|FAIL metric=<m> tol=<t> time=<s>s [detail]`
std::string format_check(const CheckResult& r);

enum class VerifyScope { Tables, Residues, Ode, All };

/// Throws std::invalid_argument for anything but tables, residues, ode, all.
VerifyScope parse_scope(std::string_view text);

struct VerifyOptions {
  /// Replaces every check's own tolerance when set.
  std::optional<double> tol;
  /// Runtime budgets are part of the pass condition unless disabled.
  bool enforce_budgets = true;
};

// Individual acceptance checks.
CheckResult check_tables(const VerifyOptions& opts = {});
CheckResult check_eds_modes(const VerifyOptions& opts = {});
CheckResult check_closed_forms(const VerifyOptions& opts = {});
CheckResult check_quadrature(const VerifyOptions& opts = {});
CheckResult check_operator_residual(const VerifyOptions& opts = {});
CheckResult check_ode(const VerifyOptions& opts = {});
CheckResult check_completeness(const VerifyOptions& opts = {});

/// tables: AC1, AC2; residues: AC3, AC4, AC7; ode: AC5, AC6.
std::vector<CheckResult> run_verification(VerifyScope scope, const VerifyOptions& opts = {});

}  // namespace gravinst
