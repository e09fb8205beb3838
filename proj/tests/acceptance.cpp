#include <cstdio>
#include <string>
#include <vector>

#include "gravinst/verify.hpp"

int main() {
  using namespace gravinst;
  struct Criterion {
    const char* id;
    CheckResult (*run)(const VerifyOptions&);
  };
  const std::vector<Criterion> criteria{
      {"AC1", check_tables},          {"AC2", check_eds_modes},         {"AC3", check_closed_forms},
      {"AC4", check_quadrature},      {"AC5", check_operator_residual}, {"AC6", check_ode},
      {"AC7", check_completeness},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    CheckResult r;
    try {
      r = c.run({});
    } catch (const std::exception& e) {
      r.name = c.id;
      r.detail = std::string("error=\"") + e.what() + "\"";
    }
    std::printf("%s %s | %s\n", c.id, r.pass ? "PASS" : "FAIL", format_check(r).c_str());
    std::fflush(stdout);
    failed += r.pass ? 0 : 1;
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
