#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "itops/model.hpp"
#include "itops/report.hpp"

namespace itops {

inline constexpr const char* kToolVersion = "0.1.0";

// Parsed model.json. Complex numbers are [re, im] pairs.
struct ModelConfig {
  std::string family;
  int N = 2;
  int M = 2;
  std::optional<cplx> tau;
  std::optional<cplx> C;
  cplx nu{1.0, 0.0};
  std::string spin_mode = "general";
  std::uint64_t seed = 0;
  std::vector<cplx> q0;
  std::vector<cplx> p0;
  std::optional<ComplexMatrix> S0;  // explicit NM x NM spin, overrides spin_mode
  Json echo;
};

// Throws ConfigError naming the offending field, ConstraintViolation when
// per-site traces differ.
ModelConfig parse_model_config(const Json& j);
ModelConfig load_model_config(const std::string& path);

std::shared_ptr<const RMatrixFamily> make_family(const std::string& name, int n, std::optional<cplx> tau,
                                                 std::optional<cplx> c);
PhaseState make_state(const ModelConfig& cfg);

// "RE,IM" -> complex; "RE,IM;RE,IM" -> list.
cplx parse_complex(const std::string& s);
std::vector<cplx> parse_complex_list(const std::string& s);

// Exit codes: 0 all checks pass, 1 a check failed, 2 usage or config error.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace itops
