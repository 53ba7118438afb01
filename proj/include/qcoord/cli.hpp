#ifndef QCOORD_CLI_HPP
#define QCOORD_CLI_HPP

#include <iosfwd>
#include <string>

#include "qcoord/report_json.hpp"

namespace qcoord::cli {

/// Exit-code contract.
inline constexpr int kExitPass = 0;
inline constexpr int kExitFail = 1;
inline constexpr int kExitUsage = 2;

struct Execution {
  json outcome;
  int exit_code = kExitPass;
  std::string text;
};

/// Runs one command from the `inputs` and `config` objects of a run record.
/// Input problems (parse, arity, domain) come back as an outcome of kind
/// "error" with exit code 2.
Execution execute(const std::string& command, const json& inputs, const json& config);

/// Full run record: schema, tool_version, command, inputs, config, outcome,
/// exit_code, wall_time.
json make_record(const std::string& command, const json& inputs, const json& config,
                 const Execution& ex, double wall_time);

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace qcoord::cli

#endif  // QCOORD_CLI_HPP
