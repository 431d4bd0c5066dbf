#pragma once

#include <cstdint>
#include <string>

#include "polytherm/config.hpp"

namespace polytherm::cli {

struct CommandArgs {
  Config config;
  std::string out_dir;
  std::uint64_t seed = 0;
  int threads = 1;  // from POLYTHERM_THREADS; modules are serial today, the cap is recorded
};

/// Each command returns the process exit code (0 success; EXPECTED-FAIL
/// counts as success).
int cmd_simulate(const CommandArgs& args);
int cmd_compare(const CommandArgs& args);
int cmd_bounds(const CommandArgs& args);
int cmd_weaklab(const CommandArgs& args);
int cmd_check(const CommandArgs& args);

}  // namespace polytherm::cli
