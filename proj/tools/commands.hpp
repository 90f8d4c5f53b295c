#pragma once

#include <optional>
#include <string>
#include <vector>

#include "qrigid/json_io.hpp"

namespace qrigid::cli {

struct JobConfig {
  std::vector<std::string> inputs;
  std::optional<int> cutoff;  // --cutoff, else the input's own, else QRIGID_CUTOFF, else 12
  std::string out;
  std::string profile = "smoke";
  // root-system and automorphism flags, kept as text until a command needs them
  std::string type, word, coweight, twist, ray, c, degrees, exp, convention;
  int height = 0, bound = 0;
};

struct CommandResult {
  Json report;
  int exit_code = 0;
};

// Flags a leaf command accepts beyond --out and --cutoff.
struct CommandInfo {
  std::string group, command, summary;
  std::vector<std::string> flags;
  int min_inputs = 0, max_inputs = 0;
  CommandResult (*run)(const JobConfig&);
};

const std::vector<CommandInfo>& commands();

// Cutoff from QRIGID_CUTOFF, or 12 when unset; InputError when malformed.
int default_cutoff();

}  // namespace qrigid::cli
