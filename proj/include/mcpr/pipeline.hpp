#pragma once

#include <string>

#include "mcpr/config.hpp"

namespace mcpr {

// Subcommand entry points. Each reads its inputs and writes its
// artifacts under `out_dir` (atomically: temp file + rename), throwing
// ConfigError / MissingArtifactError / DataError on failure.
void cmd_gen_synthetic(const Config& config, const std::string& out_dir);
void cmd_split(const Config& config, const std::string& out_dir);
void cmd_embed(const Config& config, const std::string& out_dir);
void cmd_train(const Config& config, const std::string& out_dir);
void cmd_eval(const Config& config, const std::string& out_dir);
void cmd_openworld(const Config& config, const std::string& out_dir);
void cmd_sweep_lambda(const Config& config, const std::string& out_dir);
void cmd_report(const Config& config, const std::string& out_dir);

/// Dispatches one subcommand and maps exceptions to the documented
/// exit codes (0 ok, 2 config, 3 missing artifact, 4 data), printing
/// a one-line `error: <category>: <message>` to stderr on failure.
int run_command(const std::string& name, const Config& config, const std::string& out_dir);

}  // namespace mcpr
