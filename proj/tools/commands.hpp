// commands.hpp — Subcommands of the sqzcav command line
#pragma once

#include <optional>
#include <string>

#include "run_config.hpp"

namespace sqz::cli {

inline constexpr const char* kLibraryVersion = "0.1.0";

enum ExitCode : int { kOk = 0, kPhysicsFailure = 1, kUsageError = 2 };

struct CommandArgs {
    std::string config_path;
    std::string out_dir{"."};
    std::string method{"analytic"};
    std::optional<std::string> probe_mode;
    std::optional<std::string> tier;
    std::optional<int> n_max;
    long seed{0};  // reserved; recorded only
    int threads{1};
};

/// Loads the config (defaults when no path is given), applies flag overrides
/// and resolves the auxiliary drive. Throws ConfigError.
RunConfig prepare_config(const CommandArgs& args);

int cmd_validate(const CommandArgs& args);
int cmd_bloch(const CommandArgs& args);
int cmd_spectrum(const CommandArgs& args);
int cmd_compare(const CommandArgs& args);
int cmd_nogo(const CommandArgs& args);

/// %.17g with '.' decimal, independent of the global locale.
std::string format_double(double v);

} // namespace sqz::cli
