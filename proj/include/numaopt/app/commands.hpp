#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>

namespace numaopt::app {

struct CommandOptions {
    std::optional<std::string> config;
    std::optional<std::uint64_t> seed;
    std::optional<std::string> out;
    std::optional<std::size_t> samples;
    std::optional<std::string> strategy;
    std::optional<std::string> labels;
    std::optional<std::string> model;
    bool quiet = false;
};

inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 1;
inline constexpr int kExitRuntime = 2;

inline constexpr const char* kVersion = "0.1.0";

/// Runs one subcommand; prints diagnostics to `err`, progress to `log` unless
/// quiet. Returns the process exit code.
int run_command(const std::string& name, const CommandOptions& options, std::ostream& log,
                std::ostream& err);

} // namespace numaopt::app
