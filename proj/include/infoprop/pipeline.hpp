#pragma once

#include "infoprop/config.hpp"

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace infoprop {

enum class Command { Simulate, Theory, MeanField, Compare, All };

std::optional<Command> parse_command(std::string_view name);
std::string_view to_string(Command command);

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitNoAcceptedRuns = 3;
inline constexpr int kExitIo = 4;

inline constexpr const char* kVersion = "1.0.0";

/// I/O failure while writing outputs.
class OutputError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct RunOutcome {
    int exit_code = kExitOk;
    std::string message;
    /// Files written, relative to the output directory, in write order.
    std::vector<std::string> files;
};

/// Runs one stage (or the whole chain) and writes its files into config.out,
/// followed by manifest.json. Errors are reported through the exit code and
/// the message; progress lines go to `log`.
RunOutcome run(Command command, const RunConfig& config, std::ostream& log);

/// 64-bit FNV-1a, used for the manifest checksums.
std::uint64_t fnv1a64(std::string_view bytes);

} // namespace infoprop
