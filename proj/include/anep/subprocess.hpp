#pragma once

#include <optional>
#include <string>
#include <vector>

namespace anep {

struct CommandResult {
    int exit_code = -1;
    std::string output;   // captured stdout
    bool failed() const { return exit_code != 0; }
};

// Runs argv[0] with the given arguments (no shell involved), optionally
// feeding stdin_data, and captures stdout. stderr passes through. Throws
// anep::Error when the process cannot be spawned at all.
CommandResult run_command(const std::vector<std::string>& argv,
                          const std::optional<std::string>& stdin_data = std::nullopt);

// Splits a configured command string on whitespace into argv tokens.
// Adapter command specs are argv lists, not shell snippets; quoting and
// expansion are deliberately unsupported.
std::vector<std::string> split_command(const std::string& cmd);

}  // namespace anep
