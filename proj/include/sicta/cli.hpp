#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace sicta::cli {

/// Process exit codes.
inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitFailure = 2;

/// Entry point behind the `sicta` binary. Subcommands: simulate, exact,
/// sweep, verify. Results go to `out` (or the files named by --out/--json),
/// diagnostics to `err`.
int run(std::vector<std::string> args, std::ostream& out, std::ostream& err);

/// Reads a flat key=value file ('#' comments allowed) and appends
/// `--key value` for every key not already given on the command line.
/// A value of true/false toggles a bare flag.
std::vector<std::string> merge_config(const std::vector<std::string>& args,
                                      const std::string& config_path);

/// Writes `content` to `path` via a temporary file and rename, so readers
/// never see a partial file.
void write_atomic(const std::string& path, const std::string& content);

}  // namespace sicta::cli
