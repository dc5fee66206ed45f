#pragma once

#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace moebius::cli {

enum class Command {
    geometry,
    classical,
    spectrum_free,
    spectrum_flux,
    spectrum_coulomb,
    validate,
};

/// A fully validated run description: the chosen command plus every
/// parameter (defaults applied) rendered as deterministic strings.
struct RunConfig {
    Command command = Command::validate;
    std::map<std::string, std::string> params;

    double get_double(const std::string& key) const;
    int get_int(const std::string& key) const;
    bool get_bool(const std::string& key) const;
    const std::string& get_string(const std::string& key) const;
};

/// Invalid or unknown arguments; the message names the offending flag.
/// Maps to exit code 2.
class UsageError : public std::runtime_error {
   public:
    using std::runtime_error::runtime_error;
};

/// Thrown after help text has been printed; maps to exit code 0.
struct HelpRequested {};

/// Parses the argument list (program name excluded). Values from an
/// optional `--config key=value` file are applied first, so explicit
/// flags override them. Throws UsageError or HelpRequested.
RunConfig parse_args(const std::vector<std::string>& args);

/// Executes the command, writing its artifacts under the configured
/// output directory. Returns the process exit code.
int run(const RunConfig& config);

/// parse + run + exit-code mapping (0 success, 1 solver failure, 2 usage).
int main_entry(int argc, char** argv);

}  // namespace moebius::cli
