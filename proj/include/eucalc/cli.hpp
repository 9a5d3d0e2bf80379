#pragma once

#include "eucalc/levogel.hpp"
#include "eucalc/strat_calc.hpp"

#include "json.hpp"

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace eucalc::cli {

enum class Command { conormal, sigma_cnr, levogel, eu_rel, eu_rel_isolated, strat_eu, strat_eu_rel, cc };

std::optional<Command> parse_command(std::string_view name);
std::string to_string(Command command);
const std::vector<std::string>& command_names();

/// Input error carrying a location in the problem file (1-based; 0 when unknown).
class InputError : public Error {
public:
    InputError(const std::string& message, std::size_t line = 0, std::size_t column = 0);
    std::size_t line() const noexcept { return line_; }
    std::size_t column() const noexcept { return column_; }

private:
    std::size_t line_, column_;
};

struct GeometricProblem {
    VariableContext context;
    std::vector<Polynomial> generators;
    Polynomial function;
    RationalPoint point;
    std::optional<std::uint64_t> seed;
    /// Used when f is constant near the point.
    std::optional<StratificationFile> stratification;
    std::optional<std::string> point_stratum;
};

struct StratifiedProblem {
    StratificationFile file;
    /// Stratum containing the query point.
    std::optional<std::string> point_stratum;
    /// Values of a constructible function by stratum name (cc command); absent means constant 1.
    std::optional<ConstructibleFunction> function;
};

struct ProblemFile {
    enum class Kind { geometric, stratified } kind = Kind::geometric;
    std::optional<GeometricProblem> geometric;
    std::optional<StratifiedProblem> stratified;
};

/// `source` names the input in diagnostics.
ProblemFile parse_problem(std::string_view text, const std::string& source = "<input>");
ProblemFile load_problem(const std::filesystem::path& path);

struct RunOptions {
    Command command = Command::eu_rel;
    std::filesystem::path input;
    std::optional<std::uint64_t> seed;
    MonomialOrder order = MonomialOrder::grevlex();
};

enum ExitCode : int { exit_verified = 0, exit_error = 1, exit_unverified = 2 };

struct Report {
    nlohmann::json body;
    int exit_code = exit_verified;
};

Report run(const ProblemFile& problem, const RunOptions& options);

/// Text rendering of a report body.
std::string render_text(const nlohmann::json& body);

nlohmann::json ideal_to_json(const Ideal& ideal, const MonomialOrder& order);

/// Full command line: parse, run, print. Returns the process exit code.
int run_command(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace eucalc::cli
