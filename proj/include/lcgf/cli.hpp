#pragma once

// Command dispatch of the lcgf tool. Every verb yields a Report that can be
// emitted as an aligned text table or as a versioned JSON document.

#include "lcgf/laplace.hpp"
#include "lcgf/serialize.hpp"

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace lcgf::cli {

inline constexpr int schema_version = 1;

enum class Format { text, machine };

/// Bad flag values; reported before any computation starts.
class UsageError : public Error {
public:
    using Error::Error;
};

struct Options {
    std::string trunc = "6";
    int moment_order = 2;
    double quad_tol = 1e-12;
    int battery = 32;
    std::uint64_t seed = 0;
    Format format = Format::text;
    std::optional<Ruleset> ruleset;  ///< audit defaults to naive, laplace to hat
    std::string y0 = "0";
    std::string yp0 = "0";
};

struct Command {
    std::string verb;
    std::string expression;
    Options options;
};

const std::vector<std::string>& verbs();

struct Section {
    std::string title;
    std::vector<std::pair<std::string, std::string>> rows;
    std::vector<std::string> lines;  ///< free text after the rows
};

struct Report {
    int status = 0;
    Json document;
    std::vector<Section> sections;
    std::vector<std::string> raw;  ///< delimited data lines (mollifier-dump)
};

/// Throws UsageError for invalid options.
void validate(const Command& cmd);

/// Runs a command; errors are folded into the report (status 1, 2 for domain errors).
Report dispatch(const Command& cmd);

std::string emit(const Report& r, Format format);

/// Full command line: parse flags, dispatch, emit. Returns the exit status.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace lcgf::cli
