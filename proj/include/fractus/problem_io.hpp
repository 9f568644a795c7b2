#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>

#include "fractus/model.hpp"

namespace fractus {

/// The optional "solver" section of a problem file.
struct SolverConfig {
    std::optional<std::string> method;
    std::optional<std::size_t> nodes;
    std::optional<double> grading;
    std::optional<double> tol;
    std::optional<std::size_t> max_terms;
    std::optional<double> exponent_cap;
};

struct ProblemFile {
    CauchyProblem problem;  // validated
    SolverConfig solver;
};

/// Parses a JSON problem document. Unknown keys, malformed numerals and
/// invalid problems throw Error (ParseError or the validation code).
[[nodiscard]] ProblemFile parse_problem(std::string_view text);
[[nodiscard]] ProblemFile load_problem(const std::filesystem::path& path);

/// Inverse of parse_problem: orders and exponents as shortest round-trip
/// decimal strings, everything else as JSON numbers.
[[nodiscard]] std::string dump_problem(const ProblemFile& file);

}  // namespace fractus
