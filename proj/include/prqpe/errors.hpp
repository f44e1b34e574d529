#pragma once

#include <stdexcept>
#include <string>

namespace prqpe {

// Invalid user input or malformed data (CLI exit code 2).
class ValidationError : public std::runtime_error {
  public:
    explicit ValidationError(const std::string& what) : std::runtime_error(what) {}
};

class ParseError : public ValidationError {
  public:
    ParseError(const std::string& what, std::size_t line)
        : ValidationError(what + " (line " + std::to_string(line) + ")"), line_number(line) {}
    std::size_t line_number;
};

// A feasible configuration does not exist, e.g. no code distance satisfies
// the logical-error budget (CLI exit code 3).
class InfeasibleError : public std::runtime_error {
  public:
    explicit InfeasibleError(const std::string& what) : std::runtime_error(what) {}
};

// An RPE round produced an estimator whose phase is undefined.
class RoundFailure : public std::runtime_error {
  public:
    RoundFailure(const std::string& what, int round)
        : std::runtime_error(what + " (round m=" + std::to_string(round) + ")"), round_index(round) {}
    int round_index;
};

}  // namespace prqpe
