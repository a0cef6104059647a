#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace gpw {

enum class Errc {
  invalid_argument,
  parse,
  invalid_cover,
  inadmissible,
  not_a_frame,
  infeasible,
  degenerate,
  solver,
};

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what) : std::runtime_error(what), code_(code) {}
  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

// Malformed input text. `line` is 1-based, 0 when not line-oriented.
class ParseError : public Error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : Error(Errc::parse, line ? "line " + std::to_string(line) + ": " + what : what),
        line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

// Which clause of the cover assumption a subset family violates.
enum class CoverClause { union_incomplete, shared_edge, disconnected, singleton, unknown_vertex };

inline const char* to_string(CoverClause c) {
  switch (c) {
    case CoverClause::union_incomplete: return "union of subsets does not cover V(G)";
    case CoverClause::shared_edge: return "an edge lies in two different subsets";
    case CoverClause::disconnected: return "subset is not connected as an induced graph";
    case CoverClause::singleton: return "subset has fewer than two vertices";
    case CoverClause::unknown_vertex: return "subset names a vertex not in the graph";
  }
  return "?";
}

class CoverError : public Error {
 public:
  CoverError(CoverClause clause, const std::string& detail)
      : Error(Errc::invalid_cover, std::string(to_string(clause)) + ": " + detail), clause_(clause) {}
  CoverClause clause() const noexcept { return clause_; }

 private:
  CoverClause clause_;
};

// Bandwidth outside the computed admissible interval (0, upper).
class AdmissibilityError : public Error {
 public:
  AdmissibilityError(double omega, double upper)
      : Error(Errc::inadmissible, "omega=" + std::to_string(omega) +
                                      " outside admissible range (0, " + std::to_string(upper) + ")"),
        omega_(omega),
        upper_(upper) {}
  double omega() const noexcept { return omega_; }
  double upper() const noexcept { return upper_; }

 private:
  double omega_;
  double upper_;
};

}  // namespace gpw
