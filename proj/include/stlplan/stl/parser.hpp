#pragma once

#include <cstddef>
#include <string>
#include <string_view>

#include "stlplan/common/error.hpp"
#include "stlplan/stl/formula.hpp"

namespace stlplan::stl {

/// Syntax error with a 1-based source position.
class ParseError : public Error {
 public:
  ParseError(std::size_t line, std::size_t column, std::string detail);

  std::size_t line() const noexcept { return line_; }
  std::size_t column() const noexcept { return column_; }
  const std::string& detail() const noexcept { return detail_; }

 private:
  std::size_t line_;
  std::size_t column_;
  std::string detail_;
};

/// Parses the concrete formula syntax:
///
///   true | (sig > c) | (sig < c) | ! f | f & f | f | f
///   F f | F[a,b] f | G f | G[a,b] f | f U f | f U[a,b] f
///
/// Precedence from loosest to tightest: `|`, `&`, `U` (right associative),
/// then the prefix operators `!`, `F`, `G`. The interval upper bound may be
/// `inf`.
Formula parse_formula(std::string_view text);

}  // namespace stlplan::stl
