#pragma once

#include <string>
#include <string_view>

namespace barrierwalk::cli {

// Parameter rule evaluated per n, from the grammar
//   rule := [name '='] term
//   term := number | [number ['*']] atom
//   atom := 'n' | 'sqrt(n)' | 'n^' number
// e.g. "5", "sqrt(n)", "0.5*sqrt(n)", "y=2*n^0.4".
class GridRule {
 public:
  static GridRule parse(std::string_view text);

  double operator()(double n) const noexcept;
  const std::string& text() const noexcept { return text_; }

 private:
  std::string text_;
  double coefficient_ = 1.0;
  double exponent_ = 0.0;  // value = coefficient * n^exponent
};

}  // namespace barrierwalk::cli
