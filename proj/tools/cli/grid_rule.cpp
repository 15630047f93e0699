#include "cli/grid_rule.hpp"

#include <cctype>
#include <charconv>
#include <cmath>

#include "barrierwalk/error.hpp"

namespace barrierwalk::cli {

namespace {

[[noreturn]] void bad_rule(std::string_view text) {
  throw Error(Errc::InvalidArgument, "cannot parse rule '" + std::string(text) +
                                         "' (expected c, sqrt(n), c*sqrt(n), n^p or c*n^p)");
}

std::string strip(std::string_view s) {
  std::string out;
  for (char c : s) {
    if (!std::isspace(static_cast<unsigned char>(c))) out += c;
  }
  return out;
}

// Parses a leading decimal number; advances pos on success.
bool read_number(const std::string& s, std::size_t& pos, double& value) {
  const char* begin = s.data() + pos;
  auto [ptr, ec] = std::from_chars(begin, s.data() + s.size(), value);
  if (ec != std::errc{} || ptr == begin) return false;
  pos = static_cast<std::size_t>(ptr - s.data());
  return true;
}

}  // namespace

GridRule GridRule::parse(std::string_view text) {
  GridRule rule;
  rule.text_ = std::string(text);
  std::string s = strip(text);
  if (auto eq = s.find('='); eq != std::string::npos) s = s.substr(eq + 1);
  if (s.empty()) bad_rule(text);

  std::size_t pos = 0;
  double coef = 1.0;
  const bool has_coef = read_number(s, pos, coef);
  bool starred = false;
  if (has_coef && pos < s.size() && s[pos] == '*') {
    ++pos;
    starred = true;
  }
  rule.coefficient_ = coef;

  const std::string atom = s.substr(pos);
  if (atom.empty()) {
    if (!has_coef || starred) bad_rule(text);
    rule.exponent_ = 0.0;
  } else if (atom == "n") {
    rule.exponent_ = 1.0;
  } else if (atom == "sqrt(n)") {
    rule.exponent_ = 0.5;
  } else if (atom.rfind("n^", 0) == 0) {
    std::size_t p = 2;
    double e = 0.0;
    if (!read_number(atom, p, e) || p != atom.size()) bad_rule(text);
    rule.exponent_ = e;
  } else {
    bad_rule(text);
  }
  return rule;
}

double GridRule::operator()(double n) const noexcept {
  return coefficient_ * std::pow(n, exponent_);
}

}  // namespace barrierwalk::cli
