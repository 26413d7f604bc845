#include "geocake/rational.hpp"

#include <limits>
#include <stdexcept>

namespace geocake {

double Rational::value() const {
  if (is_unbounded()) return std::numeric_limits<double>::infinity();
  return static_cast<double>(num) / static_cast<double>(den);
}

std::string Rational::str() const {
  if (is_unbounded()) return "inf";
  if (den == 1) return std::to_string(num);
  return std::to_string(num) + "/" + std::to_string(den);
}

Rational Rational::reciprocal() const {
  if (is_unbounded()) return {0, 1};
  if (num == 0) return unbounded();
  return of(den, num);
}

Rational parse_rational(const std::string& text) {
  if (text == "inf") return Rational::unbounded();
  const auto slash = text.find('/');
  try {
    if (slash == std::string::npos) return Rational::of(std::stoll(text), 1);
    const auto d = std::stoll(text.substr(slash + 1));
    if (d == 0) throw std::invalid_argument("zero denominator");
    return Rational::of(std::stoll(text.substr(0, slash)), d);
  } catch (const std::logic_error&) {
    throw std::invalid_argument("bad rational: " + text);
  }
}

}  // namespace geocake
