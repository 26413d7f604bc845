#pragma once

#include <cstdint>
#include <numeric>
#include <string>

namespace geocake {

// Exact ratio used for guarantees and loss bounds. A zero denominator encodes
// an unbounded value.
struct Rational {
  std::int64_t num = 0;
  std::int64_t den = 1;

  static constexpr Rational of(std::int64_t n, std::int64_t d) {
    if (d == 0) return {1, 0};
    if (d < 0) { n = -n; d = -d; }
    const std::int64_t g = std::gcd(n < 0 ? -n : n, d);
    return g == 0 ? Rational{0, 1} : Rational{n / g, d / g};
  }
  static constexpr Rational unbounded() { return {1, 0}; }

  constexpr bool is_unbounded() const { return den == 0; }
  double value() const;
  std::string str() const;
  Rational reciprocal() const;

  friend constexpr bool operator==(const Rational&, const Rational&) = default;
};

Rational parse_rational(const std::string& text);

}  // namespace geocake
