#pragma once

#include <gmpxx.h>

#include <optional>
#include <string>
#include <string_view>

namespace metachain {

using Rational = mpq_class;

// Accepts "p/q" or a bare integer, optionally signed. Decimals and floats
// are rejected.
Rational parse_rational(std::string_view text);

// Canonical form, always "p/q" with q > 0 and gcd(p, q) = 1.
std::string format_rational(const Rational& value);

// A positive leading-order monomial coeff * eps^order.
class ScaledQuantity {
 public:
  ScaledQuantity(Rational coeff, Rational order);

  static ScaledQuantity one() { return ScaledQuantity(Rational(1), Rational(0)); }

  const Rational& coeff() const noexcept { return coeff_; }
  const Rational& order() const noexcept { return order_; }

  friend bool operator==(const ScaledQuantity& a, const ScaledQuantity& b) {
    return a.coeff_ == b.coeff_ && a.order_ == b.order_;
  }

 private:
  Rational coeff_;
  Rational order_;
};

// Absent value (the zero sentinel) or a ScaledQuantity.
using Weight = std::optional<ScaledQuantity>;

enum class Magnitude { kPrec, kAsympEquiv, kSucc };

struct LimitRatio {
  bool infinite = false;
  Rational value;  // meaningful only when !infinite

  friend bool operator==(const LimitRatio& a, const LimitRatio& b) {
    return a.infinite == b.infinite && (a.infinite || a.value == b.value);
  }
};

ScaledQuantity mul(const ScaledQuantity& a, const ScaledQuantity& b);
ScaledQuantity div(const ScaledQuantity& a, const ScaledQuantity& b);
ScaledQuantity add(const ScaledQuantity& a, const ScaledQuantity& b);
ScaledQuantity inverse(const ScaledQuantity& a);

Weight add(const Weight& a, const Weight& b);
Weight mul(const Weight& a, const Weight& b);

// kPrec when a is of lower magnitude than b (a/b -> 0).
Magnitude compare(const ScaledQuantity& a, const ScaledQuantity& b);

// lim a/b as eps -> 0.
LimitRatio limit_ratio(const ScaledQuantity& a, const ScaledQuantity& b);

// Total order on asymptotic size: order first (higher order is smaller),
// then coefficient. Returns <0 if a is asymptotically smaller than b.
int asymptotic_cmp(const ScaledQuantity& a, const ScaledQuantity& b);

// "2·ε^-2" style label.
std::string to_label(const ScaledQuantity& q);
std::string to_label(const Weight& w);

}  // namespace metachain
