#include "metachain/scale_algebra.hpp"

#include <cctype>

#include "metachain/errors.hpp"

namespace metachain {

namespace {

bool valid_integer(std::string_view s, bool allow_sign) {
  if (s.empty()) return false;
  std::size_t i = 0;
  if (allow_sign && (s[0] == '-' || s[0] == '+')) i = 1;
  if (i == s.size()) return false;
  for (; i < s.size(); ++i)
    if (!std::isdigit(static_cast<unsigned char>(s[i]))) return false;
  return true;
}

}  // namespace

Rational parse_rational(std::string_view text) {
  const auto slash = text.find('/');
  std::string_view num = text.substr(0, slash);
  std::string_view den = slash == std::string_view::npos ? std::string_view("1") : text.substr(slash + 1);
  if (!valid_integer(num, true) || !valid_integer(den, false))
    throw Error(ErrorCode::kParse, "not an exact rational: \"" + std::string(text) + "\"");
  std::string n(num);
  if (n[0] == '+') n.erase(0, 1);
  mpz_class p(n, 10);
  mpz_class q{std::string(den), 10};
  if (q == 0) throw Error(ErrorCode::kParse, "zero denominator: \"" + std::string(text) + "\"");
  Rational r(p, q);
  r.canonicalize();
  return r;
}

std::string format_rational(const Rational& value) {
  return value.get_num().get_str() + "/" + value.get_den().get_str();
}

ScaledQuantity::ScaledQuantity(Rational coeff, Rational order)
    : coeff_(std::move(coeff)), order_(std::move(order)) {
  coeff_.canonicalize();
  order_.canonicalize();
  if (sgn(coeff_) <= 0)
    throw Error(ErrorCode::kInvalidModel, "coefficient must be positive, got " + format_rational(coeff_));
}

ScaledQuantity mul(const ScaledQuantity& a, const ScaledQuantity& b) {
  return ScaledQuantity(a.coeff() * b.coeff(), a.order() + b.order());
}

ScaledQuantity div(const ScaledQuantity& a, const ScaledQuantity& b) {
  return ScaledQuantity(a.coeff() / b.coeff(), a.order() - b.order());
}

ScaledQuantity inverse(const ScaledQuantity& a) {
  return ScaledQuantity(1 / a.coeff(), -a.order());
}

ScaledQuantity add(const ScaledQuantity& a, const ScaledQuantity& b) {
  const int c = cmp(a.order(), b.order());
  if (c < 0) return a;
  if (c > 0) return b;
  return ScaledQuantity(a.coeff() + b.coeff(), a.order());
}

Weight add(const Weight& a, const Weight& b) {
  if (!a) return b;
  if (!b) return a;
  return add(*a, *b);
}

Weight mul(const Weight& a, const Weight& b) {
  if (!a || !b) return std::nullopt;
  return mul(*a, *b);
}

Magnitude compare(const ScaledQuantity& a, const ScaledQuantity& b) {
  const int c = cmp(a.order(), b.order());
  if (c > 0) return Magnitude::kPrec;
  if (c < 0) return Magnitude::kSucc;
  return Magnitude::kAsympEquiv;
}

LimitRatio limit_ratio(const ScaledQuantity& a, const ScaledQuantity& b) {
  switch (compare(a, b)) {
    case Magnitude::kPrec: return {false, Rational(0)};
    case Magnitude::kSucc: return {true, Rational(0)};
    case Magnitude::kAsympEquiv: break;
  }
  Rational r = a.coeff() / b.coeff();
  r.canonicalize();
  return {false, r};
}

int asymptotic_cmp(const ScaledQuantity& a, const ScaledQuantity& b) {
  const int c = cmp(a.order(), b.order());
  if (c != 0) return c > 0 ? -1 : 1;
  const int d = cmp(a.coeff(), b.coeff());
  return d < 0 ? -1 : (d > 0 ? 1 : 0);
}

namespace {
std::string short_rational(const Rational& r) {
  if (r.get_den() == 1) return r.get_num().get_str();
  return r.get_str();
}
}  // namespace

std::string to_label(const ScaledQuantity& q) {
  std::string s = short_rational(q.coeff());
  if (q.order() != 0) s += "·ε^" + short_rational(q.order());
  return s;
}

std::string to_label(const Weight& w) { return w ? to_label(*w) : std::string("0"); }

}  // namespace metachain
