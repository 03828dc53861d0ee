#include "rwb/rational.hpp"

#include <cctype>

namespace rwb {

Integer rat_floor(const Rational& q) {
  Integer n = num(q), d = den(q);
  Integer quo = n / d;
  if (n < 0 && quo * d != n) --quo;
  return quo;
}

int rat_sign(const Rational& q) {
  Integer n = num(q);
  if (n < 0) return -1;
  if (n > 0) return 1;
  return 0;
}

bool is_dyadic_rational(const Rational& q) {
  Integer d = den(q);
  while (d % 2 == 0) d /= 2;
  return d == 1;
}

Rational pow2(long e) {
  Integer p = 1;
  p <<= static_cast<unsigned>(e < 0 ? -e : e);
  return e >= 0 ? Rational(p) : Rational(1, p);
}

long rat_floor_log2(const Rational& q) {
  if (rat_sign(q) <= 0) throw std::domain_error("rat_floor_log2 needs a positive argument");
  long e = (long)boost::multiprecision::msb(num(q)) - (long)boost::multiprecision::msb(den(q));
  while (pow2(e + 1) <= q) ++e;
  while (pow2(e) > q) --e;
  return e;
}

Rational rat_pow(const Rational& base, unsigned long e) {
  Rational acc(1), b = base;
  while (e) {
    if (e & 1) acc *= b;
    b *= b;
    e >>= 1;
  }
  return acc;
}

std::string rat_to_string(const Rational& q) {
  std::string s = num(q).str();
  if (den(q) != 1) {
    s += "/";
    s += den(q).str();
  }
  return s;
}

std::optional<Rational> rat_parse(const std::string& s) {
  if (s.empty()) return std::nullopt;
  auto slash = s.find('/');
  auto is_int = [](const std::string& t) {
    if (t.empty()) return false;
    size_t i = (t[0] == '-' || t[0] == '+') ? 1 : 0;
    if (i == t.size()) return false;
    for (; i < t.size(); ++i)
      if (!std::isdigit(static_cast<unsigned char>(t[i]))) return false;
    return true;
  };
  try {
    if (slash == std::string::npos) {
      if (!is_int(s)) return std::nullopt;
      return Rational(Integer(s));
    }
    std::string n = s.substr(0, slash), d = s.substr(slash + 1);
    if (!is_int(n) || !is_int(d)) return std::nullopt;
    Integer dd(d);
    if (dd == 0) return std::nullopt;
    return Rational(Integer(n), dd);
  } catch (...) {
    return std::nullopt;
  }
}

}  // namespace rwb
