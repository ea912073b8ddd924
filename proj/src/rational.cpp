#include "fna/rational.hpp"

#include <cctype>
#include <cstdlib>

#include "fna/errors.hpp"

namespace fna {

namespace {

bool all_digits(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s)
    if (!std::isdigit(static_cast<unsigned char>(c))) return false;
  return true;
}

BigInt parse_int(std::string_view s) {
  bool neg = false;
  if (!s.empty() && (s[0] == '+' || s[0] == '-')) {
    neg = s[0] == '-';
    s.remove_prefix(1);
  }
  if (!all_digits(s)) throw ParseError("not an integer: '" + std::string(s) + "'");
  BigInt v{std::string(s)};
  return neg ? -v : v;
}

}  // namespace

Rational parse_rational(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  if (s.empty()) throw ParseError("empty rational");

  if (auto slash = s.find('/'); slash != std::string_view::npos) {
    BigInt num = parse_int(s.substr(0, slash));
    BigInt den = parse_int(s.substr(slash + 1));
    if (den == 0) throw ParseError("zero denominator");
    return Rational(num, den);
  }

  // decimal with optional exponent
  std::string_view mant = s;
  long exp10 = 0;
  if (auto e = s.find_first_of("eE"); e != std::string_view::npos) {
    std::string es(s.substr(e + 1));
    if (es.empty()) throw ParseError("bad exponent in '" + std::string(s) + "'");
    char* end = nullptr;
    exp10 = std::strtol(es.c_str(), &end, 10);
    if (end == nullptr || *end != '\0') throw ParseError("bad exponent in '" + std::string(s) + "'");
    mant = s.substr(0, e);
  }
  std::string digits;
  bool neg = false;
  std::string_view m = mant;
  if (!m.empty() && (m[0] == '+' || m[0] == '-')) {
    neg = m[0] == '-';
    m.remove_prefix(1);
  }
  long frac_digits = 0;
  bool seen_point = false, seen_digit = false;
  for (char c : m) {
    if (c == '.') {
      if (seen_point) throw ParseError("bad rational '" + std::string(s) + "'");
      seen_point = true;
    } else if (std::isdigit(static_cast<unsigned char>(c))) {
      digits.push_back(c);
      seen_digit = true;
      if (seen_point) ++frac_digits;
    } else {
      throw ParseError("bad rational '" + std::string(s) + "'");
    }
  }
  if (!seen_digit) throw ParseError("bad rational '" + std::string(s) + "'");
  BigInt num{digits.empty() ? std::string("0") : digits};
  if (neg) num = -num;
  long net = exp10 - frac_digits;
  BigInt scale = 1;
  for (long i = 0; i < (net < 0 ? -net : net); ++i) scale *= 10;
  return net >= 0 ? Rational(num * scale, 1) : Rational(num, scale);
}

std::string format_rational(const Rational& r) {
  BigInt num = boost::multiprecision::numerator(r);
  BigInt den = boost::multiprecision::denominator(r);
  if (den == 1) return num.str();
  return num.str() + "/" + den.str();
}

Rational rational_from_count(const Count& c) {
  BigInt v = 0;
  unsigned __int128 raw = c.raw();
  v = static_cast<std::uint64_t>(raw >> 64);
  v <<= 64;
  v += static_cast<std::uint64_t>(raw);
  return Rational(v, 1);
}

}  // namespace fna
