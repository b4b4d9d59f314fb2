#include "bratteli/scalar.hpp"

#include <cctype>
#include <cstdlib>

namespace bratteli {

std::string format_rational(const Rational& r) {
  std::string s = numerator(r).str();
  if (denominator(r) != 1) {
    s += "/";
    s += denominator(r).str();
  }
  return s;
}

namespace {

BigInt pow10(unsigned n) {
  BigInt p = 1;
  for (unsigned i = 0; i < n; ++i) p *= 10;
  return p;
}

// Decimal integer with optional sign. cpp_int's own string constructor
// honours C-style prefixes (a leading 0 means octal), so validate and strip
// leading zeros before handing the digits over.
BigInt parse_integer(const std::string& s) {
  std::size_t i = 0;
  bool negative = false;
  if (i < s.size() && (s[i] == '+' || s[i] == '-')) {
    negative = s[i] == '-';
    ++i;
  }
  if (i >= s.size()) throw std::invalid_argument("empty integer");
  for (std::size_t j = i; j < s.size(); ++j)
    if (!std::isdigit(static_cast<unsigned char>(s[j])))
      throw std::invalid_argument("bad digit");
  while (i + 1 < s.size() && s[i] == '0') ++i;
  BigInt v(s.substr(i));
  return negative ? -v : v;
}

// Decimal literal with optional sign, fraction and exponent -> exact rational.
Rational parse_decimal(const std::string& text) {
  std::size_t i = 0;
  bool negative = false;
  if (i < text.size() && (text[i] == '+' || text[i] == '-')) {
    negative = text[i] == '-';
    ++i;
  }
  std::string digits;
  long frac_len = 0;
  bool any = false;
  for (; i < text.size() && std::isdigit(static_cast<unsigned char>(text[i])); ++i) {
    digits += text[i];
    any = true;
  }
  if (i < text.size() && text[i] == '.') {
    ++i;
    for (; i < text.size() && std::isdigit(static_cast<unsigned char>(text[i])); ++i) {
      digits += text[i];
      ++frac_len;
      any = true;
    }
  }
  long exp10 = 0;
  if (i < text.size() && (text[i] == 'e' || text[i] == 'E')) {
    ++i;
    bool exp_neg = false;
    if (i < text.size() && (text[i] == '+' || text[i] == '-')) {
      exp_neg = text[i] == '-';
      ++i;
    }
    bool exp_any = false;
    long v = 0;
    for (; i < text.size() && std::isdigit(static_cast<unsigned char>(text[i])); ++i) {
      v = v * 10 + (text[i] - '0');
      if (v > 1000000) fail(Errc::ParseError, "exponent out of range in '" + text + "'");
      exp_any = true;
    }
    if (!exp_any) fail(Errc::ParseError, "malformed exponent in '" + text + "'");
    exp10 = exp_neg ? -v : v;
  }
  if (!any || i != text.size())
    fail(Errc::ParseError, "not a rational literal: '" + text + "'");

  BigInt mantissa = parse_integer(digits.empty() ? "0" : digits);
  if (negative) mantissa = -mantissa;
  long e = exp10 - frac_len;
  if (e >= 0) return Rational(mantissa * pow10(static_cast<unsigned>(e)));
  return Rational(mantissa, pow10(static_cast<unsigned>(-e)));
}

}  // namespace

Rational parse_rational(const std::string& text) {
  auto slash = text.find('/');
  if (slash != std::string::npos) {
    std::string num = text.substr(0, slash);
    std::string den = text.substr(slash + 1);
    try {
      BigInt p = parse_integer(num);
      BigInt q = parse_integer(den);
      if (q == 0) fail(Errc::ParseError, "zero denominator in '" + text + "'");
      return Rational(p, q);
    } catch (const Error&) {
      throw;
    } catch (const std::exception&) {
      fail(Errc::ParseError, "not a rational literal: '" + text + "'");
    }
  }
  return parse_decimal(text);
}

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

double parse_double(const std::string& text) {
  const char* begin = text.c_str();
  char* end = nullptr;
  double v = std::strtod(begin, &end);
  if (end == begin || end != begin + text.size())
    fail(Errc::ParseError, "not a number: '" + text + "'");
  return v;
}

}  // namespace bratteli
