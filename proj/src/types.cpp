#include "vinberg/types.hpp"

#include <cctype>
#include <cmath>
#include <sstream>

namespace vinberg {

namespace {

bool is_integer_literal(const std::string& s) {
  std::size_t i = 0;
  if (i < s.size() && (s[i] == '-' || s[i] == '+')) ++i;
  if (i == s.size()) return false;
  for (; i < s.size(); ++i)
    if (!std::isdigit(static_cast<unsigned char>(s[i]))) return false;
  return true;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\n\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\n\r");
  return s.substr(b, e - b + 1);
}

}  // namespace

Rational parse_rational(const std::string& text) {
  const std::string s = trim(text);
  const auto slash = s.find('/');
  if (slash == std::string::npos) {
    if (!is_integer_literal(s)) throw std::invalid_argument("not a rational literal: '" + text + "'");
    return Rational(boost::multiprecision::mpz_int(s[0] == '+' ? s.substr(1) : s));
  }
  const std::string num = trim(s.substr(0, slash));
  const std::string den = trim(s.substr(slash + 1));
  if (!is_integer_literal(num) || !is_integer_literal(den) || den[0] == '-' || den[0] == '+')
    throw std::invalid_argument("not a rational literal: '" + text + "'");
  boost::multiprecision::mpz_int p(num[0] == '+' ? num.substr(1) : num);
  boost::multiprecision::mpz_int q(den);
  if (q == 0) throw std::invalid_argument("zero denominator in '" + text + "'");
  return Rational(p, q);
}

Rational rationalize(double x, long long max_den) {
  if (!std::isfinite(x)) throw std::invalid_argument("rationalize: non-finite value");
  // Continued-fraction convergents h/k with k <= max_den.
  long long h0 = 0, h1 = 1, k0 = 1, k1 = 0;
  double r = x;
  for (int iter = 0; iter < 64; ++iter) {
    const double a = std::floor(r);
    if (std::abs(a) > 9e15) break;
    const auto ai = static_cast<long long>(a);
    const long long k2 = ai * k1 + k0;
    if (k2 > max_den || k2 <= 0) break;
    const long long h2 = ai * h1 + h0;
    h0 = h1; h1 = h2; k0 = k1; k1 = k2;
    const double frac = r - a;
    if (frac < 1e-15) break;
    r = 1.0 / frac;
  }
  if (k1 == 0) return Rational(static_cast<long long>(std::llround(x)));
  return Rational(h1, k1);
}

std::string to_string(const Rational& q) {
  std::ostringstream os;
  os << q;
  return os.str();
}

IndexSet subset_from_mask(unsigned mask, int n) {
  IndexSet out;
  for (int i = 0; i < n; ++i)
    if (mask & (1u << i)) out.push_back(i);
  return out;
}

unsigned mask_from_subset(const IndexSet& s) {
  unsigned m = 0;
  for (int i : s) m |= 1u << i;
  return m;
}

}  // namespace vinberg
