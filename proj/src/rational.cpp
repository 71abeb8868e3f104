#include "berk/rational.hpp"

#include <cmath>
#include <cstdint>

namespace berk {

std::string rat_to_string(const Rat& r) {
  Int n = rat_num(r), d = rat_den(r);
  if (d == 1) return n.str();
  return n.str() + "/" + d.str();
}

Rat parse_rat(const std::string& s) {
  if (s.empty()) throw input_error("empty rational literal");
  auto slash = s.find('/');
  if (slash != std::string::npos) {
    Int n(s.substr(0, slash));
    Int d(s.substr(slash + 1));
    if (d == 0) throw input_error("zero denominator in '" + s + "'");
    return Rat(n, d);
  }
  auto dot = s.find('.');
  if (dot == std::string::npos) return Rat(Int(s));
  std::string head = s.substr(0, dot), tail = s.substr(dot + 1);
  bool neg = !head.empty() && head[0] == '-';
  if (head == "-" || head.empty()) head = neg ? "-0" : "0";
  for (char c : tail)
    if (!std::isdigit(static_cast<unsigned char>(c)))
      throw input_error("bad decimal literal '" + s + "'");
  Int scale = 1;
  for (size_t i = 0; i < tail.size(); ++i) scale *= 10;
  Int whole(head);
  Int frac = tail.empty() ? Int(0) : Int(tail);
  if (neg) frac = -frac;
  return Rat(whole * scale + frac, scale);
}

Rat rat_from_double(double x) {
  if (!std::isfinite(x)) throw input_error("non-finite double");
  if (x == 0.0) return Rat(0);
  int e = 0;
  double m = std::frexp(x, &e);  // x = m * 2^e, |m| in [0.5, 1)
  // 53 mantissa bits make m * 2^53 an exact integer.
  auto mi = static_cast<long long>(std::ldexp(m, 53));
  e -= 53;
  Rat r(mi);
  if (e >= 0) {
    r *= Rat(Int(1) << e);
  } else {
    r /= Rat(Int(1) << (-e));
  }
  return r;
}

}  // namespace berk
