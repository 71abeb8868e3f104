#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <optional>
#include <stdexcept>
#include <string>

namespace berk {

using Int = boost::multiprecision::cpp_int;
using Rat = boost::multiprecision::cpp_rational;

inline double to_double(const Rat& r) { return r.convert_to<double>(); }

inline Int rat_num(const Rat& r) { return boost::multiprecision::numerator(r); }
inline Int rat_den(const Rat& r) { return boost::multiprecision::denominator(r); }

/// Serializes as "n" for integers, "n/d" otherwise.
std::string rat_to_string(const Rat& r);

/// Accepts "a/b", plain integers, and decimal strings like "-0.25".
Rat parse_rat(const std::string& s);

/// Exact rational value of a finite double (doubles are dyadic rationals).
Rat rat_from_double(double x);

struct input_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct unsupported_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Value group element for valuations: a rational or +infinity.
class QVal {
 public:
  QVal() : inf_(false), v_(0) {}
  explicit QVal(Rat v) : inf_(false), v_(std::move(v)) {}
  static QVal infinity() {
    QVal q;
    q.inf_ = true;
    return q;
  }

  bool is_inf() const { return inf_; }
  const Rat& finite() const {
    if (inf_) throw std::logic_error("QVal: infinite value");
    return v_;
  }

  friend QVal operator+(const QVal& a, const QVal& b) {
    if (a.inf_ || b.inf_) return infinity();
    return QVal(a.v_ + b.v_);
  }
  friend QVal operator*(const Rat& c, const QVal& a) {
    if (a.inf_) return infinity();
    return QVal(c * a.v_);
  }
  friend QVal min(const QVal& a, const QVal& b) {
    if (a.inf_) return b;
    if (b.inf_) return a;
    return QVal(a.v_ < b.v_ ? a.v_ : b.v_);
  }
  friend bool operator==(const QVal& a, const QVal& b) {
    if (a.inf_ != b.inf_) return false;
    return a.inf_ || a.v_ == b.v_;
  }
  friend bool operator!=(const QVal& a, const QVal& b) { return !(a == b); }
  friend bool operator<(const QVal& a, const QVal& b) {
    if (b.inf_) return !a.inf_;
    if (a.inf_) return false;
    return a.v_ < b.v_;
  }
  friend bool operator<=(const QVal& a, const QVal& b) { return a < b || a == b; }
  friend bool operator>=(const QVal& a, const QVal& b) { return b <= a; }
  friend bool operator>(const QVal& a, const QVal& b) { return b < a; }

 private:
  bool inf_;
  Rat v_;
};

}  // namespace berk
