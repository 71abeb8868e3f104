#pragma once

#include <complex>
#include <optional>
#include <string>
#include <vector>

#include "berk/rational.hpp"

namespace berk {

/// Point of P^1(Q): (num : den) with gcd(num,den)=1, den >= 0, den=0 meaning infinity (1:0).
struct ProjRat {
  Int num;
  Int den;

  static ProjRat infinity() { return {Int(1), Int(0)}; }
  static ProjRat from_rat(const Rat& r) { return normalized(rat_num(r), rat_den(r)); }
  static ProjRat normalized(Int n, Int d);

  bool is_infinity() const { return den == 0; }
  Rat as_rat() const {
    if (is_infinity()) throw input_error("infinite coordinate");
    return Rat(num, den);
  }
  friend bool operator==(const ProjRat& a, const ProjRat& b) {
    return a.num == b.num && a.den == b.den;
  }
  friend bool operator<(const ProjRat& a, const ProjRat& b) {
    if (a.den != b.den) return a.den < b.den;
    return a.num < b.num;
  }
  std::string str() const;
};

/// Homogeneous integer polynomial in (X, Y): sum c[i] X^i Y^(deg-i).
/// The zero form carries a formal degree.
class BinaryForm {
 public:
  BinaryForm() : coeffs_(1, Int(0)) {}
  explicit BinaryForm(std::vector<Int> coeffs) : coeffs_(std::move(coeffs)) {
    if (coeffs_.empty()) coeffs_.assign(1, Int(0));
  }
  static BinaryForm zero(int degree) { return BinaryForm(std::vector<Int>(degree + 1, Int(0))); }
  static BinaryForm monomial(int degree, int xpow, Int c);

  int degree() const { return static_cast<int>(coeffs_.size()) - 1; }
  const std::vector<Int>& coeffs() const { return coeffs_; }
  const Int& coeff(int xpow) const { return coeffs_[xpow]; }
  bool is_zero() const;

  friend BinaryForm operator+(const BinaryForm& a, const BinaryForm& b);
  friend BinaryForm operator-(const BinaryForm& a, const BinaryForm& b);
  friend BinaryForm operator*(const BinaryForm& a, const BinaryForm& b);
  BinaryForm operator-() const;
  BinaryForm scaled(const Int& c) const;
  BinaryForm pow(unsigned e) const;
  friend bool operator==(const BinaryForm& a, const BinaryForm& b) {
    return a.coeffs_ == b.coeffs_;
  }

  /// Substitute X <- fx, Y <- fy (fx, fy of equal degree q); result has degree deg*q.
  BinaryForm compose(const BinaryForm& fx, const BinaryForm& fy) const;

  Rat eval(const Rat& x, const Rat& y) const;
  bool vanishes_at(const ProjRat& pt) const;

  /// F(T, 1) as coefficient vector by power of T (= coeffs_ verbatim).
  std::vector<Int> dehom_t() const { return coeffs_; }
  /// F(1, W) by power of W.
  std::vector<Int> dehom_w() const { return {coeffs_.rbegin(), coeffs_.rend()}; }

  Int content() const;  // gcd of coefficients, >= 0
  BinaryForm primitive() const;

  std::string str() const;
  static BinaryForm parse(const std::string& text);

 private:
  std::vector<Int> coeffs_;
};

struct LinearFactor {
  ProjRat root;
  int mult = 0;
  /// Primitive form q X - p Y vanishing at root (p : q); sign canonical.
  BinaryForm form;
};

struct LinearFactorization {
  Int unit;  // integer content with sign: F = unit * prod form^mult
  std::vector<LinearFactor> factors;
};

/// Complete splitting into integer linear forms over Q, if one exists.
std::optional<LinearFactorization> factor_linear(const BinaryForm& f);

/// Primitive gcd over Q of two binary forms (nonzero inputs).
BinaryForm form_gcd(const BinaryForm& a, const BinaryForm& b);

/// Resultant of binary forms with their formal degrees (Sylvester determinant).
Int form_resultant(const BinaryForm& a, const BinaryForm& b);

/// Coefficients reduced into [0, p).
std::vector<Int> reduce_mod(const std::vector<Int>& coeffs, const Int& p);

/// True iff the reductions of all forms share a projective root over an
/// algebraic closure of F_p (gcd mod p nonconstant, a common root at infinity,
/// or every form vanishing identically).
bool common_root_mod_p(const std::vector<BinaryForm>& forms, const Int& p);

// Univariate integer-polynomial helpers (coefficient vectors by ascending power).
int uni_degree(const std::vector<Int>& f);
std::vector<Int> uni_mul(const std::vector<Int>& a, const std::vector<Int>& b);
Int uni_content(const std::vector<Int>& f);
std::vector<Int> uni_primitive(const std::vector<Int>& f);
/// Resultant via subresultant pseudo-remainder sequence.
Int uni_resultant(std::vector<Int> a, std::vector<Int> b);
std::vector<Int> uni_gcd_z(std::vector<Int> a, std::vector<Int> b);

/// log|f(z)| for complex z, stable against overflow/underflow at large degree.
/// Returns -inf when f(z) = 0.
double log_abs_eval(const std::vector<Int>& coeffs, std::complex<double> z);

/// Univariate integer polynomial in T, coefficients by ascending power.
std::vector<Int> parse_univariate(const std::string& text);

}  // namespace berk
