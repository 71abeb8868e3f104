#include "berk/binary_form.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <map>
#include <sstream>

#include "berk/primes.hpp"

namespace berk {

using boost::multiprecision::gcd;

ProjRat ProjRat::normalized(Int n, Int d) {
  if (n == 0 && d == 0) throw input_error("(0:0) is not a projective point");
  if (d == 0) return {Int(1), Int(0)};
  if (d < 0) {
    n = -n;
    d = -d;
  }
  Int g = gcd(n < 0 ? Int(-n) : n, d);
  if (g > 1) {
    n /= g;
    d /= g;
  }
  return {n, d};
}

std::string ProjRat::str() const {
  if (is_infinity()) return "inf";
  if (den == 1) return num.str();
  return num.str() + "/" + den.str();
}

BinaryForm BinaryForm::monomial(int degree, int xpow, Int c) {
  std::vector<Int> v(degree + 1, Int(0));
  v[xpow] = std::move(c);
  return BinaryForm(std::move(v));
}

bool BinaryForm::is_zero() const {
  return std::all_of(coeffs_.begin(), coeffs_.end(), [](const Int& c) { return c == 0; });
}

BinaryForm operator+(const BinaryForm& a, const BinaryForm& b) {
  if (a.degree() != b.degree()) throw input_error("degree mismatch in form addition");
  std::vector<Int> v(a.coeffs_);
  for (size_t i = 0; i < v.size(); ++i) v[i] += b.coeffs_[i];
  return BinaryForm(std::move(v));
}

BinaryForm operator-(const BinaryForm& a, const BinaryForm& b) { return a + (-b); }

BinaryForm BinaryForm::operator-() const {
  std::vector<Int> v(coeffs_);
  for (auto& c : v) c = -c;
  return BinaryForm(std::move(v));
}

BinaryForm BinaryForm::scaled(const Int& c) const {
  std::vector<Int> v(coeffs_);
  for (auto& x : v) x *= c;
  return BinaryForm(std::move(v));
}

BinaryForm operator*(const BinaryForm& a, const BinaryForm& b) {
  std::vector<Int> v(a.degree() + b.degree() + 1, Int(0));
  for (int i = 0; i <= a.degree(); ++i) {
    if (a.coeffs_[i] == 0) continue;
    for (int j = 0; j <= b.degree(); ++j)
      if (b.coeffs_[j] != 0) v[i + j] += a.coeffs_[i] * b.coeffs_[j];
  }
  return BinaryForm(std::move(v));
}

BinaryForm BinaryForm::pow(unsigned e) const {
  BinaryForm acc = BinaryForm::monomial(0, 0, Int(1));
  BinaryForm base = *this;
  while (e) {
    if (e & 1) acc = acc * base;
    base = base * base;
    e >>= 1;
  }
  return acc;
}

BinaryForm BinaryForm::compose(const BinaryForm& fx, const BinaryForm& fy) const {
  if (fx.degree() != fy.degree()) throw input_error("compose: component degree mismatch");
  int n = degree();
  std::vector<BinaryForm> xp(n + 1), yp(n + 1);
  xp[0] = yp[0] = BinaryForm::monomial(0, 0, Int(1));
  for (int i = 1; i <= n; ++i) {
    xp[i] = xp[i - 1] * fx;
    yp[i] = yp[i - 1] * fy;
  }
  BinaryForm out = BinaryForm::zero(n * fx.degree());
  for (int i = 0; i <= n; ++i) {
    if (coeffs_[i] == 0) continue;
    out = out + (xp[i] * yp[n - i]).scaled(coeffs_[i]);
  }
  return out;
}

Rat BinaryForm::eval(const Rat& x, const Rat& y) const {
  Rat acc = 0, xp = 1;
  std::vector<Rat> ypows(coeffs_.size());
  ypows[0] = 1;
  for (size_t i = 1; i < coeffs_.size(); ++i) ypows[i] = ypows[i - 1] * y;
  for (size_t i = 0; i < coeffs_.size(); ++i) {
    if (coeffs_[i] != 0) acc += Rat(coeffs_[i]) * xp * ypows[coeffs_.size() - 1 - i];
    xp *= x;
  }
  return acc;
}

bool BinaryForm::vanishes_at(const ProjRat& pt) const {
  Int acc = 0, xp = 1;
  int n = degree();
  std::vector<Int> ypows(n + 1);
  ypows[0] = 1;
  for (int i = 1; i <= n; ++i) ypows[i] = ypows[i - 1] * pt.den;
  for (int i = 0; i <= n; ++i) {
    acc += coeffs_[i] * xp * ypows[n - i];
    xp *= pt.num;
  }
  return acc == 0;
}

Int BinaryForm::content() const {
  Int g = 0;
  for (const auto& c : coeffs_) g = gcd(g, c < 0 ? Int(-c) : c);
  return g;
}

BinaryForm BinaryForm::primitive() const {
  Int g = content();
  if (g <= 1) return *this;
  std::vector<Int> v(coeffs_);
  for (auto& c : v) c /= g;
  return BinaryForm(std::move(v));
}

std::string BinaryForm::str() const {
  int n = degree();
  std::ostringstream os;
  bool first = true;
  for (int i = n; i >= 0; --i) {
    const Int& c = coeffs_[i];
    if (c == 0) continue;
    Int a = c < 0 ? Int(-c) : c;
    if (first) {
      if (c < 0) os << "-";
      first = false;
    } else {
      os << (c < 0 ? " - " : " + ");
    }
    int ypow = n - i;
    bool unit = (a == 1) && (i > 0 || ypow > 0);
    if (!unit) os << a.str();
    bool need_star = !unit;
    if (i > 0) {
      if (need_star) os << "*";
      os << "X";
      if (i > 1) os << "^" << i;
      need_star = true;
    }
    if (ypow > 0) {
      if (need_star) os << "*";
      os << "Y";
      if (ypow > 1) os << "^" << ypow;
    }
  }
  if (first) os << "0";
  return os.str();
}

namespace {

// Sparse bivariate scratch polynomial for parsing; homogeneity checked at the end.
struct BiPoly {
  std::map<std::pair<int, int>, Int> terms;  // (xpow, ypow) -> coeff

  static BiPoly constant(Int c) {
    BiPoly p;
    if (c != 0) p.terms[{0, 0}] = std::move(c);
    return p;
  }
  static BiPoly var(bool is_x) {
    BiPoly p;
    p.terms[{is_x ? 1 : 0, is_x ? 0 : 1}] = 1;
    return p;
  }
  BiPoly operator+(const BiPoly& o) const {
    BiPoly r = *this;
    for (auto& [k, v] : o.terms) {
      r.terms[k] += v;
      if (r.terms[k] == 0) r.terms.erase(k);
    }
    return r;
  }
  BiPoly operator-() const {
    BiPoly r = *this;
    for (auto& [k, v] : r.terms) v = -v;
    return r;
  }
  BiPoly operator*(const BiPoly& o) const {
    BiPoly r;
    for (auto& [ka, va] : terms)
      for (auto& [kb, vb] : o.terms) {
        auto key = std::make_pair(ka.first + kb.first, ka.second + kb.second);
        r.terms[key] += va * vb;
        if (r.terms[key] == 0) r.terms.erase(key);
      }
    return r;
  }
  BiPoly pow(long e) const {
    BiPoly acc = constant(Int(1)), base = *this;
    while (e) {
      if (e & 1) acc = acc * base;
      base = base * base;
      e >>= 1;
    }
    return acc;
  }
};

struct FormParser {
  const std::string& s;
  size_t pos = 0;

  explicit FormParser(const std::string& text) : s(text) {}

  void skip() {
    while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
  }
  bool peek(char c) {
    skip();
    return pos < s.size() && s[pos] == c;
  }
  bool accept(char c) {
    if (peek(c)) {
      ++pos;
      return true;
    }
    return false;
  }

  BiPoly parse_expr() {
    skip();
    bool neg = accept('-');
    if (!neg) accept('+');
    BiPoly acc = parse_term();
    if (neg) acc = -acc;
    while (true) {
      skip();
      if (accept('+')) {
        acc = acc + parse_term();
      } else if (accept('-')) {
        acc = acc + (-parse_term());
      } else {
        break;
      }
    }
    return acc;
  }

  BiPoly parse_term() {
    BiPoly acc = parse_factor();
    while (true) {
      skip();
      if (accept('*')) {
        acc = acc * parse_factor();
      } else if (pos < s.size() && (s[pos] == 'X' || s[pos] == 'Y' || s[pos] == '(')) {
        acc = acc * parse_factor();  // implicit multiplication, e.g. "3X" or "X Y"
      } else {
        break;
      }
    }
    return acc;
  }

  BiPoly parse_factor() {
    BiPoly base = parse_atom();
    skip();
    if (accept('^')) {
      skip();
      size_t start = pos;
      while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) ++pos;
      if (start == pos) throw input_error("exponent expected in polynomial");
      base = base.pow(std::stol(s.substr(start, pos - start)));
    }
    return base;
  }

  BiPoly parse_atom() {
    skip();
    if (pos >= s.size()) throw input_error("unexpected end of polynomial");
    char c = s[pos];
    if (c == '(') {
      ++pos;
      BiPoly inner = parse_expr();
      if (!accept(')')) throw input_error("missing ')' in polynomial");
      return inner;
    }
    if (c == 'X' || c == 'x') {
      ++pos;
      return BiPoly::var(true);
    }
    if (c == 'Y' || c == 'y') {
      ++pos;
      return BiPoly::var(false);
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      size_t start = pos;
      while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) ++pos;
      return BiPoly::constant(Int(s.substr(start, pos - start)));
    }
    throw input_error(std::string("unexpected character '") + c + "' in polynomial");
  }
};

}  // namespace

BinaryForm BinaryForm::parse(const std::string& text) {
  FormParser p(text);
  BiPoly poly = p.parse_expr();
  p.skip();
  if (p.pos != text.size()) throw input_error("trailing junk in polynomial '" + text + "'");
  if (poly.terms.empty()) return BinaryForm();  // zero of formal degree 0
  int deg = -1;
  for (auto& [k, v] : poly.terms) {
    int total = k.first + k.second;
    if (deg < 0) deg = total;
    if (total != deg)
      throw input_error("polynomial '" + text + "' is not homogeneous");
  }
  std::vector<Int> coeffs(deg + 1, Int(0));
  for (auto& [k, v] : poly.terms) coeffs[k.first] = v;
  return BinaryForm(std::move(coeffs));
}

std::vector<Int> parse_univariate(const std::string& text) {
  std::string s;
  for (char c : text) s += (c == 'T' || c == 't') ? 'X' : c;
  FormParser p(s);
  BiPoly poly = p.parse_expr();
  p.skip();
  if (p.pos != s.size()) throw input_error("trailing junk in polynomial '" + text + "'");
  int deg = 0;
  for (auto& [k, v] : poly.terms) {
    (void)v;
    if (k.second != 0) throw input_error("expected a univariate polynomial in T");
    deg = std::max(deg, k.first);
  }
  std::vector<Int> out(deg + 1, Int(0));
  for (auto& [k, v] : poly.terms) out[k.first] = v;
  return out;
}

int uni_degree(const std::vector<Int>& f) {
  for (int i = static_cast<int>(f.size()) - 1; i >= 0; --i)
    if (f[i] != 0) return i;
  return -1;
}

std::vector<Int> uni_mul(const std::vector<Int>& a, const std::vector<Int>& b) {
  std::vector<Int> r(a.size() + b.size() - 1, Int(0));
  for (size_t i = 0; i < a.size(); ++i) {
    if (a[i] == 0) continue;
    for (size_t j = 0; j < b.size(); ++j)
      if (b[j] != 0) r[i + j] += a[i] * b[j];
  }
  return r;
}

Int uni_content(const std::vector<Int>& f) {
  Int g = 0;
  for (const auto& c : f) g = gcd(g, c < 0 ? Int(-c) : c);
  return g;
}

std::vector<Int> uni_primitive(const std::vector<Int>& f) {
  Int g = uni_content(f);
  if (g <= 1) return f;
  std::vector<Int> r(f);
  for (auto& c : r) c /= g;
  return r;
}

namespace {

std::vector<Int> trim(std::vector<Int> f) {
  int d = uni_degree(f);
  f.resize(d + 1 < 1 ? 1 : d + 1);
  return f;
}

Int int_pow(Int b, unsigned e) {
  Int acc = 1;
  while (e) {
    if (e & 1) acc *= b;
    b *= b;
    e >>= 1;
  }
  return acc;
}

// Pseudo-remainder of a by b: lc(b)^(deg a - deg b + 1) * a mod b, exactly.
std::vector<Int> prem(std::vector<Int> a, const std::vector<Int>& b) {
  int da = uni_degree(a), db = uni_degree(b);
  const Int& lb = b[db];
  int e = da - db + 1;
  while (da >= db && da >= 0) {
    Int la = a[da];
    for (auto& c : a) c *= lb;
    for (int i = 0; i <= db; ++i) a[da - db + i] -= la * b[i];
    --e;
    da = uni_degree(a);
  }
  if (e > 0) {
    Int f = int_pow(lb, static_cast<unsigned>(e));
    for (auto& c : a) c *= f;
  }
  return trim(std::move(a));
}

}  // namespace

Int uni_resultant(std::vector<Int> a, std::vector<Int> b) {
  a = trim(std::move(a));
  b = trim(std::move(b));
  int da = uni_degree(a), db = uni_degree(b);
  if (da < 0 || db < 0) return 0;
  if (da == 0 && db == 0) return 1;
  int sign = 1;
  if (da < db) {
    std::swap(a, b);
    std::swap(da, db);
    if ((da % 2) && (db % 2)) sign = -sign;
  }
  if (db == 0) return sign * int_pow(b[0], da);

  Int ca = uni_content(a), cb = uni_content(b);
  a = uni_primitive(a);
  b = uni_primitive(b);
  Int scale = int_pow(ca, db) * int_pow(cb, da);

  Int g = 1, h = 1;
  while (true) {
    da = uni_degree(a);
    db = uni_degree(b);
    int d = da - db;
    if ((da % 2) && (db % 2)) sign = -sign;
    std::vector<Int> r = prem(a, b);
    // prem may over-multiply by lc(b) when intermediate degrees skip; recompute
    // with the exact classical definition instead.
    a = b;
    Int divisor = g * int_pow(h, d);
    for (auto& c : r) {
      if (c % divisor != 0) throw std::logic_error("subresultant PRS: inexact division");
      c /= divisor;
    }
    b = trim(std::move(r));
    if (uni_degree(b) < 0) return 0;  // common factor
    g = a[uni_degree(a)];
    if (d > 0) {
      Int num = int_pow(g, d);
      Int den = int_pow(h, d - 1);
      if (num % den != 0) throw std::logic_error("subresultant PRS: inexact h update");
      h = num / den;
    }
    if (uni_degree(b) == 0) {
      int dA = uni_degree(a);
      Int num = int_pow(b[0], dA);
      Int den = int_pow(h, dA - 1);
      if (dA == 0) return sign * scale;
      if (num % den != 0) throw std::logic_error("subresultant PRS: inexact final");
      return sign * scale * (num / den);
    }
  }
}

std::vector<Int> uni_gcd_z(std::vector<Int> a, std::vector<Int> b) {
  a = trim(std::move(a));
  b = trim(std::move(b));
  if (uni_degree(a) < 0) return uni_primitive(b);
  if (uni_degree(b) < 0) return uni_primitive(a);
  Int cg = gcd(uni_content(a), uni_content(b));
  a = uni_primitive(a);
  b = uni_primitive(b);
  if (uni_degree(a) < uni_degree(b)) std::swap(a, b);
  while (uni_degree(b) >= 0) {
    std::vector<Int> r = uni_primitive(prem(a, b));
    a = std::move(b);
    b = trim(std::move(r));
  }
  if (a[uni_degree(a)] < 0)
    for (auto& c : a) c = -c;
  for (auto& c : a) c *= cg;
  return a;
}

BinaryForm form_gcd(const BinaryForm& a, const BinaryForm& b) {
  if (a.is_zero() || b.is_zero()) throw input_error("form_gcd of zero form");
  auto xmult = [](const BinaryForm& f) {
    int i = 0;
    while (f.coeff(i) == 0) ++i;
    return i;
  };
  auto ymult = [](const BinaryForm& f) { return f.degree() - uni_degree(f.dehom_t()); };
  int xm = std::min(xmult(a), xmult(b));
  int ym = std::min(ymult(a), ymult(b));
  // Strip X^xm Y^ym, then take the univariate gcd of what is left.
  auto strip = [&](const BinaryForm& f) {
    std::vector<Int> u = f.dehom_t();
    std::vector<Int> v(u.begin() + xm, u.begin() + (uni_degree(u) + 1));
    return v;
  };
  std::vector<Int> g = uni_gcd_z(strip(a), strip(b));
  g = uni_primitive(g);
  int gd = uni_degree(g);
  std::vector<Int> coeffs(gd + 1 + xm + ym, Int(0));
  for (int i = 0; i <= gd; ++i) coeffs[i + xm] = g[i];
  return BinaryForm(std::move(coeffs));
}

Int form_resultant(const BinaryForm& a, const BinaryForm& b) {
  int n = a.degree(), m = b.degree();
  if (n == 0 && m == 0) return 1;
  int size = n + m;
  // Sylvester matrix of the coefficient sequences (descending powers of X).
  std::vector<std::vector<Int>> M(size, std::vector<Int>(size, Int(0)));
  for (int r = 0; r < m; ++r)
    for (int i = 0; i <= n; ++i) M[r][r + i] = a.coeff(n - i);
  for (int r = 0; r < n; ++r)
    for (int i = 0; i <= m; ++i) M[m + r][r + i] = b.coeff(m - i);
  // Bareiss fraction-free elimination.
  Int prev = 1;
  int sign = 1;
  for (int k = 0; k < size - 1; ++k) {
    if (M[k][k] == 0) {
      int swap_row = -1;
      for (int i = k + 1; i < size; ++i)
        if (M[i][k] != 0) {
          swap_row = i;
          break;
        }
      if (swap_row < 0) return 0;
      std::swap(M[k], M[swap_row]);
      sign = -sign;
    }
    for (int i = k + 1; i < size; ++i) {
      for (int j = k + 1; j < size; ++j) {
        M[i][j] = (M[i][j] * M[k][k] - M[i][k] * M[k][j]) / prev;
      }
      M[i][k] = 0;
    }
    prev = M[k][k];
  }
  return sign * M[size - 1][size - 1];
}

std::vector<Int> reduce_mod(const std::vector<Int>& coeffs, const Int& p) {
  std::vector<Int> r(coeffs.size());
  for (size_t i = 0; i < coeffs.size(); ++i) {
    r[i] = coeffs[i] % p;
    if (r[i] < 0) r[i] += p;
  }
  return r;
}

namespace {

Int mod_inverse(Int a, const Int& p) {
  // Extended Euclid; p prime, a nonzero mod p.
  Int t = 0, newt = 1, r = p, newr = a % p;
  if (newr < 0) newr += p;
  while (newr != 0) {
    Int q = r / newr;
    Int tmp = t - q * newt;
    t = newt;
    newt = tmp;
    tmp = r - q * newr;
    r = newr;
    newr = tmp;
  }
  if (t < 0) t += p;
  return t;
}

std::vector<Int> uni_gcd_mod_p(std::vector<Int> a, std::vector<Int> b, const Int& p) {
  a = trim(reduce_mod(a, p));
  b = trim(reduce_mod(b, p));
  while (uni_degree(b) >= 0) {
    int da = uni_degree(a), db = uni_degree(b);
    if (da < db) {
      std::swap(a, b);
      continue;
    }
    Int inv = mod_inverse(b[db], p);
    Int factor = (a[da] * inv) % p;
    for (int i = 0; i <= db; ++i) {
      a[da - db + i] = (a[da - db + i] - factor * b[i]) % p;
      if (a[da - db + i] < 0) a[da - db + i] += p;
    }
    a = trim(std::move(a));
    if (uni_degree(a) < uni_degree(b)) std::swap(a, b);
  }
  return a;
}

}  // namespace

bool common_root_mod_p(const std::vector<BinaryForm>& forms, const Int& p) {
  std::vector<const BinaryForm*> live;
  for (const auto& f : forms) {
    auto r = reduce_mod(f.coeffs(), p);
    bool zero = std::all_of(r.begin(), r.end(), [](const Int& c) { return c == 0; });
    if (!zero) live.push_back(&f);
  }
  if (live.empty()) return true;  // every form vanishes on the whole fiber
  bool inf_root = true;
  for (auto* f : live) {
    Int top = f->coeff(f->degree()) % p;
    if (top != 0) {
      inf_root = false;
      break;
    }
  }
  if (inf_root) return true;
  std::vector<Int> g = trim(reduce_mod(live[0]->dehom_t(), p));
  for (size_t i = 1; i < live.size() && uni_degree(g) > 0; ++i)
    g = uni_gcd_mod_p(g, live[i]->dehom_t(), p);
  return uni_degree(g) > 0;
}

namespace {

std::vector<Int> divisors_of(const Int& n, size_t cap) {
  std::vector<Int> divs{Int(1)};
  for (auto& [p, e] : factorize(n < 0 ? Int(-n) : n)) {
    size_t old = divs.size();
    Int pk = 1;
    for (unsigned k = 1; k <= e; ++k) {
      pk *= p;
      for (size_t i = 0; i < old; ++i) {
        divs.push_back(divs[i] * pk);
        if (divs.size() > cap)
          throw unsupported_error("too many divisor candidates in root search");
      }
    }
  }
  return divs;
}

// Divide u by the primitive linear (den*T - num); exact (remainder must be zero).
std::vector<Int> divide_linear(const std::vector<Int>& u, const Int& num, const Int& den) {
  int d = uni_degree(u);
  std::vector<Rat> q(d, Rat(0));
  Rat carry = Rat(u[d]);
  for (int i = d - 1; i >= 0; --i) {
    q[i] = carry / Rat(den);
    carry = Rat(u[i]) + q[i] * Rat(num);
  }
  if (carry != 0) throw std::logic_error("divide_linear: nonzero remainder");
  std::vector<Int> out(d, Int(0));
  for (int i = 0; i < d; ++i) {
    if (rat_den(q[i]) != 1) throw std::logic_error("divide_linear: non-integral quotient");
    out[i] = rat_num(q[i]);
  }
  return out;
}

Rat uni_eval(const std::vector<Int>& f, const Rat& x) {
  Rat acc = 0;
  for (int i = uni_degree(f); i >= 0; --i) acc = acc * x + Rat(f[i]);
  return acc;
}

std::vector<Int> poly_mulmod_p(const std::vector<Int>& a, const std::vector<Int>& b,
                               const std::vector<Int>& m, const Int& p) {
  std::vector<Int> r(a.size() + b.size() - 1, Int(0));
  for (size_t i = 0; i < a.size(); ++i) {
    if (a[i] == 0) continue;
    for (size_t j = 0; j < b.size(); ++j) r[i + j] = (r[i + j] + a[i] * b[j]) % p;
  }
  int dm = uni_degree(m);
  Int inv_lead = mod_inverse(m[dm], p);
  for (int i = uni_degree(r); i >= dm; i = uni_degree(r)) {
    Int f = (r[i] * inv_lead) % p;
    for (int k = 0; k <= dm; ++k) {
      r[i - dm + k] = (r[i - dm + k] - f * m[k]) % p;
      if (r[i - dm + k] < 0) r[i - dm + k] += p;
    }
    r[i] = 0;
  }
  r.resize(std::max(1, uni_degree(r) + 1));
  return r;
}

// Sound fast rejection: a primitive polynomial that splits into integer
// linear forms stays a product of degree <= 1 factors mod p, so the gcd with
// T^p - T must reach the full squarefree degree.
bool linear_split_screen(const std::vector<Int>& u) {
  int du = uni_degree(u);
  if (du <= 1) return true;
  for (long pv : {7L, 11L, 19L}) {
    Int p(pv);
    std::vector<Int> ub = trim(reduce_mod(u, p));
    int d = uni_degree(ub);
    if (d <= 1) continue;
    std::vector<Int> der(d, Int(0));
    for (int i = 1; i <= d; ++i) der[i - 1] = (Int(i) * ub[i]) % p;
    if (uni_degree(der) < 0) continue;  // inseparable reduction: inconclusive
    int sq_deg = d - uni_degree(uni_gcd_mod_p(ub, der, p));
    // r = T^p mod ub, then gcd(ub, r - T)
    std::vector<Int> r{Int(0), Int(1)};  // T
    std::vector<Int> base = r;
    long e = pv;
    std::vector<Int> acc{Int(1)};
    while (e) {
      if (e & 1) acc = poly_mulmod_p(acc, base, ub, p);
      base = poly_mulmod_p(base, base, ub, p);
      e >>= 1;
    }
    if (acc.size() < 2) acc.resize(2, Int(0));
    acc[1] = (acc[1] - 1) % p;
    if (acc[1] < 0) acc[1] += p;
    int lin_deg = uni_degree(uni_gcd_mod_p(ub, acc, p));
    if (lin_deg < sq_deg) return false;
  }
  return true;
}

}  // namespace

std::optional<LinearFactorization> factor_linear(const BinaryForm& f) {
  if (f.is_zero()) throw input_error("factor_linear of zero form");
  LinearFactorization out;
  std::vector<std::pair<ProjRat, int>> roots;

  std::vector<Int> u = f.dehom_t();
  int n = f.degree();
  int du = uni_degree(u);
  if (n - du > 0) roots.push_back({ProjRat::infinity(), n - du});
  int zeros = 0;
  while (u[zeros] == 0) ++zeros;
  if (zeros > 0) {
    roots.push_back({ProjRat{Int(0), Int(1)}, zeros});
    u.erase(u.begin(), u.begin() + zeros);
  }
  u = trim(std::move(u));
  if (!linear_split_screen(u)) return std::nullopt;

  // Rational roots of the remaining polynomial (nonzero constant term).
  while (uni_degree(u) > 0) {
    int d = uni_degree(u);
    if (d == 1) {
      ProjRat r = ProjRat::normalized(-u[0], u[1]);
      roots.push_back({r, 1});
      u = {u[1]};  // leading coefficient is the leftover unit
      break;
    }
    bool found = false;
    std::vector<Int> ps, qs;
    try {
      ps = divisors_of(u[0], 1u << 16);
      qs = divisors_of(u[d], 1u << 16);
    } catch (const unsupported_error&) {
      return std::nullopt;
    }
    for (const Int& q : qs) {
      for (const Int& p : ps) {
        if (gcd(p, q) != 1) continue;
        for (int sgn : {1, -1}) {
          Rat cand(sgn * p, q);
          if (uni_eval(u, cand) == 0) {
            int mult = 0;
            ProjRat root = ProjRat::normalized(sgn * p, q);
            while (uni_degree(u) > 0 && uni_eval(u, cand) == 0) {
              u = divide_linear(u, root.num, root.den);
              ++mult;
            }
            roots.push_back({root, mult});
            found = true;
            break;
          }
        }
        if (found) break;
      }
      if (found) break;
    }
    if (!found) return std::nullopt;  // irrational or complex factor remains
  }

  std::sort(roots.begin(), roots.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  BinaryForm prod = BinaryForm::monomial(0, 0, Int(1));
  for (auto& [root, mult] : roots) {
    LinearFactor lf;
    lf.root = root;
    lf.mult = mult;
    if (root.is_infinity()) {
      lf.form = BinaryForm({Int(1), Int(0)});  // Y
    } else {
      lf.form = BinaryForm({-root.num, root.den});  // den*X - num*Y
    }
    prod = prod * lf.form.pow(mult);
    out.factors.push_back(std::move(lf));
  }
  // Unit from any nonzero coefficient; verify the identity exactly.
  int idx = uni_degree(prod.dehom_t());
  if (prod.coeff(idx) == 0 || f.coeff(idx) % prod.coeff(idx) != 0) return std::nullopt;
  out.unit = f.coeff(idx) / prod.coeff(idx);
  if (!(prod.scaled(out.unit) == f)) return std::nullopt;
  return out;
}

namespace {

double log_int(const Int& n) {
  // log of a positive integer, accurate to ~1e-15 at any size
  unsigned bits = boost::multiprecision::msb(n) + 1;
  if (bits <= 900) return std::log(n.convert_to<double>());
  Int top = n >> (bits - 64);
  return std::log(top.convert_to<double>()) +
         static_cast<double>(bits - 64) * std::log(2.0);
}

// Fixed-point complex Horner at scale 2^-S: fast middle rung of the
// cancellation ladder. Sets ok=false when the result is too small relative to
// the truncation error ball and an exact pass is needed.
double log_abs_eval_fixed(const std::vector<Int>& coeffs, std::complex<double> z,
                          double majorant_log2, bool& ok) {
  constexpr long S = 512;
  auto fix_of = [&](double x) -> Int {
    if (x == 0.0) return 0;
    Rat r = rat_from_double(x);
    Int num = rat_num(r), den = rat_den(r);
    if (den == 1) return num << S;
    unsigned k = boost::multiprecision::msb(den);  // den = 2^k for doubles
    if (static_cast<long>(k) > S) return 0;
    return num << (S - static_cast<long>(k));
  };
  Int zre = fix_of(z.real()), zim = fix_of(z.imag());
  Int vre = 0, vim = 0;
  int d = uni_degree(coeffs);
  for (int i = d; i >= 0; --i) {
    if (vre != 0 || vim != 0) {
      Int re2 = (vre * zre - vim * zim) >> S;
      Int im2 = (vre * zim + vim * zre) >> S;
      vre = std::move(re2);
      vim = std::move(im2);
    }
    if (coeffs[i] != 0) vre += coeffs[i] << S;
  }
  // Truncation error ball: ~ (d+2) ulps amplified by the majorant scale.
  double err_log2 = majorant_log2 - S + std::log2(d + 2.0) + 2;
  if (vre == 0 && vim == 0) {
    ok = false;
    return 0;
  }
  Int n2 = vre * vre + vim * vim;
  double res_log2 = 0.5 * (boost::multiprecision::msb(n2) + 1.0) - S;
  if (res_log2 - err_log2 < 30) {
    ok = false;
    return 0;
  }
  ok = true;
  return 0.5 * log_int(n2) - S * std::log(2.0);
}

// Exact Gaussian-rational Horner; immune to cancellation.
double log_abs_eval_exact(const std::vector<Int>& coeffs, std::complex<double> z) {
  Rat zr = rat_from_double(z.real()), zi = rat_from_double(z.imag());
  Rat re = 0, im = 0;
  for (int i = uni_degree(coeffs); i >= 0; --i) {
    Rat nre = re * zr - im * zi + Rat(coeffs[i]);
    Rat nim = re * zi + im * zr;
    re = std::move(nre);
    im = std::move(nim);
  }
  Rat n2 = re * re + im * im;
  if (n2 == 0) return -std::numeric_limits<double>::infinity();
  return 0.5 * (log_int(rat_num(n2)) - log_int(rat_den(n2)));
}

}  // namespace

double log_abs_eval(const std::vector<Int>& coeffs, std::complex<double> z) {
  // Horner with a separately tracked power-of-two exponent.
  auto scaled_int = [](const Int& c, double& mant, long& e2) {
    if (c == 0) {
      mant = 0;
      e2 = 0;
      return;
    }
    Int a = c < 0 ? Int(-c) : c;
    unsigned bits = boost::multiprecision::msb(a) + 1;
    if (bits <= 512) {
      mant = a.convert_to<double>();
      e2 = 0;
    } else {
      Int shifted = a >> (bits - 64);
      mant = shifted.convert_to<double>();
      e2 = static_cast<long>(bits - 64);
    }
    if (c < 0) mant = -mant;
  };
  std::complex<double> v(0, 0);
  double b = 0;  // L1 majorant sum |c_i| |z|^i, the cancellation yardstick
  long ev = 0, eb = 0;
  double az = std::abs(z);
  int d = uni_degree(coeffs);
  if (d < 0) return -std::numeric_limits<double>::infinity();
  for (int i = d; i >= 0; --i) {
    v *= z;
    b *= az;
    double cm;
    long ce;
    scaled_int(coeffs[i], cm, ce);
    if (cm != 0.0) {
      long shift = ce - ev;
      if (std::abs(v) == 0.0) {
        v = cm;
        ev = ce;
      } else if (shift >= 1024) {
        v = cm;
        ev = ce;
      } else if (shift <= -1024) {
        // coefficient negligible at this scale
      } else {
        v += std::complex<double>(std::ldexp(cm, static_cast<int>(shift)), 0.0);
      }
      long bshift = ce - eb;
      if (b == 0.0) {
        b = std::abs(cm);
        eb = ce;
      } else if (bshift >= 1024) {
        b = std::abs(cm);
        eb = ce;
      } else if (bshift > -1024) {
        b += std::abs(std::ldexp(cm, static_cast<int>(bshift)));
      }
    }
    double m = std::abs(v);
    if (m != 0.0) {
      int ex;
      std::frexp(m, &ex);
      if (ex > 256 || ex < -256) {
        v = std::complex<double>(std::ldexp(v.real(), -ex), std::ldexp(v.imag(), -ex));
        ev += ex;
      }
    }
    if (b != 0.0) {
      int ex;
      std::frexp(b, &ex);
      if (ex > 256 || ex < -256) {
        b = std::ldexp(b, -ex);
        eb += ex;
      }
    }
  }
  double m = std::abs(v);
  double majorant_log2 = std::log2(b) + static_cast<double>(eb);
  // Catastrophic cancellation (or an exact hit of a root) is resolved by the
  // fixed-point rung and, in the last resort, an exact Gaussian-rational pass.
  if (m != 0.0) {
    double res_log2 = std::log2(m) + static_cast<double>(ev);
    if (majorant_log2 - res_log2 <= 30.0)
      return std::log(m) + static_cast<double>(ev) * std::log(2.0);
  }
  bool ok = false;
  double fixed = log_abs_eval_fixed(coeffs, z, majorant_log2, ok);
  if (ok) return fixed;
  return log_abs_eval_exact(coeffs, z);
}

}  // namespace berk
