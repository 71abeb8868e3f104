#include "berk/primes.hpp"

#include <boost/multiprecision/miller_rabin.hpp>
#include <algorithm>
#include <map>

namespace berk {

std::vector<uint64_t> sieve_primes(uint64_t limit) {
  std::vector<uint64_t> out;
  if (limit < 2) return out;
  std::vector<bool> comp(limit + 1, false);
  for (uint64_t i = 2; i * i <= limit; ++i)
    if (!comp[i])
      for (uint64_t j = i * i; j <= limit; j += i) comp[j] = true;
  for (uint64_t i = 2; i <= limit; ++i)
    if (!comp[i]) out.push_back(i);
  return out;
}

bool is_prime(const Int& n) {
  if (n < 2) return false;
  static const int small[] = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37};
  for (int p : small) {
    if (n == p) return true;
    if (n % p == 0) return false;
  }
  return boost::multiprecision::miller_rabin_test(n, 32);
}

namespace {

Int mulmod(const Int& a, const Int& b, const Int& m) { return (a * b) % m; }

Int pollard_rho(const Int& n) {
  // n odd composite, no small factors.
  for (Int c = 1;; ++c) {
    Int x = 2, y = 2, d = 1;
    while (d == 1) {
      x = (mulmod(x, x, n) + c) % n;
      y = (mulmod(y, y, n) + c) % n;
      y = (mulmod(y, y, n) + c) % n;
      Int diff = x > y ? x - y : y - x;
      if (diff == 0) break;
      d = gcd(diff, n);
    }
    if (d != 1 && d != n) return d;
  }
}

void factor_rec(Int n, std::map<Int, unsigned>& acc) {
  if (n == 1) return;
  if (is_prime(n)) {
    acc[n]++;
    return;
  }
  Int d = pollard_rho(n);
  factor_rec(d, acc);
  factor_rec(n / d, acc);
}

}  // namespace

std::vector<std::pair<Int, unsigned>> factorize(Int n) {
  if (n < 1) throw input_error("factorize requires n >= 1");
  std::map<Int, unsigned> acc;
  for (uint64_t p : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull}) {
    while (n % p == 0) {
      acc[Int(p)]++;
      n /= p;
    }
  }
  for (uint64_t p = 17; p <= 100000 && Int(p) * p <= n; p += 2) {
    while (n % p == 0) {
      acc[Int(p)]++;
      n /= p;
    }
  }
  if (n > 1) factor_rec(n, acc);
  return {acc.begin(), acc.end()};
}

Int padic_val(const Rat& x, const Int& p) {
  if (x == 0) throw input_error("padic_val of zero");
  Int v = 0;
  Int n = rat_num(x);
  if (n < 0) n = -n;
  while (n % p == 0) {
    ++v;
    n /= p;
  }
  Int d = rat_den(x);
  while (d % p == 0) {
    --v;
    d /= p;
  }
  return v;
}

}  // namespace berk
