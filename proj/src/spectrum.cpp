#include "berk/spectrum.hpp"

#include <algorithm>
#include <cmath>

#include "berk/primes.hpp"

namespace berk {

SpectrumPoint::SpectrumPoint(Place pl, Rat tt) : place(std::move(pl)), t(std::move(tt)) {
  if (t < 0 || t > 1) throw input_error("branch parameter t must lie in [0,1]");
  if (!place.archimedean && !is_prime(place.p))
    throw input_error(place.p.str() + " is not prime");
}

std::string SpectrumPoint::str() const {
  if (is_trivial()) return "x0";
  return "(" + place.str() + ", t=" + rat_to_string(t) + ")";
}

double seminorm_eval(const SpectrumPoint& x, const Int& n) {
  if (n == 0) return 0.0;
  if (x.is_trivial()) return 1.0;
  if (x.place.archimedean) {
    Int a = n < 0 ? Int(-n) : n;
    double eps = to_double(x.t);
    return std::pow(a.convert_to<double>(), eps);
  }
  Int v = padic_val(Rat(n), x.place.p);
  if (x.t == 0) return v > 0 ? 0.0 : 1.0;
  return std::pow(to_double(x.t), v.convert_to<double>());
}

Residue residue_class(const SpectrumPoint& x) {
  if (x.is_trivial()) return {Residue::TrivialQ, Int(0), 0.0};
  if (x.place.archimedean) return {Residue::ArchimedeanReal, Int(0), to_double(x.t)};
  if (x.t == 0) return {Residue::TrivialFp, x.place.p, 0.0};
  double eps = -std::log(to_double(x.t)) / std::log(x.place.p.convert_to<double>());
  return {Residue::PAdic, x.place.p, eps};
}

bool is_zariski_dense(const SpectrumPoint& x) {
  return !(!x.place.archimedean && x.t == 0);
}

void BranchSet::normalize() {
  for (auto& [place, ivs] : branches) {
    for (auto& [a, b] : ivs) {
      if (a < 0 || b > 1 || a > b)
        throw input_error("interval endpoints must satisfy 0 <= a <= b <= 1");
    }
    std::sort(ivs.begin(), ivs.end());
    std::vector<std::pair<Rat, Rat>> merged;
    for (auto& iv : ivs) {
      if (!merged.empty() && iv.first <= merged.back().second) {
        if (iv.second > merged.back().second) merged.back().second = iv.second;
      } else {
        merged.push_back(iv);
      }
    }
    ivs = std::move(merged);
  }
}

Rat BranchSet::branch_length(const Place& v) const {
  auto it = branches.find(v);
  if (it == branches.end()) {
    if (!v.archimedean && default_full) return Rat(1);
    return Rat(0);
  }
  Rat len = 0;
  for (auto& [a, b] : it->second) len += b - a;
  return len;
}

BranchSet BranchSet::whole_space() {
  BranchSet e;
  e.default_full = true;
  e.branches[Place::infinity()] = {{Rat(0), Rat(1)}};
  return e;
}

BranchSet BranchSet::single_branch(Place v, Rat a, Rat b) {
  BranchSet e;
  e.branches[std::move(v)] = {{std::move(a), std::move(b)}};
  e.normalize();
  return e;
}

namespace {

double weight_of(const Place& v) {
  if (v.archimedean) return std::exp(-1.0);  // 1/e
  double p = v.p.convert_to<double>();
  return 1.0 / (p * std::log(p));
}

struct TailBracket {
  double lo, hi;
};

// Rigorous bracket of sum_{p > K} 1/(p log p) for K >= 599, by Abel summation
// against pi(t) in [t/log t (1 + 1/log t), t/log t (1 + 1.2762/log t)].
TailBracket prime_tail_bracket(uint64_t K, uint64_t pi_K) {
  double L = std::log(static_cast<double>(K));
  double boundary = static_cast<double>(pi_K) / (static_cast<double>(K) * L);
  double A = 1.0 / L + 1.0 / (2.0 * L * L);
  double B = 1.0 / (2.0 * L * L) + 1.0 / (3.0 * L * L * L);
  double lo = -boundary + A + B;
  double hi = -boundary + A + 1.2762 * B;
  // Cushion for the floating-point evaluation of the closed forms.
  double pad = 1e-12 * (std::abs(lo) + std::abs(hi) + 1.0);
  return {lo - pad, hi + pad};
}

}  // namespace

MuTotalResult mu_total(const MuQuadratureConfig& cfg) {
  if (cfg.prime_cutoff < 2) throw input_error("prime cutoff must be >= 2");
  uint64_t K = std::max<uint64_t>(cfg.prime_cutoff, 1000);
  auto primes = sieve_primes(K);
  MuTotalResult out;
  out.sieve_limit = K;
  double s = std::exp(-1.0);
  for (uint64_t p : primes) {
    double pd = static_cast<double>(p);
    s += 1.0 / (pd * std::log(pd));
  }
  out.partial_sum = s;
  auto tb = prime_tail_bracket(K, primes.size());
  out.tail = {tb.lo, tb.hi};
  out.value = {s + tb.lo, s + tb.hi};
  return out;
}

MuPrimeResult mu_prime(const BranchSet& E_in, const MuQuadratureConfig& cfg) {
  BranchSet E = E_in;
  E.normalize();
  MuPrimeResult out;
  out.tail_full = E.default_full;
  for (auto& [place, ivs] : E.branches) out.lengths[place] = E.branch_length(place);

  double lo = 0, hi = 0;
  auto add_exact = [&](double w) {
    lo += w;
    hi += w;
  };
  add_exact(to_double(E.branch_length(Place::infinity())) * weight_of(Place::infinity()));
  uint64_t K = std::max<uint64_t>(cfg.prime_cutoff, 1000);
  auto primes = E.default_full ? sieve_primes(K) : std::vector<uint64_t>{};
  if (E.default_full) {
    for (uint64_t p : primes) {
      Place v = Place::prime(Int(p));
      add_exact(to_double(E.branch_length(v)) * weight_of(v));
    }
    // Every unlisted branch past the sieve has length 1; listed ones are
    // assumed inside the sieve range (checked below).
    for (auto& [place, ivs] : E.branches)
      if (!place.archimedean && place.p > K)
        throw input_error("listed prime branch beyond the sieve range");
    auto tb = prime_tail_bracket(K, primes.size());
    lo += tb.lo;
    hi += tb.hi;
  } else {
    for (auto& [place, ivs] : E.branches) {
      if (place.archimedean) continue;
      add_exact(to_double(E.branch_length(place)) * weight_of(place));
    }
  }
  out.value = {lo, hi};
  return out;
}

Enclosure mu(const BranchSet& E, const MuQuadratureConfig& cfg) {
  MuPrimeResult num = mu_prime(E, cfg);
  MuTotalResult den = mu_total(cfg);
  Enclosure out;
  out.lo = num.value.lo / den.value.hi;
  out.hi = num.value.hi / den.value.lo;
  if (out.lo < 0) out.lo = 0;
  return out;
}

IntegrateResult integrate_mu(const std::function<double(const SpectrumPoint&)>& h,
                             const MuQuadratureConfig& cfg) {
  if (cfg.nodes_per_branch < 2) throw input_error("nodes_per_branch must be >= 2");
  MuTotalResult total = mu_total(cfg);
  auto primes = sieve_primes(cfg.prime_cutoff);
  int K = cfg.nodes_per_branch;

  auto branch_average = [&](const Place& v) {
    double acc = 0;
    for (int k = 0; k < K; ++k) {
      Rat t(2 * k + 1, 2 * K);
      SpectrumPoint x(v, t);
      double val = h(x);
      if (!std::isfinite(val)) throw input_error("integrand returned a non-finite value");
      acc += val;
    }
    return acc / K;
  };

  double raw = branch_average(Place::infinity()) * weight_of(Place::infinity());
  double covered = weight_of(Place::infinity());
  double last_prime_avg = 0;
  double max_prime_dev = 0;
  std::vector<double> averages;
  for (uint64_t p : primes) {
    Place v = Place::prime(Int(p));
    double avg = branch_average(v);
    averages.push_back(avg);
    raw += avg * weight_of(v);
    covered += weight_of(v);
    last_prime_avg = avg;
  }
  size_t look = std::min<size_t>(averages.size(), 8);
  for (size_t i = averages.size() - look; i < averages.size(); ++i)
    max_prime_dev = std::max(max_prime_dev, std::abs(averages[i] - last_prime_avg));

  // Branches past the cutoff carry the remaining mu-weight; their averages
  // are estimated by the last computed prime branch.
  double uncovered = total.value.mid() - covered;
  double tail_rad = total.value.radius();
  raw += uncovered * last_prime_avg;

  IntegrateResult out;
  out.value = raw / total.value.mid();
  out.tail_error =
      (tail_rad * std::abs(last_prime_avg) + std::abs(uncovered) * max_prime_dev) /
      total.value.mid();
  out.total_weight = covered / total.value.mid();
  return out;
}

}  // namespace berk
