#include "horoeq/arith.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>

#include <boost/multiprecision/miller_rabin.hpp>

#include "horoeq/summation.hpp"

namespace horoeq::arith {

namespace {

using u128 = unsigned __int128;
using i128 = __int128;

constexpr std::uint32_t kSieveLimit = 1'000'000;

struct Sieve {
  std::vector<std::uint32_t> smallest_factor;
  std::vector<std::uint32_t> primes;

  Sieve() : smallest_factor(kSieveLimit + 1, 0) {
    for (std::uint32_t i = 2; i <= kSieveLimit; ++i) {
      if (smallest_factor[i] == 0) {
        smallest_factor[i] = i;
        primes.push_back(i);
      }
      for (std::uint32_t p : primes) {
        if (p > smallest_factor[i] || static_cast<std::uint64_t>(p) * i > kSieveLimit) break;
        smallest_factor[p * i] = p;
      }
    }
  }
};

const Sieve& sieve() {
  static const Sieve instance;
  return instance;
}

u64 pollard_rho(u64 n) {
  if (n % 2 == 0) return 2;
  for (u64 c = 1;; ++c) {
    auto f = [&](u64 x) { return (mul_mod(x, x, n) + c) % n; };
    u64 x = 2, y = 2, d = 1;
    while (d == 1) {
      x = f(x);
      y = f(f(y));
      d = gcd(x > y ? x - y : y - x, n);
    }
    if (d != n) return d;
  }
}

void factor_rec(u64 n, std::map<u64, unsigned>& out) {
  if (n == 1) return;
  if (is_prime(n)) {
    ++out[n];
    return;
  }
  const u64 d = pollard_rho(n);
  factor_rec(d, out);
  factor_rec(n / d, out);
}

BigInt big_rho(const BigInt& n) {
  if ((n & 1) == 0) return 2;
  for (unsigned c = 1;; ++c) {
    auto f = [&](const BigInt& x) { return (x * x + c) % n; };
    BigInt x = 2, y = 2, d = 1;
    while (d == 1) {
      x = f(x);
      y = f(f(y));
      d = gcd(x > y ? BigInt(x - y) : BigInt(y - x), n);
    }
    if (d != n) return d;
  }
}

void big_factor_rec(const BigInt& n, std::map<BigInt, unsigned>& out) {
  if (n == 1) return;
  if (n <= std::numeric_limits<u64>::max()) {
    for (const auto& pp : factorize(static_cast<u64>(n))) out[BigInt(pp.prime)] += pp.exponent;
    return;
  }
  if (boost::multiprecision::miller_rabin_test(n, 25)) {
    ++out[n];
    return;
  }
  const BigInt d = big_rho(n);
  big_factor_rec(d, out);
  big_factor_rec(n / d, out);
}

}  // namespace

Residue::Residue(i64 value, u64 modulus) : value_(0), modulus_(modulus) {
  if (modulus == 0) throw Error(Errc::InvalidArgument, "residue modulus must be >= 1");
  value_ = mod(value, modulus);
}

Residue Residue::operator+(const Residue& other) const {
  if (modulus_ != other.modulus_) throw Error(Errc::InvalidArgument, "residue moduli differ");
  const u128 s = static_cast<u128>(value_) + other.value_;
  Residue r(0, modulus_);
  r.value_ = static_cast<u64>(s % modulus_);
  return r;
}

Residue Residue::operator*(const Residue& other) const {
  if (modulus_ != other.modulus_) throw Error(Errc::InvalidArgument, "residue moduli differ");
  Residue r(0, modulus_);
  r.value_ = mul_mod(value_, other.value_, modulus_);
  return r;
}

u64 gcd(u64 a, u64 b) noexcept {
  while (b != 0) {
    const u64 t = a % b;
    a = b;
    b = t;
  }
  return a;
}

BigInt gcd(const BigInt& a, const BigInt& b) {
  return boost::multiprecision::gcd(abs(a), abs(b));
}

u64 mod(i64 x, u64 n) {
  if (n == 0) throw Error(Errc::InvalidArgument, "modulus must be >= 1");
  const i128 r = static_cast<i128>(x) % static_cast<i128>(n);
  return static_cast<u64>(r < 0 ? r + static_cast<i128>(n) : r);
}

u64 mul_mod(u64 a, u64 b, u64 n) noexcept {
  if ((a | b) < (u64{1} << 32)) return a * b % n;
  return static_cast<u64>(static_cast<u128>(a) * b % n);
}

u64 pow_mod(u64 base, u64 exponent, u64 n) noexcept {
  if (n == 1) return 0;
  u64 result = 1;
  base %= n;
  while (exponent > 0) {
    if (exponent & 1) result = mul_mod(result, base, n);
    base = mul_mod(base, base, n);
    exponent >>= 1;
  }
  return result;
}

namespace {

// Inverse of k in [0, n) for n >= 2, or 0 when gcd(k, n) != 1. Bezout
// coefficients stay within n in magnitude, so i64 suffices for n < 2^63.
u64 inverse_or_zero(u64 k, u64 n) noexcept {
  i64 old_r = static_cast<i64>(k % n), r = static_cast<i64>(n);
  i64 old_s = 1, s = 0;
  while (r != 0) {
    const i64 q = old_r / r;
    const i64 tr = old_r - q * r;
    old_r = r;
    r = tr;
    const i64 ts = old_s - q * s;
    old_s = s;
    s = ts;
  }
  if (old_r != 1) return 0;
  return old_s < 0 ? static_cast<u64>(old_s + static_cast<i64>(n)) : static_cast<u64>(old_s);
}

}  // namespace

u64 mod_inverse(i64 k, u64 n) {
  if (n == 0) throw Error(Errc::InvalidArgument, "modulus must be >= 1");
  if (n == 1) return 0;
  if (n >= (u64{1} << 63)) {
    return static_cast<u64>(mod_inverse(BigInt(k), BigInt(n)));
  }
  const u64 inv = inverse_or_zero(mod(k, n), n);
  if (inv == 0) {
    throw Error(Errc::NotCoprime, std::to_string(k) + " is not a unit mod " + std::to_string(n));
  }
  return inv;
}

Residue mod_inverse(const Residue& k) {
  return Residue(static_cast<i64>(mod_inverse(static_cast<i64>(k.value()), k.modulus())), k.modulus());
}

BigInt mod_inverse(const BigInt& k, const BigInt& n) {
  if (n < 1) throw Error(Errc::InvalidArgument, "modulus must be >= 1");
  if (n == 1) return 0;
  BigInt old_r = ((k % n) + n) % n, r = n, old_s = 1, s = 0;
  while (r != 0) {
    const BigInt q = old_r / r;
    BigInt t = old_r - q * r;
    old_r = r;
    r = t;
    t = old_s - q * s;
    old_s = s;
    s = t;
  }
  if (old_r != 1) throw Error(Errc::NotCoprime, "argument is not a unit");
  return ((old_s % n) + n) % n;
}

bool is_prime(u64 n) noexcept {
  if (n < 2) return false;
  if (n <= kSieveLimit) return sieve().smallest_factor[n] == n;
  for (u64 p : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL, 31ULL, 37ULL}) {
    if (n % p == 0) return n == p;
  }
  u64 d = n - 1;
  unsigned s = 0;
  while ((d & 1) == 0) {
    d >>= 1;
    ++s;
  }
  // Deterministic for all 64-bit n.
  for (u64 a : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL, 31ULL, 37ULL}) {
    u64 x = pow_mod(a, d, n);
    if (x == 1 || x == n - 1) continue;
    bool composite = true;
    for (unsigned i = 1; i < s; ++i) {
      x = mul_mod(x, x, n);
      if (x == n - 1) {
        composite = false;
        break;
      }
    }
    if (composite) return false;
  }
  return true;
}

const std::vector<std::uint32_t>& small_primes() { return sieve().primes; }

std::vector<PrimePower> factorize(u64 n) {
  if (n == 0) throw Error(Errc::InvalidArgument, "cannot factor 0");
  std::vector<PrimePower> out;
  const Sieve& s = sieve();
  auto push = [&](u64 p) {
    if (!out.empty() && out.back().prime == p) {
      ++out.back().exponent;
    } else {
      out.push_back({p, 1});
    }
  };
  if (n <= kSieveLimit) {
    while (n > 1) {
      const u64 p = s.smallest_factor[n];
      push(p);
      n /= p;
    }
    return out;
  }
  for (std::uint32_t p : s.primes) {
    if (static_cast<u64>(p) * p > n) break;
    while (n % p == 0) {
      push(p);
      n /= p;
    }
  }
  if (n == 1) return out;
  const std::uint64_t last = s.primes.back();
  if (n < last * last) {
    push(n);
    return out;
  }
  std::map<u64, unsigned> rest;
  factor_rec(n, rest);
  for (const auto& [p, e] : rest) out.push_back({p, e});
  std::sort(out.begin(), out.end(), [](const PrimePower& x, const PrimePower& y) { return x.prime < y.prime; });
  return out;
}

std::vector<BigPrimePower> factorize(const BigInt& n) {
  if (n < 1) throw Error(Errc::InvalidArgument, "factorization needs n >= 1");
  std::map<BigInt, unsigned> parts;
  BigInt rest = n;
  for (std::uint32_t p : small_primes()) {
    if (BigInt(p) * p > rest) break;
    while (rest % p == 0) {
      ++parts[BigInt(p)];
      rest /= p;
    }
  }
  big_factor_rec(rest, parts);
  std::vector<BigPrimePower> out;
  for (const auto& [p, e] : parts) out.push_back({p, e});
  return out;
}

u64 totient(u64 n) {
  u64 result = n;
  for (const auto& pp : factorize(n)) result = result / pp.prime * (pp.prime - 1);
  return result;
}

BigInt totient(const BigInt& n) {
  BigInt result = n;
  for (const auto& pp : factorize(n)) result = result / pp.prime * (pp.prime - 1);
  return result;
}

unsigned omega(u64 n) { return static_cast<unsigned>(factorize(n).size()); }
unsigned omega(const BigInt& n) { return static_cast<unsigned>(factorize(n).size()); }

int mobius(u64 n) {
  const auto f = factorize(n);
  for (const auto& pp : f) {
    if (pp.exponent > 1) return 0;
  }
  return (f.size() % 2 == 0) ? 1 : -1;
}

u64 divisor_count(u64 n) {
  u64 tau = 1;
  for (const auto& pp : factorize(n)) tau *= pp.exponent + 1;
  return tau;
}

PrimeSet primes_coprime(u64 n, double x) {
  if (!(x > 0)) throw Error(Errc::InvalidArgument, "prime cutoff must be positive");
  std::vector<u64> primes;
  if (x <= 2) return PrimeSet(n, x, std::move(primes));
  // Largest integer strictly below x.
  const double c = std::ceil(x) - 1.0;
  if (c > 4e9) throw Error(Errc::ResourceExhausted, "prime cutoff too large to sieve");
  const u64 bound = static_cast<u64>(c);
  auto keep = [&](u64 p) {
    if (gcd(p, n) == 1) primes.push_back(p);
  };
  if (bound <= kSieveLimit) {
    for (std::uint32_t p : small_primes()) {
      if (p > bound) break;
      keep(p);
    }
  } else {
    std::vector<bool> composite(bound + 1, false);
    for (u64 i = 2; i <= bound; ++i) {
      if (composite[i]) continue;
      keep(i);
      for (u64 j = i * i; j <= bound; j += i) composite[j] = true;
    }
  }
  return PrimeSet(n, x, std::move(primes));
}

std::vector<Residue> residue_set(u64 n, u64 d, const Residue& a) {
  if (n == 0 || d == 0) throw Error(Errc::InvalidArgument, "residue_set needs n >= 1 and d >= 1");
  if (a.modulus() != n) throw Error(Errc::InvalidArgument, "multiplier has the wrong modulus");
  if (gcd(a.value(), n) != 1) throw Error(Errc::NotCoprime, "multiplier is not a unit");
  std::vector<bool> seen(n, false);
  for (u64 k = 0; k < n; ++k) {
    if (gcd(k, n) != 1) continue;
    seen[mul_mod(a.value(), pow_mod(k, d, n), n)] = true;
  }
  std::vector<Residue> out;
  for (u64 r = 0; r < n; ++r) {
    if (seen[r]) out.emplace_back(static_cast<i64>(r), n);
  }
  return out;
}

u64 residue_count_prime_power(u64 p, unsigned r, u64 d) {
  if (r == 0) return 1;
  u64 pr = 1;
  for (unsigned i = 0; i < r; ++i) pr *= p;
  const u64 phi = pr / p * (p - 1);
  if (p != 2) {
    // (Z/p^r)^x is cyclic of order phi.
    return phi / gcd(phi, d);
  }
  if (r == 1) return 1;
  // (Z/2^r)^x = Z/2 x Z/2^{r-2}.
  const u64 tail = pr / 4;
  if (d % 2 == 0) return phi / (2 * gcd(tail, d));
  return (2 / gcd(2, d)) * (tail / gcd(tail, d));
}

u64 residue_count_formula(u64 n, u64 d) {
  if (n == 0 || d == 0) throw Error(Errc::InvalidArgument, "residue_count_formula needs n, d >= 1");
  u64 count = 1;
  for (const auto& pp : factorize(n)) count *= residue_count_prime_power(pp.prime, pp.exponent, d);
  return count;
}

std::complex<double> unit_phase(i64 j, u64 n) {
  u64 r = mod(j, n);
  // Use the representative of smallest magnitude for a well-conditioned angle.
  const double frac = (2 * r > n) ? -static_cast<double>(n - r) / static_cast<double>(n)
                                   : static_cast<double>(r) / static_cast<double>(n);
  const double angle = 2.0 * std::numbers::pi * frac;
  return {std::cos(angle), std::sin(angle)};
}

i64 ramanujan_sum(u64 n, i64 m) {
  if (n == 0) throw Error(Errc::InvalidArgument, "ramanujan_sum needs n >= 1");
  const u64 abs_m = m < 0 ? static_cast<u64>(-(m + 1)) + 1 : static_cast<u64>(m);
  const u64 g = gcd(abs_m, n);
  const u64 q = n / g;
  return static_cast<i64>(mobius(q)) * static_cast<i64>(totient(n) / totient(q));
}

namespace {

// Units of Z/nZ (n >= 2) in ascending order with their inverses: the non-units
// are sieved out by the prime factors of n, then all inverses come from a
// single extended Euclid on the product of the units.
std::vector<std::pair<u64, u64>> units_with_inverses(u64 n) {
  std::vector<char> is_unit(n, 1);
  is_unit[0] = 0;
  for (const auto& pp : factorize(n))
    for (u64 j = pp.prime; j < n; j += pp.prime) is_unit[j] = 0;
  std::vector<std::pair<u64, u64>> units;
  for (u64 k = 1; k < n; ++k)
    if (is_unit[k]) units.emplace_back(k, 0);
  std::vector<u64> prefix(units.size());
  u64 acc = 1;
  for (std::size_t i = 0; i < units.size(); ++i) prefix[i] = acc = mul_mod(acc, units[i].first, n);
  u64 inv = inverse_or_zero(acc, n);
  for (std::size_t i = units.size(); i-- > 0;) {
    units[i].second = i == 0 ? inv : mul_mod(inv, prefix[i - 1], n);
    inv = mul_mod(inv, units[i].first, n);
  }
  return units;
}

}  // namespace

std::complex<double> kloosterman_sum(i64 m1, i64 m2, u64 n) {
  if (n == 0) throw Error(Errc::InvalidArgument, "kloosterman_sum needs n >= 1");
  if (n == 1) return {1.0, 0.0};
  const u64 a = mod(m1, n), b = mod(m2, n);
  std::vector<std::complex<double>> terms;
  for (const auto& [k, kbar] : units_with_inverses(n)) {
    const u64 j = (mul_mod(a, k, n) + mul_mod(b, kbar, n)) % n;
    terms.push_back(unit_phase(static_cast<i64>(j), n));
  }
  return pairwise_sum(terms);
}

double weil_bound(i64 m1, i64 m2, u64 n) {
  const u64 g = gcd(gcd(static_cast<u64>(m1 < 0 ? -m1 : m1), static_cast<u64>(m2 < 0 ? -m2 : m2)), n);
  return static_cast<double>(divisor_count(n)) * std::sqrt(static_cast<double>(g)) *
         std::sqrt(static_cast<double>(n));
}

}  // namespace horoeq::arith
