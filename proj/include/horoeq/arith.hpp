#pragma once

// Exact modular and multiplicative number theory.
//
// Desk-scale moduli (n well below 2^63) go through the std::uint64_t
// overloads, which use 128-bit intermediates and never overflow. BigInt
// overloads cover the same operations for arbitrary size.

#include <complex>
#include <cstdint>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "horoeq/error.hpp"

namespace horoeq {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

namespace arith {

using u64 = std::uint64_t;
using i64 = std::int64_t;

// An element of Z/nZ, always stored as its canonical representative.
class Residue {
 public:
  Residue(i64 value, u64 modulus);

  u64 value() const noexcept { return value_; }
  u64 modulus() const noexcept { return modulus_; }

  Residue operator+(const Residue& other) const;
  Residue operator*(const Residue& other) const;
  friend bool operator==(const Residue&, const Residue&) = default;
  friend auto operator<=>(const Residue&, const Residue&) = default;

 private:
  u64 value_;
  u64 modulus_;
};

u64 gcd(u64 a, u64 b) noexcept;
BigInt gcd(const BigInt& a, const BigInt& b);

// Canonical value of x mod n in [0, n).
u64 mod(i64 x, u64 n);
u64 mul_mod(u64 a, u64 b, u64 n) noexcept;
u64 pow_mod(u64 base, u64 exponent, u64 n) noexcept;

Residue mod_inverse(const Residue& k);
u64 mod_inverse(i64 k, u64 n);
BigInt mod_inverse(const BigInt& k, const BigInt& n);

bool is_prime(u64 n) noexcept;

struct PrimePower {
  u64 prime;
  unsigned exponent;
  friend bool operator==(const PrimePower&, const PrimePower&) = default;
};

struct BigPrimePower {
  BigInt prime;
  unsigned exponent;
};

// Ascending by prime.
std::vector<PrimePower> factorize(u64 n);
std::vector<BigPrimePower> factorize(const BigInt& n);

u64 totient(u64 n);
BigInt totient(const BigInt& n);
unsigned omega(u64 n);
unsigned omega(const BigInt& n);
int mobius(u64 n);
u64 divisor_count(u64 n);

// Primes below 10^6 from the shared sieve (built once, read-only afterwards).
const std::vector<std::uint32_t>& small_primes();

class PrimeSet {
 public:
  PrimeSet(u64 modulus, double cutoff, std::vector<u64> primes)
      : modulus_(modulus), cutoff_(cutoff), primes_(std::move(primes)) {}

  u64 modulus() const noexcept { return modulus_; }
  double cutoff() const noexcept { return cutoff_; }
  const std::vector<u64>& primes() const noexcept { return primes_; }
  std::size_t count() const noexcept { return primes_.size(); }
  bool empty() const noexcept { return primes_.empty(); }

 private:
  u64 modulus_;
  double cutoff_;
  std::vector<u64> primes_;
};

// Primes p with 1 < p < x and gcd(p, n) = 1.
PrimeSet primes_coprime(u64 n, double x);

// {a k^d mod n : gcd(k, n) = 1}, ascending.
std::vector<Residue> residue_set(u64 n, u64 d, const Residue& a);

// Size of the degree-d residue set for a single prime power, from the
// structure of (Z/p^r)^x.
u64 residue_count_prime_power(u64 p, unsigned r, u64 d);
u64 residue_count_formula(u64 n, u64 d);

// e(j/n) = exp(2 pi i j / n) with j reduced mod n first.
std::complex<double> unit_phase(i64 j, u64 n);

i64 ramanujan_sum(u64 n, i64 m);
std::complex<double> kloosterman_sum(i64 m1, i64 m2, u64 n);

// tau(n) sqrt(gcd(m1, m2, n)) sqrt(n).
double weil_bound(i64 m1, i64 m2, u64 n);

}  // namespace arith
}  // namespace horoeq
