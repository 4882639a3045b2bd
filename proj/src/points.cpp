#include "horoeq/points.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <tuple>

namespace horoeq::points {

namespace {

constexpr u64 kUnset = std::numeric_limits<u64>::max();

u64 abs_u(i64 x) { return x < 0 ? static_cast<u64>(-(x + 1)) + 1 : static_cast<u64>(x); }

void require_unit(i64 x, u64 n, const char* what) {
  if (arith::gcd(abs_u(x), n) != 1) {
    throw Error(Errc::NotCoprime, std::string(what) + " = " + std::to_string(x) + " is not coprime to n = " +
                                      std::to_string(n));
  }
}

void require_p_coprime(u64 n, u64 p) {
  if (p < 2) throw Error(Errc::InvalidArgument, "p must be a prime");
  if (n % p == 0) {
    throw Error(Errc::PrimeDividesModulus, std::to_string(p) + " divides n = " + std::to_string(n));
  }
}

BigInt floor_div(const BigInt& a, const BigInt& b) {
  BigInt q = a / b;
  if (a % b != 0 && ((a < 0) != (b < 0))) q -= 1;
  return q;
}

BigInt place_product(const std::vector<u64>& places, const std::vector<unsigned>& e) {
  BigInt out = 1;
  for (std::size_t i = 0; i < places.size(); ++i) {
    for (unsigned j = 0; j < e[i]; ++j) out *= places[i];
  }
  return out;
}

void validate_places(u64 n, const std::vector<u64>& places, const std::vector<unsigned>& l,
                     const std::vector<unsigned>& m) {
  if (n == 0) throw Error(Errc::InvalidArgument, "n must be >= 1");
  if (l.size() != places.size() || m.size() != places.size()) {
    throw Error(Errc::InvalidArgument, "exponent vectors must be indexed by the finite places");
  }
  for (u64 p : places) {
    if (!arith::is_prime(p)) throw Error(Errc::InvalidArgument, std::to_string(p) + " is not prime");
    if (n % p == 0) throw Error(Errc::NotCoprime, std::to_string(p) + " divides n = " + std::to_string(n));
  }
}

std::vector<RationalPair> sorted_unique(std::vector<RationalPair> v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
  return v;
}

}  // namespace

const char* family_name(Family f) {
  switch (f) {
    case Family::Full: return "full";
    case Family::Monomial: return "monomial";
    case Family::Triple: return "triple";
  }
  return "?";
}

void PointSetSpec::validate() const {
  if (n == 0) throw Error(Errc::InvalidArgument, "n must be >= 1");
  if (d == 0) throw Error(Errc::InvalidArgument, "d must be >= 1");
  if (alpha < 0) throw Error(Errc::InvalidArgument, "alpha must be >= 0");
  if (family == Family::Monomial) {
    require_unit(a, n, "a");
    require_unit(b, n, "b");
  }
  if (family == Family::Triple) {
    require_unit(a, n, "a");
    require_unit(b, n, "b");
    require_unit(c, n, "c");
    if (alpha != Rational(1, 2) && !alpha_override) {
      throw Error(Errc::InvalidArgument, "triples are defined at alpha = 1/2");
    }
  }
}

std::optional<Rational> HorocycleSample::torus2() const {
  if (!s_num) return std::nullopt;
  return Rational(BigInt(*s_num), BigInt(n));
}

double horocycle_im(u64 n, const Rational& alpha) {
  if (n == 1) return 1.0;
  const double a = static_cast<double>(alpha);
  return std::exp(-2.0 * a * std::log(static_cast<double>(n)));
}

namespace {

HorocycleSample build_sample(const PointSetSpec& spec, u64 k, u64 residue, double y) {
  const u64 n = spec.n;
  HorocycleSample s;
  s.n = n;
  s.k = k % n;
  s.y = y;
  switch (spec.family) {
    case Family::Full:
      s.residue = s.k;
      s.t_num = s.k;
      s.x_num = s.k;
      break;
    case Family::Monomial:
      s.residue = residue % n;
      s.t_num = arith::mul_mod(arith::mod(spec.a, n), s.residue, n);
      s.x_num = arith::mul_mod(arith::mod(spec.b, n), s.residue, n);
      break;
    case Family::Triple:
      s.residue = residue % n;
      s.t_num = arith::mul_mod(arith::mod(spec.a, n), s.residue, n);
      s.s_num = arith::mul_mod(arith::mod(spec.b, n), arith::mod_inverse(static_cast<i64>(s.residue), n), n);
      s.x_num = arith::mul_mod(arith::mod(spec.c, n), s.residue, n);
      break;
  }
  return s;
}

}  // namespace

HorocycleSample make_sample(const PointSetSpec& spec, u64 k, u64 residue) {
  return build_sample(spec, k, residue, horocycle_im(spec.n, spec.alpha));
}

std::vector<HorocycleSample> gen_full(u64 n, const Rational& alpha, bool primitive) {
  PointSetSpec spec;
  spec.family = Family::Full;
  spec.n = n;
  spec.alpha = alpha;
  spec.primitive = primitive;
  spec.validate();
  const double y = horocycle_im(n, alpha);
  std::vector<HorocycleSample> out;
  out.reserve(n);
  for (u64 k = 0; k < n; ++k) {
    if (primitive && arith::gcd(k, n) != 1) continue;
    out.push_back(build_sample(spec, k, k, y));
  }
  return out;
}

namespace {

std::vector<HorocycleSample> gen_units(const PointSetSpec& spec) {
  const u64 n = spec.n;
  std::vector<u64> first(n, kUnset);
  for (u64 k = 0; k < n; ++k) {
    if (arith::gcd(k, n) != 1) continue;
    const u64 r = arith::pow_mod(k, spec.d, n);
    if (first[r] == kUnset) first[r] = k;
  }
  const double y = horocycle_im(n, spec.alpha);
  std::vector<HorocycleSample> out;
  for (u64 r = 0; r < n; ++r) {
    if (first[r] != kUnset) out.push_back(build_sample(spec, first[r], r, y));
  }
  return out;
}

}  // namespace

std::vector<HorocycleSample> gen_monomial(const PointSetSpec& spec) {
  PointSetSpec s = spec;
  s.family = Family::Monomial;
  s.validate();
  return gen_units(s);
}

std::vector<HorocycleSample> gen_triple(const PointSetSpec& spec) {
  PointSetSpec s = spec;
  s.family = Family::Triple;
  s.validate();
  return gen_units(s);
}

std::vector<HorocycleSample> generate(const PointSetSpec& spec) {
  switch (spec.family) {
    case Family::Full: return gen_full(spec.n, spec.alpha, spec.primitive);
    case Family::Monomial: return gen_monomial(spec);
    case Family::Triple: return gen_triple(spec);
  }
  throw Error(Errc::InvalidArgument, "unknown family");
}

HorocycleSample apply_M(const PointSetSpec& spec, const HorocycleSample& s, u64 p, int sign) {
  const u64 n = spec.n;
  if (s.n != n) throw Error(Errc::InvalidArgument, "sample does not belong to this point set");
  if (sign != 1 && sign != -1) throw Error(Errc::InvalidArgument, "sign must be +1 or -1");
  require_p_coprime(n, p);
  u64 step = arith::mul_mod(p % n, p % n, n);
  if (sign < 0) step = arith::mod_inverse(static_cast<i64>(step), n);
  const u64 k = arith::mul_mod(step, s.k, n);
  const u64 d = spec.family == Family::Full ? 1 : spec.d;
  const u64 r = arith::mul_mod(arith::pow_mod(step, d, n), s.residue, n);
  return build_sample(spec, k, r, s.y);
}

HorocycleSample apply_T(const PointSetSpec& spec, const HorocycleSample& s, u64 p) {
  if (spec.family != Family::Triple) throw Error(Errc::InvalidArgument, "apply_T acts on triples");
  return apply_M(spec, s, p, +1);
}

bool verify_invariance(const PointSetSpec& spec, u64 p) {
  spec.validate();
  require_p_coprime(spec.n, p);
  const auto samples = generate(spec);
  using Key = std::tuple<u64, u64, u64>;
  auto key = [](const HorocycleSample& s) { return Key{s.t_num, s.s_num.value_or(0), s.x_num}; };
  std::vector<Key> before, after;
  before.reserve(samples.size());
  after.reserve(samples.size());
  for (const auto& s : samples) {
    before.push_back(key(s));
    const HorocycleSample m = spec.family == Family::Triple ? apply_T(spec, s, p) : apply_M(spec, s, p, +1);
    after.push_back(key(m));
  }
  std::sort(before.begin(), before.end());
  std::sort(after.begin(), after.end());
  // Equal sorted sequences of distinct keys: the map is a permutation.
  return before == after;
}

Rational mod_rational(const Rational& x, const BigInt& m) {
  if (m <= 0) throw Error(Errc::InvalidArgument, "modulus must be positive");
  const BigInt num = boost::multiprecision::numerator(x);
  const BigInt den = boost::multiprecision::denominator(x);
  const BigInt q = floor_div(num, den * m);
  return x - Rational(q * m);
}

std::vector<RationalPair> projection_stated(u64 n, const std::vector<u64>& places, const std::vector<unsigned>& l,
                                            const std::vector<unsigned>& m) {
  validate_places(n, places, l, m);
  std::vector<unsigned> lm(l.size());
  for (std::size_t i = 0; i < l.size(); ++i) lm[i] = std::max(l[i], m[i]);
  const BigInt sl = place_product(places, l), sm = place_product(places, m), slm = place_product(places, lm);
  std::vector<RationalPair> out;
  out.reserve(n);
  for (u64 k = 0; k < n; ++k) {
    const Rational q(slm * k, BigInt(n));
    out.emplace_back(mod_rational(q, sl), mod_rational(q, sm));
  }
  return sorted_unique(std::move(out));
}

std::vector<RationalPair> projection_direct(u64 n, const std::vector<u64>& places, const std::vector<unsigned>& l,
                                            const std::vector<unsigned>& m) {
  validate_places(n, places, l, m);
  std::vector<unsigned> lm(l.size());
  for (std::size_t i = 0; i < l.size(); ++i) lm[i] = std::max(l[i], m[i]);
  const BigInt sl = place_product(places, l), sm = place_product(places, m), slm = place_product(places, lm);
  const BigInt n_inv = arith::mod_inverse(BigInt(n), slm);
  std::vector<RationalPair> out;
  out.reserve(n);
  for (u64 k = 0; k < n; ++k) {
    // r = k / n in Z_p for every p in S_f, to precision S^{l v m}.
    const BigInt r = (BigInt(k) * n_inv) % slm;
    const BigInt shifted = BigInt(k) - BigInt(n) * r;
    if (shifted % slm != 0) throw Error(Errc::InvariantViolation, "approximation is not S-adically close");
    const Rational q(shifted, BigInt(n));
    out.emplace_back(mod_rational(q, sl), mod_rational(q, sm));
  }
  return sorted_unique(std::move(out));
}

LevelProjection project_level(u64 n, const std::vector<u64>& places, const std::vector<unsigned>& l,
                              const std::vector<unsigned>& m) {
  auto stated = projection_stated(n, places, l, m);
  const auto direct = projection_direct(n, places, l, m);
  if (stated != direct) throw Error(Errc::InvariantViolation, "level projection paths disagree");
  return {places, l, m, std::move(stated)};
}

}  // namespace horoeq::points
