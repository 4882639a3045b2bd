#include <cmath>
#include <map>
#include <numeric>
#include <set>

#include "doctest.h"

#include "horoeq/points.hpp"

using namespace horoeq;
using namespace horoeq::points;

namespace {

Errc code_of(auto&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("no error raised");
  return Errc::Io;
}

PointSetSpec monomial(u64 n, u64 d, i64 a = 1, i64 b = 1) {
  PointSetSpec s;
  s.family = Family::Monomial;
  s.n = n;
  s.d = d;
  s.a = a;
  s.b = b;
  return s;
}

PointSetSpec triple(u64 n, u64 d, i64 a = 1, i64 b = 1, i64 c = 1) {
  PointSetSpec s = monomial(n, d, a, b);
  s.family = Family::Triple;
  s.c = c;
  return s;
}

u64 power_mod(u64 k, u64 d, u64 n) {
  u64 r = 1 % n;
  for (u64 i = 0; i < d; ++i) r = r * k % n;
  return r;
}

u64 brute_inverse(u64 x, u64 n) {
  for (u64 y = 0; y < n; ++y)
    if (x * y % n == 1 % n) return y;
  return n;
}

Rational frac(u64 num, u64 n) { return Rational(BigInt(num), BigInt(n)); }

}  // namespace

TEST_CASE("gen_full") {
  auto one = gen_full(1, Rational(1, 2));
  REQUIRE(one.size() == 1);
  CHECK(one[0].xpoint().z() == sl2::Complex(0, 1));

  const auto five = gen_full(5, Rational(1, 2));
  REQUIRE(five.size() == 5);
  for (u64 k = 0; k < 5; ++k) {
    CHECK(five[k].k == k);
    CHECK(five[k].torus1() == frac(k, 5));
    CHECK(std::abs(five[k].xpoint().z() - sl2::Complex(k / 5.0, 0.2)) < 1e-15);
  }
  const auto four = gen_full(4, Rational(1));
  for (u64 k = 0; k < 4; ++k) CHECK(std::abs(four[k].xpoint().z() - sl2::Complex(k / 4.0, 1.0 / 16)) < 1e-15);

  const auto prim = gen_full(12, Rational(1, 2), true);
  std::vector<u64> ks;
  for (const auto& s : prim) ks.push_back(s.k);
  CHECK(ks == std::vector<u64>{1, 5, 7, 11});
}

TEST_CASE("gen_monomial") {
  auto s = gen_monomial(monomial(5, 2));
  REQUIRE(s.size() == 2);
  std::set<Rational> t;
  for (const auto& x : s) t.insert(x.torus1());
  CHECK(t == std::set<Rational>{frac(1, 5), frac(4, 5)});
  CHECK(gen_monomial(monomial(5, 1)).size() == 4);
  CHECK(code_of([] { gen_monomial(monomial(6, 1, 3)); }) == Errc::NotCoprime);
  CHECK(code_of([] { gen_monomial(monomial(6, 1, 1, 2)); }) == Errc::NotCoprime);

  // torus from a k^d, horocycle from b k^d
  const auto w = gen_monomial(monomial(11, 3, 2, 7));
  for (const auto& x : w) {
    const u64 r = power_mod(x.k, 3, 11);
    REQUIRE(x.residue == r);
    REQUIRE(x.torus1() == frac(2 * r % 11, 11));
    REQUIRE(x.x_num == 7 * r % 11);
    REQUIRE(!x.torus2());
  }
}

TEST_CASE("gen_triple") {
  const auto s = gen_triple(triple(5, 1));
  std::set<std::pair<Rational, Rational>> pairs;
  for (const auto& x : s) pairs.insert({x.torus1(), *x.torus2()});
  CHECK(pairs == std::set<std::pair<Rational, Rational>>{
                     {frac(1, 5), frac(1, 5)}, {frac(2, 5), frac(3, 5)}, {frac(3, 5), frac(2, 5)}, {frac(4, 5), frac(4, 5)}});

  const auto two = gen_triple(triple(2, 1));
  REQUIRE(two.size() == 1);
  CHECK(two[0].torus1() == frac(1, 2));
  CHECK(*two[0].torus2() == frac(1, 2));
  CHECK(std::abs(two[0].xpoint().z() - sl2::Complex(0.5, 0.5)) < 1e-15);

  CHECK(gen_triple(triple(7, 3)).size() == 2);
  CHECK(code_of([] { gen_triple(triple(10, 1, 1, 1, 5)); }) == Errc::NotCoprime);

  PointSetSpec bad = triple(7, 1);
  bad.alpha = Rational(1, 3);
  CHECK(code_of([&] { gen_triple(bad); }) == Errc::InvalidArgument);
  bad.alpha_override = true;
  CHECK(gen_triple(bad).size() == 6);
}

TEST_CASE("triple reconstruction") {
  for (u64 n : {7u, 12u, 97u, 360u, 1001u}) {
    for (u64 d : {1u, 2u, 3u}) {
      const i64 a = 5, b = 13, c = 17;
      if (std::gcd(u64{5 * 13 * 17}, n) != 1) continue;
      for (const auto& x : gen_triple(triple(n, d, a, b, c))) {
        // k^d from torus1, then torus2 from its inverse
        const u64 r = x.t_num * brute_inverse(a % n, n) % n;
        REQUIRE(r == power_mod(x.k, d, n));
        REQUIRE(x.s_num == b * brute_inverse(r, n) % n);
        REQUIRE(x.x_num == c * r % n);
      }
    }
  }
}

TEST_CASE("cardinality matches the formula") {
  for (u64 n = 1; n <= 2000; ++n)
    for (u64 d = 1; d <= 12; ++d) REQUIRE(gen_monomial(monomial(n, d)).size() == arith::residue_count_formula(n, d));
}

TEST_CASE("xpoint against a direct oracle") {
  for (u64 n : {2u, 3u, 10u, 1009u, 100003u}) {
    for (Rational alpha : {Rational(1, 2), Rational(1, 3), Rational(5, 4), Rational(2)}) {
      const double y = std::pow(static_cast<double>(n), -2.0 * static_cast<double>(alpha));
      CHECK(horocycle_im(n, alpha) == doctest::Approx(y).epsilon(1e-13));
      const auto s = gen_full(std::min<u64>(n, 50), alpha);
      for (const auto& x : s) REQUIRE(x.xpoint().z().real() == static_cast<double>(x.k) / static_cast<double>(x.n));
    }
  }
  for (const auto& x : gen_triple(triple(101, 2, 1, 1, 3))) {
    const auto z = x.xpoint().z();
    REQUIRE(std::abs(z.real() - static_cast<double>(3 * power_mod(x.k, 2, 101) % 101) / 101) <= 1e-12);
    REQUIRE(z.imag() == doctest::Approx(1.0 / 101).epsilon(1e-12));
  }
}

TEST_CASE("apply_M and apply_T") {
  const auto spec = monomial(7, 1);
  const auto s = make_sample(spec, 1, 1);
  const auto up = apply_M(spec, s, 3, +1);
  CHECK(up.residue == 2);
  CHECK(apply_M(spec, apply_M(spec, s, 3, -1), 3, +1) == s);
  CHECK(code_of([] {
          const auto sp = monomial(9, 1);
          apply_M(sp, make_sample(sp, 1, 1), 3, +1);
        }) == Errc::PrimeDividesModulus);

  const auto tspec = triple(5, 1);
  const auto t = apply_T(tspec, make_sample(tspec, 1, 1), 2);
  CHECK(t.residue == 4);
  CHECK(t.torus1() == frac(4, 5));
  CHECK(*t.torus2() == frac(4, 5));
  CHECK(code_of([] {
          const auto sp = triple(4, 1);
          apply_T(sp, make_sample(sp, 1, 1), 2);
        }) == Errc::PrimeDividesModulus);

  // phi(n)-fold composition is the identity
  for (u64 n : {7u, 15u, 64u, 99u}) {
    for (u64 d : {1u, 2u}) {
      const auto sp = triple(n, d);
      const u64 phi = arith::totient(n);
      for (const auto& x : gen_triple(sp)) {
        auto y = x;
        for (u64 i = 0; i < phi; ++i) y = apply_T(sp, y, n % 2 ? 2 : 3);
        REQUIRE(y.t_num == x.t_num);
        REQUIRE(y.s_num == x.s_num);
        REQUIRE(y.x_num == x.x_num);
      }
    }
  }

  // torus scaling by p^{2d} on the first coordinate, p^{-2d} on the second
  const auto sp = triple(101, 3, 2, 3, 5);
  for (const auto& x : gen_triple(sp)) {
    const auto y = apply_T(sp, x, 7);
    const u64 pd = power_mod(7, 6, 101);
    REQUIRE(y.t_num == x.t_num * pd % 101);
    REQUIRE(*y.s_num == *x.s_num * brute_inverse(pd, 101) % 101);
    REQUIRE(y.x_num == x.x_num * pd % 101);
  }
}

TEST_CASE("invariance") {
  CHECK(verify_invariance(monomial(7, 1), 2));
  PointSetSpec full;
  full.family = Family::Full;
  full.n = 7;
  full.primitive = false;
  CHECK(verify_invariance(full, 2));
  CHECK(code_of([] { verify_invariance(monomial(10, 1), 5); }) == Errc::PrimeDividesModulus);
  CHECK(code_of([] { verify_invariance(triple(9, 2), 3); }) == Errc::PrimeDividesModulus);

  for (u64 n = 1; n <= 2000; ++n) {
    for (u64 p : {2u, 3u, 5u}) {
      if (n % p == 0) continue;
      for (u64 d = 1; d <= 4; ++d) {
        REQUIRE(verify_invariance(monomial(n, d), p));
        REQUIRE(verify_invariance(triple(n, d), p));
      }
    }
  }
}

TEST_CASE("cusp excursion for alpha > 1") {
  for (Rational alpha : {Rational(5, 4), Rational(3, 2), Rational(2)}) {
    for (u64 n : {7u, 30u, 101u, 1000u}) {
      const double bound = std::pow(static_cast<double>(n), 2 * static_cast<double>(alpha) - 2) * (1 - 1e-6);
      for (const auto& s : gen_full(n, alpha, true)) REQUIRE(s.height() >= bound);
      PointSetSpec m = monomial(n, 2);
      m.alpha = alpha;
      for (const auto& s : gen_monomial(m)) REQUIRE(s.height() >= bound);
    }
  }
}

TEST_CASE("generation is deterministic") {
  const auto spec = triple(10007, 2, 3, 5, 7);
  CHECK(gen_triple(spec) == gen_triple(spec));
  CHECK(generate(spec) == gen_triple(spec));
  const auto m = monomial(10007, 3);
  CHECK(generate(m) == gen_monomial(m));
  // ascending by residue, smallest k kept
  const auto s = gen_monomial(monomial(1000, 2));
  for (std::size_t i = 1; i < s.size(); ++i) REQUIRE(s[i - 1].residue < s[i].residue);
  for (const auto& x : s) {
    for (u64 k = 1; k < x.k; ++k)
      if (std::gcd(k, u64{1000}) == 1) REQUIRE(k * k % 1000 != x.residue);
  }
}

TEST_CASE("level projections") {
  // independent enumeration of {(L k/n mod S^l, L k/n mod S^m)}
  auto oracle = [](u64 n, std::vector<u64> places, std::vector<unsigned> l, std::vector<unsigned> m) {
    i64 sl = 1, sm = 1, slm = 1;
    for (std::size_t i = 0; i < places.size(); ++i) {
      for (unsigned e = 0; e < l[i]; ++e) sl *= static_cast<i64>(places[i]);
      for (unsigned e = 0; e < m[i]; ++e) sm *= static_cast<i64>(places[i]);
      for (unsigned e = 0; e < std::max(l[i], m[i]); ++e) slm *= static_cast<i64>(places[i]);
    }
    // numerators over n: x mod M = (num mod M n) / n
    std::set<std::pair<Rational, Rational>> out;
    for (u64 k = 0; k < n; ++k) {
      const i64 num = slm * static_cast<i64>(k);
      const i64 N = static_cast<i64>(n);
      out.insert({Rational(num % (sl * N), N), Rational(num % (sm * N), N)});
    }
    return std::vector<RationalPair>(out.begin(), out.end());
  };

  const auto trivial = project_level(5, {2}, {0}, {0});
  CHECK(trivial.pairs.size() == 5);
  for (const auto& [x, y] : trivial.pairs) CHECK(x == y);

  const auto one = project_level(5, {2}, {1}, {0});
  std::set<Rational> firsts;
  for (const auto& pr : one.pairs) firsts.insert(pr.first);
  CHECK(firsts == std::set<Rational>{Rational(0), frac(2, 5), frac(4, 5), frac(6, 5), frac(8, 5)});

  CHECK(code_of([] { project_level(4, {2}, {1}, {0}); }) == Errc::NotCoprime);

  for (u64 n : {1u, 5u, 7u, 11u, 25u, 49u, 77u}) {
    for (unsigned l0 = 0; l0 <= 2; ++l0)
      for (unsigned l1 = 0; l1 <= 2; ++l1)
        for (unsigned m0 = 0; m0 <= 2; ++m0)
          for (unsigned m1 = 0; m1 <= 2; ++m1) {
            const std::vector<unsigned> l{l0, l1}, m{m0, m1};
            const auto expected = oracle(n, {2, 3}, l, m);
            REQUIRE(projection_stated(n, {2, 3}, l, m) == expected);
            REQUIRE(projection_direct(n, {2, 3}, l, m) == expected);
            REQUIRE(project_level(n, {2, 3}, l, m).pairs == expected);
          }
  }

  CHECK(mod_rational(Rational(-1, 3), BigInt(2)) == Rational(5, 3));
  CHECK(mod_rational(Rational(7, 2), BigInt(3)) == Rational(1, 2));
}
