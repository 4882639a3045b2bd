#include <cmath>
#include <numbers>
#include <numeric>
#include <random>

#include "doctest.h"

#include "horoeq/sl2.hpp"

using namespace horoeq;
using namespace horoeq::sl2;

namespace {

bool near(Complex a, Complex b, double tol) { return std::abs(a - b) <= tol * std::max(1.0, std::abs(b)); }

bool close_matrix(const RealMatrix2& x, const RealMatrix2& y, double tol) {
  return std::abs(x.a - y.a) <= tol && std::abs(x.b - y.b) <= tol && std::abs(x.c - y.c) <= tol &&
         std::abs(x.d - y.d) <= tol;
}

// gamma . z in exact rational arithmetic; the doubles in z are exact binary
// fractions, so this is the true image.
std::pair<Rational, Rational> exact_mobius(const IntegerMatrix2& g, Complex z) {
  const Rational x(z.real()), y(z.imag());
  const Rational a(g.a), b(g.b), c(g.c), d(g.d);
  const Rational cxd = c * x + d;
  const Rational q = cxd * cxd + c * c * y * y;
  return {((a * x + b) * cxd + a * c * y * y) / q, y / q};
}

Errc code_of(auto&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("no error raised");
  return Errc::Io;
}

bool in_closed_domain(Complex z) {
  return std::abs(z.real()) <= 0.5 + 1e-12 && std::norm(z) >= 1 - 1e-12;
}

}  // namespace

TEST_CASE("subgroup matrices") {
  CHECK(close_matrix(make_u(0.0), RealMatrix2::identity(), 0));
  CHECK(close_matrix(make_a(2.0) * make_a(0.5), RealMatrix2::identity(), 1e-15));
  CHECK(close_matrix(make_a(3.0) * make_u(1.0) * make_a(1.0 / 3), make_u(9.0), 1e-12));
  const auto v = make_v(0.25);
  CHECK(v.a == 1);
  CHECK(v.b == 0);
  CHECK(v.c == 0.25);
  CHECK(v.d == 1);
  CHECK(code_of([] { make_a(0.0); }) == Errc::NonPositiveDiagonal);
  CHECK(code_of([] { make_a(-1.0); }) == Errc::NonPositiveDiagonal);
  CHECK(code_of([] { make_a(Rational(0)); }) == Errc::NonPositiveDiagonal);

  // exact conjugation identity a_y u_t a_y^{-1} = u_{y^2 t}
  const Rational y(3, 7), t(5, 11);
  CHECK(make_a(y) * make_u(t) * make_a(1 / y) == make_u(y * y * t));
}

TEST_CASE("mobius action") {
  const Complex z(0.3, 1.7);
  CHECK(mobius(RealMatrix2::identity(), z) == z);
  CHECK(near(mobius(IntegerMatrix2{0, -1, 1, 0}, Complex(0, 1)), Complex(0, 1), 1e-15));
  CHECK(near(mobius(IntegerMatrix2{1, 1, 0, 1}, Complex(0, 1)), Complex(1, 1), 1e-15));

  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-3, 3);
  for (int i = 0; i < 1000; ++i) {
    const RealMatrix2 g = make_u(u(rng)) * make_a(std::exp(u(rng))) * make_v(u(rng));
    const Complex w(u(rng), std::exp(u(rng)));
    const Complex img = mobius(g, w);
    REQUIRE(img.imag() > 0);
    // Im(gz) = Im z / |cz + d|^2
    REQUIRE(img.imag() == doctest::Approx(w.imag() / std::norm(g.c * w + g.d)).epsilon(1e-12));
  }
}

TEST_CASE("to_point") {
  const double n = 7, k = 3;
  const auto p = to_point(make_u(k / n) * make_a(std::sqrt(n)).inverse());
  CHECK(near(p.z(), Complex(k / n, 1 / n), 1e-14));
  CHECK(near(to_point(make_a(3.0)).z(), Complex(0, 9), 1e-14));
  const auto id = to_point(RealMatrix2::identity());
  CHECK(near(id.z(), Complex(0, 1), 0));
  CHECK(id.theta() == 0);
  CHECK(code_of([] { to_point(RealMatrix2{2, 0, 0, 2}); }) == Errc::InvalidArgument);
}

TEST_CASE("framed points") {
  CHECK(code_of([] { FramedPoint(Complex(0, 0)); }) == Errc::InvalidArgument);
  CHECK(code_of([] { FramedPoint(Complex(0, -1)); }) == Errc::InvalidArgument);
  for (double theta : {-7.0, -std::numbers::pi, 0.0, 1.0, std::numbers::pi, 10.0}) {
    const FramedPoint p(Complex(0, 1), theta);
    REQUIRE(p.theta() >= 0);
    REQUIRE(p.theta() < std::numbers::pi);
    const double diff = std::remainder(p.theta() - theta, std::numbers::pi);
    REQUIRE(std::abs(diff) < 1e-12);
  }

  // act(gamma, z(g)) = z(gamma g), frame included
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> u(-2, 2);
  std::uniform_int_distribution<i64> e(-30, 30);
  for (int i = 0; i < 2000; ++i) {
    const i64 c = e(rng), d = e(rng);
    if (std::gcd(c, d) != 1) continue;
    const IntegerMatrix2 gamma = complete_bottom_row(c, d);
    const RealMatrix2 g = make_u(u(rng)) * make_a(std::exp(u(rng))) * make_v(u(rng));
    const auto lhs = act(gamma, to_point(g));
    const auto rhs = to_point(gamma.to_real() * g);
    REQUIRE(near(lhs.z(), rhs.z(), 1e-9));
    REQUIRE(std::abs(std::remainder(lhs.theta() - rhs.theta(), std::numbers::pi)) < 1e-8);
  }
}

TEST_CASE("reduce examples") {
  auto r = reduce(FramedPoint(Complex(0.7, 1)));
  CHECK(near(r.point.z(), Complex(-0.3, 1), 1e-15));
  r = reduce(FramedPoint(Complex(0, 0.5)));
  CHECK(near(r.point.z(), Complex(0, 2), 1e-15));
  r = reduce(FramedPoint(Complex(0, 0.25)));
  CHECK(near(r.point.z(), Complex(0, 4), 1e-15));
  CHECK(r.height == doctest::Approx(4));

  // boundary conventions
  r = reduce(FramedPoint(Complex(0.5, 2)));
  CHECK(r.point.z().real() == doctest::Approx(-0.5));
  r = reduce(FramedPoint(Complex(std::cos(1.2), std::sin(1.2))));
  CHECK(r.point.z().real() <= 0);
  CHECK(std::abs(r.point.z()) == doctest::Approx(1));

  CHECK(code_of([] { reduce(FramedPoint(Complex(0, 1e-320))); }) == Errc::NumericalDegeneracy);
}

TEST_CASE("reduce round trip against exact arithmetic") {
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> re(-5, 5), lg(-8, 8);
  for (int i = 0; i < 100'000; ++i) {
    const Complex z(re(rng), std::pow(10.0, lg(rng)));
    const auto r = reduce(FramedPoint(z));
    REQUIRE(r.reducer.det() == 1);
    REQUIRE(in_closed_domain(r.point.z()));
    const auto [ex, ey] = exact_mobius(r.reducer, z);
    const Complex exact(static_cast<double>(ex), static_cast<double>(ey));
    REQUIRE(near(r.point.z(), exact, 1e-9));
    REQUIRE(r.height == r.point.z().imag());
  }
}

TEST_CASE("reduce is idempotent") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> re(-0.49, 0.49), im(1.01, 50);
  for (int i = 0; i < 10'000; ++i) {
    const Complex z(re(rng), im(rng));
    const auto r = reduce(FramedPoint(z));
    REQUIRE(r.reducer == IntegerMatrix2::identity());
    REQUIRE(r.point.z() == z);
    const auto again = reduce(r.point);
    REQUIRE(again.point.z() == r.point.z());
  }
  // on the boundary the pinned representative is a fixed point
  std::uniform_real_distribution<double> ang(std::numbers::pi / 3, 2 * std::numbers::pi / 3);
  for (int i = 0; i < 1000; ++i) {
    const double t = ang(rng);
    const auto r = reduce(FramedPoint(Complex(std::cos(t), std::sin(t))));
    const auto again = reduce(r.point);
    REQUIRE(near(again.point.z(), r.point.z(), 1e-12));
  }
}

TEST_CASE("invariant height") {
  CHECK(invariant_height(to_point(make_a(3.0))) == doctest::Approx(9));
  CHECK(invariant_height(FramedPoint(Complex(0, 1))) == doctest::Approx(1));
  CHECK(invariant_height(to_point(make_u(0.5) * make_a(2.0).inverse())) == doctest::Approx(1));

  std::mt19937_64 rng(11);
  std::uniform_int_distribution<i64> e(-50, 50);
  std::uniform_real_distribution<double> re(-1, 1), lg(-2, 1);
  int tested = 0;
  while (tested < 20'000) {
    const i64 c = e(rng), d = e(rng);
    if (std::gcd(c, d) != 1) continue;
    IntegerMatrix2 g = complete_bottom_row(c, d);
    // move a, b into range with a shift by the bottom row
    if (g.c != 0) {
      const i64 t = g.a / g.c;
      g = IntegerMatrix2{g.a - t * g.c, g.b - t * g.d, g.c, g.d};
    }
    if (std::abs(g.a) > 50 || std::abs(g.b) > 50) continue;
    REQUIRE(g.det() == 1);
    const Complex z(re(rng), std::pow(10.0, lg(rng)));
    const double h = invariant_height(FramedPoint(z));
    REQUIRE(invariant_height(act(g, FramedPoint(z))) == doctest::Approx(h).epsilon(1e-9));
    ++tested;
  }
}

TEST_CASE("reduce_rational against a brute-force maximum") {
  // height = max over coprime (c, d) of y / ((c x + d)^2 + c^2 y^2)
  std::mt19937_64 rng(13);
  for (int i = 0; i < 3000; ++i) {
    const u64 den = rng() % 997 + 1;
    const i64 num = static_cast<i64>(rng() % (3 * den)) - static_cast<i64>(den);
    const double y = std::pow(10.0, -3.0 * static_cast<double>(rng() % 1000) / 1000.0);
    const i64 cmax = static_cast<i64>(std::ceil(std::sqrt(2.0 / y))) + 1;
    double best = 0;
    for (i64 c = 0; c <= cmax; ++c) {
      const double x = static_cast<double>(num) / static_cast<double>(den);
      const i64 d0 = static_cast<i64>(std::floor(-c * x));
      for (i64 d = d0 - 2; d <= d0 + 3; ++d) {
        if (c == 0 && d != 1) continue;
        if (std::gcd(c, d) != 1) continue;
        const double lin = static_cast<double>(c * num + d * static_cast<i64>(den)) / static_cast<double>(den);
        best = std::max(best, y / (lin * lin + static_cast<double>(c * c) * y * y));
      }
    }
    const auto r = reduce_rational(num, den, y);
    REQUIRE(r.height == doctest::Approx(best).epsilon(1e-12));
    REQUIRE(horocycle_height(num, den, y) == doctest::Approx(best).epsilon(1e-12));
    REQUIRE(in_closed_domain(r.point.z()));
  }
}

TEST_CASE("reduce_rational keeps precision where reduce cannot") {
  // z = k/n + i/n^2 reduces to height exactly 1 / (n^2 y) = 1 at the cusp k/n
  const u64 n = 99'999'989;
  const double y = 1.0 / (static_cast<double>(n) * static_cast<double>(n));
  const auto r = reduce_rational(12'345'678, n, y);
  CHECK(r.height == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("adjoint height") {
  CHECK(adjoint_height(RealMatrix2::identity(), 4) == doctest::Approx(1));
  CHECK(adjoint_height(make_a(3.0), default_height_bound(make_a(3.0))) == doctest::Approx(9));
  for (double y : {2.0, 3.0, 10.0}) {
    const auto g = make_a(y);
    CHECK(adjoint_height(g, default_height_bound(g)) == doctest::Approx(y * y).epsilon(1e-9));
    CHECK(invariant_height(to_point(g)) == doctest::Approx(y * y).epsilon(1e-9));
  }
  std::mt19937_64 rng(17);
  // Ad(gamma) moves the minimizing vector to larger coefficients, so gamma is
  // kept small and the bound generous.
  std::uniform_int_distribution<i64> e(-2, 2);
  std::uniform_real_distribution<double> u(-1, 1);
  for (int i = 0; i < 100; ++i) {
    const i64 c = e(rng), d = e(rng);
    if (std::gcd(c, d) != 1) continue;
    const auto gamma = complete_bottom_row(c, d);
    const RealMatrix2 g = make_u(u(rng)) * make_a(std::exp(u(rng)));
    const u64 bound = 60;
    REQUIRE(adjoint_height(gamma.to_real() * g, bound) == doctest::Approx(adjoint_height(g, bound)).epsilon(1e-9));
  }
  CHECK(code_of([] { adjoint_height(RealMatrix2::identity(), 0); }) == Errc::InvalidArgument);
}

TEST_CASE("integer matrices") {
  std::mt19937_64 rng(19);
  for (int i = 0; i < 10'000; ++i) {
    const i64 c = static_cast<i64>(rng() % 2'000'000'000) - 1'000'000'000;
    const i64 d = static_cast<i64>(rng() % 2'000'000'000) - 1'000'000'000;
    if (std::gcd(c, d) != 1) continue;
    const auto g = complete_bottom_row(c, d);
    REQUIRE(g.c == c);
    REQUIRE(g.d == d);
    REQUIRE(g.det() == 1);
  }
  CHECK(code_of([] { complete_bottom_row(4, 6); }) == Errc::NotCoprime);

  const IntegerMatrix2 big{3'000'000'000, 1, 2'999'999'999, 1};
  CHECK(big.det() == 1);
  CHECK(code_of([&] { return big * big * big; }) == Errc::Overflow);
  CHECK(big * big.inverse() == IntegerMatrix2::identity());

  // a long product of near-identity real matrices stays in SL2(R)
  RealMatrix2 acc;
  std::uniform_real_distribution<double> u(-1e-3, 1e-3);
  for (int i = 0; i < 1000; ++i) acc = acc * make_u(u(rng)) * make_a(1 + u(rng)) * make_v(u(rng));
  CHECK(acc.det() == doctest::Approx(1).epsilon(1e-12));
}

TEST_CASE("intersection witness") {
  CHECK(intersection_witness(2, 5) == IntegerMatrix2{5, -2, 3, -1});
  CHECK(intersection_witness(1, 2) == IntegerMatrix2{2, -1, 1, 0});
  CHECK(code_of([] { intersection_witness(2, 4); }) == Errc::NotCoprime);

  // gamma u_{k/n} a_n^{-1} = v_{kbar/n}, checked entrywise with exact rationals
  for (u64 n = 1; n <= 1000; ++n) {
    for (u64 k = 0; k < n; ++k) {
      if (std::gcd(k, n) != 1) continue;
      const auto g = intersection_witness(static_cast<i64>(k), n);
      REQUIRE(g.det() == 1);
      const Rational kn(static_cast<i64>(k), static_cast<i64>(n));
      const Rational inv_n(1, static_cast<i64>(n));
      const Rational N(static_cast<i64>(n));
      // u a^{-1} = (1/n, k; 0, n)
      const Rational p11 = Rational(g.a) * inv_n;
      const Rational p12 = Rational(g.a) * kn * N + Rational(g.b) * N;
      const Rational p21 = Rational(g.c) * inv_n;
      const Rational p22 = Rational(g.c) * kn * N + Rational(g.d) * N;
      REQUIRE(p11 == 1);
      REQUIRE(p12 == 0);
      REQUIRE(p22 == 1);
      // the lower-left entry is kbar / n with kbar the canonical inverse
      REQUIRE(p21 * N == Rational(g.c));
      REQUIRE(g.c >= 0);
      REQUIRE(static_cast<u64>(g.c) < std::max<u64>(n, 1));
      REQUIRE(static_cast<u64>(g.c) * k % n == 1 % n);
      REQUIRE(verify_intersection(g, static_cast<i64>(k), n));
    }
  }
}
