#include "horoeq/sl2.hpp"

#include <cfloat>
#include <cmath>
#include <limits>
#include <numbers>

namespace horoeq::sl2 {

namespace {

constexpr double kBoundaryTol = 1e-12;
constexpr int kMaxSteps = 10'000;

i64 checked_mul(i64 x, i64 y) {
  i64 r;
  if (__builtin_mul_overflow(x, y, &r)) throw Error(Errc::Overflow, "integer matrix entry overflow");
  return r;
}

i64 checked_add(i64 x, i64 y) {
  i64 r;
  if (__builtin_add_overflow(x, y, &r)) throw Error(Errc::Overflow, "integer matrix entry overflow");
  return r;
}

double canonical_angle(double theta) {
  double t = std::fmod(theta, std::numbers::pi);
  if (t < 0) t += std::numbers::pi;
  if (t >= std::numbers::pi) t -= std::numbers::pi;
  return t;
}

IntegerMatrix2 translation(i64 m) { return {1, m, 0, 1}; }
constexpr IntegerMatrix2 kInversion{0, -1, 1, 0};

bool in_domain(Complex z) {
  return std::abs(z.real()) <= 0.5 + kBoundaryTol && std::norm(z) >= 1.0 - kBoundaryTol;
}

// Brings a point already inside (or numerically on the edge of) the closed
// fundamental domain to its canonical boundary representative.
IntegerMatrix2 pin_boundary(Complex& z) {
  IntegerMatrix2 g;
  if (std::abs(z.real() - 0.5) <= kBoundaryTol) {
    z -= 1.0;
    g = translation(-1) * g;
  }
  if (std::abs(std::norm(z) - 1.0) <= kBoundaryTol && z.real() > kBoundaryTol) {
    z = -1.0 / z;
    g = kInversion * g;
  }
  return g;
}

}  // namespace

IntegerMatrix2 complete_bottom_row(i64 c, i64 d) {
  // Extended Euclid on (d, c): s d + t c = 1 gives (a, b) = (s, -t).
  __int128 old_r = d, r = c, old_s = 1, s = 0, old_t = 0, t = 1;
  while (r != 0) {
    const __int128 q = old_r / r;
    __int128 tmp = old_r - q * r;
    old_r = r;
    r = tmp;
    tmp = old_s - q * s;
    old_s = s;
    s = tmp;
    tmp = old_t - q * t;
    old_t = t;
    t = tmp;
  }
  // old_s d + old_t c = old_r = +-1.
  if (old_r < 0) {
    old_r = -old_r;
    old_s = -old_s;
    old_t = -old_t;
  }
  if (old_r != 1) throw Error(Errc::NotCoprime, "bottom row is not primitive");
  return {static_cast<i64>(old_s), static_cast<i64>(-old_t), c, d};
}

RealMatrix2 RealMatrix2::inverse() const { return {d, -b, -c, a}; }

RealMatrix2 operator*(const RealMatrix2& x, const RealMatrix2& y) {
  return {x.a * y.a + x.b * y.c, x.a * y.b + x.b * y.d, x.c * y.a + x.d * y.c, x.c * y.b + x.d * y.d};
}

RealMatrix2 IntegerMatrix2::to_real() const {
  return {static_cast<double>(a), static_cast<double>(b), static_cast<double>(c), static_cast<double>(d)};
}

IntegerMatrix2 operator*(const IntegerMatrix2& x, const IntegerMatrix2& y) {
  return {checked_add(checked_mul(x.a, y.a), checked_mul(x.b, y.c)),
          checked_add(checked_mul(x.a, y.b), checked_mul(x.b, y.d)),
          checked_add(checked_mul(x.c, y.a), checked_mul(x.d, y.c)),
          checked_add(checked_mul(x.c, y.b), checked_mul(x.d, y.d))};
}

RationalMatrix2 RationalMatrix2::from(const IntegerMatrix2& m) {
  return {Rational(m.a), Rational(m.b), Rational(m.c), Rational(m.d)};
}

RationalMatrix2 operator*(const RationalMatrix2& x, const RationalMatrix2& y) {
  return {x.a * y.a + x.b * y.c, x.a * y.b + x.b * y.d, x.c * y.a + x.d * y.c, x.c * y.b + x.d * y.d};
}

RealMatrix2 make_u(double t) { return {1, t, 0, 1}; }

RealMatrix2 make_a(double y) {
  if (!(y > 0)) throw Error(Errc::NonPositiveDiagonal, "a_y needs y > 0");
  return {y, 0, 0, 1.0 / y};
}

RealMatrix2 make_v(double s) { return {1, 0, s, 1}; }

RationalMatrix2 make_u(const Rational& t) { return {Rational(1), t, Rational(0), Rational(1)}; }

RationalMatrix2 make_a(const Rational& y) {
  if (y <= 0) throw Error(Errc::NonPositiveDiagonal, "a_y needs y > 0");
  return {y, Rational(0), Rational(0), Rational(1) / y};
}

RationalMatrix2 make_v(const Rational& s) { return {Rational(1), Rational(0), s, Rational(1)}; }

Complex mobius(const RealMatrix2& g, Complex z) {
  using LC = std::complex<long double>;
  const LC zz(z.real(), z.imag());
  const LC w = (static_cast<long double>(g.a) * zz + static_cast<long double>(g.b)) /
               (static_cast<long double>(g.c) * zz + static_cast<long double>(g.d));
  return {static_cast<double>(w.real()), static_cast<double>(w.imag())};
}

Complex mobius(const IntegerMatrix2& g, Complex z) {
  // Im(gz) = Im z / |cz + d|^2 and Re(gz) = ((ax+b)(cx+d) + ac y^2) / |cz+d|^2.
  const long double x = z.real(), y = z.imag();
  const long double a = g.a, b = g.b, c = g.c, d = g.d;
  const long double cxd = c * x + d;
  const long double axb = a * x + b;
  const long double q = cxd * cxd + c * c * y * y;
  return {static_cast<double>((axb * cxd + a * c * y * y) / q), static_cast<double>(y / q)};
}

FramedPoint::FramedPoint(Complex z, double theta) : z_(z), theta_(canonical_angle(theta)) {
  if (!(z.imag() > 0) || !std::isfinite(z.real()) || !std::isfinite(z.imag())) {
    throw Error(Errc::InvalidArgument, "framed point needs finite z with Im z > 0");
  }
}

FramedPoint act(const IntegerMatrix2& gamma, const FramedPoint& p) {
  const Complex z = p.z();
  const Complex j = static_cast<double>(gamma.c) * z + static_cast<double>(gamma.d);
  return FramedPoint(mobius(gamma, z), p.theta() + std::arg(j));
}

FramedPoint to_point(const RealMatrix2& g) {
  if (std::abs(g.det() - 1.0) > 1e-9) throw Error(Errc::InvalidArgument, "matrix is not in SL2(R)");
  // g = n_x a k_theta, bottom row of g is (sin theta, cos theta) / s.
  return FramedPoint(mobius(g, Complex(0, 1)), std::atan2(g.c, g.d));
}

ReducedPoint reduce(const FramedPoint& p) {
  const Complex z0 = p.z();
  if (!(z0.imag() >= DBL_MIN)) throw Error(Errc::NumericalDegeneracy, "Im z underflows double precision");

  IntegerMatrix2 gamma;
  Complex z = z0;
  for (int step = 0;; ++step) {
    if (step > kMaxSteps) throw Error(Errc::NumericalDegeneracy, "reduction did not terminate");
    const double shift = std::round(z.real());
    if (shift != 0) {
      if (std::abs(shift) > 9e18) throw Error(Errc::Overflow, "translation out of range");
      z -= shift;
      gamma = translation(-static_cast<i64>(shift)) * gamma;
    }
    if (std::norm(z) < 1.0 - kBoundaryTol) {
      z = -1.0 / z;
      gamma = kInversion * gamma;
      if (!(z.imag() > 0) || !std::isfinite(z.imag())) {
        throw Error(Errc::NumericalDegeneracy, "reduction lost precision");
      }
      continue;
    }
    if (std::abs(z.real()) <= 0.5 + kBoundaryTol) {
      // Recompute the representative in one shot from the original point to
      // avoid compounding the per-step rounding.
      const Complex fresh = mobius(gamma, z0);
      if (in_domain(fresh)) {
        z = fresh;
        break;
      }
      z = fresh;
    }
  }
  const IntegerMatrix2 pin = pin_boundary(z);
  gamma = pin * gamma;
  const FramedPoint reduced = act(gamma, p);
  return {FramedPoint(z, reduced.theta()), gamma, z.imag()};
}

ReducedPoint reduce_rational(i64 num, u64 den, double y) {
  if (den == 0) throw Error(Errc::InvalidArgument, "denominator must be >= 1");
  if (!(y >= DBL_MIN) || !std::isfinite(y)) throw Error(Errc::NumericalDegeneracy, "Im z out of range");
  using i128 = __int128;
  const long double den_ld = static_cast<long double>(den);
  const long double yy = static_cast<long double>(y) * y;

  // Lattice vectors are integer pairs (c, d) with squared length
  // Q(c, d) = ((c num + d den) / den)^2 + c^2 y^2 = |c z + d|^2.
  struct Vec {
    i64 c, d;
    i128 p;  // c num + d den
  };
  auto make = [&](i64 c, i64 d) { return Vec{c, d, static_cast<i128>(c) * num + static_cast<i128>(d) * den}; };
  auto dot = [&](const Vec& u, const Vec& v) {
    return static_cast<long double>(u.p) / den_ld * (static_cast<long double>(v.p) / den_ld) +
           static_cast<long double>(u.c) * static_cast<long double>(v.c) * yy;
  };

  Vec e1 = make(0, 1), e2 = make(1, 0);
  if (dot(e2, e2) < dot(e1, e1)) std::swap(e1, e2);
  for (int step = 0; step < kMaxSteps; ++step) {
    const long double mu = std::round(dot(e1, e2) / dot(e1, e1));
    if (mu != 0) {
      if (std::fabs(mu) > 9e18L) throw Error(Errc::Overflow, "lattice coefficient out of range");
      const i64 m = static_cast<i64>(mu);
      e2 = Vec{checked_add(e2.c, -checked_mul(m, e1.c)), checked_add(e2.d, -checked_mul(m, e1.d)), e2.p - m * e1.p};
    }
    if (dot(e2, e2) < dot(e1, e1)) {
      std::swap(e1, e2);
    } else {
      break;
    }
  }

  i64 c = e1.c, d = e1.d;
  if (c < 0 || (c == 0 && d < 0)) {
    c = -c;
    d = -d;
  }
  IntegerMatrix2 gamma = complete_bottom_row(c, d);
  const i128 pa = static_cast<i128>(gamma.a) * num + static_cast<i128>(gamma.b) * den;
  const i128 pc = static_cast<i128>(gamma.c) * num + static_cast<i128>(gamma.d) * den;
  const long double q = static_cast<long double>(pc) / den_ld * (static_cast<long double>(pc) / den_ld) +
                        static_cast<long double>(gamma.c) * gamma.c * yy;
  const long double re = (static_cast<long double>(pa) / den_ld * (static_cast<long double>(pc) / den_ld) +
                          static_cast<long double>(gamma.a) * gamma.c * yy) / q;
  const long double im = static_cast<long double>(y) / q;

  // Finish with the plain algorithm; normally only a translation remains.
  const ReducedPoint polish = reduce(FramedPoint(Complex(static_cast<double>(re), static_cast<double>(im))));
  gamma = polish.reducer * gamma;
  const Complex z0(static_cast<double>(static_cast<long double>(num) / den_ld), y);
  const FramedPoint framed = act(gamma, FramedPoint(z0));
  return {FramedPoint(polish.point.z(), framed.theta()), gamma, polish.height};
}

double invariant_height(const FramedPoint& p) { return reduce(p).height; }

double horocycle_height(i64 num, u64 den, double y) { return reduce_rational(num, den, y).height; }

double adjoint_height(const RealMatrix2& g, u64 bound) {
  if (std::abs(g.det() - 1.0) > 1e-9) throw Error(Errc::InvalidArgument, "matrix is not in SL2(R)");
  if (bound == 0) throw Error(Errc::InvalidArgument, "coefficient bound must be >= 1");
  const RealMatrix2 gi = g.inverse();
  // Ad(g^{-1}) v = g^{-1} v g, linear in the coefficients of H, X, Y.
  auto conj = [&](const RealMatrix2& v) { return gi * v * g; };
  const RealMatrix2 h = conj({-1, 0, 0, 1});
  const RealMatrix2 x = conj({0, 1, 0, 0});
  const RealMatrix2 yv = conj({0, 0, 1, 0});

  const i64 B = static_cast<i64>(bound);
  double best = std::numeric_limits<double>::infinity();
  // v and -v have the same norm: restrict to the first nonzero coefficient > 0.
  for (i64 p = 0; p <= B; ++p) {
    for (i64 q = (p == 0 ? 0 : -B); q <= B; ++q) {
      const double ma = p * h.a + q * x.a, mb = p * h.b + q * x.b;
      const double mc = p * h.c + q * x.c, md = p * h.d + q * x.d;
      for (i64 r = (p == 0 && q == 0 ? 1 : -B); r <= B; ++r) {
        const double n = std::max(std::max(std::abs(ma + r * yv.a), std::abs(mb + r * yv.b)),
                                  std::max(std::abs(mc + r * yv.c), std::abs(md + r * yv.d)));
        if (n < best) best = n;
      }
    }
  }
  return 1.0 / best;
}

u64 default_height_bound(const RealMatrix2& g) {
  const double h = invariant_height(to_point(g));
  return static_cast<u64>(std::ceil(4.0 * (1.0 + h)));
}

IntegerMatrix2 intersection_witness(i64 k, u64 n) {
  if (n == 0) throw Error(Errc::InvalidArgument, "n must be >= 1");
  if (arith::gcd(static_cast<u64>(k < 0 ? -k : k), n) != 1) {
    throw Error(Errc::NotCoprime, std::to_string(k) + " is not a unit mod " + std::to_string(n));
  }
  const i64 kbar = static_cast<i64>(arith::mod_inverse(k, n));
  const __int128 num = 1 - static_cast<__int128>(k) * kbar;
  const i64 nn = static_cast<i64>(n);
  return {nn, -k, kbar, static_cast<i64>(num / nn)};
}

bool verify_intersection(const IntegerMatrix2& gamma, i64 k, u64 n) {
  if (gamma.det() != 1) return false;
  const Rational kn{BigInt(k), BigInt(n)};
  const Rational kbar_n(BigInt(arith::mod_inverse(k, n)), BigInt(n));
  const RationalMatrix2 lhs = RationalMatrix2::from(gamma) * make_u(kn) * make_a(Rational(1) / Rational(BigInt(n)));
  return lhs == make_v(kbar_n);
}

}  // namespace horoeq::sl2
