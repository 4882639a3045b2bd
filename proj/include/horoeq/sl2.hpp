#pragma once

// SL2(R) / SL2(Z) geometry on the upper half-plane.
//
// A coset Gamma g is represented by the framed point z(g) = g.i together with
// the Iwasawa rotation angle of g, so that z(gamma g) = gamma . z(g).

#include <complex>
#include <cstdint>

#include "horoeq/arith.hpp"

namespace horoeq::sl2 {

using Complex = std::complex<double>;
using i64 = std::int64_t;
using u64 = std::uint64_t;

struct RealMatrix2 {
  double a = 1, b = 0, c = 0, d = 1;

  static RealMatrix2 identity() { return {}; }
  double det() const { return a * d - b * c; }
  RealMatrix2 inverse() const;  // assumes det 1
  friend RealMatrix2 operator*(const RealMatrix2& x, const RealMatrix2& y);
};

struct IntegerMatrix2 {
  i64 a = 1, b = 0, c = 0, d = 1;

  static IntegerMatrix2 identity() { return {}; }
  // Throws Overflow if the exact determinant does not fit.
  __int128 det() const { return static_cast<__int128>(a) * d - static_cast<__int128>(b) * c; }
  IntegerMatrix2 inverse() const { return {d, -b, -c, a}; }
  RealMatrix2 to_real() const;
  // Checked product; throws Overflow.
  friend IntegerMatrix2 operator*(const IntegerMatrix2& x, const IntegerMatrix2& y);
  friend bool operator==(const IntegerMatrix2&, const IntegerMatrix2&) = default;
};

struct RationalMatrix2 {
  Rational a{1}, b{0}, c{0}, d{1};

  static RationalMatrix2 from(const IntegerMatrix2& m);
  friend RationalMatrix2 operator*(const RationalMatrix2& x, const RationalMatrix2& y);
  friend bool operator==(const RationalMatrix2&, const RationalMatrix2&) = default;
};

RealMatrix2 make_u(double t);
RealMatrix2 make_a(double y);
RealMatrix2 make_v(double s);

RationalMatrix2 make_u(const Rational& t);
RationalMatrix2 make_a(const Rational& y);
RationalMatrix2 make_v(const Rational& s);

Complex mobius(const RealMatrix2& g, Complex z);
Complex mobius(const IntegerMatrix2& g, Complex z);

// Point of the unit tangent bundle mod +-I: theta lives in [0, pi).
class FramedPoint {
 public:
  explicit FramedPoint(Complex z, double theta = 0.0);

  Complex z() const noexcept { return z_; }
  double theta() const noexcept { return theta_; }

 private:
  Complex z_;
  double theta_;
};

// Left action of an integral matrix on a framed point.
FramedPoint act(const IntegerMatrix2& gamma, const FramedPoint& p);

FramedPoint to_point(const RealMatrix2& g);

struct ReducedPoint {
  FramedPoint point;        // in the closed fundamental domain
  IntegerMatrix2 reducer;   // reducer . original = point
  double height;            // Im of the reduced representative
};

// Gauss reduction into |Re z| <= 1/2, |z| >= 1, with the boundary pinned to
// Re z <= 0 on the unit circle and Re z = -1/2 on the vertical sides.
ReducedPoint reduce(const FramedPoint& p);

// Reduction of z = num/den + i y. The real part enters only through the
// exact integers c*num + d*den, so heights of rational horocycle points do
// not suffer from cancellation in c x + d.
ReducedPoint reduce_rational(i64 num, u64 den, double y);

double invariant_height(const FramedPoint& p);
double horocycle_height(i64 num, u64 den, double y);

// sup over nonzero integral combinations v = xH + yX + zY with
// |x|,|y|,|z| <= bound of 1 / ||Ad(g^{-1}) v||_inf.
double adjoint_height(const RealMatrix2& g, u64 bound);
u64 default_height_bound(const RealMatrix2& g);

// Integral matrix with the given coprime bottom row and determinant 1.
IntegerMatrix2 complete_bottom_row(i64 c, i64 d);

// gamma with gamma u_{k/n} a_n^{-1} = v_{kbar/n}.
IntegerMatrix2 intersection_witness(i64 k, u64 n);
bool verify_intersection(const IntegerMatrix2& gamma, i64 k, u64 n);

}  // namespace horoeq::sl2
