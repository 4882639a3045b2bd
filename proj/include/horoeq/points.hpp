#pragma once

// Rational point sets on expanding horocycles and the multiplicative actions
// that preserve them.

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "horoeq/arith.hpp"
#include "horoeq/sl2.hpp"

namespace horoeq::points {

using u64 = std::uint64_t;
using i64 = std::int64_t;

enum class Family {
  Full,      // k/n + i n^{-2 alpha}, all k (or units when primitive)
  Monomial,  // (a k^d / n, Gamma u_{b k^d / n} a_{n^alpha}^{-1})
  Triple,    // (a k^d / n, b inv(k^d) / n, Gamma u_{c k^d / n} a_{sqrt n}^{-1})
};

const char* family_name(Family f);

struct PointSetSpec {
  Family family = Family::Monomial;
  u64 n = 1;
  Rational alpha{1, 2};
  u64 d = 1;
  i64 a = 1, b = 1, c = 1;
  bool primitive = true;
  // Triples are only defined at alpha = 1/2; exploration runs may lift that.
  bool alpha_override = false;

  // Throws InvalidArgument / NotCoprime.
  void validate() const;
};

struct HorocycleSample {
  u64 n = 1;
  u64 k = 0;        // smallest representative producing this point
  u64 residue = 0;  // k^d mod n, the dedup key
  u64 t_num = 0;    // torus1 = t_num / n
  std::optional<u64> s_num;  // torus2 = s_num / n
  u64 x_num = 0;    // Re z = x_num / n
  double y = 1.0;   // Im z = n^{-2 alpha}

  Rational torus1() const { return Rational(BigInt(t_num), BigInt(n)); }
  std::optional<Rational> torus2() const;
  sl2::FramedPoint xpoint() const { return sl2::FramedPoint(sl2::Complex(static_cast<double>(x_num) / static_cast<double>(n), y)); }
  sl2::ReducedPoint reduced() const { return sl2::reduce_rational(static_cast<i64>(x_num), n, y); }
  double height() const { return reduced().height; }

  friend bool operator==(const HorocycleSample&, const HorocycleSample&) = default;
};

// n^{-2 alpha} through exp/log.
double horocycle_im(u64 n, const Rational& alpha);

std::vector<HorocycleSample> gen_full(u64 n, const Rational& alpha, bool primitive = false);
std::vector<HorocycleSample> gen_monomial(const PointSetSpec& spec);
std::vector<HorocycleSample> gen_triple(const PointSetSpec& spec);
std::vector<HorocycleSample> generate(const PointSetSpec& spec);

// Rebuilds a sample of `spec` from a representative k and residue k^d.
HorocycleSample make_sample(const PointSetSpec& spec, u64 k, u64 residue);

// x-coordinate scaling by p^{+-2d} (k -> p^{+-2} k, so k^d -> p^{+-2d} k^d).
HorocycleSample apply_M(const PointSetSpec& spec, const HorocycleSample& s, u64 p, int sign);
// (t, s, x) -> (p^{2d} t, p^{-2d} s, x a_{p^d}^{-1}).
HorocycleSample apply_T(const PointSetSpec& spec, const HorocycleSample& s, u64 p);

bool verify_invariance(const PointSetSpec& spec, u64 p);

using RationalPair = std::pair<Rational, Rational>;

struct LevelProjection {
  std::vector<u64> finite_places;
  std::vector<unsigned> l, m;
  std::vector<RationalPair> pairs;  // sorted, unique
};

// The projected set {(S^{l v m} k/n mod S^l, S^{l v m} k/n mod S^m)}.
std::vector<RationalPair> projection_stated(u64 n, const std::vector<u64>& places, const std::vector<unsigned>& l,
                                            const std::vector<unsigned>& m);
// Projection of each Delta(k/n) obtained by moving k/n by an integer r that is
// S^{l v m}-adically close to it, then reducing mod S^l and S^m.
std::vector<RationalPair> projection_direct(u64 n, const std::vector<u64>& places, const std::vector<unsigned>& l,
                                            const std::vector<unsigned>& m);
// Computes both and throws InvariantViolation if they differ.
LevelProjection project_level(u64 n, const std::vector<u64>& places, const std::vector<unsigned>& l,
                              const std::vector<unsigned>& m);

// x mod m in [0, m) for rational x and positive integer m.
Rational mod_rational(const Rational& x, const BigInt& m);

}  // namespace horoeq::points
