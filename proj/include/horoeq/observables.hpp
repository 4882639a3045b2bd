#pragma once

// Test functions on T, T^2 and the modular surface with known Haar means.

#include <complex>
#include <cstdint>
#include <limits>
#include <map>
#include <string>
#include <variant>
#include <vector>

#include "horoeq/points.hpp"
#include "horoeq/sl2.hpp"

namespace horoeq::observables {

using i64 = std::int64_t;
using Complex = std::complex<double>;

inline constexpr double kMaxKernelRadius = 3.0;

enum class Profile { Indicator, SmoothBump };

struct Constant {
  double value = 1.0;
};

// e(m t) on the first torus coordinate.
struct TorusChar {
  i64 m = 0;
};

// e(m1 t + m2 s) on both torus coordinates.
struct TwoTorusChar {
  i64 m1 = 0, m2 = 0;
};

// Point-pair invariant sum_{gamma in PSL2(Z)} k(dist(gamma z, center)).
struct AutomorphicKernel {
  double radius = 1.0;
  Profile profile = Profile::SmoothBump;
  Complex center{0.0, 1.0};
};

// Indicator of invariant height in (lower, upper].
struct HeightBand {
  double lower = 1.0;
  double upper = std::numeric_limits<double>::infinity();
};

struct Observable;

struct Product {
  std::vector<Observable> factors;
};

struct Observable {
  std::variant<Constant, TorusChar, TwoTorusChar, AutomorphicKernel, HeightBand, Product> kind;

  // Throws RadiusTooLarge / InvalidArgument for malformed parameters or
  // product factors that share a coordinate.
  void validate() const;
  std::string describe() const;
};

enum class Provenance { Exact, NumericOracle };

struct HaarTarget {
  double value = 0.0;
  Provenance provenance = Provenance::Exact;
  double tolerance = 0.0;
};

double profile_value(Profile profile, double r, double radius);
double hyperbolic_distance(Complex z, Complex w);

// Kernel sum at z. `search_scale` >= 1 widens the enumeration window past
// the certified bound; values must not depend on it.
double kernel_value(const AutomorphicKernel& k, Complex z, double search_scale = 1.0);

Complex eval(const Observable& obs, const points::HorocycleSample& sample);

HaarTarget haar_expectation(const Observable& obs);

// (sum |alpha_m|^2 (1 + |m / R|)^{2D})^{1/2}.
double sobolev_norm_torus(const std::map<i64, Complex>& coefficients, unsigned D, double period);

}  // namespace horoeq::observables
