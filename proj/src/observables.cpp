#include "horoeq/observables.hpp"

#include <cmath>
#include <numbers>
#include <optional>
#include <sstream>

#include <boost/math/quadrature/gauss_kronrod.hpp>

namespace horoeq::observables {

namespace {

enum Usage : unsigned { kTorus1 = 1, kTorus2 = 2, kSurface = 4 };

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

unsigned usage(const Observable& obs) {
  return std::visit(overloaded{
                        [](const Constant&) -> unsigned { return 0; },
                        [](const TorusChar&) -> unsigned { return kTorus1; },
                        [](const TwoTorusChar&) -> unsigned { return kTorus1 | kTorus2; },
                        [](const AutomorphicKernel&) -> unsigned { return kSurface; },
                        [](const HeightBand&) -> unsigned { return kSurface; },
                        [](const Product& p) -> unsigned {
                          unsigned u = 0;
                          for (const auto& f : p.factors) u |= usage(f);
                          return u;
                        },
                    },
                    obs.kind);
}

std::string fmt_double(double x) {
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  std::ostringstream os;
  os.precision(12);
  os << x;
  return os.str();
}

void validate_kernel(const AutomorphicKernel& k) {
  if (!(k.radius > 0)) throw Error(Errc::InvalidArgument, "kernel radius must be positive");
  if (k.radius > kMaxKernelRadius) {
    throw Error(Errc::RadiusTooLarge, "kernel radius " + fmt_double(k.radius) + " exceeds " +
                                          fmt_double(kMaxKernelRadius));
  }
  if (!(k.center.imag() > 0)) throw Error(Errc::InvalidArgument, "kernel center must lie in the upper half-plane");
}

// Contribution of one orbit point to the kernel sum.
double orbit_term(const AutomorphicKernel& k, Complex p) {
  const double r = hyperbolic_distance(p, k.center);
  return r <= k.radius ? profile_value(k.profile, r, k.radius) : 0.0;
}

double kernel_at_reduced(const AutomorphicKernel& k, Complex z0, double scale) {
  const double x0 = z0.real(), y0 = z0.imag();
  const double yw = k.center.imag(), xw = k.center.real();
  const double cosh_r = std::cosh(k.radius);
  // d(gz, w) <= R forces Im gz >= yw e^{-R}, i.e. |cz + d|^2 <= y0 e^R / yw.
  const double q_max = scale * y0 * std::exp(k.radius) / yw;
  const auto c_max = static_cast<i64>(std::floor(std::sqrt(q_max) / y0));

  double total = 0.0;
  auto visit_coset = [&](i64 c, i64 d) {
    const sl2::IntegerMatrix2 g = sl2::complete_bottom_row(c, d);
    const Complex p = sl2::mobius(g, z0);
    // |Re(p + j) - Re w|^2 <= 2 Im p Im w (cosh R - 1).
    const double half = std::sqrt(scale * 2.0 * p.imag() * yw * (cosh_r - 1.0));
    const auto j_lo = static_cast<i64>(std::floor(xw - p.real() - half));
    const auto j_hi = static_cast<i64>(std::ceil(xw - p.real() + half));
    for (i64 j = j_lo; j <= j_hi; ++j) total += orbit_term(k, p + static_cast<double>(j));
  };

  visit_coset(0, 1);
  for (i64 c = 1; c <= c_max; ++c) {
    const double rest = q_max - static_cast<double>(c) * c * y0 * y0;
    if (rest < 0) break;
    const double s = std::sqrt(rest);
    const auto d_lo = static_cast<i64>(std::floor(-c * x0 - s));
    const auto d_hi = static_cast<i64>(std::ceil(-c * x0 + s));
    for (i64 d = d_lo; d <= d_hi; ++d) {
      if (arith::gcd(static_cast<std::uint64_t>(c), static_cast<std::uint64_t>(d < 0 ? -d : d)) != 1) continue;
      visit_coset(c, d);
    }
  }
  return total;
}

Complex eval_impl(const Observable& obs, const points::HorocycleSample& s, std::optional<sl2::ReducedPoint>& cache) {
  auto reduced = [&]() -> const sl2::ReducedPoint& {
    if (!cache) cache = s.reduced();
    return *cache;
  };
  return std::visit(
      overloaded{
          [](const Constant& c) { return Complex(c.value, 0.0); },
          [&](const TorusChar& t) {
            return arith::unit_phase(
                static_cast<i64>(arith::mul_mod(arith::mod(t.m, s.n), s.t_num, s.n)), s.n);
          },
          [&](const TwoTorusChar& t) {
            if (!s.s_num) throw Error(Errc::InvalidArgument, "sample has no second torus coordinate");
            const std::uint64_t j = (arith::mul_mod(arith::mod(t.m1, s.n), s.t_num, s.n) +
                                     arith::mul_mod(arith::mod(t.m2, s.n), *s.s_num, s.n)) % s.n;
            return arith::unit_phase(static_cast<i64>(j), s.n);
          },
          [&](const AutomorphicKernel& k) {
            validate_kernel(k);
            return Complex(kernel_at_reduced(k, reduced().point.z(), 1.0), 0.0);
          },
          [&](const HeightBand& b) {
            const double h = reduced().height;
            return Complex(h > b.lower && h <= b.upper ? 1.0 : 0.0, 0.0);
          },
          [&](const Product& p) {
            Complex acc(1.0, 0.0);
            for (const auto& f : p.factors) acc *= eval_impl(f, s, cache);
            return acc;
          },
      },
      obs.kind);
}

double smooth_radial_integral(double radius) {
  auto f = [radius](double r) { return profile_value(Profile::SmoothBump, r, radius) * std::sinh(r); };
  double err = 0.0;
  return boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, 0.0, radius, 15, 1e-14, &err);
}

}  // namespace

void Observable::validate() const {
  std::visit(overloaded{
                 [](const Constant&) {},
                 [](const TorusChar&) {},
                 [](const TwoTorusChar&) {},
                 [](const AutomorphicKernel& k) { validate_kernel(k); },
                 [](const HeightBand& b) {
                   if (!(b.lower >= 1.0)) throw Error(Errc::InvalidArgument, "height band needs T1 >= 1");
                   if (!(b.upper > b.lower)) throw Error(Errc::InvalidArgument, "height band needs T1 < T2");
                 },
                 [](const Product& p) {
                   if (p.factors.empty()) throw Error(Errc::InvalidArgument, "empty product");
                   unsigned seen = 0;
                   for (const auto& f : p.factors) {
                     f.validate();
                     const unsigned u = usage(f);
                     if (seen & u) throw Error(Errc::InvalidArgument, "product factors must act on disjoint coordinates");
                     seen |= u;
                   }
                 },
             },
             kind);
}

std::string Observable::describe() const {
  return std::visit(overloaded{
                        [](const Constant& c) { return "const(" + fmt_double(c.value) + ")"; },
                        [](const TorusChar& t) { return "torus(" + std::to_string(t.m) + ")"; },
                        [](const TwoTorusChar& t) {
                          return "torus2(" + std::to_string(t.m1) + "," + std::to_string(t.m2) + ")";
                        },
                        [](const AutomorphicKernel& k) {
                          std::string s = "kernel(R=" + fmt_double(k.radius) + "," +
                                          (k.profile == Profile::Indicator ? "indicator" : "smooth");
                          if (k.center != Complex(0.0, 1.0)) {
                            s += ",center=" + fmt_double(k.center.real()) + "+" + fmt_double(k.center.imag()) + "i";
                          }
                          return s + ")";
                        },
                        [](const HeightBand& b) {
                          return "band(" + fmt_double(b.lower) + "," + fmt_double(b.upper) + ")";
                        },
                        [](const Product& p) {
                          std::string s;
                          for (std::size_t i = 0; i < p.factors.size(); ++i) {
                            if (i) s += "*";
                            s += p.factors[i].describe();
                          }
                          return s;
                        },
                    },
                    kind);
}

double profile_value(Profile profile, double r, double radius) {
  if (r > radius) return 0.0;
  if (profile == Profile::Indicator) return 1.0;
  const double u = r / radius;
  const double w = 1.0 - u * u;
  return w * w;
}

double hyperbolic_distance(Complex z, Complex w) {
  // 2 asinh(|z - w| / (2 sqrt(Im z Im w))) is accurate for nearby points.
  return 2.0 * std::asinh(std::abs(z - w) / (2.0 * std::sqrt(z.imag() * w.imag())));
}

double kernel_value(const AutomorphicKernel& k, Complex z, double search_scale) {
  validate_kernel(k);
  if (!(search_scale >= 1.0)) throw Error(Errc::InvalidArgument, "search scale must be >= 1");
  const sl2::ReducedPoint r = sl2::reduce(sl2::FramedPoint(z));
  return kernel_at_reduced(k, r.point.z(), search_scale);
}

Complex eval(const Observable& obs, const points::HorocycleSample& sample) {
  std::optional<sl2::ReducedPoint> cache;
  return eval_impl(obs, sample, cache);
}

HaarTarget haar_expectation(const Observable& obs) {
  return std::visit(
      overloaded{
          [](const Constant& c) { return HaarTarget{c.value, Provenance::Exact, 0.0}; },
          [](const TorusChar& t) { return HaarTarget{t.m == 0 ? 1.0 : 0.0, Provenance::Exact, 0.0}; },
          [](const TwoTorusChar& t) {
            return HaarTarget{t.m1 == 0 && t.m2 == 0 ? 1.0 : 0.0, Provenance::Exact, 0.0};
          },
          [](const AutomorphicKernel& k) {
            validate_kernel(k);
            // Unfolding: (3/pi) * 2 pi * int_0^R k(r) sinh r dr.
            if (k.profile == Profile::Indicator) {
              return HaarTarget{6.0 * (std::cosh(k.radius) - 1.0), Provenance::Exact, 0.0};
            }
            return HaarTarget{6.0 * smooth_radial_integral(k.radius), Provenance::NumericOracle, 1e-10};
          },
          [](const HeightBand& b) {
            const double upper = std::isinf(b.upper) ? 0.0 : 1.0 / b.upper;
            return HaarTarget{3.0 / std::numbers::pi * (1.0 / b.lower - upper), Provenance::Exact, 0.0};
          },
          [](const Product& p) {
            HaarTarget out{1.0, Provenance::Exact, 0.0};
            for (const auto& f : p.factors) {
              const HaarTarget h = haar_expectation(f);
              out.tolerance = out.tolerance * std::abs(h.value) + h.tolerance * std::abs(out.value);
              out.value *= h.value;
              if (h.provenance == Provenance::NumericOracle) out.provenance = Provenance::NumericOracle;
            }
            return out;
          },
      },
      obs.kind);
}

double sobolev_norm_torus(const std::map<i64, Complex>& coefficients, unsigned D, double period) {
  if (!(period > 0)) throw Error(Errc::InvalidArgument, "period must be positive");
  double acc = 0.0;
  for (const auto& [m, alpha] : coefficients) {
    acc += std::norm(alpha) * std::pow(1.0 + std::abs(static_cast<double>(m) / period), 2.0 * D);
  }
  return std::sqrt(acc);
}

}  // namespace horoeq::observables
