#pragma once

// Empirical averages over point sets, exponential-sum identities, the
// discrepancy operator at the character level, and decay-rate fitting.

#include <array>
#include <complex>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "horoeq/observables.hpp"
#include "horoeq/points.hpp"

namespace horoeq::stats {

using u64 = std::uint64_t;
using i64 = std::int64_t;
using Complex = std::complex<double>;

Complex empirical_average(std::span<const points::HorocycleSample> samples, const observables::Observable& obs,
                          unsigned threads = 1);

// (1/phi(n)) sum_{(k,n)=1} e((m1 k + m2 kbar) / n), inverses via Euler's theorem.
Complex kloosterman_average(u64 n, i64 m1, i64 m2);

// (1/n) sum_{k<n} e(m k / n) by direct summation.
Complex weyl_sum_full(u64 n, i64 m);
double weyl_closed_form(u64 n, i64 m);

// Integer matrix of size 1 or 2 acting on T or T^2.
struct ToralMatrix {
  std::size_t dim = 1;
  std::array<i64, 4> entries{};  // row-major; only entries[0] used when dim == 1

  i64 at(std::size_t r, std::size_t c) const { return entries[r * dim + c]; }
};

bool is_expanding(const ToralMatrix& A);

// <e_{m_in} o T_A, e_{m_out}> on T^dim, by frequency bookkeeping.
double toral_correlation(const ToralMatrix& A, std::span<const i64> m_in, std::span<const i64> m_out);

struct DiscrepancyResult {
  u64 n = 0;
  double beta = 0;
  u64 d = 1;
  i64 m = 0;
  double l2_value = 0;     // ||D_{n,beta,d} e_m||_2^2
  double closed_form = 0;  // 1 / pi_n(n^beta)
  std::size_t prime_count = 0;
};

DiscrepancyResult discrepancy_l2(u64 n, double beta, u64 d, i64 m);

struct RateFit {
  double kappa = 0;
  double residual = 0;
  std::size_t points_used = 0;
};

// Least squares for log(error) = c - kappa log(n) over errors above `floor`.
RateFit rate_fit(std::span<const u64> n_values, std::span<const double> errors, double floor = 1e-15);

// Errors below this carry no rate information: max(1e-15, 10 eps |haar|).
double fit_floor(double haar);

double cusp_mass(std::span<const points::HorocycleSample> samples, double T, unsigned threads = 1);

struct CuspProfile {
  std::vector<double> masses;  // one per threshold
  double min_height = 0;
};

// Masses above several thresholds from a single reduction of each sample.
CuspProfile cusp_profile(std::span<const points::HorocycleSample> samples, std::span<const double> thresholds,
                         unsigned threads = 1);

struct PrimitiveDensity {
  double ratio = 0;         // phi(n) / n
  double loglog_ratio = 0;  // phi(n) log log n / n
};

PrimitiveDensity primitive_density(u64 n);

struct EquidistReport {
  points::PointSetSpec spec;  // n is per row
  std::string observable;
  double haar = 0;
  std::vector<u64> n_values;
  std::vector<std::size_t> set_sizes;
  std::vector<Complex> empirical;
  std::vector<double> errors;
  double fitted_kappa = 0;  // NaN when fewer than 3 usable points
  double fit_residual = 0;
};

EquidistReport equidist_report(const points::PointSetSpec& spec, const observables::Observable& obs,
                               std::span<const u64> n_values, unsigned threads = 1);

}  // namespace horoeq::stats
