#include "horoeq/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

#include "horoeq/summation.hpp"

namespace horoeq::stats {

Complex empirical_average(std::span<const points::HorocycleSample> samples, const observables::Observable& obs,
                          unsigned threads) {
  if (samples.empty()) throw Error(Errc::EmptySet, "empirical average over an empty set");
  obs.validate();
  const Complex sum = parallel_pairwise_sum<Complex>(
      samples.size(), threads, [&](std::size_t i) { return observables::eval(obs, samples[i]); });
  return sum / static_cast<double>(samples.size());
}

Complex kloosterman_average(u64 n, i64 m1, i64 m2) {
  if (n == 0) throw Error(Errc::InvalidArgument, "n must be >= 1");
  const u64 phi = arith::totient(n);
  const u64 a = arith::mod(m1, n), b = arith::mod(m2, n);
  // Histogram of phases first, then one pairwise sum over residues.
  std::vector<double> weight(n, 0.0);
  for (u64 k = 0; k < n; ++k) {
    if (arith::gcd(k, n) != 1) continue;
    const u64 kbar = arith::pow_mod(k, phi == 0 ? 0 : phi - 1, n);
    weight[(arith::mul_mod(a, k, n) + arith::mul_mod(b, kbar, n)) % n] += 1.0;
  }
  std::vector<Complex> terms;
  for (u64 j = 0; j < n; ++j) {
    if (weight[j] != 0.0) terms.push_back(weight[j] * arith::unit_phase(static_cast<i64>(j), n));
  }
  return pairwise_sum(terms) / static_cast<double>(phi);
}

Complex weyl_sum_full(u64 n, i64 m) {
  if (n == 0) throw Error(Errc::InvalidArgument, "n must be >= 1");
  const u64 mm = arith::mod(m, n);
  std::vector<Complex> terms(n);
  for (u64 k = 0; k < n; ++k) terms[k] = arith::unit_phase(static_cast<i64>(arith::mul_mod(mm, k, n)), n);
  return pairwise_sum(terms) / static_cast<double>(n);
}

double weyl_closed_form(u64 n, i64 m) { return arith::mod(m, n) == 0 ? 1.0 : 0.0; }

bool is_expanding(const ToralMatrix& A) {
  if (A.dim == 1) return std::abs(A.entries[0]) > 1;
  if (A.dim != 2) throw Error(Errc::InvalidArgument, "toral matrices have size 1 or 2");
  const double a = static_cast<double>(A.at(0, 0)), b = static_cast<double>(A.at(0, 1));
  const double c = static_cast<double>(A.at(1, 0)), d = static_cast<double>(A.at(1, 1));
  const std::complex<double> tr(a + d, 0.0), det(a * d - b * c, 0.0);
  const std::complex<double> disc = std::sqrt(tr * tr - 4.0 * det);
  const double l1 = std::abs((tr + disc) / 2.0), l2 = std::abs((tr - disc) / 2.0);
  return l1 > 1.0 && l2 > 1.0;
}

double toral_correlation(const ToralMatrix& A, std::span<const i64> m_in, std::span<const i64> m_out) {
  if (A.dim != 1 && A.dim != 2) throw Error(Errc::InvalidArgument, "toral matrices have size 1 or 2");
  if (m_in.size() != A.dim || m_out.size() != A.dim) {
    throw Error(Errc::InvalidArgument, "frequency vectors must match the matrix size");
  }
  if (!is_expanding(A)) throw Error(Errc::NotExpanding, "matrix has an eigenvalue of modulus <= 1");
  // e_m(A t) = e_{A^T m}(t); characters are orthonormal.
  for (std::size_t j = 0; j < A.dim; ++j) {
    __int128 acc = 0;
    for (std::size_t i = 0; i < A.dim; ++i) acc += static_cast<__int128>(A.at(i, j)) * m_in[i];
    if (acc != m_out[j]) return 0.0;
  }
  return 1.0;
}

DiscrepancyResult discrepancy_l2(u64 n, double beta, u64 d, i64 m) {
  if (!(beta > 0 && beta < 0.5)) throw Error(Errc::InvalidArgument, "beta must lie in (0, 1/2)");
  if (m == 0) throw Error(Errc::InvalidArgument, "frequency must be nonzero");
  if (n == 0 || d == 0) throw Error(Errc::InvalidArgument, "n and d must be >= 1");
  const arith::PrimeSet primes = arith::primes_coprime(n, std::pow(static_cast<double>(n), beta));
  if (primes.empty()) throw Error(Errc::NoPrimesAvailable, "no primes below n^beta coprime to n");

  // D e_m = (1/pi) sum_p e_{m p^{2d}} - E(e_m), and E(e_m) = 0 for m != 0.
  std::map<BigInt, std::size_t> multiplicity;
  for (u64 p : primes.primes()) {
    BigInt f = m;
    for (u64 i = 0; i < 2 * d; ++i) f *= p;
    ++multiplicity[f];
  }
  const double count = static_cast<double>(primes.count());
  std::vector<double> squares;
  for (const auto& [freq, mult] : multiplicity) {
    const double c = static_cast<double>(mult) / count;
    squares.push_back(c * c);
  }
  DiscrepancyResult r;
  r.n = n;
  r.beta = beta;
  r.d = d;
  r.m = m;
  r.prime_count = primes.count();
  r.l2_value = pairwise_sum(squares);
  r.closed_form = 1.0 / count;
  return r;
}

RateFit rate_fit(std::span<const u64> n_values, std::span<const double> errors, double floor) {
  if (n_values.size() != errors.size()) throw Error(Errc::InvalidArgument, "n and error sequences differ in length");
  std::vector<double> xs, ys;
  for (std::size_t i = 0; i < n_values.size(); ++i) {
    if (!(errors[i] > floor) || n_values[i] == 0) continue;
    xs.push_back(std::log(static_cast<double>(n_values[i])));
    ys.push_back(std::log(errors[i]));
  }
  if (xs.size() < 3) throw Error(Errc::InsufficientData, "rate fit needs at least 3 positive errors");
  const double k = static_cast<double>(xs.size());
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= k;
  my /= k;
  double sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    sxy += (xs[i] - mx) * (ys[i] - my);
  }
  if (sxx == 0) throw Error(Errc::InsufficientData, "rate fit needs distinct n values");
  const double slope = sxy / sxx;
  const double intercept = my - slope * mx;
  double ss = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double e = ys[i] - (intercept + slope * xs[i]);
    ss += e * e;
  }
  RateFit fit;
  fit.kappa = slope == 0 ? 0.0 : -slope;
  fit.residual = std::sqrt(ss / k);
  fit.points_used = xs.size();
  return fit;
}

double fit_floor(double haar) {
  return std::max(1e-15, 10.0 * std::numeric_limits<double>::epsilon() * std::abs(haar));
}

double cusp_mass(std::span<const points::HorocycleSample> samples, double T, unsigned threads) {
  const double t[] = {T};
  return cusp_profile(samples, t, threads).masses[0];
}

CuspProfile cusp_profile(std::span<const points::HorocycleSample> samples, std::span<const double> thresholds,
                         unsigned threads) {
  if (samples.empty()) throw Error(Errc::EmptySet, "cusp mass of an empty set");
  for (double T : thresholds) {
    if (!(T > 0)) throw Error(Errc::InvalidArgument, "height threshold must be positive");
  }
  std::vector<double> heights(samples.size());
  // Each index is written by exactly one block, so the result is thread-count independent.
  parallel_pairwise_sum<double>(samples.size(), threads, [&](std::size_t i) {
    heights[i] = samples[i].height();
    return 0.0;
  });
  CuspProfile out;
  out.min_height = *std::min_element(heights.begin(), heights.end());
  for (double T : thresholds) {
    std::size_t above = 0;
    for (double h : heights) above += h > T ? 1 : 0;
    out.masses.push_back(static_cast<double>(above) / static_cast<double>(samples.size()));
  }
  return out;
}

PrimitiveDensity primitive_density(u64 n) {
  if (n < 3) throw Error(Errc::InvalidArgument, "primitive density needs n >= 3");
  const double ratio = static_cast<double>(arith::totient(n)) / static_cast<double>(n);
  return {ratio, ratio * std::log(std::log(static_cast<double>(n)))};
}

EquidistReport equidist_report(const points::PointSetSpec& spec, const observables::Observable& obs,
                               std::span<const u64> n_values, unsigned threads) {
  if (n_values.empty()) throw Error(Errc::InvalidArgument, "empty n schedule");
  obs.validate();
  EquidistReport report;
  report.spec = spec;
  report.observable = obs.describe();
  report.haar = observables::haar_expectation(obs).value;
  for (std::size_t i = 0; i < n_values.size(); ++i) {
    if (i > 0 && n_values[i] <= n_values[i - 1]) {
      throw Error(Errc::InvalidArgument, "n schedule must be strictly increasing");
    }
    points::PointSetSpec s = spec;
    s.n = n_values[i];
    const auto samples = points::generate(s);
    const Complex avg = empirical_average(samples, obs, threads);
    report.n_values.push_back(s.n);
    report.set_sizes.push_back(samples.size());
    report.empirical.push_back(avg);
    report.errors.push_back(std::abs(avg - report.haar));
  }
  const double floor = fit_floor(report.haar);
  try {
    const RateFit fit = rate_fit(report.n_values, report.errors, floor);
    report.fitted_kappa = fit.kappa;
    report.fit_residual = fit.residual;
  } catch (const Error& e) {
    if (e.code() != Errc::InsufficientData) throw;
    report.fitted_kappa = std::numeric_limits<double>::quiet_NaN();
    report.fit_residual = std::numeric_limits<double>::quiet_NaN();
  }
  return report;
}

}  // namespace horoeq::stats
