#include "horoeq/harness.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <numbers>
#include <random>
#include <set>
#include <sstream>

#include "horoeq/stats.hpp"

namespace horoeq::harness {

namespace {

using nlohmann::json;
using Complex = std::complex<double>;

constexpr double kKloostermanTol = 1e-9;
constexpr double kDiscrepancyTol = 1e-9;
constexpr double kWeylTol = 1e-10;
constexpr double kMixingTol = 1e-9;

// Runs f and records its wall-clock duration against n.
void timed(Report& report, u64 n, const std::function<void()>& f) {
  const auto start = std::chrono::steady_clock::now();
  f();
  const std::chrono::duration<double> dt = std::chrono::steady_clock::now() - start;
  report.wall_clock.emplace_back(n, dt.count());
}

std::string join(const std::vector<u64>& xs) {
  std::string s;
  for (std::size_t i = 0; i < xs.size(); ++i) s += (i ? ";" : "") + std::to_string(xs[i]);
  return s;
}

std::string join(const std::vector<unsigned>& xs) {
  std::string s;
  for (std::size_t i = 0; i < xs.size(); ++i) s += (i ? ";" : "") + std::to_string(xs[i]);
  return s;
}

points::PointSetSpec spec_at(const ExperimentConfig& cfg, u64 n) {
  points::PointSetSpec s = cfg.points;
  s.n = n;
  return s;
}

void fail(Report& r, const std::string& what) { r.failures.push_back(what); }

// splitmix64, for deterministic choices that must not depend on library RNG details.
u64 mix(u64 x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

Report run_generate(const ExperimentConfig& cfg) {
  Report r;
  Table t{cfg.name, {"k", "n", "alpha", "d", "torus1", "torus2", "re_z", "im_z", "height"}, {}};
  t.meta["points"] = spec_to_json(cfg.points);
  for (u64 n : cfg.schedule) {
    timed(r, n, [&] {
      const points::PointSetSpec spec = spec_at(cfg, n);
      const std::string alpha = rational_to_string(spec.alpha);
      for (const auto& s : points::generate(spec)) {
        const sl2::ReducedPoint red = s.reduced();
        const auto t2 = s.torus2();
        t.rows.push_back({s.k, n, alpha, spec.family == points::Family::Full ? 1 : spec.d,
                          rational_to_string(s.torus1()), t2 ? rational_to_string(*t2) : std::string(),
                          red.point.z().real(), red.point.z().imag(), red.height});
      }
    });
  }
  r.tables.push_back(std::move(t));
  return r;
}

Report run_equidist(const ExperimentConfig& cfg) {
  Report r;
  const std::size_t k = cfg.observables.size();
  std::vector<observables::HaarTarget> haar;
  for (const auto& o : cfg.observables) haar.push_back(observables::haar_expectation(o));
  std::vector<std::vector<Complex>> empirical(k);
  std::vector<std::size_t> sizes;
  for (u64 n : cfg.schedule) {
    timed(r, n, [&] {
      const auto samples = points::generate(spec_at(cfg, n));
      sizes.push_back(samples.size());
      for (std::size_t i = 0; i < k; ++i) {
        empirical[i].push_back(stats::empirical_average(samples, cfg.observables[i], cfg.threads));
      }
    });
  }
  json fits = json::array();
  for (std::size_t i = 0; i < k; ++i) {
    Table t{k == 1 ? cfg.name : cfg.name + ".obs" + std::to_string(i),
            {"n", "empirical_re", "empirical_im", "haar", "abs_error"},
            {}};
    std::vector<double> errors;
    for (std::size_t j = 0; j < cfg.schedule.size(); ++j) {
      const double err = std::abs(empirical[i][j] - haar[i].value);
      errors.push_back(err);
      t.rows.push_back({cfg.schedule[j], empirical[i][j].real(), empirical[i][j].imag(), haar[i].value, err});
    }
    const double floor = stats::fit_floor(haar[i].value);
    json fit = {{"observable", cfg.observables[i].describe()}, {"fit_floor", floor}};
    try {
      const stats::RateFit f = stats::rate_fit(cfg.schedule, errors, floor);
      fit["fitted_kappa"] = f.kappa;
      fit["fit_residual"] = f.residual;
      fit["fit_points"] = f.points_used;
    } catch (const Error& e) {
      if (e.code() != Errc::InsufficientData) throw;
      fit["fitted_kappa"] = nullptr;
      fit["fit_residual"] = nullptr;
      fit["fit_points"] = 0;
    }
    bool monotone = true;
    for (std::size_t j = 2; j < errors.size(); ++j) monotone = monotone && errors[j] <= errors[j - 1];
    fit["non_increasing_after_first"] = monotone;
    t.meta = fit;
    t.meta["observable_config"] = observable_to_json(cfg.observables[i]);
    t.meta["haar_provenance"] = haar[i].provenance == observables::Provenance::Exact ? "exact" : "numeric";
    t.meta["haar_tolerance"] = haar[i].tolerance;
    t.meta["points"] = spec_to_json(cfg.points);
    t.meta["set_sizes"] = sizes;
    fits.push_back(fit);
    r.tables.push_back(std::move(t));
  }
  r.summary["fits"] = fits;
  return r;
}

Report run_kloosterman(const ExperimentConfig& cfg) {
  Report r;
  Table t{cfg.name,
          {"n", "m1", "m2", "average_re", "average_im", "kloosterman_over_phi", "abs_diff", "weil_bound", "pass"},
          {}};
  for (u64 n : cfg.schedule) {
    timed(r, n, [&] {
      points::PointSetSpec spec = spec_at(cfg, n);
      spec.family = points::Family::Triple;
      spec.d = 1;
      const auto samples = points::generate(spec);
      const double phi = static_cast<double>(arith::totient(n));
      for (i64 m1 = cfg.m_min; m1 <= cfg.m_max; ++m1) {
        for (i64 m2 = cfg.m_min; m2 <= cfg.m_max; ++m2) {
          const observables::Observable obs{observables::TwoTorusChar{m1, m2}};
          const Complex avg = stats::empirical_average(samples, obs, cfg.threads);
          // The character picks up the coefficients a and b of the point set.
          const Complex s = arith::kloosterman_sum(spec.a * m1, spec.b * m2, n) / phi;
          const double diff = std::abs(avg - s);
          const double weil = arith::weil_bound(spec.a * m1, spec.b * m2, n) / phi;
          const bool weil_ok = (m1 == 0 && m2 == 0) || std::abs(avg) <= weil + kKloostermanTol;
          const bool pass = diff <= kKloostermanTol && weil_ok;
          if (!pass) {
            fail(r, "kloosterman n=" + std::to_string(n) + " m=(" + std::to_string(m1) + "," + std::to_string(m2) + ")");
          }
          t.rows.push_back({n, m1, m2, avg.real(), avg.imag(), s.real(), diff, weil, pass});
        }
      }
    });
  }
  r.tables.push_back(std::move(t));
  return r;
}

Report run_invariance(const ExperimentConfig& cfg) {
  Report r;
  Table t{cfg.name, {"n", "p", "d", "pass"}, {}};
  t.meta["points"] = spec_to_json(cfg.points);
  u64 checked = 0;
  for (u64 n : cfg.schedule) {
    timed(r, n, [&] {
      for (u64 p : cfg.primes) {
        if (n % p == 0) continue;
        for (u64 d = 1; d <= cfg.d_max; ++d) {
          points::PointSetSpec spec = spec_at(cfg, n);
          spec.d = d;
          const bool pass = points::verify_invariance(spec, p);
          ++checked;
          if (!pass) fail(r, "invariance n=" + std::to_string(n) + " p=" + std::to_string(p) + " d=" + std::to_string(d));
          t.rows.push_back({n, p, d, pass});
        }
      }
    });
  }
  r.summary["checked"] = checked;
  r.tables.push_back(std::move(t));
  return r;
}

u64 brute_power_count(u64 n, u64 d) {
  std::vector<char> seen(n, 0);
  u64 count = 0;
  for (u64 k = 0; k < n; ++k) {
    if (arith::gcd(k, n) != 1) continue;
    const u64 v = arith::pow_mod(k, d, n);
    if (!seen[v]) {
      seen[v] = 1;
      ++count;
    }
  }
  return count;
}

Report run_cardinality(const ExperimentConfig& cfg) {
  Report r;
  Table t{cfg.name, {"n", "d", "set_size", "formula", "brute_force", "pass"}, {}};
  t.meta["points"] = spec_to_json(cfg.points);
  for (u64 n : cfg.schedule) {
    timed(r, n, [&] {
      for (u64 d = 1; d <= cfg.d_max; ++d) {
        points::PointSetSpec spec = spec_at(cfg, n);
        spec.family = points::Family::Monomial;
        spec.d = d;
        const u64 size = points::generate(spec).size();
        const u64 formula = arith::residue_count_formula(n, d);
        const u64 brute = brute_power_count(n, d);
        const bool pass = size == formula && formula == brute;
        if (!pass) fail(r, "cardinality n=" + std::to_string(n) + " d=" + std::to_string(d));
        t.rows.push_back({n, d, size, formula, brute, pass});
      }
    });
  }
  r.tables.push_back(std::move(t));

  if (cfg.prime_power_limit >= 2) {
    Table pp{cfg.name + ".prime_powers", {"p", "r", "q", "d", "formula", "brute_force", "pass"}, {}};
    const arith::PrimeSet primes = arith::primes_coprime(1, static_cast<double>(cfg.prime_power_limit) + 1);
    for (u64 p : primes.primes()) {
      u64 q = p;
      for (unsigned e = 1; q <= cfg.prime_power_limit; ++e, q *= p) {
        for (u64 d = 1; d <= cfg.d_max; ++d) {
          const u64 formula = arith::residue_count_prime_power(p, e, d);
          const u64 brute = brute_power_count(q, d);
          const bool pass = formula == brute;
          if (!pass) fail(r, "prime power " + std::to_string(p) + "^" + std::to_string(e) + " d=" + std::to_string(d));
          pp.rows.push_back({p, e, q, d, formula, brute, pass});
        }
        if (q > cfg.prime_power_limit / p) break;
      }
    }
    r.summary["prime_power_rows"] = pp.rows.size();
    r.tables.push_back(std::move(pp));
  }
  return r;
}

Report run_discrepancy(const ExperimentConfig& cfg) {
  Report r;
  Table t{cfg.name,
          {"n", "beta", "d", "m", "prime_count", "l2_value", "closed_form", "abs_diff", "pass"},
          {}};
  // (beta, d, m) -> values in schedule order
  std::map<std::tuple<double, u64, i64>, std::vector<double>> series;
  for (u64 n : cfg.schedule) {
    timed(r, n, [&] {
      for (double beta : cfg.betas) {
        for (u64 d : cfg.degrees) {
          for (i64 m : cfg.frequencies) {
            const stats::DiscrepancyResult res = stats::discrepancy_l2(n, beta, d, m);
            const double diff = std::abs(res.l2_value - res.closed_form);
            const bool pass = diff <= kDiscrepancyTol;
            if (!pass) fail(r, "discrepancy n=" + std::to_string(n) + " d=" + std::to_string(d));
            series[{beta, d, m}].push_back(res.l2_value);
            t.rows.push_back({n, beta, d, m, res.prime_count, res.l2_value, res.closed_form, diff, pass});
          }
        }
      }
    });
  }
  bool decreasing = true;
  for (const auto& [key, values] : series) {
    for (std::size_t i = 1; i < values.size(); ++i) decreasing = decreasing && values[i] < values[i - 1];
  }
  r.summary["strictly_decreasing_in_n"] = decreasing;
  r.tables.push_back(std::move(t));
  return r;
}

Report run_cusp_mass(const ExperimentConfig& cfg) {
  Report r;
  Table t{cfg.name, {"n", "threshold", "cusp_mass", "haar", "rel_error", "min_height", "set_size"}, {}};
  t.meta["points"] = spec_to_json(cfg.points);
  for (u64 n : cfg.schedule) {
    timed(r, n, [&] {
      const auto samples = points::generate(spec_at(cfg, n));
      const stats::CuspProfile prof = stats::cusp_profile(samples, cfg.thresholds, cfg.threads);
      for (std::size_t i = 0; i < cfg.thresholds.size(); ++i) {
        const double T = cfg.thresholds[i];
        const double haar = 3.0 / (std::numbers::pi * T);
        t.rows.push_back({n, T, prof.masses[i], haar, std::abs(prof.masses[i] - haar) / haar, prof.min_height,
                          samples.size()});
      }
    });
  }
  r.tables.push_back(std::move(t));
  return r;
}

Report run_projection(const ExperimentConfig& cfg) {
  Report r;
  Table t{cfg.name, {"n", "places", "l", "m", "pair_count", "pass"}, {}};
  const std::size_t P = cfg.finite_places.size();
  const unsigned base = cfg.max_exponent + 1;
  for (u64 n : cfg.schedule) {
    timed(r, n, [&] {
      for (u64 mask = 1; mask < (u64{1} << P); ++mask) {
        std::vector<u64> places;
        for (std::size_t i = 0; i < P; ++i) {
          if (mask >> i & 1) places.push_back(cfg.finite_places[i]);
        }
        u64 combos = 1;
        for (std::size_t i = 0; i < 2 * places.size(); ++i) combos *= base;
        for (u64 c = 0; c < combos; ++c) {
          std::vector<unsigned> l(places.size()), m(places.size());
          u64 rest = c;
          for (auto& e : l) e = static_cast<unsigned>(rest % base), rest /= base;
          for (auto& e : m) e = static_cast<unsigned>(rest % base), rest /= base;
          bool pass = true;
          u64 pairs = 0;
          try {
            pairs = points::project_level(n, places, l, m).pairs.size();
          } catch (const Error& e) {
            if (e.code() != Errc::InvariantViolation) throw;
            pass = false;
            fail(r, "projection n=" + std::to_string(n) + " S=" + join(places) + " l=" + join(l) + " m=" + join(m));
          }
          t.rows.push_back({n, join(places), join(l), join(m), pairs, pass});
        }
      }
    });
  }
  r.tables.push_back(std::move(t));
  return r;
}

Report run_intersection(const ExperimentConfig& cfg) {
  Report r;
  Table t{cfg.name, {"n", "units", "verified", "pass"}, {}};
  u64 total = 0;
  for (u64 n : cfg.schedule) {
    timed(r, n, [&] {
      u64 units = 0, verified = 0;
      for (u64 k = 0; k < n; ++k) {
        if (arith::gcd(k, n) != 1) continue;
        ++units;
        const auto kk = static_cast<i64>(k);
        if (sl2::verify_intersection(sl2::intersection_witness(kk, n), kk, n)) {
          ++verified;
        } else {
          fail(r, "intersection n=" + std::to_string(n) + " k=" + std::to_string(k));
        }
      }
      total += units;
      t.rows.push_back({n, units, verified, units == verified});
    });
  }
  r.summary["witnesses"] = total;
  r.tables.push_back(std::move(t));
  return r;
}

std::vector<i64> weyl_frequencies(const ExperimentConfig& cfg, u64 n) {
  const auto nn = static_cast<i64>(n);
  std::vector<i64> ms;
  if (n <= cfg.exhaustive_limit) {
    for (i64 m = -2 * nn; m <= 2 * nn; ++m) ms.push_back(m);
    return ms;
  }
  // One frequency for every gcd class g | n, lifted to a pseudo-random point of [-2n, 2n].
  std::set<i64> chosen{-2 * nn, -nn, 0, nn, 2 * nn};
  for (u64 g = 1; g <= n; ++g) {
    if (n % g != 0) continue;
    const u64 q = n / g;
    u64 h = mix(cfg.seed ^ mix(n ^ mix(g)));
    u64 u = q == 1 ? 0 : h % q;
    while (q > 1 && arith::gcd(u, q) != 1) u = (u + 1) % q;
    const auto lift = static_cast<i64>(mix(h) % 4) - 2;
    chosen.insert(static_cast<i64>(g * u) + lift * nn);
  }
  return {chosen.begin(), chosen.end()};
}

Report run_weyl(const ExperimentConfig& cfg) {
  Report r;
  Table t{cfg.name, {"n", "m_checked", "max_abs_error", "pass"}, {}};
  u64 total = 0;
  for (u64 n : cfg.schedule) {
    timed(r, n, [&] {
      double worst = 0;
      const auto ms = weyl_frequencies(cfg, n);
      for (i64 m : ms) {
        worst = std::max(worst, std::abs(stats::weyl_sum_full(n, m) - stats::weyl_closed_form(n, m)));
      }
      const bool pass = worst <= kWeylTol;
      if (!pass) fail(r, "weyl n=" + std::to_string(n));
      total += ms.size();
      t.rows.push_back({n, ms.size(), worst, pass});
    });
  }
  r.summary["pairs_checked"] = total;
  r.summary["exhaustive_limit"] = cfg.exhaustive_limit;
  r.tables.push_back(std::move(t));
  return r;
}

// <e_{m_in} o A, e_{m_out}> by an N-point grid rule, exact for |frequency| < N.
double grid_correlation(const stats::ToralMatrix& A, const std::vector<i64>& m_in, const std::vector<i64>& m_out) {
  std::vector<i64> f(A.dim);
  i64 span = 0;
  for (std::size_t j = 0; j < A.dim; ++j) {
    i64 acc = -m_out[j];
    for (std::size_t i = 0; i < A.dim; ++i) acc += A.at(i, j) * m_in[i];
    f[j] = acc;
    span = std::max(span, acc < 0 ? -acc : acc);
  }
  const i64 N = span + 1;
  double re = 0;
  if (A.dim == 1) {
    for (i64 a = 0; a < N; ++a) re += std::cos(2 * std::numbers::pi * static_cast<double>(f[0] * a) / N);
    return re / static_cast<double>(N);
  }
  for (i64 a = 0; a < N; ++a) {
    for (i64 b = 0; b < N; ++b) {
      re += std::cos(2 * std::numbers::pi * static_cast<double>((f[0] * a + f[1] * b) % N) / N);
    }
  }
  return re / static_cast<double>(N * N);
}

Report run_mixing(const ExperimentConfig& cfg) {
  Report r;
  Table t{cfg.name,
          {"instance", "dim", "matrix", "m_in", "m_out", "correlation", "oracle", "abs_diff", "pass"},
          {}};
  std::mt19937_64 rng(cfg.seed);
  const i64 B = cfg.entry_bound;
  auto draw = [&](i64 lo, i64 hi) { return lo + static_cast<i64>(rng() % static_cast<u64>(hi - lo + 1)); };
  u64 rejected = 0, rejected_ok = 0, matched = 0;

  auto record = [&](u64 idx, const stats::ToralMatrix& A, const std::vector<i64>& m_in, const std::vector<i64>& m_out) {
    const double c = stats::toral_correlation(A, m_in, m_out);
    const double o = grid_correlation(A, m_in, m_out);
    const bool pass = std::abs(c - o) <= kMixingTol;
    if (!pass) fail(r, "mixing instance " + std::to_string(idx));
    if (c == 1.0) ++matched;
    std::string mat, in, out;
    for (std::size_t i = 0; i < A.dim * A.dim; ++i) {
      mat += (i ? (i % A.dim == 0 ? ";" : " ") : "") + std::to_string(A.entries[i]);
    }
    for (std::size_t i = 0; i < A.dim; ++i) {
      in += (i ? " " : "") + std::to_string(m_in[i]);
      out += (i ? " " : "") + std::to_string(m_out[i]);
    }
    t.rows.push_back({idx, A.dim, mat, in, out, c, o, std::abs(c - o), pass});
  };

  timed(r, 0, [&] {
    const stats::ToralMatrix cat{2, {3, 1, 1, 2}};
    record(0, cat, {1, 0}, {3, 1});
    record(1, cat, {1, 0}, {1, 0});
    for (u64 idx = 2; idx < cfg.instances;) {
      stats::ToralMatrix A;
      A.dim = draw(1, 2);
      for (std::size_t i = 0; i < A.dim * A.dim; ++i) A.entries[i] = draw(-B, B);
      std::vector<i64> m_in(A.dim), m_out(A.dim);
      for (auto& x : m_in) x = draw(-5, 5);
      if (!stats::is_expanding(A)) {
        ++rejected;
        try {
          stats::toral_correlation(A, m_in, m_in);
        } catch (const Error& e) {
          if (e.code() == Errc::NotExpanding) ++rejected_ok;
        }
        continue;
      }
      if (draw(0, 1) == 0) {
        for (std::size_t j = 0; j < A.dim; ++j) {
          m_out[j] = 0;
          for (std::size_t i = 0; i < A.dim; ++i) m_out[j] += A.at(i, j) * m_in[i];
        }
      } else {
        for (auto& x : m_out) x = draw(-5 * B, 5 * B);
      }
      record(idx++, A, m_in, m_out);
    }
  });
  if (rejected_ok != rejected) fail(r, "non-expanding matrices were not rejected");
  r.summary["matched"] = matched;
  r.summary["non_expanding_draws"] = rejected;
  r.tables.push_back(std::move(t));
  return r;
}

void write_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(Errc::Io, "cannot write " + path.string());
  out << content;
  if (!out) throw Error(Errc::Io, "write failed for " + path.string());
}

}  // namespace

std::string format_number(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string csv_cell(const json& v) {
  switch (v.type()) {
    case json::value_t::null: return "";
    case json::value_t::boolean: return v.get<bool>() ? "true" : "false";
    case json::value_t::number_integer: return std::to_string(v.get<std::int64_t>());
    case json::value_t::number_unsigned: return std::to_string(v.get<std::uint64_t>());
    case json::value_t::number_float: return format_number(v.get<double>());
    case json::value_t::string: {
      const std::string s = v.get<std::string>();
      if (s.find_first_of(",\"\n") == std::string::npos) return s;
      std::string q = "\"";
      for (char c : s) q += c == '"' ? std::string("\"\"") : std::string(1, c);
      return q + "\"";
    }
    default: return v.dump();
  }
}

std::string render_csv(const Table& table) {
  std::string out;
  for (std::size_t i = 0; i < table.columns.size(); ++i) out += (i ? "," : "") + table.columns[i];
  out += '\n';
  for (const auto& row : table.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) out += (i ? "," : "") + csv_cell(row[i]);
    out += '\n';
  }
  return out;
}

json render_json(const Table& table, const ExperimentConfig& config, const Report& report) {
  json rows = json::array();
  for (const auto& row : table.rows) {
    json obj = json::object();
    for (std::size_t i = 0; i < row.size(); ++i) obj[table.columns[i]] = row[i];
    rows.push_back(std::move(obj));
  }
  return {{"schema", kReportSchema},
          {"kind", kind_name(config.kind)},
          {"name", config.name},
          {"config_hash", config_hash(config.source)},
          {"meta", table.meta},
          {"summary", report.summary},
          {"all_pass", report.failures.empty()},
          {"columns", table.columns},
          {"rows", rows}};
}

json RunManifest::to_json() const {
  json clock = json::array();
  for (const auto& [n, s] : wall_clock) clock.push_back({{"n", n}, {"seconds", s}});
  std::vector<std::string> files;
  for (const auto& p : outputs) files.push_back(p.string());
  return {{"schema", "horoeq.manifest/1"},
          {"config_hash", config_hash},
          {"tool_version", tool_version},
          {"kind", kind},
          {"name", name},
          {"wall_clock", clock},
          {"outputs", files},
          {"all_pass", all_pass},
          {"failures", failures}};
}

Report execute(const ExperimentConfig& cfg) {
  for (u64 n : cfg.schedule) {
    if (n > kMaxModulus) {
      throw Error(Errc::ResourceExhausted, "n = " + std::to_string(n) + " exceeds the limit " + std::to_string(kMaxModulus));
    }
  }
  Report r;
  switch (cfg.kind) {
    case ExperimentKind::Generate: r = run_generate(cfg); break;
    case ExperimentKind::Equidist: r = run_equidist(cfg); break;
    case ExperimentKind::Kloosterman: r = run_kloosterman(cfg); break;
    case ExperimentKind::Invariance: r = run_invariance(cfg); break;
    case ExperimentKind::Cardinality: r = run_cardinality(cfg); break;
    case ExperimentKind::Discrepancy: r = run_discrepancy(cfg); break;
    case ExperimentKind::CuspMass: r = run_cusp_mass(cfg); break;
    case ExperimentKind::Projection: r = run_projection(cfg); break;
    case ExperimentKind::Intersection: r = run_intersection(cfg); break;
    case ExperimentKind::Weyl: r = run_weyl(cfg); break;
    case ExperimentKind::Mixing: r = run_mixing(cfg); break;
  }
  r.kind = cfg.kind;
  return r;
}

RunManifest run(const ExperimentConfig& cfg) {
  RunManifest m;
  m.config_hash = config_hash(cfg.source);
  m.kind = kind_name(cfg.kind);
  m.name = cfg.name;
  m.report = execute(cfg);
  m.wall_clock = m.report.wall_clock;
  m.failures = m.report.failures;
  m.all_pass = m.failures.empty();

  std::error_code ec;
  std::filesystem::create_directories(cfg.output_dir, ec);
  if (ec) throw Error(Errc::Io, "cannot create " + cfg.output_dir.string() + ": " + ec.message());
  for (const Table& t : m.report.tables) {
    if (cfg.format != OutputFormat::Json) {
      const auto path = cfg.output_dir / (t.stem + ".csv");
      write_file(path, render_csv(t));
      m.outputs.push_back(path);
    }
    if (cfg.format != OutputFormat::Csv) {
      const auto path = cfg.output_dir / (t.stem + ".json");
      write_file(path, render_json(t, cfg, m.report).dump(2) + "\n");
      m.outputs.push_back(path);
    }
  }
  const auto manifest_path = cfg.output_dir / (cfg.name + ".manifest.json");
  m.outputs.push_back(manifest_path);
  write_file(manifest_path, m.to_json().dump(2) + "\n");
  return m;
}

ExperimentConfig default_config(ExperimentKind kind) {
  json doc = {{"schema", kConfigSchema}, {"kind", kind_name(kind)}, {"name", kind_name(kind)}};
  const json ramp = {{"ramp", {{"start", 1000}, {"ratio", 10}, {"count", 3}, {"prime", true}}}};
  switch (kind) {
    case ExperimentKind::Generate:
      doc["schedule"] = {101};
      doc["points"] = {{"family", "monomial"}, {"alpha", "1/2"}, {"d", 1}};
      break;
    case ExperimentKind::Equidist:
      doc["schedule"] = ramp;
      doc["points"] = {{"family", "monomial"}, {"alpha", "1/2"}, {"d", 1}};
      doc["observables"] = {{{"type", "kernel"}, {"radius", 1}, {"profile", "smooth"}}};
      break;
    case ExperimentKind::Kloosterman:
      doc["schedule"] = {{"range", {{"from", 1}, {"to", 200}}}};
      doc["points"] = {{"family", "triple"}, {"alpha", "1/2"}};
      break;
    case ExperimentKind::Invariance:
      doc["schedule"] = {{"range", {{"from", 1}, {"to", 200}}}};
      doc["points"] = {{"family", "triple"}, {"alpha", "1/2"}};
      doc["params"] = {{"primes", {2, 3, 5}}, {"d_max", 2}};
      break;
    case ExperimentKind::Cardinality:
      doc["schedule"] = {{"range", {{"from", 1}, {"to", 200}}}};
      doc["params"] = {{"d_max", 6}};
      break;
    case ExperimentKind::Discrepancy:
      doc["schedule"] = ramp;
      break;
    case ExperimentKind::CuspMass:
      doc["schedule"] = {10007};
      doc["points"] = {{"family", "full"}, {"alpha", "1/2"}, {"primitive", true}};
      break;
    case ExperimentKind::Projection:
      doc["schedule"] = {5, 7, 11, 25};
      break;
    case ExperimentKind::Intersection:
      doc["schedule"] = {{"range", {{"from", 1}, {"to", 100}}}};
      break;
    case ExperimentKind::Weyl:
      doc["schedule"] = {{"range", {{"from", 1}, {"to", 100}}}};
      break;
    case ExperimentKind::Mixing:
      break;
  }
  return parse_config(doc);
}

}  // namespace horoeq::harness
