#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "json.hpp"

#include "horoeq/observables.hpp"
#include "horoeq/points.hpp"

namespace horoeq::harness {

using u64 = std::uint64_t;
using i64 = std::int64_t;

inline constexpr const char* kConfigSchema = "horoeq.experiment/1";
inline constexpr const char* kReportSchema = "horoeq.report/1";
inline constexpr u64 kMaxModulus = 100'000'000;

enum class ExperimentKind {
  Generate,
  Equidist,
  Kloosterman,
  Invariance,
  Cardinality,
  Discrepancy,
  CuspMass,
  Projection,
  Intersection,
  Weyl,
  Mixing,
};

const char* kind_name(ExperimentKind kind);
ExperimentKind parse_kind(const std::string& name);

enum class OutputFormat { Both, Csv, Json };

struct ExperimentConfig {
  std::string name = "experiment";
  ExperimentKind kind = ExperimentKind::Equidist;
  points::PointSetSpec points;  // n is taken from the schedule
  std::vector<observables::Observable> observables;
  std::vector<u64> schedule;
  std::filesystem::path output_dir = "out";
  unsigned threads = 1;
  u64 seed = 0;
  OutputFormat format = OutputFormat::Both;

  // kloosterman
  i64 m_min = -2, m_max = 2;
  // invariance, cardinality
  std::vector<u64> primes{2, 3, 5};
  u64 d_max = 1;
  // cardinality: also check prime powers p^r up to this bound (0 disables)
  u64 prime_power_limit = 0;
  // discrepancy
  std::vector<double> betas{0.2, 0.4};
  std::vector<u64> degrees{1, 2};
  std::vector<i64> frequencies{1, 5};
  // cusp_mass
  std::vector<double> thresholds{2, 4, 8};
  // projection
  std::vector<u64> finite_places{2, 3};
  unsigned max_exponent = 2;
  // weyl: every |m| <= 2n up to this n, one m per gcd class beyond it
  u64 exhaustive_limit = 300;
  // mixing
  u64 instances = 1000;
  i64 entry_bound = 10;

  // The document this config was parsed from, used for hashing.
  nlohmann::json source;
};

// Throws Error(ConfigInvalid) on any schema or constraint violation.
ExperimentConfig parse_config(const nlohmann::json& doc);
ExperimentConfig load_config(const std::filesystem::path& path);

std::vector<u64> resolve_schedule(const nlohmann::json& schedule);

observables::Observable observable_from_json(const nlohmann::json& j);
nlohmann::json observable_to_json(const observables::Observable& obs);

nlohmann::json spec_to_json(const points::PointSetSpec& spec);
points::PointSetSpec spec_from_json(const nlohmann::json& j);

// FNV-1a over the canonical dump.
std::string config_hash(const nlohmann::json& doc);

std::string rational_to_string(const Rational& r);
Rational rational_from_string(const std::string& s);

}  // namespace horoeq::harness
