#include "horoeq/config.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

namespace horoeq::harness {

namespace {

using nlohmann::json;

[[noreturn]] void invalid(const std::string& what) { throw Error(Errc::ConfigInvalid, what); }

template <class T>
T get_or(const json& j, const char* key, T fallback) {
  if (!j.contains(key) || j.at(key).is_null()) return fallback;
  return j.at(key).get<T>();
}

u64 next_prime(u64 n) {
  if (n <= 2) return 2;
  if (n % 2 == 0) ++n;
  while (!arith::is_prime(n)) n += 2;
  return n;
}

void validate_for_schedule(const ExperimentConfig& cfg) {
  auto check_points = [&] {
    for (u64 n : cfg.schedule) {
      points::PointSetSpec s = cfg.points;
      s.n = n;
      s.validate();
    }
  };
  switch (cfg.kind) {
    case ExperimentKind::Equidist:
      if (cfg.observables.empty()) invalid("equidist needs at least one observable");
      for (const auto& o : cfg.observables) o.validate();
      for (std::size_t i = 1; i < cfg.schedule.size(); ++i) {
        if (cfg.schedule[i] <= cfg.schedule[i - 1]) invalid("equidist schedule must be strictly increasing");
      }
      check_points();
      break;
    case ExperimentKind::Generate:
    case ExperimentKind::CuspMass:
      check_points();
      break;
    case ExperimentKind::Kloosterman:
      if (cfg.m_min > cfg.m_max) invalid("m_range is empty");
      if (cfg.points.d != 1) invalid("kloosterman runs use d = 1");
      break;
    case ExperimentKind::Invariance:
      if (cfg.primes.empty()) invalid("invariance needs primes");
      for (u64 p : cfg.primes) {
        if (!arith::is_prime(p)) invalid(std::to_string(p) + " is not prime");
      }
      if (cfg.d_max == 0) invalid("d_max must be >= 1");
      break;
    case ExperimentKind::Cardinality:
      if (cfg.d_max == 0) invalid("d_max must be >= 1");
      break;
    case ExperimentKind::Discrepancy:
      for (double b : cfg.betas) {
        if (!(b > 0 && b < 0.5)) invalid("betas must lie in (0, 1/2)");
      }
      for (i64 m : cfg.frequencies) {
        if (m == 0) invalid("discrepancy frequencies must be nonzero");
      }
      for (u64 d : cfg.degrees) {
        if (d == 0) invalid("degrees must be >= 1");
      }
      break;
    case ExperimentKind::Projection:
      for (u64 p : cfg.finite_places) {
        if (!arith::is_prime(p)) invalid(std::to_string(p) + " is not prime");
      }
      break;
    case ExperimentKind::Intersection:
    case ExperimentKind::Weyl:
      break;
    case ExperimentKind::Mixing:
      if (cfg.entry_bound < 1) invalid("entry_bound must be >= 1");
      break;
  }
  if (cfg.kind == ExperimentKind::CuspMass && cfg.thresholds.empty()) invalid("cusp_mass needs thresholds");
}

}  // namespace

const char* kind_name(ExperimentKind kind) {
  switch (kind) {
    case ExperimentKind::Generate: return "generate";
    case ExperimentKind::Equidist: return "equidist";
    case ExperimentKind::Kloosterman: return "kloosterman";
    case ExperimentKind::Invariance: return "invariance";
    case ExperimentKind::Cardinality: return "cardinality";
    case ExperimentKind::Discrepancy: return "discrepancy";
    case ExperimentKind::CuspMass: return "cusp_mass";
    case ExperimentKind::Projection: return "projection";
    case ExperimentKind::Intersection: return "intersection";
    case ExperimentKind::Weyl: return "weyl";
    case ExperimentKind::Mixing: return "mixing";
  }
  return "?";
}

ExperimentKind parse_kind(const std::string& name) {
  for (auto k : {ExperimentKind::Generate, ExperimentKind::Equidist, ExperimentKind::Kloosterman,
                 ExperimentKind::Invariance, ExperimentKind::Cardinality, ExperimentKind::Discrepancy,
                 ExperimentKind::CuspMass, ExperimentKind::Projection, ExperimentKind::Intersection,
                 ExperimentKind::Weyl, ExperimentKind::Mixing}) {
    if (name == kind_name(k)) return k;
  }
  if (name == "cusp-mass") return ExperimentKind::CuspMass;
  invalid("unknown experiment kind '" + name + "'");
}

std::string rational_to_string(const Rational& r) {
  const BigInt num = boost::multiprecision::numerator(r), den = boost::multiprecision::denominator(r);
  if (den == 1) return num.str();
  return num.str() + "/" + den.str();
}

Rational rational_from_string(const std::string& s) {
  try {
    const auto slash = s.find('/');
    if (slash != std::string::npos) {
      const BigInt den(s.substr(slash + 1));
      if (den == 0) invalid("zero denominator in '" + s + "'");
      return Rational(BigInt(s.substr(0, slash)), den);
    }
    const auto dot = s.find('.');
    if (dot == std::string::npos) return Rational(BigInt(s));
    const std::string frac = s.substr(dot + 1);
    BigInt scale = 1;
    for (std::size_t i = 0; i < frac.size(); ++i) scale *= 10;
    const std::string whole = s.substr(0, dot);
    const bool negative = !whole.empty() && whole[0] == '-';
    const BigInt w(whole.empty() || whole == "-" ? "0" : whole);
    const BigInt f(frac.empty() ? "0" : frac);
    const BigInt num = negative ? BigInt(w * scale - f) : BigInt(w * scale + f);
    return Rational(num, scale);
  } catch (const Error&) {
    throw;
  } catch (const std::exception&) {
    invalid("cannot parse rational '" + s + "'");
  }
}

std::vector<u64> resolve_schedule(const json& schedule) {
  std::vector<u64> out;
  if (schedule.is_array()) {
    out = schedule.get<std::vector<u64>>();
  } else if (schedule.is_object() && schedule.contains("list")) {
    out = schedule.at("list").get<std::vector<u64>>();
  } else if (schedule.is_object() && schedule.contains("ramp")) {
    const json& r = schedule.at("ramp");
    const double start = r.at("start").get<double>();
    const double ratio = get_or<double>(r, "ratio", 10.0);
    const u64 count = r.at("count").get<u64>();
    const bool prime = get_or<bool>(r, "prime", true);
    if (!(start >= 1) || !(ratio > 1)) invalid("ramp needs start >= 1 and ratio > 1");
    for (u64 i = 0; i < count; ++i) {
      const auto base = static_cast<u64>(std::llround(start * std::pow(ratio, static_cast<double>(i))));
      out.push_back(prime ? next_prime(base) : base);
    }
  } else if (schedule.is_object() && schedule.contains("range")) {
    const json& r = schedule.at("range");
    const u64 from = r.at("from").get<u64>(), to = r.at("to").get<u64>();
    const u64 step = get_or<u64>(r, "step", 1);
    const bool prime = get_or<bool>(r, "prime", false);
    if (step == 0) invalid("range step must be >= 1");
    for (u64 n = from; n <= to; n += step) {
      if (!prime || arith::is_prime(n)) out.push_back(n);
    }
  } else {
    invalid("schedule must be a list or an object with list/ramp/range");
  }
  if (out.empty()) invalid("schedule is empty");
  for (u64 n : out) {
    if (n == 0) invalid("schedule contains n = 0");
  }
  return out;
}

observables::Observable observable_from_json(const json& j) {
  using namespace observables;
  const std::string type = j.at("type").get<std::string>();
  Observable obs;
  if (type == "constant") {
    obs.kind = Constant{get_or<double>(j, "value", 1.0)};
  } else if (type == "torus_char") {
    obs.kind = TorusChar{j.at("m").get<i64>()};
  } else if (type == "two_torus_char") {
    obs.kind = TwoTorusChar{j.at("m1").get<i64>(), j.at("m2").get<i64>()};
  } else if (type == "kernel") {
    AutomorphicKernel k;
    k.radius = get_or<double>(j, "radius", 1.0);
    const std::string profile = get_or<std::string>(j, "profile", "smooth");
    if (profile == "smooth") {
      k.profile = Profile::SmoothBump;
    } else if (profile == "indicator") {
      k.profile = Profile::Indicator;
    } else {
      invalid("unknown kernel profile '" + profile + "'");
    }
    if (j.contains("center")) {
      const auto c = j.at("center").get<std::vector<double>>();
      if (c.size() != 2) invalid("kernel center must be [re, im]");
      k.center = {c[0], c[1]};
    }
    obs.kind = k;
  } else if (type == "height_band") {
    HeightBand b;
    b.lower = get_or<double>(j, "lower", 1.0);
    b.upper = get_or<double>(j, "upper", std::numeric_limits<double>::infinity());
    obs.kind = b;
  } else if (type == "product") {
    Product p;
    for (const auto& f : j.at("factors")) p.factors.push_back(observable_from_json(f));
    obs.kind = std::move(p);
  } else {
    invalid("unknown observable type '" + type + "'");
  }
  return obs;
}

json observable_to_json(const observables::Observable& obs) {
  using namespace observables;
  json j;
  if (const auto* c = std::get_if<Constant>(&obs.kind)) {
    j = {{"type", "constant"}, {"value", c->value}};
  } else if (const auto* t = std::get_if<TorusChar>(&obs.kind)) {
    j = {{"type", "torus_char"}, {"m", t->m}};
  } else if (const auto* t2 = std::get_if<TwoTorusChar>(&obs.kind)) {
    j = {{"type", "two_torus_char"}, {"m1", t2->m1}, {"m2", t2->m2}};
  } else if (const auto* k = std::get_if<AutomorphicKernel>(&obs.kind)) {
    j = {{"type", "kernel"},
         {"radius", k->radius},
         {"profile", k->profile == Profile::Indicator ? "indicator" : "smooth"},
         {"center", {k->center.real(), k->center.imag()}}};
  } else if (const auto* b = std::get_if<HeightBand>(&obs.kind)) {
    j = {{"type", "height_band"}, {"lower", b->lower}};
    j["upper"] = std::isinf(b->upper) ? json(nullptr) : json(b->upper);
  } else if (const auto* p = std::get_if<Product>(&obs.kind)) {
    json factors = json::array();
    for (const auto& f : p->factors) factors.push_back(observable_to_json(f));
    j = {{"type", "product"}, {"factors", factors}};
  }
  return j;
}

json spec_to_json(const points::PointSetSpec& spec) {
  return {{"family", points::family_name(spec.family)},
          {"alpha", rational_to_string(spec.alpha)},
          {"d", spec.d},
          {"a", spec.a},
          {"b", spec.b},
          {"c", spec.c},
          {"primitive", spec.primitive},
          {"alpha_override", spec.alpha_override}};
}

points::PointSetSpec spec_from_json(const json& j) {
  points::PointSetSpec spec;
  const std::string family = get_or<std::string>(j, "family", "monomial");
  if (family == "full") {
    spec.family = points::Family::Full;
  } else if (family == "monomial") {
    spec.family = points::Family::Monomial;
  } else if (family == "triple") {
    spec.family = points::Family::Triple;
  } else {
    invalid("unknown point family '" + family + "'");
  }
  if (j.contains("alpha")) {
    const json& a = j.at("alpha");
    spec.alpha = rational_from_string(a.is_string() ? a.get<std::string>() : a.dump());
  }
  spec.d = get_or<u64>(j, "d", 1);
  spec.a = get_or<i64>(j, "a", 1);
  spec.b = get_or<i64>(j, "b", 1);
  spec.c = get_or<i64>(j, "c", 1);
  spec.primitive = get_or<bool>(j, "primitive", true);
  spec.alpha_override = get_or<bool>(j, "alpha_override", false);
  return spec;
}

ExperimentConfig parse_config(const json& doc) {
  try {
    if (!doc.is_object()) invalid("config must be a JSON object");
    const std::string schema = get_or<std::string>(doc, "schema", "");
    if (schema != kConfigSchema) invalid("unsupported schema '" + schema + "', expected " + kConfigSchema);
    ExperimentConfig cfg;
    cfg.source = doc;
    cfg.kind = parse_kind(doc.at("kind").get<std::string>());
    cfg.name = get_or<std::string>(doc, "name", kind_name(cfg.kind));
    if (cfg.name.empty() || cfg.name.find('/') != std::string::npos) invalid("name must be a plain file stem");
    if (doc.contains("points")) cfg.points = spec_from_json(doc.at("points"));
    if (doc.contains("observables")) {
      for (const auto& o : doc.at("observables")) cfg.observables.push_back(observable_from_json(o));
    }
    // Mixing instances are drawn from the seed; every other kind walks a schedule.
    if (doc.contains("schedule")) {
      cfg.schedule = resolve_schedule(doc.at("schedule"));
    } else if (cfg.kind != ExperimentKind::Mixing) {
      invalid("config needs a schedule");
    }
    cfg.output_dir = get_or<std::string>(doc, "output", "out");
    cfg.threads = get_or<unsigned>(doc, "threads", 1);
    cfg.seed = get_or<u64>(doc, "seed", 0);
    const std::string format = get_or<std::string>(doc, "format", "both");
    if (format == "both") {
      cfg.format = OutputFormat::Both;
    } else if (format == "csv") {
      cfg.format = OutputFormat::Csv;
    } else if (format == "json") {
      cfg.format = OutputFormat::Json;
    } else {
      invalid("format must be csv, json or both");
    }

    const json params = doc.value("params", json::object());
    if (params.contains("m_range")) {
      const auto r = params.at("m_range").get<std::vector<i64>>();
      if (r.size() != 2) invalid("m_range must be [lo, hi]");
      cfg.m_min = r[0];
      cfg.m_max = r[1];
    }
    cfg.primes = get_or<std::vector<u64>>(params, "primes", cfg.primes);
    cfg.d_max = get_or<u64>(params, "d_max", cfg.d_max);
    cfg.betas = get_or<std::vector<double>>(params, "betas", cfg.betas);
    cfg.degrees = get_or<std::vector<u64>>(params, "degrees", cfg.degrees);
    cfg.frequencies = get_or<std::vector<i64>>(params, "frequencies", cfg.frequencies);
    cfg.thresholds = get_or<std::vector<double>>(params, "thresholds", cfg.thresholds);
    cfg.finite_places = get_or<std::vector<u64>>(params, "finite_places", cfg.finite_places);
    cfg.max_exponent = get_or<unsigned>(params, "max_exponent", cfg.max_exponent);
    cfg.prime_power_limit = get_or<u64>(params, "prime_power_limit", cfg.prime_power_limit);
    cfg.exhaustive_limit = get_or<u64>(params, "exhaustive_limit", cfg.exhaustive_limit);
    cfg.instances = get_or<u64>(params, "instances", cfg.instances);
    cfg.entry_bound = get_or<i64>(params, "entry_bound", cfg.entry_bound);

    validate_for_schedule(cfg);
    return cfg;
  } catch (const Error& e) {
    if (e.code() == Errc::ConfigInvalid) throw;
    throw Error(Errc::ConfigInvalid, e.what());
  } catch (const json::exception& e) {
    throw Error(Errc::ConfigInvalid, e.what());
  }
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::Io, "cannot open config " + path.string());
  json doc;
  try {
    in >> doc;
  } catch (const json::exception& e) {
    throw Error(Errc::ConfigInvalid, path.string() + ": " + e.what());
  }
  return parse_config(doc);
}

std::string config_hash(const json& doc) {
  const std::string canonical = doc.dump();
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : canonical) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  std::ostringstream os;
  os << std::hex;
  os.width(16);
  os.fill('0');
  os << h;
  return os.str();
}

}  // namespace horoeq::harness
