#pragma once

// Configuration parsing and report serialization. Requires yaml-cpp.

#include <yaml-cpp/yaml.h>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "gshare/access_structure.hpp"
#include "gshare/capacity.hpp"
#include "gshare/error.hpp"
#include "gshare/protocol.hpp"
#include "gshare/source_model.hpp"

namespace gshare {

// ---------------------------------------------------------------------------
// Run configuration

struct RpSpec {
  enum class Kind { Value, Infinity, Grid };
  Kind kind = Kind::Value;
  double value = 0.0;
  double min = 0.0;
  double max = 0.0;
  std::size_t points = 1;

  std::vector<double> grid() const {
    if (kind != Kind::Grid) return {value};
    std::vector<double> g;
    for (std::size_t k = 0; k < points; ++k) {
      g.push_back(points == 1 ? min
                              : (k + 1 == points ? max
                                                 : min + (max - min) * static_cast<double>(k) /
                                                             static_cast<double>(points - 1)));
    }
    return g;
  }
};

struct AccessSpec {
  enum class Kind { MinimalSets, Threshold, ThresholdSweep };
  Kind kind = Kind::MinimalSets;
  std::vector<Subset> minimal_sets;
  int threshold = 0;
};

struct RunConfig {
  explicit RunConfig(SourceSpec s) : source(std::move(s)) {}

  SourceSpec source;
  std::optional<AccessSpec> access;
  std::optional<RpSpec> rp;
  std::size_t oracle_grid = 10000;
  std::optional<ProtocolConfig> sim;
  std::optional<std::string> output_path;
  std::optional<std::string> output_format;

  AccessStructure structure() const {
    if (!access) throw Error(ErrorCode::InvalidConfig, "config has no access block");
    const int l = source.participants();
    switch (access->kind) {
      case AccessSpec::Kind::MinimalSets: return monotone_closure(l, access->minimal_sets);
      case AccessSpec::Kind::Threshold: return threshold_structure(l, access->threshold);
      case AccessSpec::Kind::ThresholdSweep: break;
    }
    throw Error(ErrorCode::InvalidConfig, "threshold_sweep does not name a single access structure");
  }
};

namespace detail {

inline std::string where(const std::string& origin, const YAML::Node& node) {
  const YAML::Mark m = node.Mark();
  if (m.line < 0) return origin;
  return origin + ":" + std::to_string(m.line + 1) + ":" + std::to_string(m.column + 1);
}

class ConfigReader {
 public:
  explicit ConfigReader(std::string origin) : origin_(std::move(origin)) {}

  [[noreturn]] void fail(const YAML::Node& node, const std::string& msg) const {
    throw Error(ErrorCode::InvalidConfig, where(origin_, node) + ": " + msg);
  }

  void expect_map(const YAML::Node& node, const std::string& name) const {
    if (!node.IsMap()) fail(node, "'" + name + "' must be a mapping");
  }

  void allow_keys(const YAML::Node& node, std::initializer_list<const char*> keys) const {
    for (const auto& kv : node) {
      const std::string key = kv.first.as<std::string>();
      bool ok = false;
      for (const char* k : keys) ok = ok || key == k;
      if (!ok) fail(kv.first, "unknown key '" + key + "'");
    }
  }

  template <typename T>
  T scalar(const YAML::Node& node, const std::string& name) const {
    if (!node.IsScalar()) fail(node, "'" + name + "' must be a scalar");
    try {
      return node.as<T>();
    } catch (const YAML::Exception&) {
      fail(node, "'" + name + "' has an invalid value '" + node.Scalar() + "'");
    }
  }

  double real(const YAML::Node& node, const std::string& name) const {
    const double v = scalar<double>(node, name);
    if (!std::isfinite(v)) fail(node, "'" + name + "' must be finite");
    return v;
  }

  std::size_t count(const YAML::Node& node, const std::string& name) const {
    const long long v = scalar<long long>(node, name);
    if (v < 0) fail(node, "'" + name + "' must be nonnegative");
    return static_cast<std::size_t>(v);
  }

  std::vector<double> reals(const YAML::Node& node, const std::string& name) const {
    if (!node.IsSequence()) fail(node, "'" + name + "' must be a list");
    std::vector<double> out;
    for (const auto& e : node) out.push_back(real(e, name));
    return out;
  }

  // Rethrows library errors as configuration errors at the node position;
  // the original code stays in the message.
  template <typename F>
  auto anchored(const YAML::Node& node, F&& f) const {
    try {
      return f();
    } catch (const Error& e) {
      if (e.code() == ErrorCode::InvalidConfig) throw;
      throw Error(ErrorCode::InvalidConfig, where(origin_, node) + ": " + e.what());
    }
  }

  SourceSpec source(const YAML::Node& node) const {
    expect_map(node, "source");
    allow_keys(node, {"sigma2_x", "gains", "covariance"});
    const bool has_cov = static_cast<bool>(node["covariance"]);
    const bool has_gains = static_cast<bool>(node["gains"]) || static_cast<bool>(node["sigma2_x"]);
    if (has_cov == has_gains) fail(node, "source needs either 'covariance' or 'sigma2_x' with 'gains'");
    if (has_cov) {
      const YAML::Node c = node["covariance"];
      if (!c.IsSequence() || c.size() == 0) fail(c, "'covariance' must be a nonempty list of rows");
      const auto dim = static_cast<Eigen::Index>(c.size());
      Eigen::MatrixXd m(dim, dim);
      for (Eigen::Index i = 0; i < dim; ++i) {
        const std::vector<double> row = reals(c[static_cast<std::size_t>(i)], "covariance row");
        if (static_cast<Eigen::Index>(row.size()) != dim) fail(c[static_cast<std::size_t>(i)], "covariance must be square");
        for (Eigen::Index j = 0; j < dim; ++j) m(i, j) = row[static_cast<std::size_t>(j)];
      }
      return anchored(c, [&] { return SourceSpec::from_covariance(m); });
    }
    if (!node["sigma2_x"]) fail(node, "'sigma2_x' is required with 'gains'");
    if (!node["gains"]) fail(node, "'gains' is required with 'sigma2_x'");
    const double s2 = real(node["sigma2_x"], "sigma2_x");
    std::vector<double> gains = reals(node["gains"], "gains");
    return anchored(node, [&] { return SourceSpec::from_gains(s2, std::move(gains)); });
  }

  AccessSpec access(const YAML::Node& node, int l) const {
    expect_map(node, "access");
    allow_keys(node, {"minimal_sets", "threshold", "threshold_sweep"});
    const int forms = static_cast<int>(static_cast<bool>(node["minimal_sets"])) +
                      static_cast<int>(static_cast<bool>(node["threshold"])) +
                      static_cast<int>(static_cast<bool>(node["threshold_sweep"]));
    if (forms != 1) fail(node, "access needs exactly one of 'minimal_sets', 'threshold', 'threshold_sweep'");
    AccessSpec a;
    if (const YAML::Node sets = node["minimal_sets"]) {
      a.kind = AccessSpec::Kind::MinimalSets;
      if (!sets.IsSequence()) fail(sets, "'minimal_sets' must be a list of participant lists");
      for (const auto& s : sets) {
        if (!s.IsSequence()) fail(s, "each minimal set must be a list of participant indices");
        Subset sub;
        for (const auto& p : s) {
          const int idx = scalar<int>(p, "participant");
          if (idx < 1 || idx > l) fail(p, "participant " + std::to_string(idx) + " outside 1.." + std::to_string(l));
          sub.insert(idx);
        }
        if (sub.empty()) fail(s, "minimal sets must be nonempty");
        a.minimal_sets.push_back(sub);
      }
      anchored(sets, [&] { return monotone_closure(l, a.minimal_sets); });
    } else if (const YAML::Node t = node["threshold"]) {
      a.kind = AccessSpec::Kind::Threshold;
      a.threshold = scalar<int>(t, "threshold");
      anchored(t, [&] { return threshold_structure(l, a.threshold); });
    } else {
      const YAML::Node s = node["threshold_sweep"];
      if (!scalar<bool>(s, "threshold_sweep")) fail(s, "'threshold_sweep' must be true when present");
      a.kind = AccessSpec::Kind::ThresholdSweep;
    }
    return a;
  }

  RpSpec rp(const YAML::Node& node) const {
    expect_map(node, "rp");
    allow_keys(node, {"value", "infinity", "grid"});
    const int forms = static_cast<int>(static_cast<bool>(node["value"])) +
                      static_cast<int>(static_cast<bool>(node["infinity"])) +
                      static_cast<int>(static_cast<bool>(node["grid"]));
    if (forms != 1) fail(node, "rp needs exactly one of 'value', 'infinity', 'grid'");
    RpSpec r;
    if (const YAML::Node v = node["value"]) {
      r.kind = RpSpec::Kind::Value;
      r.value = real(v, "value");
      if (r.value < 0.0) fail(v, "public rate must be nonnegative");
    } else if (const YAML::Node inf = node["infinity"]) {
      if (!scalar<bool>(inf, "infinity")) fail(inf, "'infinity' must be true when present");
      r.kind = RpSpec::Kind::Infinity;
    } else {
      const YAML::Node g = node["grid"];
      expect_map(g, "grid");
      allow_keys(g, {"min", "max", "points"});
      if (!g["min"] || !g["max"] || !g["points"]) fail(g, "grid needs 'min', 'max' and 'points'");
      r.kind = RpSpec::Kind::Grid;
      r.min = real(g["min"], "min");
      r.max = real(g["max"], "max");
      r.points = count(g["points"], "points");
      if (r.min < 0.0) fail(g["min"], "grid min must be nonnegative");
      if (r.points < 1) fail(g["points"], "grid needs at least one point");
      if (r.points > 1 && !(r.max > r.min)) fail(g["max"], "grid max must exceed min");
      if (r.points > 1'000'000) fail(g["points"], "grid has too many points");
    }
    return r;
  }

  ProtocolConfig sim(const YAML::Node& node) const {
    expect_map(node, "sim");
    allow_keys(node, {"levels", "n", "q", "epsilon", "rv", "rv_prime", "k", "seed", "trials", "aux_rate", "leakage",
                      "leak_levels", "budget", "threads"});
    ProtocolConfig c;
    if (node["levels"]) c.levels = count(node["levels"], "levels");
    if (node["n"]) c.n = count(node["n"], "n");
    if (node["q"]) c.q = count(node["q"], "q");
    if (node["epsilon"]) c.epsilon = real(node["epsilon"], "epsilon");
    if (node["rv"]) c.rv = real(node["rv"], "rv");
    if (node["rv_prime"]) c.rv_prime = real(node["rv_prime"], "rv_prime");
    if (node["k"]) c.k = count(node["k"], "k");
    if (node["seed"]) c.seed = scalar<std::uint64_t>(node["seed"], "seed");
    if (node["trials"]) c.trials = count(node["trials"], "trials");
    if (node["aux_rate"]) c.aux_rate = real(node["aux_rate"], "aux_rate");
    if (const YAML::Node m = node["leakage"]) {
      const std::string mode = scalar<std::string>(m, "leakage");
      if (mode == "auto") {
        c.leakage = LeakageMode::Auto;
      } else if (mode == "exact") {
        c.leakage = LeakageMode::Exact;
      } else if (mode == "off") {
        c.leakage = LeakageMode::Off;
      } else {
        fail(m, "'leakage' must be auto, exact or off");
      }
    }
    if (node["leak_levels"]) c.leak_levels = count(node["leak_levels"], "leak_levels");
    if (node["budget"]) c.budget = count(node["budget"], "budget");
    if (node["threads"]) c.threads = static_cast<unsigned>(count(node["threads"], "threads"));
    anchored(node, [&] {
      c.validate();
      return 0;
    });
    return c;
  }

 private:
  std::string origin_;
};

}  // namespace detail

// Parses a version-1 configuration document. `origin` prefixes error
// positions (usually the file name).
inline RunConfig parse_config(const std::string& text, const std::string& origin = "config") {
  YAML::Node root;
  try {
    root = YAML::Load(text);
  } catch (const YAML::ParserException& e) {
    throw Error(ErrorCode::InvalidConfig, origin + ":" + std::to_string(e.mark.line + 1) + ":" +
                                              std::to_string(e.mark.column + 1) + ": " + e.msg);
  }
  const detail::ConfigReader rd(origin);
  if (!root.IsMap()) rd.fail(root, "configuration must be a mapping");
  rd.allow_keys(root, {"version", "source", "access", "rp", "oracle", "sim", "output"});
  if (!root["version"]) rd.fail(root, "missing required 'version'");
  if (rd.scalar<int>(root["version"], "version") != 1) rd.fail(root["version"], "unsupported version (expected 1)");
  if (!root["source"]) rd.fail(root, "missing required 'source'");

  RunConfig c(rd.source(root["source"]));
  if (root["access"]) c.access = rd.access(root["access"], c.source.participants());
  if (root["rp"]) c.rp = rd.rp(root["rp"]);
  if (const YAML::Node o = root["oracle"]) {
    rd.expect_map(o, "oracle");
    rd.allow_keys(o, {"grid_size"});
    if (o["grid_size"]) {
      c.oracle_grid = rd.count(o["grid_size"], "grid_size");
      if (c.oracle_grid < 100) rd.fail(o["grid_size"], "grid_size must be at least 100");
    }
  }
  if (root["sim"]) c.sim = rd.sim(root["sim"]);
  if (const YAML::Node out = root["output"]) {
    rd.expect_map(out, "output");
    rd.allow_keys(out, {"path", "format"});
    if (out["path"]) c.output_path = rd.scalar<std::string>(out["path"], "path");
    if (out["format"]) {
      c.output_format = rd.scalar<std::string>(out["format"], "format");
      if (*c.output_format != "csv" && *c.output_format != "text") rd.fail(out["format"], "format must be csv or text");
    }
  }
  return c;
}

inline RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::InvalidConfig, path + ": cannot open configuration file");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str(), path);
}

// ---------------------------------------------------------------------------
// Number and CSV formatting

// Twelve significant digits, '.' decimal separator regardless of locale.
inline std::string format_number(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  if (std::isnan(v)) return "nan";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  std::string s(buf);
  for (char& ch : s) {
    if (ch == ',') ch = '.';
  }
  return s;
}

inline double parse_number(const std::string& s) {
  if (s == "inf") return std::numeric_limits<double>::infinity();
  if (s == "-inf") return -std::numeric_limits<double>::infinity();
  if (s == "nan") return std::numeric_limits<double>::quiet_NaN();
  std::istringstream in(s);
  in.imbue(std::locale::classic());
  double v = 0.0;
  in >> v;
  if (in.fail() || !in.eof()) throw Error(ErrorCode::InvalidInput, "not a number: '" + s + "'");
  return v;
}

inline std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char ch : s) {
    if (ch == '"') out += '"';
    out += ch;
  }
  return out + "\"";
}

inline std::vector<std::string> parse_csv_line(const std::string& line) {
  std::vector<std::string> out(1);
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char ch = line[i];
    if (quoted) {
      if (ch == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        out.back() += '"';
        ++i;
      } else if (ch == '"') {
        quoted = false;
      } else {
        out.back() += ch;
      }
    } else if (ch == '"') {
      quoted = true;
    } else if (ch == ',') {
      out.emplace_back();
    } else {
      out.back() += ch;
    }
  }
  return out;
}

template <typename... Fields>
std::string csv_row(const Fields&... fields) {
  std::string line;
  bool first = true;
  ((line += (first ? "" : ","), line += csv_field(fields), first = false), ...);
  return line + "\n";
}

// ---------------------------------------------------------------------------
// Emitters

namespace detail {

inline std::string points_csv_body(const std::vector<CapacityPoint>& points) {
  std::string out = csv_row(std::string("rp"), std::string("cs"), std::string("sigma2_star"), std::string("a_star"),
                            std::string("u_star"), std::string("cs_infinity"));
  for (const CapacityPoint& p : points) {
    out += csv_row(p.rp.is_unlimited() ? std::string("inf") : format_number(p.rp.bits()), format_number(p.cs),
                   p.sigma2_star ? format_number(*p.sigma2_star) : std::string(), p.extremal.a_star.to_string(),
                   p.extremal.u_star.to_string(), std::string());
  }
  return out;
}

}  // namespace detail

inline std::string points_csv(const std::vector<CapacityPoint>& points) { return detail::points_csv_body(points); }

// One row per grid point, then a closing rp = inf row carrying the asymptote.
inline std::string region_csv(const RateRegion& region) {
  std::string out = detail::points_csv_body(region.points);
  const ExtremalSets& ext = region.points.front().extremal;
  out += csv_row(std::string("inf"), format_number(region.cs_infinity), std::string(), ext.a_star.to_string(),
                 ext.u_star.to_string(), format_number(region.cs_infinity));
  return out;
}

namespace detail {

inline void emit_set(YAML::Emitter& e, const char* key, Subset s) {
  e << YAML::Key << key << YAML::Value << YAML::Flow << YAML::BeginSeq;
  for (int p : s.members()) e << p;
  e << YAML::EndSeq;
}

inline void emit_number(YAML::Emitter& e, const char* key, double v) {
  e << YAML::Key << key << YAML::Value;
  if (std::isinf(v)) {
    e << (v > 0 ? ".inf" : "-.inf");
  } else if (std::isnan(v)) {
    e << ".nan";
  } else {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    e << std::string(buf);
  }
}

inline void emit_extremal(YAML::Emitter& e, const ExtremalSets& x) {
  emit_set(e, "a_star", x.a_star);
  emit_set(e, "u_star", x.u_star);
  emit_number(e, "o_a_star", x.o_a_star);
  emit_number(e, "o_u_star", x.o_u_star);
}

}  // namespace detail

inline std::string capacity_text(const std::vector<CapacityPoint>& points) {
  YAML::Emitter e;
  e << YAML::BeginMap << YAML::Key << "points" << YAML::Value << YAML::BeginSeq;
  for (const CapacityPoint& p : points) {
    e << YAML::BeginMap;
    if (p.rp.is_unlimited()) {
      e << YAML::Key << "rp" << YAML::Value << ".inf";
    } else {
      detail::emit_number(e, "rp", p.rp.bits());
    }
    detail::emit_number(e, "cs", p.cs);
    if (p.sigma2_star) detail::emit_number(e, "sigma2_star", *p.sigma2_star);
    detail::emit_extremal(e, p.extremal);
    e << YAML::EndMap;
  }
  e << YAML::EndSeq << YAML::EndMap;
  return std::string(e.c_str()) + "\n";
}

inline std::string region_text(const RateRegion& region) {
  YAML::Emitter e;
  e << YAML::BeginMap;
  detail::emit_number(e, "cs_infinity", region.cs_infinity);
  e << YAML::Key << "points" << YAML::Value << YAML::BeginSeq;
  for (const CapacityPoint& p : region.points) {
    e << YAML::BeginMap;
    if (p.rp.is_unlimited()) {
      e << YAML::Key << "rp" << YAML::Value << ".inf";
    } else {
      detail::emit_number(e, "rp", p.rp.bits());
    }
    detail::emit_number(e, "cs", p.cs);
    if (p.sigma2_star) detail::emit_number(e, "sigma2_star", *p.sigma2_star);
    detail::emit_extremal(e, p.extremal);
    e << YAML::EndMap;
  }
  e << YAML::EndSeq << YAML::EndMap;
  return std::string(e.c_str()) + "\n";
}

struct ThresholdTable {
  struct CapacityRow {
    int t = 1;
    double rp = 0.0;
    double cs = 0.0;
  };
  std::vector<CapacityRow> capacities;
  std::vector<ThresholdComparison> verdicts;
  double verdict_rp = 0.0;
};

// Capacity of every threshold structure over the grid, plus the pairwise
// comparison of A_t against A_{t+i} at the largest grid rate.
inline ThresholdTable threshold_table(const SourceSpec& spec, const std::vector<double>& grid) {
  if (!spec.is_gains()) throw Error(ErrorCode::InvalidConfig, "threshold comparison requires a gain-vector source");
  if (grid.empty()) throw Error(ErrorCode::EmptyGrid, "empty public-rate grid");
  const int l = spec.participants();
  const std::vector<ExtremalSets> chain = threshold_star_chain(spec);
  ThresholdTable table;
  for (int t = 1; t <= l; ++t) {
    for (double rp : grid) {
      const double cs = secret_capacity_from(spec, chain[static_cast<std::size_t>(t - 1)], PublicRate::finite(rp)).cs;
      table.capacities.push_back({t, rp, cs});
    }
  }
  table.verdict_rp = grid.back();
  for (int t = 1; t < l; ++t) {
    for (int i = 1; t + i <= l; ++i) table.verdicts.push_back(threshold_compare(spec, t, i, PublicRate::finite(grid.back())));
  }
  return table;
}

inline std::string threshold_csv(const ThresholdTable& table) {
  std::string out = csv_row(std::string("kind"), std::string("t"), std::string("i"), std::string("rp"),
                            std::string("cs"), std::string("lhs"), std::string("rhs"), std::string("verdict"));
  for (const auto& r : table.capacities) {
    out += csv_row(std::string("capacity"), std::to_string(r.t), std::string(), format_number(r.rp),
                   format_number(r.cs), std::string(), std::string(), std::string());
  }
  for (const auto& v : table.verdicts) {
    out += csv_row(std::string("verdict"), std::to_string(v.t), std::to_string(v.i), format_number(table.verdict_rp),
                   std::string(), v.lhs ? format_number(*v.lhs) : std::string(), format_number(v.rhs),
                   std::string(to_string(v.verdict)));
  }
  return out;
}

inline std::string threshold_text(const ThresholdTable& table) {
  YAML::Emitter e;
  e << YAML::BeginMap << YAML::Key << "capacity" << YAML::Value << YAML::BeginSeq;
  for (const auto& r : table.capacities) {
    e << YAML::Flow << YAML::BeginMap << YAML::Key << "t" << YAML::Value << r.t;
    detail::emit_number(e, "rp", r.rp);
    detail::emit_number(e, "cs", r.cs);
    e << YAML::EndMap;
  }
  e << YAML::EndSeq << YAML::Key << "verdicts" << YAML::Value << YAML::BeginSeq;
  for (const auto& v : table.verdicts) {
    e << YAML::BeginMap << YAML::Key << "t" << YAML::Value << v.t << YAML::Key << "i" << YAML::Value << v.i;
    detail::emit_number(e, "rp", table.verdict_rp);
    if (v.lhs) detail::emit_number(e, "lhs", *v.lhs);
    detail::emit_number(e, "rhs", v.rhs);
    e << YAML::Key << "verdict" << YAML::Value << to_string(v.verdict);
    e << YAML::Key << "from_ratio" << YAML::Value << v.from_ratio;
    detail::emit_number(e, "cs_t", v.cs_t);
    detail::emit_number(e, "cs_t_plus_i", v.cs_t_plus_i);
    e << YAML::EndMap;
  }
  e << YAML::EndSeq << YAML::EndMap;
  return std::string(e.c_str()) + "\n";
}

inline std::string oracle_text(const MinimaxReport& r, double rp, double tolerance) {
  YAML::Emitter e;
  e << YAML::BeginMap;
  detail::emit_number(e, "rp", rp);
  detail::emit_number(e, "min_min_max", r.min_min_max);
  detail::emit_number(e, "max_min_min", r.max_min_min);
  detail::emit_number(e, "closed_form", r.closed_form);
  detail::emit_number(e, "saddle_gap", std::abs(r.min_min_max - r.max_min_min));
  detail::emit_number(e, "closed_form_gap", std::abs(std::max(0.0, r.min_min_max) - r.closed_form));
  detail::emit_number(e, "tolerance", tolerance);
  e << YAML::Key << "grid_points" << YAML::Value << r.grid_points;
  e << YAML::Key << "pairs" << YAML::Value << r.pairs;
  e << YAML::EndMap;
  return std::string(e.c_str()) + "\n";
}

inline std::string metrics_text(const MetricsReport& r) {
  using detail::emit_number;
  YAML::Emitter e;
  e << YAML::BeginMap;
  e << YAML::Key << "config" << YAML::Value << YAML::BeginMap;
  e << YAML::Key << "levels" << YAML::Value << r.levels;
  e << YAML::Key << "n" << YAML::Value << r.n;
  e << YAML::Key << "q" << YAML::Value << r.q;
  e << YAML::Key << "blocklength" << YAML::Value << r.blocklength;
  emit_number(e, "epsilon", r.epsilon);
  emit_number(e, "rv", r.rv);
  emit_number(e, "rv_prime", r.rv_prime);
  e << YAML::Key << "k" << YAML::Value << r.k;
  e << YAML::Key << "seed" << YAML::Value << r.seed;
  e << YAML::Key << "trials" << YAML::Value << r.trials;
  if (r.aux_sigma2_cond) emit_number(e, "aux_sigma2_cond", *r.aux_sigma2_cond);
  e << YAML::Key << "v_size" << YAML::Value << r.v_size;
  e << YAML::Key << "omega_count" << YAML::Value << r.omega_count;
  e << YAML::Key << "nu_count" << YAML::Value << r.nu_count;
  e << YAML::EndMap;

  e << YAML::Key << "rates" << YAML::Value << YAML::BeginMap;
  e << YAML::Key << "hash_seed_bits" << YAML::Value << r.hash_seed_bits;
  emit_number(e, "message_rate", r.message_rate);
  emit_number(e, "public_rate", r.public_rate);
  emit_number(e, "secret_rate", r.secret_rate);
  e << YAML::EndMap;

  e << YAML::Key << "encoder_fallbacks" << YAML::Value << r.encoder_fallbacks;
  e << YAML::Key << "errors" << YAML::Value << YAML::BeginSeq;
  for (const SetErrorRate& s : r.errors) {
    e << YAML::BeginMap;
    detail::emit_set(e, "set", s.set);
    e << YAML::Key << "errors" << YAML::Value << s.errors;
    e << YAML::Key << "secret_mismatches" << YAML::Value << s.secret_mismatches;
    emit_number(e, "rate", s.rate);
    emit_number(e, "ci_low", s.interval.low);
    emit_number(e, "ci_high", s.interval.high);
    e << YAML::EndMap;
  }
  e << YAML::EndSeq;

  e << YAML::Key << "leakage" << YAML::Value << YAML::BeginMap;
  e << YAML::Key << "mode" << YAML::Value << r.leakage_mode;
  e << YAML::Key << "levels" << YAML::Value << r.leak_levels;
  if (r.max_leakage) emit_number(e, "max", *r.max_leakage);
  e << YAML::Key << "sets" << YAML::Value << YAML::BeginSeq;
  for (const SetLeakage& s : r.leakage) {
    e << YAML::BeginMap;
    detail::emit_set(e, "set", s.set);
    e << YAML::Key << "computed" << YAML::Value << s.computed;
    if (s.computed) {
      emit_number(e, "with_observations", s.leakage);
      emit_number(e, "public_only", s.public_only);
    }
    e << YAML::EndMap;
  }
  e << YAML::EndSeq << YAML::EndMap;

  e << YAML::Key << "uniformity" << YAML::Value << YAML::BeginMap;
  e << YAML::Key << "computed" << YAML::Value << r.uniformity_gap.has_value();
  if (r.secret_entropy) emit_number(e, "secret_entropy", *r.secret_entropy);
  if (r.uniformity_gap) emit_number(e, "gap", *r.uniformity_gap);
  e << YAML::EndMap;

  e << YAML::Key << "error_bound" << YAML::Value << YAML::BeginMap;
  emit_number(e, "value", r.error_bound.value);
  emit_number(e, "clamped", r.error_bound.clamped);
  e << YAML::Key << "vacuous" << YAML::Value << r.error_bound.vacuous;
  e << YAML::Key << "sets" << YAML::Value << YAML::BeginSeq;
  for (const ErrorBoundTerms& t : r.error_bound.per_set) {
    e << YAML::BeginMap;
    detail::emit_set(e, "set", t.set);
    emit_number(e, "source_atypical", t.source_atypical);
    emit_number(e, "wrong_index", t.wrong_index);
    emit_number(e, "no_codeword", t.no_codeword);
    emit_number(e, "markov", t.markov);
    emit_number(e, "delta", t.delta);
    e << YAML::EndMap;
  }
  e << YAML::EndSeq << YAML::EndMap;

  e << YAML::Key << "rate_bound" << YAML::Value << YAML::BeginMap;
  emit_number(e, "rs_lower", r.rate_bound.rs_lower);
  emit_number(e, "rp_upper", r.rate_bound.rp_upper);
  emit_number(e, "max_penalty", r.rate_bound.max_delta2);
  emit_number(e, "rs_asymptotic", r.rate_bound.rs_asymptotic);
  emit_number(e, "rp_asymptotic", r.rate_bound.rp_asymptotic);
  e << YAML::EndMap;
  e << YAML::EndMap;
  return std::string(e.c_str()) + "\n";
}

inline std::string outcomes_csv(const MetricsReport& r) {
  std::string out = csv_row(std::string("trial"), std::string("set"), std::string("success"), std::string("leakage_mode"));
  for (const TrialOutcome& o : r.outcomes) {
    out += csv_row(std::to_string(o.trial), o.set.to_string(), std::string(o.success ? "1" : "0"), r.leakage_mode);
  }
  return out;
}

}  // namespace gshare
