// Command-line front end: capacity | region | threshold | simulate | oracle.
//
// Exit codes: 0 success, 2 invalid input or configuration, 3 numeric failure.

#include <CLI11.hpp>

#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "gshare/io.hpp"

namespace {

constexpr int kExitInvalid = 2;
constexpr int kExitNumeric = 3;

struct Options {
  std::string config_path;
  std::string out_path;
  std::string format;
  std::optional<std::uint64_t> seed;
};

unsigned env_threads() {
  const char* v = std::getenv("GAUSS_SHARE_THREADS");
  if (v == nullptr || *v == '\0') return 1;
  char* end = nullptr;
  const unsigned long n = std::strtoul(v, &end, 10);
  if (*end != '\0') throw gshare::Error(gshare::ErrorCode::InvalidConfig, "GAUSS_SHARE_THREADS must be an integer");
  return gshare::resolve_threads(static_cast<unsigned>(n));
}

std::string resolve_format(const Options& opt, const gshare::RunConfig& cfg, const char* fallback) {
  if (!opt.format.empty()) return opt.format;
  return cfg.output_format.value_or(fallback);
}

void write_output(const Options& opt, const gshare::RunConfig& cfg, const std::string& body) {
  const std::string path = !opt.out_path.empty() ? opt.out_path : cfg.output_path.value_or("");
  if (path.empty() || path == "-") {
    std::cout << body;
    return;
  }
  std::ofstream out(path);
  if (!out) throw gshare::Error(gshare::ErrorCode::InvalidConfig, path + ": cannot open for writing");
  out << body;
}

gshare::PublicRate single_rate(const gshare::RpSpec& rp) {
  return rp.kind == gshare::RpSpec::Kind::Infinity ? gshare::PublicRate::unlimited()
                                                   : gshare::PublicRate::finite(rp.value);
}

const gshare::RpSpec& need_rp(const gshare::RunConfig& cfg) {
  if (!cfg.rp) throw gshare::Error(gshare::ErrorCode::InvalidConfig, "this command needs an 'rp' block");
  return *cfg.rp;
}

int cmd_capacity(const Options& opt) {
  const gshare::RunConfig cfg = gshare::load_config(opt.config_path);
  const gshare::AccessStructure structure = cfg.structure();
  const gshare::RpSpec& rp = need_rp(cfg);
  std::vector<gshare::CapacityPoint> points;
  if (rp.kind == gshare::RpSpec::Kind::Grid) {
    for (double r : rp.grid()) points.push_back(gshare::secret_capacity(cfg.source, structure, gshare::PublicRate::finite(r)));
  } else {
    points.push_back(gshare::secret_capacity(cfg.source, structure, single_rate(rp)));
  }
  if (resolve_format(opt, cfg, "text") == "csv") {
    write_output(opt, cfg, gshare::points_csv(points));
  } else {
    write_output(opt, cfg, gshare::capacity_text(points));
  }
  return 0;
}

int cmd_region(const Options& opt) {
  const gshare::RunConfig cfg = gshare::load_config(opt.config_path);
  const gshare::RpSpec& rp = need_rp(cfg);
  if (rp.kind == gshare::RpSpec::Kind::Infinity) {
    throw gshare::Error(gshare::ErrorCode::InvalidConfig, "region needs a finite 'grid' or 'value'");
  }
  const gshare::RateRegion region = gshare::rate_region(cfg.source, cfg.structure(), rp.grid(), env_threads());
  write_output(opt, cfg, resolve_format(opt, cfg, "csv") == "csv" ? gshare::region_csv(region)
                                                                   : gshare::region_text(region));
  return 0;
}

int cmd_threshold(const Options& opt) {
  const gshare::RunConfig cfg = gshare::load_config(opt.config_path);
  if (!cfg.access || cfg.access->kind != gshare::AccessSpec::Kind::ThresholdSweep) {
    throw gshare::Error(gshare::ErrorCode::InvalidConfig, "threshold needs 'access: {threshold_sweep: true}'");
  }
  const gshare::RpSpec& rp = need_rp(cfg);
  if (rp.kind == gshare::RpSpec::Kind::Infinity) {
    throw gshare::Error(gshare::ErrorCode::InvalidConfig, "threshold needs a finite 'grid' or 'value'");
  }
  const gshare::ThresholdTable table = gshare::threshold_table(cfg.source, rp.grid());
  write_output(opt, cfg, resolve_format(opt, cfg, "csv") == "csv" ? gshare::threshold_csv(table)
                                                                   : gshare::threshold_text(table));
  return 0;
}

int cmd_simulate(const Options& opt) {
  const gshare::RunConfig cfg = gshare::load_config(opt.config_path);
  if (!cfg.sim) throw gshare::Error(gshare::ErrorCode::InvalidConfig, "simulate needs a 'sim' block");
  gshare::ProtocolConfig pc = *cfg.sim;
  if (opt.seed) pc.seed = *opt.seed;
  if (std::getenv("GAUSS_SHARE_THREADS") != nullptr) pc.threads = env_threads();
  const gshare::MetricsReport report = gshare::run_protocol(cfg.source, cfg.structure(), pc);
  write_output(opt, cfg, resolve_format(opt, cfg, "text") == "csv" ? gshare::outcomes_csv(report)
                                                                    : gshare::metrics_text(report));
  return 0;
}

int cmd_oracle(const Options& opt) {
  const gshare::RunConfig cfg = gshare::load_config(opt.config_path);
  const gshare::RpSpec& rp = need_rp(cfg);
  if (rp.kind != gshare::RpSpec::Kind::Value) {
    throw gshare::Error(gshare::ErrorCode::InvalidConfig, "oracle needs a single finite 'rp: {value: ...}'");
  }
  const gshare::MinimaxReport r = gshare::minimax_oracle(cfg.source, cfg.structure(), rp.value, cfg.oracle_grid);
  const double tol = std::max(1e-4, 1.0 / static_cast<double>(cfg.oracle_grid));
  write_output(opt, cfg, gshare::oracle_text(r, rp.value, tol));
  const bool saddle = std::abs(r.min_min_max - r.max_min_min) <= tol;
  const bool closed = std::abs(std::max(0.0, r.min_min_max) - r.closed_form) <= tol;
  if (!saddle || !closed) {
    std::cerr << "error: oracle disagrees with the closed form beyond " << tol << "\n";
    return kExitNumeric;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Secret-sharing capacity of Gaussian sources over rate-limited public channels"};
  app.require_subcommand(1);
  Options opt;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", opt.config_path, "configuration file")->required();
    sub->add_option("--out", opt.out_path, "output path (default: config output.path, else stdout)");
    sub->add_option("--format", opt.format, "output format")->check(CLI::IsMember({"csv", "text"}));
    sub->add_option("--seed", opt.seed, "RNG seed for simulate, overrides the config");
  };
  CLI::App* capacity = app.add_subcommand("capacity", "secret capacity at one public rate or on a grid");
  CLI::App* region = app.add_subcommand("region", "capacity sweep over a public-rate grid");
  CLI::App* threshold = app.add_subcommand("threshold", "capacity of every threshold structure and pairwise verdicts");
  CLI::App* simulate = app.add_subcommand("simulate", "run the quantize/reconcile/hash protocol");
  CLI::App* oracle = app.add_subcommand("oracle", "brute-force minimax check against the closed form");
  for (CLI::App* s : {capacity, region, threshold, simulate, oracle}) add_common(s);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitInvalid;
  }

  try {
    if (*capacity) return cmd_capacity(opt);
    if (*region) return cmd_region(opt);
    if (*threshold) return cmd_threshold(opt);
    if (*simulate) return cmd_simulate(opt);
    if (*oracle) return cmd_oracle(opt);
  } catch (const gshare::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return gshare::is_numeric_failure(e.code()) ? kExitNumeric : kExitInvalid;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInvalid;
  }
  return kExitInvalid;
}
