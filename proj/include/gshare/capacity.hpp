#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "gshare/access_structure.hpp"
#include "gshare/error.hpp"
#include "gshare/source_model.hpp"

namespace gshare {

// Public communication rate in bits per source symbol; either a finite
// nonnegative value or unlimited.
class PublicRate {
 public:
  static PublicRate finite(double bits) {
    if (!(bits >= 0.0) || !std::isfinite(bits)) {
      throw Error(ErrorCode::NegativeRate, "public rate must be finite and nonnegative, got " + std::to_string(bits));
    }
    return PublicRate(bits);
  }
  static PublicRate unlimited() { return PublicRate(); }

  bool is_unlimited() const noexcept { return !bits_.has_value(); }
  // Precondition: !is_unlimited().
  double bits() const { return bits_.value(); }

  friend bool operator==(const PublicRate&, const PublicRate&) = default;

 private:
  PublicRate() = default;
  explicit PublicRate(double bits) : bits_(bits) {}
  std::optional<double> bits_;
};

struct CapacityPoint {
  PublicRate rp = PublicRate::unlimited();
  double cs = 0.0;
  // Optimal conditional variance of X given the auxiliary; absent when the
  // rate is unlimited (the optimum tends to 0).
  std::optional<double> sigma2_star;
  ExtremalSets extremal;
};

struct RateRegion {
  std::vector<CapacityPoint> points;
  double cs_infinity = 0.0;
};

namespace detail {

inline void check_conditional_variance(double sigma2_cond, double sigma2_x) {
  if (!(sigma2_cond > 0.0) || sigma2_cond > sigma2_x) {
    throw Error(ErrorCode::DomainError, "conditional variance " + std::to_string(sigma2_cond) +
                                            " outside (0, " + std::to_string(sigma2_x) + "]");
  }
}

// 1/2 log2((c x + 1) / (d x + 1)), the monotone building block of both rates.
inline double half_log_ratio(double c, double d, double x) {
  return 0.5 * std::log2((c * x + 1.0) / (d * x + 1.0));
}

// 1/2 log2((sigma2_x o + 1) / (sigma2 o + 1)).
inline double observation_gain(double sigma2_x, double sigma2, double o) {
  return 0.5 * (std::log2(sigma2_x * o + 1.0) - std::log2(sigma2 * o + 1.0));
}

}  // namespace detail

// Public rate spent when the auxiliary leaves conditional variance sigma2_cond,
// against an authorized set with coefficient o_a.
inline double i_p(double sigma2_cond, double o_a, const SourceSpec& spec) {
  const double s2 = spec.sigma2_x();
  detail::check_conditional_variance(sigma2_cond, s2);
  return 0.5 * std::log2(s2 / sigma2_cond) - detail::observation_gain(s2, sigma2_cond, o_a);
}

// Secret rate for the pair (A, U) at conditional variance sigma2_cond.
inline double i_s(double sigma2_cond, double o_a, double o_u, const SourceSpec& spec) {
  const double s2 = spec.sigma2_x();
  detail::check_conditional_variance(sigma2_cond, s2);
  return detail::observation_gain(s2, sigma2_cond, o_a) - detail::observation_gain(s2, sigma2_cond, o_u);
}

// The conditional variance at which i_p equals rp:
//   sigma2_x / (sigma2_x o_a (2^{2 rp} - 1) + 2^{2 rp}).
inline double optimal_sigma(const SourceSpec& spec, double o_a, double rp) {
  if (!(rp >= 0.0) || !std::isfinite(rp)) {
    throw Error(ErrorCode::NegativeRate, "rate must be finite and nonnegative");
  }
  const double s2 = spec.sigma2_x();
  const double growth = std::exp2(2.0 * rp);
  return s2 / (s2 * o_a * std::expm1(2.0 * rp * std::log(2.0)) + growth);
}

// Closed-form secret capacity at public rate rp, clamped at zero. Returns
// exactly zero whenever the weakest authorized set is weaker than the
// strongest unauthorized one.
inline CapacityPoint secret_capacity_from(const SourceSpec& spec, const ExtremalSets& ext, PublicRate rp) {
  CapacityPoint p;
  p.rp = rp;
  p.extremal = ext;
  const double s2 = spec.sigma2_x();
  if (!rp.is_unlimited()) p.sigma2_star = optimal_sigma(spec, ext.o_a_star, rp.bits());
  if (ext.o_a_star < ext.o_u_star) {
    p.cs = 0.0;
    return p;
  }
  const double den = s2 * ext.o_u_star + 1.0;
  double num = 0.0;
  if (rp.is_unlimited()) {
    num = s2 * ext.o_a_star + 1.0;
  } else {
    const double shrink = std::exp2(-2.0 * rp.bits());
    num = s2 * ext.o_u_star * shrink + s2 * ext.o_a_star * (1.0 - shrink) + 1.0;
  }
  p.cs = std::max(0.0, 0.5 * std::log2(num / den));
  return p;
}

inline CapacityPoint secret_capacity(const SourceSpec& spec, const AccessStructure& structure, PublicRate rp) {
  return secret_capacity_from(spec, extremal_sets(structure, spec), rp);
}

inline unsigned resolve_threads(unsigned requested) {
  if (requested != 0) return requested;
  return std::max(1u, std::thread::hardware_concurrency());
}

// One capacity point per grid value. Grid points are independent; they are
// split into contiguous chunks across `threads` workers (0 = hardware) and
// written back by index.
inline RateRegion rate_region(const SourceSpec& spec, const AccessStructure& structure,
                              const std::vector<double>& rp_grid, unsigned threads = 1) {
  if (rp_grid.empty()) throw Error(ErrorCode::EmptyGrid, "rate grid is empty");
  for (std::size_t i = 0; i < rp_grid.size(); ++i) {
    if (!(rp_grid[i] >= 0.0) || !std::isfinite(rp_grid[i])) {
      throw Error(ErrorCode::NegativeRate, "grid values must be finite and nonnegative");
    }
    if (i > 0 && !(rp_grid[i] > rp_grid[i - 1])) {
      throw Error(ErrorCode::InvalidInput, "grid must be strictly increasing");
    }
  }
  const ExtremalSets ext = extremal_sets(structure, spec);
  RateRegion region;
  region.points.resize(rp_grid.size());
  const std::size_t workers = std::min<std::size_t>(resolve_threads(threads), rp_grid.size());
  auto fill = [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      region.points[i] = secret_capacity_from(spec, ext, PublicRate::finite(rp_grid[i]));
    }
  };
  if (workers <= 1) {
    fill(0, rp_grid.size());
  } else {
    std::vector<std::thread> pool;
    const std::size_t chunk = (rp_grid.size() + workers - 1) / workers;
    for (std::size_t w = 0; w < workers; ++w) {
      const std::size_t begin = w * chunk;
      const std::size_t end = std::min(rp_grid.size(), begin + chunk);
      if (begin < end) pool.emplace_back(fill, begin, end);
    }
    for (auto& t : pool) t.join();
  }
  region.cs_infinity = secret_capacity_from(spec, ext, PublicRate::unlimited()).cs;
  return region;
}

// ---------------------------------------------------------------------------
// Threshold comparison

enum class ThresholdVerdict {
  FirstAtLeast,  // C_s(A_t) >= C_s(A_{t+i})
  FirstAtMost,   // C_s(A_t) <= C_s(A_{t+i})
};

inline const char* to_string(ThresholdVerdict v) {
  return v == ThresholdVerdict::FirstAtLeast ? "ge" : "le";
}

struct ThresholdComparison {
  int t = 1;
  int i = 1;
  ExtremalSets at_t;
  ExtremalSets at_t_plus_i;
  // (o_U*(t+i) - o_U*(t)) / (o_A*(t+i) - o_A*(t)); absent when the
  // denominator is zero.
  std::optional<double> lhs;
  // (1 + sigma2_x o_U*(t)) / (1 + sigma2_x o_A*(t))
  double rhs = 0.0;
  ThresholdVerdict verdict = ThresholdVerdict::FirstAtLeast;
  // True when the verdict came from the ratio test rather than from
  // comparing the two capacities directly.
  bool from_ratio = true;
  double cs_t = 0.0;
  double cs_t_plus_i = 0.0;
};

// Compares threshold structures A_t and A_{t+i} for a gain-vector source.
// The ratio test presumes neither capacity is clamped at zero and a nonzero
// denominator; outside that range the two capacities are compared directly.
inline ThresholdComparison threshold_compare(const SourceSpec& spec, int t, int i, PublicRate rp) {
  const int l = spec.participants();
  if (t < 1 || i < 1 || t + i > l) {
    throw Error(ErrorCode::IndexOutOfRange,
                "need 1 <= t, 1 <= i <= L - t; got t=" + std::to_string(t) + " i=" + std::to_string(i));
  }
  const std::vector<ExtremalSets> chain = threshold_star_chain(spec);
  ThresholdComparison c;
  c.t = t;
  c.i = i;
  c.at_t = chain[static_cast<std::size_t>(t - 1)];
  c.at_t_plus_i = chain[static_cast<std::size_t>(t + i - 1)];
  const double s2 = spec.sigma2_x();
  c.cs_t = secret_capacity_from(spec, c.at_t, rp).cs;
  c.cs_t_plus_i = secret_capacity_from(spec, c.at_t_plus_i, rp).cs;

  const double du = c.at_t_plus_i.o_u_star - c.at_t.o_u_star;
  const double da = c.at_t_plus_i.o_a_star - c.at_t.o_a_star;
  c.rhs = (1.0 + s2 * c.at_t.o_u_star) / (1.0 + s2 * c.at_t.o_a_star);
  if (da != 0.0) c.lhs = du / da;

  const bool unclamped = c.at_t.o_a_star >= c.at_t.o_u_star && c.at_t_plus_i.o_a_star >= c.at_t_plus_i.o_u_star;
  if (c.lhs && unclamped) {
    c.from_ratio = true;
    c.verdict = *c.lhs >= c.rhs ? ThresholdVerdict::FirstAtLeast : ThresholdVerdict::FirstAtMost;
  } else {
    c.from_ratio = false;
    c.verdict = c.cs_t >= c.cs_t_plus_i ? ThresholdVerdict::FirstAtLeast : ThresholdVerdict::FirstAtMost;
  }
  return c;
}

// ---------------------------------------------------------------------------
// Brute-force minimax oracle

struct MinimaxReport {
  double min_min_max = 0.0;  // min over (A, U) of max over feasible sigma2 of I_s
  double max_min_min = 0.0;  // max over sigma2 feasible for A* of min over (A, U) of I_s
  double closed_form = 0.0;  // secret_capacity(...).cs
  std::size_t grid_points = 0;
  std::size_t pairs = 0;
};

namespace detail {

// Log-spaced over [sigma2_x 1e-8, sigma2_x], with `extra` points merged in.
inline std::vector<double> conditional_variance_grid(double sigma2_x, std::size_t points,
                                                     const std::vector<double>& extra) {
  std::vector<double> grid;
  grid.reserve(points + extra.size());
  const double lo = std::log(sigma2_x * 1e-8);
  const double hi = std::log(sigma2_x);
  for (std::size_t k = 0; k < points; ++k) {
    const double frac = points == 1 ? 1.0 : static_cast<double>(k) / static_cast<double>(points - 1);
    grid.push_back(k + 1 == points ? sigma2_x : std::exp(lo + frac * (hi - lo)));
  }
  for (double e : extra) {
    if (e > 0.0 && e <= sigma2_x) grid.push_back(e);
  }
  std::sort(grid.begin(), grid.end());
  grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
  return grid;
}

}  // namespace detail

// Evaluates the converse's min-min-max expression and its swapped max-min-min
// order by exhaustive search over every (A, U) pair and a conditional-variance
// grid, for a finite public rate. The feasibility boundary of every authorized
// set is inserted into the grid analytically.
inline MinimaxReport minimax_oracle(const SourceSpec& spec, const AccessStructure& structure, double rp,
                                    std::size_t grid_size = 10000) {
  if (grid_size < 100) throw Error(ErrorCode::InvalidInput, "oracle grid needs at least 100 points");
  const double s2 = spec.sigma2_x();
  const ExtremalSets ext = extremal_sets(structure, spec);

  std::vector<double> o_a;
  std::vector<double> o_u;
  for (Subset s : structure.authorized()) o_a.push_back(derive_gain_vector(spec, s).o);
  for (Subset s : structure.unauthorized()) o_u.push_back(derive_gain_vector(spec, s).o);

  std::vector<double> boundaries;
  for (double o : o_a) boundaries.push_back(optimal_sigma(spec, o, rp));
  const std::vector<double> grid = detail::conditional_variance_grid(s2, grid_size, boundaries);
  const std::size_t g = grid.size();

  // gain[o][k] = 1/2 log2((s2 o + 1) / (grid[k] o + 1)); I_s is a difference
  // of two of these, I_p = 1/2 log2(s2 / grid[k]) - gain_a.
  auto gains_for = [&](const std::vector<double>& os) {
    std::vector<std::vector<double>> table(os.size(), std::vector<double>(g));
    for (std::size_t j = 0; j < os.size(); ++j) {
      for (std::size_t k = 0; k < g; ++k) table[j][k] = detail::observation_gain(s2, grid[k], os[j]);
    }
    return table;
  };
  const auto gain_a = gains_for(o_a);
  const auto gain_u = gains_for(o_u);
  std::vector<double> total(g);
  for (std::size_t k = 0; k < g; ++k) total[k] = 0.5 * std::log2(s2 / grid[k]);

  // Feasibility I_p <= rp, with a tolerance for the analytically inserted
  // boundary point.
  const double tol = 1e-12 * std::max(1.0, rp);
  auto feasible = [&](std::size_t a, std::size_t k) { return total[k] - gain_a[a][k] <= rp + tol; };

  MinimaxReport r;
  r.grid_points = g;
  r.pairs = o_a.size() * o_u.size();
  r.min_min_max = std::numeric_limits<double>::infinity();
  for (std::size_t a = 0; a < o_a.size(); ++a) {
    for (std::size_t u = 0; u < o_u.size(); ++u) {
      double best = -std::numeric_limits<double>::infinity();
      for (std::size_t k = 0; k < g; ++k) {
        if (feasible(a, k)) best = std::max(best, gain_a[a][k] - gain_u[u][k]);
      }
      r.min_min_max = std::min(r.min_min_max, best);
    }
  }

  const auto a_star = static_cast<std::size_t>(
      std::find(structure.authorized().begin(), structure.authorized().end(), ext.a_star) -
      structure.authorized().begin());
  r.max_min_min = -std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < g; ++k) {
    if (!feasible(a_star, k)) continue;
    double worst = std::numeric_limits<double>::infinity();
    for (std::size_t a = 0; a < o_a.size(); ++a) {
      for (std::size_t u = 0; u < o_u.size(); ++u) worst = std::min(worst, gain_a[a][k] - gain_u[u][k]);
    }
    r.max_min_min = std::max(r.max_min_min, worst);
  }
  r.closed_form = secret_capacity_from(spec, ext, PublicRate::finite(rp)).cs;
  return r;
}

// ---------------------------------------------------------------------------
// Rate formulas via log-determinants versus scalar forms

struct RateFormulaRow {
  Subset a;
  Subset u;
  double rp_logdet = 0.0;
  double rp_scalar = 0.0;
  double rs_logdet = 0.0;
  double rs_scalar = 0.0;
};

struct RateFormulaReport {
  double sigma2_cond = 0.0;
  std::vector<RateFormulaRow> rows;
  double rp_logdet = 0.0;  // max over A
  double rp_scalar = 0.0;
  double rs_logdet = 0.0;  // min over (A, U)
  double rs_scalar = 0.0;
  double max_abs_diff = 0.0;
  bool agree = true;
};

namespace detail {

// Information carried by Y_S about a Gaussian auxiliary V = X + Z with
// Var(X | V) = sigma2_cond, h(Y_S) - h(Y_S | V), computed from the covariance
// of (Y_S, V) by the block-determinant formula.
inline double logdet_information(const Eigen::MatrixXd& full, Subset s, double sigma2_cond) {
  if (s.empty()) return 0.0;
  const double s2 = full(0, 0);
  const std::vector<int> members = s.members();
  const Eigen::Index m = static_cast<Eigen::Index>(members.size());
  Eigen::MatrixXd ys(m, m);
  for (Eigen::Index i = 0; i < m; ++i) {
    for (Eigen::Index j = 0; j < m; ++j) ys(i, j) = full(members[i], members[j]);
  }
  if (sigma2_cond >= s2) return 0.0;
  // Var(Z) such that s2 Var(Z) / (s2 + Var(Z)) = sigma2_cond.
  const double var_z = s2 * sigma2_cond / (s2 - sigma2_cond);
  const double var_v = s2 + var_z;
  Eigen::MatrixXd k(m + 1, m + 1);
  k.topLeftCorner(m, m) = ys;
  for (Eigen::Index i = 0; i < m; ++i) k(i, m) = k(m, i) = full(members[i], 0);
  k(m, m) = var_v;
  // h(Y) - h(Y|V) = 1/2 log2 det(Sigma_Y) - 1/2 log2(det(K) / var_v)
  return 0.5 * (std::log2(ys.determinant()) - std::log2(k.determinant() / var_v));
}

}  // namespace detail

// Public and secret rates of a Gaussian auxiliary with conditional variance
// sigma2_cond, once through differential entropies of the raw covariance and
// once through the scalar o-coefficient forms. Both must agree within 1e-9.
inline RateFormulaReport verify_rate_formulas(const SourceSpec& spec, const AccessStructure& structure,
                                              double sigma2_cond) {
  const double s2 = spec.sigma2_x();
  detail::check_conditional_variance(sigma2_cond, s2);
  const Eigen::MatrixXd full = spec.full_covariance();
  const double dealer = 0.5 * std::log2(s2 / sigma2_cond);

  RateFormulaReport rep;
  rep.sigma2_cond = sigma2_cond;
  rep.rp_logdet = rep.rp_scalar = -std::numeric_limits<double>::infinity();
  rep.rs_logdet = rep.rs_scalar = std::numeric_limits<double>::infinity();

  std::vector<double> info_u_logdet;
  std::vector<double> info_u_scalar;
  for (Subset u : structure.unauthorized()) {
    info_u_logdet.push_back(detail::logdet_information(full, u, sigma2_cond));
    info_u_scalar.push_back(detail::observation_gain(s2, sigma2_cond, derive_gain_vector(spec, u).o));
  }
  for (Subset a : structure.authorized()) {
    const double o_a = derive_gain_vector(spec, a).o;
    const double info_a_logdet = detail::logdet_information(full, a, sigma2_cond);
    const double info_a_scalar = detail::observation_gain(s2, sigma2_cond, o_a);
    const double rp_l = dealer - info_a_logdet;
    const double rp_s = i_p(sigma2_cond, o_a, spec);
    rep.rp_logdet = std::max(rep.rp_logdet, rp_l);
    rep.rp_scalar = std::max(rep.rp_scalar, rp_s);
    for (std::size_t j = 0; j < structure.unauthorized().size(); ++j) {
      RateFormulaRow row{a, structure.unauthorized()[j], rp_l, rp_s, info_a_logdet - info_u_logdet[j],
                         info_a_scalar - info_u_scalar[j]};
      rep.rs_logdet = std::min(rep.rs_logdet, row.rs_logdet);
      rep.rs_scalar = std::min(rep.rs_scalar, row.rs_scalar);
      for (auto [x, y] : {std::pair{row.rp_logdet, row.rp_scalar}, std::pair{row.rs_logdet, row.rs_scalar}}) {
        const double diff = std::abs(x - y);
        rep.max_abs_diff = std::max(rep.max_abs_diff, diff);
        if (diff > 1e-9 * std::max({1.0, std::abs(x), std::abs(y)})) rep.agree = false;
      }
      rep.rows.push_back(row);
    }
  }
  return rep;
}

}  // namespace gshare
