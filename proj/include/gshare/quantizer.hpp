#pragma once

#include <boost/math/distributions/normal.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "gshare/discrete.hpp"
#include "gshare/error.hpp"
#include "gshare/source_model.hpp"
#include "gshare/subset.hpp"

namespace gshare {

// Equiprobable scalar quantizer for a zero-mean Gaussian: thresholds sit at
// the i/levels quantiles, so every bin has mass 1/levels.
struct Quantizer {
  double variance = 1.0;
  std::size_t levels = 2;
  std::vector<double> thresholds;  // levels - 1 ascending values

  std::size_t bin(double value) const {
    return static_cast<std::size_t>(std::upper_bound(thresholds.begin(), thresholds.end(), value) -
                                    thresholds.begin());
  }

  double lower(std::size_t b) const {
    return b == 0 ? -std::numeric_limits<double>::infinity() : thresholds[b - 1];
  }
  double upper(std::size_t b) const {
    return b + 1 == levels ? std::numeric_limits<double>::infinity() : thresholds[b];
  }
};

inline Quantizer build_quantizer(double variance, std::size_t levels) {
  if (!(variance > 0.0) || !std::isfinite(variance)) {
    throw Error(ErrorCode::DegenerateVariance, "variance must be positive, got " + std::to_string(variance));
  }
  if (levels < 2) throw Error(ErrorCode::InvalidInput, "quantizer needs at least 2 levels");
  Quantizer q;
  q.variance = variance;
  q.levels = levels;
  const boost::math::normal_distribution<double> dist(0.0, std::sqrt(variance));
  for (std::size_t i = 1; i < levels; ++i) {
    // Exact median for symmetric splits.
    if (2 * i == levels) {
      q.thresholds.push_back(0.0);
    } else {
      q.thresholds.push_back(boost::math::quantile(dist, static_cast<double>(i) / static_cast<double>(levels)));
    }
  }
  return q;
}

namespace detail {

// P(lo <= mean + sd Z < hi) for standard normal Z, accurate in both tails.
inline double normal_interval(double lo, double hi, double mean, double sd) {
  const double a = (lo - mean) / sd;
  const double b = (hi - mean) / sd;
  if (a >= b) return 0.0;
  constexpr double inv_sqrt2 = 0.70710678118654752440;
  if (a > 0.0) return 0.5 * (std::erfc(a * inv_sqrt2) - std::erfc(b * inv_sqrt2));
  if (b < 0.0) return 0.5 * (std::erfc(-b * inv_sqrt2) - std::erfc(-a * inv_sqrt2));
  return 1.0 - 0.5 * std::erfc(-a * inv_sqrt2) - 0.5 * std::erfc(b * inv_sqrt2);
}

// Integral of f over [lo, hi] split at the given interior breakpoints.
template <typename F>
double integrate_pieces(F f, double lo, double hi, std::vector<double> breaks) {
  std::vector<double> pts{lo};
  std::sort(breaks.begin(), breaks.end());
  for (double b : breaks) {
    if (std::isfinite(b) && b > pts.back() && b < hi) pts.push_back(b);
  }
  pts.push_back(hi);
  double total = 0.0;
  for (std::size_t k = 0; k + 1 < pts.size(); ++k) {
    total += boost::math::quadrature::gauss_kronrod<double, 31>::integrate(f, pts[k], pts[k + 1], 20, 1e-13);
  }
  return total;
}

}  // namespace detail

// Which auxiliary the dealer quantizes: the quantized source itself, or a
// Gaussian V = X + Z with the given conditional variance Var(X | V).
struct AuxiliaryChoice {
  std::optional<double> sigma2_cond;  // absent: V = X after quantization

  static AuxiliaryChoice identity() { return {}; }
  static AuxiliaryChoice gaussian(double sigma2_cond) { return {sigma2_cond}; }
  bool is_identity() const noexcept { return !sigma2_cond.has_value(); }
};

// Quantized joint distribution of (V, X, Y_1, ..., Y_L) for a gain-vector
// source, with V - X - Y Markov by construction: p(v, x, y) = p(v | x) p(x, y).
// Variable 0 is V, variable 1 is X, variable 1 + l is participant l.
class DiscreteModel {
 public:
  static constexpr std::size_t kV = 0;
  static constexpr std::size_t kX = 1;

  static std::size_t y_var(int participant) { return 1 + static_cast<std::size_t>(participant); }
  static std::vector<std::size_t> y_vars(Subset s) {
    std::vector<std::size_t> out;
    for (int p : s.members()) out.push_back(y_var(p));
    return out;
  }

  const JointPmf& pmf() const noexcept { return pmf_; }
  const Quantizer& x_quantizer() const noexcept { return x_quant_; }
  const std::vector<Quantizer>& y_quantizers() const noexcept { return y_quant_; }
  const std::optional<Quantizer>& v_quantizer() const noexcept { return v_quant_; }
  const AuxiliaryChoice& auxiliary() const noexcept { return aux_; }
  std::size_t v_size() const { return pmf_.dims()[kV]; }
  std::size_t x_size() const { return pmf_.dims()[kX]; }
  std::size_t y_size(Subset s) const {
    std::size_t n = 1;
    for (int p : s.members()) n *= pmf_.dims()[y_var(p)];
    return n;
  }
  int participants() const noexcept { return static_cast<int>(y_quant_.size()); }

  // p(v | x) as a |X| x |V| row-major table.
  const std::vector<double>& v_given_x() const noexcept { return v_given_x_; }

  // Joint pmf of (first, second) where each side is a list of variables
  // merged into one composite symbol (mixed radix, first listed most
  // significant).
  JointPmf pair(const std::vector<std::size_t>& first, const std::vector<std::size_t>& second) const {
    return pmf_.marginal(concat(first, second)).grouped({first.size(), second.size()});
  }

  static DiscreteModel build(const SourceSpec& spec, std::size_t levels, AuxiliaryChoice aux,
                             std::size_t y_levels = 0);

  // Direct construction from an explicit pmf over (V, X, Y_1..Y_L).
  static DiscreteModel from_pmf(JointPmf pmf) {
    if (pmf.variables() < 3) throw Error(ErrorCode::InvalidInput, "pmf needs V, X and at least one Y");
    if (std::abs(pmf.total() - 1.0) > 1e-9) throw Error(ErrorCode::InvalidInput, "pmf does not sum to 1");
    DiscreteModel m;
    m.pmf_ = std::move(pmf);
    m.y_quant_.resize(m.pmf_.variables() - 2);
    const JointPmf xv = m.pmf_.marginal({kX, kV});
    const std::size_t nx = xv.dims()[0];
    const std::size_t nv = xv.dims()[1];
    m.v_given_x_.assign(nx * nv, 0.0);
    for (std::size_t x = 0; x < nx; ++x) {
      double px = 0.0;
      for (std::size_t v = 0; v < nv; ++v) px += xv[x * nv + v];
      for (std::size_t v = 0; v < nv; ++v) m.v_given_x_[x * nv + v] = px > 0.0 ? xv[x * nv + v] / px : 0.0;
    }
    return m;
  }

 private:
  JointPmf pmf_;
  Quantizer x_quant_;
  std::vector<Quantizer> y_quant_;
  std::optional<Quantizer> v_quant_;
  AuxiliaryChoice aux_;
  std::vector<double> v_given_x_;
};

inline DiscreteModel DiscreteModel::build(const SourceSpec& spec, std::size_t levels, AuxiliaryChoice aux,
                                          std::size_t y_levels) {
  if (!spec.is_gains()) {
    throw Error(ErrorCode::InvalidConfig, "quantized simulation requires a gain-vector source");
  }
  if (y_levels == 0) y_levels = levels;
  const double s2 = spec.sigma2_x();
  const double sd = std::sqrt(s2);
  const auto& h = spec.gains();
  const std::size_t l = h.size();

  DiscreteModel m;
  m.aux_ = aux;
  m.x_quant_ = build_quantizer(s2, levels);
  for (double g : h) m.y_quant_.push_back(build_quantizer(g * g * s2 + 1.0, y_levels));

  auto density = [sd](double x) {
    constexpr double inv_sqrt_2pi = 0.39894228040143267794;
    const double z = x / sd;
    return inv_sqrt_2pi / sd * std::exp(-0.5 * z * z);
  };

  // p(x bin, y bins): integrate the X density over the x bin against the
  // product of per-participant conditional bin probabilities.
  std::size_t ny = 1;
  for (std::size_t k = 0; k < l; ++k) ny *= y_levels;
  std::vector<double> pxy(levels * ny, 0.0);
  std::vector<std::size_t> ybins(l, 0);
  for (std::size_t xb = 0; xb < levels; ++xb) {
    const double lo = m.x_quant_.lower(xb);
    const double hi = m.x_quant_.upper(xb);
    std::fill(ybins.begin(), ybins.end(), 0);
    for (std::size_t cell = 0; cell < ny; ++cell) {
      std::vector<double> breaks;
      for (std::size_t k = 0; k < l; ++k) {
        if (h[k] == 0.0) continue;
        const Quantizer& q = m.y_quant_[k];
        breaks.push_back(q.lower(ybins[k]) / h[k]);
        breaks.push_back(q.upper(ybins[k]) / h[k]);
      }
      auto f = [&](double x) {
        double v = density(x);
        for (std::size_t k = 0; k < l && v > 0.0; ++k) {
          const Quantizer& q = m.y_quant_[k];
          v *= detail::normal_interval(q.lower(ybins[k]), q.upper(ybins[k]), h[k] * x, 1.0);
        }
        return v;
      };
      pxy[xb * ny + cell] = detail::integrate_pieces(f, lo, hi, breaks);
      for (std::size_t k = l; k-- > 0;) {
        if (++ybins[k] < y_levels) break;
        ybins[k] = 0;
      }
    }
  }

  // p(v | x bin)
  std::size_t nv = levels;
  if (aux.is_identity()) {
    m.v_given_x_.assign(levels * levels, 0.0);
    for (std::size_t x = 0; x < levels; ++x) m.v_given_x_[x * levels + x] = 1.0;
  } else {
    const double sc = *aux.sigma2_cond;
    if (!(sc > 0.0) || sc > s2) {
      throw Error(ErrorCode::DomainError, "auxiliary conditional variance outside (0, sigma2_x]");
    }
    m.v_given_x_.assign(levels * nv, 1.0 / static_cast<double>(nv));
    if (sc < s2) {
      const double var_z = s2 * sc / (s2 - sc);
      const double sd_z = std::sqrt(var_z);
      m.v_quant_ = build_quantizer(s2 + var_z, nv);
      for (std::size_t xb = 0; xb < levels; ++xb) {
        double row = 0.0;
        for (std::size_t vb = 0; vb < nv; ++vb) {
          const double c = m.v_quant_->lower(vb);
          const double d = m.v_quant_->upper(vb);
          auto f = [&](double x) { return density(x) * detail::normal_interval(c, d, x, sd_z); };
          const double p = detail::integrate_pieces(f, m.x_quant_.lower(xb), m.x_quant_.upper(xb), {c, d});
          m.v_given_x_[xb * nv + vb] = p;
          row += p;
        }
        for (std::size_t vb = 0; vb < nv; ++vb) m.v_given_x_[xb * nv + vb] /= row;
      }
    }
  }

  double total = 0.0;
  for (double p : pxy) total += p;
  if (std::abs(total - 1.0) > 1e-8) {
    throw Error(ErrorCode::NumericMismatch, "quantized source mass sums to " + std::to_string(total));
  }

  std::vector<std::size_t> dims{nv, levels};
  for (std::size_t k = 0; k < l; ++k) dims.push_back(y_levels);
  std::vector<double> probs(nv * levels * ny);
  for (std::size_t v = 0; v < nv; ++v) {
    for (std::size_t x = 0; x < levels; ++x) {
      for (std::size_t y = 0; y < ny; ++y) {
        probs[(v * levels + x) * ny + y] = m.v_given_x_[x * nv + v] * pxy[x * ny + y] / total;
      }
    }
  }
  m.pmf_ = JointPmf(std::move(dims), std::move(probs));
  return m;
}

// One joint draw of (X, Y_1..Y_L) from a gain-vector source.
struct SourceSample {
  double x = 0.0;
  std::vector<double> y;
};

template <typename Rng>
SourceSample sample_source(const SourceSpec& spec, Rng& rng) {
  std::normal_distribution<double> standard(0.0, 1.0);
  SourceSample s;
  s.x = std::sqrt(spec.sigma2_x()) * standard(rng);
  s.y.reserve(spec.gains().size());
  for (double g : spec.gains()) s.y.push_back(g * s.x + standard(rng));
  return s;
}

struct QuantizedSample {
  std::size_t x = 0;
  std::vector<std::size_t> y;
};

inline QuantizedSample discretize_source(const Quantizer& x_quant, const std::vector<Quantizer>& y_quant,
                                         const SourceSample& sample) {
  QuantizedSample q;
  q.x = x_quant.bin(sample.x);
  q.y.reserve(sample.y.size());
  for (std::size_t k = 0; k < sample.y.size(); ++k) q.y.push_back(y_quant[k].bin(sample.y[k]));
  return q;
}

inline QuantizedSample discretize_source(const DiscreteModel& model, const SourceSample& sample) {
  return discretize_source(model.x_quantizer(), model.y_quantizers(), sample);
}

// Composite symbol of Y_S: mixed radix over ascending members, first member
// most significant. Matches DiscreteModel::pair ordering.
inline std::size_t composite_symbol(const std::vector<std::size_t>& per_participant, Subset s,
                                    std::size_t levels) {
  std::size_t sym = 0;
  for (int p : s.members()) sym = sym * levels + per_participant[static_cast<std::size_t>(p - 1)];
  return sym;
}

}  // namespace gshare
