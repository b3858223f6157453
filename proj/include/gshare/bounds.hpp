#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <string>
#include <vector>

#include "gshare/access_structure.hpp"
#include "gshare/discrete.hpp"
#include "gshare/error.hpp"
#include "gshare/quantizer.hpp"

namespace gshare {

// ---------------------------------------------------------------------------
// Reconciliation error bound

struct AuthorizedSetTerms {
  Subset set;
  double y_size = 1.0;  // |Y_A|
  double mu_xy = 1.0;   // min mass of p_{X Y_A}
  double mu_vxy = 1.0;  // min mass of p_{V X Y_A}
};

struct ErrorBoundInputs {
  std::size_t x_size = 2;
  std::size_t v_size = 2;
  double h_v = 1.0;    // H(V)
  double mu_vx = 1.0;  // min mass of p_{VX}
  std::vector<AuthorizedSetTerms> sets;
};

struct ErrorBoundTerms {
  Subset set;
  double source_atypical = 0.0;  // 2|X||Y_A| e^{-n eps1^2 mu_XY}
  double wrong_index = 0.0;      // 2^{-n eps H(V)}
  double no_codeword = 0.0;      // exp(-(1 - 2|V||X| e^{-n c mu_VX}) 2^{eps n H(V)})
  double markov = 0.0;           // 2|V||X||Y_A| e^{-n c mu_VXY}
  double delta = 0.0;            // sum of the four
};

struct ErrorBound {
  std::vector<ErrorBoundTerms> per_set;
  double value = 0.0;  // |A| max_A delta
  bool vacuous = false;  // value >= 1
  double clamped = 0.0;  // min(value, 1)
};

inline ErrorBound error_bound(std::size_t n, double epsilon, const ErrorBoundInputs& in) {
  if (n == 0) throw Error(ErrorCode::DomainError, "blocklength must be positive");
  if (!(epsilon > 0.0 && epsilon < 1.0)) throw Error(ErrorCode::DomainError, "epsilon must lie in (0, 1)");
  auto check_mu = [](double mu) {
    if (!(mu > 0.0 && mu <= 1.0)) throw Error(ErrorCode::DomainError, "mass constant outside (0, 1]");
  };
  check_mu(in.mu_vx);
  if (in.sets.empty()) throw Error(ErrorCode::InvalidInput, "no authorized sets");

  const double dn = static_cast<double>(n);
  const double eps1 = epsilon / 2.0;
  const double rate = (epsilon - eps1) * (epsilon - eps1) / (1.0 + eps1);
  const double x = static_cast<double>(in.x_size);
  const double v = static_cast<double>(in.v_size);

  ErrorBound b;
  double worst = 0.0;
  for (const auto& s : in.sets) {
    check_mu(s.mu_xy);
    check_mu(s.mu_vxy);
    ErrorBoundTerms t;
    t.set = s.set;
    t.source_atypical = 2.0 * x * s.y_size * std::exp(-dn * eps1 * eps1 * s.mu_xy);
    t.wrong_index = std::exp2(-dn * epsilon * in.h_v);
    t.no_codeword = std::exp(-(1.0 - 2.0 * v * x * std::exp(-dn * rate * in.mu_vx)) * std::exp2(epsilon * dn * in.h_v));
    t.markov = 2.0 * v * x * s.y_size * std::exp(-dn * rate * s.mu_vxy);
    t.delta = t.source_atypical + t.wrong_index + t.no_codeword + t.markov;
    worst = std::max(worst, t.delta);
    b.per_set.push_back(t);
  }
  b.value = static_cast<double>(in.sets.size()) * worst;
  b.vacuous = b.value >= 1.0;
  b.clamped = std::min(b.value, 1.0);
  return b;
}

inline ErrorBoundInputs error_bound_inputs(const DiscreteModel& model, const AccessStructure& structure) {
  const JointPmf& p = model.pmf();
  ErrorBoundInputs in;
  in.x_size = model.x_size();
  in.v_size = model.v_size();
  in.h_v = entropy_of(p, {DiscreteModel::kV});
  in.mu_vx = p.marginal({DiscreteModel::kV, DiscreteModel::kX}).min_mass();
  for (Subset a : structure.authorized()) {
    const auto ys = DiscreteModel::y_vars(a);
    AuthorizedSetTerms t;
    t.set = a;
    t.y_size = static_cast<double>(model.y_size(a));
    t.mu_xy = p.marginal(concat({DiscreteModel::kX}, ys)).min_mass();
    t.mu_vxy = p.marginal(concat({DiscreteModel::kV, DiscreteModel::kX}, ys)).min_mass();
    in.sets.push_back(t);
  }
  return in;
}

// ---------------------------------------------------------------------------
// Finite-length achievable secret rate

struct UnauthorizedSetTerms {
  Subset set;
  double i_v_y = 0.0;        // I(V; Y_U)
  double i_x_v_given_y = 0.0;  // I(X; V | Y_U)
  double h_x_given_yv = 0.0;   // H(X | Y_U V)
  double y_size = 1.0;         // |Y_U|
  double mu_vxy = 1.0;         // min mass of p_{V X Y_U}
  double support_vy = 1.0;     // |supp p_{V Y_U}|
  double mu_vy = 1.0;          // min mass of p_{V Y_U}
};

struct RateBoundInputs {
  std::size_t x_size = 2;
  std::size_t v_size = 2;
  double h_v = 1.0;
  double mu_xv = 1.0;
  std::vector<double> i_v_y_authorized;          // I(V; Y_A) per authorized set
  std::vector<double> i_x_v_given_y_authorized;  // I(X; V | Y_A) per authorized set
  std::vector<UnauthorizedSetTerms> unauthorized;
};

struct RateBound {
  double rs_lower = 0.0;
  double rp_upper = 0.0;
  double max_delta2 = 0.0;      // max over U of the finite-length penalty
  double rs_asymptotic = 0.0;   // min_A I(V;Y_A) - max_U I(V;Y_U)
  double rp_asymptotic = 0.0;   // max_A I(X;V|Y_A)
  bool asymptotic = false;
};

inline RateBoundInputs rate_bound_inputs(const DiscreteModel& model, const AccessStructure& structure) {
  using M = DiscreteModel;
  const JointPmf& p = model.pmf();
  RateBoundInputs in;
  in.x_size = model.x_size();
  in.v_size = model.v_size();
  in.h_v = entropy_of(p, {M::kV});
  in.mu_xv = p.marginal({M::kX, M::kV}).min_mass();
  for (Subset a : structure.authorized()) {
    const auto ys = M::y_vars(a);
    in.i_v_y_authorized.push_back(mutual_information(p, {M::kV}, ys));
    in.i_x_v_given_y_authorized.push_back(mutual_information(p, {M::kX}, {M::kV}, ys));
  }
  for (Subset u : structure.unauthorized()) {
    const auto ys = M::y_vars(u);
    UnauthorizedSetTerms t;
    t.set = u;
    t.i_v_y = mutual_information(p, {M::kV}, ys);
    t.i_x_v_given_y = mutual_information(p, {M::kX}, {M::kV}, ys);
    t.h_x_given_yv = conditional_entropy(p, {M::kX}, concat(ys, {M::kV}));
    t.y_size = static_cast<double>(model.y_size(u));
    t.mu_vxy = p.marginal(concat({M::kV, M::kX}, ys)).min_mass();
    const JointPmf vy = p.marginal(concat({M::kV}, ys));
    t.support_vy = static_cast<double>(vy.support_size());
    t.mu_vy = vy.min_mass();
    in.unauthorized.push_back(t);
  }
  return in;
}

// Lower bound on the secret rate k/N for N = n q, including the
// finite-length penalty of every unauthorized set, together with the public
// rate the reconciliation spends. With `asymptotic` set, every correction
// term is dropped and the limiting expressions are returned exactly. A
// penalty whose logarithm argument is nonpositive makes the bound vacuous
// (rs_lower = -inf).
inline RateBound achievable_rate_bound(const RateBoundInputs& in, std::size_t n, std::size_t q, double epsilon,
                                       bool asymptotic = false) {
  if (in.i_v_y_authorized.empty() || in.unauthorized.empty()) {
    throw Error(ErrorCode::InvalidInput, "need authorized and unauthorized sets");
  }
  RateBound r;
  r.asymptotic = asymptotic;
  const double min_a = *std::min_element(in.i_v_y_authorized.begin(), in.i_v_y_authorized.end());
  double max_u = -std::numeric_limits<double>::infinity();
  for (const auto& u : in.unauthorized) max_u = std::max(max_u, u.i_v_y);
  r.rs_asymptotic = min_a - max_u;
  r.rp_asymptotic = *std::max_element(in.i_x_v_given_y_authorized.begin(), in.i_x_v_given_y_authorized.end());
  if (asymptotic) {
    r.rs_lower = r.rs_asymptotic;
    r.rp_upper = r.rp_asymptotic;
    return r;
  }

  if (n == 0 || q == 0) throw Error(ErrorCode::DomainError, "n and q must be positive");
  if (!(epsilon > 0.0 && epsilon < 1.0)) throw Error(ErrorCode::DomainError, "epsilon must lie in (0, 1)");
  const double dn = static_cast<double>(n);
  const double dq = static_cast<double>(q);
  const double big_n = dn * dq;
  const double x = static_cast<double>(in.x_size);
  const double v = static_cast<double>(in.v_size);
  const double e2 = epsilon * epsilon;

  r.max_delta2 = -std::numeric_limits<double>::infinity();
  for (const auto& u : in.unauthorized) {
    // Support and minimum mass of the n-fold product p_{V^n Y_U^n}.
    const double support_n = std::pow(u.support_vy, dn);
    const double mu_n = std::pow(u.mu_vy, dn);
    const double arg = 1.0 - 2.0 * support_n * std::exp(-e2 * dq * mu_n / 6.0);
    const double delta1 = arg > 0.0 ? -std::log2(arg) : std::numeric_limits<double>::infinity();
    const double bracket =
        2.0 * epsilon * u.h_x_given_yv + 2.0 / dn +
        std::log2(x) * (4.0 * v * x * std::exp(-dn * e2 * in.mu_xv) + 2.0 * v * x * u.y_size * std::exp(-e2 * dn * u.mu_vxy / 8.0));
    const double delta2 = epsilon * u.i_x_v_given_y + (1.0 - epsilon) * bracket + delta1 / big_n +
                          6.0 * epsilon * in.h_v + 1.0 / std::sqrt(big_n);
    r.max_delta2 = std::max(r.max_delta2, delta2);
  }
  r.rs_lower = r.rs_asymptotic - r.max_delta2 - 1.0 / std::sqrt(big_n) - 1.0 / big_n;
  r.rp_upper = r.rp_asymptotic + 6.0 * epsilon * in.h_v;
  return r;
}

inline RateBound achievable_rate_bound(const DiscreteModel& model, const AccessStructure& structure, std::size_t n,
                                       std::size_t q, double epsilon, bool asymptotic = false) {
  return achievable_rate_bound(rate_bound_inputs(model, structure), n, q, epsilon, asymptotic);
}

}  // namespace gshare
