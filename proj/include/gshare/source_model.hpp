#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "gshare/error.hpp"
#include "gshare/subset.hpp"

namespace gshare {

// Lower-triangular Cholesky factor of a symmetric matrix. Rejects pivots
// below 1e-12 times the largest diagonal entry.
inline Eigen::MatrixXd cholesky_lower(const Eigen::MatrixXd& a) {
  const Eigen::Index n = a.rows();
  if (a.cols() != n) throw Error(ErrorCode::InvalidInput, "cholesky of a non-square matrix");
  Eigen::MatrixXd l = Eigen::MatrixXd::Zero(n, n);
  if (n == 0) return l;
  const double floor = 1e-12 * a.diagonal().cwiseAbs().maxCoeff();
  for (Eigen::Index j = 0; j < n; ++j) {
    double pivot = a(j, j) - l.row(j).head(j).squaredNorm();
    if (!(pivot > floor)) {
      throw Error(ErrorCode::NonPositiveDefinite,
                  "pivot " + std::to_string(pivot) + " at index " + std::to_string(j));
    }
    l(j, j) = std::sqrt(pivot);
    for (Eigen::Index i = j + 1; i < n; ++i) {
      l(i, j) = (a(i, j) - l.row(i).head(j).dot(l.row(j).head(j))) / l(j, j);
    }
  }
  return l;
}

// log2 det of a symmetric positive definite matrix.
inline double log2_det_spd(const Eigen::MatrixXd& a) {
  if (a.rows() == 0) return 0.0;
  const Eigen::MatrixXd l = cholesky_lower(a);
  return 2.0 * l.diagonal().array().log2().sum();
}

// Jointly Gaussian (X, Y_1..Y_L). Either a full covariance with the dealer X
// at index 0 and participant l at index l, or the normalized form
// Y_l = H(l) X + W_l with independent unit-variance noise.
class SourceSpec {
 public:
  enum class Mode { Covariance, Gains };

  static SourceSpec from_covariance(Eigen::MatrixXd covariance) {
    if (covariance.rows() != covariance.cols()) {
      throw Error(ErrorCode::InvalidInput, "covariance must be square");
    }
    if (covariance.rows() < 2) {
      throw Error(ErrorCode::InvalidInput, "covariance needs the dealer and at least one participant");
    }
    if (covariance.rows() - 1 > kMaxParticipants) {
      throw Error(ErrorCode::TooManyParticipants, std::to_string(covariance.rows() - 1) + " participants");
    }
    const double scale = covariance.cwiseAbs().maxCoeff();
    if (!((covariance - covariance.transpose()).cwiseAbs().maxCoeff() <= 1e-12 * scale)) {
      throw Error(ErrorCode::InvalidInput, "covariance is not symmetric");
    }
    (void)cholesky_lower(covariance);
    SourceSpec s;
    s.mode_ = Mode::Covariance;
    s.covariance_ = std::move(covariance);
    return s;
  }

  static SourceSpec from_gains(double sigma2_x, std::vector<double> gains) {
    if (!(sigma2_x > 0.0) || !std::isfinite(sigma2_x)) {
      throw Error(ErrorCode::InvalidInput, "sigma2_x must be positive and finite");
    }
    if (gains.empty()) throw Error(ErrorCode::InvalidInput, "at least one participant gain required");
    if (gains.size() > static_cast<std::size_t>(kMaxParticipants)) {
      throw Error(ErrorCode::TooManyParticipants, std::to_string(gains.size()) + " participants");
    }
    for (double g : gains) {
      if (!std::isfinite(g)) throw Error(ErrorCode::InvalidInput, "non-finite gain");
    }
    SourceSpec s;
    s.mode_ = Mode::Gains;
    s.sigma2_x_ = sigma2_x;
    s.gains_ = std::move(gains);
    return s;
  }

  Mode mode() const noexcept { return mode_; }
  bool is_gains() const noexcept { return mode_ == Mode::Gains; }

  int participants() const noexcept {
    return mode_ == Mode::Gains ? static_cast<int>(gains_.size()) : static_cast<int>(covariance_.rows() - 1);
  }

  double sigma2_x() const noexcept { return mode_ == Mode::Gains ? sigma2_x_ : covariance_(0, 0); }

  // Only meaningful in Gains mode.
  const std::vector<double>& gains() const noexcept { return gains_; }

  // Covariance of (X, Y_1..Y_L) in either mode.
  Eigen::MatrixXd full_covariance() const {
    if (mode_ == Mode::Covariance) return covariance_;
    const Eigen::Index l = static_cast<Eigen::Index>(gains_.size());
    Eigen::VectorXd g(l + 1);
    g(0) = 1.0;
    for (Eigen::Index i = 0; i < l; ++i) g(i + 1) = gains_[static_cast<std::size_t>(i)];
    Eigen::MatrixXd c = sigma2_x_ * g * g.transpose();
    c.diagonal().tail(l).array() += 1.0;
    return c;
  }

 private:
  SourceSpec() = default;

  Mode mode_ = Mode::Gains;
  Eigen::MatrixXd covariance_;
  double sigma2_x_ = 1.0;
  std::vector<double> gains_;
};

struct SubsetGain {
  Subset subset;
  Eigen::VectorXd h;  // one entry per member, ascending participant order
  double o = 0.0;     // h^T h
};

inline void check_subset(const SourceSpec& spec, Subset subset) {
  if (subset.max_member() > spec.participants()) {
    throw Error(ErrorCode::IndexOutOfRange,
                "subset " + subset.to_string() + " exceeds L=" + std::to_string(spec.participants()));
  }
}

// Gain vector H_S of Y'_S = H_S X + W' with identity noise covariance. In
// Covariance mode the noise of the linear estimate of Y_S from X is whitened
// with its lower Cholesky factor B, giving H_S = B^{-1} Sigma_{Y_S X} / sigma2_x.
// H_S is unique up to an orthogonal transform; o = H_S^T H_S is not.
inline SubsetGain derive_gain_vector(const SourceSpec& spec, Subset subset) {
  check_subset(spec, subset);
  const std::vector<int> members = subset.members();
  const Eigen::Index m = static_cast<Eigen::Index>(members.size());
  SubsetGain out{subset, Eigen::VectorXd(m), 0.0};
  if (m == 0) return out;

  if (spec.is_gains()) {
    for (Eigen::Index i = 0; i < m; ++i) out.h(i) = spec.gains()[static_cast<std::size_t>(members[i] - 1)];
  } else {
    const Eigen::MatrixXd c = spec.full_covariance();
    const double s2 = c(0, 0);
    Eigen::VectorXd cross(m);
    Eigen::MatrixXd block(m, m);
    for (Eigen::Index i = 0; i < m; ++i) {
      cross(i) = c(members[i], 0);
      for (Eigen::Index j = 0; j < m; ++j) block(i, j) = c(members[i], members[j]);
    }
    const Eigen::MatrixXd noise = block - cross * cross.transpose() / s2;
    const Eigen::MatrixXd b = cholesky_lower(noise);
    out.h = b.triangularView<Eigen::Lower>().solve(cross / s2);
  }
  // Accumulate in ascending participant order so equal sets give equal o.
  double o = 0.0;
  for (Eigen::Index i = 0; i < m; ++i) o += out.h(i) * out.h(i);
  out.o = o;
  return out;
}

// I(X; Y_S) in bits per symbol, 1/2 log2(sigma2_x o + 1). In Covariance mode
// the log-det form is evaluated too and must agree within 1e-9 relative.
inline double mutual_information_source(const SourceSpec& spec, Subset subset) {
  const SubsetGain g = derive_gain_vector(spec, subset);
  const double scalar = 0.5 * std::log2(spec.sigma2_x() * g.o + 1.0);
  if (spec.is_gains() || subset.empty()) return scalar;

  const Eigen::MatrixXd c = spec.full_covariance();
  const std::vector<int> members = subset.members();
  const Eigen::Index m = static_cast<Eigen::Index>(members.size());
  Eigen::MatrixXd ys(m, m);
  Eigen::MatrixXd joint(m + 1, m + 1);
  joint(0, 0) = c(0, 0);
  for (Eigen::Index i = 0; i < m; ++i) {
    joint(0, i + 1) = joint(i + 1, 0) = c(0, members[i]);
    for (Eigen::Index j = 0; j < m; ++j) ys(i, j) = joint(i + 1, j + 1) = c(members[i], members[j]);
  }
  const double logdet = 0.5 * (log2_det_spd(ys) + std::log2(c(0, 0)) - log2_det_spd(joint));
  if (std::abs(logdet - scalar) > 1e-9 * std::max({1.0, std::abs(logdet), std::abs(scalar)})) {
    throw Error(ErrorCode::NumericMismatch, "log-det and scalar mutual information disagree for " +
                                                subset.to_string());
  }
  return scalar;
}

}  // namespace gshare
