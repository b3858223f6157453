#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <numeric>
#include <string>
#include <vector>

#include "gshare/error.hpp"

namespace gshare {

// Probability mass function over a product of finite alphabets, stored
// row-major (the last variable varies fastest).
class JointPmf {
 public:
  JointPmf() = default;
  JointPmf(std::vector<std::size_t> dims, std::vector<double> probs) : dims_(std::move(dims)), probs_(std::move(probs)) {
    if (probs_.size() != cells(dims_)) throw Error(ErrorCode::InvalidInput, "pmf size does not match its dimensions");
    for (double p : probs_) {
      if (!(p >= 0.0)) throw Error(ErrorCode::InvalidInput, "negative or NaN probability");
    }
  }

  static std::size_t cells(const std::vector<std::size_t>& dims) {
    return std::accumulate(dims.begin(), dims.end(), std::size_t{1}, std::multiplies<>());
  }

  const std::vector<std::size_t>& dims() const noexcept { return dims_; }
  const std::vector<double>& probs() const noexcept { return probs_; }
  std::size_t variables() const noexcept { return dims_.size(); }
  std::size_t size() const noexcept { return probs_.size(); }
  double operator[](std::size_t flat) const { return probs_[flat]; }

  // Marginal over `keep`, in that order. An empty list yields the trivial
  // one-cell pmf.
  JointPmf marginal(const std::vector<std::size_t>& keep) const {
    std::vector<std::size_t> out_dims;
    for (std::size_t v : keep) {
      if (v >= dims_.size()) throw Error(ErrorCode::IndexOutOfRange, "marginal variable out of range");
      out_dims.push_back(dims_[v]);
    }
    std::vector<double> out(cells(out_dims), 0.0);
    std::vector<std::size_t> idx(dims_.size(), 0);
    for (std::size_t flat = 0; flat < probs_.size(); ++flat) {
      std::size_t target = 0;
      for (std::size_t k = 0; k < keep.size(); ++k) target = target * out_dims[k] + idx[keep[k]];
      out[target] += probs_[flat];
      for (std::size_t d = dims_.size(); d-- > 0;) {
        if (++idx[d] < dims_[d]) break;
        idx[d] = 0;
      }
    }
    return JointPmf(std::move(out_dims), std::move(out));
  }

  // Merges consecutive variables into single ones; `groups` lists how many
  // variables go into each merged variable.
  JointPmf grouped(const std::vector<std::size_t>& groups) const {
    std::vector<std::size_t> out_dims;
    std::size_t next = 0;
    for (std::size_t g : groups) {
      std::size_t d = 1;
      for (std::size_t k = 0; k < g; ++k) d *= dims_.at(next++);
      out_dims.push_back(d);
    }
    if (next != dims_.size()) throw Error(ErrorCode::InvalidInput, "groups do not cover all variables");
    return JointPmf(std::move(out_dims), probs_);
  }

  double entropy() const {
    double h = 0.0;
    for (double p : probs_) {
      if (p > 0.0) h -= p * std::log2(p);
    }
    return h;
  }

  double total() const { return std::accumulate(probs_.begin(), probs_.end(), 0.0); }

  // Smallest nonzero mass.
  double min_mass() const {
    double m = 0.0;
    for (double p : probs_) {
      if (p > 0.0 && (m == 0.0 || p < m)) m = p;
    }
    return m;
  }

  std::size_t support_size() const {
    return static_cast<std::size_t>(std::count_if(probs_.begin(), probs_.end(), [](double p) { return p > 0.0; }));
  }

 private:
  std::vector<std::size_t> dims_;
  std::vector<double> probs_;
};

inline double entropy_of(const JointPmf& p, const std::vector<std::size_t>& vars) { return p.marginal(vars).entropy(); }

inline std::vector<std::size_t> concat(std::vector<std::size_t> a, const std::vector<std::size_t>& b) {
  a.insert(a.end(), b.begin(), b.end());
  return a;
}

// H(A | C)
inline double conditional_entropy(const JointPmf& p, const std::vector<std::size_t>& a,
                                  const std::vector<std::size_t>& c) {
  return entropy_of(p, concat(a, c)) - entropy_of(p, c);
}

// I(A; B | C)
inline double mutual_information(const JointPmf& p, const std::vector<std::size_t>& a,
                                 const std::vector<std::size_t>& b, const std::vector<std::size_t>& c = {}) {
  return entropy_of(p, concat(a, c)) + entropy_of(p, concat(b, c)) - entropy_of(p, concat(concat(a, b), c)) -
         entropy_of(p, c);
}

// Entropy of an unnormalized collection of masses keyed arbitrarily.
template <typename Range>
double entropy_of_masses(const Range& masses) {
  double h = 0.0;
  for (const auto& p : masses) {
    if (p > 0.0) h -= p * std::log2(p);
  }
  return h;
}

}  // namespace gshare
