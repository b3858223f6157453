#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "gshare/discrete.hpp"
#include "gshare/error.hpp"

namespace gshare {

// epsilon-letter typicality of a pair sequence (a^n, v^n) against a pmf p over
// the pair alphabet A x V (flat index a * |V| + v): for every letter,
// |N(letter)/n - p(letter)| <= epsilon p(letter), and zero-mass letters never
// occur.
class TypicalityTest {
 public:
  TypicalityTest(JointPmf pair_pmf, double epsilon) : pmf_(std::move(pair_pmf)), epsilon_(epsilon) {
    if (pmf_.variables() != 2) throw Error(ErrorCode::InvalidInput, "typicality needs a two-variable pmf");
    if (!(epsilon > 0.0 && epsilon < 1.0)) throw Error(ErrorCode::InvalidInput, "epsilon must lie in (0, 1)");
    for (std::size_t i = 0; i < pmf_.size(); ++i) {
      if (pmf_[i] > 0.0) support_.push_back(i);
    }
    counts_.assign(pmf_.size(), 0);
  }

  std::size_t first_size() const { return pmf_.dims()[0]; }
  std::size_t second_size() const { return pmf_.dims()[1]; }
  double epsilon() const noexcept { return epsilon_; }
  const JointPmf& pmf() const noexcept { return pmf_; }

  bool operator()(std::span<const std::size_t> a, std::span<const std::uint16_t> v) const {
    const std::size_t n = a.size();
    if (v.size() != n || n == 0) return false;
    // Every supported letter must occur, so short sequences fail early.
    if (support_.size() > n) return false;
    const std::size_t nv = second_size();
    std::vector<std::uint32_t>& counts = counts_;
    bool ok = true;
    for (std::size_t i = 0; i < n; ++i) {
      const std::size_t letter = a[i] * nv + v[i];
      if (pmf_[letter] <= 0.0) {
        ok = false;
        break;
      }
      ++counts[letter];
    }
    if (ok) {
      const double dn = static_cast<double>(n);
      for (std::size_t letter : support_) {
        const double p = pmf_[letter];
        if (std::abs(static_cast<double>(counts[letter]) / dn - p) > epsilon_ * p) {
          ok = false;
          break;
        }
      }
    }
    for (std::size_t i = 0; i < n; ++i) counts[a[i] * nv + v[i]] = 0;
    return ok;
  }

 private:
  JointPmf pmf_;
  double epsilon_;
  std::vector<std::size_t> support_;
  // Scratch space; a TypicalityTest is therefore not shareable across threads.
  mutable std::vector<std::uint32_t> counts_;
};

struct CodeIndex {
  std::size_t omega = 0;  // bin index, the public message
  std::size_t nu = 0;     // index within the bin
  friend bool operator==(const CodeIndex&, const CodeIndex&) = default;
};

// Random codebook of omega_count * nu_count codewords of length n over the
// auxiliary alphabet, symbols drawn i.i.d. from p_V. Indices are zero-based;
// (0, 0) is the first codeword.
class Codebook {
 public:
  Codebook(std::size_t n, std::size_t omega_count, std::size_t nu_count, std::vector<double> p_v,
           std::vector<std::uint16_t> symbols)
      : n_(n), omega_count_(omega_count), nu_count_(nu_count), p_v_(std::move(p_v)), symbols_(std::move(symbols)) {
    if (symbols_.size() != n_ * omega_count_ * nu_count_) {
      throw Error(ErrorCode::InvalidInput, "codebook table size mismatch");
    }
  }

  // Sizes follow the rates: floor(2^{n rv}) bins of floor(2^{n rv'}) codewords,
  // at least one each.
  static std::size_t count_for_rate(std::size_t n, double rate) {
    if (!(rate >= 0.0)) throw Error(ErrorCode::InvalidConfig, "codebook rates must be nonnegative");
    const double c = std::floor(std::exp2(static_cast<double>(n) * rate) + 1e-9);
    return c < 1.0 ? 1 : static_cast<std::size_t>(c);
  }

  template <typename Rng>
  static Codebook generate(std::size_t n, std::size_t omega_count, std::size_t nu_count, const std::vector<double>& p_v,
                           Rng& rng) {
    if (n == 0) throw Error(ErrorCode::InvalidConfig, "blocklength must be positive");
    std::vector<double> cdf;
    double acc = 0.0;
    for (double p : p_v) cdf.push_back(acc += p);
    std::vector<std::uint16_t> symbols(n * omega_count * nu_count);
    for (auto& s : symbols) {
      // 53-bit uniform in [0, acc)
      const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53 * acc;
      std::size_t k = 0;
      while (k + 1 < cdf.size() && u >= cdf[k]) ++k;
      s = static_cast<std::uint16_t>(k);
    }
    return Codebook(n, omega_count, nu_count, p_v, std::move(symbols));
  }

  std::size_t n() const noexcept { return n_; }
  std::size_t omega_count() const noexcept { return omega_count_; }
  std::size_t nu_count() const noexcept { return nu_count_; }
  std::size_t size() const noexcept { return omega_count_ * nu_count_; }
  const std::vector<double>& p_v() const noexcept { return p_v_; }

  std::span<const std::uint16_t> codeword(CodeIndex idx) const {
    return {symbols_.data() + (idx.omega * nu_count_ + idx.nu) * n_, n_};
  }

 private:
  std::size_t n_;
  std::size_t omega_count_;
  std::size_t nu_count_;
  std::vector<double> p_v_;
  std::vector<std::uint16_t> symbols_;
};

// Lexicographically first (omega, nu) whose codeword is jointly typical with
// x^n under p_{XV}; (0, 0) when none is.
inline CodeIndex wz_encode(const Codebook& book, std::span<const std::size_t> x, const TypicalityTest& xv_typical) {
  for (std::size_t w = 0; w < book.omega_count(); ++w) {
    for (std::size_t v = 0; v < book.nu_count(); ++v) {
      if (xv_typical(x, book.codeword({w, v}))) return {w, v};
    }
  }
  return {0, 0};
}

// Smallest nu within bin omega whose codeword is jointly typical with the
// side information y_A^n under p_{Y_A V}; 0 when none is.
inline std::size_t wz_decode(const Codebook& book, std::span<const std::size_t> y, std::size_t omega,
                             const TypicalityTest& yv_typical) {
  if (omega >= book.omega_count()) throw Error(ErrorCode::IndexOutOfRange, "message outside the codebook");
  for (std::size_t v = 0; v < book.nu_count(); ++v) {
    if (yv_typical(y, book.codeword({omega, v}))) return v;
  }
  return 0;
}

}  // namespace gshare
