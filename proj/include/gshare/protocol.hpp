#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <thread>
#include <vector>

#include "gshare/access_structure.hpp"
#include "gshare/bounds.hpp"
#include "gshare/capacity.hpp"
#include "gshare/codebook.hpp"
#include "gshare/error.hpp"
#include "gshare/hashing.hpp"
#include "gshare/quantizer.hpp"
#include "gshare/source_model.hpp"

namespace gshare {

enum class LeakageMode { Auto, Exact, Off };

inline const char* to_string(LeakageMode m) {
  switch (m) {
    case LeakageMode::Auto: return "auto";
    case LeakageMode::Exact: return "exact";
    case LeakageMode::Off: return "off";
  }
  return "?";
}

struct ProtocolConfig {
  std::size_t levels = 2;  // quantization bins per variable
  std::size_t n = 4;       // inner blocklength
  std::size_t q = 1;       // outer repetitions, N = n q
  double epsilon = 0.1;    // typicality slack
  std::optional<double> rv;        // bin rate; derived from the model when absent
  std::optional<double> rv_prime;  // in-bin rate; derived from the model when absent
  std::size_t k = 1;               // secret bits
  std::uint64_t seed = 1;
  std::size_t trials = 100;
  // Public rate targeted by the Gaussian auxiliary; absent means V = X.
  std::optional<double> aux_rate;
  LeakageMode leakage = LeakageMode::Auto;
  std::size_t leak_levels = 0;  // eavesdropper quantization for leakage; 0 = levels
  std::size_t budget = 10'000'000;  // enumeration cap for exact leakage
  unsigned threads = 1;              // 0 = hardware concurrency

  std::size_t blocklength() const { return n * q; }

  void validate() const {
    auto bad = [](const std::string& what) { throw Error(ErrorCode::InvalidConfig, what); };
    if (levels < 2) bad("levels must be at least 2");
    if (levels > 256) bad("levels must be at most 256");
    if (n < 1) bad("n must be at least 1");
    if (q < 1) bad("q must be at least 1");
    if (!(epsilon > 0.0 && epsilon < 1.0)) bad("epsilon must lie in (0, 1)");
    if (rv && !(*rv >= 0.0)) bad("rv must be nonnegative");
    if (rv_prime && !(*rv_prime >= 0.0)) bad("rv_prime must be nonnegative");
    if (aux_rate && !(*aux_rate >= 0.0 && std::isfinite(*aux_rate))) bad("aux_rate must be finite and nonnegative");
    if (k > 63) bad("k must be at most 63");
    if (trials < 1) bad("trials must be at least 1");
    if (leak_levels == 1 || leak_levels > 256) bad("leak_levels must be 0 or in [2, 256]");
    if (budget < 1) bad("budget must be positive");
  }
};

// Wilson score interval at 95% for `errors` out of `count`.
struct Interval {
  double low = 0.0;
  double high = 1.0;
};

inline Interval wilson_interval(std::size_t errors, std::size_t count) {
  if (count == 0) return {};
  constexpr double z = 1.959963984540054;
  const double nn = static_cast<double>(count);
  const double p = static_cast<double>(errors) / nn;
  const double denom = 1.0 + z * z / nn;
  const double centre = (p + z * z / (2.0 * nn)) / denom;
  const double half = z * std::sqrt(p * (1.0 - p) / nn + z * z / (4.0 * nn * nn)) / denom;
  return {errors == 0 ? 0.0 : std::max(0.0, centre - half), errors == count ? 1.0 : std::min(1.0, centre + half)};
}

struct SetErrorRate {
  Subset set;
  std::size_t errors = 0;            // trials where some block's codeword differed
  std::size_t secret_mismatches = 0;  // trials where the extracted secret differed
  double rate = 0.0;
  Interval interval;
};

struct SetLeakage {
  Subset set;
  bool computed = false;
  double leakage = 0.0;      // I(S; M, Y_U^N)
  double public_only = 0.0;  // I(S; M)
};

struct TrialOutcome {
  std::size_t trial = 0;
  Subset set;
  bool success = false;
};

struct MetricsReport {
  // Echo of the resolved configuration.
  std::size_t levels = 0;
  std::size_t n = 0;
  std::size_t q = 0;
  std::size_t blocklength = 0;
  double epsilon = 0.0;
  double rv = 0.0;
  double rv_prime = 0.0;
  std::size_t k = 0;
  std::uint64_t seed = 0;
  std::size_t trials = 0;
  std::optional<double> aux_sigma2_cond;  // absent when V = X
  std::size_t v_size = 0;
  std::size_t omega_count = 0;
  std::size_t nu_count = 0;

  // Public communication and rates, in bits per source symbol.
  std::size_t hash_seed_bits = 0;
  double message_rate = 0.0;  // q log2(omega_count) / N
  double public_rate = 0.0;   // message_rate + hash_seed_bits / N
  double secret_rate = 0.0;   // k / N
  std::size_t encoder_fallbacks = 0;

  std::vector<SetErrorRate> errors;
  std::string leakage_mode;  // exact | partial | unavailable | off
  std::size_t leak_levels = 0;
  std::vector<SetLeakage> leakage;
  std::optional<double> max_leakage;
  std::optional<double> secret_entropy;
  std::optional<double> uniformity_gap;  // k - H(S)

  ErrorBound error_bound;
  RateBound rate_bound;
  std::vector<TrialOutcome> outcomes;
};

// ---------------------------------------------------------------------------
// Exact enumeration pieces

namespace detail {

inline std::size_t checked_power(std::size_t base, std::size_t exp, std::size_t cap) {
  std::size_t r = 1;
  for (std::size_t i = 0; i < exp; ++i) {
    if (base != 0 && r > cap / base) return cap + 1;
    r *= base;
  }
  return r;
}

inline std::size_t checked_product(std::size_t a, std::size_t b, std::size_t cap) {
  if (a != 0 && b > cap / a) return cap + 1;
  return a * b;
}

inline void unflatten(std::size_t flat, std::size_t radix, std::vector<std::size_t>& digits) {
  for (std::size_t i = digits.size(); i-- > 0;) {
    digits[i] = flat % radix;
    flat /= radix;
  }
}

}  // namespace detail

// Encoder output for every x^n over an alphabet of `levels` letters; x^n is
// indexed in mixed radix with the first symbol most significant.
inline std::vector<CodeIndex> encode_all(const Codebook& book, const TypicalityTest& xv_typical, std::size_t levels) {
  const std::size_t n = book.n();
  const std::size_t count = detail::checked_power(levels, n, static_cast<std::size_t>(-2));
  std::vector<CodeIndex> out(count);
  std::vector<std::size_t> x(n);
  for (std::size_t flat = 0; flat < count; ++flat) {
    detail::unflatten(flat, levels, x);
    out[flat] = wz_encode(book, x, xv_typical);
  }
  return out;
}

// One nonzero cell of the per-block joint law of the codeword index and the
// observation y^n.
struct BlockState {
  std::size_t omega = 0;
  std::size_t nu = 0;
  std::size_t y = 0;  // y^n index, mixed radix
  double p = 0.0;
};

// Joint law of (omega, nu, y^n) for one block, given the per-letter pmf of
// (X, Y) as a two-variable pmf and the encoder table. States are ordered by
// (omega, y, nu).
inline std::vector<BlockState> block_distribution(const Codebook& book, const std::vector<CodeIndex>& encodings,
                                                  const JointPmf& xy) {
  const std::size_t n = book.n();
  const std::size_t nx = xy.dims()[0];
  const std::size_t ny = xy.dims()[1];
  const std::size_t x_count = encodings.size();
  const std::size_t y_count = detail::checked_power(ny, n, static_cast<std::size_t>(-2));
  std::vector<double> mass(book.size() * y_count, 0.0);
  std::vector<std::size_t> xs(n), ys(n);
  for (std::size_t xf = 0; xf < x_count; ++xf) {
    detail::unflatten(xf, nx, xs);
    const CodeIndex e = encodings[xf];
    const std::size_t cw = e.omega * book.nu_count() + e.nu;
    for (std::size_t yf = 0; yf < y_count; ++yf) {
      detail::unflatten(yf, ny, ys);
      double p = 1.0;
      for (std::size_t i = 0; i < n && p > 0.0; ++i) p *= xy[xs[i] * ny + ys[i]];
      mass[cw * y_count + yf] += p;
    }
  }
  std::vector<BlockState> states;
  for (std::size_t w = 0; w < book.omega_count(); ++w) {
    for (std::size_t yf = 0; yf < y_count; ++yf) {
      for (std::size_t v = 0; v < book.nu_count(); ++v) {
        const double p = mass[(w * book.nu_count() + v) * y_count + yf];
        if (p > 0.0) states.push_back({w, v, yf, p});
      }
    }
  }
  return states;
}

// Column j of the k x m Toeplitz matrix as a k-bit word, row 0 most
// significant, so that XOR-ing the columns of the set input bits reproduces
// bits_to_integer(toeplitz_hash(...)).
inline std::vector<std::uint64_t> toeplitz_columns(const BitVector& seed, std::size_t m, std::size_t k) {
  std::vector<std::uint64_t> cols(m, 0);
  if (k == 0) return cols;
  for (std::size_t j = 0; j < m; ++j) {
    std::uint64_t c = 0;
    for (std::size_t i = 0; i < k; ++i) c = (c << 1) | seed[i + m - 1 - j];
    cols[j] = c;
  }
  return cols;
}

// Hash contribution of every codeword placed in block b of the secret input.
inline std::vector<std::uint64_t> block_hash_table(const Codebook& book, std::size_t block,
                                                   const std::vector<std::uint64_t>& columns, std::size_t alphabet) {
  const std::size_t w = bits_per_symbol(alphabet);
  const std::size_t offset = block * book.n() * w;
  std::vector<std::uint64_t> table(book.size(), 0);
  for (std::size_t c = 0; c < book.size(); ++c) {
    const auto word = book.codeword({c / book.nu_count(), c % book.nu_count()});
    std::uint64_t h = 0;
    for (std::size_t i = 0; i < word.size(); ++i) {
      for (std::size_t b = 0; b < w; ++b) {
        if ((word[i] >> (w - 1 - b)) & 1u) h ^= columns[offset + i * w + b];
      }
    }
    table[c] = h;
  }
  return table;
}

struct SecretEntropies {
  double h_s = 0.0;        // H(S)
  double h_key = 0.0;      // H(K), K the public view
  double h_joint = 0.0;    // H(S, K)
  std::vector<double> p_s;  // law of S
  double information() const { return std::max(0.0, h_s + h_key - h_joint); }
};

// A group collects the codewords (flat index, mass) sharing one value of the
// per-block public view.
using ViewGroups = std::vector<std::vector<std::pair<std::size_t, double>>>;

inline ViewGroups group_by_view(const std::vector<BlockState>& states, std::size_t nu_count, bool include_y) {
  ViewGroups groups;
  std::size_t last_omega = static_cast<std::size_t>(-1);
  std::size_t last_y = static_cast<std::size_t>(-1);
  for (const BlockState& s : states) {
    const bool fresh = s.omega != last_omega || (include_y && s.y != last_y);
    if (fresh) groups.emplace_back();
    last_omega = s.omega;
    last_y = s.y;
    const std::size_t cw = s.omega * nu_count + s.nu;
    auto& g = groups.back();
    auto it = std::find_if(g.begin(), g.end(), [cw](const auto& e) { return e.first == cw; });
    if (it == g.end()) {
      g.emplace_back(cw, s.p);
    } else {
      it->second += s.p;
    }
  }
  return groups;
}

// Entropies of the secret S = XOR_b table_b(codeword_b) and of the public view
// over q independent blocks with identical per-block laws.
inline SecretEntropies secret_entropies(const ViewGroups& groups, const std::vector<std::vector<std::uint64_t>>& tables,
                                        std::size_t k) {
  const std::size_t q = tables.size();
  const std::size_t s_count = std::size_t{1} << k;
  SecretEntropies out;
  out.p_s.assign(s_count, 0.0);
  std::vector<double> dense(s_count, 0.0);
  std::vector<std::uint64_t> touched;

  std::vector<std::size_t> g(q, 0);
  std::vector<std::size_t> member(q, 0);
  while (true) {
    // Enumerate codeword choices inside the current tuple of view groups.
    std::fill(member.begin(), member.end(), 0);
    double key_mass = 0.0;
    while (true) {
      double p = 1.0;
      std::uint64_t s = 0;
      for (std::size_t b = 0; b < q; ++b) {
        const auto& e = groups[g[b]][member[b]];
        p *= e.second;
        s ^= tables[b][e.first];
      }
      if (dense[s] == 0.0) touched.push_back(s);
      dense[s] += p;
      key_mass += p;
      std::size_t b = q;
      while (b-- > 0) {
        if (++member[b] < groups[g[b]].size()) break;
        member[b] = 0;
      }
      if (b == static_cast<std::size_t>(-1)) break;
    }
    if (key_mass > 0.0) out.h_key -= key_mass * std::log2(key_mass);
    for (std::uint64_t s : touched) {
      const double p = dense[s];
      if (p > 0.0) out.h_joint -= p * std::log2(p);
      out.p_s[s] += p;
      dense[s] = 0.0;
    }
    touched.clear();

    std::size_t b = q;
    while (b-- > 0) {
      if (++g[b] < groups.size()) break;
      g[b] = 0;
    }
    if (b == static_cast<std::size_t>(-1)) break;
  }
  out.h_s = entropy_of_masses(out.p_s);
  return out;
}

// ---------------------------------------------------------------------------
// Protocol

namespace detail {

inline std::mt19937_64 derived_rng(std::uint64_t seed, std::uint64_t index, std::uint64_t tag) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32),
                    static_cast<std::uint32_t>(tag)};
  return std::mt19937_64(seq);
}

constexpr std::uint64_t kCodebookTag = 0xC0DE;
constexpr std::uint64_t kHashTag = 0x4A54;
constexpr std::uint64_t kTrialTag = 0x7121;

template <typename F>
void parallel_for(std::size_t count, unsigned threads, F&& body) {
  const std::size_t workers = std::min<std::size_t>(resolve_threads(threads), std::max<std::size_t>(count, 1));
  if (workers <= 1) {
    body(0, count);
    return;
  }
  std::vector<std::thread> pool;
  const std::size_t chunk = (count + workers - 1) / workers;
  for (std::size_t w = 0; w < workers; ++w) {
    const std::size_t lo = w * chunk;
    const std::size_t hi = std::min(count, lo + chunk);
    if (lo >= hi) break;
    pool.emplace_back([&body, lo, hi] { body(lo, hi); });
  }
  for (auto& t : pool) t.join();
}

}  // namespace detail

// Bin and in-bin rates derived from the quantized model:
// rv = max_A H(V|Y_A) - H(V|X) + 6 eps H(V), rv' = H(V) - max_A H(V|Y_A) - 3 eps H(V),
// both floored at zero.
inline std::pair<double, double> derived_rates(const DiscreteModel& model, const AccessStructure& structure,
                                               double epsilon) {
  using M = DiscreteModel;
  const JointPmf& p = model.pmf();
  const double h_v = entropy_of(p, {M::kV});
  double worst = 0.0;
  for (Subset a : structure.authorized()) worst = std::max(worst, conditional_entropy(p, {M::kV}, M::y_vars(a)));
  const double h_v_x = conditional_entropy(p, {M::kV}, {M::kX});
  return {std::max(0.0, worst - h_v_x + 6.0 * epsilon * h_v), std::max(0.0, h_v - worst - 3.0 * epsilon * h_v)};
}

inline MetricsReport run_protocol(const SourceSpec& spec, const AccessStructure& structure,
                                  const ProtocolConfig& config) {
  config.validate();
  if (!spec.is_gains()) throw Error(ErrorCode::InvalidConfig, "simulation requires a gain-vector source");
  if (structure.participants() != spec.participants()) {
    throw Error(ErrorCode::InvalidConfig, "access structure and source disagree on the participant count");
  }
  using M = DiscreteModel;

  MetricsReport r;
  r.levels = config.levels;
  r.n = config.n;
  r.q = config.q;
  r.blocklength = config.blocklength();
  r.epsilon = config.epsilon;
  r.k = config.k;
  r.seed = config.seed;
  r.trials = config.trials;

  AuxiliaryChoice aux = AuxiliaryChoice::identity();
  if (config.aux_rate) {
    const ExtremalSets ext = extremal_sets(structure, spec);
    r.aux_sigma2_cond = optimal_sigma(spec, ext.o_a_star, *config.aux_rate);
    aux = AuxiliaryChoice::gaussian(*r.aux_sigma2_cond);
  }
  const DiscreteModel model = DiscreteModel::build(spec, config.levels, aux);
  r.v_size = model.v_size();
  if (r.v_size > 65535) throw Error(ErrorCode::InvalidConfig, "auxiliary alphabet too large");

  const auto [auto_rv, auto_rv_prime] = derived_rates(model, structure, config.epsilon);
  r.rv = config.rv.value_or(auto_rv);
  r.rv_prime = config.rv_prime.value_or(auto_rv_prime);

  const std::size_t n = config.n;
  const std::size_t q = config.q;
  const std::size_t big_n = r.blocklength;
  r.omega_count = Codebook::count_for_rate(n, r.rv);
  r.nu_count = Codebook::count_for_rate(n, r.rv_prime);
  constexpr std::size_t kMaxSymbols = std::size_t{1} << 26;
  if (detail::checked_product(detail::checked_product(r.omega_count, r.nu_count, kMaxSymbols), n, kMaxSymbols) >
      kMaxSymbols) {
    throw Error(ErrorCode::InvalidConfig, "codebook exceeds " + std::to_string(kMaxSymbols) + " symbols");
  }

  const std::size_t input_bits = big_n * bits_per_symbol(r.v_size);
  if (config.k > input_bits) {
    throw Error(ErrorCode::KTooLarge,
                "k = " + std::to_string(config.k) + " exceeds the " + std::to_string(input_bits) + " input bits");
  }

  std::vector<double> p_v(r.v_size);
  {
    const JointPmf pv = model.pmf().marginal({M::kV});
    for (std::size_t v = 0; v < r.v_size; ++v) p_v[v] = pv[v];
  }
  auto book_rng = detail::derived_rng(config.seed, 0, detail::kCodebookTag);
  const Codebook book = Codebook::generate(n, r.omega_count, r.nu_count, p_v, book_rng);

  auto hash_rng = detail::derived_rng(config.seed, 0, detail::kHashTag);
  r.hash_seed_bits = toeplitz_seed_length(input_bits, config.k);
  BitVector hash_seed(r.hash_seed_bits);
  for (auto& b : hash_seed) b = static_cast<std::uint8_t>(hash_rng() >> 63);

  const double dn = static_cast<double>(big_n);
  r.message_rate = static_cast<double>(q) * std::log2(static_cast<double>(r.omega_count)) / dn;
  r.public_rate = r.message_rate + static_cast<double>(r.hash_seed_bits) / dn;
  r.secret_rate = static_cast<double>(config.k) / dn;

  const TypicalityTest xv_test(model.pair({M::kX}, {M::kV}), config.epsilon);
  const std::vector<Subset>& authorized = structure.authorized();
  std::vector<TypicalityTest> decoders;
  for (Subset a : authorized) decoders.emplace_back(model.pair(M::y_vars(a), {M::kV}), config.epsilon);

  // Monte Carlo over trials; each trial owns an RNG derived from (seed, trial).
  const std::size_t na = authorized.size();
  std::vector<std::uint8_t> success(config.trials * na, 0);
  std::vector<std::uint8_t> secret_ok(config.trials * na, 0);
  std::vector<std::size_t> fallbacks(config.trials, 0);
  detail::parallel_for(config.trials, config.threads, [&](std::size_t lo, std::size_t hi) {
    const TypicalityTest enc = xv_test;
    std::vector<TypicalityTest> dec = decoders;
    std::vector<std::uint16_t> dealer(big_n);
    std::vector<std::vector<std::uint16_t>> decoded(na, std::vector<std::uint16_t>(big_n));
    std::vector<std::size_t> xs(n);
    std::vector<std::vector<std::size_t>> ys(n);
    std::vector<std::size_t> ya(n);
    for (std::size_t t = lo; t < hi; ++t) {
      auto rng = detail::derived_rng(config.seed, t, detail::kTrialTag);
      std::vector<std::uint8_t> agree(na, 1);
      for (std::size_t b = 0; b < q; ++b) {
        for (std::size_t i = 0; i < n; ++i) {
          const QuantizedSample s = discretize_source(model, sample_source(spec, rng));
          xs[i] = s.x;
          ys[i] = s.y;
        }
        const CodeIndex idx = wz_encode(book, xs, enc);
        const auto word = book.codeword(idx);
        if (!enc(xs, word)) ++fallbacks[t];
        std::copy(word.begin(), word.end(), dealer.begin() + static_cast<std::ptrdiff_t>(b * n));
        for (std::size_t a = 0; a < na; ++a) {
          for (std::size_t i = 0; i < n; ++i) ya[i] = composite_symbol(ys[i], authorized[a], config.levels);
          const std::size_t nu = wz_decode(book, ya, idx.omega, dec[a]);
          const auto guess = book.codeword({idx.omega, nu});
          if (!std::equal(guess.begin(), guess.end(), word.begin())) agree[a] = 0;
          std::copy(guess.begin(), guess.end(), decoded[a].begin() + static_cast<std::ptrdiff_t>(b * n));
        }
      }
      const BitVector secret =
          privacy_amplify<std::uint16_t>(dealer, r.v_size, hash_seed, config.k);
      for (std::size_t a = 0; a < na; ++a) {
        success[t * na + a] = agree[a];
        secret_ok[t * na + a] =
            privacy_amplify<std::uint16_t>(decoded[a], r.v_size, hash_seed, config.k) == secret ? 1 : 0;
      }
    }
  });

  for (std::size_t t = 0; t < config.trials; ++t) r.encoder_fallbacks += fallbacks[t];
  for (std::size_t a = 0; a < na; ++a) {
    SetErrorRate e;
    e.set = authorized[a];
    for (std::size_t t = 0; t < config.trials; ++t) {
      if (!success[t * na + a]) ++e.errors;
      if (!secret_ok[t * na + a]) ++e.secret_mismatches;
      r.outcomes.push_back({t, authorized[a], success[t * na + a] != 0});
    }
    e.rate = static_cast<double>(e.errors) / static_cast<double>(config.trials);
    e.interval = wilson_interval(e.errors, config.trials);
    r.errors.push_back(e);
  }
  std::sort(r.outcomes.begin(), r.outcomes.end(), [](const TrialOutcome& x, const TrialOutcome& y) {
    return x.trial != y.trial ? x.trial < y.trial : x.set < y.set;
  });

  // Exact leakage and uniformity by enumeration.
  r.leak_levels = config.leak_levels == 0 ? config.levels : config.leak_levels;
  if (config.leakage == LeakageMode::Off) {
    r.leakage_mode = "off";
  } else {
    const std::size_t cap = config.budget;
    const bool k_ok = config.k <= 24;
    const std::size_t x_count = detail::checked_power(config.levels, n, cap);
    const bool encode_ok = k_ok && x_count <= cap && detail::checked_product(x_count, book.size(), cap) <= cap;
    if (!encode_ok && config.leakage == LeakageMode::Exact) {
      throw Error(ErrorCode::BudgetExceeded, "exact leakage enumeration exceeds the budget of " + std::to_string(cap));
    }
    std::size_t done = 0;
    if (encode_ok) {
      const DiscreteModel leak_model =
          r.leak_levels == config.levels ? model : DiscreteModel::build(spec, config.levels, aux, r.leak_levels);
      const std::vector<CodeIndex> encodings = encode_all(book, xv_test, config.levels);
      const auto columns = toeplitz_columns(hash_seed, input_bits, config.k);
      std::vector<std::vector<std::uint64_t>> tables;
      for (std::size_t b = 0; b < q; ++b) tables.push_back(block_hash_table(book, b, columns, r.v_size));

      for (Subset u : structure.unauthorized()) {
        SetLeakage entry;
        entry.set = u;
        const std::size_t y_count = detail::checked_power(leak_model.y_size(u), n, cap);
        bool fits = y_count <= cap && detail::checked_product(x_count, y_count, cap) <= cap &&
                    detail::checked_product(book.size(), y_count, cap) <= cap;
        std::vector<BlockState> states;
        if (fits) {
          states = block_distribution(book, encodings, leak_model.pair({M::kX}, M::y_vars(u)));
          fits = detail::checked_power(states.size(), q, cap) <= cap;
        }
        if (!fits) {
          if (config.leakage == LeakageMode::Exact) {
            throw Error(ErrorCode::BudgetExceeded,
                        "exact leakage for " + u.to_string() + " exceeds the budget of " + std::to_string(cap));
          }
          r.leakage.push_back(entry);
          continue;
        }
        const SecretEntropies full = secret_entropies(group_by_view(states, book.nu_count(), true), tables, config.k);
        const SecretEntropies pub = secret_entropies(group_by_view(states, book.nu_count(), false), tables, config.k);
        entry.computed = true;
        entry.leakage = full.information();
        entry.public_only = pub.information();
        if (u.empty()) {
          r.secret_entropy = full.h_s;
          r.uniformity_gap = std::max(0.0, static_cast<double>(config.k) - full.h_s);
        }
        r.max_leakage = std::max(r.max_leakage.value_or(0.0), entry.leakage);
        ++done;
        r.leakage.push_back(entry);
      }
    }
    const std::size_t total = structure.unauthorized().size();
    r.leakage_mode = done == total ? "exact" : (done == 0 ? "unavailable" : "partial");
  }

  r.error_bound = error_bound(n, config.epsilon, error_bound_inputs(model, structure));
  r.rate_bound = achievable_rate_bound(model, structure, n, q, config.epsilon);
  return r;
}

}  // namespace gshare
