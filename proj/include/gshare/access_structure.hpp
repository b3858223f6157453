#pragma once

#include <algorithm>
#include <cstdint>
#include <cstdlib>
#include <string>
#include <vector>

#include "gshare/error.hpp"
#include "gshare/source_model.hpp"
#include "gshare/subset.hpp"

namespace gshare {

// A monotone family of authorized participant sets over {1..L} together with
// its complement in the power set (the unauthorized sets, including the
// empty set). Both families are materialized, sorted by Subset ordering.
class AccessStructure {
 public:
  int participants() const noexcept { return l_; }
  const std::vector<Subset>& minimal_sets() const noexcept { return minimal_; }
  const std::vector<Subset>& authorized() const noexcept { return authorized_; }
  const std::vector<Subset>& unauthorized() const noexcept { return unauthorized_; }

  bool is_authorized(Subset s) const { return member_.at(s.mask()) != 0; }

  friend bool operator==(const AccessStructure&, const AccessStructure&) = default;

  friend AccessStructure monotone_closure(int l, const std::vector<Subset>& generators);

 private:
  int l_ = 0;
  std::vector<Subset> minimal_;
  std::vector<Subset> authorized_;
  std::vector<Subset> unauthorized_;
  std::vector<std::uint8_t> member_;
};

inline void check_participant_count(int l) {
  if (l < 1) throw Error(ErrorCode::InvalidInput, "participant count must be at least 1");
  if (l > kMaxParticipants) {
    throw Error(ErrorCode::TooManyParticipants,
                std::to_string(l) + " participants exceeds the enumeration cap of " +
                    std::to_string(kMaxParticipants));
  }
}

// All supersets of some generator. The unauthorized family is the rest of
// 2^{1..l}; minimal_sets is the antichain reduction of the generators.
inline AccessStructure monotone_closure(int l, const std::vector<Subset>& generators) {
  check_participant_count(l);
  if (generators.empty()) throw Error(ErrorCode::EmptyGenerator, "no generator sets given");
  for (Subset g : generators) {
    if (g.empty()) throw Error(ErrorCode::EmptyGenerator, "generator sets must be nonempty");
    if (g.max_member() > l) {
      throw Error(ErrorCode::IndexOutOfRange, "generator " + g.to_string() + " exceeds L=" + std::to_string(l));
    }
  }

  AccessStructure a;
  a.l_ = l;
  for (Subset g : generators) {
    const bool dominated = std::any_of(generators.begin(), generators.end(),
                                       [g](Subset other) { return other != g && g.includes(other); });
    if (!dominated && std::find(a.minimal_.begin(), a.minimal_.end(), g) == a.minimal_.end()) {
      a.minimal_.push_back(g);
    }
  }
  std::sort(a.minimal_.begin(), a.minimal_.end());

  const std::uint32_t count = 1u << l;
  a.member_.assign(count, 0);
  for (std::uint32_t mask = 0; mask < count; ++mask) {
    const Subset s(mask);
    const bool auth = std::any_of(a.minimal_.begin(), a.minimal_.end(), [s](Subset g) { return s.includes(g); });
    a.member_[mask] = auth ? 1 : 0;
    (auth ? a.authorized_ : a.unauthorized_).push_back(s);
  }
  std::sort(a.authorized_.begin(), a.authorized_.end());
  std::sort(a.unauthorized_.begin(), a.unauthorized_.end());
  return a;
}

// Every subset of size >= t is authorized.
inline AccessStructure threshold_structure(int l, int t) {
  check_participant_count(l);
  if (t < 1 || t > l) {
    throw Error(ErrorCode::ThresholdOutOfRange, "t=" + std::to_string(t) + " with L=" + std::to_string(l));
  }
  std::vector<Subset> generators;
  for (std::uint32_t mask = 0; mask < (1u << l); ++mask) {
    if (Subset(mask).size() == t) generators.emplace_back(mask);
  }
  return monotone_closure(l, generators);
}

struct ExtremalSets {
  Subset a_star;
  Subset u_star;
  double o_a_star = 0.0;
  double o_u_star = 0.0;
};

// a_star minimizes o over the authorized sets, u_star maximizes it over the
// unauthorized ones. Ties go to the smaller set, then lexicographic order,
// which the sorted family order gives for free.
inline ExtremalSets extremal_sets(const AccessStructure& structure, const SourceSpec& spec) {
  if (structure.participants() != spec.participants()) {
    throw Error(ErrorCode::InvalidInput, "access structure and source disagree on L");
  }
  ExtremalSets out;
  bool have_a = false;
  for (Subset s : structure.authorized()) {
    const double o = derive_gain_vector(spec, s).o;
    if (!have_a || o < out.o_a_star) {
      out.a_star = s;
      out.o_a_star = o;
      have_a = true;
    }
  }
  bool have_u = false;
  for (Subset s : structure.unauthorized()) {
    const double o = derive_gain_vector(spec, s).o;
    if (!have_u || o > out.o_u_star) {
      out.u_star = s;
      out.o_u_star = o;
      have_u = true;
    }
  }
  return out;
}

// Nested extremal sets for the threshold structures t = 1..L (Gains mode):
// with participants sorted by |H(l)| ascending, A*_t holds the t weakest and
// U*_t the t-1 strongest. Element t-1 of the result belongs to threshold t.
inline std::vector<ExtremalSets> threshold_star_chain(const SourceSpec& spec) {
  if (!spec.is_gains()) {
    throw Error(ErrorCode::InvalidInput, "threshold chain requires a gain-vector source");
  }
  const int l = spec.participants();
  std::vector<int> order(static_cast<std::size_t>(l));
  for (int i = 0; i < l; ++i) order[static_cast<std::size_t>(i)] = i + 1;
  const auto& h = spec.gains();
  std::stable_sort(order.begin(), order.end(), [&h](int a, int b) {
    return std::abs(h[static_cast<std::size_t>(a - 1)]) < std::abs(h[static_cast<std::size_t>(b - 1)]);
  });

  std::vector<ExtremalSets> chain;
  chain.reserve(static_cast<std::size_t>(l));
  for (int t = 1; t <= l; ++t) {
    ExtremalSets e;
    for (int i = 0; i < t; ++i) e.a_star.insert(order[static_cast<std::size_t>(i)]);
    for (int i = l - t + 1; i < l; ++i) e.u_star.insert(order[static_cast<std::size_t>(i)]);
    e.o_a_star = derive_gain_vector(spec, e.a_star).o;
    e.o_u_star = derive_gain_vector(spec, e.u_star).o;
    chain.push_back(e);
  }
  return chain;
}

}  // namespace gshare
