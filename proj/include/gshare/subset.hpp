#pragma once

#include <bit>
#include <compare>
#include <cstdint>
#include <initializer_list>
#include <string>
#include <vector>

#include "gshare/error.hpp"

namespace gshare {

inline constexpr int kMaxParticipants = 20;

// A set of participants drawn from 1..L, stored as a bitmask (participant p
// is bit p-1). Ordering is by cardinality first, then lexicographic order of
// the ascending member lists.
class Subset {
 public:
  constexpr Subset() = default;
  constexpr explicit Subset(std::uint32_t mask) : mask_(mask) {}

  Subset(std::initializer_list<int> members) {
    for (int p : members) insert(p);
  }

  static Subset from_members(const std::vector<int>& members) {
    Subset s;
    for (int p : members) s.insert(p);
    return s;
  }

  // {1, ..., count}
  static constexpr Subset first(int count) {
    return Subset(count >= 32 ? ~0u : ((1u << count) - 1u));
  }

  constexpr std::uint32_t mask() const noexcept { return mask_; }
  constexpr int size() const noexcept { return std::popcount(mask_); }
  constexpr bool empty() const noexcept { return mask_ == 0; }

  constexpr bool contains(int participant) const noexcept {
    return participant >= 1 && participant <= 32 && ((mask_ >> (participant - 1)) & 1u);
  }
  constexpr bool includes(Subset other) const noexcept { return (mask_ & other.mask_) == other.mask_; }

  void insert(int participant) {
    if (participant < 1 || participant > 32) {
      throw Error(ErrorCode::IndexOutOfRange, "participant index " + std::to_string(participant));
    }
    mask_ |= 1u << (participant - 1);
  }

  // Highest participant index present, 0 when empty.
  constexpr int max_member() const noexcept { return mask_ == 0 ? 0 : 32 - std::countl_zero(mask_); }

  std::vector<int> members() const {
    std::vector<int> out;
    out.reserve(static_cast<std::size_t>(size()));
    for (std::uint32_t m = mask_; m != 0; m &= m - 1) out.push_back(std::countr_zero(m) + 1);
    return out;
  }

  std::string to_string() const {
    std::string s = "{";
    bool first_member = true;
    for (int p : members()) {
      if (!first_member) s += ",";
      s += std::to_string(p);
      first_member = false;
    }
    return s + "}";
  }

  friend constexpr bool operator==(Subset a, Subset b) noexcept { return a.mask_ == b.mask_; }

  friend std::strong_ordering operator<=>(Subset a, Subset b) {
    if (auto c = a.size() <=> b.size(); c != 0) return c;
    // Same cardinality: lexicographic on ascending member lists, which is
    // decided by the lowest differing participant.
    const std::uint32_t diff = a.mask_ ^ b.mask_;
    if (diff == 0) return std::strong_ordering::equal;
    const std::uint32_t lowest = diff & (~diff + 1u);
    return (a.mask_ & lowest) ? std::strong_ordering::less : std::strong_ordering::greater;
  }

 private:
  std::uint32_t mask_ = 0;
};

}  // namespace gshare
