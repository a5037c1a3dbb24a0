#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "raagdiv/graph.hpp"

namespace raagdiv {

/// A generator or its inverse. The code 2*gen + (inverse ? 1 : 0) doubles as
/// the shortlex key: declaration order, positive before negative.
class Letter {
 public:
  constexpr Letter() = default;
  constexpr Letter(int gen, int sign)
      : code_(static_cast<std::uint8_t>(2 * gen + (sign < 0 ? 1 : 0))) {}
  static constexpr Letter from_code(std::uint8_t code) {
    Letter l;
    l.code_ = code;
    return l;
  }

  constexpr int gen() const { return code_ >> 1; }
  constexpr int sign() const { return (code_ & 1U) ? -1 : 1; }
  constexpr bool positive() const { return (code_ & 1U) == 0; }
  constexpr Letter inverse() const { return from_code(code_ ^ 1U); }
  constexpr Letter absolute() const { return from_code(code_ & ~1U); }
  constexpr std::uint8_t code() const { return code_; }

  friend constexpr auto operator<=>(Letter, Letter) = default;

 private:
  std::uint8_t code_ = 0;
};

/// A signed direction at a vertex of the cube complex (±â).
using Direction = Letter;

/// Element of A_Γ stored as its shortlex-least geodesic word. Instances are
/// produced by a Raag and carry that group's fingerprint.
class GroupElement {
 public:
  GroupElement() = default;

  int length() const { return static_cast<int>(codes_.size()); }
  int height() const { return height_; }
  bool is_identity() const { return codes_.empty(); }
  Letter letter(int i) const {
    return Letter::from_code(static_cast<std::uint8_t>(codes_[i]));
  }
  std::vector<Letter> letters() const;
  /// Raw letter codes, one byte per letter; useful as a hash key.
  const std::string& key() const { return codes_; }
  std::uint64_t group() const { return group_; }

  friend bool operator==(const GroupElement& a, const GroupElement& b) {
    return a.codes_ == b.codes_;
  }
  /// Shortlex order.
  friend bool operator<(const GroupElement& a, const GroupElement& b) {
    if (a.codes_.size() != b.codes_.size()) {
      return a.codes_.size() < b.codes_.size();
    }
    return a.codes_ < b.codes_;
  }

 private:
  friend class Raag;
  std::string codes_;
  int height_ = 0;
  std::uint64_t group_ = 0;
};

/// The right-angled Artin group of a defining graph: normal forms and the
/// group law.
class Raag {
 public:
  explicit Raag(DefiningGraph graph);

  const DefiningGraph& graph() const { return graph_; }
  int rank() const { return graph_.size(); }
  bool commute(int g, int h) const { return g != h && graph_.adjacent(g, h); }

  GroupElement identity() const;
  GroupElement generator(int gen, int power = 1) const;

  /// Free reduction up to commutation, then the shortlex-least spelling.
  GroupElement normalize(std::span<const Letter> raw) const;
  GroupElement multiply(const GroupElement& x, const GroupElement& y) const;
  GroupElement multiply(const GroupElement& x, Letter l) const;
  GroupElement inverse(const GroupElement& x) const;
  /// Each letter replaced by its positive generator.
  GroupElement abs_value(const GroupElement& x) const;
  /// x·a and x·a^{-1} for every generator a, in letter-code order.
  std::vector<GroupElement> neighbors(const GroupElement& x) const;
  /// x·d^{power}; the power may be negative.
  GroupElement power_step(const GroupElement& x, Letter d, int power) const;

  /// Parses "a b^-1 c^2"; an empty string or "1" is the identity.
  GroupElement parse(std::string_view text) const;
  std::string format(const GroupElement& x) const;
  std::string format(Letter l) const;

 private:
  void check(const GroupElement& x) const;
  // Appends one letter to a normal form in place.
  void append(std::string& codes, Letter l) const;
  void sort_shortlex(std::string& codes) const;
  GroupElement wrap(std::string codes) const;

  DefiningGraph graph_;
  std::uint64_t id_;
  std::vector<VertexMask> blocks_;  // generators not commuting with g, incl. g
};

/// Closed walk in the complement of Γ visiting every vertex, from a doubled
/// depth-first traversal rooted at vertex 0. Consecutive entries (cyclically)
/// do not commute. Throws std::invalid_argument if the complement is
/// disconnected.
std::vector<int> complement_walk(const DefiningGraph& g);

/// The bi-infinite geodesic η through the identity whose letters cycle
/// through the complement walk: η(t) for t >= 0 is a prefix of w w w ...,
/// η(-t) is the inverse of a suffix of ... w w.
GroupElement eta_geodesic(const Raag& raag, long t);

}  // namespace raagdiv

template <>
struct std::hash<raagdiv::GroupElement> {
  std::size_t operator()(const raagdiv::GroupElement& x) const noexcept {
    return std::hash<std::string>{}(x.key());
  }
};
