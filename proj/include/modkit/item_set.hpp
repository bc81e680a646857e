#pragma once

#include <array>
#include <bit>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace modkit {

/// Largest universe addressable by a single-word ItemSet.
inline constexpr int kMaxItems = 64;
/// Largest universe addressable by a WideSet.
inline constexpr int kMaxWideItems = 1024;
/// Dense tables are only materialized up to this many items.
inline constexpr int kMaxTableItems = 24;

/// Thrown when an operation is asked to handle a universe beyond its limits.
class CapacityError : public std::length_error {
 public:
  using std::length_error::length_error;
};

/// Low `n` bits set.
constexpr std::uint64_t low_bits(int n) {
  return n >= 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << n) - 1;
}

/// A subset of the universe {1..n}, n <= 64. Item i lives at bit i-1.
class ItemSet {
 public:
  constexpr ItemSet() = default;
  ItemSet(std::uint64_t mask, int n) : mask_(mask), n_(n) {
    if (n < 0 || n > kMaxItems) {
      throw CapacityError("ItemSet supports at most 64 items, got " + std::to_string(n));
    }
    if ((mask & ~low_bits(n)) != 0) {
      throw std::domain_error("mask has bits outside the universe");
    }
  }

  static ItemSet empty(int n) { return {0, n}; }
  static ItemSet full(int n) { return {low_bits(n), n}; }
  /// Build from 1-based item indices.
  static ItemSet from_items(std::span<const int> items, int n);

  constexpr std::uint64_t mask() const { return mask_; }
  constexpr int universe() const { return n_; }
  int size() const { return std::popcount(mask_); }
  bool contains(int item) const { return (mask_ >> (item - 1)) & 1U; }
  bool is_subset_of(const ItemSet& other) const { return (mask_ & ~other.mask_) == 0; }

  ItemSet complement() const { return {~mask_ & low_bits(n_), n_}; }
  ItemSet operator|(const ItemSet& o) const { return {mask_ | o.mask_, checked_n(o)}; }
  ItemSet operator&(const ItemSet& o) const { return {mask_ & o.mask_, checked_n(o)}; }
  ItemSet operator-(const ItemSet& o) const { return {mask_ & ~o.mask_, checked_n(o)}; }

  /// 1-based item indices in ascending order.
  std::vector<int> items() const;

  friend bool operator==(const ItemSet&, const ItemSet&) = default;

 private:
  int checked_n(const ItemSet& o) const {
    if (o.n_ != n_) throw std::domain_error("universe size mismatch");
    return n_;
  }

  std::uint64_t mask_ = 0;
  int n_ = 0;
};

/// A subset of {1..n} for n up to 1024, stored inline. Used where the
/// universe outgrows a machine word (the 70-item construction, large learners).
class WideSet {
 public:
  static constexpr int kWords = kMaxWideItems / 64;

  WideSet() = default;
  explicit WideSet(int n) : n_(n) {
    if (n < 0 || n > kMaxWideItems) {
      throw CapacityError("WideSet supports at most 1024 items, got " + std::to_string(n));
    }
  }
  WideSet(const ItemSet& s) : WideSet(s.universe()) { words_[0] = s.mask(); }  // NOLINT

  static WideSet empty(int n) { return WideSet(n); }
  static WideSet full(int n);
  static WideSet from_items(std::span<const int> items, int n);

  int universe() const { return n_; }
  int word_count() const { return (n_ + 63) / 64; }
  std::uint64_t word(int w) const { return words_[static_cast<std::size_t>(w)]; }

  bool contains(int item) const {
    const int b = item - 1;
    return (words_[static_cast<std::size_t>(b / 64)] >> (b % 64)) & 1U;
  }
  void insert(int item) {
    const int b = item - 1;
    words_[static_cast<std::size_t>(b / 64)] |= std::uint64_t{1} << (b % 64);
  }
  void erase(int item) {
    const int b = item - 1;
    words_[static_cast<std::size_t>(b / 64)] &= ~(std::uint64_t{1} << (b % 64));
  }

  int size() const;
  bool none() const;
  bool is_subset_of(const WideSet& other) const;
  bool is_proper_subset_of(const WideSet& other) const { return is_subset_of(other) && !(*this == other); }

  WideSet complement() const;
  WideSet operator|(const WideSet& o) const;
  WideSet operator&(const WideSet& o) const;
  WideSet operator-(const WideSet& o) const;

  std::vector<int> items() const;

  /// Refuses universes larger than one machine word.
  ItemSet to_item_set() const;

  friend bool operator==(const WideSet& a, const WideSet& b) {
    return a.n_ == b.n_ && a.words_ == b.words_;
  }
  friend bool operator<(const WideSet& a, const WideSet& b);

  std::size_t hash() const;

 private:
  void check_same(const WideSet& o) const {
    if (o.n_ != n_) throw std::domain_error("universe size mismatch");
  }

  std::array<std::uint64_t, kWords> words_{};
  int n_ = 0;
};

struct WideSetHash {
  std::size_t operator()(const WideSet& s) const { return s.hash(); }
};

/// A multiset of subsets over a common universe.
class Collection {
 public:
  explicit Collection(int n) : n_(n) {}
  Collection(int n, std::vector<WideSet> sets);

  int universe() const { return n_; }
  std::size_t count() const { return sets_.size(); }
  const std::vector<WideSet>& sets() const { return sets_; }
  const WideSet& operator[](std::size_t i) const { return sets_[i]; }

  void add(const WideSet& s);
  Collection complement() const;

  /// Number of member sets containing each item (index 0 is item 1).
  std::vector<int> item_counts() const;
  /// Common frequency if every item appears in the same number of sets.
  std::optional<int> uniform_count() const;

  /// Average of `top - f(S)` over members.
  double average_deficit(const std::function<double(const WideSet&)>& f, double top) const;
  /// Average of `f(S) + top` over members.
  double average_surplus(const std::function<double(const WideSet&)>& f, double top) const;

 private:
  int n_;
  std::vector<WideSet> sets_;
};

/// Parse a set written as hex (0x..), binary (0b..) or a 1-based item list
/// ("1,3,5"; "" or "{}" for the empty set).
WideSet parse_set(const std::string& text, int n);

/// Item-list text for a set, e.g. "{1,3,5}".
std::string format_set(const WideSet& s);

}  // namespace modkit
