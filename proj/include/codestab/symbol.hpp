#pragma once

#include <compare>
#include <cstdint>
#include <functional>
#include <initializer_list>
#include <map>
#include <string>
#include <utility>

namespace codestab {

// Canonical, hashable encoding of one depth-bounded subtree. Ordering and
// equality are bytewise on the canonical form.
class SubtreeSymbol {
 public:
  SubtreeSymbol() = default;
  explicit SubtreeSymbol(std::string canonical_form)
      : form_(std::move(canonical_form)) {}

  const std::string& canonical_form() const noexcept { return form_; }

  friend bool operator==(const SubtreeSymbol&, const SubtreeSymbol&) = default;
  friend std::strong_ordering operator<=>(const SubtreeSymbol& a,
                                          const SubtreeSymbol& b) {
    return a.form_.compare(b.form_) <=> 0;
  }

 private:
  std::string form_;
};

struct SubtreeSymbolHash {
  std::size_t operator()(const SubtreeSymbol& s) const noexcept {
    return std::hash<std::string>{}(s.canonical_form());
  }
};

// Symbol -> occurrence count. Iteration is in canonical_form order.
class SubtreeMultiset {
 public:
  using Counts = std::map<SubtreeSymbol, std::uint64_t>;

  SubtreeMultiset() = default;
  SubtreeMultiset(
      std::initializer_list<std::pair<SubtreeSymbol, std::uint64_t>> init) {
    for (const auto& [sym, n] : init) add(sym, n);
  }

  // Adding zero occurrences is a no-op, so every stored count stays >= 1.
  void add(const SubtreeSymbol& symbol, std::uint64_t occurrences = 1) {
    if (occurrences == 0) return;
    counts_[symbol] += occurrences;
    total_ += occurrences;
  }

  std::uint64_t count(const SubtreeSymbol& symbol) const {
    auto it = counts_.find(symbol);
    return it == counts_.end() ? 0 : it->second;
  }

  std::uint64_t total() const noexcept { return total_; }
  std::size_t distinct() const noexcept { return counts_.size(); }
  bool empty() const noexcept { return total_ == 0; }
  const Counts& counts() const noexcept { return counts_; }

  auto begin() const noexcept { return counts_.begin(); }
  auto end() const noexcept { return counts_.end(); }

  friend bool operator==(const SubtreeMultiset&,
                         const SubtreeMultiset&) = default;

 private:
  Counts counts_;
  std::uint64_t total_ = 0;
};

}  // namespace codestab
