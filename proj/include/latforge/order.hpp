#pragma once

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

namespace latforge {

/// Library-wide error type. `kind` is a stable machine-readable tag
/// (e.g. "AntisymmetryViolation", "NotALattice"); what() carries detail.
struct Error : std::runtime_error {
  std::string kind;
  Error(std::string k, const std::string& msg)
      : std::runtime_error(k + ": " + msg), kind(std::move(k)) {}
};

/// Finite poset over opaque string element ids. The relation is stored
/// fully closed (reflexive, transitive, antisymmetric). Element order is
/// the input order and is used for all deterministic outputs.
class FinitePoset {
 public:
  FinitePoset() = default;

  static FinitePoset from_closed(std::vector<std::string> ids,
                                 std::vector<bool> le);

  int size() const { return static_cast<int>(ids_.size()); }
  const std::vector<std::string>& elements() const { return ids_; }
  const std::string& id(int i) const { return ids_[i]; }
  int index_of(const std::string& id) const;
  bool has(const std::string& id) const { return index_.count(id) != 0; }

  bool le(int a, int b) const { return le_[a * size() + b]; }
  bool lt(int a, int b) const { return a != b && le(a, b); }

  // least upper bound / greatest lower bound of a nonempty index set,
  // or -1 when it does not exist
  int sup_of(const std::vector<int>& xs) const;
  int inf_of(const std::vector<int>& xs) const;

  std::vector<std::pair<int, int>> cover_pairs() const;
  int height() const;  // longest chain length minus one

  bool equals(const FinitePoset& o) const {
    return ids_ == o.ids_ && le_ == o.le_;
  }

 private:
  std::vector<std::string> ids_;
  std::unordered_map<std::string, int> index_;
  std::vector<bool> le_;
};

/// Builds the reflexive-transitive closure of `pairs` over `elements`.
/// Throws UnknownElement / AntisymmetryViolation.
FinitePoset build_poset(const std::vector<std::string>& elements,
                        const std::vector<std::pair<std::string, std::string>>& pairs);

struct PrimeFilter {
  int generator = -1;          // the join-irreducible generating the filter
  std::vector<bool> members;   // over the lattice's elements
  bool contains(int x) const { return members[x]; }
};

/// Finite bounded distributive lattice: a poset with total binary join
/// and meet tables. Construction verifies totality, distributivity, and
/// the bounds.
class DistLattice {
 public:
  DistLattice() = default;

  const FinitePoset& poset() const { return poset_; }
  int size() const { return poset_.size(); }
  const std::string& id(int i) const { return poset_.id(i); }
  int index_of(const std::string& id) const { return poset_.index_of(id); }
  bool le(int a, int b) const { return poset_.le(a, b); }

  int join(int a, int b) const { return join_[a * size() + b]; }
  int meet(int a, int b) const { return meet_[a * size() + b]; }
  int bot() const { return bot_; }
  int top() const { return top_; }

  int join_all(const std::vector<int>& xs) const;  // empty set -> bot
  int meet_all(const std::vector<int>& xs) const;  // empty set -> top

  bool structurally_equal(const DistLattice& o) const {
    return poset_.equals(o.poset_);
  }

  friend DistLattice as_dist_lattice(const FinitePoset& poset);
  friend DistLattice dualize(const DistLattice& d);

 private:
  FinitePoset poset_;
  std::vector<int> join_, meet_;
  int bot_ = -1, top_ = -1;
};

DistLattice as_dist_lattice(const FinitePoset& poset);
DistLattice dualize(const DistLattice& d);

/// The filters ↑p for p join-irreducible, in input element order. For a
/// distributive lattice these are exactly the prime filters, and they
/// separate elements: a<=b iff every prime filter containing a contains b.
std::vector<PrimeFilter> prime_filters(const DistLattice& d);

}  // namespace latforge
