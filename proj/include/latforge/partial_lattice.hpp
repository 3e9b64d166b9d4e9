#pragma once

#include <map>
#include <optional>
#include <vector>

#include "latforge/order.hpp"

namespace latforge {

using Key = std::vector<int>;  // sorted, deduplicated, nonempty element indices

Key make_key(std::vector<int> xs);

/// Finite partial lattice: a poset with partial join/meet maps on
/// nonempty subsets of the carrier. Every defined join (meet) must be the
/// actual sup (inf) in the order; validate_pl enforces this. A lattice is
/// a partial lattice whose maps are total (flagged, with all subset keys
/// materialized so that generic code can enumerate the domains).
struct PartialLattice {
  FinitePoset poset;
  std::map<Key, int> joins;
  std::map<Key, int> meets;
  bool total = false;

  int n() const { return poset.size(); }
  bool has_join(const Key& k) const { return joins.count(k) != 0; }
  bool has_meet(const Key& k) const { return meets.count(k) != 0; }
  int join_of(const Key& k) const { return joins.at(k); }
  int meet_of(const Key& k) const { return meets.at(k); }
};

PartialLattice validate_pl(const FinitePoset& poset,
                           const std::map<Key, int>& joins,
                           const std::map<Key, int>& meets);

/// Total lattice from a poset in which every nonempty subset has sup and
/// inf; materializes all subset keys (carrier capped at 16 elements).
PartialLattice make_total_lattice(const FinitePoset& poset);

/// Adds a = join{a} and a = meet{a} for every element. Idempotent; leaves
/// the congruence lattice unchanged.
PartialLattice augment_singletons(const PartialLattice& p);

/// A congruence as a closed preorder: contains the order, transitive, and
/// compatible with every defined join and meet. Stored as the full
/// relation; equality of congruences is relation equality.
struct Congruence {
  int n = 0;
  std::vector<bool> rel;

  bool at(int a, int b) const { return rel[a * n + b]; }
  bool operator==(const Congruence& o) const { return n == o.n && rel == o.rel; }
  bool subset_of(const Congruence& o) const;
  int pair_count() const;
};

Congruence cong_closure(const PartialLattice& p,
                        const std::vector<std::pair<int, int>>& seeds);
Congruence cong_zero(const PartialLattice& p);  // the order itself
Congruence cong_one(const PartialLattice& p);   // the full relation
Congruence theta_plus(const PartialLattice& p, int a, int b);
Congruence theta(const PartialLattice& p, int a, int b);
Congruence cong_join(const PartialLattice& p, const Congruence& a, const Congruence& b);
Congruence cong_intersect(const Congruence& a, const Congruence& b);
bool is_congruence(const PartialLattice& p, const Congruence& c);

/// All congruences of a finite partial lattice, generated as joins of
/// principal congruences, ordered by inclusion.
struct ConLattice {
  std::vector<Congruence> congs;  // insertion order; names c0, c1, ...
  FinitePoset order;              // inclusion order
  int bot = -1, top = -1;

  int size() const { return static_cast<int>(congs.size()); }
  int index_of(const Congruence& c) const;  // -1 when absent
};

ConLattice con_lattice(const PartialLattice& p, int cap = 4096);

/// Homomorphism of partial lattices, stored with copies of both ends.
struct PLHom {
  PartialLattice src;
  PartialLattice dst;
  std::vector<int> map;  // src index -> dst index

  int operator()(int x) const { return map[x]; }
};

bool is_plhom(const PLHom& f);
bool is_pl_embedding(const PLHom& f);

/// Image functor on compact congruences: sends a congruence of the source
/// to the congruence of the target generated by the image pairs.
Congruence conc_map(const PLHom& f, const Congruence& alpha);

struct QuotientPL {
  PartialLattice q;
  std::vector<int> cls;  // source index -> class index
  PLHom proj;
};

QuotientPL quotient_by_cong(const PartialLattice& p, const Congruence& theta);

// Classical ideal machinery (lower subsets closed under defined joins).
std::vector<bool> down_set(const PartialLattice& p, const std::vector<int>& xs);
std::vector<bool> up_set(const PartialLattice& p, const std::vector<int>& xs);
std::vector<bool> idn(const PartialLattice& p, const std::vector<int>& xs,
                      const std::vector<int>& us, int n);
std::vector<bool> filn(const PartialLattice& p, const std::vector<int>& xs,
                       const std::vector<int>& us, int n);
std::vector<bool> ideal_closure(const PartialLattice& p, const std::vector<int>& xs);
std::vector<bool> filter_closure(const PartialLattice& p, const std::vector<int>& xs);
bool is_ideal(const PartialLattice& p, const std::vector<bool>& set);
bool is_filter(const PartialLattice& p, const std::vector<bool>& set);

/// Isomorphism test for partial lattices (backtracking over order- and
/// operation-preserving bijections). Intended for desk-scale carriers.
bool pl_isomorphic(const PartialLattice& a, const PartialLattice& b);

}  // namespace latforge
