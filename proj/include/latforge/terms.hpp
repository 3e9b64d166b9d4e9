#pragma once

#include <memory>

#include "latforge/affine.hpp"

namespace latforge {

/// Binary join/meet term over a carrier. Leaves hold carrier indices.
struct Term;
using TermPtr = std::shared_ptr<const Term>;

struct Term {
  enum class Kind { Leaf, Join, Meet } kind;
  int leaf = -1;
  TermPtr lhs, rhs;
  int height = 0;

  static TermPtr mk_leaf(int elem);
  static TermPtr mk_join(TermPtr a, TermPtr b);
  static TermPtr mk_meet(TermPtr a, TermPtr b);
};

/// Parses the shared term grammar: IDENT = [A-Za-z0-9_]+, meet `&`, join
/// `|`, `&` binds tighter, both left-associative, parentheses allowed.
TermPtr parse_term(const std::string& text, const FinitePoset& carrier);
std::string term_to_string(const TermPtr& t, const FinitePoset& carrier);

/// Child-order canonicalization (sorts commutative arguments); used for
/// display and dedup only, never inside the order recursions.
TermPtr canonical_term(const TermPtr& t);

/// Classical word problem over a partial lattice: the ideal/filter pair
/// of a term and the relations << and the inductive term order. Terms are
/// interned once; the recursions run over flat node ids.
class ClassicTermCalc {
 public:
  explicit ClassicTermCalc(const PartialLattice& p);

  const PartialLattice& P() const { return p_; }
  int handle(const TermPtr& t) { return intern(t); }
  const std::vector<bool>& lower(const TermPtr& t) { return lower_of(intern(t)); }
  const std::vector<bool>& upper(const TermPtr& t) { return upper_of(intern(t)); }
  bool ll(const TermPtr& x, const TermPtr& y) { return ll_ids(intern(x), intern(y)); }
  bool peq(const TermPtr& x, const TermPtr& y) { return peq_ids(intern(x), intern(y)); }
  bool peq_ids(int x, int y);

 private:
  struct Node {
    Term::Kind kind;
    int a = -1, b = -1;  // leaf element, or child ids
  };
  int intern(const TermPtr& t);
  const std::vector<bool>& lower_of(int id);
  const std::vector<bool>& upper_of(int id);
  bool ll_ids(int x, int y);
  void ensure_memo(int need);
  PartialLattice p_;
  std::map<std::tuple<int, int, int, int>, int> ids_;
  std::vector<Node> nodes_;
  std::vector<std::vector<bool>> lower_, upper_;
  std::vector<bool> lower_done_, upper_done_;
  std::vector<int8_t> peq_memo_;  // dense cap_ x cap_ matrix, -1 unknown
  int memo_cap_ = 0;
};

/// D-valued Boolean values on terms over a balanced measured structure.
class TermCalc {
 public:
  explicit TermCalc(std::shared_ptr<const MeasuredPL> m);
  explicit TermCalc(const MeasuredPL& m)
      : TermCalc(std::make_shared<const MeasuredPL>(m)) {}

  MeasuredCalc& calc() { return mc_; }
  const MeasuredPL& M() const { return mc_.M(); }

  const AffineFn& term_minus(const TermPtr& t);  // affine ideal function
  const AffineFn& term_plus(const TermPtr& t);   // affine filter function
  int bv_ll(const TermPtr& x, const TermPtr& y);
  int bv_le_terms(const TermPtr& x, const TermPtr& y);
  int bv_eq_terms(const TermPtr& x, const TermPtr& y);

 private:
  int intern(const TermPtr& t);
  MeasuredCalc mc_;
  std::map<std::tuple<int, int, int, int>, int> ids_;
  std::vector<TermPtr> by_id_;
  std::vector<AffineFn> minus_, plus_;
  std::vector<bool> minus_done_, plus_done_;
  std::unordered_map<uint64_t, int> le_memo_;
};

struct TheoremACaps {
  int height_cap = 4;
  int size_cap = 20000;
};

/// Quotient of the term algebra by ⟦x = y⟧ = top, closed under binary
/// join and meet up to the caps. When `closed` holds the representatives
/// form a finite lattice and psi is the full order table; otherwise the
/// oracle is partial but exact on the enumerated classes.
class TermQuotient {
 public:
  std::shared_ptr<const MeasuredPL> base;
  std::vector<TermPtr> reps;
  std::vector<int> leaf_class;  // carrier index -> class
  std::vector<int> psi;         // classes x classes -> E element
  bool closed = false;
  bool cap_exceeded = false;

  int classes() const { return static_cast<int>(reps.size()); }
  int psi_at(int i, int j) const { return psi[i * classes() + j]; }
  bool cls_le(int i, int j) const { return psi_at(i, j) == base->E.top(); }

  /// Class of an arbitrary term, when it falls in an enumerated class.
  std::optional<int> classify(const TermPtr& t) const;
  std::optional<int> cls_join(int i, int j) const;
  std::optional<int> cls_meet(int i, int j) const;

  /// Materializes the quotient as a measured total lattice (requires
  /// closed; carrier capped by make_total_lattice).
  MeasuredPL to_measured() const;

  std::shared_ptr<TermCalc> tc;  // shared with the construction; memo reuse
};

TermQuotient theorem_a(std::shared_ptr<const MeasuredPL> m, TheoremACaps caps = {});
TermQuotient theorem_a(const MeasuredPL& m, TheoremACaps caps = {});

}  // namespace latforge
