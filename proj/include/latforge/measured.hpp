#pragma once

#include <memory>
#include <optional>
#include <unordered_map>

#include "latforge/partial_lattice.hpp"

namespace latforge {

/// Partial lattice with a Boolean-value table into a finite bounded
/// distributive lattice E, written in the unit convention: bv(x,x) = top,
/// x <= y forces bv(x,y) = top, transitivity bv(a,b) ∧ bv(b,c) <= bv(a,c),
/// and defined joins/meets turn into meets of values. Equivalently (up to
/// dualizing E) a join-zero homomorphism from compact congruences into a
/// distributive lattice with zero; `from_phi_table` takes that reading.
struct MeasuredPL {
  PartialLattice pl;
  DistLattice E;
  std::vector<int> table;  // n*n -> E element

  int n() const { return pl.n(); }
  int bv(int a, int b) const { return table[a * n() + b]; }
  int bv_eq(int a, int b) const { return E.meet(bv(a, b), bv(b, a)); }
  bool proper() const;  // bv(x,y) = top exactly when x <= y
};

/// Builds a measured structure from a zero-convention table t over D
/// (t(x,y) = phi of the principal congruence forcing x below y). Sets
/// E = dualize(D) and validates every axiom; throws AxiomViolation.
MeasuredPL from_phi_table(const PartialLattice& p, const DistLattice& D,
                          const std::vector<int>& t);

/// Value in D of a finite join of principal congruences, given by its
/// generating pairs. Well-defined by the validated axioms.
int phi_of(const MeasuredPL& m, const std::vector<std::pair<int, int>>& pairs);

using Mask = uint32_t;  // subset of the carrier; carriers capped at 30

Mask key_mask(const Key& k);
Key mask_key(Mask m);

struct Cover {
  enum class Kind { Join, Meet } kind;
  Mask target = 0;
  std::vector<Mask> members;
};

struct Sample {
  enum class Kind { Join, Meet, IdM, FilM, IdJ, FilJ } kind;
  Mask target = 0;
  Mask members = 0;
  std::optional<int> index;  // ideal/filter index for IdJ/FilJ
};

/// Derived Boolean values over a fixed measured structure, with memo
/// tables for the ideal/filter stabilizations. Purely functional from the
/// outside; safe to discard and rebuild at any time.
class MeasuredCalc {
 public:
  explicit MeasuredCalc(std::shared_ptr<const MeasuredPL> m);
  explicit MeasuredCalc(const MeasuredPL& m)
      : MeasuredCalc(std::make_shared<const MeasuredPL>(m)) {}

  const MeasuredPL& M() const { return *m_; }
  std::shared_ptr<const MeasuredPL> shared() const { return m_; }
  const DistLattice& E() const { return m_->E; }
  int top() const { return m_->E.top(); }
  int bot() const { return m_->E.bot(); }
  int mt(int a, int b) const { return m_->E.meet(a, b); }
  int jn(int a, int b) const { return m_->E.join(a, b); }
  bool le(int a, int b) const { return m_->E.le(a, b); }

  int bv(int a, int b) const { return m_->bv(a, b); }
  int bv_eq(int a, int b) const { return m_->bv_eq(a, b); }
  int bv_in(int a, Mask Y) const;
  int bv_subset(Mask X, Mask Y) const;
  int bv_seteq(Mask X, Mask Y) const;

  int bv_join_eq(int a, Mask X) const;  // ⟦a = join X⟧
  int bv_meet_eq(int a, Mask X) const;
  int bv_le_join(int a, Mask X) const;  // ⟦a <= join X⟧
  int bv_meet_le(int a, Mask X) const;  // ⟦meet X <= a⟧
  int bv_le_join_with(int a, Mask X, Mask sample) const;
  int bv_meet_le_with(int a, Mask X, Mask sample) const;

  int bv_in_idn(int a, Mask X, Mask U, int n) const;
  int bv_in_filn(int a, Mask X, Mask U, int n) const;
  std::vector<int> idn_values(Mask X, Mask U, int n) const;   // all a at once
  std::vector<int> filn_values(Mask X, Mask U, int n) const;
  const std::vector<int>& id_values(Mask X);   // ⟦a ∈ Id(X)⟧, all a
  const std::vector<int>& fil_values(Mask X);  // ⟦a ∈ Fil(X)⟧, all a
  int bv_in_id(int a, Mask X) { return id_values(X)[a]; }
  int bv_in_fil(int a, Mask X) { return fil_values(X)[a]; }

  const std::vector<std::pair<Mask, int>>& join_entries() const { return joins_; }
  const std::vector<std::pair<Mask, int>>& meet_entries() const { return meets_; }

 private:
  std::vector<int> idn_vector(Mask X, Mask U, int steps, bool* stable) const;
  std::vector<int> filn_vector(Mask X, Mask U, int steps, bool* stable) const;

  std::shared_ptr<const MeasuredPL> m_;
  std::vector<std::pair<Mask, int>> joins_, meets_;
  std::unordered_map<Mask, std::vector<int>> id_memo_, fil_memo_;
  mutable std::unordered_map<uint64_t, int> join_eq_memo_, meet_eq_memo_;
  mutable std::unordered_map<uint64_t, int> le_join_memo_, meet_le_memo_;
};

bool is_finitely_covering(const MeasuredPL& m);
Cover cover_of(const MeasuredPL& m, Mask X, Cover::Kind kind);
bool verify_cover(const MeasuredPL& m, const Cover& c);

Sample join_sample(const MeasuredPL& m, Mask X);
Sample meet_sample(const MeasuredPL& m, Mask X);
bool verify_join_sample(MeasuredCalc& c, Mask X, Mask U);
bool verify_meet_sample(MeasuredCalc& c, Mask X, Mask U);

Sample idm_sample(const MeasuredPL& m, Mask X);
Sample film_sample(const MeasuredPL& m, Mask X);
bool verify_idm(MeasuredCalc& c, Mask X, Mask U);
bool verify_film(MeasuredCalc& c, Mask X, Mask U);

Sample idj_sample(const MeasuredPL& m, Mask X);
Sample filj_sample(const MeasuredPL& m, Mask X);
bool verify_idj(MeasuredCalc& c, Mask X, Mask U, int index);
bool verify_filj(MeasuredCalc& c, Mask X, Mask U, int index);

/// Greedy removal keeping the verifier green; deterministic.
Mask minimize_idm_sample(MeasuredCalc& c, const std::vector<Mask>& targets, Mask start);
Mask minimize_film_sample(MeasuredCalc& c, const std::vector<Mask>& targets, Mask start);

bool is_balanced(const MeasuredPL& m);

struct MeasuredQuotient {
  PartialLattice q;
  std::vector<int> cls;  // carrier index -> class index
};

MeasuredQuotient quotient(const MeasuredPL& m, const PrimeFilter& g);

struct TruthReport {
  bool ok = true;
  std::string detail;  // first counterexample when not ok
};

TruthReport check_truth_lemmas(const MeasuredPL& m);

struct KernelResult {
  MeasuredPL proper;
  PLHom proj;
  std::vector<int> cls;
};

KernelResult kernel_projection(const MeasuredPL& m);

struct MeasuredHom {
  std::shared_ptr<const MeasuredPL> src, dst;
  std::vector<int> map;
};

bool is_uniform(const MeasuredHom& f);
bool is_isometry(const MeasuredHom& f);

}  // namespace latforge
