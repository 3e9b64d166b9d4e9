#pragma once

#include "latforge/measured.hpp"

namespace latforge {

/// Affine lower/upper function on a measured structure: a finite list of
/// (anchor, coefficient) terms. A lower function evaluates as
///   f(x) = join_i ( bv(x, u_i) meet alpha_i ),
/// uppers dually. The full value vector is cached; equality of affine
/// functions is pointwise equality of values.
struct AffineFn {
  enum class Kind { Lower, Upper } kind = Kind::Lower;
  std::vector<std::pair<int, int>> terms;  // (anchor element, coefficient in E)
  std::vector<int> values;

  int eval(int x) const { return values[x]; }
  bool same_values(const AffineFn& g) const { return values == g.values; }
};

AffineFn make_affine(const MeasuredCalc& c, AffineFn::Kind kind,
                     std::vector<std::pair<int, int>> terms);
AffineFn principal_lower(const MeasuredCalc& c, int u);
AffineFn principal_upper(const MeasuredCalc& c, int u);

/// Meet of two affine lower functions, anchored on an (Id-meet)-sample of
/// all anchor pairs (the carrier works for every finite structure).
AffineFn meet_lower(const MeasuredCalc& c, const AffineFn& f, const AffineFn& g);
AffineFn meet_upper(const MeasuredCalc& c, const AffineFn& f, const AffineFn& g);

/// Least ideal (filter) function above an affine lower (upper) function:
///   f^Id(a) = join over nonempty I of ( bv(a in Id(u_I)) meet alpha_I ).
/// Throws TermBlowup when the term list exceeds `term_cap` anchors.
AffineFn id_closure(MeasuredCalc& c, const AffineFn& f, int term_cap = 16);
AffineFn fil_closure(MeasuredCalc& c, const AffineFn& f, int term_cap = 16);

/// Join in the lattice of affine ideal (filter) functions.
AffineFn join_id(MeasuredCalc& c, const AffineFn& f, const AffineFn& g, int term_cap = 16);
AffineFn join_fil(MeasuredCalc& c, const AffineFn& f, const AffineFn& g, int term_cap = 16);

bool is_lower_function(const MeasuredCalc& c, const std::vector<int>& values);
bool is_upper_function(const MeasuredCalc& c, const std::vector<int>& values);
bool is_ideal_function(const MeasuredCalc& c, const AffineFn& f);
bool is_filter_function(const MeasuredCalc& c, const AffineFn& f);

/// ⟦f <= g⟧ for f an affine upper and g an affine lower function,
/// computed from the anchors; equals the pointwise supremum of f∧g.
int vbv_le(const MeasuredCalc& c, const AffineFn& f, const AffineFn& g);

/// Transport along a prime filter: { cls(x,G) : f(x) in G } as a set of
/// classes of the quotient.
std::vector<bool> pi_g(const MeasuredCalc& c, const AffineFn& f, const PrimeFilter& g,
                       const MeasuredQuotient& q);

}  // namespace latforge
