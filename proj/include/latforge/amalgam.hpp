#pragma once

#include "latforge/terms.hpp"

namespace latforge {

/// V-formation of partial lattices: embeddings f: K -> P, g: K -> Q with
/// K a (total) lattice. Standard form has K = P ∩ Q set-theoretically and
/// inclusion maps.
struct VFormationPL {
  PartialLattice K, P, Q;
  std::vector<int> f, g;
};

/// Measured V-formation: K a finite measured lattice, f and g isometries
/// into measured P and Q over a shared value lattice.
struct VFormationM {
  MeasuredPL K, P, Q;
  std::vector<int> f, g;
};

bool is_standard(const VFormationPL& v);
bool is_standard(const VFormationM& v);

struct StandardizedPL {
  VFormationPL v;
  std::vector<std::string> renamed_p, renamed_q;  // per original index
};
struct StandardizedM {
  VFormationM v;
  std::vector<std::string> renamed_p, renamed_q;
};

StandardizedPL standardize(const VFormationPL& v);
StandardizedM standardize(const VFormationM& v);

struct PushoutPL {
  PartialLattice R;
  std::vector<int> in_p, in_q;  // inclusions
};

struct PushoutM {
  MeasuredPL R;
  std::vector<int> in_p, in_q;
};

/// Pushout of a standard V-formation: R = P ∪ Q, cross order through
/// interpolants in K, operations the union of both domains.
PushoutPL pushout_pl(const VFormationPL& v);

/// Measured pushout: same carrier and operations, cross Boolean values
///   bv(x,y) = join over z in K of bv_P(x,z) ∧ bv_Q(z,y).
/// The inclusions are isometries and the result validates as measured.
PushoutM pushout_measured(const VFormationM& v);

/// Glues a compatible cocone (u from P, v from Q into S agreeing on K)
/// through the pushout; the glued map is the unique candidate mediator.
std::vector<int> glue_cocone(const VFormationPL& v, const PushoutPL& po,
                             const std::vector<int>& u, const std::vector<int>& w);

/// R/G is the pushout of the prime-filter quotients.
bool check_pushout_quotient(const VFormationM& v, const PushoutM& po,
                            const PrimeFilter& g);

struct TransferredSample {
  Sample sample;
  bool fell_back = false;  // verification forced the full-carrier fallback
};

TransferredSample transfer_idm_sample(const VFormationM& v, const PushoutM& po,
                                      int a, int b);
TransferredSample transfer_film_sample(const VFormationM& v, const PushoutM& po,
                                       int a, int b);
TransferredSample transfer_idj_sample(const VFormationM& v, const PushoutM& po, Mask Z);
TransferredSample transfer_filj_sample(const VFormationM& v, const PushoutM& po, Mask Z);

/// Amalgamation pipeline: kernel-project the three structures, push out
/// over the projected K, and close the term algebra. The output quotient
/// is proper by construction; the returned maps commute with f and g and
/// restrict psi to the input tables.
struct TheoremBResult {
  TermQuotient L;
  std::vector<int> from_p;  // P index -> class of L
  std::vector<int> from_q;
  std::vector<int> from_k;
};

TheoremBResult theorem_b(const MeasuredPL& K, const MeasuredPL& P, const MeasuredPL& Q,
                         const std::vector<int>& f, const std::vector<int>& g,
                         TheoremACaps caps = {});

}  // namespace latforge
