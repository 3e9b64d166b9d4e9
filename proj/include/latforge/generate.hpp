#pragma once

#include <random>

#include "latforge/terms.hpp"

namespace latforge {

using Rng = std::mt19937_64;

/// All posets on exactly n labeled points up to isomorphism, as closed
/// relations. Enumerated once per size and cached.
const std::vector<FinitePoset>& poset_catalog(int n);

/// All lattices with at most max_n elements up to isomorphism (10 of them
/// for max_n = 5), as total partial lattices.
std::vector<PartialLattice> lattice_catalog(int max_n);

/// All bounded distributive lattices with at most max_n elements up to
/// isomorphism.
std::vector<DistLattice> dist_lattice_catalog(int max_n);

FinitePoset random_poset(Rng& rng, int n);
PartialLattice random_partial_lattice(Rng& rng, int n);  // augmented
PartialLattice random_total_lattice(Rng& rng, int max_n);
DistLattice random_dist_lattice(Rng& rng, int max_n);

/// Random valid measured structure over p: from a random family of
/// congruences theta_i with values d_i, phi(theta) = join of the d_i with
/// theta not below theta_i, always a join-zero homomorphism.
MeasuredPL random_measured(Rng& rng, const PartialLattice& p, const DistLattice& D);

/// Proper two-valued structure (the order indicator) over p.
MeasuredPL classical_measured(const PartialLattice& p);

TermPtr random_term(Rng& rng, const FinitePoset& carrier, int max_height);

struct SelfCheckReport {
  int cases = 0;
  int failures = 0;
  std::string first_failure;
};

/// Seeded invariant sweep used by the command-line selfcheck: random
/// structures through the validator, truth lemmas, Boolean-value algebra
/// laws, and classical/D-valued agreement at E = 2.
SelfCheckReport run_selfcheck(uint64_t seed, int cases);

}  // namespace latforge
