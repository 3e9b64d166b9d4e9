#pragma once

#include <array>
#include <functional>
#include <string>

#include "latforge/amalgam.hpp"

namespace latforge {

/// A finite measured construction block: an ambient measured structure,
/// the measured base it extends, the base embedding, and named elements.
struct Gadget {
  MeasuredPL ambient;
  MeasuredPL base;
  std::vector<int> embed;  // base index -> ambient index
  std::map<std::string, int> designated;  // role -> ambient index
};

/// Measure defined on generating congruences: each generator carries a
/// value of D, every principal congruence must be a join of generators,
/// and the assignment must be order-consistent on the generated
/// join-subsemilattice. Throws RelationViolation otherwise.
MeasuredPL measure_from_generators(
    const PartialLattice& p, const DistLattice& D,
    const std::vector<std::pair<Congruence, int>>& gens);

/// Two-atom Boolean lattice {a,b,t,c} adding a relative complement t of b
/// in [a,c]; the two input values measure the edges [a,b] and [b,c].
Gadget relcomp_gadget(const DistLattice& D, int val_ab, int val_bc);

/// The seven-element perspectivity construction: K the six-element
/// lattice on {0, m, u, v, j, 1}, plus x with x∨u = x∨v = 1 and
/// x∧u = x∧v = 0. Inputs measure the generators ξ = Θ(0,m), η = Θ(j,1),
/// α = Θ⁺(u,v), β = Θ⁺(v,u) and must satisfy ξ∨α = ξ∨β and η∨α = η∨β.
Gadget persp_gadget(const DistLattice& D, int v_xi, int v_eta, int v_alpha, int v_beta);

/// Schmidt's M3[K] = { (x,y,z) in K^3 : x∧y = x∧z = y∧z } with the
/// diagonal embedding, which is internal and congruence-preserving.
struct M3Result {
  PartialLattice m3;
  PLHom diagonal;
  std::vector<std::array<int, 3>> coords;  // carrier index -> triple over K
  int index_of(int x, int y, int z) const;
};

M3Result m3(const PartialLattice& K);

/// The four decomposition witnesses a0, a1, b0, b1 of the M3[K] lemma.
struct DecompElements {
  int a0, a1, b0, b1;
};

DecompElements decomp_elements(const M3Result& m, int o, int i, int a, int b);

/// Measured three-chain o < x < i with edge values lo <= hi in D.
Gadget chain3_gadget(const DistLattice& D, int lo, int hi);

/// One bounded saturation step: amalgamate the gadget's ambient with a
/// proper measured lattice L over the gadget base, via theorem_b. The
/// returned maps land in the extension's term quotient.
struct SaturationStep {
  TheoremBResult result;
  std::map<std::string, int> designated;  // role -> class of the extension
  std::vector<int> from_l;                // L index -> class
};

SaturationStep saturation_step(const Gadget& gadget, const MeasuredPL& L,
                               const std::vector<int>& f, TheoremACaps caps = {});

/// Bounded saturation loop: applies the listed gadgets in order, each one
/// consuming the materialized extension of the previous step. The anchor
/// callback picks the base images inside the current lattice. Every step
/// must close within the caps (CapExceeded otherwise).
struct SaturationApp {
  Gadget gadget;
  std::function<std::vector<int>(const MeasuredPL&)> anchors;
};

struct SaturationRun {
  MeasuredPL final_lattice;
  std::vector<SaturationStep> steps;
};

SaturationRun saturation_run(const MeasuredPL& start,
                             const std::vector<SaturationApp>& apps,
                             TheoremACaps caps = {});

}  // namespace latforge
