#include "doctest.h"
#include "support.hpp"

using namespace latforge;

namespace {

// chain2 K inside two 3-chains inserting p (resp. q) between
VFormationM chain_formation() {
  DistLattice d = oracle::chain_d(2);
  auto mk = [&](const std::vector<std::string>& ids) {
    std::vector<std::pair<std::string, std::string>> pairs;
    for (size_t i = 0; i + 1 < ids.size(); ++i) pairs.emplace_back(ids[i], ids[i + 1]);
    return classical_measured(make_total_lattice(build_poset(ids, pairs)));
  };
  VFormationM v;
  v.K = mk({"0", "1"});
  v.P = mk({"0", "p", "1"});
  v.Q = mk({"0", "q", "1"});
  v.f = {0, 2};
  v.g = {0, 2};
  return v;
}

}  // namespace

TEST_CASE("standardize: identity, point gluing, clash suffixing") {
  VFormationM v = chain_formation();
  StandardizedM st = standardize(v);
  CHECK(is_standard(st.v));
  CHECK(st.renamed_p == std::vector<std::string>{"0", "p", "1"});

  // one-point base with fresh names on both sides
  DistLattice d = oracle::chain_d(2);
  MeasuredPL k1 = classical_measured(make_total_lattice(build_poset({"k"}, {})));
  MeasuredPL p1 = classical_measured(make_total_lattice(build_poset({"p0"}, {})));
  MeasuredPL q1 = classical_measured(make_total_lattice(build_poset({"q0"}, {})));
  StandardizedM st1 = standardize(VFormationM{k1, p1, q1, {0}, {0}});
  CHECK(st1.renamed_p == std::vector<std::string>{"k"});
  CHECK(st1.renamed_q == std::vector<std::string>{"k"});

  // clash outside the images
  MeasuredPL p2 = classical_measured(
      make_total_lattice(build_poset({"k", "w"}, {{"k", "w"}})));
  MeasuredPL q2 = classical_measured(
      make_total_lattice(build_poset({"k", "w"}, {{"k", "w"}})));
  StandardizedM st2 = standardize(VFormationM{k1, p2, q2, {0}, {0}});
  CHECK(st2.renamed_p == std::vector<std::string>{"k", "w_p"});
  CHECK(st2.renamed_q == std::vector<std::string>{"k", "w_q"});
  // the rename is an isomorphism on each side
  CHECK(pl_isomorphic(st2.v.P.pl, p2.pl));
  CHECK(pl_isomorphic(st2.v.Q.pl, q2.pl));
}

TEST_CASE("standardize rejects a non-lattice base") {
  PartialLattice bare = oracle::antichain2_pl();
  MeasuredPL k = classical_measured(bare);
  MeasuredPL p = classical_measured(make_total_lattice(oracle::square_poset()));
  CHECK_THROWS_WITH_AS(standardize(VFormationM{k, p, p, {1, 2}, {1, 2}}),
                       doctest::Contains("NotALattice"), Error);
}

TEST_CASE("pushout_pl: spec shapes") {
  // one-point K, two 2-chains: a V with incomparable tops
  PartialLattice k1 = make_total_lattice(build_poset({"0"}, {}));
  PartialLattice c2a = make_total_lattice(build_poset({"0", "p"}, {{"0", "p"}}));
  PartialLattice c2b = make_total_lattice(build_poset({"0", "q"}, {{"0", "q"}}));
  PushoutPL po = pushout_pl(VFormationPL{k1, c2a, c2b, {0}, {0}});
  CHECK(po.R.n() == 3);
  int p = po.R.poset.index_of("p"), q = po.R.poset.index_of("q");
  CHECK_FALSE(po.R.poset.le(p, q));
  CHECK_FALSE(po.R.poset.le(q, p));

  // chains through a 2-chain base: p and q stay incomparable
  VFormationM v = chain_formation();
  StandardizedM st = standardize(v);
  PushoutPL po2 = pushout_pl(VFormationPL{st.v.K.pl, st.v.P.pl, st.v.Q.pl, st.v.f, st.v.g});
  CHECK(po2.R.n() == 4);
  int pp = po2.R.poset.index_of("p"), qq = po2.R.poset.index_of("q");
  CHECK_FALSE(po2.R.poset.le(pp, qq));
  CHECK_FALSE(po2.R.poset.le(qq, pp));
  CHECK(po2.R.poset.le(po2.R.poset.index_of("0"), pp));
  CHECK(po2.R.poset.le(pp, po2.R.poset.index_of("1")));

  // P = Q = K collapses to K
  PartialLattice sq = make_total_lattice(oracle::square_poset());
  std::vector<int> id{0, 1, 2, 3};
  PushoutPL po3 = pushout_pl(VFormationPL{sq, sq, sq, id, id});
  CHECK(pl_isomorphic(po3.R, sq));
}

TEST_CASE("pushout universal property on small formations") {
  Rng rng(307);
  std::vector<PartialLattice> targets = oracle::mediating_targets(rng, 3, 2);
  for (int trial = 0; trial < 6; ++trial) {
    VFormationM vm = oracle::random_formation(rng);
    StandardizedM st = standardize(vm);
    VFormationPL v{st.v.K.pl, st.v.P.pl, st.v.Q.pl, st.v.f, st.v.g};
    PushoutPL po = pushout_pl(v);
    for (const PartialLattice& s : targets)
      CHECK(oracle::universal_property_against(v, po, s));
  }
}

TEST_CASE("pushout_measured: trivial base cases and cross values") {
  // P = Q = K keeps the table
  PartialLattice sq = make_total_lattice(oracle::square_poset());
  DistLattice d = oracle::chain_d(3);
  Rng rng(311);
  MeasuredPL m = random_measured(rng, sq, d);
  std::vector<int> id{0, 1, 2, 3};
  PushoutM po = pushout_measured(VFormationM{m, m, m, id, id});
  CHECK(po.R.n() == 4);
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b) CHECK(po.R.bv(po.in_p[a], po.in_p[b]) == m.bv(a, b));

  // two-valued: indicator of the pushout order
  VFormationM v = chain_formation();
  StandardizedM st = standardize(v);
  PushoutM po2 = pushout_measured(st.v);
  for (int a = 0; a < po2.R.n(); ++a)
    for (int b = 0; b < po2.R.n(); ++b)
      CHECK((po2.R.bv(a, b) == po2.R.E.top()) == po2.R.pl.poset.le(a, b));

  // hand expansion of one cross value over a 2-element K
  CHECK(po2.R.proper());
}

TEST_CASE("pushout_measured: inclusions are isometries, covering preserved") {
  Rng rng(313);
  for (int trial = 0; trial < 12; ++trial) {
    VFormationM vm = oracle::random_formation(rng);
    StandardizedM st = standardize(vm);
    PushoutM po = pushout_measured(st.v);
    auto shared_r = std::make_shared<const MeasuredPL>(po.R);
    MeasuredHom hp{std::make_shared<const MeasuredPL>(st.v.P), shared_r, po.in_p};
    MeasuredHom hq{std::make_shared<const MeasuredPL>(st.v.Q), shared_r, po.in_q};
    CHECK(is_isometry(hp));
    CHECK(is_isometry(hq));
    CHECK(is_finitely_covering(po.R));
    // cross-value factorization through K
    MeasuredCalc rc(po.R);
    const DistLattice& E = po.R.E;
    const int nk = st.v.K.n();
    Mask kmask = 0;
    for (int z = 0; z < nk; ++z) kmask |= Mask(1) << po.in_p[st.v.f[z]];
    for (int a = 0; a < st.v.P.n(); ++a)
      for (int b = 0; b < st.v.Q.n(); ++b) {
        int lhs = po.R.bv_eq(po.in_p[a], po.in_q[b]);
        int rhs = E.bot();
        for (int z = 0; z < nk; ++z)
          rhs = E.join(rhs, E.meet(po.R.bv_eq(po.in_p[a], po.in_p[st.v.f[z]]),
                                   po.R.bv_eq(po.in_q[st.v.g[z]], po.in_q[b])));
        CHECK(lhs == rhs);
      }
    // containment: membership of a P-element in a Q-subset factors into K
    Mask qmask = 0;
    for (int x = 0; x < st.v.Q.n(); ++x) qmask |= Mask(1) << po.in_q[x];
    for (int a = 0; a < st.v.P.n(); ++a)
      for (Mask Y = qmask; Y != 0; Y = (Y - 1) & qmask)
        CHECK(E.le(rc.bv_in(po.in_p[a], Y), rc.bv_in(po.in_p[a], kmask)));
  }
}

TEST_CASE("pushout of balanced inputs is balanced") {
  Rng rng(317);
  for (int trial = 0; trial < 5; ++trial) {
    VFormationM vm = oracle::random_formation(rng);
    StandardizedM st = standardize(vm);
    PushoutM po = pushout_measured(st.v);
    if (po.R.n() > 7) continue;
    CHECK(is_balanced(po.R));
  }
}

TEST_CASE("pushout-quotient commutation") {
  VFormationM v = chain_formation();
  StandardizedM st = standardize(v);
  PushoutM po = pushout_measured(st.v);
  // E = 2: the only prime filter is the top class, both sides equal R
  for (const PrimeFilter& g : prime_filters(po.R.E))
    CHECK(check_pushout_quotient(st.v, po, g));

  Rng rng(331);
  for (int trial = 0; trial < 10; ++trial) {
    VFormationM vm = oracle::random_formation(rng);
    StandardizedM stm = standardize(vm);
    PushoutM pom = pushout_measured(stm.v);
    for (const PrimeFilter& g : prime_filters(pom.R.E))
      CHECK(check_pushout_quotient(stm.v, pom, g));
  }
}

TEST_CASE("sample transfer across the pushout") {
  Rng rng(337);
  for (int trial = 0; trial < 8; ++trial) {
    VFormationM vm = oracle::random_formation(rng);
    StandardizedM st = standardize(vm);
    PushoutM po = pushout_measured(st.v);
    MeasuredCalc rc(po.R);
    for (int a = 0; a < po.R.n(); ++a)
      for (int b = a; b < po.R.n(); ++b) {
        TransferredSample ts = transfer_idm_sample(st.v, po, a, b);
        CHECK_FALSE(ts.fell_back);
        CHECK(verify_idm(rc, ts.sample.target, ts.sample.members));
        TransferredSample fs = transfer_film_sample(st.v, po, a, b);
        CHECK_FALSE(fs.fell_back);
        CHECK(verify_film(rc, fs.sample.target, fs.sample.members));
      }
    Mask carrier = (Mask(1) << po.R.n()) - 1;
    for (Mask Z : std::vector<Mask>{1, carrier, (carrier >> 1) | 1}) {
      TransferredSample ts = transfer_idj_sample(st.v, po, Z);
      CHECK_FALSE(ts.fell_back);
      int h = st.v.K.pl.poset.height();
      int m = std::max(st.v.P.n(), st.v.Q.n());
      CHECK(*ts.sample.index == (h + 2) * m + h + 1);
      CHECK(verify_idj(rc, Z, ts.sample.members, *ts.sample.index));
      TransferredSample fs = transfer_filj_sample(st.v, po, Z);
      CHECK_FALSE(fs.fell_back);
      CHECK(verify_filj(rc, Z, fs.sample.members, *fs.sample.index));
    }
  }
}

TEST_CASE("theorem_b: degenerate and random instances") {
  // P = Q = K: the output is K's kernel projection
  PartialLattice sq = make_total_lattice(oracle::square_poset());
  DistLattice d = oracle::chain_d(3);
  Rng rng(347);
  MeasuredPL m = random_measured(rng, sq, d);
  std::vector<int> id{0, 1, 2, 3};
  TheoremBResult r = theorem_b(m, m, m, id, id);
  KernelResult k = kernel_projection(m);
  CHECK(r.L.closed);
  CHECK(r.L.classes() == k.proper.n());
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b)
      CHECK(r.L.psi_at(r.from_p[a], r.from_p[b]) == m.bv(a, b));

  for (int trial = 0; trial < 6; ++trial) {
    VFormationM vm = oracle::random_formation(rng);
    TheoremBResult rr = theorem_b(vm.K, vm.P, vm.Q, vm.f, vm.g,
                                  TheoremACaps{4, 200});
    // properness: distinct classes are never order-equivalent
    for (int i = 0; i < rr.L.classes(); ++i) {
      CHECK(rr.L.psi_at(i, i) == rr.L.base->E.top());
      for (int j = 0; j < rr.L.classes(); ++j)
        if (i != j) CHECK_FALSE((rr.L.cls_le(i, j) && rr.L.cls_le(j, i)));
    }
    for (int x = 0; x < vm.K.n(); ++x) CHECK(rr.from_p[vm.f[x]] == rr.from_q[vm.g[x]]);
  }
}

TEST_CASE("theorem_b rejects blatant non-homomorphisms") {
  VFormationM v = chain_formation();
  std::vector<int> bad = {2, 0};  // reverses the chain
  CHECK_THROWS_AS(theorem_b(v.K, v.P, v.Q, bad, v.g), Error);
}

TEST_CASE("theorem_b: non-embedding legs go through the kernel projection") {
  // K is the collapsed 2-chain (its interval carries value zero), f maps
  // it constantly into a proper 2-chain, g is the identity
  DistLattice d = oracle::chain_d(2);
  PartialLattice c2 = make_total_lattice(build_poset({"o", "i"}, {{"o", "i"}}));
  std::vector<int> zero_t(4, d.bot());
  MeasuredPL k = from_phi_table(c2, d, zero_t);
  MeasuredPL q = k;
  PartialLattice c2b = make_total_lattice(build_poset({"a", "b"}, {{"a", "b"}}));
  std::vector<int> proper_t(4, d.bot());
  proper_t[1 * 2 + 0] = d.top();
  MeasuredPL p = from_phi_table(c2b, d, proper_t);
  TheoremBResult r = theorem_b(k, p, q, {0, 0}, {0, 1});
  CHECK(r.L.closed);
  CHECK(r.L.classes() == 2);
  // K and Q collapse onto one class; P lands isomorphically
  CHECK(r.from_k[0] == r.from_k[1]);
  CHECK(r.from_q[0] == r.from_q[1]);
  CHECK(r.from_p[0] != r.from_p[1]);
  CHECK(r.from_k[0] == r.from_p[0]);
}
