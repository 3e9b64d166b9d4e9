#include "doctest.h"
#include "latforge/gadgets.hpp"
#include "support.hpp"

using namespace latforge;

TEST_CASE("relcomp gadget: shape, congruences, properness") {
  DistLattice d = oracle::chain_d(3);
  int mid = d.index_of("1"), top = d.index_of("2");
  Gadget g = relcomp_gadget(d, mid, top);
  const PartialLattice& p = g.ambient.pl;
  int a = g.designated.at("a"), b = g.designated.at("b");
  int t = g.designated.at("t"), c = g.designated.at("c");
  CHECK(p.meet_of(make_key({b, t})) == a);
  CHECK(p.join_of(make_key({b, t})) == c);
  CHECK(con_lattice(p).size() == 4);
  // the base chain sits convexly: a and c bound everything
  for (int x = 0; x < p.n(); ++x) {
    CHECK(p.poset.le(a, x));
    CHECK(p.poset.le(x, c));
  }
  CHECK(g.ambient.proper());
  // zero on one edge kills properness
  Gadget flat = relcomp_gadget(d, d.bot(), top);
  CHECK_FALSE(flat.ambient.proper());
  // base values match the inputs
  CHECK(g.base.bv(1, 0) == g.ambient.bv(b, a));
  MeasuredHom emb{std::make_shared<const MeasuredPL>(g.base),
                  std::make_shared<const MeasuredPL>(g.ambient), g.embed};
  CHECK(is_isometry(emb));
}

TEST_CASE("persp gadget: the ten-congruence lattice") {
  DistLattice d = as_dist_lattice(oracle::square_poset());
  int vxi = d.index_of("p"), veta = d.index_of("q");
  int valpha = d.index_of("1"), vbeta = d.index_of("1");
  Gadget g = persp_gadget(d, vxi, veta, valpha, vbeta);
  const PartialLattice& p = g.ambient.pl;
  ConLattice con = con_lattice(p);
  CHECK(con.size() == 10);

  // the expected Hasse diagram of Con P
  FinitePoset expected = build_poset(
      {"zero", "alpha", "beta", "ab", "xi", "eta", "xibar", "etabar", "xieta", "one"},
      {{"zero", "alpha"}, {"zero", "beta"}, {"zero", "xi"}, {"zero", "eta"},
       {"alpha", "ab"}, {"beta", "ab"}, {"ab", "xibar"}, {"ab", "etabar"},
       {"xi", "xibar"}, {"eta", "etabar"}, {"xi", "xieta"}, {"eta", "xieta"},
       {"xibar", "one"}, {"etabar", "one"}, {"xieta", "one"}});
  PartialLattice con_pl = validate_pl(con.order, {}, {});
  PartialLattice exp_pl = validate_pl(expected, {}, {});
  CHECK(pl_isomorphic(con_pl, exp_pl));

  // generator identifications from the construction
  int u = g.designated.at("u"), v = g.designated.at("v"), x = g.designated.at("x");
  int e1 = g.designated.at("1");
  CHECK(theta_plus(p, x, u) == theta(p, u, e1));
  CHECK(theta_plus(p, x, u) == theta(p, v, e1));
  CHECK(theta_plus(p, x, u) == theta_plus(p, x, v));

  // Conc of the base inclusion is surjective onto Con P
  PLHom j{g.base.pl, p, g.embed};
  std::set<std::vector<bool>> image;
  for (const Congruence& c : con_lattice(g.base.pl).congs)
    image.insert(conc_map(j, c).rel);
  CHECK(image.size() == 10);
}

TEST_CASE("persp gadget rejects inconsistent values") {
  DistLattice d = as_dist_lattice(oracle::square_poset());
  // alpha = p, beta = q, xi = 0: xi ∨ alpha = p differs from xi ∨ beta = q
  CHECK_THROWS_WITH_AS(
      persp_gadget(d, d.bot(), d.bot(), d.index_of("p"), d.index_of("q")),
      doctest::Contains("RelationViolation"), Error);
}

TEST_CASE("m3: diamond over the 2-chain, singleton, congruence preservation") {
  PartialLattice c2 = make_total_lattice(oracle::chain_poset(2));
  M3Result r = m3(c2);
  CHECK(r.m3.n() == 5);
  // brute force over the 8 triples
  int count = 0;
  for (int x = 0; x < 2; ++x)
    for (int y = 0; y < 2; ++y)
      for (int z = 0; z < 2; ++z) {
        int xy = std::min(x, y), xz = std::min(x, z), yz = std::min(y, z);
        if (xy == xz && xy == yz) ++count;
      }
  CHECK(count == 5);

  PartialLattice one = make_total_lattice(build_poset({"e"}, {}));
  CHECK(m3(one).m3.n() == 1);

  for (int n : {2, 3}) {
    PartialLattice k = make_total_lattice(oracle::chain_poset(n));
    M3Result rr = m3(k);
    CHECK(is_pl_embedding(rr.diagonal));
    // internal: the diagonal image bounds the whole construction
    int lo = rr.diagonal(0), hi = rr.diagonal(n - 1);
    for (int x = 0; x < rr.m3.n(); ++x) {
      CHECK(rr.m3.poset.le(lo, x));
      CHECK(rr.m3.poset.le(x, hi));
    }
    ConLattice ck = con_lattice(k);
    ConLattice cm = con_lattice(rr.m3);
    CHECK(ck.size() == cm.size());
    std::set<std::vector<bool>> image;
    for (const Congruence& c : ck.congs) image.insert(conc_map(rr.diagonal, c).rel);
    CHECK(int(image.size()) == cm.size());
    // order preserved both ways through the bijection
    for (const Congruence& c1 : ck.congs)
      for (const Congruence& c2 : ck.congs)
        CHECK(c1.subset_of(c2) ==
              conc_map(rr.diagonal, c1).subset_of(conc_map(rr.diagonal, c2)));
  }
}

TEST_CASE("decomp_elements over the 3-chain") {
  PartialLattice k = make_total_lattice(oracle::chain_poset(3));
  M3Result r = m3(k);
  DecompElements d = decomp_elements(r, 0, 2, 1, 1);
  int dia0 = r.diagonal(0), dia1 = r.diagonal(1);
  CHECK(r.m3.meet_of(make_key({d.a0, d.a1})) == dia0);
  CHECK(r.m3.join_of(make_key({d.a0, d.a1})) == dia1);
  // theta equalities via the congruence oracle
  CHECK(theta(r.m3, dia0, d.a0) == theta(r.m3, dia0, d.a1));
  CHECK(theta(r.m3, dia0, d.a0) == theta(r.m3, dia0, dia1));
}

TEST_CASE("chain3 gadget: values, properness, internal base") {
  DistLattice d = oracle::chain_d(3);
  int mid = d.index_of("1"), top = d.index_of("2");
  Gadget g = chain3_gadget(d, mid, top);
  CHECK(g.ambient.n() == 3);
  CHECK(g.ambient.proper());
  CHECK(phi_of(g.ambient, {{1, 0}, {0, 1}}) == mid);
  // alpha = beta is fine; properness fails when a value is zero
  CHECK_NOTHROW(chain3_gadget(d, mid, mid));
  CHECK_FALSE(chain3_gadget(d, d.bot(), top).ambient.proper());
  CHECK_THROWS_AS(chain3_gadget(d, top, mid), Error);
  // the 2-chain base carries the joined value and embeds internally
  CHECK(g.base.bv(1, 0) == d.join(mid, top));
  int o = g.designated.at("o"), i = g.designated.at("i");
  for (int x = 0; x < g.ambient.n(); ++x) {
    CHECK(g.ambient.pl.poset.le(o, x));
    CHECK(g.ambient.pl.poset.le(x, i));
  }
}

TEST_CASE("saturation step: relative complement appears") {
  DistLattice d = oracle::chain_d(3);
  Gadget g = relcomp_gadget(d, d.index_of("1"), d.index_of("2"));
  // L is the measured base chain itself
  SaturationStep s = saturation_step(g, g.base, {0, 1, 2});
  int a = s.designated.at("a"), b = s.designated.at("b");
  int t = s.designated.at("t"), c = s.designated.at("c");
  REQUIRE(s.result.L.cls_meet(b, t).has_value());
  REQUIRE(s.result.L.cls_join(b, t).has_value());
  CHECK(*s.result.L.cls_meet(b, t) == a);
  CHECK(*s.result.L.cls_join(b, t) == c);
  // the L side lands isometrically: proper L keeps its elements apart
  for (int x = 0; x < g.base.n(); ++x)
    for (int y = 0; y < g.base.n(); ++y) {
      CHECK(s.result.L.psi_at(s.from_l[x], s.from_l[y]) == g.base.bv(x, y));
      if (x != y) CHECK(s.from_l[x] != s.from_l[y]);
    }
}

TEST_CASE("saturation step: perspectivity witness appears") {
  DistLattice d = as_dist_lattice(oracle::square_poset());
  Gadget g = persp_gadget(d, d.index_of("p"), d.index_of("q"), d.index_of("1"),
                          d.index_of("1"));
  std::vector<int> f(g.base.n());
  for (int i = 0; i < g.base.n(); ++i) f[i] = i;
  SaturationStep s = saturation_step(g, g.base, f, TheoremACaps{3, 60});
  int u = s.designated.at("u"), v = s.designated.at("v"), x = s.designated.at("x");
  int lo = s.designated.at("0"), hi = s.designated.at("1");
  REQUIRE(s.result.L.cls_meet(x, u).has_value());
  CHECK(*s.result.L.cls_meet(x, u) == lo);
  CHECK(*s.result.L.cls_meet(x, v) == lo);
  CHECK(*s.result.L.cls_join(x, u) == hi);
  CHECK(*s.result.L.cls_join(x, v) == hi);
}

TEST_CASE("saturation step: chain3 splits an interval") {
  DistLattice d = oracle::chain_d(3);
  int mid = d.index_of("1"), top = d.index_of("2");
  Gadget g = chain3_gadget(d, mid, top);
  SaturationStep s = saturation_step(g, g.base, {0, 1});
  int o = s.designated.at("o"), x = s.designated.at("x"), i = s.designated.at("i");
  CHECK(s.result.L.cls_le(o, x));
  CHECK(s.result.L.cls_le(x, i));
  CHECK(x != o);
  CHECK(x != i);
  CHECK(s.result.L.psi_at(x, o) == g.ambient.bv(1, 0));
  CHECK(s.result.L.psi_at(i, x) == g.ambient.bv(2, 1));
}

TEST_CASE("bounded saturation run: two interval splits in sequence") {
  DistLattice d = oracle::chain_d(3);
  int mid = d.index_of("1"), top = d.index_of("2");
  // start from a proper measured 2-chain whose interval carries the top value
  PartialLattice c2 = make_total_lattice(build_poset({"o", "i"}, {{"o", "i"}}));
  std::vector<int> t(4, d.bot());
  t[1 * 2 + 0] = top;
  MeasuredPL start = from_phi_table(c2, d, t);

  std::vector<SaturationApp> apps;
  // split [o, i] into values (mid, top)
  apps.push_back({chain3_gadget(d, mid, top), [](const MeasuredPL& l) {
                    return std::vector<int>{l.pl.poset.index_of("o"),
                                            l.pl.poset.index_of("i")};
                  }});
  // then split the fresh lower interval [o, x] into (mid, mid)
  apps.push_back({chain3_gadget(d, mid, mid), [](const MeasuredPL& l) {
                    return std::vector<int>{l.pl.poset.index_of("o"),
                                            l.pl.poset.index_of("x")};
                  }});
  SaturationRun run = saturation_run(start, apps);
  CHECK(run.steps.size() == 2);
  const MeasuredPL& l2 = run.final_lattice;
  CHECK(l2.n() == 4);
  CHECK(l2.proper());
  // structurally a 4-chain with edge values mid, mid, top from the bottom
  std::vector<int> chain;
  for (int e = 0; e < l2.n(); ++e) chain.push_back(e);
  std::sort(chain.begin(), chain.end(),
            [&](int a, int b) { return l2.pl.poset.lt(a, b); });
  for (size_t k = 0; k + 1 < chain.size(); ++k)
    CHECK(l2.pl.poset.lt(chain[k], chain[k + 1]));
  CHECK(l2.bv(chain[1], chain[0]) == mid);
  CHECK(l2.bv(chain[2], chain[1]) == mid);
  CHECK(l2.bv(chain[3], chain[2]) == top);
  CHECK(l2.bv(chain[3], chain[0]) == top);
}

TEST_CASE("saturation step checks value compatibility") {
  DistLattice d = oracle::chain_d(3);
  int mid = d.index_of("1"), top = d.index_of("2");
  Gadget g = chain3_gadget(d, mid, top);
  CHECK(g.base.bv(1, 0) == top);
  // an L whose single interval carries the middle value instead
  PartialLattice c2 = make_total_lattice(build_poset({"o", "i"}, {{"o", "i"}}));
  std::vector<int> t(4, d.bot());
  t[1 * 2 + 0] = mid;
  MeasuredPL wrong = from_phi_table(c2, d, t);
  CHECK_THROWS_WITH_AS(saturation_step(g, wrong, {0, 1}),
                       doctest::Contains("HomomorphismViolation"), Error);
}
