#include "latforge/gadgets.hpp"

#include <array>

namespace latforge {

MeasuredPL measure_from_generators(
    const PartialLattice& p, const DistLattice& D,
    const std::vector<std::pair<Congruence, int>>& gens) {
  const int g = static_cast<int>(gens.size());
  if (g > 8) throw Error("SizeLimit", "too many generating congruences");
  // all subset joins, with their values; D-join of values tracks the cong join
  std::vector<Congruence> closure(size_t(1) << g);
  std::vector<int> value(size_t(1) << g);
  closure[0] = cong_zero(p);
  value[0] = D.bot();
  for (uint32_t s = 1; s < (1u << g); ++s) {
    int i = __builtin_ctz(s);
    closure[s] = cong_join(p, closure[s & (s - 1)], gens[i].first);
    value[s] = D.join(value[s & (s - 1)], gens[i].second);
  }
  for (uint32_t s = 0; s < (1u << g); ++s)
    for (uint32_t t = 0; t < (1u << g); ++t)
      if (closure[s].subset_of(closure[t]) && !D.le(value[s], value[t]))
        throw Error("RelationViolation",
                    "generator values are not consistent with the congruence order");
  const int n = p.n();
  std::vector<int> table(static_cast<size_t>(n) * n, D.bot());
  for (int x = 0; x < n; ++x)
    for (int y = 0; y < n; ++y) {
      if (p.poset.le(x, y)) continue;
      Congruence th = theta_plus(p, x, y);
      int found = -1;
      for (uint32_t s = 0; s < (1u << g); ++s)
        if (closure[s] == th) { found = static_cast<int>(s); break; }
      if (found == -1)
        throw Error("RelationViolation",
                    "a principal congruence is not a join of the generators");
      table[x * n + y] = value[found];
    }
  return from_phi_table(p, D, table);
}

static MeasuredPL restrict_measured(const MeasuredPL& m, const std::vector<int>& keep,
                                    const PartialLattice& sub) {
  MeasuredPL out;
  out.pl = sub;
  out.E = m.E;
  const int k = static_cast<int>(keep.size());
  out.table.assign(static_cast<size_t>(k) * k, m.E.top());
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < k; ++j) out.table[i * k + j] = m.bv(keep[i], keep[j]);
  return out;
}

Gadget relcomp_gadget(const DistLattice& D, int val_ab, int val_bc) {
  FinitePoset poset = build_poset({"a", "b", "t", "c"},
                                  {{"a", "b"}, {"a", "t"}, {"b", "c"}, {"t", "c"}});
  PartialLattice P = make_total_lattice(poset);
  int a = 0, b = 1, t = 2, c = 3;
  std::vector<std::pair<Congruence, int>> gens;
  gens.emplace_back(theta(P, a, b), val_ab);
  gens.emplace_back(theta(P, a, t), val_bc);
  Gadget g;
  g.ambient = measure_from_generators(P, D, gens);
  FinitePoset kposet = build_poset({"a", "b", "c"}, {{"a", "b"}, {"b", "c"}});
  PartialLattice K = make_total_lattice(kposet);
  g.embed = {a, b, c};
  g.base = restrict_measured(g.ambient, g.embed, K);
  g.designated = {{"a", a}, {"b", b}, {"t", t}, {"c", c}};
  return g;
}

Gadget persp_gadget(const DistLattice& D, int v_xi, int v_eta, int v_alpha, int v_beta) {
  if (D.join(v_xi, v_alpha) != D.join(v_xi, v_beta) ||
      D.join(v_eta, v_alpha) != D.join(v_eta, v_beta))
    throw Error("RelationViolation",
                "inputs must satisfy xi∨alpha = xi∨beta and eta∨alpha = eta∨beta");
  FinitePoset kposet = build_poset(
      {"0", "m", "u", "v", "j", "1"},
      {{"0", "m"}, {"m", "u"}, {"m", "v"}, {"u", "j"}, {"v", "j"}, {"j", "1"}});
  PartialLattice K = make_total_lattice(kposet);
  FinitePoset poset = build_poset(
      {"0", "m", "u", "v", "j", "1", "x"},
      {{"0", "m"}, {"m", "u"}, {"m", "v"}, {"u", "j"}, {"v", "j"}, {"j", "1"},
       {"0", "x"}, {"x", "1"}});
  int e0 = 0, em = 1, eu = 2, ev = 3, ej = 4, e1 = 5, ex = 6;
  std::map<Key, int> joins, meets;
  // K is a sublattice of P: carry over all of its operations
  for (const auto& [k, val] : K.joins) joins[k] = val;
  for (const auto& [k, val] : K.meets) meets[k] = val;
  joins[make_key({ex, eu})] = e1;
  joins[make_key({ex, ev})] = e1;
  meets[make_key({ex, eu})] = e0;
  meets[make_key({ex, ev})] = e0;
  PartialLattice P = augment_singletons(validate_pl(poset, joins, meets));
  std::vector<std::pair<Congruence, int>> gens;
  gens.emplace_back(theta(P, e0, em), v_xi);     // xi
  gens.emplace_back(theta(P, ej, e1), v_eta);    // eta
  gens.emplace_back(theta_plus(P, eu, ev), v_alpha);  // alpha
  gens.emplace_back(theta_plus(P, ev, eu), v_beta);   // beta
  Gadget g;
  g.ambient = measure_from_generators(P, D, gens);
  g.embed = {e0, em, eu, ev, ej, e1};
  g.base = restrict_measured(g.ambient, g.embed, K);
  g.designated = {{"0", e0}, {"m", em}, {"u", eu}, {"v", ev},
                  {"j", ej}, {"1", e1}, {"x", ex}};
  return g;
}

int M3Result::index_of(int x, int y, int z) const {
  for (int i = 0; i < static_cast<int>(coords.size()); ++i)
    if (coords[i][0] == x && coords[i][1] == y && coords[i][2] == z) return i;
  return -1;
}

M3Result m3(const PartialLattice& K) {
  const int n = K.n();
  auto kmeet = [&](int x, int y) {
    int m = K.poset.inf_of({x, y});
    if (m == -1) throw Error("NotALattice", "M3 needs a total lattice base");
    return m;
  };
  M3Result out;
  std::vector<std::string> ids;
  for (int x = 0; x < n; ++x)
    for (int y = 0; y < n; ++y)
      for (int z = 0; z < n; ++z) {
        int xy = kmeet(x, y), xz = kmeet(x, z), yz = kmeet(y, z);
        if (xy != xz || xy != yz) continue;
        out.coords.push_back({x, y, z});
        ids.push_back(K.poset.id(x) + "," + K.poset.id(y) + "," + K.poset.id(z));
      }
  const int m = static_cast<int>(out.coords.size());
  std::vector<bool> le(static_cast<size_t>(m) * m, false);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) {
      bool ok = true;
      for (int c = 0; c < 3; ++c)
        if (!K.poset.le(out.coords[i][c], out.coords[j][c])) { ok = false; break; }
      le[i * m + j] = ok;
    }
  FinitePoset poset = FinitePoset::from_closed(std::move(ids), std::move(le));
  out.m3 = make_total_lattice(poset);  // throws NotALattice if a sup/inf is missing
  std::vector<int> diag(n);
  for (int x = 0; x < n; ++x) {
    diag[x] = out.index_of(x, x, x);
    if (diag[x] == -1) throw Error("NotALattice", "diagonal element missing");
  }
  out.diagonal = PLHom{K, out.m3, diag};
  return out;
}

DecompElements decomp_elements(const M3Result& m, int o, int i, int a, int b) {
  const PartialLattice& K = m.diagonal.src;
  if (!K.poset.le(o, a) || !K.poset.le(o, b) || !K.poset.le(a, i) || !K.poset.le(b, i))
    throw Error("UnknownElement", "need o <= {a,b} <= i");
  DecompElements d;
  d.a0 = m.index_of(a, o, o);
  d.a1 = m.index_of(o, a, o);
  d.b0 = m.index_of(b, o, o);
  d.b1 = m.index_of(o, b, o);
  if (d.a0 == -1 || d.a1 == -1 || d.b0 == -1 || d.b1 == -1)
    throw Error("UnknownElement", "decomposition triples missing from M3[K]");
  const PartialLattice& P = m.m3;
  auto join2 = [&](int x, int y) { return P.join_of(make_key({x, y})); };
  auto meet2 = [&](int x, int y) { return P.meet_of(make_key({x, y})); };
  int dia_o = m.diagonal(o), dia_a = m.diagonal(a), dia_b = m.diagonal(b);
  int dia_ab = m.diagonal(K.join_of(make_key({a, b})));
  if (meet2(d.a0, d.a1) != dia_o || join2(d.a0, d.a1) != dia_a)
    throw Error("VerificationFailed", "a0 ⊕ a1 does not decompose a");
  if (meet2(d.b0, d.b1) != dia_o || join2(d.b0, d.b1) != dia_b)
    throw Error("VerificationFailed", "b0 ⊕ b1 does not decompose b");
  for (int l = 0; l < 2; ++l) {
    int al = l == 0 ? d.a0 : d.a1, bl = l == 0 ? d.b0 : d.b1;
    Congruence lhs = theta(P, join2(al, bl), dia_ab);
    Congruence rhs = theta(P, dia_o, dia_ab);
    if (!(lhs == rhs))
      throw Error("VerificationFailed", "decomposition congruences disagree");
  }
  return d;
}

Gadget chain3_gadget(const DistLattice& D, int lo, int hi) {
  if (!D.le(lo, hi))
    throw Error("RelationViolation", "chain3 gadget needs lo <= hi in D");
  FinitePoset poset = build_poset({"o", "x", "i"}, {{"o", "x"}, {"x", "i"}});
  PartialLattice P = make_total_lattice(poset);
  std::vector<std::pair<Congruence, int>> gens;
  gens.emplace_back(theta(P, 0, 1), lo);
  gens.emplace_back(theta(P, 1, 2), hi);
  Gadget g;
  g.ambient = measure_from_generators(P, D, gens);
  FinitePoset kposet = build_poset({"o", "i"}, {{"o", "i"}});
  g.embed = {0, 2};
  g.base = restrict_measured(g.ambient, g.embed, make_total_lattice(kposet));
  g.designated = {{"o", 0}, {"x", 1}, {"i", 2}};
  return g;
}

SaturationRun saturation_run(const MeasuredPL& start,
                             const std::vector<SaturationApp>& apps,
                             TheoremACaps caps) {
  SaturationRun run;
  run.final_lattice = start;
  for (const SaturationApp& app : apps) {
    std::vector<int> f = app.anchors(run.final_lattice);
    SaturationStep step = saturation_step(app.gadget, run.final_lattice, f, caps);
    if (!step.result.L.closed)
      throw Error("CapExceeded", "saturation step did not close within the caps");
    MeasuredPL next = step.result.L.to_measured();
    run.steps.push_back(std::move(step));
    run.final_lattice = std::move(next);
  }
  return run;
}

SaturationStep saturation_step(const Gadget& gadget, const MeasuredPL& L,
                               const std::vector<int>& f, TheoremACaps caps) {
  if (!gadget.base.E.structurally_equal(L.E))
    throw Error("ValueLatticeMismatch", "gadget and ambient lattice disagree on E");
  for (int x = 0; x < gadget.base.n(); ++x)
    for (int y = 0; y < gadget.base.n(); ++y)
      if (L.bv(f[x], f[y]) != gadget.base.bv(x, y))
        throw Error("HomomorphismViolation",
                    "the map into L does not match the gadget base values");
  SaturationStep out;
  out.result = theorem_b(gadget.base, gadget.ambient, L, gadget.embed, f, caps);
  for (const auto& [name, idx] : gadget.designated)
    out.designated[name] = out.result.from_p[idx];
  out.from_l = out.result.from_q;
  return out;
}

}  // namespace latforge
