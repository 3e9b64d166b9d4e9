#include "latforge/amalgam.hpp"

#include <algorithm>
#include <set>

namespace latforge {

namespace {

bool is_total_lattice(const PartialLattice& p) {
  if (p.total) return true;
  // accept fully materialized maps as well
  return p.n() <= 16 &&
         p.joins.size() == (size_t(1) << p.n()) - 1 &&
         p.meets.size() == (size_t(1) << p.n()) - 1;
}

std::string fresh_id(std::string id, const std::set<std::string>& taken,
                     const char* suffix) {
  while (taken.count(id)) id += suffix;
  return id;
}

PartialLattice rename_pl(const PartialLattice& p, const std::vector<std::string>& ids) {
  PartialLattice out = p;
  const int n = p.n();
  std::vector<bool> le(static_cast<size_t>(n) * n);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) le[a * n + b] = p.poset.le(a, b);
  out.poset = FinitePoset::from_closed(ids, std::move(le));
  return out;
}

}  // namespace

bool is_standard(const VFormationPL& v) {
  if (!is_total_lattice(v.K)) return false;
  for (int k = 0; k < v.K.n(); ++k) {
    if (v.P.poset.id(v.f[k]) != v.K.poset.id(k)) return false;
    if (v.Q.poset.id(v.g[k]) != v.K.poset.id(k)) return false;
  }
  // K must be exactly the common part
  for (int x = 0; x < v.P.n(); ++x)
    if (v.Q.poset.has(v.P.poset.id(x)) && !v.K.poset.has(v.P.poset.id(x))) return false;
  return true;
}

bool is_standard(const VFormationM& v) {
  VFormationPL pl{v.K.pl, v.P.pl, v.Q.pl, v.f, v.g};
  return is_standard(pl);
}

StandardizedPL standardize(const VFormationPL& v) {
  if (!is_total_lattice(v.K)) throw Error("NotALattice", "the base of a V-formation");
  {
    PLHom hf{v.K, v.P, v.f}, hg{v.K, v.Q, v.g};
    if (!is_pl_embedding(hf) || !is_pl_embedding(hg))
      throw Error("NotAnEmbedding", "V-formation legs must be embeddings");
  }
  std::set<std::string> k_ids(v.K.poset.elements().begin(), v.K.poset.elements().end());
  std::vector<int> f_at_p(v.P.n(), -1), g_at_q(v.Q.n(), -1);
  for (int k = 0; k < v.K.n(); ++k) {
    f_at_p[v.f[k]] = k;
    g_at_q[v.g[k]] = k;
  }
  // ids living outside the base images on either side; a shared outside
  // id is suffixed on both sides
  std::set<std::string> p_outside, q_outside;
  for (int x = 0; x < v.P.n(); ++x)
    if (f_at_p[x] == -1) p_outside.insert(v.P.poset.id(x));
  for (int x = 0; x < v.Q.n(); ++x)
    if (g_at_q[x] == -1) q_outside.insert(v.Q.poset.id(x));

  StandardizedPL out;
  out.renamed_p.resize(v.P.n());
  std::set<std::string> taken_p = k_ids;
  for (int x = 0; x < v.P.n(); ++x) {
    if (f_at_p[x] != -1) {
      out.renamed_p[x] = v.K.poset.id(f_at_p[x]);
      continue;
    }
    std::string id = v.P.poset.id(x);
    std::set<std::string> clashes = taken_p;
    clashes.insert(q_outside.begin(), q_outside.end());
    id = fresh_id(id, clashes, "_p");
    out.renamed_p[x] = id;
    taken_p.insert(id);
  }
  out.renamed_q.resize(v.Q.n());
  std::set<std::string> taken_q = k_ids;
  for (const std::string& s : out.renamed_p) taken_q.insert(s);
  for (int x = 0; x < v.Q.n(); ++x) {
    if (g_at_q[x] != -1) {
      out.renamed_q[x] = v.K.poset.id(g_at_q[x]);
      continue;
    }
    std::string id = v.Q.poset.id(x);
    std::set<std::string> clashes = taken_q;
    clashes.insert(p_outside.begin(), p_outside.end());
    id = fresh_id(id, clashes, "_q");
    out.renamed_q[x] = id;
    taken_q.insert(id);
  }
  out.v.K = v.K;
  out.v.P = rename_pl(v.P, out.renamed_p);
  out.v.Q = rename_pl(v.Q, out.renamed_q);
  out.v.f = v.f;
  out.v.g = v.g;
  return out;
}

StandardizedM standardize(const VFormationM& v) {
  if (!v.K.E.structurally_equal(v.P.E) || !v.K.E.structurally_equal(v.Q.E))
    throw Error("ValueLatticeMismatch", "V-formation over differing value lattices");
  MeasuredHom hf{std::make_shared<const MeasuredPL>(v.K),
                 std::make_shared<const MeasuredPL>(v.P), v.f};
  MeasuredHom hg{std::make_shared<const MeasuredPL>(v.K),
                 std::make_shared<const MeasuredPL>(v.Q), v.g};
  if (!is_isometry(hf) || !is_isometry(hg))
    throw Error("IsometryViolation", "V-formation legs must be isometries");
  VFormationPL plain{v.K.pl, v.P.pl, v.Q.pl, v.f, v.g};
  StandardizedPL s = standardize(plain);
  StandardizedM out;
  out.renamed_p = s.renamed_p;
  out.renamed_q = s.renamed_q;
  out.v.K = v.K;
  out.v.P = MeasuredPL{s.v.P, v.P.E, v.P.table};
  out.v.Q = MeasuredPL{s.v.Q, v.Q.E, v.Q.table};
  out.v.f = v.f;
  out.v.g = v.g;
  return out;
}

PushoutPL pushout_pl(const VFormationPL& v) {
  if (!is_standard(v)) throw Error("NotStandard", "pushout requires a standard V-formation");
  const int np = v.P.n(), nq = v.Q.n(), nk = v.K.n();
  std::vector<int> in_p(np), in_q(nq, -1);
  std::vector<std::string> ids;
  for (int x = 0; x < np; ++x) {
    in_p[x] = static_cast<int>(ids.size());
    ids.push_back(v.P.poset.id(x));
  }
  for (int k = 0; k < nk; ++k) in_q[v.g[k]] = in_p[v.f[k]];
  for (int x = 0; x < nq; ++x) {
    if (in_q[x] != -1) continue;
    in_q[x] = static_cast<int>(ids.size());
    ids.push_back(v.Q.poset.id(x));
  }
  const int n = static_cast<int>(ids.size());
  std::vector<bool> le(static_cast<size_t>(n) * n, false);
  for (int a = 0; a < np; ++a)
    for (int b = 0; b < np; ++b)
      if (v.P.poset.le(a, b)) le[in_p[a] * n + in_p[b]] = true;
  for (int a = 0; a < nq; ++a)
    for (int b = 0; b < nq; ++b)
      if (v.Q.poset.le(a, b)) le[in_q[a] * n + in_q[b]] = true;
  for (int a = 0; a < np; ++a)
    for (int b = 0; b < nq; ++b) {
      for (int z = 0; z < nk; ++z) {
        if (v.P.poset.le(a, v.f[z]) && v.Q.poset.le(v.g[z], b))
          le[in_p[a] * n + in_q[b]] = true;
        if (v.Q.poset.le(b, v.g[z]) && v.P.poset.le(v.f[z], a))
          le[in_q[b] * n + in_p[a]] = true;
      }
    }
  FinitePoset poset = FinitePoset::from_closed(std::move(ids), std::move(le));
  std::map<Key, int> joins, meets;
  auto merge = [&](const std::map<Key, int>& src, const std::vector<int>& inc,
                   std::map<Key, int>& dst) {
    for (const auto& [k, a] : src) {
      Key img;
      img.reserve(k.size());
      for (int x : k) img.push_back(inc[x]);
      img = make_key(std::move(img));
      auto [it, fresh] = dst.emplace(img, inc[a]);
      if (!fresh && it->second != inc[a])
        throw Error("PushoutConflict", "operation tables disagree on the base");
    }
  };
  merge(v.P.joins, in_p, joins);
  merge(v.Q.joins, in_q, joins);
  merge(v.P.meets, in_p, meets);
  merge(v.Q.meets, in_q, meets);
  PushoutPL out;
  out.R = validate_pl(poset, joins, meets);
  out.in_p = std::move(in_p);
  out.in_q = std::move(in_q);
  return out;
}

PushoutM pushout_measured(const VFormationM& v) {
  if (!is_standard(v)) throw Error("NotStandard", "pushout requires a standard V-formation");
  MeasuredHom hf{std::make_shared<const MeasuredPL>(v.K),
                 std::make_shared<const MeasuredPL>(v.P), v.f};
  MeasuredHom hg{std::make_shared<const MeasuredPL>(v.K),
                 std::make_shared<const MeasuredPL>(v.Q), v.g};
  if (!is_isometry(hf) || !is_isometry(hg))
    throw Error("IsometryViolation", "measured pushout legs must be isometries");
  VFormationPL plain{v.K.pl, v.P.pl, v.Q.pl, v.f, v.g};
  PushoutPL po = pushout_pl(plain);
  const DistLattice& E = v.P.E;
  const int n = po.R.n();
  std::vector<int> table(static_cast<size_t>(n) * n, E.top());
  const int np = v.P.n(), nq = v.Q.n(), nk = v.K.n();
  for (int a = 0; a < np; ++a)
    for (int b = 0; b < np; ++b) table[po.in_p[a] * n + po.in_p[b]] = v.P.bv(a, b);
  for (int a = 0; a < nq; ++a)
    for (int b = 0; b < nq; ++b) table[po.in_q[a] * n + po.in_q[b]] = v.Q.bv(a, b);
  std::vector<bool> from_p(n, false), from_q(n, false);
  for (int x = 0; x < np; ++x) from_p[po.in_p[x]] = true;
  for (int x = 0; x < nq; ++x) from_q[po.in_q[x]] = true;
  for (int a = 0; a < np; ++a)
    for (int b = 0; b < nq; ++b) {
      // shared elements are covered by the one-sided tables
      if (from_p[po.in_q[b]] || from_q[po.in_p[a]]) continue;
      int down = E.bot(), up = E.bot();
      for (int z = 0; z < nk; ++z) {
        down = E.join(down, E.meet(v.P.bv(a, v.f[z]), v.Q.bv(v.g[z], b)));
        up = E.join(up, E.meet(v.Q.bv(b, v.g[z]), v.P.bv(v.f[z], a)));
      }
      table[po.in_p[a] * n + po.in_q[b]] = down;
      table[po.in_q[b] * n + po.in_p[a]] = up;
    }
  // route through the zero-convention validator to recheck every axiom
  MeasuredPL R = from_phi_table(po.R, dualize(E), table);
  PushoutM out;
  out.R = std::move(R);
  out.in_p = po.in_p;
  out.in_q = po.in_q;
  return out;
}

std::vector<int> glue_cocone(const VFormationPL& v, const PushoutPL& po,
                             const std::vector<int>& u, const std::vector<int>& w) {
  std::vector<int> h(po.R.n(), -1);
  for (int x = 0; x < v.P.n(); ++x) h[po.in_p[x]] = u[x];
  for (int x = 0; x < v.Q.n(); ++x) {
    if (h[po.in_q[x]] != -1 && h[po.in_q[x]] != w[x])
      throw Error("CoconeMismatch", "cocone legs disagree on the base");
    h[po.in_q[x]] = w[x];
  }
  return h;
}

bool check_pushout_quotient(const VFormationM& v, const PushoutM& po,
                            const PrimeFilter& g) {
  MeasuredQuotient qR = quotient(po.R, g);
  MeasuredQuotient qK = quotient(v.K, g);
  MeasuredQuotient qP = quotient(v.P, g);
  MeasuredQuotient qQ = quotient(v.Q, g);
  std::vector<int> f2(qK.q.n(), -1), g2(qK.q.n(), -1);
  for (int x = 0; x < v.K.n(); ++x) {
    f2[qK.cls[x]] = qP.cls[v.f[x]];
    g2[qK.cls[x]] = qQ.cls[v.g[x]];
  }
  VFormationPL quotiented{qK.q, qP.q, qQ.q, f2, g2};
  StandardizedPL st = standardize(quotiented);
  PushoutPL po2 = pushout_pl(st.v);
  return pl_isomorphic(qR.q, po2.R);
}

namespace {

Mask map_mask(Mask src, const std::vector<int>& inc) {
  Mask out = 0;
  for (int i = 0; i < 31; ++i)
    if (src & (Mask(1) << i)) out |= Mask(1) << inc[i];
  return out;
}

Mask carrier_mask(int n) { return (Mask(1) << n) - 1; }

}  // namespace

TransferredSample transfer_idm_sample(const VFormationM& v, const PushoutM& po,
                                      int a, int b) {
  MeasuredCalc rc(po.R);
  std::vector<bool> in_p(po.R.n(), false);
  for (int x : po.in_p) in_p[x] = true;
  std::vector<bool> in_q(po.R.n(), false);
  for (int x : po.in_q) in_q[x] = true;
  auto locate = [&](const std::vector<int>& inc, int r) {
    for (int i = 0; i < static_cast<int>(inc.size()); ++i)
      if (inc[i] == r) return i;
    return -1;
  };
  Mask members = 0;
  if ((in_p[a] && in_p[b]) || (in_q[a] && in_q[b])) {
    // both ends on one side: any sample from that side works in R
    const bool left = in_p[a] && in_p[b];
    const MeasuredPL& side = left ? v.P : v.Q;
    const std::vector<int>& inc = left ? po.in_p : po.in_q;
    MeasuredCalc sc(side);
    Mask target = (Mask(1) << locate(inc, a)) | (Mask(1) << locate(inc, b));
    Mask u = minimize_idm_sample(sc, {target}, carrier_mask(side.n()));
    members = map_mask(u, inc);
  } else {
    // cross case: samples of {a,z} in P and {b,z} in Q, glued
    const bool a_in_p = in_p[a];
    int ai = locate(a_in_p ? po.in_p : po.in_q, a);
    int bi = locate(a_in_p ? po.in_q : po.in_p, b);
    const MeasuredPL& sideA = a_in_p ? v.P : v.Q;
    const MeasuredPL& sideB = a_in_p ? v.Q : v.P;
    const std::vector<int>& incA = a_in_p ? po.in_p : po.in_q;
    const std::vector<int>& incB = a_in_p ? po.in_q : po.in_p;
    const std::vector<int>& legA = a_in_p ? v.f : v.g;
    const std::vector<int>& legB = a_in_p ? v.g : v.f;
    MeasuredCalc ca(sideA), cb(sideB);
    std::vector<Mask> ta, tb;
    for (int z = 0; z < v.K.n(); ++z) {
      ta.push_back((Mask(1) << ai) | (Mask(1) << legA[z]));
      tb.push_back((Mask(1) << bi) | (Mask(1) << legB[z]));
    }
    Mask u = minimize_idm_sample(ca, ta, carrier_mask(sideA.n()));
    Mask w = minimize_idm_sample(cb, tb, carrier_mask(sideB.n()));
    members = map_mask(u, incA) | map_mask(w, incB);
  }
  TransferredSample out;
  out.sample = Sample{Sample::Kind::IdM, (Mask(1) << a) | (Mask(1) << b), members,
                      std::nullopt};
  if (!verify_idm(rc, out.sample.target, members)) {
    out.fell_back = true;
    out.sample.members = carrier_mask(po.R.n());
    if (!verify_idm(rc, out.sample.target, out.sample.members))
      throw Error("VerificationFailed", "carrier is not an Id-meet sample");
  }
  return out;
}

TransferredSample transfer_film_sample(const VFormationM& v, const PushoutM& po,
                                       int a, int b) {
  MeasuredCalc rc(po.R);
  std::vector<bool> in_p(po.R.n(), false);
  for (int x : po.in_p) in_p[x] = true;
  std::vector<bool> in_q(po.R.n(), false);
  for (int x : po.in_q) in_q[x] = true;
  auto locate = [&](const std::vector<int>& inc, int r) {
    for (int i = 0; i < static_cast<int>(inc.size()); ++i)
      if (inc[i] == r) return i;
    return -1;
  };
  Mask members = 0;
  if ((in_p[a] && in_p[b]) || (in_q[a] && in_q[b])) {
    const bool left = in_p[a] && in_p[b];
    const MeasuredPL& side = left ? v.P : v.Q;
    const std::vector<int>& inc = left ? po.in_p : po.in_q;
    MeasuredCalc sc(side);
    Mask target = (Mask(1) << locate(inc, a)) | (Mask(1) << locate(inc, b));
    Mask u = minimize_film_sample(sc, {target}, carrier_mask(side.n()));
    members = map_mask(u, inc);
  } else {
    const bool a_in_p = in_p[a];
    int ai = locate(a_in_p ? po.in_p : po.in_q, a);
    int bi = locate(a_in_p ? po.in_q : po.in_p, b);
    const MeasuredPL& sideA = a_in_p ? v.P : v.Q;
    const MeasuredPL& sideB = a_in_p ? v.Q : v.P;
    const std::vector<int>& incA = a_in_p ? po.in_p : po.in_q;
    const std::vector<int>& incB = a_in_p ? po.in_q : po.in_p;
    const std::vector<int>& legA = a_in_p ? v.f : v.g;
    const std::vector<int>& legB = a_in_p ? v.g : v.f;
    MeasuredCalc ca(sideA), cb(sideB);
    std::vector<Mask> ta, tb;
    for (int z = 0; z < v.K.n(); ++z) {
      ta.push_back((Mask(1) << ai) | (Mask(1) << legA[z]));
      tb.push_back((Mask(1) << bi) | (Mask(1) << legB[z]));
    }
    Mask u = minimize_film_sample(ca, ta, carrier_mask(sideA.n()));
    Mask w = minimize_film_sample(cb, tb, carrier_mask(sideB.n()));
    members = map_mask(u, incA) | map_mask(w, incB);
  }
  TransferredSample out;
  out.sample = Sample{Sample::Kind::FilM, (Mask(1) << a) | (Mask(1) << b), members,
                      std::nullopt};
  if (!verify_film(rc, out.sample.target, members)) {
    out.fell_back = true;
    out.sample.members = carrier_mask(po.R.n());
    if (!verify_film(rc, out.sample.target, out.sample.members))
      throw Error("VerificationFailed", "carrier is not a Fil-meet sample");
  }
  return out;
}

TransferredSample transfer_idj_sample(const VFormationM& v, const PushoutM& po, Mask Z) {
  MeasuredCalc rc(po.R);
  Mask zstar = map_mask(carrier_mask(v.P.n()), po.in_p) |
               map_mask(carrier_mask(v.Q.n()), po.in_q);
  int m = std::max(v.P.n(), v.Q.n());
  int h = v.K.pl.poset.height();
  int k = (h + 2) * m + h + 1;
  TransferredSample out;
  out.sample = Sample{Sample::Kind::IdJ, Z, zstar, k};
  if (!verify_idj(rc, Z, zstar, k)) {
    out.fell_back = true;
    out.sample.members = carrier_mask(po.R.n());
    out.sample.index = po.R.n();
    if (!verify_idj(rc, Z, out.sample.members, *out.sample.index))
      throw Error("VerificationFailed", "carrier is not an Id-join sample");
  }
  return out;
}

TransferredSample transfer_filj_sample(const VFormationM& v, const PushoutM& po, Mask Z) {
  MeasuredCalc rc(po.R);
  Mask zstar = map_mask(carrier_mask(v.P.n()), po.in_p) |
               map_mask(carrier_mask(v.Q.n()), po.in_q);
  int m = std::max(v.P.n(), v.Q.n());
  int h = v.K.pl.poset.height();
  int k = (h + 2) * m + h + 1;
  TransferredSample out;
  out.sample = Sample{Sample::Kind::FilJ, Z, zstar, k};
  if (!verify_filj(rc, Z, zstar, k)) {
    out.fell_back = true;
    out.sample.members = carrier_mask(po.R.n());
    out.sample.index = po.R.n();
    if (!verify_filj(rc, Z, out.sample.members, *out.sample.index))
      throw Error("VerificationFailed", "carrier is not a Fil-join sample");
  }
  return out;
}

TheoremBResult theorem_b(const MeasuredPL& K, const MeasuredPL& P, const MeasuredPL& Q,
                         const std::vector<int>& f, const std::vector<int>& g,
                         TheoremACaps caps) {
  if (!K.E.structurally_equal(P.E) || !K.E.structurally_equal(Q.E))
    throw Error("ValueLatticeMismatch", "theorem_b over differing value lattices");
  PLHom hf{K.pl, P.pl, f}, hg{K.pl, Q.pl, g};
  if (!is_plhom(hf) || !is_plhom(hg))
    throw Error("HomomorphismViolation", "legs are not partial-lattice homomorphisms");
  for (int x = 0; x < K.n(); ++x)
    for (int y = 0; y < K.n(); ++y) {
      if (P.bv(f[x], f[y]) != K.bv(x, y) || Q.bv(g[x], g[y]) != K.bv(x, y))
        throw Error("HomomorphismViolation",
                    "legs do not preserve the congruence measure");
    }
  KernelResult kK = kernel_projection(K);
  KernelResult kP = kernel_projection(P);
  KernelResult kQ = kernel_projection(Q);
  std::vector<int> f2(kK.proper.n(), -1), g2(kK.proper.n(), -1);
  for (int x = 0; x < K.n(); ++x) {
    f2[kK.cls[x]] = kP.cls[f[x]];
    g2[kK.cls[x]] = kQ.cls[g[x]];
  }
  VFormationM raw{kK.proper, kP.proper, kQ.proper, f2, g2};
  StandardizedM st = standardize(raw);
  PushoutM po = pushout_measured(st.v);
  TheoremBResult res;
  res.L = theorem_a(po.R, caps);
  res.from_p.resize(P.n());
  res.from_q.resize(Q.n());
  res.from_k.resize(K.n());
  for (int x = 0; x < P.n(); ++x)
    res.from_p[x] = res.L.leaf_class[po.in_p[kP.cls[x]]];
  for (int x = 0; x < Q.n(); ++x)
    res.from_q[x] = res.L.leaf_class[po.in_q[kQ.cls[x]]];
  for (int x = 0; x < K.n(); ++x) {
    res.from_k[x] = res.from_p[f[x]];
    if (res.from_k[x] != res.from_q[g[x]])
      throw Error("VerificationFailed", "theorem_b square does not commute");
  }
  // leaf restriction: psi reproduces the input tables
  for (int a = 0; a < P.n(); ++a)
    for (int b = 0; b < P.n(); ++b)
      if (res.L.psi_at(res.from_p[a], res.from_p[b]) != P.bv(a, b))
        throw Error("VerificationFailed", "psi does not restrict to the P table");
  for (int a = 0; a < Q.n(); ++a)
    for (int b = 0; b < Q.n(); ++b)
      if (res.L.psi_at(res.from_q[a], res.from_q[b]) != Q.bv(a, b))
        throw Error("VerificationFailed", "psi does not restrict to the Q table");
  return res;
}

}  // namespace latforge
