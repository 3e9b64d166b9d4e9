#pragma once

// Shared fixtures and independent oracles for the test suites. Oracles are
// deliberately naive reimplementations (brute force over subsets or
// relations) so they cannot share a failure mode with the library paths
// they check.

#include <algorithm>
#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "latforge/amalgam.hpp"
#include "latforge/generate.hpp"
#include "latforge/terms.hpp"

namespace oracle {

using namespace latforge;

// reflexive-transitive closure by repeated relational composition
inline std::vector<bool> closure_naive(int n, std::vector<bool> rel) {
  for (int i = 0; i < n; ++i) rel[i * n + i] = true;
  bool changed = true;
  while (changed) {
    changed = false;
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b) {
        if (rel[a * n + b]) continue;
        for (int c = 0; c < n; ++c)
          if (rel[a * n + c] && rel[c * n + b]) {
            rel[a * n + b] = true;
            changed = true;
            break;
          }
      }
  }
  return rel;
}

// every subset tested against the prime-filter definition directly;
// proper filters only (the whole lattice separates nothing)
inline std::vector<std::vector<bool>> prime_filters_naive(const DistLattice& d) {
  const int n = d.size();
  std::vector<std::vector<bool>> out;
  for (uint32_t mask = 1; mask < (1u << n); ++mask) {
    std::vector<bool> s(n, false);
    for (int i = 0; i < n; ++i) s[i] = mask & (1u << i);
    if (s[d.bot()]) continue;
    bool ok = true;
    for (int x = 0; x < n && ok; ++x)
      for (int y = 0; y < n && ok; ++y) {
        if (s[x] && d.le(x, y) && !s[y]) ok = false;                       // upward
        if (s[x] && s[y] && !s[d.meet(x, y)]) ok = false;                  // meets
        if (!s[x] && !s[y] && s[d.join(x, y)]) ok = false;                 // prime
      }
    if (ok) out.push_back(std::move(s));
  }
  return out;
}

// all closed preorders containing the order: toggles only non-order pairs
inline std::vector<Congruence> congruences_naive(const PartialLattice& p) {
  const int n = p.n();
  std::vector<std::pair<int, int>> free_pairs;
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      if (!p.poset.le(a, b)) free_pairs.emplace_back(a, b);
  const int k = static_cast<int>(free_pairs.size());
  std::vector<Congruence> out;
  for (uint32_t mask = 0; mask < (1u << k); ++mask) {
    Congruence c;
    c.n = n;
    c.rel.assign(static_cast<size_t>(n) * n, false);
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b) c.rel[a * n + b] = p.poset.le(a, b);
    for (int i = 0; i < k; ++i)
      if (mask & (1u << i)) c.rel[free_pairs[i].first * n + free_pairs[i].second] = true;
    bool ok = true;
    for (int a = 0; a < n && ok; ++a)
      for (int b = 0; b < n && ok; ++b) {
        if (!c.at(a, b)) continue;
        for (int z = 0; z < n; ++z)
          if (c.at(b, z) && !c.at(a, z)) { ok = false; break; }
      }
    for (const auto& [key, a] : p.joins) {
      if (!ok) break;
      for (int b = 0; b < n; ++b) {
        bool all = true;
        for (int x : key)
          if (!c.at(x, b)) { all = false; break; }
        if (all && !c.at(a, b)) { ok = false; break; }
      }
    }
    for (const auto& [key, a] : p.meets) {
      if (!ok) break;
      for (int b = 0; b < n; ++b) {
        bool all = true;
        for (int x : key)
          if (!c.at(b, x)) { all = false; break; }
        if (all && !c.at(b, a)) { ok = false; break; }
      }
    }
    if (ok) out.push_back(std::move(c));
  }
  return out;
}

// all lower subsets closed under the defined joins
inline std::vector<std::vector<bool>> ideals_naive(const PartialLattice& p) {
  const int n = p.n();
  std::vector<std::vector<bool>> out;
  for (uint32_t mask = 0; mask < (1u << n); ++mask) {
    std::vector<bool> s(n, false);
    for (int i = 0; i < n; ++i) s[i] = mask & (1u << i);
    if (is_ideal(p, s)) out.push_back(std::move(s));
  }
  return out;
}

// term evaluation in a total lattice
inline int eval_term(const PartialLattice& total, const TermPtr& t) {
  switch (t->kind) {
    case Term::Kind::Leaf:
      return t->leaf;
    case Term::Kind::Join:
      return total.join_of(make_key({eval_term(total, t->lhs), eval_term(total, t->rhs)}));
    case Term::Kind::Meet:
      return total.meet_of(make_key({eval_term(total, t->lhs), eval_term(total, t->rhs)}));
  }
  return -1;
}

// fixtures ------------------------------------------------------------

inline FinitePoset chain_poset(int n) {
  std::vector<std::string> ids;
  std::vector<std::pair<std::string, std::string>> pairs;
  for (int i = 0; i < n; ++i) ids.push_back(std::to_string(i));
  for (int i = 0; i + 1 < n; ++i) pairs.emplace_back(ids[i], ids[i + 1]);
  return build_poset(ids, pairs);
}

inline DistLattice chain_d(int n) { return as_dist_lattice(chain_poset(n)); }

inline FinitePoset square_poset() {
  return build_poset({"0", "p", "q", "1"}, {{"0", "p"}, {"0", "q"}, {"p", "1"}, {"q", "1"}});
}

inline PartialLattice antichain2_pl() {
  FinitePoset p = build_poset({"a", "b"}, {});
  return augment_singletons(validate_pl(p, {}, {}));
}

// proper two-valued structure over the two-element antichain
inline MeasuredPL antichain2_measured() { return classical_measured(antichain2_pl()); }

// the measured two-chain over the three-chain D with t(i,o) = m
inline MeasuredPL measured_2chain_over_3chain() {
  FinitePoset p = build_poset({"o", "i"}, {{"o", "i"}});
  PartialLattice pl = augment_singletons(validate_pl(p, {}, {}));
  DistLattice d = chain_d(3);
  std::vector<int> t(4, d.bot());
  t[1 * 2 + 0] = d.index_of("1");  // the middle element of {0,1,2} chain is "1"
  return from_phi_table(pl, d, t);
}

// sublattice of a total lattice generated by a seed set (binary closure)
inline std::vector<int> sublattice_closure(const PartialLattice& total,
                                           std::vector<int> seed) {
  std::sort(seed.begin(), seed.end());
  seed.erase(std::unique(seed.begin(), seed.end()), seed.end());
  bool changed = true;
  while (changed) {
    changed = false;
    std::vector<int> cur = seed;
    for (int a : cur)
      for (int b : cur)
        for (int v : {total.poset.sup_of({a, b}), total.poset.inf_of({a, b})})
          if (std::find(seed.begin(), seed.end(), v) == seed.end()) {
            seed.push_back(v);
            changed = true;
          }
    std::sort(seed.begin(), seed.end());
  }
  return seed;
}

// measured restriction of a total measured lattice to a sublattice
inline MeasuredPL restrict_to_sublattice(const MeasuredPL& m, const std::vector<int>& keep) {
  const int k = static_cast<int>(keep.size());
  std::vector<std::string> ids;
  std::vector<bool> le(static_cast<size_t>(k) * k, false);
  for (int i = 0; i < k; ++i) ids.push_back(m.pl.poset.id(keep[i]));
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < k; ++j) le[i * k + j] = m.pl.poset.le(keep[i], keep[j]);
  PartialLattice sub = make_total_lattice(FinitePoset::from_closed(std::move(ids), std::move(le)));
  MeasuredPL out;
  out.pl = std::move(sub);
  out.E = m.E;
  out.table.assign(static_cast<size_t>(k) * k, m.E.top());
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < k; ++j) out.table[i * k + j] = m.bv(keep[i], keep[j]);
  return out;
}

// random measured V-formation: sublattices of a random measured total
// lattice, glued over the sublattice generated by two random elements
inline VFormationM random_formation(Rng& rng) {
  PartialLattice total = random_total_lattice(rng, 5);
  DistLattice d = random_dist_lattice(rng, 5);
  MeasuredPL m0 = random_measured(rng, total, d);
  const int n = total.n();
  std::vector<int> kset = sublattice_closure(
      total, {int(rng() % n), int(rng() % n)});
  std::vector<int> pset = sublattice_closure(total, [&] {
    std::vector<int> s = kset;
    s.push_back(int(rng() % n));
    return s;
  }());
  std::vector<int> qset = sublattice_closure(total, [&] {
    std::vector<int> s = kset;
    s.push_back(int(rng() % n));
    return s;
  }());
  VFormationM v;
  v.K = restrict_to_sublattice(m0, kset);
  v.P = restrict_to_sublattice(m0, pset);
  v.Q = restrict_to_sublattice(m0, qset);
  for (int k : kset) {
    v.f.push_back(int(std::find(pset.begin(), pset.end(), k) - pset.begin()));
    v.g.push_back(int(std::find(qset.begin(), qset.end(), k) - qset.begin()));
  }
  return v;
}

// the universal property of a pushout against one mediating target
inline bool universal_property_against(const VFormationPL& v, const PushoutPL& po,
                                       const PartialLattice& s) {
  const int np = v.P.n(), nq = v.Q.n(), nk = v.K.n(), ns = s.n();
  std::vector<int> u(np, 0);
  std::vector<bool> in_k_image(nq, false);
  std::vector<int> k_at_q(nq, -1);
  for (int k = 0; k < nk; ++k) {
    in_k_image[v.g[k]] = true;
    k_at_q[v.g[k]] = k;
  }
  std::vector<int> free_q;
  for (int x = 0; x < nq; ++x)
    if (!in_k_image[x]) free_q.push_back(x);
  for (;;) {
    PLHom hu{v.P, s, u};
    if (is_plhom(hu)) {
      std::vector<int> w(nq, 0);
      for (int x = 0; x < nq; ++x)
        if (k_at_q[x] != -1) w[x] = u[v.f[k_at_q[x]]];
      const int fq = static_cast<int>(free_q.size());
      std::vector<int> pick(fq, 0);
      for (;;) {
        for (int i = 0; i < fq; ++i) w[free_q[i]] = pick[i];
        PLHom hw{v.Q, s, w};
        if (is_plhom(hw)) {
          std::vector<int> h = glue_cocone(v, po, u, w);
          PLHom hh{po.R, s, h};
          if (!is_plhom(hh)) return false;
        }
        int i = 0;
        while (i < fq && ++pick[i] == ns) pick[i++] = 0;
        if (i == fq) break;
      }
    }
    int i = 0;
    while (i < np && ++u[i] == ns) u[i++] = 0;
    if (i == np) break;
  }
  return true;
}

// mediating targets: all iso classes of posets up to 4 points, with the
// empty and the maximal operation domains plus seeded intermediates
inline std::vector<PartialLattice> mediating_targets(Rng& rng, int max_n,
                                                     int random_variants) {
  std::vector<PartialLattice> out;
  for (int n = 1; n <= max_n; ++n)
    for (const FinitePoset& poset : poset_catalog(n)) {
      out.push_back(validate_pl(poset, {}, {}));
      std::map<Key, int> joins, meets;
      for (uint32_t mask = 1; mask < (1u << n); ++mask) {
        Key k = mask_key(mask);
        if (int sup = poset.sup_of(k); sup != -1) joins[k] = sup;
        if (int inf = poset.inf_of(k); inf != -1) meets[k] = inf;
      }
      out.push_back(validate_pl(poset, joins, meets));
      for (int r = 0; r < random_variants; ++r) {
        std::map<Key, int> js, ms;
        for (const auto& [k, val] : joins)
          if (rng() % 2) js[k] = val;
        for (const auto& [k, val] : meets)
          if (rng() % 2) ms[k] = val;
        out.push_back(validate_pl(poset, js, ms));
      }
    }
  return out;
}

inline std::vector<TermPtr> all_terms_up_to_height(const FinitePoset& carrier,
                                                   int max_height) {
  std::vector<std::vector<TermPtr>> by_h(max_height + 1);
  for (int a = 0; a < carrier.size(); ++a) by_h[0].push_back(Term::mk_leaf(a));
  std::set<std::string> seen;
  auto cert = [&](const TermPtr& t) { return term_to_string(t, carrier); };
  for (const TermPtr& t : by_h[0]) seen.insert(cert(t));
  for (int h = 1; h <= max_height; ++h)
    for (int hl = 0; hl < h; ++hl) {
      int hr = h - 1 - hl;
      if (hr < 0 || hr >= h) continue;
      for (const TermPtr& a : by_h[hl])
        for (const TermPtr& b : by_h[hr]) {
          for (TermPtr t : {Term::mk_join(a, b), Term::mk_meet(a, b)}) {
            TermPtr c = canonical_term(t);
            if (seen.insert(cert(c)).second) by_h[h].push_back(c);
          }
        }
    }
  std::vector<TermPtr> out;
  for (auto& v : by_h) out.insert(out.end(), v.begin(), v.end());
  return out;
}

}  // namespace oracle
