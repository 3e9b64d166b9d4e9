#include "latforge/generate.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <sstream>

#include "latforge/terms.hpp"

namespace latforge {

namespace {

// canonical certificate of a labeled poset under relabeling
std::string poset_cert(int n, const std::vector<bool>& le) {
  std::vector<int> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  std::string best;
  do {
    std::string cur(static_cast<size_t>(n) * n, '0');
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b)
        if (le[perm[a] * n + perm[b]]) cur[a * n + b] = '1';
    if (best.empty() || cur < best) best = cur;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return best;
}

std::vector<FinitePoset> enumerate_posets(int n) {
  // every finite poset embeds in a linear order, so its relation can be
  // taken upper-triangular after relabeling
  std::vector<std::pair<int, int>> slots;
  for (int a = 0; a < n; ++a)
    for (int b = a + 1; b < n; ++b) slots.emplace_back(a, b);
  const int s = static_cast<int>(slots.size());
  std::map<std::string, std::vector<bool>> found;
  for (uint32_t mask = 0; mask < (1u << s); ++mask) {
    std::vector<bool> le(static_cast<size_t>(n) * n, false);
    for (int i = 0; i < n; ++i) le[i * n + i] = true;
    for (int i = 0; i < s; ++i)
      if (mask & (1u << i)) le[slots[i].first * n + slots[i].second] = true;
    bool transitive = true;
    for (int a = 0; a < n && transitive; ++a)
      for (int b = 0; b < n && transitive; ++b)
        for (int c = 0; c < n; ++c)
          if (le[a * n + b] && le[b * n + c] && !le[a * n + c]) {
            transitive = false;
            break;
          }
    if (!transitive) continue;
    found.emplace(poset_cert(n, le), le);
  }
  std::vector<FinitePoset> out;
  for (const auto& [cert, le] : found) {
    std::vector<std::string> ids;
    for (int i = 0; i < n; ++i) ids.push_back("e" + std::to_string(i));
    out.push_back(FinitePoset::from_closed(std::move(ids), le));
  }
  return out;
}

bool poset_is_lattice(const FinitePoset& p) {
  for (int a = 0; a < p.size(); ++a)
    for (int b = 0; b < p.size(); ++b)
      if (p.sup_of({a, b}) == -1 || p.inf_of({a, b}) == -1) return false;
  return true;
}

}  // namespace

const std::vector<FinitePoset>& poset_catalog(int n) {
  static std::map<int, std::vector<FinitePoset>> cache;
  auto it = cache.find(n);
  if (it != cache.end()) return it->second;
  if (n > 6) throw Error("SizeLimit", "poset catalog capped at 6 points");
  return cache.emplace(n, enumerate_posets(n)).first->second;
}

std::vector<PartialLattice> lattice_catalog(int max_n) {
  std::vector<PartialLattice> out;
  for (int n = 1; n <= max_n; ++n)
    for (const FinitePoset& p : poset_catalog(n))
      if (poset_is_lattice(p)) out.push_back(make_total_lattice(p));
  return out;
}

std::vector<DistLattice> dist_lattice_catalog(int max_n) {
  std::vector<DistLattice> out;
  for (int n = 1; n <= max_n; ++n)
    for (const FinitePoset& p : poset_catalog(n)) {
      if (!poset_is_lattice(p)) continue;
      try {
        out.push_back(as_dist_lattice(p));
      } catch (const Error&) {
      }
    }
  return out;
}

FinitePoset random_poset(Rng& rng, int n) {
  std::uniform_int_distribution<int> coin(0, 3);
  std::vector<std::pair<std::string, std::string>> pairs;
  std::vector<std::string> ids;
  for (int i = 0; i < n; ++i) ids.push_back("p" + std::to_string(i));
  // edges respect the index order, so antisymmetry holds by construction
  for (int a = 0; a < n; ++a)
    for (int b = a + 1; b < n; ++b)
      if (coin(rng) == 0) pairs.emplace_back(ids[a], ids[b]);
  return build_poset(ids, pairs);
}

PartialLattice random_partial_lattice(Rng& rng, int n) {
  FinitePoset poset = random_poset(rng, n);
  std::map<Key, int> joins, meets;
  std::uniform_int_distribution<uint32_t> pick(1, (1u << n) - 1);
  std::uniform_int_distribution<int> howmany(0, n);
  int tries = howmany(rng);
  for (int i = 0; i < tries; ++i) {
    Key k = mask_key(pick(rng));
    if (int s = poset.sup_of(k); s != -1) joins.emplace(k, s);
    k = mask_key(pick(rng));
    if (int m = poset.inf_of(k); m != -1) meets.emplace(k, m);
  }
  return augment_singletons(validate_pl(poset, joins, meets));
}

PartialLattice random_total_lattice(Rng& rng, int max_n) {
  std::vector<PartialLattice> cat = lattice_catalog(std::min(max_n, 5));
  std::uniform_int_distribution<size_t> pick(0, cat.size() - 1);
  return cat[pick(rng)];
}

DistLattice random_dist_lattice(Rng& rng, int max_n) {
  std::vector<DistLattice> cat = dist_lattice_catalog(std::min(max_n, 6));
  std::uniform_int_distribution<size_t> pick(0, cat.size() - 1);
  return cat[pick(rng)];
}

MeasuredPL random_measured(Rng& rng, const PartialLattice& p, const DistLattice& D) {
  const int n = p.n();
  std::uniform_int_distribution<int> nfam(1, 4);
  std::uniform_int_distribution<int> elem(0, n - 1);
  std::uniform_int_distribution<int> dval(0, D.size() - 1);
  std::uniform_int_distribution<int> npairs(0, 2);
  const int k = nfam(rng);
  std::vector<Congruence> thetas;
  std::vector<int> vals;
  for (int i = 0; i < k; ++i) {
    std::vector<std::pair<int, int>> seeds;
    int m = npairs(rng);
    for (int j = 0; j < m; ++j) seeds.emplace_back(elem(rng), elem(rng));
    thetas.push_back(cong_closure(p, seeds));
    vals.push_back(dval(rng));
  }
  std::vector<int> table(static_cast<size_t>(n) * n, D.bot());
  for (int x = 0; x < n; ++x)
    for (int y = 0; y < n; ++y) {
      int acc = D.bot();
      for (int i = 0; i < k; ++i)
        if (!thetas[i].at(x, y)) acc = D.join(acc, vals[i]);
      table[x * n + y] = acc;
    }
  return from_phi_table(p, D, table);
}

MeasuredPL classical_measured(const PartialLattice& p) {
  DistLattice two = as_dist_lattice(build_poset({"0", "1"}, {{"0", "1"}}));
  const int n = p.n();
  std::vector<int> table(static_cast<size_t>(n) * n, two.bot());
  for (int x = 0; x < n; ++x)
    for (int y = 0; y < n; ++y)
      if (!p.poset.le(x, y)) table[x * n + y] = two.top();
  return from_phi_table(p, two, table);
}

TermPtr random_term(Rng& rng, const FinitePoset& carrier, int max_height) {
  std::uniform_int_distribution<int> elem(0, carrier.size() - 1);
  std::uniform_int_distribution<int> shape(0, 2);
  if (max_height <= 0 || shape(rng) == 0) return Term::mk_leaf(elem(rng));
  std::uniform_int_distribution<int> split(0, max_height - 1);
  int lh = split(rng);
  TermPtr a = random_term(rng, carrier, lh);
  TermPtr b = random_term(rng, carrier, max_height - 1 - a->height);
  return shape(rng) == 1 ? Term::mk_join(a, b) : Term::mk_meet(a, b);
}

SelfCheckReport run_selfcheck(uint64_t seed, int cases) {
  SelfCheckReport rep;
  Rng rng(seed);
  std::uniform_int_distribution<int> size(2, 5);
  for (int i = 0; i < cases; ++i) {
    ++rep.cases;
    std::ostringstream fail;
    try {
      PartialLattice p = random_partial_lattice(rng, size(rng));
      DistLattice d = random_dist_lattice(rng, 5);
      MeasuredPL m = random_measured(rng, p, d);
      TruthReport tr = check_truth_lemmas(m);
      if (!tr.ok) {
        fail << "truth lemma: " << tr.detail;
        throw Error("PropertyViolation", fail.str());
      }
      // Boolean-value transitivity on random term triples
      TermCalc tc(m);
      for (int t = 0; t < 10; ++t) {
        TermPtr x = random_term(rng, p.poset, 2);
        TermPtr y = random_term(rng, p.poset, 2);
        TermPtr z = random_term(rng, p.poset, 2);
        int xy = tc.bv_le_terms(x, y), yz = tc.bv_le_terms(y, z);
        int xz = tc.bv_le_terms(x, z);
        if (!m.E.le(m.E.meet(xy, yz), xz))
          throw Error("PropertyViolation", "term transitivity");
        if (tc.bv_le_terms(x, x) != m.E.top())
          throw Error("PropertyViolation", "term reflexivity");
      }
      // classical agreement at E = 2
      MeasuredPL cm = classical_measured(p);
      TermCalc ctc(cm);
      ClassicTermCalc cl(p);
      for (int t = 0; t < 10; ++t) {
        TermPtr x = random_term(rng, p.poset, 2);
        TermPtr y = random_term(rng, p.poset, 2);
        bool classical = cl.peq(x, y);
        bool dval = ctc.bv_le_terms(x, y) == cm.E.top();
        if (classical != dval)
          throw Error("PropertyViolation", "classical/D-valued bridge");
      }
    } catch (const Error& e) {
      ++rep.failures;
      if (rep.first_failure.empty())
        rep.first_failure = "case " + std::to_string(i) + ": " + e.what();
    }
  }
  return rep;
}

}  // namespace latforge
