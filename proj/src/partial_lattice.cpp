#include "latforge/partial_lattice.hpp"

#include <algorithm>
#include <sstream>

namespace latforge {

Key make_key(std::vector<int> xs) {
  std::sort(xs.begin(), xs.end());
  xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
  if (xs.empty()) throw Error("EmptyKey", "join/meet keys must be nonempty");
  return xs;
}

static std::string key_str(const FinitePoset& poset, const Key& k) {
  std::ostringstream os;
  os << "{";
  for (size_t i = 0; i < k.size(); ++i) os << (i ? "," : "") << poset.id(k[i]);
  os << "}";
  return os.str();
}

PartialLattice validate_pl(const FinitePoset& poset,
                           const std::map<Key, int>& joins,
                           const std::map<Key, int>& meets) {
  PartialLattice p;
  p.poset = poset;
  const int n = poset.size();
  for (const auto& [k, a] : joins) {
    if (k.empty()) throw Error("EmptyKey", "empty join key");
    for (int x : k)
      if (x < 0 || x >= n) throw Error("UnknownElement", "join key out of range");
    for (int x : k)
      if (!poset.le(x, a))
        throw Error("NotSup", "'" + poset.id(a) + "' is not above " + key_str(poset, k));
    for (int b = 0; b < n; ++b) {
      bool upper = true;
      for (int x : k)
        if (!poset.le(x, b)) { upper = false; break; }
      if (upper && !poset.le(a, b))
        throw Error("NotSup", "'" + poset.id(a) + "' = join " + key_str(poset, k) +
                                  " but upper bound '" + poset.id(b) + "' is not above it");
    }
  }
  for (const auto& [k, a] : meets) {
    if (k.empty()) throw Error("EmptyKey", "empty meet key");
    for (int x : k)
      if (x < 0 || x >= n) throw Error("UnknownElement", "meet key out of range");
    for (int x : k)
      if (!poset.le(a, x))
        throw Error("NotInf", "'" + poset.id(a) + "' is not below " + key_str(poset, k));
    for (int b = 0; b < n; ++b) {
      bool lower = true;
      for (int x : k)
        if (!poset.le(b, x)) { lower = false; break; }
      if (lower && !poset.le(b, a))
        throw Error("NotInf", "'" + poset.id(a) + "' = meet " + key_str(poset, k) +
                                  " but lower bound '" + poset.id(b) + "' is not below it");
    }
  }
  p.joins = joins;
  p.meets = meets;
  return p;
}

PartialLattice make_total_lattice(const FinitePoset& poset) {
  const int n = poset.size();
  if (n > 16) throw Error("SizeLimit", "total lattice carrier capped at 16 elements");
  PartialLattice p;
  p.poset = poset;
  p.total = true;
  std::vector<int> xs;
  for (uint32_t mask = 1; mask < (1u << n); ++mask) {
    xs.clear();
    for (int i = 0; i < n; ++i)
      if (mask & (1u << i)) xs.push_back(i);
    int s = poset.sup_of(xs), m = poset.inf_of(xs);
    if (s == -1 || m == -1)
      throw Error("NotALattice", "subset without sup or inf");
    p.joins[xs] = s;
    p.meets[xs] = m;
  }
  return p;
}

PartialLattice augment_singletons(const PartialLattice& p) {
  PartialLattice out = p;
  for (int a = 0; a < p.n(); ++a) {
    Key k{a};
    out.joins.emplace(k, a);
    out.meets.emplace(k, a);
  }
  return out;
}

bool Congruence::subset_of(const Congruence& o) const {
  for (size_t i = 0; i < rel.size(); ++i)
    if (rel[i] && !o.rel[i]) return false;
  return true;
}

int Congruence::pair_count() const {
  return static_cast<int>(std::count(rel.begin(), rel.end(), true));
}

static void close_in_place(const PartialLattice& p, std::vector<bool>& rel) {
  const int n = p.n();
  bool changed = true;
  while (changed) {
    changed = false;
    // transitive closure
    for (int k = 0; k < n; ++k)
      for (int i = 0; i < n; ++i) {
        if (!rel[i * n + k]) continue;
        for (int j = 0; j < n; ++j)
          if (rel[k * n + j] && !rel[i * n + j]) { rel[i * n + j] = true; changed = true; }
      }
    // a = join X and X <= b (mod rel) forces a <= b
    for (const auto& [k, a] : p.joins)
      for (int b = 0; b < n; ++b) {
        if (rel[a * n + b]) continue;
        bool all = true;
        for (int x : k)
          if (!rel[x * n + b]) { all = false; break; }
        if (all) { rel[a * n + b] = true; changed = true; }
      }
    // a = meet X and b <= X forces b <= a
    for (const auto& [k, a] : p.meets)
      for (int b = 0; b < n; ++b) {
        if (rel[b * n + a]) continue;
        bool all = true;
        for (int x : k)
          if (!rel[b * n + x]) { all = false; break; }
        if (all) { rel[b * n + a] = true; changed = true; }
      }
  }
}

Congruence cong_closure(const PartialLattice& p,
                        const std::vector<std::pair<int, int>>& seeds) {
  const int n = p.n();
  Congruence c;
  c.n = n;
  c.rel.assign(static_cast<size_t>(n) * n, false);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) c.rel[a * n + b] = p.poset.le(a, b);
  for (auto [a, b] : seeds) c.rel[a * n + b] = true;
  close_in_place(p, c.rel);
  return c;
}

Congruence cong_zero(const PartialLattice& p) { return cong_closure(p, {}); }

Congruence cong_one(const PartialLattice& p) {
  Congruence c;
  c.n = p.n();
  c.rel.assign(static_cast<size_t>(c.n) * c.n, true);
  return c;
}

Congruence theta_plus(const PartialLattice& p, int a, int b) {
  return cong_closure(p, {{a, b}});
}

Congruence theta(const PartialLattice& p, int a, int b) {
  return cong_closure(p, {{a, b}, {b, a}});
}

Congruence cong_join(const PartialLattice& p, const Congruence& a, const Congruence& b) {
  Congruence c = a;
  for (size_t i = 0; i < c.rel.size(); ++i)
    if (b.rel[i]) c.rel[i] = true;
  close_in_place(p, c.rel);
  return c;
}

Congruence cong_intersect(const Congruence& a, const Congruence& b) {
  Congruence c = a;
  for (size_t i = 0; i < c.rel.size(); ++i) c.rel[i] = a.rel[i] && b.rel[i];
  return c;
}

bool is_congruence(const PartialLattice& p, const Congruence& c) {
  const int n = p.n();
  if (c.n != n) return false;
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      if (p.poset.le(a, b) && !c.at(a, b)) return false;
  std::vector<bool> copy = c.rel;
  close_in_place(p, copy);
  return copy == c.rel;
}

int ConLattice::index_of(const Congruence& c) const {
  for (int i = 0; i < size(); ++i)
    if (congs[i] == c) return i;
  return -1;
}

ConLattice con_lattice(const PartialLattice& p, int cap) {
  ConLattice out;
  std::map<std::vector<bool>, int> seen;
  auto add = [&](Congruence c) -> int {
    auto it = seen.find(c.rel);
    if (it != seen.end()) return it->second;
    int idx = out.size();
    if (idx >= cap) throw Error("SizeLimit", "congruence family exceeds cap");
    seen.emplace(c.rel, idx);
    out.congs.push_back(std::move(c));
    return idx;
  };
  add(cong_zero(p));
  const int n = p.n();
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      if (a != b) add(theta_plus(p, a, b));
  // close under binary join; every congruence of finite P is a join of principals
  for (size_t i = 0; i < out.congs.size(); ++i)
    for (size_t j = 0; j < i; ++j)
      add(cong_join(p, out.congs[i], out.congs[j]));
  const int m = out.size();
  std::vector<bool> le(static_cast<size_t>(m) * m, false);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) le[i * m + j] = out.congs[i].subset_of(out.congs[j]);
  std::vector<std::string> names;
  names.reserve(m);
  for (int i = 0; i < m; ++i) names.push_back("c" + std::to_string(i));
  out.order = FinitePoset::from_closed(std::move(names), std::move(le));
  out.bot = out.index_of(cong_zero(p));
  Congruence one = cong_one(p);
  out.top = out.index_of(one);
  if (out.top == -1) out.top = out.index_of(cong_join(p, out.congs[0], one));
  return out;
}

bool is_plhom(const PLHom& f) {
  const int n = f.src.n();
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      if (f.src.poset.le(a, b) && !f.dst.poset.le(f.map[a], f.map[b])) return false;
  for (const auto& [k, a] : f.src.joins) {
    Key img;
    img.reserve(k.size());
    for (int x : k) img.push_back(f.map[x]);
    img = make_key(std::move(img));
    if (!f.dst.has_join(img) || f.dst.join_of(img) != f.map[a]) return false;
  }
  for (const auto& [k, a] : f.src.meets) {
    Key img;
    img.reserve(k.size());
    for (int x : k) img.push_back(f.map[x]);
    img = make_key(std::move(img));
    if (!f.dst.has_meet(img) || f.dst.meet_of(img) != f.map[a]) return false;
  }
  return true;
}

bool is_pl_embedding(const PLHom& f) {
  if (!is_plhom(f)) return false;
  const int n = f.src.n();
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      if (f.dst.poset.le(f.map[a], f.map[b]) && !f.src.poset.le(a, b)) return false;
  return true;
}

Congruence conc_map(const PLHom& f, const Congruence& alpha) {
  std::vector<std::pair<int, int>> pairs;
  for (int a = 0; a < alpha.n; ++a)
    for (int b = 0; b < alpha.n; ++b)
      if (alpha.at(a, b)) pairs.emplace_back(f.map[a], f.map[b]);
  return cong_closure(f.dst, pairs);
}

QuotientPL quotient_by_cong(const PartialLattice& p, const Congruence& th) {
  const int n = p.n();
  std::vector<int> cls(n, -1);
  std::vector<int> reps;
  for (int a = 0; a < n; ++a) {
    if (cls[a] != -1) continue;
    int c = static_cast<int>(reps.size());
    reps.push_back(a);
    cls[a] = c;
    for (int b = a + 1; b < n; ++b)
      if (cls[b] == -1 && th.at(a, b) && th.at(b, a)) cls[b] = c;
  }
  const int m = static_cast<int>(reps.size());
  std::vector<bool> le(static_cast<size_t>(m) * m, false);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) le[i * m + j] = th.at(reps[i], reps[j]);
  std::vector<std::string> ids;
  ids.reserve(m);
  for (int r : reps) ids.push_back(p.poset.id(r));
  QuotientPL out;
  out.cls = cls;
  PartialLattice q;
  q.poset = FinitePoset::from_closed(std::move(ids), std::move(le));
  auto project = [&](const std::map<Key, int>& src, std::map<Key, int>& dst,
                     const char* what) {
    for (const auto& [k, a] : src) {
      Key img;
      img.reserve(k.size());
      for (int x : k) img.push_back(cls[x]);
      img = make_key(std::move(img));
      auto [it, fresh] = dst.emplace(img, cls[a]);
      if (!fresh && it->second != cls[a])
        throw Error("QuotientConflict", std::string(what) + " not a function on classes");
    }
  };
  project(p.joins, q.joins, "join");
  project(p.meets, q.meets, "meet");
  out.q = std::move(q);
  out.proj = PLHom{p, out.q, cls};
  return out;
}

std::vector<bool> down_set(const PartialLattice& p, const std::vector<int>& xs) {
  std::vector<bool> out(p.n(), false);
  for (int a = 0; a < p.n(); ++a)
    for (int x : xs)
      if (p.poset.le(a, x)) { out[a] = true; break; }
  return out;
}

std::vector<bool> up_set(const PartialLattice& p, const std::vector<int>& xs) {
  std::vector<bool> out(p.n(), false);
  for (int a = 0; a < p.n(); ++a)
    for (int x : xs)
      if (p.poset.le(x, a)) { out[a] = true; break; }
  return out;
}

static void add_down(const PartialLattice& p, std::vector<bool>& s, int e) {
  for (int a = 0; a < p.n(); ++a)
    if (p.poset.le(a, e)) s[a] = true;
}

std::vector<bool> idn(const PartialLattice& p, const std::vector<int>& xs,
                      const std::vector<int>& us, int n) {
  std::vector<bool> cur = down_set(p, xs);
  std::vector<int> inside;
  for (int step = 0; step < n; ++step) {
    std::vector<bool> next = cur;
    inside.clear();
    for (int u : us)
      if (cur[u]) inside.push_back(u);
    const int m = static_cast<int>(inside.size());
    if (m > 20) throw Error("SizeLimit", "idn sample too large");
    for (uint32_t mask = 1; mask < (1u << m); ++mask) {
      Key z;
      for (int i = 0; i < m; ++i)
        if (mask & (1u << i)) z.push_back(inside[i]);
      auto it = p.joins.find(z);
      if (it != p.joins.end()) add_down(p, next, it->second);
    }
    cur = std::move(next);
  }
  return cur;
}

static void add_up(const PartialLattice& p, std::vector<bool>& s, int e) {
  for (int a = 0; a < p.n(); ++a)
    if (p.poset.le(e, a)) s[a] = true;
}

std::vector<bool> filn(const PartialLattice& p, const std::vector<int>& xs,
                       const std::vector<int>& us, int n) {
  std::vector<bool> cur = up_set(p, xs);
  std::vector<int> inside;
  for (int step = 0; step < n; ++step) {
    std::vector<bool> next = cur;
    inside.clear();
    for (int u : us)
      if (cur[u]) inside.push_back(u);
    const int m = static_cast<int>(inside.size());
    if (m > 20) throw Error("SizeLimit", "filn sample too large");
    for (uint32_t mask = 1; mask < (1u << m); ++mask) {
      Key z;
      for (int i = 0; i < m; ++i)
        if (mask & (1u << i)) z.push_back(inside[i]);
      auto it = p.meets.find(z);
      if (it != p.meets.end()) add_up(p, next, it->second);
    }
    cur = std::move(next);
  }
  return cur;
}

std::vector<bool> ideal_closure(const PartialLattice& p, const std::vector<int>& xs) {
  std::vector<bool> cur = down_set(p, xs);
  for (;;) {
    std::vector<bool> next = cur;
    for (const auto& [k, a] : p.joins) {
      bool all_in = true;
      for (int x : k)
        if (!cur[x]) { all_in = false; break; }
      if (all_in) add_down(p, next, a);
    }
    if (next == cur) return cur;
    cur = std::move(next);
  }
}

std::vector<bool> filter_closure(const PartialLattice& p, const std::vector<int>& xs) {
  std::vector<bool> cur = up_set(p, xs);
  for (;;) {
    std::vector<bool> next = cur;
    for (const auto& [k, a] : p.meets) {
      bool all_in = true;
      for (int x : k)
        if (!cur[x]) { all_in = false; break; }
      if (all_in) add_up(p, next, a);
    }
    if (next == cur) return cur;
    cur = std::move(next);
  }
}

bool is_ideal(const PartialLattice& p, const std::vector<bool>& set) {
  for (int a = 0; a < p.n(); ++a)
    for (int b = 0; b < p.n(); ++b)
      if (set[b] && p.poset.le(a, b) && !set[a]) return false;
  for (const auto& [k, a] : p.joins) {
    bool all_in = true;
    for (int x : k)
      if (!set[x]) { all_in = false; break; }
    if (all_in && !set[a]) return false;
  }
  return true;
}

bool is_filter(const PartialLattice& p, const std::vector<bool>& set) {
  for (int a = 0; a < p.n(); ++a)
    for (int b = 0; b < p.n(); ++b)
      if (set[b] && p.poset.le(b, a) && !set[a]) return false;
  for (const auto& [k, a] : p.meets) {
    bool all_in = true;
    for (int x : k)
      if (!set[x]) { all_in = false; break; }
    if (all_in && !set[a]) return false;
  }
  return true;
}

namespace {

struct IsoSearch {
  const PartialLattice& a;
  const PartialLattice& b;
  int n;
  std::vector<int> map;   // a index -> b index, -1 unset
  std::vector<bool> used;

  bool consistent(int x, int y) {
    for (int z = 0; z < n; ++z) {
      if (map[z] == -1) continue;
      if (a.poset.le(x, z) != b.poset.le(y, map[z])) return false;
      if (a.poset.le(z, x) != b.poset.le(map[z], y)) return false;
    }
    return true;
  }

  bool maps_match() {
    auto check = [&](const std::map<Key, int>& sa, const std::map<Key, int>& sb) {
      if (sa.size() != sb.size()) return false;
      for (const auto& [k, v] : sa) {
        Key img;
        img.reserve(k.size());
        for (int x : k) img.push_back(map[x]);
        img = make_key(std::move(img));
        auto it = sb.find(img);
        if (it == sb.end() || it->second != map[v]) return false;
      }
      return true;
    };
    return check(a.joins, b.joins) && check(a.meets, b.meets);
  }

  bool rec(int x) {
    if (x == n) return maps_match();
    for (int y = 0; y < n; ++y) {
      if (used[y] || !consistent(x, y)) continue;
      map[x] = y;
      used[y] = true;
      if (rec(x + 1)) return true;
      map[x] = -1;
      used[y] = false;
    }
    return false;
  }
};

}  // namespace

bool pl_isomorphic(const PartialLattice& a, const PartialLattice& b) {
  if (a.n() != b.n()) return false;
  if (a.joins.size() != b.joins.size() || a.meets.size() != b.meets.size()) return false;
  IsoSearch s{a, b, a.n(), std::vector<int>(a.n(), -1), std::vector<bool>(a.n(), false)};
  return s.rec(0);
}

}  // namespace latforge
