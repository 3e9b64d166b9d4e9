#include "latforge/order.hpp"

#include <algorithm>

namespace latforge {

FinitePoset FinitePoset::from_closed(std::vector<std::string> ids,
                                     std::vector<bool> le) {
  FinitePoset p;
  p.ids_ = std::move(ids);
  p.le_ = std::move(le);
  for (int i = 0; i < p.size(); ++i) {
    if (p.index_.count(p.ids_[i]))
      throw Error("DuplicateElement", "duplicate element id '" + p.ids_[i] + "'");
    p.index_.emplace(p.ids_[i], i);
  }
  return p;
}

int FinitePoset::index_of(const std::string& id) const {
  auto it = index_.find(id);
  if (it == index_.end()) throw Error("UnknownElement", "unknown element '" + id + "'");
  return it->second;
}

int FinitePoset::sup_of(const std::vector<int>& xs) const {
  const int n = size();
  int best = -1;
  for (int u = 0; u < n; ++u) {
    bool upper = true;
    for (int x : xs)
      if (!le(x, u)) { upper = false; break; }
    if (!upper) continue;
    if (best == -1 || le(u, best)) best = u;
  }
  if (best == -1) return -1;
  // best must lie below every upper bound, not just the running minimum
  for (int u = 0; u < n; ++u) {
    bool upper = true;
    for (int x : xs)
      if (!le(x, u)) { upper = false; break; }
    if (upper && !le(best, u)) return -1;
  }
  return best;
}

int FinitePoset::inf_of(const std::vector<int>& xs) const {
  const int n = size();
  int best = -1;
  for (int u = 0; u < n; ++u) {
    bool lower = true;
    for (int x : xs)
      if (!le(u, x)) { lower = false; break; }
    if (!lower) continue;
    if (best == -1 || le(best, u)) best = u;
  }
  if (best == -1) return -1;
  for (int u = 0; u < n; ++u) {
    bool lower = true;
    for (int x : xs)
      if (!le(u, x)) { lower = false; break; }
    if (lower && !le(u, best)) return -1;
  }
  return best;
}

std::vector<std::pair<int, int>> FinitePoset::cover_pairs() const {
  std::vector<std::pair<int, int>> out;
  const int n = size();
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) {
      if (!lt(a, b)) continue;
      bool cover = true;
      for (int z = 0; z < n; ++z)
        if (lt(a, z) && lt(z, b)) { cover = false; break; }
      if (cover) out.emplace_back(a, b);
    }
  return out;
}

int FinitePoset::height() const {
  const int n = size();
  std::vector<int> h(n, 0);
  // elements processed in any linear extension; iterate to fixpoint instead
  bool changed = true;
  while (changed) {
    changed = false;
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b)
        if (lt(a, b) && h[b] < h[a] + 1) { h[b] = h[a] + 1; changed = true; }
  }
  int m = 0;
  for (int a = 0; a < n; ++a) m = std::max(m, h[a]);
  return m;
}

FinitePoset build_poset(const std::vector<std::string>& elements,
                        const std::vector<std::pair<std::string, std::string>>& pairs) {
  const int n = static_cast<int>(elements.size());
  std::unordered_map<std::string, int> index;
  for (int i = 0; i < n; ++i) {
    if (index.count(elements[i]))
      throw Error("DuplicateElement", "duplicate element id '" + elements[i] + "'");
    index.emplace(elements[i], i);
  }
  std::vector<bool> le(static_cast<size_t>(n) * n, false);
  for (int i = 0; i < n; ++i) le[i * n + i] = true;
  for (const auto& [x, y] : pairs) {
    auto ix = index.find(x), iy = index.find(y);
    if (ix == index.end()) throw Error("UnknownElement", "unknown element '" + x + "'");
    if (iy == index.end()) throw Error("UnknownElement", "unknown element '" + y + "'");
    le[ix->second * n + iy->second] = true;
  }
  for (int k = 0; k < n; ++k)
    for (int i = 0; i < n; ++i) {
      if (!le[i * n + k]) continue;
      for (int j = 0; j < n; ++j)
        if (le[k * n + j]) le[i * n + j] = true;
    }
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if (le[i * n + j] && le[j * n + i])
        throw Error("AntisymmetryViolation",
                    "closure relates '" + elements[i] + "' and '" + elements[j] +
                        "' both ways");
  return FinitePoset::from_closed(elements, std::move(le));
}

int DistLattice::join_all(const std::vector<int>& xs) const {
  int acc = bot_;
  for (int x : xs) acc = join(acc, x);
  return acc;
}

int DistLattice::meet_all(const std::vector<int>& xs) const {
  int acc = top_;
  for (int x : xs) acc = meet(acc, x);
  return acc;
}

DistLattice as_dist_lattice(const FinitePoset& poset) {
  const int n = poset.size();
  if (n == 0) throw Error("NotALattice", "empty carrier");
  DistLattice d;
  d.poset_ = poset;
  d.join_.assign(static_cast<size_t>(n) * n, -1);
  d.meet_.assign(static_cast<size_t>(n) * n, -1);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) {
      int s = poset.sup_of({a, b});
      int m = poset.inf_of({a, b});
      if (s == -1)
        throw Error("NotALattice", "no join for '" + poset.id(a) + "', '" + poset.id(b) + "'");
      if (m == -1)
        throw Error("NotALattice", "no meet for '" + poset.id(a) + "', '" + poset.id(b) + "'");
      d.join_[a * n + b] = s;
      d.meet_[a * n + b] = m;
    }
  for (int x = 0; x < n; ++x)
    for (int y = 0; y < n; ++y)
      for (int z = 0; z < n; ++z)
        if (d.meet(x, d.join(y, z)) != d.join(d.meet(x, y), d.meet(x, z)))
          throw Error("NotDistributive",
                      "witness triple ('" + poset.id(x) + "', '" + poset.id(y) +
                          "', '" + poset.id(z) + "')");
  d.bot_ = 0;
  d.top_ = 0;
  for (int x = 1; x < n; ++x) {
    d.bot_ = d.meet(d.bot_, x);
    d.top_ = d.join(d.top_, x);
  }
  return d;
}

DistLattice dualize(const DistLattice& d) {
  const int n = d.size();
  std::vector<bool> le(static_cast<size_t>(n) * n, false);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) le[a * n + b] = d.le(b, a);
  DistLattice out;
  out.poset_ = FinitePoset::from_closed(d.poset().elements(), std::move(le));
  out.join_ = d.meet_;
  out.meet_ = d.join_;
  out.bot_ = d.top_;
  out.top_ = d.bot_;
  return out;
}

std::vector<PrimeFilter> prime_filters(const DistLattice& d) {
  const int n = d.size();
  std::vector<PrimeFilter> out;
  for (int p = 0; p < n; ++p) {
    if (p == d.bot()) continue;
    bool irreducible = true;
    for (int x = 0; x < n && irreducible; ++x)
      for (int y = 0; y < n; ++y)
        if (d.join(x, y) == p && x != p && y != p) { irreducible = false; break; }
    if (!irreducible) continue;
    PrimeFilter f;
    f.generator = p;
    f.members.assign(n, false);
    for (int x = 0; x < n; ++x) f.members[x] = d.le(p, x);
    out.push_back(std::move(f));
  }
  return out;
}

}  // namespace latforge
