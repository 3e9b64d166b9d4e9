#include "latforge/measured.hpp"

#include <algorithm>
#include <sstream>

namespace latforge {

Mask key_mask(const Key& k) {
  Mask m = 0;
  for (int x : k) m |= Mask(1) << x;
  return m;
}

Key mask_key(Mask m) {
  Key k;
  for (int i = 0; i < 31; ++i)
    if (m & (Mask(1) << i)) k.push_back(i);
  return k;
}

bool MeasuredPL::proper() const {
  for (int a = 0; a < n(); ++a)
    for (int b = 0; b < n(); ++b)
      if ((bv(a, b) == E.top()) != pl.poset.le(a, b)) return false;
  return true;
}

MeasuredPL from_phi_table(const PartialLattice& p, const DistLattice& D,
                          const std::vector<int>& t) {
  const int n = p.n();
  if (n > 30) throw Error("SizeLimit", "measured carriers are capped at 30 elements");
  if (static_cast<int>(t.size()) != n * n)
    throw Error("AxiomViolation", "table not total");
  MeasuredPL m;
  m.pl = p;
  m.E = dualize(D);
  m.table = t;
  const DistLattice& E = m.E;
  auto name = [&](int x) { return p.poset.id(x); };
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      if (p.poset.le(a, b) && m.bv(a, b) != E.top())
        throw Error("AxiomViolation", "clause iii at ('" + name(a) + "','" + name(b) +
                                          "'): comparable pair must carry value 0 of D");
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int c = 0; c < n; ++c)
        if (!E.le(E.meet(m.bv(a, b), m.bv(b, c)), m.bv(a, c)))
          throw Error("AxiomViolation", "clause ii (transitivity) at ('" + name(a) +
                                            "','" + name(b) + "','" + name(c) + "')");
  for (const auto& [k, a] : p.joins)
    for (int b = 0; b < n; ++b) {
      int acc = E.top();
      for (int x : k) acc = E.meet(acc, m.bv(x, b));
      if (acc != m.bv(a, b))
        throw Error("AxiomViolation",
                    "clause iv at join value '" + name(a) + "' against '" + name(b) + "'");
    }
  for (const auto& [k, a] : p.meets)
    for (int b = 0; b < n; ++b) {
      int acc = E.top();
      for (int x : k) acc = E.meet(acc, m.bv(b, x));
      if (acc != m.bv(b, a))
        throw Error("AxiomViolation",
                    "clause v at meet value '" + name(a) + "' against '" + name(b) + "'");
    }
  return m;
}

int phi_of(const MeasuredPL& m, const std::vector<std::pair<int, int>>& pairs) {
  // join in D is meet in E; the empty join is 0 of D, i.e. top of E
  int acc = m.E.top();
  for (auto [a, b] : pairs) acc = m.E.meet(acc, m.bv(a, b));
  return acc;
}

MeasuredCalc::MeasuredCalc(std::shared_ptr<const MeasuredPL> m) : m_(std::move(m)) {
  for (const auto& [k, a] : m_->pl.joins) joins_.emplace_back(key_mask(k), a);
  for (const auto& [k, a] : m_->pl.meets) meets_.emplace_back(key_mask(k), a);
}

int MeasuredCalc::bv_in(int a, Mask Y) const {
  if (Y == 0) throw Error("EmptyArgument", "bv_in over empty set");
  int acc = bot();
  for (int y = 0; y < m_->n(); ++y)
    if (Y & (Mask(1) << y)) acc = jn(acc, bv_eq(a, y));
  return acc;
}

int MeasuredCalc::bv_subset(Mask X, Mask Y) const {
  if (X == 0 || Y == 0) throw Error("EmptyArgument", "bv_subset over empty set");
  int acc = top();
  for (int x = 0; x < m_->n(); ++x)
    if (X & (Mask(1) << x)) acc = mt(acc, bv_in(x, Y));
  return acc;
}

int MeasuredCalc::bv_seteq(Mask X, Mask Y) const {
  return mt(bv_subset(X, Y), bv_subset(Y, X));
}

static uint64_t pk(int a, Mask X) { return (uint64_t(uint32_t(a)) << 32) | X; }

int MeasuredCalc::bv_join_eq(int a, Mask X) const {
  if (X == 0) throw Error("EmptyArgument", "bv_join_eq over empty set");
  if (m_->pl.total) {
    auto it = m_->pl.joins.find(mask_key(X));
    return bv_eq(a, it->second);
  }
  if (joins_.empty()) throw Error("EmptyDomain", "no joins defined; augment first");
  auto hit = join_eq_memo_.find(pk(a, X));
  if (hit != join_eq_memo_.end()) return hit->second;
  int acc = bot();
  for (const auto& [Y, b] : joins_) acc = jn(acc, mt(bv_eq(a, b), bv_seteq(X, Y)));
  join_eq_memo_.emplace(pk(a, X), acc);
  return acc;
}

int MeasuredCalc::bv_meet_eq(int a, Mask X) const {
  if (X == 0) throw Error("EmptyArgument", "bv_meet_eq over empty set");
  if (m_->pl.total) {
    auto it = m_->pl.meets.find(mask_key(X));
    return bv_eq(a, it->second);
  }
  if (meets_.empty()) throw Error("EmptyDomain", "no meets defined; augment first");
  auto hit = meet_eq_memo_.find(pk(a, X));
  if (hit != meet_eq_memo_.end()) return hit->second;
  int acc = bot();
  for (const auto& [Y, b] : meets_) acc = jn(acc, mt(bv_eq(a, b), bv_seteq(X, Y)));
  meet_eq_memo_.emplace(pk(a, X), acc);
  return acc;
}

int MeasuredCalc::bv_le_join(int a, Mask X) const {
  if (m_->pl.total) {
    auto it = m_->pl.joins.find(mask_key(X));
    return bv(a, it->second);
  }
  auto hit = le_join_memo_.find(pk(a, X));
  if (hit != le_join_memo_.end()) return hit->second;
  int acc = bot();
  for (const auto& [Y, u] : joins_) acc = jn(acc, mt(bv(a, u), bv_join_eq(u, X)));
  le_join_memo_.emplace(pk(a, X), acc);
  return acc;
}

int MeasuredCalc::bv_meet_le(int a, Mask X) const {
  if (m_->pl.total) {
    auto it = m_->pl.meets.find(mask_key(X));
    return bv(it->second, a);
  }
  auto hit = meet_le_memo_.find(pk(a, X));
  if (hit != meet_le_memo_.end()) return hit->second;
  int acc = bot();
  for (const auto& [Y, u] : meets_) acc = jn(acc, mt(bv(u, a), bv_meet_eq(u, X)));
  meet_le_memo_.emplace(pk(a, X), acc);
  return acc;
}

int MeasuredCalc::bv_le_join_with(int a, Mask X, Mask sample) const {
  int acc = bot();
  for (int u = 0; u < m_->n(); ++u)
    if (sample & (Mask(1) << u)) acc = jn(acc, mt(bv(a, u), bv_join_eq(u, X)));
  return acc;
}

int MeasuredCalc::bv_meet_le_with(int a, Mask X, Mask sample) const {
  int acc = bot();
  for (int u = 0; u < m_->n(); ++u)
    if (sample & (Mask(1) << u)) acc = jn(acc, mt(bv(u, a), bv_meet_eq(u, X)));
  return acc;
}

std::vector<int> MeasuredCalc::idn_vector(Mask X, Mask U, int steps, bool* stable) const {
  const int n = m_->n();
  std::vector<int> cur(n);
  for (int a = 0; a < n; ++a) {
    int acc = bot();
    for (int x = 0; x < n; ++x)
      if (X & (Mask(1) << x)) acc = jn(acc, bv(a, x));
    cur[a] = acc;
  }
  if (stable) *stable = false;
  std::vector<int> u_elems = mask_key(U);
  const int m = static_cast<int>(u_elems.size());
  if (m > 20) throw Error("SizeLimit", "idn sample too large");
  for (int step = 0; step < steps; ++step) {
    std::vector<int> next = cur;
    for (uint32_t zm = 1; zm < (1u << m); ++zm) {
      Mask Z = 0;
      int inside = top();
      for (int i = 0; i < m; ++i)
        if (zm & (1u << i)) {
          Z |= Mask(1) << u_elems[i];
          inside = mt(inside, cur[u_elems[i]]);
        }
      if (inside == bot()) continue;
      for (int a = 0; a < n; ++a) next[a] = jn(next[a], mt(bv_le_join(a, Z), inside));
    }
    if (next == cur) {
      if (stable) *stable = true;
      return cur;
    }
    cur = std::move(next);
  }
  return cur;
}

std::vector<int> MeasuredCalc::filn_vector(Mask X, Mask U, int steps, bool* stable) const {
  const int n = m_->n();
  std::vector<int> cur(n);
  for (int a = 0; a < n; ++a) {
    int acc = bot();
    for (int x = 0; x < n; ++x)
      if (X & (Mask(1) << x)) acc = jn(acc, bv(x, a));
    cur[a] = acc;
  }
  if (stable) *stable = false;
  std::vector<int> u_elems = mask_key(U);
  const int m = static_cast<int>(u_elems.size());
  if (m > 20) throw Error("SizeLimit", "filn sample too large");
  for (int step = 0; step < steps; ++step) {
    std::vector<int> next = cur;
    for (uint32_t zm = 1; zm < (1u << m); ++zm) {
      Mask Z = 0;
      int inside = top();
      for (int i = 0; i < m; ++i)
        if (zm & (1u << i)) {
          Z |= Mask(1) << u_elems[i];
          inside = mt(inside, cur[u_elems[i]]);
        }
      if (inside == bot()) continue;
      for (int a = 0; a < n; ++a) next[a] = jn(next[a], mt(bv_meet_le(a, Z), inside));
    }
    if (next == cur) {
      if (stable) *stable = true;
      return cur;
    }
    cur = std::move(next);
  }
  return cur;
}

int MeasuredCalc::bv_in_idn(int a, Mask X, Mask U, int n) const {
  return idn_vector(X, U, n, nullptr)[a];
}

int MeasuredCalc::bv_in_filn(int a, Mask X, Mask U, int n) const {
  return filn_vector(X, U, n, nullptr)[a];
}

std::vector<int> MeasuredCalc::idn_values(Mask X, Mask U, int n) const {
  return idn_vector(X, U, n, nullptr);
}

std::vector<int> MeasuredCalc::filn_values(Mask X, Mask U, int n) const {
  return filn_vector(X, U, n, nullptr);
}

const std::vector<int>& MeasuredCalc::id_values(Mask X) {
  auto it = id_memo_.find(X);
  if (it != id_memo_.end()) return it->second;
  std::vector<int> v;
  if (m_->pl.total) {
    int j = m_->pl.joins.at(mask_key(X));
    v.resize(m_->n());
    for (int a = 0; a < m_->n(); ++a) v[a] = bv(a, j);
  } else {
    Mask carrier = (Mask(1) << m_->n()) - 1;
    bool stable = false;
    v = idn_vector(X, carrier, m_->n() + 1, &stable);
    if (!stable) throw Error("VerificationFailed", "ideal stabilization did not settle");
  }
  return id_memo_.emplace(X, std::move(v)).first->second;
}

const std::vector<int>& MeasuredCalc::fil_values(Mask X) {
  auto it = fil_memo_.find(X);
  if (it != fil_memo_.end()) return it->second;
  std::vector<int> v;
  if (m_->pl.total) {
    int j = m_->pl.meets.at(mask_key(X));
    v.resize(m_->n());
    for (int a = 0; a < m_->n(); ++a) v[a] = bv(j, a);
  } else {
    Mask carrier = (Mask(1) << m_->n()) - 1;
    bool stable = false;
    v = filn_vector(X, carrier, m_->n() + 1, &stable);
    if (!stable) throw Error("VerificationFailed", "filter stabilization did not settle");
  }
  return fil_memo_.emplace(X, std::move(v)).first->second;
}

bool is_finitely_covering(const MeasuredPL& m) {
  return !m.pl.joins.empty() && !m.pl.meets.empty();
}

Cover cover_of(const MeasuredPL& m, Mask X, Cover::Kind kind) {
  Cover c;
  c.kind = kind;
  c.target = X;
  const auto& dom = (kind == Cover::Kind::Join) ? m.pl.joins : m.pl.meets;
  if (dom.empty()) throw Error("EmptyDomain", "no defined operations; augment first");
  if (m.pl.total) {
    c.members.push_back(X);
    return c;
  }
  for (const auto& [k, a] : dom) c.members.push_back(key_mask(k));
  return c;
}

bool verify_cover(const MeasuredPL& m, const Cover& c) {
  MeasuredCalc calc(m);
  const auto& dom = (c.kind == Cover::Kind::Join) ? m.pl.joins : m.pl.meets;
  for (const auto& [k, a] : dom) {
    Mask Y = key_mask(k);
    int lhs = calc.bv_seteq(c.target, Y);
    int rhs = calc.bot();
    for (Mask Z : c.members) rhs = calc.jn(rhs, calc.bv_seteq(c.target, Z));
    if (!calc.le(lhs, rhs)) return false;
  }
  return true;
}

Sample join_sample(const MeasuredPL& m, Mask X) {
  Sample s{Sample::Kind::Join, X, 0, std::nullopt};
  if (m.pl.total) {
    s.members = Mask(1) << m.pl.joins.at(mask_key(X));
    return s;
  }
  if (m.pl.joins.empty()) throw Error("EmptyDomain", "no joins defined; augment first");
  for (const auto& [k, a] : m.pl.joins) s.members |= Mask(1) << a;
  return s;
}

Sample meet_sample(const MeasuredPL& m, Mask X) {
  Sample s{Sample::Kind::Meet, X, 0, std::nullopt};
  if (m.pl.total) {
    s.members = Mask(1) << m.pl.meets.at(mask_key(X));
    return s;
  }
  if (m.pl.meets.empty()) throw Error("EmptyDomain", "no meets defined; augment first");
  for (const auto& [k, a] : m.pl.meets) s.members |= Mask(1) << a;
  return s;
}

bool verify_join_sample(MeasuredCalc& c, Mask X, Mask U) {
  for (int x = 0; x < c.M().n(); ++x) {
    int lhs = c.bv_join_eq(x, X);
    int rhs = c.bot();
    for (int u = 0; u < c.M().n(); ++u)
      if (U & (Mask(1) << u)) rhs = c.jn(rhs, c.bv_join_eq(u, X));
    if (!c.le(lhs, rhs)) return false;
  }
  return true;
}

bool verify_meet_sample(MeasuredCalc& c, Mask X, Mask U) {
  for (int x = 0; x < c.M().n(); ++x) {
    int lhs = c.bv_meet_eq(x, X);
    int rhs = c.bot();
    for (int u = 0; u < c.M().n(); ++u)
      if (U & (Mask(1) << u)) rhs = c.jn(rhs, c.bv_meet_eq(u, X));
    if (!c.le(lhs, rhs)) return false;
  }
  return true;
}

Sample idm_sample(const MeasuredPL& m, Mask X) {
  return Sample{Sample::Kind::IdM, X, (Mask(1) << m.n()) - 1, std::nullopt};
}

Sample film_sample(const MeasuredPL& m, Mask X) {
  return Sample{Sample::Kind::FilM, X, (Mask(1) << m.n()) - 1, std::nullopt};
}

// Only the <= half needs checking; the >= half always holds.
bool verify_idm(MeasuredCalc& c, Mask X, Mask U) {
  const int n = c.M().n();
  for (int a = 0; a < n; ++a) {
    int lhs = c.top();
    for (int x = 0; x < n; ++x)
      if (X & (Mask(1) << x)) lhs = c.mt(lhs, c.bv(a, x));
    int rhs = c.bot();
    for (int u = 0; u < n; ++u) {
      if (!(U & (Mask(1) << u))) continue;
      int term = c.bv(a, u);
      for (int x = 0; x < n; ++x)
        if (X & (Mask(1) << x)) term = c.mt(term, c.bv(u, x));
      rhs = c.jn(rhs, term);
    }
    if (!c.le(lhs, rhs)) return false;
  }
  return true;
}

bool verify_film(MeasuredCalc& c, Mask X, Mask U) {
  const int n = c.M().n();
  for (int a = 0; a < n; ++a) {
    int lhs = c.top();
    for (int x = 0; x < n; ++x)
      if (X & (Mask(1) << x)) lhs = c.mt(lhs, c.bv(x, a));
    int rhs = c.bot();
    for (int u = 0; u < n; ++u) {
      if (!(U & (Mask(1) << u))) continue;
      int term = c.bv(u, a);
      for (int x = 0; x < n; ++x)
        if (X & (Mask(1) << x)) term = c.mt(term, c.bv(x, u));
      rhs = c.jn(rhs, term);
    }
    if (!c.le(lhs, rhs)) return false;
  }
  return true;
}

Sample idj_sample(const MeasuredPL& m, Mask X) {
  if (m.pl.total) return Sample{Sample::Kind::IdJ, X, X, 1};
  return Sample{Sample::Kind::IdJ, X, (Mask(1) << m.n()) - 1, m.n()};
}

Sample filj_sample(const MeasuredPL& m, Mask X) {
  if (m.pl.total) return Sample{Sample::Kind::FilJ, X, X, 1};
  return Sample{Sample::Kind::FilJ, X, (Mask(1) << m.n()) - 1, m.n()};
}

bool verify_idj(MeasuredCalc& c, Mask X, Mask U, int index) {
  const int n = c.M().n();
  Mask carrier = (Mask(1) << n) - 1;
  std::vector<int> extra = mask_key(carrier & ~U);
  const int r = static_cast<int>(extra.size());
  std::vector<int> base = c.idn_values(X, U, index);
  for (uint32_t em = 0; em < (1u << r); ++em) {
    Mask Y = U;
    for (int i = 0; i < r; ++i)
      if (em & (1u << i)) Y |= Mask(1) << extra[i];
    if (c.idn_values(X, Y, index + 1) != base) return false;
  }
  return true;
}

bool verify_filj(MeasuredCalc& c, Mask X, Mask U, int index) {
  const int n = c.M().n();
  Mask carrier = (Mask(1) << n) - 1;
  std::vector<int> extra = mask_key(carrier & ~U);
  const int r = static_cast<int>(extra.size());
  std::vector<int> base = c.filn_values(X, U, index);
  for (uint32_t em = 0; em < (1u << r); ++em) {
    Mask Y = U;
    for (int i = 0; i < r; ++i)
      if (em & (1u << i)) Y |= Mask(1) << extra[i];
    if (c.filn_values(X, Y, index + 1) != base) return false;
  }
  return true;
}

Mask minimize_idm_sample(MeasuredCalc& c, const std::vector<Mask>& targets, Mask start) {
  Mask cur = start;
  for (int u = 0; u < c.M().n(); ++u) {
    Mask bit = Mask(1) << u;
    if (!(cur & bit)) continue;
    Mask trial = cur & ~bit;
    if (trial == 0) continue;
    bool ok = true;
    for (Mask X : targets)
      if (!verify_idm(c, X, trial)) { ok = false; break; }
    if (ok) cur = trial;
  }
  return cur;
}

Mask minimize_film_sample(MeasuredCalc& c, const std::vector<Mask>& targets, Mask start) {
  Mask cur = start;
  for (int u = 0; u < c.M().n(); ++u) {
    Mask bit = Mask(1) << u;
    if (!(cur & bit)) continue;
    Mask trial = cur & ~bit;
    if (trial == 0) continue;
    bool ok = true;
    for (Mask X : targets)
      if (!verify_film(c, X, trial)) { ok = false; break; }
    if (ok) cur = trial;
  }
  return cur;
}

bool is_balanced(const MeasuredPL& m) {
  if (!is_finitely_covering(m)) return false;
  MeasuredCalc c(m);
  const int n = m.n();
  Mask carrier = (Mask(1) << n) - 1;
  for (int a = 0; a < n; ++a)
    for (int b = a; b < n; ++b) {
      Mask X = (Mask(1) << a) | (Mask(1) << b);
      if (!verify_idm(c, X, carrier)) return false;
      if (!verify_film(c, X, carrier)) return false;
    }
  for (Mask X = 1; X <= carrier; ++X) {
    Sample sj = idj_sample(m, X);
    if (!verify_idj(c, X, sj.members, *sj.index)) return false;
    Sample sf = filj_sample(m, X);
    if (!verify_filj(c, X, sf.members, *sf.index)) return false;
  }
  return true;
}

MeasuredQuotient quotient(const MeasuredPL& m, const PrimeFilter& g) {
  const int n = m.n();
  std::vector<int> cls(n, -1);
  std::vector<int> reps;
  for (int a = 0; a < n; ++a) {
    if (cls[a] != -1) continue;
    int c = static_cast<int>(reps.size());
    reps.push_back(a);
    cls[a] = c;
    for (int b = a + 1; b < n; ++b)
      if (cls[b] == -1 && g.contains(m.bv_eq(a, b))) cls[b] = c;
  }
  const int k = static_cast<int>(reps.size());
  std::vector<bool> le(static_cast<size_t>(k) * k, false);
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < k; ++j) le[i * k + j] = g.contains(m.bv(reps[i], reps[j]));
  std::vector<std::string> ids;
  for (int r : reps) ids.push_back(m.pl.poset.id(r));
  MeasuredQuotient out;
  out.cls = cls;
  out.q.poset = FinitePoset::from_closed(std::move(ids), std::move(le));
  auto project = [&](const std::map<Key, int>& src, std::map<Key, int>& dst) {
    for (const auto& [key, a] : src) {
      Key img;
      for (int x : key) img.push_back(cls[x]);
      img = make_key(std::move(img));
      auto [it, fresh] = dst.emplace(img, cls[a]);
      if (!fresh && it->second != cls[a])
        throw Error("QuotientConflict", "quotient operation not a function");
    }
  };
  project(m.pl.joins, out.q.joins);
  project(m.pl.meets, out.q.meets);
  return out;
}

namespace {

std::string idset_str(const MeasuredPL& m, Mask X) {
  std::ostringstream os;
  os << "{";
  bool first = true;
  for (int i = 0; i < m.n(); ++i)
    if (X & (Mask(1) << i)) {
      os << (first ? "" : ",") << m.pl.poset.id(i);
      first = false;
    }
  os << "}";
  return os.str();
}

}  // namespace

TruthReport check_truth_lemmas(const MeasuredPL& m) {
  TruthReport rep;
  MeasuredCalc calc(m);
  const int n = m.n();
  Mask carrier = (Mask(1) << n) - 1;
  auto fail = [&](const std::string& what, const PrimeFilter& g, int a, Mask X) {
    rep.ok = false;
    std::ostringstream os;
    os << what << " fails at filter generated by '" << m.E.id(g.generator) << "', a='"
       << m.pl.poset.id(a) << "', X=" << idset_str(m, X);
    rep.detail = os.str();
  };
  for (const PrimeFilter& g : prime_filters(m.E)) {
    MeasuredQuotient q = quotient(m, g);
    for (Mask X = 1; X <= carrier; ++X) {
      Key xk = mask_key(X);
      Key xq;
      for (int x : xk) xq.push_back(q.cls[x]);
      xq = make_key(std::move(xq));
      auto jq = q.q.joins.find(xq);
      auto mq = q.q.meets.find(xq);
      for (int a = 0; a < n; ++a) {
        int ca = q.cls[a];
        // a = join X
        bool classical = jq != q.q.joins.end() && jq->second == ca;
        if (classical != g.contains(calc.bv_join_eq(a, X)))
          return (fail("a = join X", g, a, X), rep);
        // a <= join X
        classical = jq != q.q.joins.end() && q.q.poset.le(ca, jq->second);
        if (classical != g.contains(calc.bv_le_join(a, X)))
          return (fail("a <= join X", g, a, X), rep);
        // a = meet X
        classical = mq != q.q.meets.end() && mq->second == ca;
        if (classical != g.contains(calc.bv_meet_eq(a, X)))
          return (fail("a = meet X", g, a, X), rep);
        // meet X <= a
        classical = mq != q.q.meets.end() && q.q.poset.le(mq->second, ca);
        if (classical != g.contains(calc.bv_meet_le(a, X)))
          return (fail("meet X <= a", g, a, X), rep);
      }
      // Id_n / Fil_n with U ranging over X and the carrier
      for (Mask U : {X, carrier}) {
        Key uk = mask_key(U);
        Key uq;
        for (int u : uk) uq.push_back(q.cls[u]);
        std::sort(uq.begin(), uq.end());
        uq.erase(std::unique(uq.begin(), uq.end()), uq.end());
        for (int lev : {0, 1, 2, n}) {
          std::vector<bool> cl_id = idn(q.q, xq, uq, lev);
          std::vector<bool> cl_fil = filn(q.q, xq, uq, lev);
          std::vector<int> dv_id = calc.idn_values(X, U, lev);
          std::vector<int> dv_fil = calc.filn_values(X, U, lev);
          for (int a = 0; a < n; ++a) {
            if (cl_id[q.cls[a]] != g.contains(dv_id[a]))
              return (fail("a in Id_n(X,U)", g, a, X), rep);
            if (cl_fil[q.cls[a]] != g.contains(dv_fil[a]))
              return (fail("a in Fil_n(X,U)", g, a, X), rep);
          }
        }
      }
      // Id(X) / Fil(X)
      std::vector<bool> cl_id = ideal_closure(q.q, xq);
      std::vector<bool> cl_fil = filter_closure(q.q, xq);
      for (int a = 0; a < n; ++a) {
        if (cl_id[q.cls[a]] != g.contains(calc.bv_in_id(a, X)))
          return (fail("a in Id(X)", g, a, X), rep);
        if (cl_fil[q.cls[a]] != g.contains(calc.bv_in_fil(a, X)))
          return (fail("a in Fil(X)", g, a, X), rep);
      }
    }
  }
  return rep;
}

KernelResult kernel_projection(const MeasuredPL& m) {
  const int n = m.n();
  Congruence ker;
  ker.n = n;
  ker.rel.assign(static_cast<size_t>(n) * n, false);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) ker.rel[a * n + b] = m.bv(a, b) == m.E.top();
  // the axioms make this relation closed already
  if (!is_congruence(m.pl, ker))
    throw Error("VerificationFailed", "kernel relation not closed");
  QuotientPL q = quotient_by_cong(m.pl, ker);
  const int k = q.q.n();
  std::vector<int> reps(k, -1);
  for (int a = 0; a < n; ++a)
    if (reps[q.cls[a]] == -1) reps[q.cls[a]] = a;
  MeasuredPL out;
  out.pl = q.q;
  out.pl.total = m.pl.total;
  out.E = m.E;
  out.table.assign(static_cast<size_t>(k) * k, m.E.top());
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < k; ++j) out.table[i * k + j] = m.bv(reps[i], reps[j]);
  KernelResult res;
  res.proper = std::move(out);
  res.cls = q.cls;
  res.proj = std::move(q.proj);
  return res;
}

bool is_uniform(const MeasuredHom& f) {
  if (!f.src->E.structurally_equal(f.dst->E))
    throw Error("ValueLatticeMismatch", "uniform maps need a shared value lattice");
  PLHom h{f.src->pl, f.dst->pl, f.map};
  if (!is_plhom(h)) return false;
  for (int a = 0; a < f.src->n(); ++a)
    for (int b = 0; b < f.src->n(); ++b)
      if (!f.src->E.le(f.src->bv(a, b), f.dst->bv(f.map[a], f.map[b]))) return false;
  return true;
}

bool is_isometry(const MeasuredHom& f) {
  if (!f.src->E.structurally_equal(f.dst->E))
    throw Error("ValueLatticeMismatch", "isometries need a shared value lattice");
  PLHom h{f.src->pl, f.dst->pl, f.map};
  if (!is_pl_embedding(h)) return false;
  for (int a = 0; a < f.src->n(); ++a)
    for (int b = 0; b < f.src->n(); ++b)
      if (f.src->bv(a, b) != f.dst->bv(f.map[a], f.map[b])) return false;
  return true;
}

}  // namespace latforge
