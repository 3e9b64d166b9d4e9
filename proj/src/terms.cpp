#include "latforge/terms.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

namespace latforge {

TermPtr Term::mk_leaf(int elem) {
  auto t = std::make_shared<Term>();
  t->kind = Kind::Leaf;
  t->leaf = elem;
  t->height = 0;
  return t;
}

TermPtr Term::mk_join(TermPtr a, TermPtr b) {
  auto t = std::make_shared<Term>();
  t->kind = Kind::Join;
  t->height = a->height + b->height + 1;
  t->lhs = std::move(a);
  t->rhs = std::move(b);
  return t;
}

TermPtr Term::mk_meet(TermPtr a, TermPtr b) {
  auto t = std::make_shared<Term>();
  t->kind = Kind::Meet;
  t->height = a->height + b->height + 1;
  t->lhs = std::move(a);
  t->rhs = std::move(b);
  return t;
}

namespace {

struct Parser {
  const std::string& s;
  const FinitePoset& carrier;
  size_t pos = 0;

  void skip() {
    while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
  }
  bool eat(char c) {
    skip();
    if (pos < s.size() && s[pos] == c) { ++pos; return true; }
    return false;
  }

  TermPtr factor() {
    skip();
    if (eat('(')) {
      TermPtr t = expr();
      if (!eat(')')) throw Error("ParseError", "expected ')'");
      return t;
    }
    size_t start = pos;
    while (pos < s.size() &&
           (std::isalnum(static_cast<unsigned char>(s[pos])) || s[pos] == '_'))
      ++pos;
    if (pos == start) throw Error("ParseError", "expected identifier at offset " +
                                                    std::to_string(start));
    return Term::mk_leaf(carrier.index_of(s.substr(start, pos - start)));
  }

  TermPtr meet_chain() {
    TermPtr t = factor();
    while (true) {
      skip();
      if (pos < s.size() && s[pos] == '&') { ++pos; t = Term::mk_meet(t, factor()); }
      else break;
    }
    return t;
  }

  TermPtr expr() {
    TermPtr t = meet_chain();
    while (true) {
      skip();
      if (pos < s.size() && s[pos] == '|') { ++pos; t = Term::mk_join(t, meet_chain()); }
      else break;
    }
    return t;
  }
};

}  // namespace

TermPtr parse_term(const std::string& text, const FinitePoset& carrier) {
  Parser p{text, carrier};
  TermPtr t = p.expr();
  p.skip();
  if (p.pos != text.size())
    throw Error("ParseError", "trailing input at offset " + std::to_string(p.pos));
  return t;
}

std::string term_to_string(const TermPtr& t, const FinitePoset& carrier) {
  switch (t->kind) {
    case Term::Kind::Leaf:
      return carrier.id(t->leaf);
    case Term::Kind::Meet: {
      auto wrap = [&](const TermPtr& c) {
        std::string s = term_to_string(c, carrier);
        return c->kind == Term::Kind::Join ? "(" + s + ")" : s;
      };
      return wrap(t->lhs) + " & " + wrap(t->rhs);
    }
    case Term::Kind::Join:
      return term_to_string(t->lhs, carrier) + " | " + term_to_string(t->rhs, carrier);
  }
  return {};
}

static std::string term_cert(const TermPtr& t) {
  switch (t->kind) {
    case Term::Kind::Leaf: return "l" + std::to_string(t->leaf);
    case Term::Kind::Join: return "(" + term_cert(t->lhs) + "|" + term_cert(t->rhs) + ")";
    case Term::Kind::Meet: return "(" + term_cert(t->lhs) + "&" + term_cert(t->rhs) + ")";
  }
  return {};
}

TermPtr canonical_term(const TermPtr& t) {
  if (t->kind == Term::Kind::Leaf) return t;
  TermPtr a = canonical_term(t->lhs), b = canonical_term(t->rhs);
  if (term_cert(b) < term_cert(a)) std::swap(a, b);
  return t->kind == Term::Kind::Join ? Term::mk_join(a, b) : Term::mk_meet(a, b);
}

ClassicTermCalc::ClassicTermCalc(const PartialLattice& p) : p_(p) {}

int ClassicTermCalc::intern(const TermPtr& t) {
  std::tuple<int, int, int, int> key;
  Node node{t->kind, -1, -1};
  if (t->kind == Term::Kind::Leaf) {
    key = {0, t->leaf, -1, -1};
    node.a = t->leaf;
  } else {
    node.a = intern(t->lhs);
    node.b = intern(t->rhs);
    key = {t->kind == Term::Kind::Join ? 1 : 2, -1, node.a, node.b};
  }
  auto it = ids_.find(key);
  if (it != ids_.end()) return it->second;
  int id = static_cast<int>(nodes_.size());
  ids_.emplace(key, id);
  nodes_.push_back(node);
  lower_.emplace_back();
  upper_.emplace_back();
  lower_done_.push_back(false);
  upper_done_.push_back(false);
  return id;
}

const std::vector<bool>& ClassicTermCalc::lower_of(int id) {
  if (lower_done_[id]) return lower_[id];
  Node node = nodes_[id];
  std::vector<bool> out;
  if (node.kind == Term::Kind::Leaf) {
    out = down_set(p_, {node.a});
  } else if (node.kind == Term::Kind::Join) {
    std::vector<bool> a = lower_of(node.a);
    const std::vector<bool>& b = lower_of(node.b);
    std::vector<int> gen;
    for (int i = 0; i < p_.n(); ++i)
      if (a[i] || b[i]) gen.push_back(i);
    out = gen.empty() ? std::vector<bool>(p_.n(), false) : ideal_closure(p_, gen);
  } else {
    std::vector<bool> a = lower_of(node.a);
    const std::vector<bool>& b = lower_of(node.b);
    out.resize(p_.n());
    for (int i = 0; i < p_.n(); ++i) out[i] = a[i] && b[i];
  }
  lower_[id] = std::move(out);
  lower_done_[id] = true;
  return lower_[id];
}

const std::vector<bool>& ClassicTermCalc::upper_of(int id) {
  if (upper_done_[id]) return upper_[id];
  Node node = nodes_[id];
  std::vector<bool> out;
  if (node.kind == Term::Kind::Leaf) {
    out = up_set(p_, {node.a});
  } else if (node.kind == Term::Kind::Meet) {
    std::vector<bool> a = upper_of(node.a);
    const std::vector<bool>& b = upper_of(node.b);
    std::vector<int> gen;
    for (int i = 0; i < p_.n(); ++i)
      if (a[i] || b[i]) gen.push_back(i);
    out = gen.empty() ? std::vector<bool>(p_.n(), false) : filter_closure(p_, gen);
  } else {
    std::vector<bool> a = upper_of(node.a);
    const std::vector<bool>& b = upper_of(node.b);
    out.resize(p_.n());
    for (int i = 0; i < p_.n(); ++i) out[i] = a[i] && b[i];
  }
  upper_[id] = std::move(out);
  upper_done_[id] = true;
  return upper_[id];
}

bool ClassicTermCalc::ll_ids(int x, int y) {
  std::vector<bool> xu = upper_of(x);  // copy: lower_of below may reallocate
  const std::vector<bool>& yl = lower_of(y);
  for (int i = 0; i < p_.n(); ++i)
    if (xu[i] && yl[i]) return true;
  return false;
}

void ClassicTermCalc::ensure_memo(int need) {
  if (need <= memo_cap_) return;
  int cap = std::max(need, memo_cap_ * 2 + 16);
  std::vector<int8_t> next(static_cast<size_t>(cap) * cap, -1);
  for (int i = 0; i < memo_cap_; ++i)
    for (int j = 0; j < memo_cap_; ++j)
      next[static_cast<size_t>(i) * cap + j] = peq_memo_[static_cast<size_t>(i) * memo_cap_ + j];
  peq_memo_ = std::move(next);
  memo_cap_ = cap;
}

bool ClassicTermCalc::peq_ids(int xi, int yi) {
  ensure_memo(std::max(xi, yi) + 1);
  int8_t cached = peq_memo_[static_cast<size_t>(xi) * memo_cap_ + yi];
  if (cached != -1) return cached != 0;
  Node x = nodes_[xi], y = nodes_[yi];
  bool r;
  if (x.kind == Term::Kind::Leaf || y.kind == Term::Kind::Leaf) {
    r = ll_ids(xi, yi);
  } else if (x.kind == Term::Kind::Join && y.kind == Term::Kind::Meet) {
    r = peq_ids(x.a, y.a) && peq_ids(x.a, y.b) && peq_ids(x.b, y.a) &&
        peq_ids(x.b, y.b);
  } else if (x.kind == Term::Kind::Join) {
    r = peq_ids(x.a, yi) && peq_ids(x.b, yi);
  } else if (y.kind == Term::Kind::Meet) {
    r = peq_ids(xi, y.a) && peq_ids(xi, y.b);
  } else {
    // meet below join: an interpolant in P, or one side resolves
    r = ll_ids(xi, yi) || peq_ids(x.a, yi) || peq_ids(x.b, yi) ||
        peq_ids(xi, y.a) || peq_ids(xi, y.b);
  }
  peq_memo_[static_cast<size_t>(xi) * memo_cap_ + yi] = r ? 1 : 0;
  return r;
}

TermCalc::TermCalc(std::shared_ptr<const MeasuredPL> m) : mc_(std::move(m)) {}

int TermCalc::intern(const TermPtr& t) {
  std::tuple<int, int, int, int> key;
  if (t->kind == Term::Kind::Leaf) key = {0, t->leaf, -1, -1};
  else {
    int l = intern(t->lhs), r = intern(t->rhs);
    key = {t->kind == Term::Kind::Join ? 1 : 2, -1, l, r};
  }
  auto it = ids_.find(key);
  if (it != ids_.end()) return it->second;
  int id = static_cast<int>(by_id_.size());
  ids_.emplace(key, id);
  by_id_.push_back(t);
  minus_.emplace_back();
  plus_.emplace_back();
  minus_done_.push_back(false);
  plus_done_.push_back(false);
  return id;
}

const AffineFn& TermCalc::term_minus(const TermPtr& t) {
  int id = intern(t);
  if (minus_done_[id]) return minus_[id];
  AffineFn out;
  if (t->kind == Term::Kind::Leaf)
    out = principal_lower(mc_, t->leaf);
  else if (t->kind == Term::Kind::Meet)
    out = meet_lower(mc_, term_minus(t->lhs), term_minus(t->rhs));
  else
    out = join_id(mc_, term_minus(t->lhs), term_minus(t->rhs));
  minus_[id] = std::move(out);
  minus_done_[id] = true;
  return minus_[id];
}

const AffineFn& TermCalc::term_plus(const TermPtr& t) {
  int id = intern(t);
  if (plus_done_[id]) return plus_[id];
  AffineFn out;
  if (t->kind == Term::Kind::Leaf)
    out = principal_upper(mc_, t->leaf);
  else if (t->kind == Term::Kind::Join)
    out = meet_upper(mc_, term_plus(t->lhs), term_plus(t->rhs));
  else
    out = join_fil(mc_, term_plus(t->lhs), term_plus(t->rhs));
  plus_[id] = std::move(out);
  plus_done_[id] = true;
  return plus_[id];
}

int TermCalc::bv_ll(const TermPtr& x, const TermPtr& y) {
  // intern both trees first: term_minus(y) must not grow the memo vector
  // holding the reference produced by term_plus(x)
  intern(x);
  intern(y);
  const AffineFn& fx = term_plus(x);
  const AffineFn& gy = term_minus(y);
  return vbv_le(mc_, fx, gy);
}

int TermCalc::bv_le_terms(const TermPtr& x, const TermPtr& y) {
  uint64_t key = (uint64_t(uint32_t(intern(x))) << 32) | uint32_t(intern(y));
  auto it = le_memo_.find(key);
  if (it != le_memo_.end()) return it->second;
  int r;
  if (x->kind == Term::Kind::Leaf || y->kind == Term::Kind::Leaf) {
    r = bv_ll(x, y);
  } else if (x->kind == Term::Kind::Join && y->kind == Term::Kind::Meet) {
    r = mc_.mt(mc_.mt(bv_le_terms(x->lhs, y->lhs), bv_le_terms(x->lhs, y->rhs)),
               mc_.mt(bv_le_terms(x->rhs, y->lhs), bv_le_terms(x->rhs, y->rhs)));
  } else if (x->kind == Term::Kind::Join) {
    r = mc_.mt(bv_le_terms(x->lhs, y), bv_le_terms(x->rhs, y));
  } else if (y->kind == Term::Kind::Meet) {
    r = mc_.mt(bv_le_terms(x, y->lhs), bv_le_terms(x, y->rhs));
  } else {
    r = bv_ll(x, y);
    r = mc_.jn(r, bv_le_terms(x->lhs, y));
    r = mc_.jn(r, bv_le_terms(x->rhs, y));
    r = mc_.jn(r, bv_le_terms(x, y->lhs));
    r = mc_.jn(r, bv_le_terms(x, y->rhs));
  }
  le_memo_.emplace(key, r);
  return r;
}

int TermCalc::bv_eq_terms(const TermPtr& x, const TermPtr& y) {
  return mc_.mt(bv_le_terms(x, y), bv_le_terms(y, x));
}

std::optional<int> TermQuotient::classify(const TermPtr& t) const {
  const int top = base->E.top();
  for (int i = 0; i < classes(); ++i)
    if (tc->bv_le_terms(t, reps[i]) == top && tc->bv_le_terms(reps[i], t) == top)
      return i;
  return std::nullopt;
}

std::optional<int> TermQuotient::cls_join(int i, int j) const {
  if (cls_le(i, j)) return j;
  if (cls_le(j, i)) return i;
  return classify(Term::mk_join(reps[i], reps[j]));
}

std::optional<int> TermQuotient::cls_meet(int i, int j) const {
  if (cls_le(i, j)) return i;
  if (cls_le(j, i)) return j;
  return classify(Term::mk_meet(reps[i], reps[j]));
}

MeasuredPL TermQuotient::to_measured() const {
  if (!closed) throw Error("CapExceeded", "cannot materialize a partial quotient");
  const int k = classes();
  std::vector<std::string> ids;
  ids.reserve(k);
  for (const TermPtr& t : reps) ids.push_back(term_to_string(t, base->pl.poset));
  std::vector<bool> le(static_cast<size_t>(k) * k, false);
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < k; ++j) le[i * k + j] = cls_le(i, j);
  FinitePoset poset = FinitePoset::from_closed(std::move(ids), std::move(le));
  // route through the validating constructor: the closed quotient must
  // satisfy every measured axiom over its full operation tables
  return from_phi_table(make_total_lattice(poset), dualize(base->E), psi);
}

static TermQuotient theorem_a_impl(std::shared_ptr<const MeasuredPL> m,
                                   TheoremACaps caps) {
  TermQuotient q;
  q.base = m;
  q.tc = std::make_shared<TermCalc>(m);
  TermCalc& tc = *q.tc;
  const int top = m->E.top();
  q.leaf_class.assign(m->n(), -1);
  auto classify_now = [&](const TermPtr& t) -> int {
    for (int i = 0; i < static_cast<int>(q.reps.size()); ++i)
      if (tc.bv_le_terms(t, q.reps[i]) == top && tc.bv_le_terms(q.reps[i], t) == top)
        return i;
    return -1;
  };
  for (int a = 0; a < m->n(); ++a) {
    TermPtr t = Term::mk_leaf(a);
    int c = classify_now(t);
    if (c == -1) {
      c = static_cast<int>(q.reps.size());
      q.reps.push_back(t);
    }
    q.leaf_class[a] = c;
  }
  std::map<std::tuple<int, int, int>, int> combos;  // (op, i, j) -> class
  bool skipped_any = false;
  for (;;) {
    const int count = static_cast<int>(q.reps.size());
    bool added = false;
    for (int i = 0; i < count && !q.cap_exceeded; ++i)
      for (int j = i + 1; j < count && !q.cap_exceeded; ++j) {
        // comparable classes need no new combination
        bool i_le_j = tc.bv_le_terms(q.reps[i], q.reps[j]) == top;
        bool j_le_i = tc.bv_le_terms(q.reps[j], q.reps[i]) == top;
        for (int op = 0; op < 2; ++op) {
          if (combos.count({op, i, j})) continue;
          if (i_le_j || j_le_i) {
            bool le = i_le_j;
            combos[{op, i, j}] = (op == 0) == le ? j : i;
            continue;
          }
          int h = q.reps[i]->height + q.reps[j]->height + 1;
          if (h > caps.height_cap) { skipped_any = true; continue; }
          TermPtr t = op == 0 ? Term::mk_join(q.reps[i], q.reps[j])
                              : Term::mk_meet(q.reps[i], q.reps[j]);
          int c = classify_now(t);
          if (c == -1) {
            if (static_cast<int>(q.reps.size()) >= caps.size_cap) {
              q.cap_exceeded = true;
              break;
            }
            c = static_cast<int>(q.reps.size());
            q.reps.push_back(t);
            added = true;
          }
          combos[{op, i, j}] = c;
        }
      }
    if (q.cap_exceeded || !added) break;
  }
  q.closed = !q.cap_exceeded && !skipped_any;
  const int k = static_cast<int>(q.reps.size());
  q.psi.assign(static_cast<size_t>(k) * k, 0);
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < k; ++j) q.psi[i * k + j] = tc.bv_le_terms(q.reps[i], q.reps[j]);
  return q;
}

TermQuotient theorem_a(std::shared_ptr<const MeasuredPL> m, TheoremACaps caps) {
  return theorem_a_impl(std::move(m), caps);
}

TermQuotient theorem_a(const MeasuredPL& m, TheoremACaps caps) {
  return theorem_a_impl(std::make_shared<const MeasuredPL>(m), caps);
}

}  // namespace latforge
