#include "latforge/affine.hpp"

#include <algorithm>
#include <map>

namespace latforge {

static std::vector<int> eval_terms(const MeasuredCalc& c, AffineFn::Kind kind,
                                   const std::vector<std::pair<int, int>>& terms) {
  const int n = c.M().n();
  std::vector<int> vals(n, c.bot());
  for (int x = 0; x < n; ++x)
    for (const auto& [u, alpha] : terms) {
      int b = (kind == AffineFn::Kind::Lower) ? c.bv(x, u) : c.bv(u, x);
      vals[x] = c.jn(vals[x], c.mt(b, alpha));
    }
  return vals;
}

// merge duplicate anchors (coefficients join) and drop bottom coefficients
static std::vector<std::pair<int, int>> dedup_terms(
    const MeasuredCalc& c, std::vector<std::pair<int, int>> terms) {
  std::map<int, int> by_anchor;
  for (const auto& [u, alpha] : terms) {
    auto [it, fresh] = by_anchor.emplace(u, alpha);
    if (!fresh) it->second = c.jn(it->second, alpha);
  }
  std::vector<std::pair<int, int>> out;
  for (const auto& [u, alpha] : by_anchor)
    if (alpha != c.bot()) out.emplace_back(u, alpha);
  if (out.empty() && !terms.empty()) out.emplace_back(terms.front().first, c.bot());
  return out;
}

AffineFn make_affine(const MeasuredCalc& c, AffineFn::Kind kind,
                     std::vector<std::pair<int, int>> terms) {
  if (terms.empty()) throw Error("EmptyArgument", "affine functions need a term");
  AffineFn f;
  f.kind = kind;
  f.terms = dedup_terms(c, std::move(terms));
  f.values = eval_terms(c, kind, f.terms);
  return f;
}

AffineFn principal_lower(const MeasuredCalc& c, int u) {
  return make_affine(c, AffineFn::Kind::Lower, {{u, c.top()}});
}

AffineFn principal_upper(const MeasuredCalc& c, int u) {
  return make_affine(c, AffineFn::Kind::Upper, {{u, c.top()}});
}

AffineFn meet_lower(const MeasuredCalc& c, const AffineFn& f, const AffineFn& g) {
  const int n = c.M().n();
  std::vector<std::pair<int, int>> terms;
  for (int w = 0; w < n; ++w) {
    int gamma = c.bot();
    for (const auto& [u, alpha] : f.terms)
      for (const auto& [v, beta] : g.terms)
        gamma = c.jn(gamma, c.mt(c.mt(c.bv(w, u), c.bv(w, v)), c.mt(alpha, beta)));
    terms.emplace_back(w, gamma);
  }
  return make_affine(c, AffineFn::Kind::Lower, std::move(terms));
}

AffineFn meet_upper(const MeasuredCalc& c, const AffineFn& f, const AffineFn& g) {
  const int n = c.M().n();
  std::vector<std::pair<int, int>> terms;
  for (int w = 0; w < n; ++w) {
    int gamma = c.bot();
    for (const auto& [u, alpha] : f.terms)
      for (const auto& [v, beta] : g.terms)
        gamma = c.jn(gamma, c.mt(c.mt(c.bv(u, w), c.bv(v, w)), c.mt(alpha, beta)));
    terms.emplace_back(w, gamma);
  }
  return make_affine(c, AffineFn::Kind::Upper, std::move(terms));
}

AffineFn id_closure(MeasuredCalc& c, const AffineFn& f, int term_cap) {
  const int n = c.M().n();
  const int k = static_cast<int>(f.terms.size());
  if (k > term_cap) throw Error("TermBlowup", "id_closure over too many anchors");
  std::vector<int> acc(n, c.bot());
  // the contribution of I is capped by Id over the full anchor set; once
  // the accumulator dominates that, remaining subsets cannot add value
  Mask full = 0;
  for (const auto& [u, alpha] : f.terms) full |= Mask(1) << u;
  const std::vector<int>& cap_vals = c.id_values(full);
  std::vector<uint32_t> order;
  for (uint32_t im = 1; im < (1u << k); ++im) order.push_back(im);
  std::sort(order.begin(), order.end(), [](uint32_t a, uint32_t b) {
    int pa = __builtin_popcount(a), pb = __builtin_popcount(b);
    return pa != pb ? pa < pb : a < b;
  });
  size_t idx = 0;
  int last_card = 0;
  for (; idx < order.size(); ++idx) {
    uint32_t im = order[idx];
    int card = __builtin_popcount(im);
    if (card > last_card) {
      bool saturated = true;
      for (int a = 0; a < n; ++a)
        if (!c.le(cap_vals[a], acc[a])) { saturated = false; break; }
      if (saturated) break;
      last_card = card;
    }
    Mask anchors = 0;
    int coeff = c.top();
    for (int i = 0; i < k; ++i)
      if (im & (1u << i)) {
        anchors |= Mask(1) << f.terms[i].first;
        coeff = c.mt(coeff, f.terms[i].second);
      }
    if (coeff == c.bot()) continue;
    const std::vector<int>& idv = c.id_values(anchors);
    for (int a = 0; a < n; ++a) acc[a] = c.jn(acc[a], c.mt(idv[a], coeff));
  }
  std::vector<std::pair<int, int>> terms;
  for (int a = 0; a < n; ++a) terms.emplace_back(a, acc[a]);
  AffineFn out = make_affine(c, AffineFn::Kind::Lower, std::move(terms));
  return out;
}

AffineFn fil_closure(MeasuredCalc& c, const AffineFn& f, int term_cap) {
  const int n = c.M().n();
  const int k = static_cast<int>(f.terms.size());
  if (k > term_cap) throw Error("TermBlowup", "fil_closure over too many anchors");
  std::vector<int> acc(n, c.bot());
  Mask full = 0;
  for (const auto& [u, alpha] : f.terms) full |= Mask(1) << u;
  const std::vector<int>& cap_vals = c.fil_values(full);
  std::vector<uint32_t> order;
  for (uint32_t im = 1; im < (1u << k); ++im) order.push_back(im);
  std::sort(order.begin(), order.end(), [](uint32_t a, uint32_t b) {
    int pa = __builtin_popcount(a), pb = __builtin_popcount(b);
    return pa != pb ? pa < pb : a < b;
  });
  int last_card = 0;
  for (size_t idx = 0; idx < order.size(); ++idx) {
    uint32_t im = order[idx];
    int card = __builtin_popcount(im);
    if (card > last_card) {
      bool saturated = true;
      for (int a = 0; a < n; ++a)
        if (!c.le(cap_vals[a], acc[a])) { saturated = false; break; }
      if (saturated) break;
      last_card = card;
    }
    Mask anchors = 0;
    int coeff = c.top();
    for (int i = 0; i < k; ++i)
      if (im & (1u << i)) {
        anchors |= Mask(1) << f.terms[i].first;
        coeff = c.mt(coeff, f.terms[i].second);
      }
    if (coeff == c.bot()) continue;
    const std::vector<int>& fv = c.fil_values(anchors);
    for (int a = 0; a < n; ++a) acc[a] = c.jn(acc[a], c.mt(fv[a], coeff));
  }
  std::vector<std::pair<int, int>> terms;
  for (int a = 0; a < n; ++a) terms.emplace_back(a, acc[a]);
  return make_affine(c, AffineFn::Kind::Upper, std::move(terms));
}

AffineFn join_id(MeasuredCalc& c, const AffineFn& f, const AffineFn& g, int term_cap) {
  std::vector<std::pair<int, int>> terms = f.terms;
  terms.insert(terms.end(), g.terms.begin(), g.terms.end());
  AffineFn pointwise = make_affine(c, AffineFn::Kind::Lower, std::move(terms));
  return id_closure(c, pointwise, term_cap);
}

AffineFn join_fil(MeasuredCalc& c, const AffineFn& f, const AffineFn& g, int term_cap) {
  std::vector<std::pair<int, int>> terms = f.terms;
  terms.insert(terms.end(), g.terms.begin(), g.terms.end());
  AffineFn pointwise = make_affine(c, AffineFn::Kind::Upper, std::move(terms));
  return fil_closure(c, pointwise, term_cap);
}

bool is_lower_function(const MeasuredCalc& c, const std::vector<int>& values) {
  const int n = c.M().n();
  for (int x = 0; x < n; ++x)
    for (int y = 0; y < n; ++y)
      if (!c.le(c.mt(values[y], c.bv(x, y)), values[x])) return false;
  return true;
}

bool is_upper_function(const MeasuredCalc& c, const std::vector<int>& values) {
  const int n = c.M().n();
  for (int x = 0; x < n; ++x)
    for (int y = 0; y < n; ++y)
      if (!c.le(c.mt(values[x], c.bv(x, y)), values[y])) return false;
  return true;
}

bool is_ideal_function(const MeasuredCalc& c, const AffineFn& f) {
  if (f.kind != AffineFn::Kind::Lower || !is_lower_function(c, f.values)) return false;
  for (const auto& [k, a] : c.M().pl.joins) {
    int acc = c.top();
    for (int x : k) acc = c.mt(acc, f.values[x]);
    if (!c.le(acc, f.values[a])) return false;
  }
  return true;
}

bool is_filter_function(const MeasuredCalc& c, const AffineFn& f) {
  if (f.kind != AffineFn::Kind::Upper || !is_upper_function(c, f.values)) return false;
  for (const auto& [k, a] : c.M().pl.meets) {
    int acc = c.top();
    for (int x : k) acc = c.mt(acc, f.values[x]);
    if (!c.le(acc, f.values[a])) return false;
  }
  return true;
}

int vbv_le(const MeasuredCalc& c, const AffineFn& f, const AffineFn& g) {
  if (f.kind != AffineFn::Kind::Upper || g.kind != AffineFn::Kind::Lower)
    throw Error("EmptyArgument", "vbv_le wants an upper and a lower function");
  int acc = c.bot();
  for (const auto& [u, alpha] : f.terms)
    for (const auto& [v, beta] : g.terms)
      acc = c.jn(acc, c.mt(c.mt(alpha, beta), c.bv(u, v)));
  return acc;
}

std::vector<bool> pi_g(const MeasuredCalc& c, const AffineFn& f, const PrimeFilter& g,
                       const MeasuredQuotient& q) {
  std::vector<bool> out(q.q.n(), false);
  for (int x = 0; x < c.M().n(); ++x)
    if (g.contains(f.values[x])) out[q.cls[x]] = true;
  return out;
}

}  // namespace latforge
