#include <iostream>

#include "CLI11.hpp"
#include "latforge/gadgets.hpp"
#include "latforge/generate.hpp"
#include "latforge/io.hpp"

using namespace latforge;

namespace {

int exit_code_for(const Error& e) {
  if (e.kind == "ParseError" || e.kind == "UnknownElement") return 3;
  if (e.kind == "PropertyViolation") return 2;
  return 1;
}

MeasuredFile load(const std::string& path) { return parse_measured_file(path); }

MeasuredPL augmented(const MeasuredFile& f) {
  PartialLattice p = augment_singletons(f.P);
  const int n = p.n();
  std::vector<int> t(static_cast<size_t>(n) * n);
  for (int x = 0; x < n; ++x)
    for (int y = 0; y < n; ++y) t[x * n + y] = f.M.bv(x, y);
  return from_phi_table(p, f.D, t);
}

PrimeFilter filter_by_generator(const DistLattice& E, const std::string& elem) {
  int idx = E.index_of(elem);
  for (const PrimeFilter& g : prime_filters(E))
    if (g.generator == idx) return g;
  throw Error("UnknownElement", "'" + elem + "' does not generate a prime filter of E");
}

void emit(const std::string& out_path, const std::string& content) {
  if (out_path.empty())
    std::cout << content;
  else
    write_file(out_path, content);
}

bool poset_is_lattice(const FinitePoset& p) {
  for (int a = 0; a < p.size(); ++a)
    for (int b = 0; b < p.size(); ++b)
      if (p.sup_of({a, b}) == -1 || p.inf_of({a, b}) == -1) return false;
  return true;
}

// lattice-shaped files become total lattices (needed for the base K and
// so that inclusions preserve the base operations); others are augmented
MeasuredPL promote(const MeasuredFile& f) {
  if (f.P.n() <= 16 && poset_is_lattice(f.P.poset)) {
    PartialLattice total = make_total_lattice(f.P.poset);
    const int n = total.n();
    std::vector<int> t(static_cast<size_t>(n) * n);
    for (int x = 0; x < n; ++x)
      for (int y = 0; y < n; ++y) t[x * n + y] = f.M.bv(x, y);
    return from_phi_table(total, f.D, t);
  }
  return augmented(f);
}

VFormationM formation_from_files(const MeasuredFile& fk, const MeasuredFile& fp,
                                 const MeasuredFile& fq) {
  VFormationM v;
  v.K = promote(fk);
  v.P = promote(fp);
  v.Q = promote(fq);
  // inclusion maps by element name
  for (const std::string& id : v.K.pl.poset.elements()) {
    v.f.push_back(v.P.pl.poset.index_of(id));
    v.g.push_back(v.Q.pl.poset.index_of(id));
  }
  return v;
}

int cmd_validate(const std::string& file) {
  MeasuredFile f = load(file);
  (void)f;
  std::cout << "OK\n";
  return 0;
}

int cmd_con(const std::string& file, const std::string& dot_path) {
  MeasuredFile f = load(file);
  ConLattice con = con_lattice(augment_singletons(f.P));
  std::cout << "congruences: " << con.size() << "\n";
  std::cout << "bottom: c" << con.bot << "  top: c" << con.top << "\n";
  std::cout << "covers:\n";
  for (auto [a, b] : con.order.cover_pairs())
    std::cout << "  c" << a << " < c" << b << "\n";
  if (!dot_path.empty()) write_file(dot_path, poset_dot(con.order, "ConP"));
  return 0;
}

int cmd_bval(const std::string& file, const std::string& t1, const std::string& t2) {
  MeasuredFile f = load(file);
  MeasuredPL m = augmented(f);
  TermPtr x = parse_term(t1, m.pl.poset);
  TermPtr y = parse_term(t2, m.pl.poset);
  TermCalc tc(m);
  int v = tc.bv_le_terms(x, y);
  std::cout << "[[ " << t1 << " <= " << t2 << " ]] = " << m.E.id(v)
            << (v == m.E.top() ? "  (top of E, i.e. 0 of D: holds everywhere)" : "")
            << "\n";
  std::cout << "zero-convention reading: phi = " << f.D.id(v) << " in D\n";
  return 0;
}

int cmd_freecmp(const std::string& file, const std::string& t1, const std::string& t2) {
  MeasuredFile f = load(file);
  PartialLattice p = augment_singletons(f.P);
  TermPtr x = parse_term(t1, p.poset);
  TermPtr y = parse_term(t2, p.poset);
  ClassicTermCalc cc(p);
  bool xy = cc.peq(x, y), yx = cc.peq(y, x);
  std::cout << t1 << " <= " << t2 << " : " << (xy ? "yes" : "no") << "\n";
  std::cout << t2 << " <= " << t1 << " : " << (yx ? "yes" : "no") << "\n";
  std::cout << "equivalent: " << (xy && yx ? "yes" : "no") << "\n";
  return 0;
}

int cmd_pushout(const std::string& fk, const std::string& fp, const std::string& fq,
                const std::string& out_path) {
  MeasuredFile k = load(fk), p = load(fp), q = load(fq);
  if (!k.D.structurally_equal(p.D) || !k.D.structurally_equal(q.D))
    throw Error("ValueLatticeMismatch", "the three files must share lattice_D");
  VFormationM v = formation_from_files(k, p, q);
  StandardizedM st = standardize(v);
  PushoutM po = pushout_measured(st.v);
  MeasuredFile out{k.D, po.R.pl, po.R};
  emit(out_path, serialize_measured(out));
  return 0;
}

int cmd_quotient(const std::string& file, const std::string& filter_elem,
                 const std::string& out_path) {
  MeasuredFile f = load(file);
  MeasuredPL m = augmented(f);
  PrimeFilter g = filter_by_generator(m.E, filter_elem);
  MeasuredQuotient q = quotient(m, g);
  MeasuredFile out;
  out.D = as_dist_lattice(build_poset({"0", "1"}, {{"0", "1"}}));
  out.P = q.q;
  out.M = classical_measured(q.q);
  emit(out_path, serialize_measured(out));
  return 0;
}

int cmd_theorem_a(const std::string& file, int height_cap, int size_cap) {
  MeasuredFile f = load(file);
  MeasuredPL m = augmented(f);
  TermQuotient tq = theorem_a(m, TheoremACaps{height_cap, size_cap});
  std::cout << "classes: " << tq.classes() << "\n";
  std::cout << "closed: " << (tq.closed ? "yes" : "no") << "\n";
  for (int i = 0; i < tq.classes(); ++i)
    std::cout << "  [" << i << "] " << term_to_string(tq.reps[i], m.pl.poset) << "\n";
  std::cout << "psi (rows <= cols):\n";
  for (int i = 0; i < tq.classes(); ++i) {
    std::cout << " ";
    for (int j = 0; j < tq.classes(); ++j) std::cout << " " << m.E.id(tq.psi_at(i, j));
    std::cout << "\n";
  }
  return 0;
}

int cmd_theorem_b(const std::string& fk, const std::string& fp, const std::string& fq,
                  int height_cap, int size_cap) {
  MeasuredFile k = load(fk), p = load(fp), q = load(fq);
  if (!k.D.structurally_equal(p.D) || !k.D.structurally_equal(q.D))
    throw Error("ValueLatticeMismatch", "the three files must share lattice_D");
  VFormationM v = formation_from_files(k, p, q);
  TheoremBResult r = theorem_b(v.K, v.P, v.Q, v.f, v.g,
                               TheoremACaps{height_cap, size_cap});
  std::cout << "classes: " << r.L.classes() << "\n";
  std::cout << "closed: " << (r.L.closed ? "yes" : "no") << "\n";
  bool proper = true;
  for (int i = 0; i < r.L.classes() && proper; ++i)
    for (int j = 0; j < r.L.classes(); ++j)
      if (i != j && r.L.cls_le(i, j) && r.L.cls_le(j, i)) { proper = false; break; }
  std::cout << "proper: " << (proper ? "yes" : "no") << "\n";
  std::cout << "commutes: yes\n";  // theorem_b throws otherwise
  return 0;
}

int cmd_gadget(const std::string& name, const std::string& dfile,
               const std::string& kfile, std::vector<std::string> vals,
               const std::string& out_path) {
  if (name == "m3") {
    if (kfile.empty()) throw Error("ParseError", "gadget m3 needs --k FILE");
    MeasuredFile k = load(kfile);
    M3Result r = m3(make_total_lattice(k.P.poset));
    std::cout << "elements: " << r.m3.n() << "\n";
    MeasuredFile out;
    out.D = as_dist_lattice(build_poset({"0", "1"}, {{"0", "1"}}));
    out.P = r.m3;
    out.M = classical_measured(r.m3);
    emit(out_path, serialize_measured(out));
    return 0;
  }
  if (dfile.empty()) throw Error("ParseError", "gadget needs --d FILE for the value lattice");
  MeasuredFile df = load(dfile);
  const DistLattice& D = df.D;
  Gadget g;
  if (name == "relcomp") {
    if (vals.size() != 2) throw Error("ParseError", "relcomp needs --val AB --val BC");
    g = relcomp_gadget(D, D.index_of(vals[0]), D.index_of(vals[1]));
  } else if (name == "persp") {
    if (vals.size() != 4)
      throw Error("ParseError", "persp needs --val XI --val ETA --val ALPHA --val BETA");
    g = persp_gadget(D, D.index_of(vals[0]), D.index_of(vals[1]), D.index_of(vals[2]),
                     D.index_of(vals[3]));
  } else if (name == "chain3") {
    if (vals.size() != 2) throw Error("ParseError", "chain3 needs --val LO --val HI");
    g = chain3_gadget(D, D.index_of(vals[0]), D.index_of(vals[1]));
  } else {
    throw Error("ParseError", "unknown gadget '" + name + "'");
  }
  std::cout << "elements: " << g.ambient.n() << "\n";
  MeasuredFile out{D, g.ambient.pl, g.ambient};
  emit(out_path, serialize_measured(out));
  return 0;
}

int cmd_selfcheck(const std::string& file, uint64_t seed, int cases) {
  if (!file.empty()) {
    MeasuredFile f = load(file);
    MeasuredPL m = augmented(f);
    TruthReport tr = check_truth_lemmas(m);
    if (!tr.ok) {
      std::cout << "file check FAILED: " << tr.detail << "\n";
      return 2;
    }
    std::cout << "file check ok\n";
  }
  SelfCheckReport rep = run_selfcheck(seed, cases);
  std::cout << "cases: " << rep.cases << "  failures: " << rep.failures << "\n";
  if (rep.failures) {
    std::cout << "first failure: " << rep.first_failure << "\n";
    return 2;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"lattice-forge: congruences, Boolean-valued order semantics, and "
               "amalgamation over finite partial lattices"};
  app.require_subcommand(1);

  std::string file, fk, fp, fq, t1, t2, dot_path, out_path, filter_elem;
  std::string gadget_name, dfile, kfile;
  std::vector<std::string> vals;
  int height_cap = 4, size_cap = 20000, cases = 50;
  uint64_t seed = 1;

  auto* validate = app.add_subcommand("validate", "validate a measured-structure file");
  validate->add_option("file", file)->required();

  auto* con = app.add_subcommand("con", "congruence lattice of the partial lattice");
  con->add_option("file", file)->required();
  con->add_option("--dot", dot_path, "write the Hasse diagram in DOT");

  auto* bval = app.add_subcommand("bval", "Boolean value of term1 <= term2");
  bval->add_option("file", file)->required();
  bval->add_option("--term1", t1)->required();
  bval->add_option("--term2", t2)->required();

  auto* freecmp = app.add_subcommand("freecmp", "classical term order both ways");
  freecmp->add_option("file", file)->required();
  freecmp->add_option("--term1", t1)->required();
  freecmp->add_option("--term2", t2)->required();

  auto* pushout = app.add_subcommand("pushout", "measured pushout over a common base");
  pushout->add_option("K", fk)->required();
  pushout->add_option("P", fp)->required();
  pushout->add_option("Q", fq)->required();
  pushout->add_option("--out", out_path);

  auto* quot = app.add_subcommand("quotient", "prime-filter quotient");
  quot->add_option("file", file)->required();
  quot->add_option("--filter", filter_elem, "join-irreducible generator of the filter")
      ->required();
  quot->add_option("--out", out_path);

  auto* ta = app.add_subcommand("theorem-a", "term-algebra quotient with psi table");
  ta->add_option("file", file)->required();
  ta->add_option("--height-cap", height_cap);
  ta->add_option("--size-cap", size_cap);

  auto* tb = app.add_subcommand("theorem-b", "amalgamation pipeline report");
  tb->add_option("K", fk)->required();
  tb->add_option("P", fp)->required();
  tb->add_option("Q", fq)->required();
  tb->add_option("--height-cap", height_cap);
  tb->add_option("--size-cap", size_cap);

  auto* gadget = app.add_subcommand("gadget", "emit a construction gadget");
  gadget->add_option("name", gadget_name, "m3 | relcomp | persp | chain3")->required();
  gadget->add_option("--d", dfile, "file providing the value lattice D");
  gadget->add_option("--k", kfile, "base lattice file (m3)");
  gadget->add_option("--val", vals, "gadget values, in order");
  gadget->add_option("--out", out_path);

  auto* selfcheck = app.add_subcommand("selfcheck", "seeded invariant sweep");
  selfcheck->add_option("file", file);
  selfcheck->add_option("--seed", seed);
  selfcheck->add_option("--cases", cases);

  CLI11_PARSE(app, argc, argv);

  try {
    if (*validate) return cmd_validate(file);
    if (*con) return cmd_con(file, dot_path);
    if (*bval) return cmd_bval(file, t1, t2);
    if (*freecmp) return cmd_freecmp(file, t1, t2);
    if (*pushout) return cmd_pushout(fk, fp, fq, out_path);
    if (*quot) return cmd_quotient(file, filter_elem, out_path);
    if (*ta) return cmd_theorem_a(file, height_cap, size_cap);
    if (*tb) return cmd_theorem_b(fk, fp, fq, height_cap, size_cap);
    if (*gadget) return cmd_gadget(gadget_name, dfile, kfile, vals, out_path);
    if (*selfcheck) return cmd_selfcheck(file, seed, cases);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_code_for(e);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
