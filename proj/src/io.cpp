#include "latforge/io.hpp"

#include <fstream>
#include <sstream>

#include "json.hpp"

namespace latforge {

using nlohmann::json;

namespace {

std::vector<std::string> parse_elements(const json& j) {
  std::vector<std::string> out;
  for (const auto& e : j) out.push_back(e.get<std::string>());
  return out;
}

std::vector<std::pair<std::string, std::string>> parse_pairs(const json& j) {
  std::vector<std::pair<std::string, std::string>> out;
  for (const auto& e : j) {
    if (!e.is_array() || e.size() != 2) throw Error("ParseError", "le pairs are 2-arrays");
    out.emplace_back(e[0].get<std::string>(), e[1].get<std::string>());
  }
  return out;
}

std::map<Key, int> parse_ops(const json& j, const FinitePoset& poset) {
  std::map<Key, int> out;
  for (const auto& e : j) {
    Key k;
    for (const auto& a : e.at("args")) k.push_back(poset.index_of(a.get<std::string>()));
    k = make_key(std::move(k));
    out[k] = poset.index_of(e.at("value").get<std::string>());
  }
  return out;
}

}  // namespace

MeasuredFile parse_measured_text(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const std::exception& e) {
    throw Error("ParseError", e.what());
  }
  MeasuredFile out;
  try {
    const json& jd = j.at("lattice_D");
    FinitePoset dposet = build_poset(parse_elements(jd.at("elements")),
                                     parse_pairs(jd.value("le", json::array())));
    out.D = as_dist_lattice(dposet);
    const json& jp = j.at("partial_lattice");
    FinitePoset poset = build_poset(parse_elements(jp.at("elements")),
                                    parse_pairs(jp.value("le", json::array())));
    out.P = validate_pl(poset, parse_ops(jp.value("joins", json::array()), poset),
                        parse_ops(jp.value("meets", json::array()), poset));
  } catch (const json::exception& e) {
    throw Error("ParseError", e.what());
  }
  const int n = out.P.n();
  std::vector<int> table(static_cast<size_t>(n) * n, -1);
  for (int x = 0; x < n; ++x)
    for (int y = 0; y < n; ++y)
      if (out.P.poset.le(x, y)) table[x * n + y] = out.D.bot();
  if (j.count("phi")) {
    try {
      for (const auto& e : j.at("phi")) {
        if (!e.is_array() || e.size() != 3)
          throw Error("ParseError", "phi entries are [x, y, d] triples");
        int x = out.P.poset.index_of(e[0].get<std::string>());
        int y = out.P.poset.index_of(e[1].get<std::string>());
        table[x * n + y] = out.D.index_of(e[2].get<std::string>());
      }
    } catch (const json::exception& e) {
      throw Error("ParseError", e.what());
    }
  }
  for (int x = 0; x < n; ++x)
    for (int y = 0; y < n; ++y)
      if (table[x * n + y] == -1)
        throw Error("AxiomViolation",
                    "table not total: missing phi entry for ('" + out.P.poset.id(x) +
                        "','" + out.P.poset.id(y) + "')");
  out.M = from_phi_table(out.P, out.D, table);
  return out;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("ParseError", "cannot open '" + path + "'");
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream outf(path, std::ios::binary);
  if (!outf) throw Error("ParseError", "cannot write '" + path + "'");
  outf << content;
}

MeasuredFile parse_measured_file(const std::string& path) {
  return parse_measured_text(read_file(path));
}

std::string serialize_measured(const MeasuredFile& f) {
  json j;
  json jd;
  jd["elements"] = json::array();
  for (const std::string& e : f.D.poset().elements()) jd["elements"].push_back(e);
  jd["le"] = json::array();
  for (auto [a, b] : f.D.poset().cover_pairs())
    jd["le"].push_back({f.D.id(a), f.D.id(b)});
  j["lattice_D"] = jd;

  json jp;
  jp["elements"] = json::array();
  for (const std::string& e : f.P.poset.elements()) jp["elements"].push_back(e);
  jp["le"] = json::array();
  for (auto [a, b] : f.P.poset.cover_pairs())
    jp["le"].push_back({f.P.poset.id(a), f.P.poset.id(b)});
  jp["joins"] = json::array();
  for (const auto& [k, v] : f.P.joins) {
    json e;
    e["args"] = json::array();
    for (int x : k) e["args"].push_back(f.P.poset.id(x));
    e["value"] = f.P.poset.id(v);
    jp["joins"].push_back(e);
  }
  jp["meets"] = json::array();
  for (const auto& [k, v] : f.P.meets) {
    json e;
    e["args"] = json::array();
    for (int x : k) e["args"].push_back(f.P.poset.id(x));
    e["value"] = f.P.poset.id(v);
    jp["meets"].push_back(e);
  }
  j["partial_lattice"] = jp;

  // zero convention: the stored table ids double as D ids
  json phi = json::array();
  const int n = f.P.n();
  for (int x = 0; x < n; ++x)
    for (int y = 0; y < n; ++y) {
      if (f.P.poset.le(x, y)) continue;
      phi.push_back({f.P.poset.id(x), f.P.poset.id(y), f.D.id(f.M.bv(x, y))});
    }
  j["phi"] = phi;
  return j.dump(2) + "\n";
}

std::string poset_dot(const FinitePoset& p, const std::string& name) {
  std::ostringstream os;
  os << "digraph \"" << name << "\" {\n  rankdir=BT;\n  node [shape=plaintext];\n";
  for (int i = 0; i < p.size(); ++i) os << "  n" << i << " [label=\"" << p.id(i) << "\"];\n";
  for (auto [a, b] : p.cover_pairs()) os << "  n" << a << " -> n" << b << ";\n";
  os << "}\n";
  return os.str();
}

}  // namespace latforge
