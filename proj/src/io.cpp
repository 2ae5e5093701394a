#include "opcalc/io.hpp"

#include <cstdio>
#include <fstream>
#include <regex>
#include <sstream>

namespace opcalc {

namespace {

void require_version(const Json& j) {
  if (!j.contains("version") || j["version"] != kFormatVersion)
    throw FormatError("missing or unsupported version (expected \"" + std::string(kFormatVersion) + "\")");
}

const Json& field(const Json& j, const char* key) {
  if (!j.contains(key)) throw FormatError(std::string("missing field '") + key + "'");
  return j[key];
}

std::int64_t parse_int(const Json& v) {
  if (v.is_number_integer()) return v.get<std::int64_t>();
  if (!v.is_string()) throw FormatError("expected an integer or a string");
  std::size_t used = 0;
  std::string s = v.get<std::string>();
  std::int64_t x = 0;
  try {
    x = std::stoll(s, &used);
  } catch (const std::exception&) {
    throw FormatError("not an integer: '" + s + "'");
  }
  if (used != s.size()) throw FormatError("not an integer: '" + s + "'");
  return x;
}

}  // namespace

Json matrix_to_json(const ZMatrix& m) {
  Json entries = Json::array();
  for (std::size_t c = 0; c < m.ncols(); ++c) {
    auto col = m.cols[c];
    std::sort(col.begin(), col.end());
    for (auto& [r, v] : col)
      if (v != 0) entries.push_back(Json::array({r, c, std::to_string(v)}));
  }
  return Json{{"rows", m.rows}, {"cols", m.ncols()}, {"entries", entries}};
}

ZMatrix matrix_from_json(const Json& j) {
  ZMatrix m(std::size_t(parse_int(field(j, "rows"))), std::size_t(parse_int(field(j, "cols"))));
  for (auto& e : field(j, "entries")) {
    if (!e.is_array() || e.size() != 3) throw FormatError("matrix entry must be [row, col, \"value\"]");
    std::int64_t r = parse_int(e[0]), c = parse_int(e[1]);
    if (r < 0 || c < 0 || std::size_t(r) >= m.rows || std::size_t(c) >= m.ncols())
      throw FormatError("matrix entry out of range");
    m.cols[c].push_back({std::int32_t(r), parse_int(e[2])});
  }
  m.canonicalize();
  return m;
}

Json group_to_json(const Group& g) {
  static const std::regex standard(R"(1|[CS][1-9][0-9]*)");
  if (std::regex_match(g.name(), standard)) return Json{{"name", g.name()}};
  std::vector<std::string> labels;
  std::vector<std::vector<int>> table(g.order(), std::vector<int>(g.order()));
  for (std::size_t a = 0; a < g.order(); ++a) {
    labels.push_back(g.label(int(a)));
    for (std::size_t b = 0; b < g.order(); ++b) table[a][b] = g.mul(int(a), int(b));
  }
  return Json{{"name", g.name()}, {"labels", labels}, {"table", table}, {"generators", g.generators()}};
}

Group group_from_json(const Json& j) {
  std::string name = field(j, "name").get<std::string>();
  if (j.contains("table"))
    return Group::from_table(name, field(j, "labels").get<std::vector<std::string>>(),
                             j["table"].get<std::vector<std::vector<int>>>(),
                             field(j, "generators").get<std::vector<int>>());
  if (name == "1") return Group::trivial();
  if (name.size() >= 2 && (name[0] == 'C' || name[0] == 'S')) {
    int n = int(parse_int(Json(name.substr(1))));
    if (n >= 1 && n <= 8) return name[0] == 'C' ? Group::cyclic(n) : Group::symmetric(n);
  }
  throw FormatError("unknown group '" + name + "' (give labels, table and generators)");
}

Json gcomplex_to_json(const GComplex& x) {
  Json basis = Json::array(), diff = Json::array();
  for (int d = x.d_min(); d <= x.d_max(); ++d) basis.push_back(x.basis(d));
  for (int d = x.d_min() + 1; d <= x.d_max(); ++d) diff.push_back(matrix_to_json(x.diff(d)));
  Json action = Json::object();
  if (x.has_action())
    for (std::size_t gi = 0; gi < x.group().generators().size(); ++gi) {
      Json per = Json::array();
      for (int d = x.d_min(); d <= x.d_max(); ++d) per.push_back(matrix_to_json(x.action(gi, d)));
      action[x.group().label(x.group().generators()[gi])] = per;
    }
  Json out{{"version", kFormatVersion},
           {"ring", x.ring().name()},
           {"group", group_to_json(x.group())},
           {"degrees", Json::array({x.d_min(), x.d_max()})},
           {"basis", basis},
           {"diff", diff},
           {"action", action}};
  if (x.truncated_below() || x.truncated_above()) out["valid"] = Json::array({x.valid_min(), x.valid_max()});
  return out;
}

GComplex gcomplex_from_json(const Json& j) {
  require_version(j);
  Ring ring = Ring::parse(field(j, "ring").get<std::string>());
  Group group = j.contains("group") ? group_from_json(j["group"]) : Group::trivial();
  const Json& deg = field(j, "degrees");
  if (!deg.is_array() || deg.size() != 2) throw FormatError("degrees must be [lo, hi]");
  int lo = int(parse_int(deg[0])), hi = int(parse_int(deg[1]));
  GComplex x(ring, group, lo, hi);
  const Json& basis = field(j, "basis");
  if (basis.size() != std::size_t(hi - lo + 1)) throw FormatError("basis must list every degree in [lo, hi]");
  for (int d = lo; d <= hi; ++d) x.set_basis(d, basis[d - lo].get<std::vector<std::string>>());
  if (j.contains("diff")) {
    const Json& diff = j["diff"];
    if (diff.size() != std::size_t(hi - lo)) throw FormatError("diff must list d = lo+1..hi");
    for (int d = lo + 1; d <= hi; ++d) x.set_diff(d, matrix_from_json(diff[d - lo - 1]));
  }
  if (j.contains("action"))
    for (auto& [label, per] : j["action"].items()) {
      int e = group.find(label);
      auto& gens = group.generators();
      auto it = std::find(gens.begin(), gens.end(), e);
      if (it == gens.end()) throw FormatError("action given for a non-generator '" + label + "'");
      if (per.size() != std::size_t(hi - lo + 1)) throw FormatError("action must list every degree");
      for (int d = lo; d <= hi; ++d) x.set_action(std::size_t(it - gens.begin()), d, matrix_from_json(per[d - lo]));
    }
  if (j.contains("valid")) x.set_valid_window(int(parse_int(j["valid"][0])), int(parse_int(j["valid"][1])));
  try {
    x.validate();
  } catch (const InvalidComplex& e) {
    throw FormatError(std::string("invalid complex: ") + e.what());
  }
  return x;
}

Json symseq_to_json(const SymSeq& x) {
  Json comps = Json::object();
  for (int r : x.arities()) {
    Json c = gcomplex_to_json(*x.get(r));
    c.erase("version");
    comps[std::to_string(r)] = c;
  }
  const auto& p = x.policy();
  Json out{{"version", kFormatVersion},
           {"ring", x.ring().name()},
           {"window", {{"r_max", p.r_max}, {"d_min", p.d_min}, {"d_max", p.d_max}}},
           {"components", comps}};
  if (x.truncated()) out["truncated"] = true;
  return out;
}

SymSeq symseq_from_json(const Json& j) {
  require_version(j);
  Ring ring = Ring::parse(field(j, "ring").get<std::string>());
  const Json& w = field(j, "window");
  TruncationPolicy pol{int(parse_int(field(w, "r_max"))), int(parse_int(field(w, "d_min"))),
                       int(parse_int(field(w, "d_max"))), OverflowMode::Error};
  SymSeq x(ring, pol);
  if (j.contains("components"))
    for (auto& [key, c] : j["components"].items()) {
      Json cj = c;
      cj["version"] = kFormatVersion;
      if (!cj.contains("ring")) cj["ring"] = ring.name();
      x.set(int(parse_int(Json(key))), gcomplex_from_json(cj));
    }
  return x;
}

Json simplicial_set_to_json(const SimplicialSet& s) {
  return Json{{"version", kFormatVersion},
              {"simplices", s.simplices},
              {"faces", s.face},
              {"degeneracies", s.degeneracy},
              {"basepoint", s.basepoint}};
}

Json homology_to_json(const HomologyGroup& h) {
  Json tors = Json::array();
  for (auto& t : h.torsion) tors.push_back(t.str());
  return Json{{"rank", std::to_string(h.rank)}, {"torsion", tors}};
}

Json check_report_to_json(const CheckReport& r) {
  Json inst = Json::object();
  for (auto& [k, v] : r.instances) inst[k] = v;
  return Json{{"object", r.object}, {"ok", r.ok()}, {"instances", inst},
              {"failure_count", r.failure_count}, {"failures", r.failures}};
}

SimplicialSet sd_bar_simplicial_set(const SdBarCom& x) {
  SimplicialSet s;
  int top = x.d_max();
  s.simplices.resize(top + 1);
  s.face.resize(top + 1);
  s.degeneracy.resize(top + 1);
  s.basepoint.assign(top + 1, 0);
  auto idx = [&](const std::optional<NestedChain>& c) { return c ? int(*x.index(*c)) + 1 : 0; };
  for (int n = 0; n <= top; ++n) {
    s.simplices[n].push_back("*");
    for (auto& c : x.simplices(n)) s.simplices[n].push_back(nested_str(c));
  }
  for (int n = 1; n <= top; ++n)
    for (int i = 0; i <= n; ++i) {
      std::vector<int> f{0};
      for (auto& c : x.simplices(n)) f.push_back(idx(face(c, i)));
      s.face[n].push_back(std::move(f));
    }
  for (int n = 0; n < top; ++n)
    for (int j = 0; j <= n; ++j) {
      std::vector<int> g{0};
      for (auto& c : x.simplices(n)) g.push_back(idx(degeneracy(c, j)));
      s.degeneracy[n].push_back(std::move(g));
    }
  return s;
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw FormatError("cannot read '" + path + "'");
  try {
    return Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw FormatError("'" + path + "' is not valid JSON: " + e.what());
  }
}

void write_file_atomic(const std::string& path, const std::string& text) {
  std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw FormatError("cannot write '" + path + "'");
    out << text;
    if (!out.flush()) throw FormatError("cannot write '" + path + "'");
  }
  if (std::rename(tmp.c_str(), path.c_str()) != 0) {
    std::remove(tmp.c_str());
    throw FormatError("cannot write '" + path + "'");
  }
}

}  // namespace opcalc
