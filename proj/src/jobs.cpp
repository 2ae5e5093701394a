#include <functional>
#include <memory>
#include <sstream>

#include "opcalc/acceptance.hpp"
#include "opcalc/cli.hpp"
#include "opcalc/koszul.hpp"
#include "opcalc/lie.hpp"
#include "opcalc/partition.hpp"
#include "opcalc/surjections.hpp"
#include "opcalc/trees.hpp"

namespace opcalc {

// ---- JobSpec ----------------------------------------------------------------

std::string JobSpec::option(const std::string& key, const std::string& fallback) const {
  auto it = options.find(key);
  return it == options.end() ? fallback : it->second;
}

int JobSpec::int_option(const std::string& key, int fallback) const {
  auto it = options.find(key);
  if (it == options.end()) return fallback;
  try {
    std::size_t used = 0;
    int v = std::stoi(it->second, &used);
    if (used == it->second.size()) return v;
  } catch (const std::exception&) {
  }
  throw UsageError("--" + key + " expects an integer, got '" + it->second + "'");
}

Json JobSpec::to_json() const {
  Json opts = Json::object();
  for (auto& [k, v] : options) opts[k] = v;
  auto opt_int = [](const std::optional<int>& x) { return x ? Json(*x) : Json(nullptr); };
  return Json{{"command", command}, {"ring", ring},      {"r_max", opt_int(r_max)},
              {"d_min", opt_int(d_min)}, {"d_max", opt_int(d_max)}, {"seed", std::to_string(seed)},
              {"input", input},     {"options", opts}};
}

std::string JobSpec::hash() const {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : to_json().dump()) {
    h ^= c;
    h *= 1099511628211ull;
  }
  std::ostringstream os;
  os << std::hex;
  os.width(16);
  os.fill('0');
  os << h;
  return os.str();
}

// ---- golden tables -----------------------------------------------------------

std::string GoldenKey::str() const {
  return object + "/" + ring + "/r=" + std::to_string(arity) + "/d=" + std::to_string(degree);
}

Json GoldenTable::to_json() const {
  Json entries = Json::array();
  for (auto& [k, e] : entries_)
    entries.push_back(Json{{"object", k.object},
                           {"ring", k.ring},
                           {"arity", k.arity},
                           {"degree", k.degree},
                           {"homology", e.homology},
                           {"job", e.job},
                           {"note", e.note}});
  return Json{{"version", kFormatVersion}, {"entries", entries}};
}

GoldenTable GoldenTable::from_json(const Json& j) {
  if (!j.contains("version") || j["version"] != kFormatVersion) throw FormatError("golden table: missing or unsupported version");
  if (!j.contains("entries") || !j["entries"].is_array()) throw FormatError("golden table: missing entries");
  GoldenTable t;
  for (auto& e : j["entries"]) {
    try {
      GoldenKey k{e.at("object").get<std::string>(), e.at("ring").get<std::string>(), e.at("arity").get<int>(),
                  e.at("degree").get<int>()};
      if (t.entries_.count(k)) throw FormatError("golden table: duplicate key " + k.str());
      t.entries_[k] = GoldenEntry{e.at("homology").get<std::string>(), e.value("job", ""), e.value("note", "")};
    } catch (const Json::exception& ex) {
      throw FormatError(std::string("golden table: malformed entry: ") + ex.what());
    }
  }
  return t;
}

std::vector<std::string> GoldenDiff::lines() const {
  std::vector<std::string> out;
  for (auto& k : missing) out.push_back("missing " + k);
  for (auto& k : unexpected) out.push_back("unexpected " + k);
  for (auto& m : mismatched) out.push_back("mismatch " + m);
  return out;
}

GoldenDiff diff_golden(const GoldenTable& current, const GoldenTable& golden) {
  GoldenDiff d;
  for (auto& [k, g] : golden.entries()) {
    auto it = current.entries().find(k);
    if (it == current.entries().end())
      d.missing.push_back(k.str());
    else if (it->second.homology != g.homology)
      d.mismatched.push_back(k.str() + ": golden " + g.homology + ", current " + it->second.homology);
  }
  for (auto& [k, c] : current.entries())
    if (!golden.entries().count(k)) d.unexpected.push_back(k.str());
  return d;
}

// ---- registries ----------------------------------------------------------------

namespace {

using Window2 = std::pair<int, int>;

// An operad by name with its degree bounds (for bar constructions) and the default
// degree window of check-operad.
struct OperadEntry {
  std::unique_ptr<DgOperad> op;
  int lo, hi;
  Window2 check;
  bool concentrated() const { return lo == 0 && hi == 0; }
};

struct CooperadEntry {
  std::shared_ptr<const DgCooperad> op;
  int lo, hi;
  std::function<Window2(int)> cobar_window;
  Window2 check;
};

const std::vector<std::string> kOperads{"com", "ass", "lie", "lambda", "lie-s", "surj-dual", "plie", "linfty"};
const std::vector<std::string> kCooperads{"surj", "cocom", "bar-com"};

std::string joined(const std::vector<std::string>& v) {
  std::string s;
  for (auto& x : v) s += (s.empty() ? "" : ", ") + x;
  return s;
}

OperadEntry make_operad(const std::string& name) {
  if (name == "com") return {std::make_unique<ComNu>(), 0, 0, {0, 0}};
  if (name == "ass") return {std::make_unique<AssOperad>(), 0, 0, {0, 0}};
  if (name == "lie") return {std::make_unique<LieOperad>(), 0, 0, {0, 0}};
  if (name == "lambda") return {std::make_unique<LambdaOperad>(), 1 - kMaxLieArity, 0, {-4, 0}};
  if (name == "lie-s") return {std::make_unique<LieSOperad>(), 1 - kMaxLieArity, 0, {-4, 0}};
  if (name == "surj-dual") return {std::make_unique<PdSurjOperad>(), -kUnbounded, 0, {-3, 0}};
  if (name == "plie") return {std::make_unique<SpectralPartitionLie>(), -kUnbounded, 0, {-4, -1}};
  if (name == "linfty") return {std::make_unique<PartitionLInfty>(), -kUnbounded, -1, {-4, -1}};
  throw UsageError("unknown operad '" + name + "' (one of: " + joined(kOperads) + ")");
}

CooperadEntry make_cooperad(const std::string& name) {
  if (name == "surj")
    return {std::make_shared<SurjCooperad>(), 0, kUnbounded, [](int r) { return Window2{1 - r, 3 - r}; }, {0, 3}};
  // coCom and Bar(Com^nu) refer to a Com^nu that outlives them
  static const ComNu com;
  if (name == "cocom")
    return {std::make_shared<TransposeCooperad>(com, 0, 0), 0, 0, [](int r) { return Window2{1 - r, -1}; }, {0, 0}};
  if (name == "bar-com")
    return {std::make_shared<BarCooperad>(com, 0, 0), 0, kUnbounded, [](int) { return Window2{0, 2}; }, {0, 3}};
  throw UsageError("unknown cooperad '" + name + "' (one of: " + joined(kCooperads) + ")");
}

Ring job_ring(const JobSpec& job) {
  try {
    return Ring::parse(job.ring);
  } catch (const std::exception& e) {
    throw UsageError(e.what());
  }
}

// Arities of a table job: --arity r alone, else first..--arity-max.
std::vector<int> job_arities(const JobSpec& job, int first, int default_max) {
  if (job.has("arity")) {
    int r = job.int_option("arity", 0);
    if (r < first) throw UsageError("--arity must be at least " + std::to_string(first));
    return {r};
  }
  int hi = job.r_max.value_or(default_max);
  if (hi < first) throw UsageError("--arity-max must be at least " + std::to_string(first));
  if (hi > 8) throw UsageError("--arity-max above 8 is out of reach");
  std::vector<int> out;
  for (int r = first; r <= hi; ++r) out.push_back(r);
  return out;
}

Window2 job_window(const JobSpec& job, Window2 def) {
  Window2 w{job.d_min.value_or(def.first), job.d_max.value_or(def.second)};
  if (w.first > w.second) throw UsageError("--degree-min exceeds --degree-max");
  return w;
}

Json base_payload(const JobSpec& job) {
  return Json{{"version", kFormatVersion}, {"job", job.to_json()}, {"job_hash", job.hash()}};
}

// Homology table of the arity components of an operad or cooperad.
template <class Obj>
JobResult homology_table(const JobSpec& job, const Obj& p, const std::string& object, int first_arity,
                         const std::function<Window2(int)>& window, int default_max) {
  Ring ring = job_ring(job);
  GoldenTable t;
  JobResult res;
  std::string note = job.command + (job.has("of") ? " --of " + job.option("of") : "");
  for (int r : job_arities(job, first_arity, default_max)) {
    auto [lo, hi] = job_window(job, window(r));
    auto hs = component_homology(p, r, lo, hi, ring);
    std::string line = object + "(" + std::to_string(r) + ") over " + ring.name() + ":";
    for (int d = lo; d <= hi; ++d) {
      const HomologyGroup& h = hs[std::size_t(d - lo)];
      t.add({object, ring.name(), r, d}, {h.str(), job.hash(), note});
      if (!h.is_zero()) line += " H" + std::to_string(d) + "=" + h.str();
    }
    res.lines.push_back(line);
  }
  res.payload = base_payload(job);
  res.payload["table"] = t.to_json();
  return res;
}

Json check_payload(JobResult& res, const CheckReport& rep) {
  res.ok = res.ok && rep.ok();
  res.lines.push_back(rep.summary());
  return check_report_to_json(rep);
}

// exactly one of the given switches
std::string pick_mode(const JobSpec& job, const std::vector<std::string>& modes) {
  std::string found;
  for (auto& m : modes)
    if (job.has(m)) {
      if (!found.empty()) throw UsageError("--" + found + " and --" + m + " are exclusive");
      found = m;
    }
  if (found.empty()) {
    std::string all;
    for (auto& m : modes) all += (all.empty() ? "--" : ", --") + m;
    throw UsageError(job.command + " needs one of " + all);
  }
  return found;
}

// ---- subcommands ---------------------------------------------------------------

JobResult run_homology(const JobSpec& job) {
  if (job.input.empty()) throw UsageError("homology needs --input");
  GComplex x = gcomplex_from_json(read_json_file(job.input));
  int lo = x.valid_min(), hi = x.valid_max();
  if (job.has("degree")) lo = hi = job.int_option("degree", 0);
  JobResult res;
  res.payload = base_payload(job);
  Json results = Json::array();
  for (int d = lo; d <= hi; ++d) {
    HomologyGroup h = homology(x, d);
    Json e = homology_to_json(h);
    e["degree"] = d;
    results.push_back(e);
    res.lines.push_back("H" + std::to_string(d) + " = " + h.str() + " over " + x.ring().name());
  }
  res.payload["ring"] = x.ring().name();
  res.payload["homology"] = results;
  return res;
}

JobResult run_compose(const JobSpec& job) {
  std::string mode = job.option("mode");
  if (mode != "orbits" && mode != "invariants") throw UsageError("--mode must be orbits or invariants");
  if (job.input.empty() || !job.has("right")) throw UsageError("compose needs --input (left) and --right");
  SymSeq x = symseq_from_json(read_json_file(job.input));
  SymSeq y = symseq_from_json(read_json_file(job.option("right")));
  SymSeq c = compose(x, y, mode == "orbits" ? ComposeMode::Orbits : ComposeMode::Invariants);
  JobResult res;
  res.payload = base_payload(job);
  res.payload["result"] = symseq_to_json(c);
  for (int r : c.arities()) {
    std::string line = "arity " + std::to_string(r) + ":";
    for (int d = c.policy().d_min; d <= c.policy().d_max; ++d)
      if (c.dim(r, d)) line += " dim_" + std::to_string(d) + "=" + std::to_string(c.dim(r, d));
    res.lines.push_back(line);
  }
  if (c.truncated()) res.lines.push_back("result truncated to the window");
  return res;
}

JobResult run_surj(const JobSpec& job) {
  std::string mode = pick_mode(job, {"ranks", "check", "homology"});
  SurjCooperad s;
  if (mode == "homology") return homology_table(job, s, "Surj", 1, [](int) { return Window2{0, 2}; }, 4);
  JobResult res;
  res.payload = base_payload(job);
  auto [lo, hi] = job_window(job, {0, 3});
  if (lo < 0) throw UsageError("Surj lives in degrees >= 0");
  if (mode == "ranks") {
    Json ranks = Json::array();
    for (int r : job_arities(job, 1, 5)) {
      std::string line = "Surj(" + std::to_string(r) + "):";
      for (int d = lo; d <= hi; ++d) {
        std::size_t n = s.dim(r, d);
        ranks.push_back(Json{{"arity", r}, {"degree", d}, {"rank", std::to_string(n)}});
        line += " " + std::to_string(n);
      }
      res.lines.push_back(line);
    }
    res.payload["ranks"] = ranks;
    return res;
  }
  Ring ring = job_ring(job);
  int r_max = job.r_max.value_or(4);
  res.payload["check"] = check_payload(res, check_cooperad(s, {r_max, lo, hi}, ring));
  Json ret = Json::array();
  for (int r = 2; r <= r_max; ++r) {
    std::string why;
    bool ok = verify_retraction(s, retraction_homotopy(s, r, std::max(hi, 1)), ring, &why);
    res.ok = res.ok && ok;
    ret.push_back(Json{{"arity", r}, {"ok", ok}, {"failure", why}});
    res.lines.push_back("retraction r=" + std::to_string(r) + (ok ? ": ok" : ": FAIL " + why));
  }
  res.payload["retraction"] = ret;
  return res;
}

JobResult run_plie(const JobSpec& job) {
  std::string mode = pick_mode(job, {"constants", "check", "homology"});
  SpectralPartitionLie plie;
  if (mode == "homology") return homology_table(job, plie, "Lie^pi", 1, [](int r) { return Window2{-1 - r, 1 - r}; }, 4);
  JobResult res;
  res.payload = base_payload(job);
  int r_max = job.r_max.value_or(3);
  // Surj-degree window of the factors
  auto [ulo, uhi] = job_window(job, {0, 1});
  if (ulo < 0) throw UsageError("Surj degrees are >= 0");
  if (mode == "constants") {
    Json basis = Json::array(), comps = Json::array();
    for (int r = 1; r <= r_max; ++r)
      for (int u = ulo; u <= uhi; ++u) {
        int d = (1 - r) - u;
        std::vector<std::string> labels;
        for (std::uint32_t i = 0; i < plie.dim(r, d); ++i) labels.push_back(plie.label(r, d, i));
        basis.push_back(Json{{"arity", r}, {"degree", d}, {"labels", labels}});
      }
    for (int r = 1; r <= r_max; ++r)
      for (int s = 1; r + s - 1 <= r_max; ++s)
        for (int u = ulo; u <= uhi; ++u)
          for (int v = ulo; v <= uhi; ++v) {
            int d1 = (1 - r) - u, d2 = (1 - s) - v;
            for (int k = 1; k <= r; ++k) {
              ZMatrix m = composition_matrix(plie, r, d1, k, s, d2);
              m.canonicalize();
              comps.push_back(Json{{"r", r}, {"k", k}, {"s", s}, {"d1", d1}, {"d2", d2}, {"matrix", matrix_to_json(m)}});
            }
          }
    res.payload["basis"] = basis;
    res.payload["compose"] = comps;
    res.lines.push_back(std::to_string(comps.size()) + " composition matrices for arity <= " + std::to_string(r_max));
    return res;
  }
  Ring ring = job_ring(job);
  res.payload["check"] = check_payload(res, check_operad(plie, {r_max, -r_max - uhi, 0}, ring));
  std::size_t compared = 0, bad = 0;
  for (int r = 1; r <= r_max; ++r)
    for (int s = 1; r + s - 1 <= r_max; ++s)
      for (int u = ulo; u <= uhi; ++u)
        for (int v = ulo; v <= uhi; ++v) {
          int d1 = (1 - r) - u, d2 = (1 - s) - v;
          for (std::uint32_t a = 0; a < plie.dim(r, d1); ++a)
            for (std::uint32_t b = 0; b < plie.dim(s, d2); ++b)
              for (int k = 1; k <= r; ++k) {
                ++compared;
                if (!equal_in(rule_c_compose(plie, r, d1, a, k, s, d2, b), plie.compose(r, d1, a, k, s, d2, b), ring)) ++bad;
              }
        }
  res.ok = res.ok && bad == 0;
  res.payload["rule_c"] = Json{{"compared", compared}, {"mismatches", bad}};
  res.lines.push_back("rule (c) against the tensor composition: " + std::to_string(compared) + " compared, " +
                      std::to_string(bad) + " mismatches");
  return res;
}

JobResult run_partition(const JobSpec& job) {
  std::string mode = pick_mode(job, {"poset", "sdbar", "dual-operad"});
  int r = job.int_option(mode, 0);
  if (r < 1 || r > 6) throw UsageError("--" + mode + " expects an arity in 1..6");
  Ring ring = job_ring(job);
  JobResult res;
  res.payload = base_payload(job);
  if (mode == "poset") {
    PartitionPoset p = partition_poset(r);
    std::vector<std::string> els;
    for (auto& x : p.elements) els.push_back(partition_str(x));
    res.payload["poset"] = Json{{"arity", r}, {"elements", els}, {"covers", p.covers}, {"bottom", p.bottom}, {"top", p.top}};
    res.lines.push_back("P_" + std::to_string(r) + ": " + std::to_string(els.size()) + " partitions, " +
                        std::to_string(p.covers.size()) + " covers");
    return res;
  }
  int top = job.d_max.value_or(std::min(r, 3));
  if (top < 0) throw UsageError("--degree-max must be >= 0");
  if (mode == "sdbar") {
    SdBarCom sd(r, top);
    SimplicialSet ss = sd_bar_simplicial_set(sd);
    res.payload["simplicial_set"] = simplicial_set_to_json(ss);
    std::string line = "sdBar(" + std::to_string(r) + ") through level " + std::to_string(top) + ":";
    for (int n = 0; n <= top; ++n) line += " " + std::to_string(sd.simplices(n).size());
    res.lines.push_back(line + " simplices");
    if (job.has("check")) {
      bool simplicial = true;
      try {
        ss.validate();
      } catch (const InvalidComplex& e) {
        simplicial = false;
        res.lines.push_back(std::string("simplicial identities: FAIL ") + e.what());
      }
      res.ok = simplicial;
      Json check{{"simplicial_identities", simplicial}};
      check["cocomposition"] = check_payload(res, check_cocomposition(sd));
      GComplex x = SdBarCom(r, r).normalized(ring), b = bar_com_complex(r, ring);
      bool same = true;
      for (int d = 0; d <= r - 1; ++d) same = same && homology(x, d) == homology(b, d);
      res.ok = res.ok && same;
      check["homology_matches_bar"] = same;
      res.lines.push_back(std::string("H(sdBar) = H(Bar) over ") + ring.name() + (same ? ": yes" : ": NO"));
      res.payload["check"] = check;
    }
    return res;
  }
  SdBarCom sd(r, top);
  CosimplicialModule c = partition_lie_dual(sd, ring);
  std::vector<std::string> ranks;
  for (auto n : c.rank) ranks.push_back(std::to_string(n));
  res.payload["cosimplicial_ranks"] = ranks;
  GComplex n = normalize(c);
  std::vector<std::string> nranks;
  for (int d = 0; d >= n.d_min(); --d) nranks.push_back(std::to_string(n.dim(d)));
  res.payload["normalized_ranks"] = nranks;
  res.lines.push_back("Lie^pi_Delta(" + std::to_string(r) + "): normalised ranks from degree 0 down: " + joined(nranks));
  if (job.has("homology")) {
    GComplex full = partition_lie_dual_normalized(r, std::max(top, r), ring);
    GoldenTable t;
    std::string line = "H(Lie^pi_Delta(" + std::to_string(r) + ")) over " + ring.name() + ":";
    for (int d = 1 - r; d <= 0; ++d) {
      HomologyGroup h = homology(full, d);
      t.add({"Lie^pi_Delta", ring.name(), r, d}, {h.str(), job.hash(), "partition --dual-operad --homology"});
      if (!h.is_zero()) line += " H" + std::to_string(d) + "=" + h.str();
    }
    res.payload["table"] = t.to_json();
    res.lines.push_back(line);
  }
  return res;
}

JobResult run_bar(const JobSpec& job) {
  OperadEntry p = make_operad(job.option("of", "com"));
  require_reduced(*p.op, p.lo, p.hi);
  BarCooperad bar(*p.op, p.lo, p.hi);
  bool conc = p.concentrated();
  auto window = [conc](int r) { return conc ? Window2{0, r - 1} : Window2{r - 3, r - 1}; };
  return homology_table(job, bar, bar.name(), 2, window, 4);
}

JobResult run_cobar(const JobSpec& job) {
  CooperadEntry c = make_cooperad(job.option("of", "cocom"));
  require_coreduced(*c.op, c.lo, std::min(c.hi, 8));
  CobarOperad cobar(*c.op, c.lo, c.hi);
  return homology_table(job, cobar, "Cobar(" + c.op->name() + ")", 2, c.cobar_window, 4);
}

JobResult run_kd(const JobSpec& job) {
  OperadEntry p = make_operad(job.option("of", "com"));
  require_reduced(*p.op, p.lo, p.hi);
  KoszulDualOperad kd(*p.op, p.lo, p.hi);
  bool conc = p.concentrated();
  auto window = [conc](int r) { return conc ? Window2{1 - r, 0} : Window2{1 - r, 3 - r}; };
  return homology_table(job, kd, "KD(" + p.op->name() + ")", 2, window, 4);
}

JobResult run_check_operad(const JobSpec& job) {
  OperadEntry p = make_operad(job.option("of", "com"));
  auto [lo, hi] = job_window(job, p.check);
  JobResult res;
  res.payload = base_payload(job);
  res.payload["check"] = check_payload(res, check_operad(*p.op, {job.r_max.value_or(4), lo, hi}, job_ring(job)));
  return res;
}

JobResult run_check_cooperad(const JobSpec& job) {
  CooperadEntry c = make_cooperad(job.option("of", "surj"));
  auto [lo, hi] = job_window(job, c.check);
  JobResult res;
  res.payload = base_payload(job);
  res.payload["check"] = check_payload(res, check_cooperad(*c.op, {job.r_max.value_or(4), lo, hi}, job_ring(job)));
  return res;
}

JobResult run_acceptance(const JobSpec& job) {
  std::vector<int> ids;
  if (job.has("criterion") && !job.has("all")) {
    std::stringstream ss(job.option("criterion"));
    for (std::string tok; std::getline(ss, tok, ',');) {
      try {
        ids.push_back(std::stoi(tok));
      } catch (const std::exception&) {
        throw UsageError("--criterion expects numbers, got '" + tok + "'");
      }
      acceptance_title(ids.back());
    }
  } else {
    ids = acceptance_ids();
  }
  JobResult res;
  res.payload = base_payload(job);
  Json out = Json::array();
  for (int id : ids) {
    CriterionResult c = run_criterion(id);
    res.ok = res.ok && c.ok;
    res.lines.push_back(result_line(c));
    out.push_back(Json{{"id", c.id}, {"title", c.title}, {"ok", c.ok}, {"detail", c.detail}});
  }
  res.payload["criteria"] = out;
  res.payload["passed"] = res.ok;
  return res;
}

JobResult run_diff_golden(const JobSpec& job) {
  if (!job.has("current") || !job.has("golden")) throw UsageError("diff-golden needs --current and --golden");
  // Table jobs wrap their table in a payload; accept both shapes.
  auto load = [](const std::string& path) {
    Json j = read_json_file(path);
    return GoldenTable::from_json(j.contains("table") ? j["table"] : j);
  };
  GoldenDiff d = diff_golden(load(job.option("current")), load(job.option("golden")));
  JobResult res;
  res.payload = base_payload(job);
  res.payload["diff"] = d.lines();
  res.ok = d.empty();
  res.lines = d.lines();
  if (d.empty()) res.lines.push_back("no differences");
  return res;
}

}  // namespace

JobResult run(const JobSpec& job) {
  static const std::map<std::string, JobResult (*)(const JobSpec&)> table{
      {"homology", run_homology},   {"compose", run_compose},
      {"surj", run_surj},           {"plie", run_plie},
      {"partition", run_partition}, {"bar", run_bar},
      {"cobar", run_cobar},         {"kd", run_kd},
      {"check-operad", run_check_operad}, {"check-cooperad", run_check_cooperad},
      {"acceptance", run_acceptance}, {"diff-golden", run_diff_golden},
  };
  auto it = table.find(job.command);
  if (it == table.end()) throw UsageError("unknown command '" + job.command + "'");
  try {
    Ring::parse(job.ring);
  } catch (const std::exception& e) {
    throw UsageError(e.what());
  }
  return it->second(job);
}

}  // namespace opcalc
