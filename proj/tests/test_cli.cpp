#include <cstdio>
#include <filesystem>
#include <fstream>

#include "doctest.h"
#include "opcalc/cli.hpp"

using namespace opcalc;

namespace {

std::string temp_path(const std::string& name) {
  return (std::filesystem::temp_directory_path() / ("opcalc_test_" + name)).string();
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  out << text;
}

JobSpec job(std::string command, std::map<std::string, std::string> options, std::string ring = "z") {
  JobSpec j;
  j.command = std::move(command);
  j.options = std::move(options);
  j.ring = std::move(ring);
  return j;
}

GoldenTable table_of(const JobResult& r) { return GoldenTable::from_json(r.payload["table"]); }

std::string lookup(const GoldenTable& t, const GoldenKey& k) {
  auto it = t.entries().find(k);
  return it == t.entries().end() ? "absent" : it->second.homology;
}

}  // namespace

TEST_CASE("complex JSON round trip") {
  GComplex p = periodic_resolution(Ring::prime_field(2), 2, 4);
  Json j = gcomplex_to_json(p);
  CHECK(j["version"] == kFormatVersion);
  CHECK(j["group"]["name"] == "C2");
  // scalars are strings
  CHECK(j["diff"][0]["entries"][0][2].is_string());
  GComplex q = gcomplex_from_json(j);
  CHECK(gcomplex_to_json(q) == j);
  for (int d = 0; d <= 3; ++d) CHECK(homology(q, d) == homology(p, d));

  Json bad = j;
  bad.erase("version");
  CHECK_THROWS_AS(gcomplex_from_json(bad), FormatError);
  Json broken = j;
  broken["diff"][0]["entries"].push_back(Json::array({0, 0, "1"}));
  broken["diff"][1]["entries"].push_back(Json::array({0, 0, "1"}));
  CHECK_THROWS_AS(gcomplex_from_json(broken), FormatError);
  CHECK_THROWS_AS(matrix_from_json(Json{{"rows", 1}, {"cols", 1}, {"entries", {{3, 0, "1"}}}}), FormatError);

  // a group given by its table
  Group g = Group::product(Group::cyclic(2), Group::cyclic(2));
  GComplex f = free_module_complex(Ring::integers(), g, 0, 1);
  GComplex f2 = gcomplex_from_json(gcomplex_to_json(f));
  CHECK(f2.group() == g);
  CHECK(orbits(f2).dim(0) == 1);
}

TEST_CASE("golden table diffs") {
  GoldenTable a;
  a.add({"Surj", "z", 2, 0}, {"1", "h", ""});
  a.add({"Surj", "z", 2, 1}, {"0", "h", ""});
  GoldenTable b = GoldenTable::from_json(a.to_json());
  CHECK(diff_golden(a, b).empty());

  GoldenTable perturbed = b;
  perturbed.add({"Surj", "z", 2, 1}, {"0+Z/2", "h", ""});
  auto d = diff_golden(perturbed, a);
  REQUIRE(d.lines().size() == 1);
  CHECK(d.lines()[0] == "mismatch Surj/z/r=2/d=1: golden 0, current 0+Z/2");

  GoldenTable shorter;
  shorter.add({"Surj", "z", 2, 0}, {"1", "h", ""});
  auto m = diff_golden(shorter, a);
  CHECK(m.mismatched.empty());
  REQUIRE(m.missing.size() == 1);
  CHECK(m.lines()[0] == "missing Surj/z/r=2/d=1");
  CHECK(diff_golden(a, shorter).unexpected.size() == 1);

  // provenance does not take part in the comparison
  GoldenTable other;
  other.add({"Surj", "z", 2, 0}, {"1", "other", "note"});
  other.add({"Surj", "z", 2, 1}, {"0", "other", ""});
  CHECK(diff_golden(other, a).empty());

  Json dup = a.to_json();
  dup["entries"].push_back(dup["entries"][0]);
  CHECK_THROWS_AS(GoldenTable::from_json(dup), FormatError);
}

TEST_CASE("job specs") {
  JobSpec a = job("surj", {{"homology", "1"}});
  JobSpec b = a;
  b.output = "somewhere.json";
  CHECK(a.hash() == b.hash());
  b.seed = 1;
  CHECK(a.hash() != b.hash());
  CHECK(a.hash().size() == 16);
  CHECK_THROWS_AS(run(job("nope", {})), UsageError);
  CHECK_THROWS_AS(run(job("surj", {{"homology", "1"}}, "fp:4")), UsageError);
  CHECK_THROWS_AS(run(job("surj", {{"homology", "1"}, {"ranks", "1"}})), UsageError);
  CHECK_THROWS_AS(run(job("surj", {})), UsageError);
  CHECK_THROWS_AS(run(job("bar", {{"of", "nothing"}})), UsageError);
  CHECK_THROWS_AS(run(job("kd", {{"of", "com"}, {"arity", "x"}})), UsageError);
}

TEST_CASE("homology tables") {
  JobSpec s = job("surj", {{"homology", "1"}});
  s.r_max = 4;
  JobResult r = run(s);
  CHECK(r.ok);
  GoldenTable t = table_of(r);
  for (int a = 1; a <= 4; ++a) {
    CHECK(lookup(t, {"Surj", "z", a, 0}) == "1");
    CHECK(lookup(t, {"Surj", "z", a, 1}) == "0");
  }
  // byte-identical output for the same job
  CHECK(dump(run(s).payload) == dump(r.payload));

  GoldenTable kd = table_of(run(job("kd", {{"of", "surj-dual"}, {"arity", "3"}}, "q")));
  CHECK(lookup(kd, {"KD(Surj^dual)", "q", 3, -2}) == "2");
  CHECK(lookup(kd, {"KD(Surj^dual)", "q", 3, -1}) == "0");

  GoldenTable bar = table_of(run(job("bar", {{"of", "com"}, {"arity", "4"}}, "q")));
  CHECK(lookup(bar, {"Bar(Com^nu)", "q", 4, 3}) == "6");
  GoldenTable cobar = table_of(run(job("cobar", {{"of", "surj"}, {"arity", "3"}}, "q")));
  CHECK(lookup(cobar, {"Cobar(Surj)", "q", 3, -2}) == "2");
  CHECK(lookup(cobar, {"Cobar(Surj)", "q", 3, -1}) == "0");
  GoldenTable cbc = table_of(run(job("cobar", {{"of", "bar-com"}, {"arity", "3"}}, "q")));
  CHECK(lookup(cbc, {"Cobar(Bar(Com^nu))", "q", 3, 0}) == "1");

  JobSpec pl = job("plie", {{"homology", "1"}, {"arity", "2"}});
  GoldenTable plt = table_of(run(pl));
  CHECK(lookup(plt, {"Lie^pi", "z", 2, -1}) == "1");
  CHECK(lookup(plt, {"Lie^pi", "z", 2, -2}) == "0");
}

TEST_CASE("checks through the runner") {
  JobSpec c = job("check-operad", {{"of", "lie-s"}});
  c.r_max = 4;
  JobResult r = run(c);
  CHECK(r.ok);
  CHECK(r.payload["check"]["ok"] == true);
  JobSpec cc = job("check-cooperad", {{"of", "surj"}}, "fp:2");
  cc.r_max = 3;
  CHECK(run(cc).ok);
  JobSpec sc = job("surj", {{"check", "1"}});
  sc.r_max = 3;
  sc.d_max = 2;
  JobResult sr = run(sc);
  CHECK(sr.ok);
  CHECK(sr.payload["retraction"].size() == 2);
  JobSpec pc = job("plie", {{"check", "1"}});
  pc.r_max = 3;
  JobResult pr = run(pc);
  CHECK(pr.ok);
  CHECK(pr.payload["rule_c"]["mismatches"] == 0);
  JobSpec ranks = job("surj", {{"ranks", "1"}, {"arity", "3"}});
  ranks.d_max = 1;
  JobResult rr = run(ranks);
  CHECK(rr.payload["ranks"][1]["rank"] == "18");
  JobResult consts = run(job("plie", {{"constants", "1"}}));
  CHECK(consts.payload["compose"].size() > 0);
}

TEST_CASE("partition jobs") {
  JobResult p = run(job("partition", {{"poset", "3"}}));
  CHECK(p.payload["poset"]["elements"].size() == 5);
  CHECK(p.payload["poset"]["covers"].size() == 6);

  JobResult s = run(job("partition", {{"sdbar", "3"}, {"check", "1"}}));
  CHECK(s.ok);
  const Json& ss = s.payload["simplicial_set"];
  CHECK(ss["version"] == kFormatVersion);
  for (auto key : {"simplices", "faces", "degeneracies", "basepoint"}) CHECK(ss.contains(key));
  CHECK(ss["basepoint"][0] == 0);
  CHECK(s.payload["check"]["homology_matches_bar"] == true);

  JobResult d = run(job("partition", {{"dual-operad", "2"}, {"homology", "1"}}));
  CHECK(d.payload["normalized_ranks"][0] == "1");
  CHECK(d.payload["normalized_ranks"][1] == "2");
  GoldenTable t = table_of(d);
  CHECK(lookup(t, {"Lie^pi_Delta", "z", 2, -1}) == "1");
  CHECK(lookup(t, {"Lie^pi_Delta", "z", 2, 0}) == "0");
  CHECK_THROWS_AS(run(job("partition", {{"poset", "0"}})), UsageError);
}

TEST_CASE("file based jobs") {
  std::string cx = temp_path("complex.json");
  write_text(cx, dump(gcomplex_to_json(periodic_resolution(Ring::integers(), 2, 4))));
  JobSpec h = job("homology", {{"degree", "1"}});
  h.input = cx;
  JobResult hr = run(h);
  REQUIRE(hr.payload["homology"].size() == 1);
  CHECK(hr.payload["homology"][0]["rank"] == "0");
  CHECK(hr.payload["homology"][0]["degree"] == 1);
  h.options.clear();
  CHECK(run(h).payload["homology"].size() == 4);  // the top degree is truncated

  // X = trivial generator in arity 2, Y = R in arity 1: X ∘ Y has rank 1 in arity 2
  TruncationPolicy pol{3, 0, 0, OverflowMode::Error};
  std::string left = temp_path("left.json"), right = temp_path("right.json");
  write_text(left, dump(symseq_to_json(trivial_symseq(Ring::rationals(), pol, 2, 0))));
  write_text(right, dump(symseq_to_json(unit_symseq(Ring::rationals(), pol))));
  for (std::string mode : {"orbits", "invariants"}) {
    JobSpec c = job("compose", {{"mode", mode}, {"right", right}});
    c.input = left;
    JobResult cr = run(c);
    SymSeq out = symseq_from_json(cr.payload["result"]);
    CHECK(out.dim(2, 0) == 1);
  }
  JobSpec badmode = job("compose", {{"mode", "sideways"}, {"right", right}});
  badmode.input = left;
  CHECK_THROWS_AS(run(badmode), UsageError);

  // diff-golden on job outputs
  JobSpec s = job("surj", {{"homology", "1"}, {"arity", "3"}});
  std::string cur = temp_path("cur.json"), gold = temp_path("gold.json");
  write_text(cur, dump(run(s).payload));
  Json g = run(s).payload["table"];
  write_text(gold, dump(g));
  CHECK(run(job("diff-golden", {{"current", cur}, {"golden", gold}})).ok);
  g["entries"][0]["homology"] = "2";
  write_text(gold, dump(g));
  JobResult dr = run(job("diff-golden", {{"current", cur}, {"golden", gold}}));
  CHECK_FALSE(dr.ok);
  CHECK(dr.payload["diff"].size() == 1);

  std::string atomic = temp_path("atomic.json");
  write_file_atomic(atomic, "{}\n");
  CHECK(read_json_file(atomic) == Json::object());
  CHECK_FALSE(std::filesystem::exists(atomic + ".tmp"));
  CHECK_THROWS_AS(read_json_file(temp_path("does_not_exist.json")), FormatError);
  for (auto& f : {cx, left, right, cur, gold, atomic}) std::remove(f.c_str());
}

TEST_CASE("acceptance through the runner") {
  JobResult r = run(job("acceptance", {{"criterion", "10,8"}}));
  CHECK(r.ok);
  REQUIRE(r.payload["criteria"].size() == 2);
  CHECK(r.payload["criteria"][0]["id"] == 10);
  CHECK(r.lines[0].rfind("PASS [10]", 0) == 0);
  CHECK_THROWS(run(job("acceptance", {{"criterion", "11"}})));
}
