#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "attain/cli.hpp"

namespace fs = std::filesystem;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result run(std::vector<std::string> args) {
  args.insert(args.begin(), "attain");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = attain::cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::string write_temp(const std::string& name, const std::string& text) {
  const fs::path dir = fs::temp_directory_path() / "attain_cli_tests";
  fs::create_directories(dir);
  const fs::path path = dir / name;
  std::ofstream(path) << text;
  return path.string();
}

const std::string kShiftOnes = R"({"kind":"shift","strands":[{"limit":"1","approach":"exact"}]})";
const std::string kBelow =
    R"({"kind":"diagonal","strands":[{"limit":"1","approach":"below","amplitude":"1/2","ratio":"1/2"}]})";
const std::string kTwoLimits =
    R"({"kind":"diagonal","strands":[{"limit":"1","approach":"exact"},{"limit":"2","approach":"exact"}]})";
const std::string kDip =
    R"({"kind":"diagonal","strands":[{"limit":"1","approach":"exact"}],"overrides":{"1":"1/2","2":"1/4"}})";
const std::string kComposite = R"({"kind":"composite","alpha":"1",
  "k_diag":{"strands":[{"limit":"0","approach":"above","amplitude":"1","ratio":"1/2"}]},
  "f_terms":[{"coef":"-1/2","vector":{"1":"1","2":"1"}}]})";
const std::string kNotPositive = R"({"kind":"composite","alpha":"1",
  "k_diag":{"strands":[{"limit":"0","approach":"exact"}]},"f_terms":[{"coef":"-2","vector":{"1":"1"}}]})";

}  // namespace

TEST_CASE("classify prints the verdict and the shift branch") {
  const auto r = run({"classify", write_temp("shift_all_ones.json", kShiftOnes)});
  CHECK(r.code == 0);
  CHECK(r.out.rfind("AN: yes, α = 1, branch (i')(ii')\n", 0) == 0);
  CHECK(r.out.find("(ii')") != std::string::npos);
}

TEST_CASE("classify --json emits the report fields and round-trips byte-identically") {
  for (const auto& [name, text] : std::vector<std::pair<std::string, std::string>>{
           {"rt_shift.json", kShiftOnes}, {"rt_below.json", kBelow}, {"rt_two.json", kTwoLimits},
           {"rt_comp.json", kComposite}, {"rt_bad.json", kNotPositive}}) {
    CAPTURE(name);
    const auto r = run({"classify", write_temp(name, text), "--json"});
    REQUIRE(r.code == 0);
    const auto report = nlohmann::json::parse(r.out);
    for (const char* key : {"kind", "verdict", "alpha", "reason", "conditions", "witness", "checks"}) {
      CHECK(report.contains(key));
    }
    CHECK(report.dump(2) + "\n" == r.out);
  }
  const auto below = nlohmann::json::parse(run({"classify", write_temp("b.json", kBelow), "--json"}).out);
  CHECK(below["verdict"] == "NotAN");
  CHECK(below["alpha"] == "1");
  CHECK(below["witness"]["predicted_norms"][1] == "3/4");
  CHECK(below["reason"]["type"] == "InfinitelyManyBelowAlpha");
}

TEST_CASE("decompose prints alpha, F and the first K+ entries") {
  const auto r = run({"decompose", write_temp("dip.json", kDip), "--entries", "3"});
  CHECK(r.code == 0);
  CHECK(r.out.find("α = 1\n") != std::string::npos);
  CHECK(r.out.find("F values: {1 → -1/2, 2 → -3/4}") != std::string::npos);
  CHECK(r.out.find("  3  0\n") != std::string::npos);

  const auto refused = run({"decompose", write_temp("b2.json", kBelow)});
  CHECK(refused.code == 1);
  CHECK(refused.err.find("not AN") != std::string::npos);
}

TEST_CASE("witness prints predicted norms and the unattained supremum") {
  const auto r = run({"witness", write_temp("below_strand.json", kBelow), "--pairs", "3"});
  CHECK(r.code == 0);
  CHECK(r.out.find("predicted norms: 1/2, 3/4, 7/8\n") != std::string::npos);
  CHECK(r.out.find("sup 1 (not attained)") != std::string::npos);

  const auto pairs = run({"witness", write_temp("two.json", kTwoLimits), "--pairs", "2"});
  CHECK(pairs.out.find("  1  2  1  2  3/2  5/7\n") != std::string::npos);

  // An AN operator has no witness, so witness and classify cannot contradict each other.
  CHECK(run({"witness", write_temp("ones.json", kShiftOnes)}).code == 1);
}

TEST_CASE("verify exit codes") {
  const auto two = run({"verify", write_temp("two_limits.json", kTwoLimits), "--sizes", "50"});
  CHECK(two.code == 0);
  CHECK(two.out.find("PASS witness escape at N=50") != std::string::npos);

  const auto dip = run({"verify", write_temp("dip2.json", kDip), "--sizes", "10,50"});
  CHECK(dip.code == 0);
  CHECK(dip.out.find("PASS decomposition identity") != std::string::npos);

  const auto shift = run({"verify", write_temp("shift2.json", kShiftOnes), "--sizes", "10,50,200"});
  CHECK(shift.code == 0);
  CHECK(shift.out.find("PASS |T| identity at N=200") != std::string::npos);

  const auto comp = run({"verify", write_temp("comp.json", kComposite)});
  CHECK(comp.code == 0);
  CHECK(comp.out.find("PASS eigenvalues below α at N=200") != std::string::npos);

  CHECK(run({"verify", write_temp("bad.json", kNotPositive), "--sizes", "10"}).code == 2);
}

TEST_CASE("spectrum writes an ascending CSV") {
  const std::string csv = (fs::temp_directory_path() / "attain_cli_tests" / "eig.csv").string();
  const auto r = run({"spectrum", write_temp("dip3.json", kDip), "--truncate", "4", "--csv", csv});
  CHECK(r.code == 0);
  CHECK(r.out.find("essential spectrum: {1}") != std::string::npos);
  CHECK(r.out.find("below 1: finite {1/4, 1/2}") != std::string::npos);
  std::ifstream in(csv);
  std::stringstream content;
  content << in.rdbuf();
  CHECK(content.str() == "index,eigenvalue\n1,0.25\n2,0.5\n3,1\n4,1\n");
}

TEST_CASE("usage and spec errors exit with 1") {
  CHECK(run({}).code == 1);
  CHECK(run({"classify"}).code == 1);
  CHECK(run({"bogus"}).code == 1);
  CHECK(run({"spectrum", write_temp("s.json", kDip)}).code == 1);
  const auto bad = run({"classify", write_temp("bad_ratio.json",
      R"({"kind":"diagonal","strands":[{"limit":"1","approach":"above","amplitude":"1","ratio":"3/2"}]})")});
  CHECK(bad.code == 1);
  CHECK(bad.err.find("ratio must lie in (0,1)") != std::string::npos);
  CHECK(run({"classify", "/nonexistent.json"}).code == 1);
  CHECK(run({"--help"}).code == 0);
}
