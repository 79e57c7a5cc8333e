#include <fstream>
#include <sstream>
#include <vector>

#include "doctest.h"
#include "qforge/cli/cli.hpp"
#include "qforge/error.hpp"
#include "qforge/forge/registry.hpp"

using namespace qforge;
using namespace qforge::cli;

namespace {

struct Invocation {
  int code;
  std::string out, err;
};

Invocation invoke(std::vector<std::string> args) {
  args.insert(args.begin(), "qforge");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  int code = run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

nlohmann::json report(const Invocation& inv) { return nlohmann::json::parse(inv.out); }

}  // namespace

TEST_CASE("verify sv1 over the 7x7 grid passes all 49 cells") {
  auto inv = invoke({"verify", "--identity", "sv1", "--grid", "M=0..6,N=0..6", "--q", "1/2", "--mode", "exact"});
  CHECK(inv.code == 0);
  auto j = report(inv);
  CHECK(j["summary"]["total"] == 49);
  CHECK(j["summary"]["passed"] == 49);
  CHECK(j["cases"][8]["case"]["M"] == "1");
  CHECK(j["cases"][8]["case"]["N"] == "1");
  CHECK(j["cases"].back()["index"] == 48);
}

TEST_CASE("normalize 0,0,0,2") {
  auto inv = invoke({"normalize", "--shift", "0,0,0,2"});
  CHECK(inv.code == 0);
  auto j = report(inv);
  CHECK(j["result"]["rep"] == "0,2,2,0");
  CHECK(j["result"]["word"].get<std::string>() != "id");
}

TEST_CASE("derive 0,1,1,0 against the table") {
  auto inv = invoke({"derive", "--shift", "0,1,1,0", "--check-against-table"});
  CHECK(inv.code == 0);
  auto j = report(inv);
  CHECK(j["summary"]["passed"] == 2);
  CHECK(j["result"]["R"] == "((-1)*a*c + a)/(a + (-1)*c)");

  auto off = invoke({"derive", "--shift", "0,0,0,1", "--check-against-table"});
  CHECK(off.code == 1);
  CHECK(report(off)["summary"]["errored"] == 1);
}

TEST_CASE("exit codes") {
  CHECK(invoke({}).code == 2);
  CHECK(invoke({"verify"}).code == 2);
  CHECK(invoke({"verify", "--identity", "sv1", "--tol", "0"}).code == 2);
  CHECK(invoke({"verify", "--identity", "nope"}).code == 2);
  CHECK(invoke({"verify", "--identity", "sv1", "--grid", "M=2..1"}).code == 2);
  CHECK(invoke({"normalize", "--shift", "1,2,3"}).code == 2);
  CHECK(invoke({"conjecture", "--pattern", "nope", "--shift", "0,1,1,0"}).code == 2);
  CHECK(invoke({"verify", "--identity", "sv1", "--format", "xml"}).code == 2);
  auto usage = invoke({"verify", "--identity", "sv1", "--tol", "-1"});
  CHECK(usage.out.empty());
  CHECK_FALSE(usage.err.empty());

  // A case that cannot be evaluated is an error record, not a usage error.
  auto bad = invoke({"verify", "--identity", "sv1", "--grid", "M=0..0,N=1..1", "--q", "1"});
  CHECK(bad.code == 1);

  // A registry whose right-hand side is wrong fails its cases.
  nlohmann::json reg = forge::Registry::builtin().to_json();
  for (auto& rec : reg["identities"])
    if (rec["id"] == "sv1") rec["rhs"] = {{"lit", "2"}};
  const std::string path = "test_cli_registry.json";
  std::ofstream(path) << reg.dump();
  auto wrong = invoke({"verify", "--identity", "sv1", "--registry", path, "--grid", "M=0..1,N=0..1", "--q", "1/2"});
  CHECK(wrong.code == 1);
  CHECK(report(wrong)["summary"]["failed"] == 4);
  std::remove(path.c_str());
}

TEST_CASE("reports round-trip and are deterministic") {
  std::vector<std::vector<std::string>> requests{
      {"verify", "--identity", "sv4", "--grid", "N=0..4", "--q", "1/2,2/3"},
      {"verify", "--identity", "qgauss", "--bind", "a=1/3,b=1/5,c=1/70", "--q", "1/2"},
      {"pipeline", "--shift", "0,0,0,2", "--bind", "a=1/3,x=1/4", "--q", "1/2", "--n-max", "2", "--trials", "5"},
      {"conjecture", "--pattern", "balanced", "--shift", "1,1,2,0", "--trials", "5", "--n-max", "2"},
      {"normalize", "--shift", "3,-1,2,0"},
  };
  for (const auto& args : requests) {
    auto a = invoke(args);
    auto b = invoke(args);
    CHECK(a.out == b.out);
    auto doc = ReportDocument::from_json(report(a));
    CHECK(ReportDocument::from_json(doc.to_json()) == doc);
    CHECK(doc.to_json().dump(2) + "\n" == a.out);
    CHECK(doc.summary.total == static_cast<long>(doc.cases.size()));
    CHECK(doc.summary.passed + doc.summary.failed + doc.summary.errored == doc.summary.total);
  }
}

TEST_CASE("serial and parallel verification produce the same report") {
  auto par = invoke({"verify", "--identity", "sv3", "--grid", "M=0..4,N=0..4", "--q", "1/2,3/5"});
  auto ser = invoke({"verify", "--identity", "sv3", "--grid", "M=0..4,N=0..4", "--q", "1/2,3/5", "--serial"});
  auto jp = report(par), js = report(ser);
  CHECK(jp["cases"] == js["cases"]);
  CHECK(jp["summary"]["passed"] == 50);
}

TEST_CASE("text output and output files") {
  auto inv = invoke({"normalize", "--shift", "0,0,0,2", "--format", "text"});
  CHECK(inv.out.find("rep: 0,2,2,0") != std::string::npos);
  CHECK(inv.out.find("passed 1") != std::string::npos);
  const std::string path = "test_cli_out.json";
  auto file = invoke({"normalize", "--shift", "0,0,0,2", "--output", path});
  CHECK(file.out.empty());
  std::ifstream in(path);
  CHECK(nlohmann::json::parse(in)["result"]["rep"] == "0,2,2,0");
  std::remove(path.c_str());
}
