#include <sstream>

#include "doctest.h"

#include "cantrans/algebraic/roots.hpp"
#include "cantrans/cantor/cantor.hpp"
#include "cli.hpp"

using nlohmann::json;
using namespace cantrans;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
  json doc() const { return json::parse(out); }
};

Result run(std::vector<std::string> args) {
  std::ostringstream out, err;
  int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

int verify(const json& j) {
  std::ostringstream sink;
  return cli::verify_document(j, sink);
}

std::string root2_base() {
  auto d = algebraic::make_algebraic({Natural(-2), Natural(0), Natural(1)}, algebraic::RealBox{1, 2});
  return cantor::CantorBase::exact({algebraic::NumberField::make(d)->gen()}).to_json().dump();
}

}  // namespace

TEST_CASE("every emitted document verifies") {
  const std::vector<std::vector<std::string>> commands = {
      {"sequence", "--b", "10", "--n", "50"},
      {"scan", "--b", "10", "--lambda-max", "5", "--n0-max", "20", "--n-cap", "10000", "--cells"},
      {"scan", "--b", "7", "--lambda-max", "3", "--n0-max", "5", "--n-cap", "1000"},
      {"gelfond", "--b", "2", "--k", "3", "--m", "5", "--x", "10000"},
      {"gelfond", "--b", "2", "--k", "3", "--m", "5", "--x", "10000", "--a", "1", "--r", "2"},
      {"witness", "--b", "10", "--i", "1", "--L", "3"},
      {"witness", "--b", "12", "--i", "0", "--L", "1"},
      {"expand", "--base", "2,3", "--x", "1/5", "--n", "12"},
      {"periodicity", "--base", "2,3", "--x", "1/7"},
      {"periodicity", "--base", "2,3", "--random", "5", "--max-den", "30", "--seed", "4"},
      {"admissible", "--base", "2,3", "--digits", "0,1,1,0", "--horizon", "3"},
      {"pisot", "--poly=-1,-1,1", "--box", "1,2"},
      {"criterion", "--base", "10", "--omega", "3/2", "--M", "1", "--provenance", "asserted"},
      {"criterion", "--base", "2", "--automaton", "thue-morse", "--m", "3"},
      {"criterion", "--base", "12", "--b", "10", "--lambda-max", "3", "--n0-max", "10", "--n-cap", "5000"},
      {"alpha", "--b", "10", "--base", "12", "--bits", "64"},
  };
  for (const auto& c : commands) {
    CAPTURE(c[0]);
    auto r = run(c);
    REQUIRE(r.code == cli::exit_ok);
    auto j = r.doc();
    CHECK(j.contains("request"));
    CHECK(j["request"]["command"] == c[0]);
    CHECK(verify(j) == cli::exit_ok);
  }
}

TEST_CASE("tampered documents fail verification") {
  auto w = run({"witness", "--b", "10", "--i", "0", "--L", "7"}).doc();
  w["A"] = "12345";
  CHECK(verify(w) != cli::exit_ok);

  auto g = run({"gelfond", "--b", "10", "--k", "7", "--m", "4", "--x", "5000"}).doc();
  REQUIRE(g.contains("counts"));
  g["counts"][0][0] = g["counts"][0][0].get<long>() + 1;
  CHECK(verify(g) != cli::exit_ok);

  auto s = run({"scan", "--b", "5", "--lambda-max", "2", "--n0-max", "3", "--n-cap", "500", "--cells"}).doc();
  s["counterexamples"][0]["n"] = s["counterexamples"][0]["n"].get<long>() + 1;
  CHECK(verify(s) != cli::exit_ok);

  auto e = run({"expand", "--base", "2,3", "--x", "1/5", "--n", "6"}).doc();
  e["digits"][0] = 1;
  CHECK(verify(e) != cli::exit_ok);

  CHECK(verify(json{{"kind", "nothing-known"}}) != cli::exit_ok);
}

TEST_CASE("output is deterministic") {
  for (std::vector<std::string> c : {std::vector<std::string>{"scan", "--b", "9", "--lambda-max", "4", "--n0-max", "30",
                                                              "--n-cap", "20000", "--cells", "--workers", "3"},
                                     {"periodicity", "--base", "3,4/3", "--random", "8", "--seed", "9"},
                                     {"alpha", "--b", "10", "--base", "12", "--bits", "128"}}) {
    CHECK(run(c).out == run(c).out);
  }
  auto one = run({"scan", "--b", "9", "--lambda-max", "4", "--n0-max", "30", "--n-cap", "20000", "--cells", "--workers", "1"});
  auto many = run({"scan", "--b", "9", "--lambda-max", "4", "--n0-max", "30", "--n-cap", "20000", "--cells", "--workers", "4"});
  auto strip = [](json j) {
    j.erase("request");
    return j;
  };
  CHECK(strip(one.doc()) == strip(many.doc()));
}

TEST_CASE("lnzd prints a bare digit") {
  auto r = run({"lnzd", "--b", "10", "--n", "10"});
  CHECK(r.code == cli::exit_ok);
  CHECK(r.out == "8\n");
  CHECK(run({"lnzd", "--b", "10", "--n", "100000000000000000000"}).code == cli::exit_ok);
}

TEST_CASE("exit codes") {
  CHECK(run({}).code == cli::exit_usage);
  CHECK(run({"frobnicate"}).code == cli::exit_usage);
  CHECK(run({"lnzd", "--b", "10"}).code == cli::exit_usage);
  CHECK(run({"lnzd", "--b", "1", "--n", "5"}).code == cli::exit_usage);
  CHECK(run({"expand", "--base", "2,3", "--x", "not-a-number"}).code == cli::exit_usage);

  auto neg = run({"criterion", "--base", "12", "--b", "12", "--lambda-max", "2", "--n0-max", "5", "--n-cap", "1000"});
  CHECK(neg.code == cli::exit_negative);
  CHECK(neg.doc()["verdict"] == "rejected");
  CHECK(run({"criterion", "--base", root2_base(), "--omega", "3/2", "--M", "1"}).code == cli::exit_negative);

  auto und = run({"criterion", "--base", root2_base(), "--omega", "2", "--M", "0", "--cap", "256"});
  CHECK(und.code == cli::exit_undecided);
  CHECK(run({"witness", "--b", "3", "--i", "1", "--L", "1", "--cap", "2", "--u-candidates", "2"}).code ==
        cli::exit_undecided);
}
