#include "doctest.h"

#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"

#include "chainlab/chainspec.hpp"
#include "chainlab/cli_app.hpp"
#include "chainlab/generators.hpp"
#include "chainlab/report.hpp"
#include "chainlab/trees.hpp"

using namespace chainlab;

namespace {

std::vector<std::string> csv_fields(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          cur += '"';
          ++i;
        } else {
          quoted = false;
        }
      } else {
        cur += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  REQUIRE(bool(in));
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

int cli(std::initializer_list<const char*> args) {
  std::vector<const char*> argv = {"chainlab"};
  argv.insert(argv.end(), args.begin(), args.end());
  return run_cli(static_cast<int>(argv.size()), argv.data());
}

}  // namespace

TEST_CASE("decimal strings round trip exactly") {
  for (double v : {1.0 / 3.0, 0.1, 2.0 / 7.0, 1e-17, -0.725, 1.0, 0.0,
                   123456.789, 5e-324}) {
    const std::string s = format_decimal(v);
    CHECK(parse_decimal(s) == v);
  }
  CHECK(parse_decimal("0.25") == 0.25);
  CHECK_THROWS_AS(parse_decimal("0.25x"), ParseError);
  CHECK_THROWS_AS(parse_decimal(""), ParseError);
  CHECK_THROWS_AS(parse_decimal("1,5"), ParseError);
}

TEST_CASE("family specs parse with params and transforms") {
  const auto d = chain_from_json(
      R"({"family": "biased_cycle", "params": {"n": 6}, "transform": ["lazy"]})");
  CHECK(d.name == "biased_cycle");
  const auto want = lazy(biased_cycle<double>(6));
  CHECK((d.chain.kernel() - want.kernel()).cwiseAbs().maxCoeff() == 0.0);

  const auto rev = chain_from_json(
      R"({"family": "greasy_ladder", "params": {"n": 4}, "transform": "reverse"})");
  CHECK((rev.chain.kernel() - reversed_chain(greasy_ladder<double>(4)).kernel())
            .cwiseAbs()
            .maxCoeff() < 1e-15);

  const auto looped = chain_from_json(
      R"({"family": "cycle_walk", "params": {"n": 4}, "transform": [{"loop": 0.25}]})");
  CHECK(looped.chain(0, 0) == doctest::Approx(0.25));
}

TEST_CASE("matrix specs take decimal strings or numbers") {
  const auto d = chain_from_json(
      R"({"matrix": [["0.5", 0.5], ["0.25", "0.75"]], "name": "pair"})");
  CHECK(d.name == "pair");
  CHECK(d.chain(0, 0) == 0.5);
  CHECK(d.chain(1, 0) == 0.25);
}

TEST_CASE("tree specs build the weighted walk") {
  const auto d = chain_from_json(
      R"({"tree": {"edges": [[0, 1, "2"], [1, 2, 5]]}})");
  std::vector<TreeEdge<double>> edges = {{0, 1, 2.0}, {1, 2, 5.0}};
  const auto want = WeightedTree<double>(3, edges).walk();
  CHECK((d.chain.kernel() - want.kernel()).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("bad documents raise parse errors") {
  CHECK_THROWS_AS(chain_from_json("not json"), ParseError);
  CHECK_THROWS_AS(chain_from_json("{}"), ParseError);
  CHECK_THROWS_AS(chain_from_json(R"({"matrix": []})"), ParseError);
  CHECK_THROWS_AS(chain_from_json(R"({"matrix": [["0.5"], ["1.0"]]})"),
                  ParseError);
  CHECK_THROWS_AS(chain_from_json(R"({"matrix": [["a", "b"], ["c", "d"]]})"),
                  ParseError);
  CHECK_THROWS_AS(chain_from_json(R"({"family": "no_such_family"})"),
                  ParseError);
  CHECK_THROWS_AS(chain_from_json(R"({"family": "path_walk"})"), ParseError);
  CHECK_THROWS_AS(
      chain_from_json(
          R"({"family": "path_walk", "params": {"n": 3}, "transform": ["fold"]})"),
      ParseError);
  CHECK_THROWS_AS(chain_from_json(R"({"tree": {"edges": [[0, 1]]}})"),
                  ParseError);
}

TEST_CASE("kernels round trip through emitted json bit for bit") {
  for (auto mc : {random_reversible<double>(8, 3), greasy_ladder<double>(5),
                  random_dense<double>(6, 2),
                  loop_perturbation(biased_cycle<double>(5), 0.3)}) {
    const auto back = chain_from_json(chain_to_json(mc, "case"));
    CHECK(back.name == "case");
    CHECK((back.chain.kernel() - mc.kernel()).cwiseAbs().maxCoeff() == 0.0);
  }
}

TEST_CASE("shorthand covers families, params, and wrappers") {
  const auto d = chain_from_shorthand("greasy_ladder:n=6");
  CHECK(d.name == "greasy_ladder:n=6");
  CHECK((d.chain.kernel() - greasy_ladder<double>(6).kernel())
            .cwiseAbs()
            .maxCoeff() == 0.0);

  const auto two = chain_from_shorthand(" two_state : p=0.3 , q=0.7 ");
  CHECK(two.chain(0, 1) == 0.3);

  const auto wrapped = chain_from_shorthand("lazy(biased_cycle:n=6)");
  CHECK((wrapped.chain.kernel() - lazy(biased_cycle<double>(6)).kernel())
            .cwiseAbs()
            .maxCoeff() == 0.0);

  const auto nested = chain_from_shorthand("reverse(lazy(biased_cycle:n=5))");
  CHECK((nested.chain.kernel() -
         reversed_chain(lazy(biased_cycle<double>(5))).kernel())
            .cwiseAbs()
            .maxCoeff() < 1e-15);

  CHECK_THROWS_AS(chain_from_shorthand(""), ParseError);
  CHECK_THROWS_AS(chain_from_shorthand("path_walk:n"), ParseError);
  CHECK_THROWS_AS(chain_from_shorthand("path_walk:=3"), ParseError);
  CHECK_THROWS_AS(chain_from_shorthand("mystery:n=3"), ParseError);
}

TEST_CASE("argument resolution dispatches on shape") {
  const auto inline_json =
      resolve_chain_argument(R"(  {"family": "path_walk", "params": {"n": 3}})");
  CHECK(inline_json.chain.size() == 3);

  const std::string path = "/tmp/chainlab_io_case.json";
  {
    std::ofstream out(path);
    out << chain_to_json(cycle_walk<double>(5));
  }
  const auto from_file = resolve_chain_argument("@" + path);
  CHECK(from_file.chain.size() == 5);
  CHECK(from_file.name == path);
  std::remove(path.c_str());
  CHECK_THROWS_AS(resolve_chain_argument("@" + path), ParseError);

  const auto sh = resolve_chain_argument("cycle_walk:n=4");
  CHECK(sh.chain.size() == 4);
}

TEST_CASE("analyze fills every parameter with attainment flags") {
  const auto rep = analyze(cycle_walk<double>(4), "c4", {});
  CHECK(rep.n == 4);
  CHECK(rep.reversible);
  CHECK(rep.provenance.horizon == config::auto_horizon(4));

  std::map<std::string, ParamValue> by_key;
  for (const auto& p : rep.parameters) by_key[p.key] = p;
  // Periodic chain: one-time distances never fall, averaged ones do.
  CHECK_FALSE(by_key.at("t_mix").attained);
  CHECK(by_key.at("t_mix").value == -1.0);
  CHECK_FALSE(by_key.at("t_sep").attained);
  CHECK(by_key.at("t_mix_ave").attained);
  CHECK(by_key.at("t_mix_geo").attained);
  CHECK(by_key.at("t_mix_cesaro").attained);
  CHECK(by_key.at("t_stop").attained);
  // Exit frequencies from any start of the 4-cycle are (1, 1/4, 0, 1/4) up
  // to rotation, so the optimal stationary rule has mean 3/2.
  CHECK(by_key.at("t_stop").value == doctest::Approx(1.5));
  CHECK(by_key.at("t_hit").value == doctest::Approx(4.0));
  CHECK(by_key.at("t_prod").attained);
  CHECK(rep.inequalities.size() == 18);

  const auto quiet = analyze(cycle_walk<double>(4), "c4",
                             {.with_checks = false});
  CHECK(quiet.inequalities.empty());
}

TEST_CASE("json and csv renderings carry identical numbers") {
  std::vector<ParamReport> reps;
  reps.push_back(analyze(chain_from_shorthand("lazy(cycle_walk:n=6)").chain,
                         "lazy(cycle_walk:n=6)", {}));
  reps.push_back(analyze(greasy_ladder<double>(5), "greasy,5", {}));

  const auto doc = nlohmann::json::parse(reports_to_json(reps));
  REQUIRE(doc.size() == 2);

  std::stringstream csv(reports_to_csv(reps));
  std::string line;
  REQUIRE(std::getline(csv, line));
  const auto header = csv_fields(line);
  std::map<std::string, std::size_t> col;
  for (std::size_t i = 0; i < header.size(); ++i) col[header[i]] = i;

  for (const auto& jrep : doc) {
    REQUIRE(std::getline(csv, line));
    const auto row = csv_fields(line);
    REQUIRE(row.size() == header.size());
    CHECK(row[col.at("chain")] == jrep.at("chain").get<std::string>());
    for (const auto& p : jrep.at("parameters")) {
      const std::string key = p.at("key").get<std::string>();
      CHECK(parse_decimal(row[col.at("param." + key + ".value")]) ==
            p.at("value").get<double>());
      CHECK(row[col.at("param." + key + ".attained")] ==
            (p.at("attained").get<bool>() ? "true" : "false"));
    }
    for (const auto& c : jrep.at("inequalities")) {
      const std::string name = c.at("name").get<std::string>();
      CHECK(row[col.at("check." + name + ".status")] ==
            c.at("status").get<std::string>());
      if (c.contains("slack"))
        CHECK(parse_decimal(row[col.at("check." + name + ".slack")]) ==
              c.at("slack").get<double>());
      else
        CHECK(row[col.at("check." + name + ".slack")].empty());
    }
  }
}

TEST_CASE("family sweeps produce one report per size") {
  const auto reps = sweep_family("path_walk", "n", 3, 7, 2);
  REQUIRE(reps.size() == 3);
  CHECK(reps[0].chain == "path_walk:n=3");
  CHECK(reps[0].n == 3);
  CHECK(reps[2].n == 7);
  CHECK_THROWS_AS(sweep_family("path_walk", "n", 5, 3), ValidationError);
  CHECK_THROWS_AS(sweep_family("two_state", "n", 2, 3), ValidationError);
}

TEST_CASE("cli drives analyze, verify, and sweep") {
  const std::string out = "/tmp/chainlab_cli_out";

  CHECK(cli({"analyze", "greasy_ladder:n=4", "--output", out.c_str()}) == 0);
  auto doc = nlohmann::json::parse(slurp(out));
  CHECK(doc.at("chain") == "greasy_ladder:n=4");
  CHECK(doc.at("n") == 4);

  CHECK(cli({"analyze", "two_state:p=0.5,q=0.5", "--format", "csv",
             "--no-checks", "--output", out.c_str()}) == 0);
  std::stringstream csv(slurp(out));
  std::string header, row;
  REQUIRE(std::getline(csv, header));
  REQUIRE(std::getline(csv, row));
  CHECK(header.rfind("chain,n,reversible", 0) == 0);
  CHECK(csv_fields(row)[1] == "2");

  CHECK(cli({"verify", "two_state:p=0.3,q=0.7"}) == 0);
  CHECK(cli({"verify", "lazy(biased_cycle:n=5)", "--format", "csv",
             "--output", out.c_str()}) == 0);
  CHECK(slurp(out).rfind("chain,", 0) == 0);

  CHECK(cli({"sweep", "--family", "cycle_walk", "--from", "3", "--to", "5",
             "--output", out.c_str()}) == 0);
  std::stringstream sw(slurp(out));
  int lines = 0;
  for (std::string l; std::getline(sw, l);) ++lines;
  CHECK(lines == 4);

  CHECK(cli({"analyze", "mystery:n=3"}) == 1);
  CHECK(cli({"analyze", "@/tmp/definitely_missing_chain.json"}) == 1);
  CHECK(cli({"sweep", "--family", "two_state", "--from", "2", "--to", "3"}) ==
        1);
  CHECK(cli({"analyze"}) == 1);
  std::remove(out.c_str());
}
