#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "multispec/cli.hpp"
#include "multispec/emit.hpp"

using namespace multispec;
namespace fs = std::filesystem;

namespace {

const std::string kSpecs = MULTISPEC_SPEC_DIR;

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result run_cli(std::vector<std::string> args) {
  std::ostringstream out;
  std::ostringstream err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

fs::path scratch_dir(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("multispec_test_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

}  // namespace

TEST_CASE("rational cells") {
  Table t({"s", "m_s", "m_s_decimal"});
  std::vector<Cell> row{2LL};
  for (auto& c : rational_cells(Rational(1, 2))) row.push_back(c);
  t.add_row(row);
  CHECK(to_csv(t) == "s,m_s,m_s_decimal\n2,1/2,0.500000000000\n");
  CHECK_THROWS_AS(t.add_row({1LL}), std::invalid_argument);
}

TEST_CASE("empty table is header only") {
  CHECK(to_csv(Table({"i", "j", "w"})) == "i,j,w\n");
}

TEST_CASE("fields are quoted only when needed") {
  Table t({"walk", "note"});
  t.add_row({std::string("1_1,1_2,1_1"), std::string("say \"hi\"")});
  t.add_row({std::string("plain"), std::string("x")});
  CHECK(to_csv(t) == "walk,note\n\"1_1,1_2,1_1\",\"say \"\"hi\"\"\"\nplain,x\n");
}

TEST_CASE("reals") {
  CHECK(format_real(0.1) == "0.10000000000000001");
  CHECK(format_real(std::nan("")) == "nan");
  Table t({"x"});
  t.add_row({std::nan("")});
  RunManifest m;
  CHECK(to_json(t, m)["rows"][0]["x"].is_null());
}

TEST_CASE("json round trip of rationals") {
  std::mt19937_64 rng(5);
  Table t({"q", "q_decimal"});
  std::vector<Rational> values;
  for (int i = 0; i < 200; ++i) {
    Rational q(static_cast<long>(rng() % 2000001) - 1000000, static_cast<unsigned long>(rng() % 99999 + 1));
    q.canonicalize();
    q *= pow(Rational(7, 3), static_cast<unsigned>(rng() % 30));
    values.push_back(q);
    t.add_row(rational_cells(q));
  }
  RunManifest m;
  m.subcommand = "test";
  const auto doc = nlohmann::json::parse(to_json(t, m).dump());
  REQUIRE(doc["rows"].size() == values.size());
  for (std::size_t i = 0; i < values.size(); ++i) {
    CHECK(parse_rational(doc["rows"][i]["q"].get<std::string>()) == values[i]);
  }
  CHECK(doc["manifest"]["subcommand"] == "test");
}

TEST_CASE("manifest timestamp honors SOURCE_DATE_EPOCH") {
  setenv("SOURCE_DATE_EPOCH", "86400", 1);
  CHECK(manifest_timestamp() == "1970-01-02T00:00:00Z");
  unsetenv("SOURCE_DATE_EPOCH");
}

TEST_CASE("files, sidecar and unwritable paths") {
  const fs::path dir = scratch_dir("emit");
  Table t({"a"});
  t.add_row({1LL});
  RunManifest m;
  m.subcommand = "x";
  std::ostringstream sink;
  emit(t, m, OutputFormat::Csv, dir / "t.csv", sink);
  CHECK(sink.str().empty());
  CHECK(slurp(dir / "t.csv") == "a\n1\n");
  CHECK(nlohmann::json::parse(slurp(dir / "t.csv.manifest.json"))["subcommand"] == "x");
  emit(t, m, OutputFormat::Json, dir / "t.json", sink);
  CHECK(nlohmann::json::parse(slurp(dir / "t.json"))["rows"][0]["a"] == 1);
  CHECK_THROWS_AS(emit(t, m, OutputFormat::Csv, dir / "missing" / "t.csv", sink), OutputError);
}

TEST_CASE("cli: moments") {
  const auto r = run_cli({"moments", "--spec", kSpecs + "/bipartite.json", "--order", "8"});
  CHECK(r.code == cli::kExitOk);
  CHECK(r.out.rfind("s,m_s,m_s_decimal\n0,1/1,", 0) == 0);
  CHECK(r.out.find("\n2,1/2,0.500000000000\n") != std::string::npos);
  CHECK(r.out.find("\n4,1/1,1.00000000000\n") != std::string::npos);
  CHECK(r.out.find("\n8,") != std::string::npos);

  const auto j = run_cli({"moments", "--spec", kSpecs + "/bipartite.json", "--order", "2", "--json"});
  const auto doc = nlohmann::json::parse(j.out);
  CHECK(doc["rows"][2]["m_s"] == "1/2");
  CHECK(doc["manifest"]["subcommand"] == "moments");
  CHECK(doc["manifest"]["flags"]["order"] == "2");
  CHECK(doc["manifest"]["spec"]["alpha"][0] == "1/2");
  CHECK(doc["manifest"]["version"] == MULTISPEC_VERSION);
}

TEST_CASE("cli: validation errors exit 1") {
  auto r = run_cli({"moments", "--spec", kSpecs + "/disconnected.json"});
  CHECK(r.code == cli::kExitValidation);
  CHECK(r.err.find("gamma-disconnected") != std::string::npos);

  r = run_cli({"frobnicate"});
  CHECK(r.code == cli::kExitValidation);
  CHECK(r.err.find("unknown subcommand") != std::string::npos);

  r = run_cli({"moments", "--spec", kSpecs + "/no_such_file.json"});
  CHECK(r.code == cli::kExitValidation);
  CHECK(r.err.find("malformed") != std::string::npos);

  r = run_cli({"sample", "--spec", kSpecs + "/bipartite.json", "--n", "10", "--law", "gaussian"});
  CHECK(r.code == cli::kExitValidation);
  CHECK(r.err.find("law-mismatch") != std::string::npos);

  r = run_cli({"moments"});
  CHECK(r.code == cli::kExitValidation);
  CHECK(r.err.find("usage error") != std::string::npos);
}

TEST_CASE("cli: guards exit 2") {
  const auto r = run_cli({"oracle", "--spec", kSpecs + "/bipartite.json", "--order", "14"});
  CHECK(r.code == cli::kExitGuard);
  CHECK(r.err.find("guard") != std::string::npos);
  const auto v = run_cli({"verify", "--spec", kSpecs + "/bipartite.json", "--max-cluster", "9"});
  CHECK(v.code == cli::kExitGuard);
}

TEST_CASE("cli: oracle and verify") {
  auto r = run_cli({"oracle", "--spec", kSpecs + "/bipartite.json", "--order", "4", "--list-walks"});
  CHECK(r.code == 0);
  CHECK(r.out.find("\"1_1,1_2,1_1,1_2,1_1\",1/4,0.250000000000\n") != std::string::npos);

  r = run_cli({"oracle", "--spec", kSpecs + "/bipartite.json", "--order", "4"});
  CHECK(r.out.find("\n4,1/1,1.00000000000,6\n") != std::string::npos);

  r = run_cli({"verify", "--spec", kSpecs + "/bipartite.json", "--max-l", "4"});
  CHECK(r.code == 0);
  CHECK(r.out.find("all splitting identities hold") != std::string::npos);
}

TEST_CASE("cli: sample rows are 1-based") {
  const auto r = run_cli({"sample", "--spec", kSpecs + "/bipartite.json", "--n", "6", "--law", "rademacher",
                          "--seed", "3"});
  REQUIRE(r.code == 0);
  std::istringstream lines(r.out);
  std::string line;
  std::getline(lines, line);
  CHECK(line == "i,j,w");
  while (std::getline(lines, line)) {
    const int i = std::stoi(line.substr(0, line.find(',')));
    CHECK(i >= 1);
    CHECK(i <= 3);
  }
}

TEST_CASE("cli: carleman verdict") {
  const auto r = run_cli({"carleman", "--spec", kSpecs + "/bipartite.json"});
  CHECK(r.code == 0);
  CHECK(r.err.find("consistent with Carleman") != std::string::npos);
  CHECK(r.err.find("NOT") == std::string::npos);
}

TEST_CASE("cli: help lists defaults for every subcommand") {
  for (const char* sub : {"moments", "oracle", "verify", "sample", "converge", "correlator", "carleman"}) {
    const auto r = run_cli({sub, "--help"});
    CAPTURE(sub);
    CHECK(r.code == 0);
    CHECK(r.out.find("--spec") != std::string::npos);
  }
  CHECK(run_cli({"moments", "--help"}).out.find("[8]") != std::string::npos);
  CHECK(run_cli({"converge", "--help"}).out.find("[200]") != std::string::npos);
  CHECK(run_cli({"correlator", "--help"}).out.find("[400]") != std::string::npos);
  CHECK(run_cli({"verify", "--help"}).out.find("[4]") != std::string::npos);
}
