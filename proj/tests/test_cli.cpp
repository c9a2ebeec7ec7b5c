#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

namespace {

struct RunResult {
  int status = -1;
  std::string out;
};

RunResult run_cli(const std::string& args) {
  std::string cmd = std::string(MIMO_CLI_PATH) + " " + args + " 2>&1";
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  RunResult r;
  char buf[4096];
  std::size_t n;
  while ((n = fread(buf, 1, sizeof(buf), pipe)) > 0) r.out.append(buf, n);
  int rc = pclose(pipe);
  r.status = WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
  return r;
}

struct Csv {
  std::vector<std::string> columns;
  std::vector<std::map<std::string, double>> rows;
  std::vector<std::string> meta;
};

Csv parse_csv(const std::string& text) {
  Csv csv;
  std::istringstream in(text);
  std::string line;
  bool have_header = false;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (line[0] == '#') {
      csv.meta.push_back(line);
      continue;
    }
    std::vector<std::string> cells;
    std::istringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, ',')) cells.push_back(cell);
    if (!have_header) {
      csv.columns = cells;
      have_header = true;
      continue;
    }
    std::map<std::string, double> row;
    REQUIRE(cells.size() == csv.columns.size());
    for (std::size_t k = 0; k < cells.size(); ++k) {
      if (!cells[k].empty()) row[csv.columns[k]] = std::stod(cells[k]);
    }
    csv.rows.push_back(row);
  }
  return csv;
}

}  // namespace

TEST_CASE("version flag") {
  auto r = run_cli("--version");
  CHECK(r.status == 0);
  CHECK(r.out.find("mimo-mmse") != std::string::npos);
}

TEST_CASE("bad flags exit 2") {
  CHECK(run_cli("sweep --bogus-flag 1").status == 2);
  CHECK(run_cli("sweep --snr-db 10:0:20 --samples 2000").status == 2);
  CHECK(run_cli("mmse --format yaml").status == 2);
}

TEST_CASE("malformed channel json exits 2 and names the field") {
  const char* path = "cli_bad_channel.json";
  {
    std::ofstream out(path);
    out << R"({"rows":1,"cols":1,"re":[[1.0]]})";
  }
  auto r = run_cli(std::string("mmse --channel-json ") + path + " --snr-db 0");
  CHECK(r.status == 2);
  CHECK(r.out.find("'im'") != std::string::npos);
  std::remove(path);
}

TEST_CASE("two-point sweep: lower column equals mmse column") {
  auto r = run_cli(
      "sweep --constellation bpsk --channel-scalar 1 --snr-db 0:2:20 "
      "--seed 7 --samples 20000");
  REQUIRE(r.status == 0);
  auto csv = parse_csv(r.out);
  CHECK(csv.columns == std::vector<std::string>{"snr_db", "mmse", "mmse_se",
                                                "lower", "upper", "mi", "mi_se",
                                                "mi_lb", "mi_ub"});
  REQUIRE(csv.rows.size() == 11);
  for (const auto& row : csv.rows) {
    double mmse = row.at("mmse");
    CHECK(std::abs(row.at("lower") - mmse) <= 1e-6 * std::max(1.0, mmse));
    CHECK(row.at("mmse_se") == 0.0);
    CHECK(mmse <= row.at("upper") + 1e-12);
    CHECK(row.at("mi_lb") <= row.at("mi") + 3.0 * row.at("mi_se") + 1e-3);
    CHECK(row.at("mi") <= row.at("mi_ub") + 3.0 * row.at("mi_se") + 1e-3);
  }
}

TEST_CASE("near-zero snr mutual information") {
  auto r = run_cli(
      "mi --constellation bpsk --channel-scalar 1 --snr-db -60 "
      "--samples 100000 --seed 1");
  REQUIRE(r.status == 0);
  auto csv = parse_csv(r.out);
  REQUIRE(csv.rows.size() == 1);
  CHECK(std::abs(csv.rows[0].at("mi")) < 3.0 * csv.rows[0].at("mi_se") + 1e-3);
}

TEST_CASE("bits units rescale the mi column") {
  const std::string base =
      "mi --constellation qpsk --channel-scalar 1 --snr-db 25 "
      "--samples 20000 --seed 4 --units ";
  auto nats = parse_csv(run_cli(base + "nats").out);
  auto bits = parse_csv(run_cli(base + "bits").out);
  REQUIRE(nats.rows.size() == 1);
  REQUIRE(bits.rows.size() == 1);
  CHECK(bits.rows[0].at("mi") ==
        doctest::Approx(nats.rows[0].at("mi") / std::log(2.0)).epsilon(1e-9));
  // qpsk saturates near 2 bits
  CHECK(bits.rows[0].at("mi") == doctest::Approx(2.0).epsilon(0.01));
}

TEST_CASE("identical invocations are byte-identical") {
  const std::string cmd =
      "mmse --constellation qpsk --nt 2 --channel rayleigh --n 2 --seed 5 "
      "--samples 20000 --chunk 1000 --snr-db 0:10:10";
  auto a = run_cli(cmd + " --threads 1");
  auto b = run_cli(cmd + " --threads 1");
  auto c = run_cli(cmd + " --threads 4");
  REQUIRE(a.status == 0);
  CHECK(a.out == b.out);
  CHECK(a.out == c.out);
}

TEST_CASE("json output conforms to the shipped schema") {
  auto r = run_cli(
      "sweep --constellation bpsk --channel-scalar 1 --snr-db 0:10:10 "
      "--samples 5000 --format json");
  REQUIRE(r.status == 0);
  auto j = nlohmann::json::parse(r.out);
  auto schema = nlohmann::json::parse(
      std::ifstream(std::string(MIMO_SOURCE_DIR) + "/schemas/sweep.schema.json"));

  for (const auto& key : schema.at("required")) {
    CHECK(j.contains(key.get<std::string>()));
  }
  for (const auto& key : schema["properties"]["config"]["required"]) {
    CHECK(j["config"].contains(key.get<std::string>()));
  }
  const auto allowed =
      schema["properties"]["columns"]["items"]["enum"].get<std::vector<std::string>>();
  for (const auto& col : j["columns"]) {
    CHECK(std::find(allowed.begin(), allowed.end(), col.get<std::string>()) !=
          allowed.end());
  }
  REQUIRE(j["rows"].is_array());
  REQUIRE(j["rows"].size() == 2);
  for (const auto& row : j["rows"]) {
    CHECK(row.contains("snr_db"));
    for (const auto& [k, v] : row.items()) CHECK(v.is_number());
  }
}

TEST_CASE("verify subcommand passes on a simple channel") {
  auto r = run_cli(
      "verify --constellation bpsk --channel-scalar 1 --snr-db 0:10:20 "
      "--samples 50000 --seed 2");
  CHECK(r.status == 0);
  CHECK(r.out.find("verify: PASS") != std::string::npos);
  CHECK(r.out.find("FAIL") == std::string::npos);
}

TEST_CASE("fading subcommand reports a slope") {
  auto r = run_cli(
      "fading --constellation bpsk --n 2 --snr-db 12:3:24 --trials 60 "
      "--noise-draws 1000 --seed 6 --window-db 12:24");
  REQUIRE(r.status == 0);
  auto csv = parse_csv(r.out);
  REQUIRE(csv.rows.size() == 5);
  bool saw_slope = false;
  for (const auto& m : csv.meta) {
    if (m.rfind("# slope=", 0) == 0) {
      saw_slope = true;
      double slope = std::stod(m.substr(8));
      CHECK(slope < 0.0);  // gap must shrink with snr
    }
  }
  CHECK(saw_slope);
}
