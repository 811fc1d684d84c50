// Drives the phtk executable end to end.
#include "fixtures.hpp"

#include "phtk/io.hpp"

#include <sys/wait.h>

#include <filesystem>
#include <sstream>

using namespace fx;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

const fs::path& scratch() {
  static const fs::path dir = [] {
    fs::path d = fs::temp_directory_path() / ("phtk_cli_" + std::to_string(::getpid()));
    fs::create_directories(d);
    return d;
  }();
  return dir;
}

int run_cli(const std::string& args, const std::string& env = {}) {
  const std::string cmd = env + " " + PHTK_CLI_PATH + " " + args + " > " + (scratch() / "stdout").string() + " 2> " +
                          (scratch() / "stderr").string();
  const int raw = std::system(cmd.c_str());
  return WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
}

std::string last_stdout() { return read_file((scratch() / "stdout").string()); }

std::string put_matrix(const std::string& name, const M& m) {
  const auto path = (scratch() / name).string();
  write_file(path, matrix_to_json(m).dump());
  return path;
}

std::vector<std::vector<std::string>> csv_rows(const std::string& text) {
  std::vector<std::vector<std::string>> rows;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::vector<std::string> cells;
    std::istringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, ',')) cells.push_back(cell);
    rows.push_back(cells);
  }
  return rows;
}

}  // namespace

TEST_CASE("model command", "[cli]") {
  const auto out = (scratch() / "m8.json").string();
  REQUIRE(run_cli("model --nu 0 --basis 8 -o " + out) == 0);
  const auto in = input_from_json(parse_json(read_file(out)));
  M expect = M::Zero(8, 8);
  for (int n = 0; n < 8; ++n) expect(n, n) = 2.0 * n + 1;
  CHECK(dist(in.h, expect) <= 1e-10);

  const auto again = (scratch() / "m8b.json").string();
  REQUIRE(run_cli("model --nu 0 --basis 8 -o " + again) == 0);
  CHECK(read_file(out) == read_file(again));

  CHECK(run_cli("model --nu 2.5 --basis 8") == 2);
  CHECK(read_file((scratch() / "stderr").string()).find("NuOutOfRange") != std::string::npos);
}

TEST_CASE("analyze command", "[cli]") {
  CHECK(run_cli("analyze " + put_matrix("diag.json", mat({{1, 0}, {0, 2}}))) == 0);
  CHECK(parse_json(last_stdout())["passed"] == true);

  CHECK(run_cli("analyze " + put_matrix("upper.json", mat({{1, 1}, {0, 2}}))) == 0);
  CHECK(last_stdout().find("\"conditional\"") != std::string::npos);

  CHECK(run_cli("analyze " + put_matrix("unpaired.json", mat({{cd(1, 1), 0}, {0, 2}}))) == 1);
  CHECK(parse_json(last_stdout())["spectral_class"]["kind"] == "Unpaired");

  const auto bad = (scratch() / "bad.json").string();
  write_file(bad, "{\"dim\": 2, \"entries\": [");
  CHECK(run_cli("analyze " + bad) == 2);
  CHECK(run_cli("analyze " + put_matrix("diag2.json", mat({{1, 0}, {0, 2}})) + " --profile loose") == 2);
}

TEST_CASE("analyze a nu = 1 bundle", "[cli]") {
  const auto out = (scratch() / "m64.json").string();
  REQUIRE(run_cli("model --nu 1 --basis 64 -o " + out) == 0);
  CHECK(run_cli("analyze " + out + " --profile spectral") == 0);
  const json rep = parse_json(last_stdout());
  std::size_t low = 0;
  for (const auto& e : rep["checks"]["entries"])
    if (e["tag"].get<std::string>().rfind("low:", 0) == 0) {
      ++low;
      CHECK(e["status"] != "fail");
    }
  CHECK(low > 10);
}

TEST_CASE("sweep command", "[cli]") {
  REQUIRE(run_cli("sweep --nu-min 0 --nu-max 0 --steps 1 --basis 16") == 0);
  auto rows = csv_rows(last_stdout());
  REQUIRE(rows.size() == 2);
  CHECK(rows[0][0] == "nu");
  for (int k = 0; k < 4; ++k) {
    CHECK(std::abs(std::stod(rows[1][1 + 2 * k]) - (2 * k + 1)) < 1e-10);
    CHECK(std::abs(std::stod(rows[1][2 + 2 * k])) < 1e-10);
  }

  REQUIRE(run_cli("sweep --nu-min 0 --nu-max 1.5 --steps 16 --basis 64") == 0);
  rows = csv_rows(last_stdout());
  REQUIRE(rows.size() == 17);
  double prev = -1;
  for (std::size_t r = 1; r < rows.size(); ++r) {
    const double nu = std::stod(rows[r][0]);
    CHECK(nu > prev);
    prev = nu;
    for (int k = 0; k < 4; ++k) CHECK(std::abs(std::stod(rows[r][2 + 2 * k])) < 1e-6);
  }
  CHECK(std::abs(prev - 1.5) < 1e-15);

  CHECK(run_cli("sweep --nu-min 1 --nu-max 0.5 --steps 3") == 2);
  CHECK(run_cli("sweep --nu-min 0 --nu-max 2 --steps 3") == 2);
}

// Above ν ≈ 1.5 the real-line basis at N = 64 loses the low levels to complex
// pairs (ν = 1.9 is not converged at N = 320 either). Kept as a visible probe.
TEST_CASE("sweep up to nu = 1.9 stays real", "[cli][!mayfail]") {
  REQUIRE(run_cli("sweep --nu-min 0 --nu-max 1.9 --steps 20 --basis 64") == 0);
  const auto rows = csv_rows(last_stdout());
  REQUIRE(rows.size() == 21);
  for (std::size_t r = 1; r < rows.size(); ++r) {
    INFO("nu = " << rows[r][0]);
    for (int k = 0; k < 4; ++k) CHECK(std::abs(std::stod(rows[r][2 + 2 * k])) < 1e-6);
  }
}

TEST_CASE("verify command", "[cli]") {
  CHECK(run_cli("verify --count 1 --dim 2 --seed 7 --ensemble quasi") == 0);
  CHECK(last_stdout().find("passed 1/1") != std::string::npos);
  CHECK(run_cli("verify --count 4 --dim 5 --seed 7 --ensemble pseudo") == 0);
  CHECK(last_stdout().find("action-X+") != std::string::npos);
  CHECK(run_cli("verify --count 2 --dim 1 --seed 7") == 0);
  CHECK(run_cli("verify --count 1 --dim 17") == 2);
  CHECK(run_cli("verify --ensemble other") == 2);
  CHECK(run_cli("verify --count x") == 2);
  CHECK(run_cli("model") == 2);
  CHECK(run_cli("--help") == 0);
}

TEST_CASE("verify output ignores the thread count", "[cli]") {
  const auto a = (scratch() / "v1.json").string();
  const auto b = (scratch() / "v3.json").string();
  REQUIRE(run_cli("verify --count 12 --dim 6 --vary-dim --seed 11 --json " + a, "PHTK_THREADS=1") == 0);
  const std::string text_a = last_stdout();
  REQUIRE(run_cli("verify --count 12 --dim 6 --vary-dim --seed 11 --json " + b, "PHTK_THREADS=3") == 0);
  CHECK(read_file(a) == read_file(b));
  CHECK(text_a == last_stdout());
}
