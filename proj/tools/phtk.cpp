// phtk: analyze | model | sweep | verify
//
// Exit codes: 0 all checks pass, 1 a check failed, 2 bad input or arguments.

#include "phtk/io.hpp"
#include "phtk/parallel.hpp"

#include "CLI11.hpp"

#include <cstdio>
#include <iostream>
#include <sstream>

using namespace phtk;

namespace {

void emit(const std::string& text, const std::string& path) {
  if (path.empty() || path == "-")
    std::cout << text;
  else
    write_file(path, text);
}

int cmd_analyze(const std::string& file, const std::string& profile, const std::string& out) {
  const double tol = profile_tolerance(profile);
  const MatrixInput in = input_from_json(parse_json(read_file(file)));
  const Analysis a = analyze(in, {file, profile, tol});
  emit(a.report.dump(2) + "\n", out);
  return a.passed ? 0 : 1;
}

int cmd_model(double nu, int basis, int quad, const std::string& out) {
  const OscillatorModel m = bender_hamiltonian(nu, basis, quad);
  emit(model_to_json(m).dump() + "\n", out);
  return 0;
}

struct SweepRow {
  double nu = 0.0;
  std::vector<std::complex<double>> low;
  int n_real = 0;
  double condition = 0.0;
  double block_worst = 0.0;
  long block_failures = 0;
};

SweepRow sweep_point(double nu, int basis, int quad, int modes, double tol) {
  SweepRow row;
  row.nu = nu;
  const auto m = bender_hamiltonian(nu, basis, quad);
  const auto sys = eig_biorthonormal(m.H, tol);
  row.condition = sys.condition;
  const auto e = sys.column_eigenvalues();
  std::vector<Eigen::Index> cols(static_cast<std::size_t>(e.size()));
  for (Eigen::Index j = 0; j < e.size(); ++j) cols[j] = j;
  std::stable_sort(cols.begin(), cols.end(), [&](auto a, auto b) { return std::abs(e(a)) < std::abs(e(b)); });
  for (int k = 0; k < modes && k < static_cast<int>(cols.size()); ++k) row.low.push_back(e(cols[k]));
  row.n_real = static_cast<int>(sys.real_slots().size());
  try {
    const auto r = verify_section4(m, pt_normalize(sys, m), tol);
    row.block_failures = static_cast<long>(r.failures());
    for (const auto& entry : r.entries) row.block_worst = std::max(row.block_worst, entry.residual);
  } catch (const Error&) {
    row.block_failures = -1;
    row.block_worst = std::numeric_limits<double>::quiet_NaN();
  }
  return row;
}

int cmd_sweep(double lo, double hi, int steps, int basis, int quad, int modes, const std::string& profile,
              const std::string& out) {
  if (steps < 1) throw Error(ErrorCode::RangeError, "steps must be at least 1");
  if (!(lo <= hi)) throw Error(ErrorCode::RangeError, "nu-min exceeds nu-max");
  if (!(lo >= 0.0 && hi < 2.0)) throw Error(ErrorCode::RangeError, "nu range must lie in [0, 2)");
  if (steps == 1 && lo != hi) throw Error(ErrorCode::RangeError, "one step needs nu-min = nu-max");
  const double tol = profile_tolerance(profile);

  std::vector<SweepRow> rows(static_cast<std::size_t>(steps));
  parallel_for(rows.size(), [&](std::size_t k) {
    const double nu = steps == 1 ? lo : lo + (hi - lo) * double(k) / double(steps - 1);
    rows[k] = sweep_point(nu, basis, quad, modes, tol);
  });

  std::ostringstream csv;
  csv << "# lowest " << modes << " eigenvalues by modulus; n_real counts real slots; block_* summarize the low-mode"
      << " identity block (block_failures = -1: PT normalization failed)\n";
  csv << "nu";
  for (int k = 0; k < modes; ++k) csv << ",e" << k << "_re,e" << k << "_im";
  csv << ",n_real,condition,block_worst,block_failures\n";
  for (const auto& r : rows) {
    csv << format_number(r.nu);
    for (int k = 0; k < modes; ++k) {
      const auto z = k < static_cast<int>(r.low.size()) ? r.low[k] : std::complex<double>(NAN, NAN);
      csv << ',' << format_number(z.real()) << ',' << format_number(z.imag());
    }
    csv << ',' << r.n_real << ',' << format_number(r.condition) << ',' << format_number(r.block_worst) << ','
        << r.block_failures << '\n';
  }
  emit(csv.str(), out);
  return 0;
}

int cmd_verify(SuiteOptions opt, const std::string& json_out) {
  const SuiteResult res = run_suite(opt);
  std::printf("ensemble %s  seed %llu  count %d  dim %d%s\n", to_string(opt.ensemble),
              static_cast<unsigned long long>(opt.seed), opt.count, opt.dim, opt.vary_dim ? " (varied)" : "");
  std::printf("%-28s %9s %8s %12s %10s\n", "tag", "evaluated", "failures", "worst", "threshold");
  for (const auto& [tag, s] : res.by_tag())
    std::printf("%-28s %9zu %8zu %12.3e %10.1e\n", tag.c_str(), s.evaluated, s.failures, s.worst, s.threshold);
  std::printf("passed %zu/%zu\n", res.passed(), res.members.size());
  if (!json_out.empty()) write_file(json_out, suite_to_json(res).dump(2) + "\n");
  return res.passed() == res.members.size() ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"pseudo-Hermitian toolkit"};
  app.require_subcommand(1);

  std::string file, profile = "strict", out;
  auto* analyze_cmd = app.add_subcommand("analyze", "biorthonormal analysis of a JSON matrix or model bundle");
  analyze_cmd->add_option("file", file, "matrix file")->required();
  analyze_cmd->add_option("-p,--profile", profile, "strict | spectral");
  analyze_cmd->add_option("-o,--out", out, "report path (default stdout)");

  double nu = 0.0;
  int basis = 64, quad = 0;
  auto* model_cmd = app.add_subcommand("model", "assemble the oscillator-basis H_nu");
  model_cmd->add_option("--nu", nu)->required();
  model_cmd->add_option("--basis", basis, "basis size N");
  model_cmd->add_option("--quad", quad, "quadrature nodes M (0: 2N)");
  model_cmd->add_option("-o,--out", out, "bundle path (default stdout)");

  double nu_min = 0.0, nu_max = 0.0;
  int steps = 1, modes = 4;
  std::string sweep_profile = "spectral";
  auto* sweep_cmd = app.add_subcommand("sweep", "CSV of low eigenvalues across nu");
  sweep_cmd->add_option("--nu-min", nu_min)->required();
  sweep_cmd->add_option("--nu-max", nu_max)->required();
  sweep_cmd->add_option("--steps", steps);
  sweep_cmd->add_option("--basis", basis);
  sweep_cmd->add_option("--quad", quad);
  sweep_cmd->add_option("--modes", modes, "eigenvalues per row");
  sweep_cmd->add_option("-p,--profile", sweep_profile);
  sweep_cmd->add_option("-o,--out", out, "CSV path (default stdout)");

  SuiteOptions opt;
  std::string ensemble = "quasi", json_out;
  auto* verify_cmd = app.add_subcommand("verify", "invariant suite over a seeded random ensemble");
  verify_cmd->add_option("--seed", opt.seed);
  verify_cmd->add_option("--count", opt.count);
  verify_cmd->add_option("--dim", opt.dim);
  verify_cmd->add_option("--ensemble", ensemble, "quasi | pseudo");
  verify_cmd->add_flag("--vary-dim", opt.vary_dim, "cycle member dimension up to --dim");
  verify_cmd->add_option("--json", json_out, "also write a JSON summary");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 2;  // --help exits 0
  }

  try {
    if (*analyze_cmd) return cmd_analyze(file, profile, out);
    if (*model_cmd) return cmd_model(nu, basis, quad, out);
    if (*sweep_cmd) return cmd_sweep(nu_min, nu_max, steps, basis, quad, modes, sweep_profile, out);
    if (*verify_cmd) {
      opt.ensemble = parse_ensemble(ensemble);
      return cmd_verify(opt, json_out);
    }
  } catch (const Error& e) {
    std::cerr << "error [" << to_string(e.code()) << "]: " << e.what() << '\n';
    return 2;
  }
  return 2;
}
