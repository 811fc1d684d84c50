#include "phtk/io.hpp"

#include <cstdio>
#include <fstream>
#include <locale>
#include <sstream>

namespace phtk {

using nlohmann::json;

namespace {

bool is_number_pair(const json& e) { return e.is_array() && e.size() == 2 && e[0].is_number() && e[1].is_number(); }

json actions_to_json(const std::vector<SymmetryAction>& acts) {
  json out = json::array();
  for (const auto& a : acts) {
    if (a.kind == ActionKind::Exact)
      out.push_back({{"kind", "exact"}, {"sign", a.sign}});
    else
      out.push_back({{"kind", "swap"}, {"partner", a.partner}});
  }
  return out;
}

}  // namespace

json matrix_to_json(const ComplexMatrix& m) {
  json entries = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r)
    for (Eigen::Index c = 0; c < m.cols(); ++c) entries.push_back({m(r, c).real(), m(r, c).imag()});
  return {{"dim", m.rows()}, {"entries", entries}};
}

ComplexMatrix matrix_from_json(const json& j) {
  if (!j.is_object() || !j.contains("dim") || !j.contains("entries"))
    throw Error(ErrorCode::ParseError, "matrix object needs 'dim' and 'entries'");
  if (!j["dim"].is_number_integer() || j["dim"].get<long long>() < 1)
    throw Error(ErrorCode::ParseError, "'dim' must be a positive integer");
  const auto n = static_cast<Eigen::Index>(j["dim"].get<long long>());
  const json& e = j["entries"];
  if (!e.is_array() || static_cast<Eigen::Index>(e.size()) != n * n)
    throw Error(ErrorCode::ParseError, "'entries' must hold dim*dim [re, im] pairs");
  ComplexMatrix m(n, n);
  for (Eigen::Index k = 0; k < n * n; ++k) {
    const json& z = e[static_cast<std::size_t>(k)];
    if (!is_number_pair(z)) throw Error(ErrorCode::ParseError, "entry " + std::to_string(k) + " is not [re, im]");
    m(k / n, k % n) = {z[0].get<double>(), z[1].get<double>()};
  }
  if (!m.allFinite()) throw Error(ErrorCode::ParseError, "non-finite entry");
  return m;
}

json parse_json(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::ParseError, e.what());
  }
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::ParseError, "cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::RangeError, "cannot write " + path);
  out << text;
}

json model_to_json(const OscillatorModel& m) {
  return {{"schema_version", kSchemaVersion},
          {"kind", "model"},
          {"nu", m.nu},
          {"basis", m.N},
          {"quadrature_nodes", m.quadrature_nodes},
          {"H", matrix_to_json(m.H)},
          {"P", matrix_to_json(m.P)}};
}

MatrixInput input_from_json(const json& j) {
  MatrixInput in;
  if (j.is_object() && j.contains("H")) {
    OscillatorModel m;
    try {
      m.nu = j.at("nu").get<double>();
      m.N = j.at("basis").get<int>();
      m.quadrature_nodes = j.at("quadrature_nodes").get<int>();
    } catch (const json::exception& e) {
      throw Error(ErrorCode::ParseError, std::string("model bundle: ") + e.what());
    }
    m.H = matrix_from_json(j["H"]);
    m.P = j.contains("P") ? matrix_from_json(j["P"]) : harmonic_oscillator(static_cast<int>(m.H.rows())).P;
    require_same_shape(m.H, m.P, "model H and P differ in size");
    m.T = {ComplexMatrix::Identity(m.H.rows(), m.H.cols())};
    in.h = m.H;
    in.model = std::move(m);
    return in;
  }
  in.h = matrix_from_json(j);
  return in;
}

double profile_tolerance(const std::string& name) {
  if (name == "strict") return 1e-10;
  if (name == "spectral") return 1e-6;
  throw Error(ErrorCode::RangeError, "profile must be strict or spectral, got '" + name + "'");
}

json check_report_to_json(const CheckReport& r) {
  json entries = json::array();
  for (const auto& e : r.entries) {
    json o = {{"tag", e.tag},
              {"item", e.item},
              {"residual", e.residual},
              {"threshold", e.threshold},
              {"status", to_string(e.status)}};
    if (!e.note.empty()) o["note"] = e.note;
    entries.push_back(std::move(o));
  }
  json flags = json::object();
  for (const auto& [k, v] : r.flags) flags[k] = v;
  return {{"entries", entries}, {"flags", flags}, {"failures", r.failures()}};
}

Analysis analyze(const MatrixInput& in, const AnalysisInput& meta) {
  json rep = {{"schema_version", kSchemaVersion}, {"kind", "analysis"}};
  json input = {{"source", meta.source}, {"dim", in.h.rows()}};
  if (in.model) {
    input["nu"] = in.model->nu;
    input["basis"] = in.model->N;
    input["quadrature_nodes"] = in.model->quadrature_nodes;
  }
  rep["input"] = input;
  rep["profile"] = {{"name", meta.profile}, {"tol", meta.tol}};

  Analysis out;
  CheckReport checks;
  try {
    const auto sys = eig_biorthonormal(in.h, meta.tol);
    const auto cls = classify_spectrum(sys);
    json spectral = {{"kind", to_string(cls.kind)}, {"condition", sys.condition}};
    if (cls.witness) spectral["witness"] = {cls.witness->real(), cls.witness->imag()};
    rep["spectral_class"] = spectral;
    json ev = json::array();
    for (Eigen::Index g = 0; g < sys.eigenvalues.size(); ++g)
      ev.push_back({{"value", {sys.eigenvalues(g).real(), sys.eigenvalues(g).imag()}},
                    {"multiplicity", sys.multiplicities[g]},
                    {"class", to_string(sys.labels[g])}});
    rep["eigenvalues"] = ev;

    if (cls.is_unpaired()) {
      rep["error"] = {{"code", to_string(ErrorCode::UnpairedSpectrum)},
                      {"message", "eigenvalue without a conjugate partner"}};
      checks.add("paired", 0, 1.0, 0.0, "spectrum is not conjugate-paired");
    } else {
      checks = verify_lemma1(sys, meta.tol);
      rep["involutions"] = {{"P", checks.flags["P-involution"]}, {"T", checks.flags["T-involution"]}};
      rep["actions"] = {{"X_plus", actions_to_json(symmetry_action(canonical_X(sys, all_plus(sys)), sys, meta.tol))},
                        {"X_alt", actions_to_json(symmetry_action(canonical_X(sys, alternating(sys)), sys, meta.tol))}};
      if (in.model) {
        try {
          const auto normalized = pt_normalize(sys, *in.model);
          checks.merge(verify_section4(*in.model, normalized, meta.tol), "low:");
        } catch (const Error& e) {
          checks.add("low:pt-normalize", 0, 1.0, 0.0, e.what());
        }
      }
    }
  } catch (const Error& e) {
    rep["error"] = {{"code", to_string(e.code())}, {"message", e.what()}};
    checks.add("error", 0, 1.0, 0.0, e.what());
  }
  rep["checks"] = check_report_to_json(checks);
  out.passed = checks.passed();
  rep["passed"] = out.passed;
  out.report = std::move(rep);
  return out;
}

json suite_to_json(const SuiteResult& r) {
  const auto& o = r.options;
  json rep = {{"schema_version", kSchemaVersion},
              {"kind", "verify"},
              {"options",
               {{"seed", o.seed},
                {"count", o.count},
                {"dim", o.dim},
                {"vary_dim", o.vary_dim},
                {"ensemble", to_string(o.ensemble)}}},
              {"passed", r.passed()},
              {"members", r.members.size()}};
  json tags = json::object();
  for (const auto& [tag, s] : r.by_tag())
    tags[tag] = {{"evaluated", s.evaluated}, {"failures", s.failures}, {"worst", s.worst}, {"threshold", s.threshold}};
  rep["tags"] = tags;
  json failed = json::array();
  for (const auto& m : r.members)
    if (!m.passed()) {
      json f = {{"index", m.index}, {"seed", m.seed}, {"dim", m.dim}, {"pairs", m.pairs}};
      json bad = json::array();
      for (const auto& e : m.report.entries)
        if (e.status == CheckStatus::Fail) bad.push_back({{"tag", e.tag}, {"residual", e.residual}, {"note", e.note}});
      f["failed"] = bad;
      failed.push_back(std::move(f));
    }
  rep["failed_members"] = failed;
  return rep;
}

std::string format_number(double x) {
  std::ostringstream ss;
  ss.imbue(std::locale::classic());
  ss.precision(17);
  ss << x;
  return ss.str();
}

}  // namespace phtk
