#ifndef PHTK_IO_HPP
#define PHTK_IO_HPP

#include "phtk/suite.hpp"

#include "json.hpp"

#include <optional>
#include <string>

namespace phtk {

inline constexpr int kSchemaVersion = 1;

/// {"dim": n, "entries": [[re, im], …]} in row-major order.
nlohmann::json matrix_to_json(const ComplexMatrix& m);

/// Inverse of matrix_to_json. ParseError on a malformed object.
ComplexMatrix matrix_from_json(const nlohmann::json& j);

/// Parses text; ParseError on invalid JSON.
nlohmann::json parse_json(const std::string& text);

std::string read_file(const std::string& path);   // ParseError if unreadable
void write_file(const std::string& path, const std::string& text);

/// Model bundle: H, P and the assembly parameters.
nlohmann::json model_to_json(const OscillatorModel& m);

/// Accepts a bare matrix or a model bundle. The model is rebuilt around the
/// stored H and P when the file is a bundle.
struct MatrixInput {
  ComplexMatrix h;
  std::optional<OscillatorModel> model;
};
MatrixInput input_from_json(const nlohmann::json& j);

/// "strict" (1e-10) or "spectral" (1e-6). RangeError otherwise.
double profile_tolerance(const std::string& name);

struct AnalysisInput {
  std::string source;
  std::string profile;
  double tol = 0.0;
};

struct Analysis {
  nlohmann::json report;
  bool passed = false;
};

/// Spectral pipeline on one matrix; UnpairedSpectrum and NotDiagonalizable
/// still yield a report with passed = false.
Analysis analyze(const MatrixInput& in, const AnalysisInput& meta);

nlohmann::json check_report_to_json(const CheckReport& r);

nlohmann::json suite_to_json(const SuiteResult& r);

/// %.17g in the classic locale.
std::string format_number(double x);

}  // namespace phtk

#endif  // PHTK_IO_HPP
