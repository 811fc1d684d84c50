#ifndef PHTK_SUITE_HPP
#define PHTK_SUITE_HPP

#include "phtk/models.hpp"

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace phtk {

enum class Ensemble { Quasi, Pseudo };

const char* to_string(Ensemble e);
Ensemble parse_ensemble(const std::string& s);  // RangeError on anything else

/// Pinned thresholds of the invariant suite.
struct SuiteThresholds {
  double tol = 1e-10;        // spectral clustering and item report
  double ph = 1e-10;         // H†η₊ = η₊H
  double identity = 1e-9;    // 𝒞² = 1, (𝒫𝒯)² = 1, [𝒞,H] = 0, CPT Gram, commu
  double roundtrip = 1e-8;   // decompose_eta / decompose_tau products
  double predicate = 1e-9;   // involution predicates and direct squaring
};

struct SuiteOptions {
  std::uint64_t seed = 1;
  int count = 1;
  int dim = 4;
  bool vary_dim = false;  // member k uses 1 + k mod dim (2 + k mod (dim−1) for pseudo)
  Ensemble ensemble = Ensemble::Quasi;
  bool roundtrip = true;
  bool companion = true;  // also test predicates on the unitary companion
  int threads = 0;        // 0: thread_cap()
  SuiteThresholds thresholds;
};

struct MemberResult {
  int index = 0;
  std::uint64_t seed = 0;
  int dim = 0;
  int pairs = 0;
  CheckReport report;
  bool passed() const { return report.passed(); }
};

struct TagSummary {
  std::size_t evaluated = 0;
  std::size_t failures = 0;
  double worst = 0.0;
  double threshold = 0.0;
};

struct SuiteResult {
  SuiteOptions options;
  std::vector<MemberResult> members;

  std::size_t passed() const;
  std::map<std::string, TagSummary> by_tag() const;
};

/// Member matrix and its spectrum shape; deterministic in (options, index).
struct Member {
  ComplexMatrix h;
  std::uint64_t seed = 0;
  int pairs = 0;
};

Member make_member(const SuiteOptions& opt, int index);

/// Every invariant on one matrix; never throws.
CheckReport check_member(const ComplexMatrix& h, Ensemble ensemble, std::uint64_t seed, const SuiteOptions& opt);

SuiteResult run_suite(const SuiteOptions& opt);

}  // namespace phtk

#endif  // PHTK_SUITE_HPP
