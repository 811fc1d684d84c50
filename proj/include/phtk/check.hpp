#ifndef PHTK_CHECK_HPP
#define PHTK_CHECK_HPP

#include <map>
#include <string>
#include <vector>

namespace phtk {

/// Conditional entries hold only under a stated premise that was not met;
/// they are reported but do not fail a report.
enum class CheckStatus { Pass, Fail, Conditional, Skipped };

inline const char* to_string(CheckStatus s) {
  switch (s) {
    case CheckStatus::Pass: return "pass";
    case CheckStatus::Fail: return "fail";
    case CheckStatus::Conditional: return "conditional";
    case CheckStatus::Skipped: return "skipped";
  }
  return "?";
}

struct CheckEntry {
  std::string tag;
  int item = 0;
  double residual = 0.0;
  double threshold = 0.0;
  CheckStatus status = CheckStatus::Pass;
  std::string note;
};

struct CheckReport {
  std::vector<CheckEntry> entries;
  std::map<std::string, bool> flags;

  /// residual ≤ threshold.
  CheckEntry& add(std::string tag, int item, double residual, double threshold, std::string note = {}) {
    const bool ok = residual <= threshold;  // NaN fails
    entries.push_back({std::move(tag), item, residual, threshold, ok ? CheckStatus::Pass : CheckStatus::Fail,
                       std::move(note)});
    return entries.back();
  }

  /// Required only when `premise` holds.
  CheckEntry& add_conditional(std::string tag, int item, double residual, double threshold, bool premise,
                              std::string note = {}) {
    auto& e = add(std::move(tag), item, residual, threshold, std::move(note));
    if (!premise && e.status == CheckStatus::Fail) e.status = CheckStatus::Conditional;
    return e;
  }

  /// value > bound.
  CheckEntry& add_lower_bound(std::string tag, int item, double value, double bound, std::string note = {}) {
    entries.push_back({std::move(tag), item, value, bound, value > bound ? CheckStatus::Pass : CheckStatus::Fail,
                       std::move(note)});
    return entries.back();
  }

  CheckEntry& skip(std::string tag, int item, std::string note) {
    entries.push_back({std::move(tag), item, 0.0, 0.0, CheckStatus::Skipped, std::move(note)});
    return entries.back();
  }

  std::size_t failures() const {
    std::size_t k = 0;
    for (const auto& e : entries) k += e.status == CheckStatus::Fail;
    return k;
  }

  bool passed() const { return failures() == 0; }

  const CheckEntry* find(const std::string& tag) const {
    for (const auto& e : entries)
      if (e.tag == tag) return &e;
    return nullptr;
  }

  /// Largest residual among entries of one item that were evaluated.
  double worst(int item) const {
    double w = 0.0;
    for (const auto& e : entries)
      if (e.item == item && e.status != CheckStatus::Skipped && e.residual > w) w = e.residual;
    return w;
  }

  void merge(const CheckReport& other, const std::string& prefix = {}) {
    for (auto e : other.entries) {
      e.tag = prefix + e.tag;
      entries.push_back(std::move(e));
    }
    for (const auto& [k, v] : other.flags) flags[prefix + k] = v;
  }
};

}  // namespace phtk

#endif  // PHTK_CHECK_HPP
