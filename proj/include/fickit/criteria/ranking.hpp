#pragma once

#include <algorithm>
#include <span>
#include <string>
#include <tuple>
#include <vector>

#include "fickit/criteria/report.hpp"
#include "fickit/error.hpp"

namespace fickit::criteria {

struct RankedModel {
  std::string model_label;
  double criterion_value = 0.0;
  double delta = 0.0;  // criterion_value - best
  std::size_t dimension = 0;
};

/// Ascending by criterion value; ties go to fewer continuous parameters,
/// then to the label.
inline std::vector<RankedModel> rank_models(std::span<const CriterionReport> reports) {
  if (reports.empty()) return {};
  for (const auto& r : reports) {
    if (r.kind != reports.front().kind)
      throw InvalidArgument("cannot rank reports of different criterion kinds (" +
                            std::string(to_string(reports.front().kind)) + " vs " + std::string(to_string(r.kind)) + ")");
  }
  std::vector<RankedModel> out;
  out.reserve(reports.size());
  for (const auto& r : reports) out.push_back({r.model_label, r.criterion_value, 0.0, r.dimension});
  std::sort(out.begin(), out.end(), [](const RankedModel& a, const RankedModel& b) {
    return std::tie(a.criterion_value, a.dimension, a.model_label) <
           std::tie(b.criterion_value, b.dimension, b.model_label);
  });
  for (auto& m : out) m.delta = m.criterion_value - out.front().criterion_value;
  return out;
}

/// Complexity as a function of nesting index for one criterion and sample size.
struct ComplexityCurve {
  std::vector<int> nesting_indices;
  std::vector<double> complexities;
  CriterionKind kind = CriterionKind::FIC;
  std::size_t sample_size = 0;

  void validate() const {
    if (nesting_indices.size() != complexities.size())
      throw InvalidArgument("complexity curve needs one complexity per nesting index");
    for (std::size_t i = 1; i < nesting_indices.size(); ++i)
      if (nesting_indices[i] <= nesting_indices[i - 1])
        throw InvalidArgument("nesting indices must be strictly increasing");
  }

  /// K(n_i) - K(n_{i-1}) for i >= 1.
  std::vector<double> increments() const {
    validate();
    std::vector<double> d;
    for (std::size_t i = 1; i < complexities.size(); ++i) d.push_back(complexities[i] - complexities[i - 1]);
    return d;
  }
};

}  // namespace fickit::criteria
