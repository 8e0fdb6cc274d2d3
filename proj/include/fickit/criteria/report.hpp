#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "fickit/error.hpp"
#include "fickit/format.hpp"
#include "fickit/monte_carlo.hpp"

namespace fickit::criteria {

enum class CriterionKind { AIC, BIC, AICc, FIC, TrueIC, BootParametric, BootEmpirical, LOOCV };

inline std::string_view to_string(CriterionKind k) {
  switch (k) {
    case CriterionKind::AIC: return "AIC";
    case CriterionKind::BIC: return "BIC";
    case CriterionKind::AICc: return "AICc";
    case CriterionKind::FIC: return "FIC";
    case CriterionKind::TrueIC: return "TrueIC";
    case CriterionKind::BootParametric: return "BootParametric";
    case CriterionKind::BootEmpirical: return "BootEmpirical";
    case CriterionKind::LOOCV: return "LOOCV";
  }
  return "?";
}

/// Complexity term of a report: exact, Monte Carlo, or not applicable (LOOCV).
struct Complexity {
  double value = 0.0;
  std::optional<MonteCarloEstimate> estimate;
  bool applicable = true;

  static Complexity exact(double v) { return {v, std::nullopt, true}; }
  static Complexity from(const MonteCarloEstimate& e) { return {e.value, e, true}; }
  static Complexity not_applicable() { return {0.0, std::nullopt, false}; }
};

struct CriterionReport {
  std::string model_label;
  CriterionKind kind = CriterionKind::AIC;
  double goodness_of_fit = 0.0;  // h(X | theta_hat_X), nats
  Complexity complexity;
  double criterion_value = 0.0;
  std::size_t dimension = 0;  // continuous parameters, used for tie-breaking

  /// Report for IC-form criteria: value = goodness_of_fit + complexity.
  static CriterionReport information_criterion(std::string label, CriterionKind kind, double fit,
                                               Complexity complexity, std::size_t dimension) {
    CriterionReport r;
    r.model_label = std::move(label);
    r.kind = kind;
    r.goodness_of_fit = fit;
    r.complexity = complexity;
    r.criterion_value = fit + complexity.value;
    r.dimension = dimension;
    return r;
  }

  /// One CSV line: label,kind,h,complexity,stderr,replicates,seed,value,dimension.
  std::string serialize() const {
    std::string s = model_label + "," + std::string(to_string(kind)) + "," + format_double(goodness_of_fit) + ",";
    s += complexity.applicable ? format_double(complexity.value) : std::string("NA");
    s += ",";
    if (complexity.estimate) {
      s += format_double(complexity.estimate->std_error) + "," + std::to_string(complexity.estimate->replicates) +
           "," + std::to_string(complexity.estimate->seed);
    } else {
      s += ",,";
    }
    s += "," + format_double(criterion_value) + "," + std::to_string(dimension);
    return s;
  }
};

}  // namespace fickit::criteria
