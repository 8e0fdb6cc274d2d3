#pragma once

#include <functional>
#include <optional>
#include <string>
#include <utility>

#include "fickit/error.hpp"
#include "fickit/fisher.hpp"
#include "fickit/types.hpp"

namespace fickit {

/// A fitting procedure: maps a Dataset to a FittedModel. This is the
/// "model" of the complexity computations, so any discrete selection steps
/// a procedure makes are part of `fit` and are repeated on simulated data.
class ModelFamily {
 public:
  using Fit = std::function<FittedModel(const Dataset&)>;
  using ModelAt = std::function<FittedModel(const ParameterVector&)>;
  using FisherAt = std::function<FisherMatrix(const ParameterVector&, std::size_t sample_size)>;

  struct Spec {
    std::string family_id;
    std::size_t dimension = 0;  // continuous parameters
    Fit fit;
    ModelAt model_at;   // optional
    FisherAt fisher_at;  // optional
    bool structured_data = false;
    std::optional<std::size_t> naive_dimension;  // parameter count including discrete tags
  };

  explicit ModelFamily(Spec spec) : spec_(std::move(spec)) {
    if (!spec_.fit) throw InvalidArgument("ModelFamily '" + spec_.family_id + "' has no fit procedure");
  }

  const std::string& id() const noexcept { return spec_.family_id; }
  std::size_t dimension() const noexcept { return spec_.dimension; }
  std::size_t naive_dimension() const noexcept { return spec_.naive_dimension.value_or(spec_.dimension); }

  /// True for time series and other data whose observations are not exchangeable.
  bool structured_data() const noexcept { return spec_.structured_data; }

  FittedModel fit(const Dataset& data) const { return spec_.fit(data); }

  bool has_model_at() const noexcept { return static_cast<bool>(spec_.model_at); }
  FittedModel model_at(const ParameterVector& params) const {
    if (!spec_.model_at) throw InvalidArgument("family '" + id() + "' cannot build a model from parameters");
    return spec_.model_at(params);
  }

  bool has_fisher() const noexcept { return static_cast<bool>(spec_.fisher_at); }
  /// Fisher information of `sample_size` observations at `params`.
  FisherMatrix fisher_at(const ParameterVector& params, std::size_t sample_size) const {
    if (!spec_.fisher_at) throw InvalidArgument("family '" + id() + "' provides no Fisher information");
    return spec_.fisher_at(params, sample_size);
  }

 private:
  Spec spec_;
};

}  // namespace fickit
