#pragma once

#include <cmath>
#include <cstddef>
#include <functional>
#include <memory>
#include <set>
#include <span>
#include <utility>
#include <vector>

#include "fickit/error.hpp"
#include "fickit/monte_carlo.hpp"

namespace fickit {

/// An ordered block of real observations. Order is part of the data (time
/// series), so nothing in the library permutes or subsets a Dataset except
/// the explicitly exchangeable resampling/leave-one-out procedures.
class Dataset {
 public:
  explicit Dataset(std::vector<double> values) : values_(std::move(values)) {
    if (values_.empty()) throw InvalidArgument("Dataset must hold at least one observation");
    for (std::size_t i = 0; i < values_.size(); ++i) {
      if (!std::isfinite(values_[i]))
        throw InvalidArgument("Dataset observation " + std::to_string(i) + " is not finite");
    }
  }

  std::span<const double> values() const noexcept { return values_; }
  std::size_t size() const noexcept { return values_.size(); }
  double operator[](std::size_t i) const { return values_[i]; }

  friend bool operator==(const Dataset&, const Dataset&) = default;

 private:
  std::vector<double> values_;
};

/// Continuous coordinates plus optional discrete tags (e.g. selected Fourier
/// indices). Only the continuous coordinates count towards the dimension.
class ParameterVector {
 public:
  ParameterVector() = default;
  explicit ParameterVector(std::vector<double> coordinates, std::vector<int> tags = {})
      : coordinates_(std::move(coordinates)), tags_(std::move(tags)) {
    std::set<int> seen(tags_.begin(), tags_.end());
    if (seen.size() != tags_.size()) throw InvalidArgument("ParameterVector tags must be distinct");
  }

  std::span<const double> coordinates() const noexcept { return coordinates_; }
  std::span<const int> tags() const noexcept { return tags_; }
  std::size_t dimension() const noexcept { return coordinates_.size(); }
  double operator[](std::size_t i) const { return coordinates_[i]; }

  ParameterVector with_coordinate(std::size_t i, double value) const {
    ParameterVector copy = *this;
    copy.coordinates_.at(i) = value;
    return copy;
  }

  friend bool operator==(const ParameterVector&, const ParameterVector&) = default;

 private:
  std::vector<double> coordinates_;
  std::vector<int> tags_;
};

/// q(.|theta): a parameter vector together with its log-density (nats) and a
/// sampler. Copies share the immutable state behind the callables.
class FittedModel {
 public:
  using LogDensity = std::function<double(const Dataset&)>;
  using Sampler = std::function<Dataset(std::size_t, RngStream&)>;

  FittedModel(ParameterVector params, LogDensity log_density, Sampler sampler)
      : params_(std::move(params)),
        log_density_(std::move(log_density)),
        sampler_(std::move(sampler)) {}

  const ParameterVector& params() const noexcept { return params_; }

  /// The same distribution presented as having no free parameters.
  FittedModel without_parameters() const { return FittedModel(ParameterVector(), log_density_, sampler_); }

  double log_density(const Dataset& data) const { return log_density_(data); }

  Dataset sample(std::size_t sample_size, RngStream& rng) const {
    Dataset out = sampler_(sample_size, rng);
    if (out.size() != sample_size)
      throw NumericalError("sampler returned " + std::to_string(out.size()) +
                           " observations, expected " + std::to_string(sample_size));
    return out;
  }

 private:
  ParameterVector params_;
  LogDensity log_density_;
  Sampler sampler_;
};

}  // namespace fickit
