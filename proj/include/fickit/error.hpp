#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace fickit {

/// Base class of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A precondition on an argument was violated (wrong size, out of range, ...).
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// A numerical quantity could not be computed: non-finite log-density,
/// degenerate fit, singular matrix.
class NumericalError : public Error {
 public:
  using Error::Error;
};

/// A Monte Carlo replicate failed. Carries the replicate index and the seed
/// of its random stream so the failure can be replayed in isolation.
class ReplicateError : public NumericalError {
 public:
  ReplicateError(std::size_t replicate, std::uint64_t stream_seed, const std::string& cause)
      : NumericalError("replicate " + std::to_string(replicate) + " (stream seed " +
                       std::to_string(stream_seed) + ") failed: " + cause),
        replicate_(replicate),
        stream_seed_(stream_seed) {}

  std::size_t replicate() const noexcept { return replicate_; }
  std::uint64_t stream_seed() const noexcept { return stream_seed_; }

 private:
  std::size_t replicate_;
  std::uint64_t stream_seed_;
};

}  // namespace fickit
