#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace oseledets {

/// Root of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid parameter values (non-stochastic matrices, p <= 1, n too small, ...).
class ParameterError : public Error {
 public:
  using Error::Error;
};

/// Offsets outside a generated orbit window.
class RangeError : public Error {
 public:
  using Error::Error;
};

/// Rank-deficient basis where full rank was required.
class RankError : public Error {
 public:
  using Error::Error;
};

/// Two subspaces that fail to be complementary.
class ComplementarityError : public Error {
 public:
  using Error::Error;
};

/// A sequence of subspaces that is not nested.
class FiltrationError : public Error {
 public:
  using Error::Error;
};

/// Push-forward of a subspace lost rank.
class CollapseError : public Error {
 public:
  CollapseError(const std::string& what, std::size_t step)
      : Error(what), step_(step) {}
  std::size_t step() const noexcept { return step_; }

 private:
  std::size_t step_;
};

/// Operation not available for the given branch form.
class UnsupportedFormError : public Error {
 public:
  using Error::Error;
};

/// Experiment configuration rejected; carries the offending field path.
class ConfigError : public Error {
 public:
  ConfigError(std::string field, const std::string& what)
      : Error(field + ": " + what), field_(std::move(field)) {}
  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

/// A module error raised while running one stage of an experiment.
class StageError : public Error {
 public:
  StageError(std::string stage, const std::string& what)
      : Error(stage + " stage failed: " + what), stage_(std::move(stage)) {}
  const std::string& stage() const noexcept { return stage_; }

 private:
  std::string stage_;
};

}  // namespace oseledets
