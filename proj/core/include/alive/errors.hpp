#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace alive {

/// A step of the alive filter drew `trials` proposals without reaching the
/// required number of alive particles.
class CapExceeded : public std::runtime_error {
 public:
  CapExceeded(int step, std::uint64_t trials)
      : std::runtime_error("trial cap exceeded at step " + std::to_string(step) + " after " +
                           std::to_string(trials) + " trials"),
        step_(step),
        trials_(trials) {}

  int step() const noexcept { return step_; }
  std::uint64_t trials() const noexcept { return trials_; }

 private:
  int step_;
  std::uint64_t trials_;
};

class IndexOutOfRange : public std::out_of_range {
 public:
  using std::out_of_range::out_of_range;
};

class AllZeroWeights : public std::domain_error {
 public:
  AllZeroWeights() : std::domain_error("all resampling weights are zero") {}
};

class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t row, const std::string& what)
      : std::runtime_error("row " + std::to_string(row) + ": " + what), row_(row) {}
  std::size_t row() const noexcept { return row_; }

 private:
  std::size_t row_;
};

class NonPositiveIndex : public std::runtime_error {
 public:
  NonPositiveIndex(std::size_t row, double value)
      : std::runtime_error("row " + std::to_string(row) + ": index level " + std::to_string(value) +
                           " is not strictly positive"),
        row_(row) {}
  std::size_t row() const noexcept { return row_; }

 private:
  std::size_t row_;
};

class GridTooCoarse : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidMoments : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class InitFailed : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace alive
