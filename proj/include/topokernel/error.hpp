#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace topokernel {

// Invalid argument passed to a library call (bad range, size mismatch, ...).
class ArgumentError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A dataset file is missing or unreadable.
class IngestionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A dataset file is readable but malformed.
class FormatError : public std::runtime_error {
 public:
  FormatError(const std::string& file, std::size_t line, const std::string& what)
      : std::runtime_error(file + ":" + std::to_string(line) + ": " + what),
        file_(file),
        line_(line) {}

  const std::string& file() const noexcept { return file_; }
  std::size_t line() const noexcept { return line_; }

 private:
  std::string file_;
  std::size_t line_;
};

// The dataset is well formed but outside what this library handles
// (e.g. more than two classes).
class UnsupportedDatasetError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// exp() of a spectral value would overflow a double.
class OverflowError : public std::overflow_error {
 public:
  using std::overflow_error::overflow_error;
};

class TrainingError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class StratificationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace topokernel
