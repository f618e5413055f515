#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace zdip {

// Base class for every error thrown by this library.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// ---- input validation -------------------------------------------------

class EmptyInput : public Error {
 public:
  EmptyInput() : Error("input is empty") {}
  explicit EmptyInput(const std::string& what) : Error(what) {}
};

class NonFiniteValue : public Error {
 public:
  explicit NonFiniteValue(std::size_t index)
      : Error("non-finite value at index " + std::to_string(index)),
        index_(index) {}
  std::size_t index() const { return index_; }

 private:
  std::size_t index_;
};

class SampleTooSmall : public Error {
 public:
  SampleTooSmall(std::int64_t n, std::int64_t minimum)
      : Error("sample size " + std::to_string(n) + " is below the minimum " +
              std::to_string(minimum)),
        n_(n),
        minimum_(minimum) {}
  std::int64_t n() const { return n_; }
  std::int64_t minimum() const { return minimum_; }

 private:
  std::int64_t n_;
  std::int64_t minimum_;
};

// Wraps a per-item error from a batch operation with the failing index.
class BatchItemError : public Error {
 public:
  BatchItemError(std::size_t index, const std::string& inner)
      : Error("item " + std::to_string(index) + ": " + inner),
        index_(index) {}
  std::size_t index() const { return index_; }

 private:
  std::size_t index_;
};

// ---- null model / table -----------------------------------------------

class InvalidGridPoint : public Error {
 public:
  explicit InvalidGridPoint(std::int64_t n)
      : Error("grid point n = " + std::to_string(n) +
              " is invalid (must be >= 4 and strictly increasing)") {}
  InvalidGridPoint(std::int64_t n, const std::string& reason)
      : Error("grid point n = " + std::to_string(n) + " is invalid: " + reason) {}
};

class InvalidReplicates : public Error {
 public:
  InvalidReplicates(std::int64_t got, std::int64_t minimum)
      : Error("replicate count " + std::to_string(got) +
              " is below the minimum " + std::to_string(minimum)) {}
};

class DegenerateEnsemble : public Error {
 public:
  explicit DegenerateEnsemble(const std::string& what) : Error(what) {}
};

class BelowTableMinimum : public Error {
 public:
  BelowTableMinimum(std::int64_t n, std::int64_t table_min)
      : Error("n = " + std::to_string(n) +
              " is below the table minimum n = " + std::to_string(table_min)) {}
};

class FormatVersionMismatch : public Error {
 public:
  explicit FormatVersionMismatch(const std::string& found)
      : Error("unsupported table format: " + found) {}
};

class CorruptTable : public Error {
 public:
  explicit CorruptTable(const std::string& reason)
      : Error("corrupt table: " + reason) {}
};

class MissingColumn : public Error {
 public:
  explicit MissingColumn(const std::string& name)
      : Error("missing column: " + name) {}
};

// ---- calibration ------------------------------------------------------

class InsufficientEnsemble : public Error {
 public:
  InsufficientEnsemble(std::int64_t got, std::int64_t minimum,
                       const std::string& what_kind)
      : Error(what_kind + " count " + std::to_string(got) +
              " is below the minimum " + std::to_string(minimum)) {}
};

// ---- mixtures -----------------------------------------------------------

class UnknownPreset : public Error {
 public:
  explicit UnknownPreset(const std::string& name)
      : Error("unknown mixture preset: \"" + name + "\"") {}
};

class InvalidMixture : public Error {
 public:
  explicit InvalidMixture(const std::string& reason)
      : Error("invalid mixture spec: " + reason) {}
};

}  // namespace zdip
