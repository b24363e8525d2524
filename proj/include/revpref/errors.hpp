#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace revpref {

/// Malformed or inconsistent input data. `row()` is the 1-based CSV line
/// number when the error comes from ingestion, 0 otherwise.
class DatasetError : public std::invalid_argument {
 public:
  explicit DatasetError(const std::string& what, std::size_t row = 0)
      : std::invalid_argument(row == 0 ? what : "row " + std::to_string(row) + ": " + what),
        row_(row) {}

  std::size_t row() const { return row_; }

 private:
  std::size_t row_;
};

/// A documented operation precondition does not hold.
class PreconditionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// An enumeration or search exceeded its configured budget. Raised instead of
/// returning an approximation.
class EnumerationCapExceeded : public std::runtime_error {
 public:
  EnumerationCapExceeded(const std::string& what, std::string cap_name, std::size_t cap)
      : std::runtime_error(what), cap_name_(std::move(cap_name)), cap_(cap) {}

  const std::string& cap_name() const { return cap_name_; }
  std::size_t cap() const { return cap_; }

 private:
  std::string cap_name_;
  std::size_t cap_;
};

/// Budgets for the combinatorial searches. `from_environment()` applies the
/// REVPREF_MAX_ENUM override to `max_enum`.
struct Limits {
  /// Node budget for order search and minimum-removal-set listing.
  std::size_t max_enum = 1'000'000;
  /// Largest cone union evaluated by inclusion-exclusion.
  std::size_t max_cone_union = 20;
  /// Order searches work on 64-bit observation masks.
  std::size_t max_observations = 64;

  static Limits from_environment();
};

}  // namespace revpref
