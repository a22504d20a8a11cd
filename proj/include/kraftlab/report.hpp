#pragma once

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "kraftlab/dyadic.hpp"

namespace kraftlab {

/// A checked quantity: exact dyadic or floating point. The regime travels
/// with the value so reports state which arithmetic produced each verdict.
using Value = std::variant<Dyadic, double>;

/// Floating-point values render with 12 significant digits everywhere.
std::string format_double(double v);

/// Dyadic -> {"m": "<decimal>", "e": <int>}, double -> 12-significant-digit
/// string.
nlohmann::json value_to_json(const Value& v);

double value_to_double(const Value& v);

/// One verified inequality lhs <= rhs.
struct InequalityRecord {
  std::string name;
  std::optional<int> ell;  // block length the record refers to, if any
  Value lhs;
  Value rhs;
  bool holds = false;
  /// "exact" when both sides were compared as dyadics, "float" otherwise.
  std::string regime;
  nlohmann::json witness;  // extremal state/entry behind lhs, or null

  nlohmann::json to_json() const;
};

/// Exact comparison.
InequalityRecord make_exact_record(std::string name, std::optional<int> ell,
                                   Dyadic lhs, Dyadic rhs);

/// Float comparison with additive tolerance tol * max(1, |rhs|).
InequalityRecord make_float_record(std::string name, std::optional<int> ell,
                                   double lhs, double rhs, double tol = 1e-9);

struct GKIReport {
  std::vector<InequalityRecord> records;
  nlohmann::json context;  // sizes, l_max, irreducibility, spectral data

  bool all_hold() const;
  nlohmann::json to_json() const;
};

}  // namespace kraftlab
