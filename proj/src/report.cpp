#include "kraftlab/report.hpp"

#include <cmath>
#include <cstdio>

namespace kraftlab {

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

nlohmann::json value_to_json(const Value& v) {
  if (const Dyadic* d = std::get_if<Dyadic>(&v)) {
    return nlohmann::json{{"m", d->mantissa_str()},
                          {"e", static_cast<std::int64_t>(d->exponent())}};
  }
  return format_double(std::get<double>(v));
}

double value_to_double(const Value& v) {
  if (const Dyadic* d = std::get_if<Dyadic>(&v)) return d->to_double();
  return std::get<double>(v);
}

nlohmann::json InequalityRecord::to_json() const {
  nlohmann::json j{{"inequality", name},
                   {"lhs", value_to_json(lhs)},
                   {"rhs", value_to_json(rhs)},
                   {"holds", holds},
                   {"regime", regime},
                   {"witness", witness}};
  if (ell) j["ell"] = *ell;
  return j;
}

InequalityRecord make_exact_record(std::string name, std::optional<int> ell,
                                   Dyadic lhs, Dyadic rhs) {
  InequalityRecord r;
  r.name = std::move(name);
  r.ell = ell;
  r.holds = lhs <= rhs;
  r.lhs = std::move(lhs);
  r.rhs = std::move(rhs);
  r.regime = "exact";
  return r;
}

InequalityRecord make_float_record(std::string name, std::optional<int> ell,
                                   double lhs, double rhs, double tol) {
  InequalityRecord r;
  r.name = std::move(name);
  r.ell = ell;
  r.lhs = lhs;
  r.rhs = rhs;
  r.holds = lhs <= rhs + tol * std::max(1.0, std::abs(rhs));
  r.regime = "float";
  return r;
}

bool GKIReport::all_hold() const {
  for (const InequalityRecord& r : records)
    if (!r.holds) return false;
  return true;
}

nlohmann::json GKIReport::to_json() const {
  nlohmann::json arr = nlohmann::json::array();
  for (const InequalityRecord& r : records) arr.push_back(r.to_json());
  return nlohmann::json{{"context", context}, {"inequalities", arr},
                        {"all_hold", all_hold()}};
}

}  // namespace kraftlab
