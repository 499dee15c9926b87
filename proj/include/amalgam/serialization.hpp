#pragma once

#include <stdexcept>
#include <string>

#include <json.hpp>

#include "amalgam/amalgam_norm.hpp"
#include "amalgam/atomic_decomposition.hpp"
#include "amalgam/duality.hpp"

namespace amalgam::io {

using json = nlohmann::json;

inline constexpr const char* kSchema = "amalgam/1";

/// Malformed or inconsistent input document. The message names the line or
/// field at fault.
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Parses text, reporting syntax errors as InputError with line and column.
json parse_document(const std::string& text);

/// Canonical form: sorted keys, shortest round-trip floats, no whitespace.
std::string canonical(const json& doc);

/// q and r may be infinite; they are written as the string "inf".
json exponent_to_json(double value);
double exponent_from_json(const json& value, const std::string& field);

json to_json(const FilteredSpace& space);
SpacePtr space_from_json(const json& doc);

json to_json(const RandomVariable& x);
RandomVariable random_variable_from_json(const json& doc, std::size_t expected_size);

/// Array of integers with null for never.
json to_json(const StoppingTime& nu);
StoppingTime stopping_time_from_json(const json& doc, const FilteredSpace& space, const std::string& field);

/// {"schema", "space", "levels"}. Reading also accepts "terminal" in place
/// of "levels".
json to_json(const Martingale& f);
Martingale martingale_from_json(const json& doc);

/// {"schema", "flavor", "defn", "p", "q", "source_norm",
///  "triples": [{"k", "lambda", "nu", "atom_terminal"}]}.
json to_json(const Decomposition& d);
Decomposition decomposition_from_json(const json& doc, SpacePtr space);

json to_json(const HardyNorms& norms);
json to_json(const AtomReport& report);
json to_json(const BoundCertificate& cert);
json to_json(const CampanatoResult& result);
json to_json(const DualityCertificate& cert);
json to_json(const ReverseMinkowskiReport& report);

}  // namespace amalgam::io
