#ifndef TORUSOPT_IO_HPP
#define TORUSOPT_IO_HPP

// JSON and CSV emission. Doubles go out as JSON numbers (shortest round-trip
// form); long double margins go out as strings with 21 significant digits so
// values below the double range survive.

#include <string>
#include <vector>

#include <json.hpp>

#include "torusopt/apxbounds.hpp"
#include "torusopt/energy.hpp"
#include "torusopt/magic.hpp"
#include "torusopt/search.hpp"

namespace torusopt {

using Json = nlohmann::ordered_json;

std::string long_double_string(long double v);

/// {"points": [[x1, x2], ...], "r": [r1, r2]}
Json config_to_json(const Configuration<double>& cfg);
/// Inverse of config_to_json; throws std::invalid_argument on malformed input.
Configuration<double> config_from_json(const Json& j);

Json to_json(const EnergyReport<double>& e);
Json to_json(const CertReport& r);
Json to_json(const SearchResult& r);
Json to_json(const BoundLedgerEntry& e);

/// RFC 4180 scan table, 17 significant digits.
std::string scan_csv_header();
std::string scan_csv_row(const CertReport& r);

}  // namespace torusopt

#endif  // TORUSOPT_IO_HPP
