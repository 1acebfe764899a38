#pragma once

// Report documents for the command-line tool: JSON objects for each result
// type, CSV rows, and the fixed top-level envelope. Entropy-valued fields are
// multiplied by `unit` (1 for nats, 1/log 2 for bits); everything else is
// reported as computed.

#include <json.hpp>
#include <string>
#include <vector>

#include "cvxbound/bounds.hpp"
#include "cvxbound/common_info.hpp"
#include "cvxbound/oracle.hpp"
#include "cvxbound/verify.hpp"

namespace cvxbound::report {

using Json = nlohmann::json;

/// Conversion factor for --bits.
double unit_factor(bool bits);

/// null for non-finite values so that the document stays valid JSON.
Json number(double x);

Json to_json(const ConditionReport& c);
Json to_json(const OracleEstimate& e);
Json to_json(const PropertyResult& p);

/// Bracket plus derived entropy-scale fields for entropy and Renyi functionals.
Json to_json(const BoundResult& r, const Functional& functional, const ConvexityFamily& family, double unit);

Json to_json(const CommonInfoBracket& b, double unit);

/// {command, config_echo, results, properties, diagnostics, versions}.
Json envelope(const std::string& command, Json config_echo, Json results, Json properties, Json diagnostics);

/// Shortest decimal text that parses back to x; empty for NaN.
std::string format_number(double x);

/// Comma-joined row; fields containing commas or quotes are quoted.
std::string csv_row(const std::vector<std::string>& fields);

}  // namespace cvxbound::report
