#pragma once

#include <string>

#include <json.hpp>

#include "minimax_bid/market.hpp"
#include "minimax_bid/oracle.hpp"
#include "minimax_bid/pab.hpp"
#include "minimax_bid/upa.hpp"
#include "minimax_bid/values.hpp"

namespace minimax_bid {
namespace io {

using json = nlohmann::json;

/// Round to 12 significant digits; all serialized numbers go through this.
double sig12(double x);

/// Format with 12 significant digits (CSV output).
std::string fmt12(double x);

// Curve schema: {"Q": number, "segments": [{"upto": number, "v": number}]}.
json curve_to_json(const MarginalValueCurve& v);
MarginalValueCurve curve_from_json(const json& j);

// Bid schema: {"points": [{"q": number, "b": number}]}.
json step_bid_to_json(const StepBid& bid);
StepBid step_bid_from_json(const json& j);

json supply_to_json(const oracle::SupplyCurve& s);
json clearing_to_json(const market::ClearingOutcome& out);
json band_to_json(const upa::MinimaxBand& band);
json verify_to_json(const oracle::VerifyReport& report);

json pab_solution_to_json(const pab::PabSolution& sol, const std::string& format,
                          const std::string& mode);

std::string read_file(const std::string& path);
json load_json(const std::string& path);

} // namespace io
} // namespace minimax_bid
