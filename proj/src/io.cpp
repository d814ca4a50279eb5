#include "minimax_bid/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace minimax_bid {
namespace io {

double sig12(double x) {
    if (!std::isfinite(x) || x == 0.0) return x;
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.12g", x);
    return std::strtod(buf, nullptr);
}

std::string fmt12(double x) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.12g", x);
    return buf;
}

json curve_to_json(const MarginalValueCurve& v) {
    json segs = json::array();
    for (const auto& s : v.segments()) segs.push_back({{"upto", sig12(s.upto)}, {"v", sig12(s.level)}});
    return {{"Q", sig12(v.total_quantity())}, {"segments", segs}};
}

MarginalValueCurve curve_from_json(const json& j) {
    if (!j.contains("segments") || !j["segments"].is_array() || j["segments"].empty())
        throw std::invalid_argument("curve json: missing segments");
    std::vector<MarginalValueCurve::Segment> segs;
    for (const auto& s : j["segments"])
        segs.push_back({s.at("upto").get<double>(), s.at("v").get<double>()});
    if (j.contains("Q")) {
        const double q = j["Q"].get<double>();
        if (std::abs(q - segs.back().upto) > kRangeSlack * std::max(1.0, q))
            throw std::invalid_argument("curve json: Q must equal the last breakpoint");
    }
    return MarginalValueCurve(std::move(segs));
}

json step_bid_to_json(const StepBid& bid) {
    json pts = json::array();
    for (const auto& p : bid.points()) pts.push_back({{"q", sig12(p.q)}, {"b", sig12(p.b)}});
    return {{"points", pts}};
}

StepBid step_bid_from_json(const json& j) {
    if (!j.contains("points") || !j["points"].is_array())
        throw std::invalid_argument("bid json: missing points");
    std::vector<StepBid::Point> pts;
    for (const auto& p : j["points"])
        pts.push_back({p.at("q").get<double>(), p.at("b").get<double>()});
    return StepBid(std::move(pts));
}

json supply_to_json(const oracle::SupplyCurve& s) {
    json steps = json::array();
    for (const auto& step : s.steps) steps.push_back({{"upto", sig12(step.upto)}, {"p", sig12(step.p)}});
    return {{"steps", steps}};
}

json clearing_to_json(const market::ClearingOutcome& out) {
    json alloc = json::array();
    json transfers = json::array();
    for (double a : out.allocations) alloc.push_back(sig12(a));
    for (double t : out.transfers) transfers.push_back(sig12(t));
    return {{"price", sig12(out.price)},
            {"price_lab", sig12(out.price_lab)},
            {"price_frb", sig12(out.price_frb)},
            {"pricing", out.pricing == market::PricingRule::LAB ? "lab" : "frb"},
            {"payment", out.payment == market::PaymentRule::PAB ? "pab" : "upa"},
            {"allocations", alloc},
            {"transfers", transfers},
            {"revenue", sig12(market::revenue(out))}};
}

json band_to_json(const upa::MinimaxBand& band) {
    json intervals = json::array();
    for (std::size_t k = 0; k < band.lo.size(); ++k)
        intervals.push_back({{"lo", sig12(band.lo[k])}, {"hi", sig12(band.hi[k])}});
    return {{"loss", sig12(band.loss)},
            {"unit_quantity", sig12(band.unit_quantity)},
            {"intervals", intervals}};
}

json verify_to_json(const oracle::VerifyReport& report) {
    return {{"analytic_max_loss", sig12(report.analytic)},
            {"brute_force_max_loss", sig12(report.brute_force)},
            {"difference", sig12(report.difference)},
            {"tolerance", sig12(report.tolerance)},
            {"pass", report.pass},
            {"witness", supply_to_json(report.witness)}};
}

json pab_solution_to_json(const pab::PabSolution& sol, const std::string& format,
                          const std::string& mode) {
    json j = {{"format", format},
              {"mode", mode},
              {"loss", sig12(sol.loss)},
              {"bid", step_bid_to_json(sol.bid)},
              {"diagnostics",
               {{"iterations", sol.diagnostics.iterations},
                {"residual", sig12(sol.diagnostics.residual)},
                {"warnings", sol.diagnostics.warnings}}}};
    if (!sol.levels.empty()) {
        json levels = json::array();
        for (double b : sol.levels) levels.push_back(sig12(b));
        j["levels"] = levels;
        j["unit_quantity"] = sig12(sol.unit_quantity);
    }
    return j;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

json load_json(const std::string& path) {
    try {
        return json::parse(read_file(path));
    } catch (const json::parse_error& e) {
        throw std::invalid_argument("invalid json in " + path + ": " + e.what());
    }
}

} // namespace io
} // namespace minimax_bid
