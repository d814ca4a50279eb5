#include "minimax_bid/cli.hpp"

#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "minimax_bid/frb.hpp"
#include "minimax_bid/io.hpp"
#include "minimax_bid/market.hpp"
#include "minimax_bid/oracle.hpp"
#include "minimax_bid/pab.hpp"
#include "minimax_bid/regret.hpp"
#include "minimax_bid/sim.hpp"
#include "minimax_bid/upa.hpp"

namespace minimax_bid {
namespace cli {

namespace {

using io::json;

void emit(const std::string& text, const std::string& out_path, std::ostream& out) {
    if (out_path.empty()) {
        out << text;
        if (!text.empty() && text.back() != '\n') out << '\n';
    } else {
        std::ofstream f(out_path);
        if (!f) throw std::invalid_argument("cannot write file: " + out_path);
        f << text;
    }
}

void emit_json(const json& j, const std::string& out_path, std::ostream& out) {
    emit(j.dump(2), out_path, out);
}

Format parse_format(const std::string& name) {
    if (name == "pab") return Format::PAB;
    if (name == "upa" || name == "lab") return Format::LAB;
    throw std::invalid_argument("unknown format: " + name);
}

std::string csv_of_bid(const StepBid& bid) {
    std::ostringstream ss;
    ss << "q,b\n";
    double prev_q = 0.0;
    for (const auto& p : bid.points()) {
        ss << io::fmt12(prev_q) << "," << io::fmt12(p.b) << "\n";
        ss << io::fmt12(p.q) << "," << io::fmt12(p.b) << "\n";
        prev_q = p.q;
    }
    return ss.str();
}

// BidVector from either {"levels": [...], "unit_quantity": w} or a StepBid
// on a uniform grid.
BidVector bid_vector_from_json(const json& j) {
    if (j.contains("levels")) {
        std::vector<double> levels = j.at("levels").get<std::vector<double>>();
        return BidVector(std::move(levels), j.at("unit_quantity").get<double>());
    }
    const StepBid bid = io::step_bid_from_json(j);
    if (bid.empty()) throw std::invalid_argument("estimate: bid has no points");
    const auto& pts = bid.points();
    const double w = pts.front().q;
    std::vector<double> levels(pts.size());
    for (std::size_t k = 0; k < pts.size(); ++k) {
        const double expected = w * static_cast<double>(k + 1);
        if (std::abs(pts[k].q - expected) > 1e-9 * std::max(1.0, expected))
            throw std::invalid_argument("estimate: bid points must lie on a uniform grid");
        levels[k] = pts[k].b;
    }
    return BidVector(std::move(levels), w);
}

struct SolveArgs {
    std::string format;
    std::string mode = "multiunit";
    std::string values_path;
    std::string out_path;
    std::string csv_path;
    std::size_t bid_points = 0;
    std::size_t grid = 256;
};

int run_solve(const SolveArgs& a, std::ostream& out) {
    const auto curve = io::curve_from_json(io::load_json(a.values_path));
    json result;
    StepBid bid_for_csv;

    if (a.format == "frb") {
        if (a.mode != "multiunit")
            throw std::invalid_argument("frb supports only --mode multiunit");
        if (a.bid_points == 0) throw std::invalid_argument("solve: -M is required");
        const auto values = ValueVector::from_curve(curve, a.bid_points);
        const BidVector bid = frb::solve_frb(values);
        pab::PabSolution sol;
        sol.levels = bid.entries();
        sol.unit_quantity = bid.unit_quantity();
        sol.bid = StepBid::from_bid_vector(bid);
        sol.loss = frb::max_loss(bid, values);
        result = io::pab_solution_to_json(sol, "frb", "multiunit");
        bid_for_csv = sol.bid;
    } else if (a.format == "pab") {
        pab::PabSolution sol;
        if (a.mode == "multiunit") {
            if (a.bid_points == 0) throw std::invalid_argument("solve: -M is required");
            sol = pab::solve_multiunit(ValueVector::from_curve(curve, a.bid_points));
        } else if (a.mode == "constrained") {
            if (a.bid_points == 0) throw std::invalid_argument("solve: -M is required");
            sol = pab::solve_constrained(curve, a.bid_points);
        } else if (a.mode == "unconstrained") {
            sol = pab::solve_unconstrained(curve, a.grid);
        } else {
            throw std::invalid_argument("unknown mode: " + a.mode);
        }
        result = io::pab_solution_to_json(sol, "pab", a.mode);
        bid_for_csv = sol.bid;
    } else if (a.format == "upa" || a.format == "lab") {
        if (a.mode == "multiunit") {
            if (a.bid_points == 0) throw std::invalid_argument("solve: -M is required");
            const auto values = ValueVector::from_curve(curve, a.bid_points);
            const BidVector bid = upa::solve_cross_conditional(values);
            pab::PabSolution sol;
            sol.levels = bid.entries();
            sol.unit_quantity = bid.unit_quantity();
            sol.bid = StepBid::from_bid_vector(bid);
            sol.loss = regret::max_loss(Format::LAB, bid, values);
            result = io::pab_solution_to_json(sol, "upa", "multiunit");
            bid_for_csv = sol.bid;
        } else if (a.mode == "constrained") {
            if (a.bid_points == 0) throw std::invalid_argument("solve: -M is required");
            const auto sol = upa::solve_constrained(curve, a.bid_points);
            pab::PabSolution shim;
            shim.bid = sol.bid;
            shim.loss = sol.loss;
            shim.diagnostics = sol.diagnostics;
            result = io::pab_solution_to_json(shim, "upa", "constrained");
            bid_for_csv = sol.bid;
        } else if (a.mode == "unconstrained") {
            const StepBid bid = upa::solve_unconstrained_cross(curve, a.grid);
            const auto minimax = upa::unconstrained_minimax(curve, a.grid);
            pab::PabSolution shim;
            shim.bid = bid;
            shim.loss = minimax.loss;
            result = io::pab_solution_to_json(shim, "upa", "unconstrained");
            result["tangency_q"] = io::sig12(minimax.tangency_q);
            bid_for_csv = bid;
        } else {
            throw std::invalid_argument("unknown mode: " + a.mode);
        }
    } else {
        throw std::invalid_argument("unknown format: " + a.format);
    }

    emit_json(result, a.out_path, out);
    if (!a.csv_path.empty()) emit(csv_of_bid(bid_for_csv), a.csv_path, out);
    return 0;
}

} // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Minimax-loss bid solvers for pay-as-bid and uniform-price auctions"};
    app.require_subcommand(1);

    // solve -----------------------------------------------------------------
    SolveArgs solve_args;
    auto* solve = app.add_subcommand("solve", "Compute a minimax-loss bid");
    solve->add_option("--format", solve_args.format, "pab | upa | frb")->required();
    solve->add_option("--mode", solve_args.mode, "multiunit | constrained | unconstrained");
    solve->add_option("--values", solve_args.values_path, "marginal value curve JSON")->required();
    solve->add_option("-M,--bidpoints", solve_args.bid_points, "units / bid points");
    solve->add_option("--grid", solve_args.grid, "sampling grid for unconstrained modes");
    solve->add_option("--out", solve_args.out_path, "write JSON here instead of stdout");
    solve->add_option("--csv", solve_args.csv_path, "also write (q, b) samples as CSV");

    // loss ------------------------------------------------------------------
    std::string loss_format, loss_bid_path, loss_values_path, loss_out;
    auto* loss_cmd = app.add_subcommand("loss", "Maximal loss of a bid");
    loss_cmd->add_option("--format", loss_format, "pab | upa | lab")->required();
    loss_cmd->add_option("--bid", loss_bid_path, "step bid JSON")->required();
    loss_cmd->add_option("--values", loss_values_path, "marginal value curve JSON")->required();
    loss_cmd->add_option("--out", loss_out, "output path");

    // band ------------------------------------------------------------------
    std::string band_values, band_out;
    std::size_t band_units = 0;
    auto* band_cmd = app.add_subcommand("band", "Multi-unit uniform-price minimax band");
    band_cmd->add_option("--values", band_values, "marginal value curve JSON")->required();
    band_cmd->add_option("-M,--units", band_units, "number of units")->required();
    band_cmd->add_option("--out", band_out, "output path");

    // curves ----------------------------------------------------------------
    std::string curves_values, curves_out;
    double curves_loss = 0.0;
    std::size_t curves_grid = 512;
    auto* curves_cmd = app.add_subcommand("curves", "Iso-loss curves as CSV");
    curves_cmd->add_option("--values", curves_values, "marginal value curve JSON")->required();
    curves_cmd->add_option("--loss", curves_loss, "loss level L")->required();
    curves_cmd->add_option("--grid", curves_grid, "number of samples");
    curves_cmd->add_option("--out", curves_out, "output path");

    // clear -----------------------------------------------------------------
    std::string clear_bids, clear_pricing = "lab", clear_payment = "pab", clear_out;
    double clear_q = 0.0;
    std::uint64_t clear_seed = 0;
    bool clear_random_tie = false;
    auto* clear_cmd = app.add_subcommand("clear", "Clear a market of step bids");
    clear_cmd->add_option("--bids", clear_bids, "JSON array of step bids")->required();
    clear_cmd->add_option("-Q,--quantity", clear_q, "total supply")->required();
    clear_cmd->add_option("--pricing", clear_pricing, "lab | frb");
    clear_cmd->add_option("--payment", clear_payment, "pab | upa");
    clear_cmd->add_flag("--random-tie", clear_random_tie, "seeded random tie-breaking");
    clear_cmd->add_option("--seed", clear_seed, "seed for --random-tie");
    clear_cmd->add_option("--out", clear_out, "output path");

    // verify ----------------------------------------------------------------
    std::string verify_format, verify_bid, verify_values, verify_out;
    std::size_t verify_qgrid = 64, verify_pgrid = 64;
    double verify_tol = -1.0;
    std::uint64_t verify_seed = 1;
    auto* verify_cmd = app.add_subcommand("verify", "Brute-force check of the loss formulas");
    verify_cmd->add_option("--format", verify_format, "pab | upa | lab")->required();
    verify_cmd->add_option("--bid", verify_bid, "step bid JSON")->required();
    verify_cmd->add_option("--values", verify_values, "marginal value curve JSON")->required();
    verify_cmd->add_option("--qgrid", verify_qgrid, "quantity grid");
    verify_cmd->add_option("--pgrid", verify_pgrid, "price grid");
    verify_cmd->add_option("--tol", verify_tol, "tolerance (default 2*spacing*v(0))");
    verify_cmd->add_option("--seed", verify_seed, "seed for random supplies");
    verify_cmd->add_option("--out", verify_out, "output path");

    // simulate ----------------------------------------------------------------
    std::string sim_study = "revenue", sim_values, sim_out;
    std::vector<int> sim_n = {2, 5, 10};
    std::vector<int> sim_m = {1, 2, 3, 5, 10};
    double sim_q = 100.0;
    std::size_t sim_draws = 10000;
    std::int64_t sim_seed = -1;
    auto* sim_cmd = app.add_subcommand("simulate", "Monte Carlo revenue / loss studies");
    sim_cmd->add_option("--study", sim_study, "revenue | loss");
    sim_cmd->add_option("--seed", sim_seed, "master seed (required; no wall-clock seeding)");
    sim_cmd->add_option("--draws", sim_draws, "draws per (n, M) cell");
    sim_cmd->add_option("--n-list", sim_n, "bidder counts")->delimiter(',');
    sim_cmd->add_option("--M-list", sim_m, "bid point counts")->delimiter(',');
    sim_cmd->add_option("-Q,--quantity", sim_q, "total supply");
    sim_cmd->add_option("--values", sim_values, "value curve for the loss study");
    sim_cmd->add_option("--out", sim_out, "output path");

    // estimate ----------------------------------------------------------------
    std::string est_format = "pab", est_bid, est_out;
    auto* est_cmd = app.add_subcommand("estimate", "Recover values from a minimax-loss bid");
    est_cmd->add_option("--format", est_format, "pab");
    est_cmd->add_option("--bid", est_bid, "bid JSON (uniform-grid step bid or levels)")->required();
    est_cmd->add_option("--out", est_out, "output path");

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::CallForHelp& e) {
        out << app.help();
        return 0;
    } catch (const CLI::ParseError& e) {
        err << e.what() << "\n\n" << app.help();
        return 64;
    }

    try {
        if (solve->parsed()) return run_solve(solve_args, out);

        if (loss_cmd->parsed()) {
            const auto curve = io::curve_from_json(io::load_json(loss_values_path));
            const auto bid = io::step_bid_from_json(io::load_json(loss_bid_path));
            const Format format = parse_format(loss_format);
            const auto report = regret::max_loss_report(format, bid, curve);
            json per_point = json::array();
            auto add_point = [&](double q, double over, double under) {
                per_point.push_back({{"q", io::sig12(q)},
                                     {"over", io::sig12(over)},
                                     {"under", io::sig12(under)},
                                     {"max", io::sig12(std::max(over, under))}});
            };
            if (format == Format::PAB) {
                add_point(0.0, 0.0, regret::pab_under_regret(bid, curve, 0.0));
                for (double q : bid.quantities())
                    add_point(q, regret::pab_over_regret(bid, q),
                              regret::pab_under_regret(bid, curve, q));
            } else {
                const auto at0 = regret::lab_regrets(bid, curve, 0.0);
                add_point(0.0, at0.over, at0.under);
                for (double q : bid.quantities()) {
                    const auto r = regret::lab_regrets(bid, curve, q, regret::Side::AtStep);
                    add_point(q, r.over, r.under);
                }
            }
            emit_json({{"format", format == Format::PAB ? "pab" : "upa"},
                       {"max_loss", io::sig12(report.loss)},
                       {"argmax_q", io::sig12(report.argmax_q)},
                       {"per_point", per_point}},
                      loss_out, out);
            return 0;
        }

        if (band_cmd->parsed()) {
            const auto curve = io::curve_from_json(io::load_json(band_values));
            const auto band = upa::multiunit_minimax_band(ValueVector::from_curve(curve, band_units));
            emit_json(io::band_to_json(band), band_out, out);
            return 0;
        }

        if (curves_cmd->parsed()) {
            const auto curve = io::curve_from_json(io::load_json(curves_values));
            const auto c = upa::iso_loss(curve, curves_loss, curves_grid);
            std::ostringstream ss;
            ss << "q,upper,lower\n";
            for (std::size_t j = 0; j < c.q.size(); ++j)
                ss << io::fmt12(c.q[j]) << "," << io::fmt12(c.upper[j]) << ","
                   << io::fmt12(c.lower[j]) << "\n";
            emit(ss.str(), curves_out, out);
            return 0;
        }

        if (clear_cmd->parsed()) {
            const json j = io::load_json(clear_bids);
            if (!j.is_array()) throw std::invalid_argument("clear: expected a JSON array of bids");
            std::vector<StepBid> bids;
            for (const auto& item : j) bids.push_back(io::step_bid_from_json(item));
            const auto pricing = clear_pricing == "frb" ? market::PricingRule::FRB
                                                        : market::PricingRule::LAB;
            const auto payment = clear_payment == "upa" ? market::PaymentRule::UPA
                                                        : market::PaymentRule::PAB;
            const auto tie = clear_random_tie ? market::TiePolicy::random(clear_seed)
                                              : market::TiePolicy::pro_rata();
            emit_json(io::clearing_to_json(market::clear(bids, clear_q, pricing, payment, tie)),
                      clear_out, out);
            return 0;
        }

        if (verify_cmd->parsed()) {
            const auto curve = io::curve_from_json(io::load_json(verify_values));
            const auto bid = io::step_bid_from_json(io::load_json(verify_bid));
            const Format format = parse_format(verify_format);
            const double tol = verify_tol > 0.0 ? verify_tol
                                                : oracle::default_tolerance(curve, verify_qgrid);
            const auto report =
                oracle::verify(bid, curve, format, tol, verify_qgrid, verify_pgrid, verify_seed);
            emit_json(io::verify_to_json(report), verify_out, out);
            return 0;
        }

        if (sim_cmd->parsed()) {
            if (sim_seed < 0)
                throw std::invalid_argument("simulate: --seed is required (no wall-clock seeding)");
            if (sim_study == "revenue") {
                sim::SimConfig cfg;
                cfg.n_bidders = sim_n;
                cfg.bid_points = sim_m;
                cfg.total_quantity = sim_q;
                cfg.distribution = sim::TruncatedLognormal(0.5, 2.0, 1.0);
                cfg.draws = sim_draws;
                cfg.seed = static_cast<std::uint64_t>(sim_seed);
                const auto table = sim::run_revenue_study(cfg);
                std::ostringstream ss;
                ss << "n,M,rev_pab_mean,rev_upa_mean,share_upa_higher\n";
                for (const auto& cell : table)
                    ss << cell.n << "," << cell.bid_points << ","
                       << io::fmt12(cell.rev_pab_mean) << "," << io::fmt12(cell.rev_upa_mean)
                       << "," << io::fmt12(cell.share_upa_higher) << "\n";
                emit(ss.str(), sim_out, out);
            } else if (sim_study == "loss") {
                const auto curve = sim_values.empty()
                                       ? MarginalValueCurve::constant(1.0, sim_q)
                                       : io::curve_from_json(io::load_json(sim_values));
                const auto rows = sim::run_loss_study(sim_m, curve);
                std::ostringstream ss;
                ss << "M,loss_pab,loss_upa\n";
                for (const auto& row : rows)
                    ss << row.bid_points << "," << io::fmt12(row.loss_pab) << ","
                       << io::fmt12(row.loss_upa) << "\n";
                emit(ss.str(), sim_out, out);
            } else {
                throw std::invalid_argument("unknown study: " + sim_study);
            }
            return 0;
        }

        if (est_cmd->parsed()) {
            if (est_format != "pab")
                throw std::invalid_argument("estimate: only --format pab is identifiable");
            const auto bid = bid_vector_from_json(io::load_json(est_bid));
            const auto values = pab::invert_multiunit(bid);
            json result = {{"values", json::array()},
                           {"unit_quantity", io::sig12(values.unit_quantity())},
                           {"Q", io::sig12(values.total_quantity())}};
            for (double v : values.entries()) result["values"].push_back(io::sig12(v));
            if (values.entries().back() > 0.0) result["curve"] = io::curve_to_json(values.to_curve());
            emit_json(result, est_out, out);
            return 0;
        }
    } catch (const solver_error& e) {
        emit_json({{"error", {{"type", "solver"}, {"message", e.what()}}}} , "", out);
        return 3;
    } catch (const std::invalid_argument& e) {
        emit_json({{"error", {{"type", "validation"}, {"message", e.what()}}}}, "", out);
        return 2;
    } catch (const std::domain_error& e) {
        emit_json({{"error", {{"type", "validation"}, {"message", e.what()}}}}, "", out);
        return 2;
    } catch (const json::exception& e) {
        emit_json({{"error", {{"type", "validation"}, {"message", e.what()}}}}, "", out);
        return 2;
    }

    err << app.help();
    return 64;
}

} // namespace cli
} // namespace minimax_bid
