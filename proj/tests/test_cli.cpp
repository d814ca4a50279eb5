#include <doctest.h>

#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "minimax_bid/cli.hpp"
#include "minimax_bid/io.hpp"
#include "minimax_bid/upa.hpp"

using namespace minimax_bid;
using nlohmann::json;

namespace {

struct CliResult {
    int code;
    std::string out;
    std::string err;
};

CliResult run_cli(const std::vector<std::string>& args) {
    std::ostringstream out, err;
    const int code = cli::run(args, out, err);
    return {code, out.str(), err.str()};
}

std::string write_temp(const std::string& name, const std::string& content) {
    const std::string path = "cli_test_" + name;
    std::ofstream f(path);
    f << content;
    return path;
}

} // namespace

TEST_CASE("solve subcommand reproduces the direct library call byte for byte") {
    const auto values = write_temp("const.json", R"({"Q":1.0,"segments":[{"upto":1.0,"v":1.0}]})");
    const auto r = run_cli({"solve", "--format", "upa", "--mode", "constrained", "--values",
                            values, "-M", "1"});
    REQUIRE(r.code == 0);
    const json parsed = json::parse(r.out);
    CHECK(parsed["loss"].get<double>() == doctest::Approx(0.381966).epsilon(1e-5));

    // Byte-identical to serializing the library result directly.
    const auto direct = upa::solve_constrained(MarginalValueCurve::constant(1.0, 1.0), 1);
    pab::PabSolution shim;
    shim.bid = direct.bid;
    shim.loss = direct.loss;
    shim.diagnostics = direct.diagnostics;
    const std::string expected = io::pab_solution_to_json(shim, "upa", "constrained").dump(2) + "\n";
    CHECK(r.out == expected);
    std::remove(values.c_str());
}

TEST_CASE("loss subcommand reports total surplus for the zero-ish bid") {
    const auto values = write_temp("v.json", R"({"Q":1.0,"segments":[{"upto":1.0,"v":1.0}]})");
    const auto bid = write_temp("zero.json", R"({"points":[{"q":1.0,"b":0.0}]})");
    const auto r = run_cli({"loss", "--format", "lab", "--bid", bid, "--values", values});
    REQUIRE(r.code == 0);
    const json parsed = json::parse(r.out);
    CHECK(parsed["max_loss"].get<double>() == doctest::Approx(1.0));
    CHECK(parsed["per_point"].size() == 2);
    std::remove(values.c_str());
    std::remove(bid.c_str());
}

TEST_CASE("estimate round-trips the solver output") {
    const auto values = write_temp("v2.json",
                                   R"({"Q":2.0,"segments":[{"upto":1.0,"v":1.0},{"upto":2.0,"v":0.5}]})");
    const auto solved = run_cli({"solve", "--format", "pab", "--mode", "multiunit", "--values",
                                 values, "-M", "2"});
    REQUIRE(solved.code == 0);
    const json sol = json::parse(solved.out);
    const auto bid_file = write_temp("bid.json", sol["bid"].dump());
    const auto estimated = run_cli({"estimate", "--format", "pab", "--bid", bid_file});
    REQUIRE(estimated.code == 0);
    const json est = json::parse(estimated.out);
    CHECK(est["values"][0].get<double>() == doctest::Approx(1.0).epsilon(1e-7));
    CHECK(est["values"][1].get<double>() == doctest::Approx(0.5).epsilon(1e-7));
    std::remove(values.c_str());
    std::remove(bid_file.c_str());
}

TEST_CASE("exit codes: validation 2, usage 64, missing seed 2") {
    const auto bad = write_temp("bad.json", R"({"Q":1.0,"segments":[{"upto":1.0,"v":-3.0}]})");
    const auto r = run_cli({"solve", "--format", "pab", "--mode", "constrained", "--values", bad,
                            "-M", "1"});
    CHECK(r.code == 2);
    CHECK(json::parse(r.out).contains("error"));
    std::remove(bad.c_str());

    const auto usage = run_cli({"solve", "--definitely-not-a-flag"});
    CHECK(usage.code == 64);

    const auto no_seed = run_cli({"simulate", "--study", "revenue"});
    CHECK(no_seed.code == 2);
    CHECK(json::parse(no_seed.out)["error"]["message"].get<std::string>().find("seed") !=
          std::string::npos);
}

TEST_CASE("band, clear, verify and frb subcommands produce well-formed output") {
    const auto values = write_temp("vb.json", R"({"Q":1.0,"segments":[{"upto":1.0,"v":1.0}]})");

    const auto band = run_cli({"band", "--values", values, "-M", "2"});
    REQUIRE(band.code == 0);
    const json band_json = json::parse(band.out);
    CHECK(band_json["intervals"].size() == 2);
    CHECK(band_json["loss"].get<double>() > 0.0);

    const auto bids = write_temp(
        "bids.json", R"([{"points":[{"q":0.6,"b":0.6}]},{"points":[{"q":0.7,"b":0.4}]}])");
    const auto cleared = run_cli({"clear", "--bids", bids, "-Q", "1", "--payment", "upa"});
    REQUIRE(cleared.code == 0);
    CHECK(json::parse(cleared.out)["revenue"].get<double>() == doctest::Approx(0.4));

    const auto bid = write_temp("vbid.json", R"({"points":[{"q":1.0,"b":0.5}]})");
    const auto verified = run_cli({"verify", "--format", "pab", "--bid", bid, "--values", values,
                                   "--qgrid", "32", "--pgrid", "16"});
    REQUIRE(verified.code == 0);
    CHECK(json::parse(verified.out)["pass"].get<bool>());

    const auto frb = run_cli({"solve", "--format", "frb", "--values", values, "-M", "2"});
    REQUIRE(frb.code == 0);
    CHECK(json::parse(frb.out)["levels"][0].get<double>() == doctest::Approx(1.0));

    const auto csv_path = write_temp("solve.csv", "");
    const auto with_csv = run_cli({"solve", "--format", "upa", "--mode", "constrained",
                                   "--values", values, "-M", "1", "--csv", csv_path});
    REQUIRE(with_csv.code == 0);
    std::ifstream csv(csv_path);
    std::string header;
    std::getline(csv, header);
    CHECK(header == "q,b");

    for (const auto& f : {values, bids, bid, csv_path}) std::remove(f.c_str());
}

TEST_CASE("curves subcommand emits CSV with upper and lower columns") {
    const auto values = write_temp("vc.json", R"({"Q":1.0,"segments":[{"upto":1.0,"v":1.0}]})");
    const auto r = run_cli({"curves", "--values", values, "--loss", "0.25", "--grid", "4"});
    REQUIRE(r.code == 0);
    CHECK(r.out.find("q,upper,lower") == 0);
    CHECK(r.out.find("0.5,0.5,0.5") != std::string::npos); // tangency row
    std::remove(values.c_str());
}
