#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "fixtures.hpp"
#include "fractus/cli.hpp"
#include "fractus/fundamental.hpp"
#include "fractus/gamma.hpp"

using namespace fractus;

namespace {

struct Run {
    int code;
    std::string out;
    std::string err;
};

Run run(std::vector<std::string> args) {
    args.insert(args.begin(), "fractus");
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    std::ostringstream out, err;
    const int code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
    return {code, out.str(), err.str()};
}

std::vector<std::vector<double>> rows(const std::string& text) {
    std::vector<std::vector<double>> out;
    std::istringstream in(text);
    std::string line;
    std::getline(in, line);  // header
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        std::vector<double> row;
        std::istringstream cells(line);
        std::string cell;
        while (std::getline(cells, cell, ',')) row.push_back(std::stod(cell));
        out.push_back(row);
    }
    return out;
}

double footer(const std::string& text, const std::string& key) {
    const auto at = text.find("# " + key + "=");
    REQUIRE(at != std::string::npos);
    return std::stod(text.substr(at + key.size() + 3));
}

std::string file(const char* name) { return fixture::data_path(name); }

}  // namespace

TEST_CASE("check prints the table and the verdict") {
    const Run r = run({"check", file("example4.json")});
    CHECK(r.code == 0);
    CHECK(r.out.find("k0 = 3") != std::string::npos);
    CHECK(r.out.find("-0.8") != std::string::npos);
    CHECK(r.out.find("∉ L(a,b)") != std::string::npos);

    const Run bad = run({"check", file("example1_b2.json")});
    CHECK(bad.code == 2);
    CHECK(bad.out.find("k = 2") != std::string::npos);
    CHECK(run({"check", file("example4_b4.json")}).code == 2);
}

TEST_CASE("exit codes for bad input") {
    CHECK(run({"check", file("malformed.json")}).code == 3);
    CHECK(run({"check", file("unknown_key.json")}).code == 3);
    CHECK(run({"check", file("missing.json")}).code == 3);
    CHECK(run({}).code == 3);
    CHECK(run({"bogus"}).code == 3);
    CHECK(run({"solve", file("example2.json"), "--method", "euler"}).code == 3);
    CHECK(run({"--help"}).code == 0);
}

TEST_CASE("solve writes the csv contract") {
    const Run r = run({"solve", file("zero.json"), "--eval-nodes", "8"});
    REQUIRE(r.code == 0);
    CHECK(r.out.rfind("x,y_re,y_im\n", 0) == 0);
    const auto data = rows(r.out);
    REQUIRE(data.size() == 8);
    CHECK(data.front()[0] > 0.0);
    CHECK(data.back()[0] == 1.0);
    for (const auto& row : data) {
        CHECK(row[1] == 0.0);
        CHECK(row[2] == 0.0);
    }
    CHECK(footer(r.out, "residual") == 0.0);
    CHECK(footer(r.out, "tail_bound") == 0.0);
}

TEST_CASE("solve refuses a nonzero tail unless projected") {
    const Run r = run({"solve", file("example1_b2.json")});
    CHECK(r.code == 2);
    CHECK(r.err.find("k = 2") != std::string::npos);
    const Run p = run({"solve", file("example1_b2.json"), "--project-initial", "--eval-nodes", "4"});
    CHECK(p.code == 0);
    CHECK(p.err.find("projected") != std::string::npos);
}

TEST_CASE("series solve reproduces the closed form") {
    const Run r = run({"solve", file("example3.json"), "--method", "series", "--eval-nodes", "16"});
    REQUIRE(r.code == 0);
    const FundamentalSystem sys = canonical_system(fixture::example3());
    for (const auto& row : rows(r.out)) {
        const cplx want = sys.entries[0].evaluate(row[0]) + 0.5 * sys.entries[1].evaluate(row[0]);
        CHECK(std::abs(cplx(row[1], row[2]) - want) < 1e-14 * std::abs(want));
    }
}

TEST_CASE("picard and series columns agree away from a") {
    const Run a = run({"solve", file("example2.json"), "--method", "picard", "--eval-nodes", "40"});
    const Run b = run({"solve", file("example2.json"), "--method", "series", "--eval-nodes", "40"});
    REQUIRE(a.code == 0);
    REQUIRE(b.code == 0);
    // the series path uses a uniform evaluation mesh; compare at shared points through the series values
    const FundamentalSystem sys = canonical_system(fixture::example2());
    for (const auto& row : rows(a.out)) {
        if (row[0] < 0.05) continue;
        const double want = sys.entries[0].evaluate(row[0]).real();
        CHECK(std::abs(row[1] - want) < 1e-3 * std::abs(want));
    }
    for (const auto& row : rows(b.out)) {
        const double want = sys.entries[0].evaluate(row[0]).real();
        CHECK(std::abs(row[1] - want) < 1e-14 * std::abs(want));
    }
}

TEST_CASE("solve writes to a file") {
    const auto path = std::filesystem::temp_directory_path() / "fractus_cli_test.csv";
    const Run r = run({"solve", file("example3.json"), "--method", "marching", "--out", path.string(),
                       "--eval-nodes", "5"});
    REQUIRE(r.code == 0);
    CHECK(r.out.empty());
    std::ifstream in(path);
    std::stringstream text;
    text << in.rdbuf();
    CHECK(rows(text.str()).size() == 5);
    CHECK(footer(text.str(), "residual") < 1e-3);
    std::filesystem::remove(path);
}

TEST_CASE("no convergence exits with 4") {
    const Run r = run({"solve", file("stiff.json")});
    CHECK(r.code == 4);
    CHECK(r.err.find("NoConvergence") != std::string::npos);
    CHECK(run({"solve", file("stiff.json"), "--method", "marching", "--eval-nodes", "4"}).code == 0);
}

TEST_CASE("fundamental lists leading terms") {
    const Run r = run({"fundamental", file("example5.json"), "--i", "1", "--terms", "5"});
    REQUIRE(r.code == 0);
    const auto data = rows(r.out);
    REQUIRE(data.size() == 5);
    for (std::size_t k = 0; k < 5; ++k) {
        CHECK(data[k][0] == doctest::Approx(2.5 + 0.1 * static_cast<double>(k)).epsilon(1e-14));
        CHECK(data[k][1] == doctest::Approx(2.6));
        const cplx want = std::pow(3.0, static_cast<double>(k)) * recip_gamma(cplx(0.1 * static_cast<double>(k) + 3.5, 2.6));
        CHECK(std::abs(cplx(data[k][2], data[k][3]) - want) < 1e-12 * std::abs(want));
    }
    CHECK(footer(r.out, "tail_bound") > 0.0);

    const Run z = run({"fundamental", file("zero.json")});
    REQUIRE(z.code == 0);
    const auto zero = rows(z.out);
    REQUIRE(zero.size() == 1);
    CHECK(zero[0][0] == 0.5);
    CHECK(zero[0][2] == doctest::Approx(recip_gamma(1.5).real()).epsilon(1e-15));
    CHECK(footer(z.out, "tail_bound") == 0.0);

    CHECK(run({"fundamental", file("example3.json"), "--i", "3"}).code == 3);
}

TEST_CASE("more terms give a smaller tail") {
    double previous = INFINITY;
    for (const char* terms : {"5", "10", "20", "40"}) {
        const Run r = run({"fundamental", file("example3.json"), "--i", "2", "--terms", terms});
        REQUIRE(r.code == 0);
        const double tail = footer(r.out, "tail_bound");
        CHECK(tail < previous);
        previous = tail;
    }
}

TEST_CASE("green lists mittag-leffler coefficients") {
    const Run r = run({"green", file("mittag_leffler_15.json"), "--terms", "8"});
    REQUIRE(r.code == 0);
    const auto data = rows(r.out);
    REQUIRE(data.size() == 8);
    double power = 1.0;
    for (std::size_t k = 0; k < 8; ++k) {
        const double s = 1.5 * static_cast<double>(k + 1);
        CHECK(data[k][0] == doctest::Approx(s - 1.0));
        CHECK(data[k][2] == doctest::Approx(power * recip_gamma(s).real()).epsilon(1e-12));
        power *= -3.0;
    }
    const Run shifted = run({"green", file("example3.json"), "--xi", "0.5", "--terms", "3"});
    CHECK(shifted.code == 0);
    CHECK(rows(shifted.out).size() == 3);
}

TEST_CASE("sampled coefficients point to picard") {
    const Run r = run({"fundamental", file("example3_sampled.json")});
    CHECK(r.code == 3);
    CHECK(r.err.find("picard") != std::string::npos);
    CHECK(run({"green", file("example3_sampled.json")}).code == 3);
    CHECK(run({"solve", file("example3_sampled.json"), "--eval-nodes", "4"}).code == 0);
}

TEST_CASE("dump re-parses to the same document") {
    const Run once = run({"dump", file("example4.json")});
    REQUIRE(once.code == 0);
    const auto path = std::filesystem::temp_directory_path() / "fractus_dump_test.json";
    std::ofstream(path) << once.out;
    const Run twice = run({"dump", path.string()});
    CHECK(twice.out == once.out);
    std::filesystem::remove(path);
}
