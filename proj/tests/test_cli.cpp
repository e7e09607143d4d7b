#include "kms/cli.hpp"

#include "kms/types.hpp"
#include "doctest.h"
#include "json.hpp"

#include <sstream>
#include <string>
#include <vector>

using kms::cli::run;

namespace {

struct Result {
    int code;
    std::string out;
    std::string err;
};

Result invoke(std::vector<std::string> args) {
    std::ostringstream out, err;
    int code = run(std::move(args), out, err);
    return {code, out.str(), err.str()};
}

std::vector<std::string> lines_of(const std::string& s) {
    std::vector<std::string> lines;
    std::string cur;
    for (char c : s) {
        if (c == '\n') {
            lines.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    if (!cur.empty()) lines.push_back(cur);
    return lines;
}

std::vector<std::string> split_csv(const std::string& line) {
    std::vector<std::string> fields;
    std::string cur;
    for (char c : line) {
        if (c == ',') {
            fields.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    fields.push_back(cur);
    return fields;
}

} // namespace

TEST_CASE("trace emits parseable shortest-form CSV") {
    auto r = invoke({"trace", "--n", "6", "--type", "1", "--samples", "64"});
    REQUIRE(r.code == 0);
    auto lines = lines_of(r.out);
    REQUIRE(lines.size() >= 65);
    CHECK(lines[0] == "u,v,re_rho,im_rho,re_lambda,im_lambda,re_drho,im_drho");
    bool saw_zero_row = false;
    for (size_t k = 1; k < lines.size(); ++k) {
        auto f = split_csv(lines[k]);
        REQUIRE(f.size() == 8);
        for (const auto& field : f) {
            // every field is the shortest form of the double it denotes
            double x = std::stod(field);
            CHECK(kms::format_double(x) == field);
        }
        if (lines[k] == "0,0,1.4,0,-6,0,0,0") saw_zero_row = true;
    }
    CHECK(saw_zero_row); // the u = 0 sample with rho = xi_6 and lambda = -6
}

TEST_CASE("repeated invocations are byte-identical") {
    auto a1 = invoke({"trace", "--n", "5", "--type", "2", "--samples", "128"});
    auto a2 = invoke({"trace", "--n", "5", "--type", "2", "--samples", "128"});
    CHECK(a1.out == a2.out);
    auto b1 = invoke({"cusps", "--n", "6", "--type", "2", "--json"});
    auto b2 = invoke({"cusps", "--n", "6", "--type", "2", "--json"});
    REQUIRE(b1.code == 0);
    CHECK(b1.out == b2.out);
    auto c1 = invoke({"figure", "--id", "phase", "--n", "6"});
    auto c2 = invoke({"figure", "--id", "phase", "--n", "6"});
    CHECK(c1.out == c2.out);
}

TEST_CASE("classify prints the compact label object") {
    auto r = invoke({"classify", "--n", "6", "--rho", "1.2"});
    REQUIRE(r.code == 0);
    CHECK(r.out == "{\"j1\":0,\"j2\":1}\n");
    // exactly on the real crossing of the type-1 curve
    auto on = invoke({"classify", "--n", "6", "--rho", "1.4"});
    REQUIRE(on.code == 0);
    CHECK(on.out.find("\"on_curve\":true") != std::string::npos);
    auto big = invoke({"classify", "--n", "6", "--rho", "-3"});
    CHECK(big.out == "{\"j1\":1,\"j2\":1}\n");
}

TEST_CASE("cusps text mode lists one report per line") {
    auto r = invoke({"cusps", "--n", "5", "--type", "1"});
    REQUIRE(r.code == 0);
    auto lines = lines_of(r.out);
    REQUIRE(lines.size() == 2);
    for (const auto& l : lines) {
        CHECK(l.find("u0=") == 0);
        CHECK(l.find(" rho0=") != std::string::npos);
        CHECK(l.find(" |eta0|=") != std::string::npos);
        CHECK(l.find(" bisector=") != std::string::npos);
    }
    // JSON mode carries the residual block
    auto j = invoke({"cusps", "--n", "5", "--type", "1", "--json"});
    auto parsed = nlohmann::json::parse(j.out);
    REQUIRE(parsed.is_array());
    REQUIRE(parsed.size() == 2);
    for (const auto& c : parsed) {
        CHECK(c.contains("u0"));
        CHECK(c.contains("rho0"));
        CHECK(c.contains("outward_angle"));
        CHECK(c["residuals"].contains("oracle"));
        // rho0 strings parse back as complex numbers near +-2i
        kms::cplx z = kms::parse_complex(c["rho0"].get<std::string>());
        CHECK(std::abs(std::abs(z) - 2.0) <= 1e-6);
    }
}

TEST_CASE("spectrum JSON parses back and covers the full multiplicity") {
    auto r = invoke({"spectrum", "--n", "4", "--rho", "0.5+0.25i"});
    REQUIRE(r.code == 0);
    auto j = nlohmann::json::parse(r.out);
    CHECK(j["n"] == 4);
    CHECK(j["rho"] == "0.5+0.25i");
    int total = 0;
    for (const auto& e : j["entries"]) {
        total += e["multiplicity"].get<int>();
        int t = e["type"].get<int>();
        CHECK((t == 1 || t == 2));
        std::string cls = e["class"].get<std::string>();
        CHECK((cls == "ordinary" || cls == "borderline" || cls == "extraordinary"));
        kms::parse_complex(e["value"].get<std::string>()); // must not throw
    }
    CHECK(total == 4);
    auto raw = invoke({"spectrum", "--n", "4", "--rho", "0.5+0.25i", "--raw-roots"});
    auto jr = nlohmann::json::parse(raw.out);
    CHECK(jr["raw_roots"].size() == 4);
}

TEST_CASE("scan emits the pair-magnitude CSV") {
    auto r = invoke({"scan", "--n", "7", "--type", "1", "--start", "0.7757-1.4922i",
                     "--dir", "bisector", "--from", "-0.002", "--to", "0.002", "--steps", "5"});
    REQUIRE(r.code == 0);
    auto lines = lines_of(r.out);
    REQUIRE(lines.size() == 6);
    CHECK(lines[0] == "d,mag_a,mag_b,re_a,im_a,re_b,im_b");
    for (size_t k = 1; k < lines.size(); ++k) CHECK(split_csv(lines[k]).size() == 7);
}

TEST_CASE("regions reports labelled representatives") {
    auto r = invoke({"regions", "--n", "5", "--resolution", "64"});
    REQUIRE(r.code == 0);
    auto j = nlohmann::json::parse(r.out);
    REQUIRE(j.is_array());
    CHECK(j.size() >= 4);
    for (const auto& reg : j) {
        CHECK(reg["j1"].is_number_integer());
        CHECK(reg["j2"].is_number_integer());
        kms::parse_complex(reg["representative"].get<std::string>());
    }
}

TEST_CASE("verify subcommand prints one line per check") {
    auto r = invoke({"verify", "--suite", "core"});
    REQUIRE(r.code == 0);
    auto lines = lines_of(r.out);
    REQUIRE(lines.size() >= 2);
    for (size_t k = 0; k + 1 < lines.size(); ++k) CHECK(lines[k].rfind("ok   ", 0) == 0);
    CHECK(lines.back().find(" checks, 0 failed") != std::string::npos);
    auto bad = invoke({"verify", "--suite", "nosuch"});
    CHECK(bad.code == 2); // rejected by option validation
}

TEST_CASE("figure produces standalone SVG") {
    auto curves = invoke({"figure", "--id", "curves", "--n", "5"});
    REQUIRE(curves.code == 0);
    CHECK(curves.out.find("<svg") != std::string::npos);
    CHECK(curves.out.find("</svg>") != std::string::npos);
    CHECK(curves.out.find("[1,0]") != std::string::npos); // region labels drawn
    auto phase = invoke({"figure", "--id", "phase", "--n", "6"});
    size_t markers = 0, pos = 0;
    while ((pos = phase.out.find("<circle", pos)) != std::string::npos) {
        ++markers;
        pos += 7;
    }
    CHECK(markers == 4); // one discontinuity per cusp of the type-1 curve
    for (const char* id : {"parabola", "bifurcation"}) {
        auto fig = invoke({"figure", "--id", id, "--n", "5", "--type", "2"});
        REQUIRE(fig.code == 0);
        CHECK(fig.out.find("</svg>") != std::string::npos);
    }
}

TEST_CASE("exit codes distinguish usage errors from domain errors") {
    CHECK(invoke({"nosuchcommand"}).code == 2);
    CHECK(invoke({"classify", "--n", "6", "--rho", "zebra"}).code == 2);
    CHECK(invoke({"trace", "--n", "1", "--type", "1"}).code == 1); // dimension too small
    auto help = invoke({"--help"});
    CHECK(help.code == 0);
    CHECK(help.out.find("trace") != std::string::npos);
    CHECK(invoke({"trace", "--type", "1"}).code == 2); // missing required --n
}
