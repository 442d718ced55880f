#include "cli/commands.hpp"
#include "cli/io.hpp"

#include <doctest.h>
#include <json.hpp>

#include <fstream>
#include <map>
#include <sstream>

using isotherm::cli::run;

namespace {

const std::string kData = ISOTHERM_TEST_DATA;

std::string fixture(const std::string& name) { return kData + "/fixtures/" + name; }

struct Result {
    int code;
    std::string out, err;
};

Result call(std::vector<std::string> args) {
    std::ostringstream out, err;
    const int code = run(args, out, err);
    return {code, out.str(), err.str()};
}

std::string slurp(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    std::ostringstream s;
    s << f.rdbuf();
    return s.str();
}

std::map<std::string, std::string> text_fields(const std::string& text) {
    std::map<std::string, std::string> m;
    std::istringstream in(text);
    for (std::string k, v; in >> k >> v;) m[k] = v;
    return m;
}

}  // namespace

TEST_CASE("info golden file and closed forms") {
    const Result r = call({"info", "--system", fixture("qubit.json"), "--state", fixture("rho.json"), "--json"});
    REQUIRE(r.code == 0);
    CHECK(r.out == slurp(kData + "/golden/info_rho.json"));
    const auto j = nlohmann::json::parse(r.out);
    CHECK(j["free_energy"].get<double>() == doctest::Approx(0.8).epsilon(1e-12));
    CHECK(j["bound_energy"].get<double>() == doctest::Approx(0.1).epsilon(1e-12));
    CHECK(j["beta_intrinsic"].get<double>() == doctest::Approx(std::log(9.0)).epsilon(1e-11));
    CHECK(call({"info", "--system", fixture("qubit.json"), "--state", fixture("rho.json"), "--json"}).out == r.out);
}

TEST_CASE("text and JSON modes report the same numbers") {
    for (const char* state : {"rho.json", "thermal.json", "rotated.json"}) {
        const Result t = call({"info", "--system", fixture("qubit.json"), "--state", fixture(state)});
        const Result j = call({"info", "--system", fixture("qubit.json"), "--state", fixture(state), "--json"});
        const auto fields = text_fields(t.out);
        const auto obj = nlohmann::json::parse(j.out);
        CHECK(fields.size() == obj.size());
        for (auto it = obj.begin(); it != obj.end(); ++it) {
            REQUIRE(fields.count(it.key()) == 1);
            CHECK(std::stod(fields.at(it.key())) == it.value().get<double>());
        }
    }
}

TEST_CASE("Gibbs state reports zero free energy") {
    const auto f = text_fields(call({"info", "--system", fixture("qubit.json"), "--state", fixture("thermal.json")}).out);
    CHECK(f.at("free_energy") == "0");
    CHECK(f.at("athermality") == "0");
}

TEST_CASE("boundary golden file") {
    const Result r = call({"boundary", "--system", fixture("qubit.json"), "--state", fixture("rho.json"), "--state",
                           fixture("thermal.json")});
    REQUIRE(r.code == 0);
    CHECK(r.out == slurp(kData + "/golden/qubit_diagram.csv"));
    CHECK(r.out.find("\nrho,0.9,") != std::string::npos);
}

TEST_CASE("exit codes") {
    CHECK(call({"info", "--system", fixture("qubit.json"), "--state", fixture("bad_trace.json")}).code == 2);
    const Result missing = call({"info", "--system", fixture("qubit.json"), "--state", fixture("nope.json")});
    CHECK(missing.code == 2);
    CHECK(call({"info", "--system", fixture("qubit.json")}).code == 2);
    CHECK(call({"frobnicate"}).code == 2);
    CHECK(call({"--help"}).code == 0);
    CHECK(call({"engine", "--system", fixture("qubit.json"), "--beta-cold", "1", "--beta-hot", "1"}).code == 4);
    CHECK(call({"boundary", "--system", fixture("qubit.json"), "--beta-min", "2", "--beta-max", "1"}).code == 2);
}

TEST_CASE("schema errors name the failing field") {
    const isotherm::cli::System sys = isotherm::cli::parse_system(nlohmann::json::parse(R"({"dim":2,"hamiltonian":{"diagonal":[0,1]}})"));
    try {
        isotherm::cli::parse_state(nlohmann::json::parse(R"({"diagonal":[0.5]})"), sys);
        FAIL("expected a schema error");
    } catch (const std::exception& e) {
        CHECK(std::string(e.what()).find("diagonal") != std::string::npos);
    }
    CHECK_THROWS(isotherm::cli::parse_system(nlohmann::json::parse(R"({"dim":3,"hamiltonian":{"diagonal":[0,1]}})")));
    CHECK_THROWS(isotherm::cli::parse_system(nlohmann::json::parse(R"({"dim":2})")));
}

TEST_CASE("rate of identical files is one") {
    const auto f = text_fields(
        call({"rate", "--system", fixture("qubit.json"), "--from", fixture("rho.json"), "--to", fixture("rho.json")}).out);
    CHECK(f.at("r") == "1");
    const auto g = text_fields(call({"rate", "--system", fixture("qubit.json"), "--from", fixture("rotated.json"),
                                     "--to", fixture("mixed.json")})
                                   .out);
    CHECK(std::fabs(std::stod(g.at("r")) - 0.4691) < 1e-3);
    CHECK(g.at("phi_kind") == "pure");
}

TEST_CASE("laws sweep exits cleanly and is thread-count invariant") {
    const Result a = call({"laws", "--trials", "1000", "--seed", "7", "--dims", "2x2"});
    CHECK(a.code == 0);
    CHECK(a.out.find("failures 0") != std::string::npos);
    const Result b = call({"laws", "--trials", "300", "--seed", "3", "--dims", "3x2", "--threads", "1"});
    const Result c = call({"laws", "--trials", "300", "--seed", "3", "--dims", "3x2", "--threads", "4"});
    CHECK(b.code == 0);
    CHECK(b.out == c.out);
    CHECK(call({"laws", "--dims", "2by2"}).code == 2);
}

TEST_CASE("engine table over copies") {
    const Result r = call({"engine", "--system", fixture("qubit.json"), "--beta-cold", "2.1972245773362196",
                           "--beta-hot", "0.8472978603872037", "--copies", "1,2,4,8"});
    REQUIRE(r.code == 0);
    std::istringstream in(r.out);
    std::string line;
    std::getline(in, line);
    CHECK(line == "copies,work,efficiency,bound_finite,bound_carnot,carnot_gap");
    int rows = 0;
    double prev_gap = INFINITY;
    while (std::getline(in, line)) {
        ++rows;
        const double gap = std::stod(line.substr(line.rfind(',') + 1));
        CHECK(gap <= prev_gap + 1e-12);
        prev_gap = gap;
    }
    CHECK(rows == 4);
}

TEST_CASE("equilibrate and charges subcommands") {
    const auto e = text_fields(call({"equilibrate", "--system", fixture("qubit.json"), "--state-a", fixture("cold.json"),
                                     "--state-b", fixture("hot.json")})
                                   .out);
    CHECK(std::fabs(std::stod(e.at("beta_joint")) - 1.53) < 0.01);
    CHECK(std::fabs(std::stod(e.at("work_released")) - 0.045) < 0.001);
    const Result c = call({"charges", "--system", fixture("ququart_charges.json"), "--state", fixture("ququart.json"),
                           "--mu", "1,1", "--json"});
    REQUIRE(c.code == 0);
    const auto j = nlohmann::json::parse(c.out);
    CHECK(j["L1"].get<double>() == doctest::Approx(0.7));
    CHECK(j["bound_charge0_flagged"].get<bool>() == false);
    CHECK(call({"charges", "--system", fixture("qubit.json"), "--state", fixture("rho.json")}).code == 2);
}
