#include "cli/io.hpp"

#include "isotherm/error.hpp"

#include <cmath>
#include <fstream>
#include <limits>

namespace isotherm::cli {
namespace {

using nlohmann::json;

[[noreturn]] void bad(const std::string& field, const std::string& what) {
    throw ValidationError(field + ": " + what);
}

double number(const json& j, const std::string& field) {
    if (j.is_number()) return j.get<double>();
    if (j.is_string()) {
        const std::string s = j.get<std::string>();
        if (s == "inf" || s == "+inf") return std::numeric_limits<double>::infinity();
        if (s == "-inf") return -std::numeric_limits<double>::infinity();
    }
    bad(field, "expected a number");
}

std::vector<double> vector_of(const json& j, const std::string& field) {
    if (!j.is_array()) bad(field, "expected an array of numbers");
    std::vector<double> v;
    for (std::size_t i = 0; i < j.size(); ++i) {
        const double x = number(j[i], field + "[" + std::to_string(i) + "]");
        if (!std::isfinite(x)) bad(field, "entries must be finite");
        v.push_back(x);
    }
    return v;
}

Matrix real_block(const json& j, std::size_t dim, const std::string& field) {
    if (!j.is_array() || j.size() != dim) bad(field, "expected " + std::to_string(dim) + " rows");
    Matrix m(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
    for (std::size_t r = 0; r < dim; ++r) {
        const std::vector<double> row = vector_of(j[r], field + "[" + std::to_string(r) + "]");
        if (row.size() != dim) bad(field, "row " + std::to_string(r) + " has the wrong length");
        for (std::size_t c = 0; c < dim; ++c) m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = row[c];
    }
    return m;
}

Matrix complex_matrix(const json& j, std::size_t dim, const std::string& field) {
    if (!j.is_object() || !j.contains("re")) bad(field, "expected {\"re\": [[..]], \"im\": [[..]]}");
    Matrix m = real_block(j["re"], dim, field + ".re");
    if (j.contains("im")) m += Complex(0.0, 1.0) * real_block(j["im"], dim, field + ".im");
    return m;
}

HermitianOperator operator_spec(const json& j, std::size_t dim, const std::string& field) {
    if (!j.is_object()) bad(field, "expected an object");
    try {
        if (j.contains("diagonal")) {
            const std::vector<double> d = vector_of(j["diagonal"], field + ".diagonal");
            if (d.size() != dim) bad(field + ".diagonal", "expected " + std::to_string(dim) + " entries");
            return HermitianOperator::diagonal(d);
        }
        if (j.contains("matrix")) return HermitianOperator(complex_matrix(j["matrix"], dim, field + ".matrix"));
    } catch (const ValidationError& e) {
        const std::string msg = e.what();
        if (msg.rfind(field, 0) == 0) throw;
        bad(field, msg);
    }
    bad(field, "expected \"diagonal\" or \"matrix\"");
}

}  // namespace

System parse_system(const json& j) {
    if (!j.is_object()) bad("system", "expected an object");
    if (!j.contains("dim") || !j["dim"].is_number_integer() || j["dim"].get<long long>() < 1) {
        bad("dim", "expected a positive integer");
    }
    const auto dim = static_cast<std::size_t>(j["dim"].get<long long>());
    if (!j.contains("hamiltonian")) bad("hamiltonian", "missing");
    HermitianOperator h = operator_spec(j["hamiltonian"], dim, "hamiltonian");
    System sys{GibbsFamily(h), std::nullopt};
    if (j.contains("charges")) {
        if (!j["charges"].is_array()) bad("charges", "expected an array of operators");
        std::vector<HermitianOperator> ops{h};
        for (std::size_t i = 0; i < j["charges"].size(); ++i) {
            ops.push_back(operator_spec(j["charges"][i], dim, "charges[" + std::to_string(i) + "]"));
        }
        try {
            sys.gge.emplace(ChargeSet(std::move(ops)));
        } catch (const ValidationError& e) {
            bad("charges", e.what());
        }
    }
    return sys;
}

DensityMatrix parse_state(const json& j, const System& sys) {
    if (!j.is_object()) bad("state", "expected an object");
    const std::size_t dim = sys.family.dim();
    try {
        if (j.contains("diagonal")) {
            const std::vector<double> p = vector_of(j["diagonal"], "diagonal");
            if (p.size() != dim) bad("diagonal", "expected " + std::to_string(dim) + " entries");
            return DensityMatrix::diagonal(p);
        }
        if (j.contains("matrix")) return DensityMatrix(complex_matrix(j["matrix"], dim, "matrix"));
    } catch (const ValidationError& e) {
        const std::string msg = e.what();
        if (msg.rfind("diagonal", 0) == 0 || msg.rfind("matrix", 0) == 0) throw;
        bad(j.contains("diagonal") ? "diagonal" : "matrix", msg);
    }
    if (j.contains("gibbs")) {
        const json& g = j["gibbs"];
        if (!g.is_object() || !g.contains("beta")) bad("gibbs.beta", "missing");
        const double b = number(g["beta"], "gibbs.beta");
        if (std::isnan(b)) bad("gibbs.beta", "must not be NaN");
        return sys.family.state(BetaValue(b));
    }
    if (j.contains("gge")) {
        if (!sys.gge) bad("gge", "system has no extra charges");
        const json& g = j["gge"];
        if (!g.is_object() || !g.contains("beta_vec")) bad("gge.beta_vec", "missing");
        const std::vector<double> b = vector_of(g["beta_vec"], "gge.beta_vec");
        if (b.size() != sys.gge->q()) bad("gge.beta_vec", "expected " + std::to_string(sys.gge->q()) + " entries");
        return sys.gge->state(Eigen::Map<const Eigen::VectorXd>(b.data(), static_cast<Eigen::Index>(b.size())));
    }
    bad("state", "expected one of diagonal, matrix, gibbs, gge");
}

json read_json_file(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw ValidationError(path + ": cannot open");
    try {
        return json::parse(f);
    } catch (const json::exception& e) {
        throw ValidationError(path + ": " + e.what());
    }
}

System load_system(const std::string& path) { return parse_system(read_json_file(path)); }

DensityMatrix load_state(const std::string& path, const System& sys) {
    return parse_state(read_json_file(path), sys);
}

}  // namespace isotherm::cli
