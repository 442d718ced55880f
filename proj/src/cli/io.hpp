// JSON schemas for systems and states.
//
//   system: {"dim": 2, "hamiltonian": {"diagonal": [0, 1]},
//            "charges": [{"matrix": {"re": [[..]], "im": [[..]]}}]}
//   state:  {"diagonal": [...]} | {"matrix": {"re": .., "im": ..}}
//         | {"gibbs": {"beta": 1.5}} | {"gge": {"beta_vec": [..]}}
//
// Betas may be the strings "inf" / "-inf".

#pragma once

#include "isotherm/charges.hpp"
#include "isotherm/gibbs.hpp"

#include <json.hpp>

#include <optional>
#include <string>

namespace isotherm::cli {

struct System {
    GibbsFamily family;
    std::optional<GGEFamily> gge;   // present when extra charges are given
};

System parse_system(const nlohmann::json& j);
DensityMatrix parse_state(const nlohmann::json& j, const System& sys);

nlohmann::json read_json_file(const std::string& path);
System load_system(const std::string& path);
DensityMatrix load_state(const std::string& path, const System& sys);

}  // namespace isotherm::cli
