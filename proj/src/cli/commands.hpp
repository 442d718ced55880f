#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace isotherm::cli {

// Exit codes.
inline constexpr int kOk = 0;
inline constexpr int kLawViolation = 1;
inline constexpr int kSchemaError = 2;
inline constexpr int kDomainError = 3;
inline constexpr int kDegenerate = 4;

// Entry point shared by the executable and the tests.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace isotherm::cli
