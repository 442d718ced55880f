#pragma once

#include <stdexcept>
#include <string>

namespace isotherm {

class Error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

// Malformed input: non-Hermitian operators, bad traces, inconsistent dimensions.
class ValidationError : public Error {
  public:
    using Error::Error;
};

// Well-formed input outside a quantity's mathematical domain
// (entropy above ln d, energy outside the spectrum, beta = 0 where T is needed, ...).
class DomainError : public Error {
  public:
    using Error::Error;
};

// The requested construction has no meaningful answer (engine that draws no heat,
// equilibration pinned to a degenerate ground space, singular Newton system).
class DegenerateError : public Error {
  public:
    using Error::Error;
};

}  // namespace isotherm
