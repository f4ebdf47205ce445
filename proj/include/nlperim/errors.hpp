#ifndef NLPERIM_ERRORS_HPP
#define NLPERIM_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace nlperim {

// argument outside the mathematical domain (r <= 0, q < 0, t < 0)
struct DomainError : std::domain_error {
  using std::domain_error::domain_error;
};

// inconsistent parameters (bad q, cooling factor, widths)
struct ParameterError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// grid/config level problems (n not a power of two, bad JSON)
struct ConfigurationError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct PreconditionError : std::logic_error {
  using std::logic_error::logic_error;
};

struct ConvergenceError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// integral or sum is infinite for the given input
struct DivergenceError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct InfeasibleError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

} // namespace nlperim

#endif
