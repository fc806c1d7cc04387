#pragma once

#include <stdexcept>

namespace pwqnet {

// A mathematical precondition of a construction does not hold (invalid input
// function, infeasible lift pair). Distinct from std::invalid_argument, which
// flags malformed data.
class PreconditionError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace pwqnet
