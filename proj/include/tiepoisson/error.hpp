#pragma once

#include <stdexcept>
#include <string>

namespace tiepoisson {

// Invalid parameters or malformed inputs (bad pmf, p outside (0,1), ...).
class validation_error : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// Valid inputs outside the domain where an operation is defined
// (r out of range, n < 2r, degenerate collision probability, ...).
class domain_error : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

// A computation would exceed its configured enumeration budget.
class resource_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

inline void require(bool ok, const std::string& what) {
    if (!ok) throw validation_error(what);
}

inline void require_domain(bool ok, const std::string& what) {
    if (!ok) throw domain_error(what);
}

}  // namespace tiepoisson
