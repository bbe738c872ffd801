#pragma once

#include <stdexcept>
#include <string>

namespace fairassign {

// Malformed or inconsistent input. The message names the violated invariant.
class InputError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// A brute-force routine was asked to run on an instance beyond its guard.
class SizeGuardError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace fairassign
