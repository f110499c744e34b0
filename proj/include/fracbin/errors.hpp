#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace fracbin {

// Base class for all library errors.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// One failed admissibility inequality, named together with the assumption
// it breaks.
struct Violation {
    std::string inequality;  // e.g. "lambda < c"
    std::string assumption;  // e.g. "admissibility of the horizon-n process"

    std::string message() const { return inequality + " violated (" + assumption + ")"; }
};

// Parameter record failed validation. Carries every failed inequality,
// not just the first.
class ValidationError : public Error {
public:
    ValidationError(std::string context, std::vector<Violation> violations)
        : Error(format(context, violations)),
          violations_(std::move(violations)) {}

    const std::vector<Violation>& violations() const { return violations_; }

private:
    static std::string format(const std::string& context, const std::vector<Violation>& v) {
        std::string msg = context + ":";
        for (const auto& x : v) msg += " [" + x.message() + "]";
        return msg;
    }
    std::vector<Violation> violations_;
};

// A size/order guard was exceeded (enumeration too large, moment order too
// high, ...). The operation is refused rather than approximated.
class GuardError : public Error {
public:
    using Error::Error;
};

// Numeric failure: a quantity that must be a probability came out negative
// beyond roundoff, or a series failed to converge. Signals a parameter or
// implementation fault, never silently absorbed.
class NumericError : public Error {
public:
    using Error::Error;
};

class IoError : public Error {
public:
    using Error::Error;
};

}  // namespace fracbin
