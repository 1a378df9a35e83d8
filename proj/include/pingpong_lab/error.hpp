#pragma once

#include <stdexcept>
#include <string>

namespace pplab {

enum class ErrorCode {
    Input,             // malformed or missing input
    Dimension,         // dimension mismatch between members
    Singular,          // non-invertible or non-finite matrix
    NoGap,             // requested gap index has no gap
    Degenerate,        // near-zero denominator / non-transverse data
    Precondition,      // operation called outside its hypotheses
    Certification,     // ping-pong inclusion or separation failed
    InsufficientData,  // not enough samples for a fit
    Torsion,           // finite-order element where infinite order needed
    Overflow,          // enumeration would exceed the word guard
    Budget,            // search budget exhausted
    Numerical,         // solver did not converge
};

const char* error_code_name(ErrorCode c);

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& msg)
        : std::runtime_error(std::string(error_code_name(code)) + ": " + msg), code_(code) {}
    ErrorCode code() const { return code_; }

private:
    ErrorCode code_;
};

}  // namespace pplab
