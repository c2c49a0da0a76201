#pragma once

#include <complex>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace cisar {

using Complex = std::complex<double>;
using CVec = Eigen::VectorXcd;
using CMat = Eigen::MatrixXcd;
using RVec = Eigen::VectorXd;
using RMat = Eigen::MatrixXd;

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class InvalidArgument : public Error {
public:
    using Error::Error;
};

class DimensionMismatch : public Error {
public:
    using Error::Error;
};

class BandTooNarrow : public Error {
public:
    using Error::Error;
};

/// A constrained optimization instance has no feasible point; `constraint_index`
/// identifies the violated constraint (order: band constraints, then energy ball).
class Infeasible : public Error {
public:
    Infeasible(const std::string& what, int constraint_index)
        : Error(what), constraint_index(constraint_index) {}
    int constraint_index;
};

class SizeLimit : public Error {
public:
    using Error::Error;
};

class Divergence : public Error {
public:
    Divergence(const std::string& what, int iteration) : Error(what), iteration(iteration) {}
    int iteration;
};

class SolverFailure : public Error {
public:
    using Error::Error;
};

class IoError : public Error {
public:
    using Error::Error;
};

/// Normalized frequency band of a licensed emitter inside the radar band.
/// Frequencies are relative to the radar sampling rate, so [0,1) spans the
/// whole radar bandwidth. `energy_budget` is the acceptable interference
/// energy on the band; `depth_db` records the configured notch depth it was
/// derived from (0 when the budget was given directly).
struct FrequencyBand {
    double f_lo = 0.0;
    double f_hi = 0.0;
    double depth_db = 0.0;
    double energy_budget = 0.0;

    void validate() const {
        if (!(f_lo >= 0.0 && f_lo < 1.0) || !(f_hi > 0.0 && f_hi <= 1.0) || !(f_lo < f_hi))
            throw InvalidArgument("FrequencyBand: need 0 <= f_lo < f_hi <= 1");
        if (!(energy_budget > 0.0))
            throw InvalidArgument("FrequencyBand: energy budget must be positive");
        if (depth_db < 0.0)
            throw InvalidArgument("FrequencyBand: notch depth must be nonnegative");
    }

    double width() const { return f_hi - f_lo; }
};

inline void validate_sequence(const CVec& c, const char* who) {
    if (c.size() < 1) throw InvalidArgument(std::string(who) + ": sequence must be nonempty");
    if (!c.allFinite()) throw InvalidArgument(std::string(who) + ": sequence has non-finite samples");
}

}  // namespace cisar
