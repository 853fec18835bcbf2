#pragma once

#include <stdexcept>
#include <string>

namespace qho {

/// Root of every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// An input violates a documented invariant (bounds, domain, definiteness...).
class InvariantError : public Error {
public:
    using Error::Error;
};

/// The inputs are valid but the computation lands in a regime where the
/// formulas break down (non-diagonalizable, disjoint supports, ...).
class NumericError : public Error {
public:
    using Error::Error;
};

class IoError : public Error {
public:
    using Error::Error;
};

class ConfigSyntaxError : public Error {
public:
    using Error::Error;
};

#define QHO_DEFINE_ERROR(Name, Base)      \
    class Name : public Base {            \
    public:                               \
        using Base::Base;                 \
    }

QHO_DEFINE_ERROR(BoundsError, InvariantError);
QHO_DEFINE_ERROR(DomainError, InvariantError);
QHO_DEFINE_ERROR(DefinitenessError, InvariantError);
QHO_DEFINE_ERROR(GridError, InvariantError);
QHO_DEFINE_ERROR(ParameterError, InvariantError);
QHO_DEFINE_ERROR(ProbeError, InvariantError);
QHO_DEFINE_ERROR(LengthError, InvariantError);
QHO_DEFINE_ERROR(NormalizationError, InvariantError);
QHO_DEFINE_ERROR(ConfigError, InvariantError);

QHO_DEFINE_ERROR(NonDiagonalizableError, NumericError);
QHO_DEFINE_ERROR(BranchError, NumericError);
QHO_DEFINE_ERROR(AccuracyError, NumericError);
QHO_DEFINE_ERROR(DegenerateEnvelopeError, NumericError);
QHO_DEFINE_ERROR(EmptyProductError, NumericError);
QHO_DEFINE_ERROR(AtomicDistributionError, NumericError);
QHO_DEFINE_ERROR(InfiniteCapacityError, NumericError);
QHO_DEFINE_ERROR(RegimeError, NumericError);

#undef QHO_DEFINE_ERROR

}  // namespace qho
