#pragma once

#include <stdexcept>
#include <string>

namespace tscal {

/// Base class for all library errors.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class PointNotOnScale : public Error {
public:
    using Error::Error;
};

class EmptyInterval : public Error {
public:
    using Error::Error;
};

class QuadratureFailure : public Error {
public:
    using Error::Error;
};

/// Requested a Delta-derivative at a point outside T^kappa
/// (a left-scattered maximum).
class KappaViolation : public Error {
public:
    using Error::Error;
};

/// 1 + mu(t) p(t) vanished somewhere on the integration path; the
/// generalized exponential is not invertible there.
class NotRegressive : public Error {
public:
    using Error::Error;
};

/// A shift image did not land on the scale (the pair (s, t) is outside
/// the operator's domain).
class ShiftLeavesScale : public Error {
public:
    explicit ShiftLeavesScale(const std::string& what, long iteration = -1)
        : Error(what), iteration_(iteration) {}
    /// Index of the failing composition step, or -1 for a single shift.
    long iteration() const noexcept { return iteration_; }

private:
    long iteration_;
};

class NonPositiveDerivative : public Error {
public:
    using Error::Error;
};

class NotMonotone : public Error {
public:
    using Error::Error;
};

/// The tested function vanishes at every sample point, so the
/// quasiperiodicity factor cannot be estimated.
class DegenerateFunction : public Error {
public:
    using Error::Error;
};

class CertificateMissing : public Error {
public:
    using Error::Error;
};

class ZeroLengthPeriodInterval : public Error {
public:
    using Error::Error;
};

class NonPositiveParameter : public Error {
public:
    using Error::Error;
};

class GridMismatch : public Error {
public:
    using Error::Error;
};

class NotIsolated : public Error {
public:
    using Error::Error;
};

class EmptyHorizon : public Error {
public:
    using Error::Error;
};

class FieldEvaluationFailure : public Error {
public:
    using Error::Error;
};

} // namespace tscal
