#pragma once

#include <stdexcept>
#include <string>

namespace bogodiag {

// Base class for all typed failures thrown by the library. what() carries a
// formatted diagnostic; subclasses keep the raw numbers so callers can branch
// on them without parsing strings.
struct Error : std::runtime_error {
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

struct NotSquare : Error {
    long rows, cols;
    NotSquare(long r, long c)
        : Error("matrix is not square: " + std::to_string(r) + "x" + std::to_string(c)),
          rows(r), cols(c) {}
};

struct HermiticityViolation : Error {
    double defect, tol;
    HermiticityViolation(double d, double t)
        : Error("hermiticity defect " + std::to_string(d) + " exceeds tolerance " + std::to_string(t)),
          defect(d), tol(t) {}
};

struct NegativeSpectrum : Error {
    double eigmin;
    explicit NegativeSpectrum(double e)
        : Error("spectral function needs a nonnegative spectrum, eigmin = " + std::to_string(e)),
          eigmin(e) {}
};

struct SingularOperator : Error {
    double eigmin;
    explicit SingularOperator(double e)
        : Error("inverse power of a singular operator, eigmin = " + std::to_string(e)),
          eigmin(e) {}
};

struct DimensionMismatch : Error {
    long expected, got;
    DimensionMismatch(const std::string& where, long e, long g)
        : Error(where + ": dimension mismatch, expected " + std::to_string(e) +
                ", got " + std::to_string(g)),
          expected(e), got(g) {}
};

struct SingularT : Error {
    double eigmin;
    explicit SingularT(double e)
        : Error("one-particle operator must be positive definite, eigmin = " + std::to_string(e)),
          eigmin(e) {}
};

struct ConditionsNotMet : Error {
    double epsilon;
    explicit ConditionsNotMet(double eps)
        : Error("model conditions fail, epsilon = " + std::to_string(eps)), epsilon(eps) {}
};

struct SymplecticResidualExceeded : Error {
    double worst, bound;
    SymplecticResidualExceeded(double w, double b)
        : Error("symplectic relation residual " + std::to_string(w) +
                " exceeds bound " + std::to_string(b)),
          worst(w), bound(b) {}
};

struct SingularOnePlusA : Error {
    double det_abs;
    explicit SingularOnePlusA(double d)
        : Error("1 + A is numerically singular, |det| = " + std::to_string(d)), det_abs(d) {}
};

struct CapacityExceeded : Error {
    long requested, cap;
    CapacityExceeded(long r, long c)
        : Error("truncated basis would need " + std::to_string(r) +
                " states, cap is " + std::to_string(c)),
          requested(r), cap(c) {}
};

struct ModeOutOfRange : Error {
    int mode, modes;
    ModeOutOfRange(int m, int n)
        : Error("mode index " + std::to_string(m) + " outside [0," + std::to_string(n) + ")"),
          mode(m), modes(n) {}
};

struct SectorTooSmall : Error {
    int nmax, needed;
    SectorTooSmall(int n, int k)
        : Error("quanta cutoff " + std::to_string(n) + " leaves no safe sector, need at least " +
                std::to_string(k)),
          nmax(n), needed(k) {}
};

struct CouplingTooStrong : Error {
    double coupling_abs, bound;
    CouplingTooStrong(double c, double b)
        : Error("coupling magnitude " + std::to_string(c) +
                " reaches or exceeds the stability bound " + std::to_string(b)),
          coupling_abs(c), bound(b) {}
};

struct ConfigParseError : Error {
    std::string path, field;
    ConfigParseError(const std::string& p, const std::string& f, const std::string& why)
        : Error("config " + p + ", field '" + f + "': " + why), path(p), field(f) {}
};

} // namespace bogodiag
