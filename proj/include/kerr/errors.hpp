/*
 * errors.hpp - exception types shared by all kerr modules.
 */
#pragma once

#include <stdexcept>
#include <string>

namespace kerr {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class InvalidArgument : public Error {
public:
    using Error::Error;
};

// weyl_calculus
class NonPolynomialSymbol : public Error {
public:
    using Error::Error;
};
class DegenerateQuadraticForm : public Error {
public:
    using Error::Error;
};
class DivergentIntegral : public Error {
public:
    using Error::Error;
};
class NotSymplectic : public Error {
public:
    using Error::Error;
};
class DegreeCapExceeded : public Error {
public:
    using Error::Error;
};
class IncompatibleGaussians : public Error {
public:
    using Error::Error;
};

// kerr_moyal / expectation_engine
class IndexCapExceeded : public Error {
public:
    using Error::Error;
};
class SingularWindow : public Error {
public:
    explicit SingularWindow(double reduced_time)
        : Error("reduced time " + std::to_string(reduced_time) + " lies in a singular window"),
          reduced_time_(reduced_time) {}
    double reduced_time() const noexcept { return reduced_time_; }

private:
    double reduced_time_;
};
class InvalidState : public Error {
public:
    using Error::Error;
};
class ToleranceNotMet : public Error {
public:
    ToleranceNotMet(double achieved, double requested)
        : Error("quadrature tolerance not met: achieved " + std::to_string(achieved) +
                ", requested " + std::to_string(requested)),
          achieved_(achieved) {}
    double achieved() const noexcept { return achieved_; }

private:
    double achieved_;
};

// fock_oracle
class TruncationInsufficient : public Error {
public:
    using Error::Error;
};

// kerr_cli
class ConfigError : public Error {
public:
    using Error::Error;
};

}  // namespace kerr
