#ifndef HYDROCAS_ERRORS_HPP
#define HYDROCAS_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace hydrocas
{
// Argument outside the mathematical domain of a response function
// (pole, lower half-plane frequency, non-positive wavenumber, ...).
class domain_error : public std::domain_error
{
public:
    using std::domain_error::domain_error;
};

// Requested (model, polarization) combination is not implemented.
class unsupported_model_error : public std::invalid_argument
{
public:
    using std::invalid_argument::invalid_argument;
};

// Malformed configuration input.
class config_error : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

// Adaptive integration failed to reach its tolerance within the evaluation
// budget. Carries the best available estimate.
class convergence_error : public std::runtime_error
{
public:
    convergence_error(const std::string &what, double partial_value, double abs_error, long n_evals)
        : std::runtime_error(what), partial_value_(partial_value), abs_error_(abs_error),
          n_evals_(n_evals)
    {
    }

    double partial_value() const noexcept { return partial_value_; }
    double abs_error() const noexcept { return abs_error_; }
    long n_evals() const noexcept { return n_evals_; }

private:
    double partial_value_;
    double abs_error_;
    long n_evals_;
};

} // namespace hydrocas

#endif // HYDROCAS_ERRORS_HPP
