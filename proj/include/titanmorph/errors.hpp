#ifndef TITANMORPH_ERRORS_HPP
#define TITANMORPH_ERRORS_HPP

#include <stdexcept>
#include <string>
#include <vector>

namespace titanmorph {

/// Argument outside the domain an operation is defined on.
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// No candidate satisfies the constraints. Carries the closest miss for reporting.
class InfeasibleError : public std::runtime_error {
public:
    InfeasibleError(const std::string& what, double closest_value)
        : std::runtime_error(what), closest_(closest_value) {}

    double closest() const noexcept { return closest_; }

private:
    double closest_;
};

class CalibrationError : public std::runtime_error {
public:
    CalibrationError(const std::string& what, std::vector<double> residuals)
        : std::runtime_error(what), residuals_(std::move(residuals)) {}

    const std::vector<double>& residuals() const noexcept { return residuals_; }

private:
    std::vector<double> residuals_;
};

/// Input data (tables, plans, config files) that is malformed or inconsistent.
class InputError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

namespace detail {

inline void require(bool cond, const std::string& msg) {
    if (!cond) throw DomainError(msg);
}

}  // namespace detail

}  // namespace titanmorph

#endif
