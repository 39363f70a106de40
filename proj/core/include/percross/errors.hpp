#pragma once

#include <stdexcept>
#include <string>

namespace percross {

// Evaluation was requested too close to a pole of the function.
class pole_error : public std::domain_error {
public:
    explicit pole_error(const std::string& what) : std::domain_error(what) {}
};

// A series or iteration hit its budget without meeting the tolerance.
class non_convergence_error : public std::runtime_error {
public:
    explicit non_convergence_error(const std::string& what) : std::runtime_error(what) {}
};

} // namespace percross
