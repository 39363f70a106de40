#pragma once

#include <string>
#include <vector>

namespace percross::verify {

// One verification check: `residual` is the observed worst deviation,
// `bound` the tolerance it must stay under. Exact (boolean) checks report
// residual 0 or 1 against bound 0.
struct Check {
    std::string suite;
    std::string name;
    double residual = 0.0;
    double bound = 0.0;
    bool pass = false;
};

struct Options {
    int grid = 50;              // identity-grid size
    int samples = 20;           // random parameter draws for transform sweeps
    unsigned long long seed = 7;
};

// Suites, named after what they exercise:
//  identities      pinned special values, two-route agreement, the linear
//                  relation between n_h, p_h, p_hv, crossing duality, aspect
//                  ratio round trip
//  whipple         the two quadratic 3F2 transformations, sampled at random
//                  parameters, plus the digamma closed-form chain for
//                  p_hv(1/2)
//  elliptic        wp differential identity on a triangle grid, pinned
//                  half-period values, log sigma closed form, conformal
//                  round trip and anchors
//  psymbol         exact tableau identities (zero tolerance)
//  ode-residuals   numeric annihilation of the crossing functions by their
//                  third- and fifth-order operators
//  simulation      small-lattice invariants: partition oracle, event
//                  implications, worker-count determinism
std::vector<Check> identities(const Options& opt = {});
std::vector<Check> whipple(const Options& opt = {});
std::vector<Check> elliptic_core(const Options& opt = {});
std::vector<Check> psymbol_identities();
std::vector<Check> ode_residuals();
std::vector<Check> simulation_invariants();

// Every suite above, concatenated.
std::vector<Check> all(const Options& opt = {});

bool all_pass(const std::vector<Check>& checks);

} // namespace percross::verify
