#ifndef HEUNPATH_TEST_SUPPORT_HPP
#define HEUNPATH_TEST_SUPPORT_HPP

#include "heunpath/core.hpp"

namespace heunpath::testing
{

// t = 9/2, q = -1, alpha = 1, beta = -3/2, gamma = -0.14, delta = 4.32,
// epsilon from the Fuchs relation.
inline HeunParameters reference_params()
{
    HeunParameters p;
    p.t = 4.5;
    p.q = -1.0;
    p.alpha = 1.0;
    p.beta = -1.5;
    p.gamma = -0.14;
    p.delta = 4.32;
    p.epsilon = fuchs_epsilon(p.alpha, p.beta, p.gamma, p.delta);
    return validate_params(p);
}

// Same constants with t = 1 + 0.01i.
inline HeunParameters near_confluent_params()
{
    HeunParameters p = reference_params();
    p.t = complex{1.0, 1e-2};
    return validate_params(p);
}

// eps = 0, q = alpha*beta*t and delta = 1 + alpha + beta - gamma, so the
// regular solution is 2F1(1, 1/2; 1; z) = (1 - z)^{-1/2}.
inline HeunParameters hypergeometric()
{
    HeunParameters p;
    p.t = 2.0;
    p.alpha = 1.0;
    p.beta = 0.5;
    p.gamma = 1.0;
    p.delta = 1.5;
    p.epsilon = 0.0;
    p.q = p.alpha * p.beta * p.t;
    return validate_params(p);
}

// q = 0, alpha*beta = 0, gamma = delta = epsilon = 0: H = const solves the equation.
inline HeunParameters constant_solution()
{
    HeunParameters p;
    p.t = 2.0;
    return validate_params(p);
}

// Regular solution for reference_params() from a 30-digit reference (series and an
// independent Taylor ODE integrator agree to 20 digits).
struct ReferencePoint {
    double z;
    double H;
    double Hp;
};

inline constexpr ReferencePoint kReferenceValues[] = {
    {0.25, 1.7087147776483226901, 4.8248696467587192263},
    {0.5, 4.5145856192664328846, 23.716586360471904548},
    {0.8, 64.524336305138690917, 993.76651718636512802},
    {-1.0, 0.53326978066536971645, 0.083451088591892175029},
    {-2.2, 0.51947118861321903382, -0.024540382291380078982},
};

} // namespace heunpath::testing

#endif
