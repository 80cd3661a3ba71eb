#pragma once

#include <utility>

#include "lzero/util.hpp"

namespace lz {

// exact rational, normalized with positive denominator
struct Exact {
    long long num = 0;
    long long den = 1;

    Exact() = default;
    Exact(long long n, long long d);
    bool operator==(const Exact&) const = default;
    double approx() const { return static_cast<double>(num) / den; }
};

Exact operator+(Exact a, Exact b);
Exact operator-(Exact a, Exact b);
Exact operator*(Exact a, Exact b);
Exact operator/(Exact a, Exact b);

// threshold solving 6(1-kappa)/(3 kappa - 1) = 1; equals 7/9
Exact kappa_threshold();

// (1-theta)/3 and 2 theta/3 - 1/6, exact on rational input
Exact small_theta_exponent(Exact theta);
Exact large_theta_exponent(Exact theta);
double small_theta_exponent(double theta);
double large_theta_exponent(double theta);

struct ExponentInputs {
    double theta = 0.5;  // in [1/2, 1]
    double Theta = 0.5;  // continuation abscissa, in [0, 1]
    double mu = 1.0 / 3.0;  // subconvexity exponent, in [0, 1/2]
};
// (1-2mu)(1-theta) + Theta - 1/2
double general_bound_exponent(const ExponentInputs& in);

// min{3/(2-alpha), 3/(3 alpha - 1)}; branches cross at alpha = 3/4
double density_c(double alpha);
Exact density_c(Exact alpha);
// (4(1-beta), 6(1-beta)/(3 beta - 1))
std::pair<double, double> density_bound_exponents(double beta);
std::pair<Exact, Exact> density_bound_exponents(Exact beta);

// guaranteed piecewise exponent: theta > 7/9 gives the large branch
double headline_exponent(double theta);
Exact headline_exponent(Exact theta);
Exact level_one_exponent();  // 1/5

}  // namespace lz
