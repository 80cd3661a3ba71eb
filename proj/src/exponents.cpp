#include <numeric>

#include "lzero/exponents.hpp"

namespace lz {

Exact::Exact(long long n, long long d) : num(n), den(d) {
    if (den == 0) throw bad_input("Exact: zero denominator");
    if (den < 0) {
        num = -num;
        den = -den;
    }
    long long g = std::gcd(num < 0 ? -num : num, den);
    if (g > 1) {
        num /= g;
        den /= g;
    }
}

Exact operator+(Exact a, Exact b) { return {a.num * b.den + b.num * a.den, a.den * b.den}; }
Exact operator-(Exact a, Exact b) { return {a.num * b.den - b.num * a.den, a.den * b.den}; }
Exact operator*(Exact a, Exact b) { return {a.num * b.num, a.den * b.den}; }
Exact operator/(Exact a, Exact b) {
    if (b.num == 0) throw bad_input("Exact: division by zero");
    return {a.num * b.den, a.den * b.num};
}

Exact kappa_threshold() {
    // solve 6(1-k)/(3k-1) = 1 in exact arithmetic: 6 - 6k = 3k - 1 => k = 7/9
    Exact k(7, 9);
    Exact lhs = (Exact(6, 1) * (Exact(1, 1) - k)) / (Exact(3, 1) * k - Exact(1, 1));
    if (!(lhs == Exact(1, 1))) throw numeric_failure("kappa_threshold self-check failed");
    return k;
}

namespace {
void check_theta_range(double theta) {
    if (theta < 0.5 || theta > 1.0) throw bad_input("theta must lie in [1/2, 1]");
}
}  // namespace

Exact small_theta_exponent(Exact theta) {
    check_theta_range(theta.approx());
    return (Exact(1, 1) - theta) / Exact(3, 1);
}
Exact large_theta_exponent(Exact theta) {
    check_theta_range(theta.approx());
    return Exact(2, 3) * theta - Exact(1, 6);
}
double small_theta_exponent(double theta) {
    check_theta_range(theta);
    return (1.0 - theta) / 3.0;
}
double large_theta_exponent(double theta) {
    check_theta_range(theta);
    return 2.0 * theta / 3.0 - 1.0 / 6.0;
}

double general_bound_exponent(const ExponentInputs& in) {
    check_theta_range(in.theta);
    if (in.Theta < 0.0 || in.Theta > 1.0) throw bad_input("Theta must lie in [0, 1]");
    if (in.mu < 0.0 || in.mu > 0.5) throw bad_input("mu must lie in [0, 1/2]");
    return (1.0 - 2.0 * in.mu) * (1.0 - in.theta) + in.Theta - 0.5;
}

double density_c(double alpha) {
    if (alpha <= 0.5 || alpha > 1.0) throw bad_input("alpha must lie in (1/2, 1]");
    return std::min(3.0 / (2.0 - alpha), 3.0 / (3.0 * alpha - 1.0));
}

Exact density_c(Exact alpha) {
    double a = alpha.approx();
    if (a <= 0.5 || a > 1.0) throw bad_input("alpha must lie in (1/2, 1]");
    Exact b1 = Exact(3, 1) / (Exact(2, 1) - alpha);
    Exact b2 = Exact(3, 1) / (Exact(3, 1) * alpha - Exact(1, 1));
    return b1.approx() <= b2.approx() ? b1 : b2;
}

std::pair<double, double> density_bound_exponents(double beta) {
    if (beta < 0.75 || beta > 1.0) throw bad_input("beta must lie in [3/4, 1]");
    return {4.0 * (1.0 - beta), 6.0 * (1.0 - beta) / (3.0 * beta - 1.0)};
}

std::pair<Exact, Exact> density_bound_exponents(Exact beta) {
    double b = beta.approx();
    if (b < 0.75 || b > 1.0) throw bad_input("beta must lie in [3/4, 1]");
    return {Exact(4, 1) * (Exact(1, 1) - beta),
            Exact(6, 1) * (Exact(1, 1) - beta) / (Exact(3, 1) * beta - Exact(1, 1))};
}

double headline_exponent(double theta) {
    check_theta_range(theta);
    return theta > 7.0 / 9.0 ? large_theta_exponent(theta) : small_theta_exponent(theta);
}

Exact headline_exponent(Exact theta) {
    check_theta_range(theta.approx());
    bool large = theta.num * 9 > theta.den * 7;
    return large ? large_theta_exponent(theta) : small_theta_exponent(theta);
}

Exact level_one_exponent() { return Exact(1, 5); }

}  // namespace lz
