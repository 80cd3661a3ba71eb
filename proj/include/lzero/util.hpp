#pragma once

#include <complex>
#include <cstdint>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

namespace lz {

using cplx = std::complex<double>;

inline constexpr double pi = std::numbers::pi;
inline constexpr double two_pi = 2.0 * std::numbers::pi;

// e(x) = exp(2 pi i x)
inline cplx e_of(double x) {
    return std::polar(1.0, two_pi * x);
}

struct bad_input : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct numeric_failure : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// value + error estimate, tagged with how it was obtained
struct EvalResult {
    cplx value{};
    double err = 0.0;
    std::string method;
};

struct QuadratureResult {
    cplx value{};
    double err = 0.0;
    long nodes = 0;
};

long long mod_pow(long long b, long long e, long long m);
long long mod_inverse(long long a, long long m);  // throws if gcd(a,m) != 1
bool is_prime(long long n);

// primes <= limit, ascending
std::vector<long long> primes_up_to(long long limit);

// smallest prime factor table, spf[0]=spf[1]=0
std::vector<int32_t> smallest_prime_factor(int64_t limit);

long long euler_phi(long long n);
int divisor_count(long long n);

// parses "a+bi" / "a-bi" / "a" / "bi" (also accepts 'j')
cplx parse_complex(const std::string& s);

// parses "p/q" or an integer
std::pair<long long, long long> parse_rational(const std::string& s);

}  // namespace lz
