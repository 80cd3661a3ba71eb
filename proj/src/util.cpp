#include "lzero/util.hpp"

#include <cctype>
#include <numeric>

namespace lz {

long long mod_pow(long long b, long long e, long long m) {
    long long r = 1 % m;
    b %= m;
    if (b < 0) b += m;
    while (e > 0) {
        if (e & 1) r = static_cast<long long>((__int128)r * b % m);
        b = static_cast<long long>((__int128)b * b % m);
        e >>= 1;
    }
    return r;
}

long long mod_inverse(long long a, long long m) {
    long long g = m, x = 0, x1 = 1, a0 = a % m;
    if (a0 < 0) a0 += m;
    long long b = a0;
    while (b != 0) {
        long long q = g / b;
        g -= q * b;
        std::swap(g, b);
        x -= q * x1;
        std::swap(x, x1);
    }
    if (g != 1) throw bad_input("mod_inverse: arguments not coprime");
    x %= m;
    if (x < 0) x += m;
    return x;
}

bool is_prime(long long n) {
    if (n < 2) return false;
    for (long long d : {2LL, 3LL, 5LL, 7LL, 11LL, 13LL, 17LL, 19LL, 23LL, 29LL, 31LL, 37LL}) {
        if (n % d == 0) return n == d;
    }
    // deterministic Miller-Rabin for 64-bit range
    long long d = n - 1;
    int r = 0;
    while (d % 2 == 0) d /= 2, ++r;
    for (long long a : {2LL, 3LL, 5LL, 7LL, 11LL, 13LL, 17LL, 19LL, 23LL, 29LL, 31LL, 37LL}) {
        long long x = mod_pow(a, d, n);
        if (x == 1 || x == n - 1) continue;
        bool composite = true;
        for (int i = 0; i < r - 1; ++i) {
            x = static_cast<long long>((__int128)x * x % n);
            if (x == n - 1) {
                composite = false;
                break;
            }
        }
        if (composite) return false;
    }
    return true;
}

std::vector<long long> primes_up_to(long long limit) {
    std::vector<long long> out;
    if (limit < 2) return out;
    std::vector<bool> sieve(limit + 1, true);
    sieve[0] = sieve[1] = false;
    for (long long i = 2; i * i <= limit; ++i)
        if (sieve[i])
            for (long long j = i * i; j <= limit; j += i) sieve[j] = false;
    for (long long i = 2; i <= limit; ++i)
        if (sieve[i]) out.push_back(i);
    return out;
}

std::vector<int32_t> smallest_prime_factor(int64_t limit) {
    std::vector<int32_t> spf(limit + 1, 0);
    for (int64_t i = 2; i <= limit; ++i) {
        if (spf[i] == 0) {
            for (int64_t j = i; j <= limit; j += i)
                if (spf[j] == 0) spf[j] = static_cast<int32_t>(i);
        }
    }
    return spf;
}

long long euler_phi(long long n) {
    long long result = n;
    for (long long p = 2; p * p <= n; ++p) {
        if (n % p == 0) {
            while (n % p == 0) n /= p;
            result -= result / p;
        }
    }
    if (n > 1) result -= result / n;
    return result;
}

int divisor_count(long long n) {
    int count = 1;
    for (long long p = 2; p * p <= n; ++p) {
        if (n % p == 0) {
            int e = 0;
            while (n % p == 0) n /= p, ++e;
            count *= e + 1;
        }
    }
    if (n > 1) count *= 2;
    return count;
}

cplx parse_complex(const std::string& s) {
    // forms accepted: "a", "bi", "a+bi", "a-bi" (whitespace-free)
    std::string t;
    for (char c : s)
        if (!std::isspace(static_cast<unsigned char>(c))) t += c;
    if (t.empty()) throw bad_input("empty complex literal");
    auto is_imag_tail = [](const std::string& u) { return !u.empty() && (u.back() == 'i' || u.back() == 'j'); };
    // find split point: a sign not at position 0 and not after e/E
    size_t split = std::string::npos;
    for (size_t i = 1; i < t.size(); ++i) {
        if ((t[i] == '+' || t[i] == '-') && t[i - 1] != 'e' && t[i - 1] != 'E') split = i;
    }
    try {
        if (split == std::string::npos) {
            if (is_imag_tail(t)) {
                std::string b = t.substr(0, t.size() - 1);
                if (b.empty() || b == "+" || b == "-") b += "1";
                return {0.0, std::stod(b)};
            }
            return {std::stod(t), 0.0};
        }
        std::string re = t.substr(0, split), im = t.substr(split);
        if (!is_imag_tail(im)) throw bad_input("expected imaginary part in: " + s);
        im.pop_back();
        if (im == "+" || im == "-") im += "1";
        return {std::stod(re), std::stod(im)};
    } catch (const std::exception&) {
        throw bad_input("cannot parse complex literal: " + s);
    }
}

std::pair<long long, long long> parse_rational(const std::string& s) {
    auto slash = s.find('/');
    try {
        if (slash == std::string::npos) return {std::stoll(s), 1};
        long long num = std::stoll(s.substr(0, slash));
        long long den = std::stoll(s.substr(slash + 1));
        if (den == 0) throw bad_input("zero denominator: " + s);
        if (den < 0) num = -num, den = -den;
        long long g = std::gcd(std::abs(num), den);
        if (g > 1) num /= g, den /= g;
        return {num, den};
    } catch (const bad_input&) {
        throw;
    } catch (const std::exception&) {
        throw bad_input("cannot parse rational: " + s);
    }
}

}  // namespace lz
