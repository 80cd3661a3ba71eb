#include "lzero/special.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <mutex>

namespace lz {

namespace {

// Gauss-Legendre nodes/weights on [-1,1], generated once per order
struct GLRule {
    std::vector<double> x, w;
};

const GLRule& gl_rule(int n) {
    static std::mutex mu;
    static std::vector<GLRule> cache(65);
    std::lock_guard<std::mutex> lock(mu);
    GLRule& r = cache.at(n);
    if (!r.x.empty()) return r;
    r.x.resize(n);
    r.w.resize(n);
    for (int i = 0; i < n; ++i) {
        double x = std::cos(pi * (i + 0.75) / (n + 0.5));
        for (int it = 0; it < 100; ++it) {
            // Legendre P_n and derivative by recurrence
            double p0 = 1.0, p1 = x;
            for (int j = 2; j <= n; ++j) {
                double p2 = ((2 * j - 1) * x * p1 - (j - 1) * p0) / j;
                p0 = p1;
                p1 = p2;
            }
            double dp = n * (x * p1 - p0) / (x * x - 1.0);
            double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-16) break;
        }
        double p0 = 1.0, p1 = x;
        for (int j = 2; j <= n; ++j) {
            double p2 = ((2 * j - 1) * x * p1 - (j - 1) * p0) / j;
            p0 = p1;
            p1 = p2;
        }
        double dp = n * (x * p1 - p0) / (x * x - 1.0);
        r.x[n - 1 - i] = x;
        r.w[n - 1 - i] = 2.0 / ((1.0 - x * x) * dp * dp);
    }
    return r;
}

cplx gl_panel(const std::function<cplx(double)>& f, double a, double b, const GLRule& r) {
    double c = 0.5 * (a + b), h = 0.5 * (b - a);
    cplx s = 0.0;
    for (size_t i = 0; i < r.x.size(); ++i) s += r.w[i] * f(c + h * r.x[i]);
    return h * s;
}

// Bernoulli numbers B_2..B_16 over (2n)(2n-1) etc. used by the Stirling tails
constexpr double stirling_c[] = {
    1.0 / 12.0,      -1.0 / 360.0,      1.0 / 1260.0,     -1.0 / 1680.0,
    1.0 / 1188.0,    -691.0 / 360360.0, 1.0 / 156.0,      -3617.0 / 122400.0,
};
constexpr double bern2n[] = {
    1.0 / 6.0, -1.0 / 30.0, 1.0 / 42.0, -1.0 / 30.0, 5.0 / 66.0, -691.0 / 2730.0, 7.0 / 6.0,
};

bool near_nonpositive_integer(cplx z) {
    return z.real() < 0.5 && std::abs(z.imag()) < 1e-12 &&
           std::abs(z.real() - std::round(z.real())) < 1e-12;
}

}  // namespace

cplx log_gamma(cplx z) {
    if (near_nonpositive_integer(z)) throw bad_input("log_gamma: pole at nonpositive integer");
    if (z.imag() < 0.0) return std::conj(log_gamma(std::conj(z)));
    // shift until Stirling is accurate
    cplx shift = 0.0;
    while (std::abs(z) < 16.0 || z.real() < 10.0) {
        shift -= std::log(z);
        z += 1.0;
    }
    cplx res = (z - 0.5) * std::log(z) - z + 0.5 * std::log(two_pi);
    cplx zi = 1.0 / z, zp = zi;
    cplx z2 = zi * zi;
    for (double c : stirling_c) {
        res += c * zp;
        zp *= z2;
    }
    return res + shift;
}

cplx complex_gamma(cplx z) { return std::exp(log_gamma(z)); }

cplx digamma(cplx z) {
    if (near_nonpositive_integer(z)) throw bad_input("digamma: pole at nonpositive integer");
    if (z.imag() < 0.0) return std::conj(digamma(std::conj(z)));
    cplx shift = 0.0;
    while (std::abs(z) < 16.0 || z.real() < 10.0) {
        shift -= 1.0 / z;
        z += 1.0;
    }
    cplx res = std::log(z) - 0.5 / z;
    cplx z2 = 1.0 / (z * z), zp = z2;
    for (int n = 0; n < 7; ++n) {
        res -= bern2n[n] / (2.0 * (n + 1)) * zp;
        zp *= z2;
    }
    return res + shift;
}

cplx trigamma(cplx z) {
    if (near_nonpositive_integer(z)) throw bad_input("trigamma: pole at nonpositive integer");
    if (z.imag() < 0.0) return std::conj(trigamma(std::conj(z)));
    cplx shift = 0.0;
    while (std::abs(z) < 16.0 || z.real() < 10.0) {
        shift += 1.0 / (z * z);
        z += 1.0;
    }
    cplx zi = 1.0 / z;
    cplx res = zi + 0.5 * zi * zi;
    cplx z2 = zi * zi, zp = zi * z2;
    for (int n = 0; n < 7; ++n) {
        res += bern2n[n] * zp;
        zp *= z2;
    }
    return res + shift;
}

cplx gamma_C(cplx z) { return 2.0 * std::exp(-z * std::log(two_pi)) * complex_gamma(z); }

cplx log_gamma_C(cplx z) { return std::log(2.0) - z * std::log(two_pi) + log_gamma(z); }

cplx log_bessel_k2(cplx z) {
    // K_z(2) = 1/2 int exp(-2 cosh u + z u) du over the horizontal line Im u = c;
    // c is placed near the saddle so the integrand peak matches the result size
    if (z.real() < 0.0) z = -z;
    if (z.imag() < 0.0) return std::conj(log_bessel_k2(std::conj(z)));
    double c = std::clamp(std::asinh(z / 2.0).imag(), 0.0, pi / 2 - 1e-3);
    double cc = std::cos(c);
    double t0 = cc > 1e-12 ? std::asinh(z.real() / (2.0 * cc)) : 0.0;
    double peak = -2.0 * std::cosh(t0) * cc + z.real() * t0 - z.imag() * c;
    auto f = [&](double t) -> cplx {
        cplx u(t, c);
        return std::exp(-2.0 * std::cosh(u) + z * u - peak);
    };
    const GLRule& r = gl_rule(16);
    cplx total = 0.0;
    for (int p = 0; p < 56; ++p) {
        double a = -14.0 + 0.5 * p;
        total += gl_panel(f, a, a + 0.5, r);
    }
    return peak + std::log(0.5 * total);
}

const SmoothingKernel& SmoothingKernel::instance() {
    static SmoothingKernel k;
    return k;
}

SmoothingKernel::SmoothingKernel() {
    kappa_ = 0.5 / std::exp(log_bessel_k2(0.0)).real();
    // backward-accumulated integral on a log-spaced grid; cubic Hermite with
    // the exact derivative g'(x) = -kappa exp(-x-1/x)/x keeps error < 1e-11
    const int n = 2400;
    const double x0 = 0.01, x1 = 80.0;
    grid_.resize(n);
    gval_.resize(n);
    gder_.resize(n);
    double ratio = std::log(x1 / x0) / (n - 1);
    for (int i = 0; i < n; ++i) grid_[i] = x0 * std::exp(ratio * i);
    auto integrand = [&](double y) -> cplx { return std::exp(-y - 1.0 / y) / y; };
    const GLRule& r = gl_rule(12);
    double acc = 0.0;  // integral from grid_[i] to infinity, tail above x1 is < 1e-36
    gval_[n - 1] = 0.0;
    for (int i = n - 2; i >= 0; --i) {
        acc += gl_panel(integrand, grid_[i], grid_[i + 1], r).real();
        gval_[i] = kappa_ * acc;
    }
    for (int i = 0; i < n; ++i) {
        double x = grid_[i];
        gder_[i] = -kappa_ * std::exp(-x - 1.0 / x) / x;
    }
}

double SmoothingKernel::g(double x) const {
    if (x < 0.0) throw bad_input("g: negative argument");
    if (x <= grid_.front()) return 1.0;  // 1-g < exp(-1/x) <= exp(-100) here
    if (x >= grid_.back()) return 0.0;
    double ratio = std::log(grid_.back() / grid_.front()) / (grid_.size() - 1);
    size_t i = std::min<size_t>(static_cast<size_t>(std::log(x / grid_.front()) / ratio),
                                grid_.size() - 2);
    while (grid_[i + 1] < x) ++i;
    while (grid_[i] > x) --i;
    double h = grid_[i + 1] - grid_[i];
    double t = (x - grid_[i]) / h;
    double h00 = (1 + 2 * t) * (1 - t) * (1 - t), h10 = t * (1 - t) * (1 - t);
    double h01 = t * t * (3 - 2 * t), h11 = t * t * (t - 1);
    return h00 * gval_[i] + h10 * h * gder_[i] + h01 * gval_[i + 1] + h11 * h * gder_[i + 1];
}

cplx SmoothingKernel::log_g_hat(cplx z) const {
    if (std::abs(z) < 1e-13) throw bad_input("g_hat: pole at z=0");
    return std::log(2.0 * kappa_) + log_bessel_k2(z) - std::log(z);
}

cplx SmoothingKernel::g_hat(cplx z) const { return std::exp(log_g_hat(z)); }

cplx SmoothingKernel::g_hat_direct(cplx z) const {
    if (z.real() <= 0.0) throw bad_input("g_hat_direct: needs Re z > 0");
    // int_0^1 g x^{z-1} = 1/z + int_0^1 (g-1) x^{z-1}, with g-1 vanishing fast at 0
    auto lower = [&](double x) -> cplx {
        return (g(x) - 1.0) * std::exp((z - 1.0) * std::log(x));
    };
    auto upper = [&](double x) -> cplx { return g(x) * std::exp((z - 1.0) * std::log(x)); };
    cplx res = 1.0 / z;
    res += integrate_segment(lower, 1e-8, 1.0, 64).value;
    res += integrate_segment(upper, 1.0, 60.0, 96).value;
    return res;
}

QuadratureResult integrate_segment(const std::function<cplx(double)>& f, double a, double b,
                                   int panels) {
    const GLRule& r = gl_rule(16);
    auto run = [&](int np) {
        cplx s = 0.0;
        double h = (b - a) / np;
        for (int i = 0; i < np; ++i) s += gl_panel(f, a + i * h, a + (i + 1) * h, r);
        return s;
    };
    cplx coarse = run(std::max(1, panels / 2));
    cplx fine = run(panels);
    QuadratureResult q;
    q.value = fine;
    q.err = std::abs(fine - coarse);
    q.nodes = 16L * (panels + std::max(1, panels / 2));
    return q;
}

QuadratureResult line_integral(const std::function<cplx(cplx)>& f, double eta,
                               const std::function<double(double)>& decay_bound,
                               double tol) {
    double scale = std::max(decay_bound(0.0), 1e-300);
    double T = 5.0;
    while (decay_bound(T) > tol * scale) {
        T *= 2.0;
        if (T > 5120.0)
            throw numeric_failure("line_integral: decay bound never meets target (non-decaying integrand?)");
    }
    double dT = decay_bound(T), dT2 = decay_bound(T / 2);
    double rate = dT2 > dT && dT > 0.0 ? std::log(dT2 / dT) / (T / 2) : 1.0;
    double tail = dT / std::max(rate, 1e-6);
    auto g = [&](double t) -> cplx { return f(cplx(eta, t)) * cplx(0.0, 1.0); };
    int panels = std::max(64, static_cast<int>(4 * T));
    QuadratureResult q = integrate_segment(g, -T, T, panels);
    q.err += tail;
    return q;
}

}  // namespace lz
