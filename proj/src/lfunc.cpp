#include <algorithm>
#include <boost/multiprecision/cpp_int.hpp>
#include <boost/rational.hpp>
#include <cmath>
#include <numeric>
#include <sstream>

#include "lzero/lfunc.hpp"

namespace lz {

namespace {

using Rat = boost::rational<boost::multiprecision::cpp_int>;

constexpr double kZeroGuard = 1e-4;  // |L| floor for Delta-type evaluations

cplx gammaC_factor(const FormPtr& f, cplx s) {
    return std::exp(log_gamma_C(s + (f->k - 1) / 2.0));
}

// L'' - (L')^2 / L from a jet, with the zero-proximity guard
cplx d_from_jet(const std::array<cplx, 3>& j, const std::string& what) {
    if (std::abs(j[0]) < kZeroGuard) {
        std::ostringstream ss;
        ss << what << ": too close to a zero (|L| = " << std::abs(j[0])
           << ", est. distance " << std::abs(j[0] / (std::abs(j[1]) + 1e-30)) << ")";
        throw numeric_failure(ss.str());
    }
    return j[2] - j[1] * j[1] / j[0];
}

}  // namespace

// --- local factors --------------------------------------------------------

cplx LocalFactorData::P(cplx x) const {
    if (q == 1) return 1.0;
    return 1.0 - lambda_q * x + xi_q * x * x;
}

cplx LocalFactorData::R(cplx x) const {
    if (q == 1) return 0.0;
    double lq = std::log(static_cast<double>(q));
    double pref = q * lq * lq / static_cast<double>(euler_phi(q));
    return pref * x * (lambda_q - 4.0 * xi_q * x + lambda_q * xi_q * x * x) / P(x);
}

LocalFactorData local_factor(const FormPtr& f, long long q) {
    if (!in_QN(q, f->N)) throw bad_input("local_factor: q not in Q(N)");
    LocalFactorData out;
    out.form = f;
    out.q = q;
    if (q == 1) return out;
    out.lambda_q = lambda_value(f, q);
    out.xi_q = f->xi(q);
    // Satake roots of x^2 - lambda x + xi
    cplx disc = std::sqrt(out.lambda_q * out.lambda_q - 4.0 * out.xi_q);
    out.alpha = (out.lambda_q + disc) / 2.0;
    out.beta = (out.lambda_q - disc) / 2.0;
    if (std::abs(out.alpha) < std::abs(out.beta)) std::swap(out.alpha, out.beta);
    double th = std::arg(out.alpha);
    out.theta = th < 0 ? th + two_pi : th;
    // consistency at 5 sample points of the P/R differential relation
    for (int i = 0; i < 5; ++i) {
        cplx s(1.1 + 0.2 * i, 0.3 + 0.4 * i);
        if (r_and_p_residual(f, q, s) > 1e-10)
            throw numeric_failure("local_factor: P/R relation residual too large");
    }
    return out;
}

double r_and_p_residual(const FormPtr& f, long long q, cplx s) {
    LocalFactorData lf;
    if (q == 1) return 0.0;
    lf.form = f;
    lf.q = q;
    lf.lambda_q = lambda_value(f, q);
    lf.xi_q = f->xi(q);
    double lq = std::log(static_cast<double>(q));
    cplx x = std::exp(-s * lq);
    cplx P = lf.P(x);
    // s-derivatives of P(q^{-s})
    cplx P1x = -lf.lambda_q + 2.0 * lf.xi_q * x;
    cplx P2x = 2.0 * lf.xi_q;
    cplx ps1 = -lq * x * P1x;
    cplx ps2 = lq * lq * (x * x * P2x + x * P1x);
    cplx rhs = -(static_cast<double>(q) / euler_phi(q)) * (ps2 - ps1 * ps1 / P);
    return std::abs(lf.R(x) - rhs);
}

// --- twisted values -------------------------------------------------------

std::array<EvalResult, 3> multiplicative_twist_values(const FormPtr& f, const CharacterHandle& chi,
                                                      cplx s) {
    if (chi.q == 1) {
        auto j = evaluator(f).L_jet(s);
        EvalResult base{j[0], 1e-10, "AFE"};
        return {base, EvalResult{j[1], 1e-9, "AFE"}, EvalResult{j[2], 1e-8, "AFE"}};
    }
    if (!in_QN(chi.q, f->N)) throw bad_input("multiplicative_twist_values: q not in Q(N)");
    if (chi.is_trivial) {
        // L(s, chi_0) = P_{f,q}(q^{-s}) L(s)
        auto lf = local_factor(f, chi.q);
        double lq = std::log(static_cast<double>(chi.q));
        cplx x = std::exp(-s * lq);
        cplx p0 = lf.P(x);
        cplx P1x = -lf.lambda_q + 2.0 * lf.xi_q * x;
        cplx p1 = -lq * x * P1x;
        cplx p2 = lq * lq * (x * x * 2.0 * lf.xi_q + x * P1x);
        auto j = evaluator(f).L_jet(s);
        return {EvalResult{p0 * j[0], 1e-10, "AFE"},
                EvalResult{p1 * j[0] + p0 * j[1], 1e-9, "AFE"},
                EvalResult{p2 * j[0] + 2.0 * p1 * j[1] + p0 * j[2], 1e-8, "AFE"}};
    }
    auto j = evaluator(twist_form(f, chi)).L_jet(s);
    return {EvalResult{j[0], 1e-10, "AFE"}, EvalResult{j[1], 1e-9, "AFE"},
            EvalResult{j[2], 1e-8, "AFE"}};
}

EvalResult delta_value(const FormPtr& f, cplx s) {
    auto j = evaluator(f).L_jet(s);
    cplx D = d_from_jet(j, "delta_value");
    cplx G = gammaC_factor(f, s);
    return {G * D, std::abs(G) * 1e-8 * (1.0 + std::abs(D)), "AFE"};
}

EvalResult delta_aq_value(const FormPtr& f, cplx s, long long a, long long q) {
    if (!in_QN(q, f->N)) throw bad_input("delta_aq_value: q not in Q(N)");
    if (std::gcd(a, q) != 1) throw bad_input("delta_aq_value: gcd(a,q) > 1");
    if (q == 1) return delta_value(f, s);
    double phi = static_cast<double>(euler_phi(q));
    auto chars = enumerate_characters(q);
    auto lf = local_factor(f, q);
    cplx x = std::exp(-s * std::log(static_cast<double>(q)));
    // tau(chi_0) = mu(q) = -1 for prime q
    cplx coef0 = (q - 1.0) / phi - (static_cast<double>(q) / phi) * lf.P(x);
    cplx total = coef0 * delta_value(f, s).value;
    double err = 1e-8;
    for (size_t i = 1; i < chars.size(); ++i) {
        cplx tau_bar = gauss_sum(chars[i].conjugate()).value;
        cplx ca = chars[i](a);
        if (ca == 0.0) continue;
        auto j = evaluator(twist_form(f, chars[i])).L_jet(s);
        cplx D = d_from_jet(j, "delta_aq_value");
        total += (tau_bar * ca / phi) * gammaC_factor(f, s) * D;
        err += 1e-8 * std::abs(tau_bar * D / phi);
    }
    return {total, err, "character expansion"};
}

EvalResult additive_twist_lambda(const FormPtr& f, cplx s, long long a, long long q) {
    if (!in_QN(q, f->N)) throw bad_input("additive_twist_lambda: q not in Q(N)");
    if (std::gcd(a, q) != 1) throw bad_input("additive_twist_lambda: gcd(a,q) > 1");
    if (q == 1) return evaluator(f).lambda(s);
    double phi = static_cast<double>(euler_phi(q));
    auto chars = enumerate_characters(q);
    auto lf = local_factor(f, q);
    cplx x = std::exp(-s * std::log(static_cast<double>(q)));
    cplx coef0 = (q - 1.0) / phi - (static_cast<double>(q) / phi) * lf.P(x);
    cplx total = coef0 * evaluator(f).lambda(s).value;
    double err = 1e-9;
    for (size_t i = 1; i < chars.size(); ++i) {
        cplx tau_bar = gauss_sum(chars[i].conjugate()).value;
        cplx ca = chars[i](a);
        if (ca == 0.0) continue;
        EvalResult lv = evaluator(twist_form(f, chars[i])).lambda(s);
        total += (tau_bar * ca / phi) * lv.value;
        err += std::abs(tau_bar / phi) * lv.err;
    }
    return {total, err, "character expansion"};
}

// --- H and G --------------------------------------------------------------

EvalResult H_value(const FormPtr& f, long long anum, long long aden, cplx s) {
    if (anum == 0) throw bad_input("H_value: alpha must be nonzero");
    if (aden < 1) throw bad_input("H_value: denominator must be positive");
    if (f->is_twist()) throw bad_input("H_value: base (registry) forms only");
    if (s.real() < kSeriesFloor)
        throw bad_input("H_value: series regime requires Re(s) >= 1.25");
    long long g = std::gcd(std::abs(anum), aden);
    anum /= g;
    aden /= g;
    long long M = default_limit(f);
    // Delta_f(s, alpha) by direct series on the c-coefficients
    EvalResult d1 = direct_D_alpha(f, s, anum, aden, M);
    cplx front = gammaC_factor(f, s);
    cplx part1 = front * d1.value;
    // reflected: eps (i sgn alpha)^k (N alpha^2)^{s-1/2} Delta_dual(s, -1/(N alpha))
    long long rnum = -aden, rden = f->N * anum;
    if (rden < 0) {
        rden = -rden;
        rnum = -rnum;
    }
    g = std::gcd(std::abs(rnum), rden);
    rnum /= g;
    rden /= g;
    EvalResult d2 = direct_D_alpha(f, s, rnum, rden, M);  // registry forms are self-dual
    double sgn = anum > 0 ? 1.0 : -1.0;
    cplx isgn = std::pow(cplx(0.0, sgn), f->k);
    double na2 = static_cast<double>(f->N) * anum * anum / static_cast<double>(aden * aden);
    cplx pref = evaluator(f).eps() * isgn * std::pow(cplx(na2), s - 0.5);
    cplx value = part1 - pref * front * d2.value;
    double err = std::abs(front) * (d1.err + std::abs(pref) * d2.err);
    return {value, err, "direct series"};
}

EvalResult G_value(const FormPtr& f, long long p, cplx s) {
    if (!is_prime(p) || !in_QN(p, f->N)) throw bad_input("G_value: p must be a prime in Q(N)");
    if (p % f->N != 1 % f->N) throw bad_input("G_value: p must be 1 mod N");
    if (p == f->N + 1) throw bad_input("G_value: p = N+1 is excluded");
    long long nbar = mod_inverse(f->N % p, p);
    long long a2 = (p - nbar) % p;  // -Nbar mod p
    if (s.real() >= kSeriesFloor) {
        // R-terms cancel: sum c(n) (e(n/p) - e(-n Nbar/p)) n^{-s}
        long long M = default_limit(f);
        EvalResult d1 = direct_D_alpha(f, s, 1, p, M);
        EvalResult d2 = direct_D_alpha(f, s, a2, p, M);
        cplx front = gammaC_factor(f, s);
        return {front * (d1.value - d2.value), std::abs(front) * (d1.err + d2.err),
                "direct series"};
    }
    EvalResult d1 = delta_aq_value(f, s, 1, p);
    EvalResult d2 = delta_aq_value(f, s, a2, p);
    return {d1.value - d2.value, d1.err + d2.err, "character expansion"};
}

// --- exact Vandermonde weights -------------------------------------------

std::vector<RationalWeight> vandermonde_weights(const std::vector<long long>& q_list,
                                                long long m0) {
    const long long M = static_cast<long long>(q_list.size());
    if (m0 < 0 || m0 >= M) throw bad_input("vandermonde_weights: m0 out of range");
    for (long long i = 0; i < M; ++i)
        for (long long j = i + 1; j < M; ++j)
            if (q_list[i] == q_list[j]) throw bad_input("vandermonde_weights: duplicate q");
    std::vector<Rat> nodes(M);
    for (long long j = 0; j < M; ++j) nodes[j] = Rat(1, q_list[j]);
    std::vector<RationalWeight> out(M);
    for (long long j = 0; j < M; ++j) {
        // Lagrange basis at node j; weight = coefficient of x^{m0}
        std::vector<Rat> poly{Rat(1)};
        Rat denom(1);
        for (long long i = 0; i < M; ++i) {
            if (i == j) continue;
            denom *= nodes[j] - nodes[i];
            std::vector<Rat> next(poly.size() + 1, Rat(0));
            for (size_t d = 0; d < poly.size(); ++d) {
                next[d + 1] += poly[d];
                next[d] -= poly[d] * nodes[i];
            }
            poly = std::move(next);
        }
        Rat c = poly[static_cast<size_t>(m0)] / denom;
        std::ostringstream n, d;
        n << c.numerator();
        d << c.denominator();
        out[j] = {n.str(), d.str(),
                  static_cast<double>(c.numerator()) / static_cast<double>(c.denominator())};
    }
    return out;
}

bool vandermonde_delta_check(const std::vector<long long>& q_list) {
    const long long M = static_cast<long long>(q_list.size());
    for (long long m0 = 0; m0 < M; ++m0) {
        auto w = vandermonde_weights(q_list, m0);
        for (long long m = 0; m < M; ++m) {
            Rat sum(0);
            for (long long j = 0; j < M; ++j) {
                Rat cj(boost::multiprecision::cpp_int(w[j].num),
                       boost::multiprecision::cpp_int(w[j].den));
                Rat qm(1);
                for (long long e = 0; e < m; ++e) qm /= q_list[j];
                sum += cj * qm;
            }
            if (sum != Rat(m == m0 ? 1 : 0)) return false;
        }
    }
    return true;
}

// --- twist distinctness ---------------------------------------------------

DistinctnessReport twist_distinctness(const FormPtr& f, long long p, double t) {
    if (!is_prime(p) || !in_QN(p, f->N))
        throw bad_input("twist_distinctness: p must be a prime in Q(N)");
    if (p % f->N != 1 % f->N) throw bad_input("twist_distinctness: p must be 1 mod N");
    if (p == f->N + 1) throw bad_input("twist_distinctness: p = N+1 is excluded");
    long long nbar = mod_inverse(f->N % p, p);
    long long a2 = (p - nbar) % p;
    DistinctnessReport rep;
    cplx s(0.0, t);
    rep.value = std::abs(additive_twist_lambda(f, s, 1, p).value -
                         additive_twist_lambda(f, s, a2, p).value);
    // first prime r = 1 mod p with lambda(r) != 0: exact coefficient witness
    long long limit = default_limit(f);
    for (long long r = p + 1; r <= limit; r += p) {
        if (!is_prime(r)) continue;
        if (std::abs(lambda_value(f, r)) > 1e-12) {
            rep.witness_r = r;
            rep.phase_a = e_of(static_cast<double>(r % p) / p);
            rep.phase_b = e_of(static_cast<double>((static_cast<__int128>(r) * a2 % p)) / p);
            break;
        }
    }
    if (rep.witness_r == 0) throw numeric_failure("twist_distinctness: no witness found");
    return rep;
}

// --- Cauchy-circle derivatives -------------------------------------------

EvalResult lambda_derivative(const FormPtr& f, cplx s, int order) {
    if (order < 1 || order > 2) throw bad_input("lambda_derivative: order must be 1 or 2");
    const double r = 0.05;
    const auto& ev = evaluator(f);
    auto contour = [&](int nodes) {
        cplx sum = 0.0;
        for (int j = 0; j < nodes; ++j) {
            double th = two_pi * j / nodes;
            cplx w = std::polar(1.0, th);
            cplx val = ev.lambda(s + r * w).value;
            sum += val / std::pow(w, order);
        }
        double fact = order == 1 ? 1.0 : 2.0;
        return fact * sum / (static_cast<double>(nodes) * std::pow(r, order));
    };
    cplx v32 = contour(32), v64 = contour(64);
    return {v64, std::abs(v64 - v32), "AFE"};
}

}  // namespace lz
