#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <mutex>

#include "lzero/lfunc.hpp"

namespace lz {

namespace {

constexpr double kEta = 2.25;  // h-integral abscissa
constexpr double kDv = 0.1;    // v-grid spacing
constexpr double kVmax = 48.0; // v-grid half-width; ghat ~ e^{-pi|v|/2} beyond

// s-independent part of the h-integrand, computed once per process
const std::vector<cplx>& log_ghat_grid() {
    static const std::vector<cplx> grid = [] {
        const auto& ker = SmoothingKernel::instance();
        long long n = static_cast<long long>(std::llround(2 * kVmax / kDv)) + 1;
        std::vector<cplx> g(n);
        for (long long j = 0; j < n; ++j)
            g[j] = ker.log_g_hat(cplx(kEta, -kVmax + j * kDv));
        return g;
    }();
    return grid;
}

// coefficient access for a (possibly twisted) form: base table + character
struct BaseView {
    const std::vector<double>* lam;
    const CharacterHandle* chi;  // null for base forms
    long long limit;

    explicit BaseView(const FormPtr& f) {
        const FormPtr& base = f->is_twist() ? f->twist_base : f;
        limit = default_limit(base);
        lam = &lambda_table(base, limit);
        chi = f->is_twist() ? &f->twist_chi : nullptr;
    }
    cplx operator()(long long n) const {
        double l = (*lam)[n];
        if (l == 0.0) return 0.0;
        return chi ? l * (*chi)(n) : cplx(l);
    }
};

double series_tail_bound(double sigma, double M, double logpow) {
    if (sigma <= 1.0) return 1.0;
    double lm = std::log(M) + 1.0;
    return 4.0 * std::pow(M, 1.0 - sigma) * std::pow(lm, logpow) *
           (1.0 / (sigma - 1.0) + 1.0 / ((sigma - 1.0) * (sigma - 1.0)));
}

void check_floor(cplx s) {
    if (s.real() < kSeriesFloor)
        throw bad_input("direct series requires Re(s) >= 1.25");
}

}  // namespace

// --- direct series --------------------------------------------------------

EvalResult direct_L(const FormPtr& f, cplx s, long long cutoff) {
    check_floor(s);
    BaseView bv(f);
    long long M = std::min(cutoff, bv.limit);
    cplx sum = 0.0;
    for (long long n = 1; n <= M; ++n) {
        cplx l = bv(n);
        if (l != 0.0) sum += l * std::exp(-s * std::log(static_cast<double>(n)));
    }
    return {sum, series_tail_bound(s.real(), static_cast<double>(M), 1.0), "direct series"};
}

EvalResult direct_lambda_alpha(const FormPtr& f, cplx s, long long a, long long b,
                               long long cutoff) {
    check_floor(s);
    if (b < 1) throw bad_input("direct_lambda_alpha: denominator must be positive");
    BaseView bv(f);
    long long M = std::min(cutoff, bv.limit);
    cplx sum = 0.0;
    for (long long n = 1; n <= M; ++n) {
        cplx l = bv(n);
        if (l == 0.0) continue;
        long long res = static_cast<long long>((static_cast<__int128>(n) * a) % b);
        sum += l * e_of(static_cast<double>(res) / b) *
               std::exp(-s * std::log(static_cast<double>(n)));
    }
    return {sum, series_tail_bound(s.real(), static_cast<double>(M), 1.0), "direct series"};
}

EvalResult direct_D_alpha(const FormPtr& f, cplx s, long long a, long long b, long long cutoff) {
    check_floor(s);
    if (b < 1) throw bad_input("direct_D_alpha: denominator must be positive");
    if (f->is_twist()) throw bad_input("direct_D_alpha: base (registry) forms only");
    long long M = std::min(cutoff, default_limit(f));
    const auto& c = c_table(f, M);
    cplx sum = 0.0;
    for (long long n = 2; n <= M; ++n) {
        if (c[n] == 0.0) continue;
        long long res = static_cast<long long>((static_cast<__int128>(n) * a) % b);
        sum += c[n] * e_of(static_cast<double>(res) / b) *
               std::exp(-s * std::log(static_cast<double>(n)));
    }
    return {sum, series_tail_bound(s.real(), static_cast<double>(M), 3.0), "direct series"};
}

EvalResult direct_D(const FormPtr& f, cplx s, long long cutoff) {
    return direct_D_alpha(f, s, 0, 1, cutoff);
}

EvalResult direct_D_aq(const FormPtr& f, cplx s, long long a, long long q, long long cutoff) {
    check_floor(s);
    if (!in_QN(q, f->N)) throw bad_input("direct_D_aq: q not in Q(N)");
    if (std::gcd(a, q) != 1) throw bad_input("direct_D_aq: gcd(a,q) > 1");
    EvalResult out = direct_D_alpha(f, s, a, q, cutoff);
    if (q == 1) return out;
    long long M = std::min(cutoff, default_limit(f));
    const auto& lam = lambda_table(f, M);
    long long jmax = 2;
    while (std::pow(static_cast<double>(q), static_cast<double>(jmax)) <= M) ++jmax;
    auto r = r_series_coefficients(f, q, jmax);
    double lq = std::log(static_cast<double>(q));
    cplx corr = 0.0;
    long long qj = q;
    for (long long j = 1; j <= jmax && qj <= M; ++j) {
        cplx qjs = std::exp(-s * (j * lq));
        cplx inner = 0.0;
        for (long long m = 1; m <= M / qj; ++m)
            if (lam[m] != 0.0) inner += lam[m] * std::exp(-s * std::log(static_cast<double>(m)));
        corr += r[j] * qjs * inner;
        if (qj > M / q) break;
        qj *= q;
    }
    out.value -= corr;
    out.err += series_tail_bound(s.real(), static_cast<double>(M), 1.0) * 8.0;
    return out;
}

// --- AFE evaluator --------------------------------------------------------

AfeEvaluator::AfeEvaluator(FormPtr f) : f_(std::move(f)) {
    const FormPtr& base = f_->is_twist() ? f_->twist_base : f_;
    lam_ = &lambda_table(base, default_limit(base));
    if (f_->is_twist()) chi_ = f_->twist_chi;
    kw_ = (f_->k - 1) / 2.0;
    log_ghat_grid();  // force one-time grid build
}

void AfeEvaluator::check_envelope(cplx s) const {
    if (s.real() < -1.5 || s.real() > 2.75 || std::abs(s.imag()) > 60.5)
        throw bad_input("evaluation point outside the supported envelope");
}

double AfeEvaluator::cutoff_X(cplx s) const {
    double C = static_cast<double>(f_->N);
    double X = std::max(std::sqrt(C) * (std::abs(s) + f_->k), 8.0);
    double cap = static_cast<double>(lam_->size() - 1) / 42.0;
    if (cap < 8.0) throw numeric_failure("coefficient table too short for the AFE");
    return std::min(X, cap);
}

AfeEvaluator::Sums AfeEvaluator::sums(cplx s, double X, int jet_order) const {
    Sums out;
    const double C = static_cast<double>(f_->N);
    const double logC = std::log(C);
    const long long limit = static_cast<long long>(lam_->size()) - 1;
    const double log2pi = std::log(two_pi);
    double absB = 0.0, absBs = 0.0;

    // B rows: sum lam(n) n^{-s} g(n/X) (-log n)^r
    const auto& ker = SmoothingKernel::instance();
    long long nmax = std::min(limit, static_cast<long long>(42.0 * X) + 1);
    for (long long n = 1; n <= nmax; ++n) {
        double l = (*lam_)[n];
        if (l == 0.0) continue;
        double gx = ker.g(n / X);
        if (gx == 0.0) continue;
        cplx coef = chi_.q > 1 ? l * chi_(n) : cplx(l);
        if (coef == 0.0) continue;
        double ln = std::log(static_cast<double>(n));
        cplx term = coef * std::exp(-s * ln) * gx;
        out.B[0] += term;
        absB += std::abs(term);
        if (jet_order >= 1) out.B[1] += term * (-ln);
        if (jet_order >= 2) out.B[2] += term * (ln * ln);
    }

    // h-integrand weights on the fixed v-grid (rows: value, d/ds, d^2/ds^2)
    const auto& lg = log_ghat_grid();
    const long long J = static_cast<long long>(lg.size());
    std::vector<cplx> w0(J), w1, w2;
    if (jet_order >= 1) w1.resize(J);
    if (jet_order >= 2) w2.resize(J);
    for (long long j = 0; j < J; ++j) {
        cplx u(kEta, -kVmax + j * kDv);
        cplx z = s - u;
        cplx logPhi = (0.5 - s + u) * logC + (2.0 * z - 1.0) * log2pi +
                      log_gamma(1.0 - z + kw_) - log_gamma(z + kw_) + lg[j];
        cplx Phi = std::exp(logPhi);
        w0[j] = Phi;
        if (jet_order >= 1) {
            cplx d1 = -logC + 2.0 * log2pi - digamma(1.0 - z + kw_) - digamma(z + kw_);
            w1[j] = Phi * d1;
            if (jet_order >= 2) {
                cplx c2 = trigamma(1.0 - z + kw_) - trigamma(z + kw_);
                w2[j] = Phi * (d1 * d1 + c2);
            }
        }
    }

    // B* rows: sum conj(lam(m)) m^{s-1} [h with log m product-rule mixing]
    const double hpref = kDv / two_pi;
    int small_run = 0;
    for (long long m = 1; m <= 100000; ++m) {
        if (m > limit) break;
        double y = X * m;
        double w = std::log(y);
        // phases e(-i v_j w) via geometric recurrence over the uniform grid
        cplx ph = std::exp(cplx(0.0, kVmax * w));
        const cplx step = std::exp(cplx(0.0, -kDv * w));
        cplx h0 = 0.0, h1 = 0.0, h2 = 0.0;
        if (jet_order >= 2) {
            for (long long j = 0; j < J; ++j) {
                h0 += w0[j] * ph;
                h1 += w1[j] * ph;
                h2 += w2[j] * ph;
                ph *= step;
            }
        } else if (jet_order == 1) {
            for (long long j = 0; j < J; ++j) {
                h0 += w0[j] * ph;
                h1 += w1[j] * ph;
                ph *= step;
            }
        } else {
            for (long long j = 0; j < J; ++j) {
                h0 += w0[j] * ph;
                ph *= step;
            }
        }
        double scale = std::exp(-kEta * w) * hpref;
        h0 *= scale;
        h1 *= scale;
        h2 *= scale;
        double l = (*lam_)[m];
        cplx coef = chi_.q > 1 ? std::conj(l * chi_(m)) : cplx(l);
        double lm = std::log(static_cast<double>(m));
        cplx mp = std::exp((s - 1.0) * lm);
        double probe = std::abs(mp) * (std::abs(l) + 1.0) *
                       (std::abs(h0) + std::abs(h1) + std::abs(h2));
        if (coef != 0.0) {
            out.Bstar[0] += coef * mp * h0;
            absBs += std::abs(coef * mp * h0);
            if (jet_order >= 1) out.Bstar[1] += coef * mp * (lm * h0 + h1);
            if (jet_order >= 2) out.Bstar[2] += coef * mp * (lm * lm * h0 + 2.0 * lm * h1 + h2);
        }
        if (m > 20 && probe < 1e-18 * std::max(1.0, absB + absBs))
            ++small_run;
        else
            small_run = 0;
        if (small_run >= 4) break;
    }
    out.err = 1e-11 * (absB + absBs + 1.0);
    return out;
}

std::array<cplx, 3> AfeEvaluator::series_jet(cplx s) const {
    check_envelope(s);
    Sums sm = sums(s, cutoff_X(s), 2);
    cplx e = eps();
    return {sm.B[0] + e * sm.Bstar[0], sm.B[1] + e * sm.Bstar[1], sm.B[2] + e * sm.Bstar[2]};
}

EvalResult AfeEvaluator::L_value(cplx s) const {
    check_envelope(s);
    Sums sm = sums(s, cutoff_X(s), 0);
    return {sm.B[0] + eps() * sm.Bstar[0], sm.err, "AFE"};
}

std::array<cplx, 3> AfeEvaluator::L_jet(cplx s) const { return series_jet(s); }

EvalResult AfeEvaluator::lambda(cplx s) const {
    EvalResult L = L_value(s);
    cplx G = std::exp(log_gamma_C(s + kw_));
    return {G * L.value, std::abs(G) * L.err, "AFE"};
}

std::array<cplx, 3> AfeEvaluator::lambda_jet(cplx s) const {
    auto S = series_jet(s);
    cplx G = std::exp(log_gamma_C(s + kw_));
    cplx gl1 = -std::log(two_pi) + digamma(s + kw_);
    cplx gl2 = trigamma(s + kw_);
    cplx v0 = G * S[0];
    cplx v1 = G * (gl1 * S[0] + S[1]);
    cplx v2 = G * ((gl1 * gl1 + gl2) * S[0] + 2.0 * gl1 * S[1] + S[2]);
    return {v0, v1, v2};
}

cplx AfeEvaluator::eps() const {
    {
        if (eps_cache_) return *eps_cache_;
        if (f_->eps_cache) {
            eps_cache_ = f_->eps_cache;
            return *eps_cache_;
        }
    }
    const double C = static_cast<double>(f_->N);
    const double cap = static_cast<double>(lam_->size() - 1) / 42.0;
    static const cplx probes[] = {{1.3, 0.7}, {0.8, 2.0}, {1.1, -0.4}};
    cplx eps_val = 0.0;
    bool solved = false;
    for (cplx s0 : probes) {
        double X1 = std::min(6.0 * std::sqrt(C), cap);
        double X2 = std::min(14.0 * std::sqrt(C), 0.999 * cap);
        Sums a = sums(s0, X1, 0), b = sums(s0, X2, 0);
        cplx num = b.B[0] - a.B[0];
        cplx den = a.Bstar[0] - b.Bstar[0];
        if (std::abs(den) < 1e-10 * (std::abs(num) + 1.0)) continue;
        eps_val = num / den;
        solved = true;
        break;
    }
    if (!solved) throw numeric_failure("root number: degenerate at all probes");
    if (std::abs(std::abs(eps_val) - 1.0) > 1e-6)
        throw numeric_failure("root number: |eps| deviates from 1");
    eps_val /= std::abs(eps_val);
    eps_cache_ = eps_val;
    f_->eps_cache = eps_val;
    return eps_val;
}

const AfeEvaluator& AfeEvaluator::dual() const {
    if (f_->self_dual()) return *this;
    if (!dual_cache_) {
        FormPtr d = f_->dual(f_);
        dual_cache_ = std::shared_ptr<const AfeEvaluator>(&evaluator(d), [](const AfeEvaluator*) {});
    }
    return *dual_cache_;
}

double AfeEvaluator::fe_residual(cplx s) const {
    cplx lhs = lambda(s).value;
    cplx rhs = eps() * std::pow(cplx(static_cast<double>(f_->N)), 0.5 - s) *
               dual().lambda(1.0 - s).value;
    return std::abs(lhs - rhs) / std::max(std::abs(lhs), 1.0);
}

const AfeEvaluator& evaluator(const FormPtr& f) {
    static std::map<std::string, std::unique_ptr<AfeEvaluator>> cache;
    static std::mutex mu;
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(f->name);
    if (it == cache.end())
        it = cache.emplace(f->name, std::make_unique<AfeEvaluator>(f)).first;
    return *it->second;
}

}  // namespace lz
