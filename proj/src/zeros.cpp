#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <numeric>
#include <sstream>
#include <thread>

#include "lzero/zeros.hpp"

namespace lz {

namespace {

// chunked deterministic parallel map; results land at fixed indices
template <typename Fn>
void parallel_for(long long n, int workers, Fn&& fn) {
    workers = std::max(1, workers);
    if (workers == 1 || n < 4) {
        for (long long i = 0; i < n; ++i) fn(i);
        return;
    }
    std::vector<std::thread> pool;
    long long chunk = (n + workers - 1) / workers;
    for (int w = 0; w < workers; ++w) {
        long long lo = w * chunk, hi = std::min(n, lo + chunk);
        if (lo >= hi) break;
        pool.emplace_back([lo, hi, &fn] {
            for (long long i = lo; i < hi; ++i) fn(i);
        });
    }
    for (auto& t : pool) t.join();
}

double kw_of(const FormPtr& f) { return (f->k - 1) / 2.0; }

// continuous phase change of the finite L-part along a straight segment;
// Lambda = Gamma_C * L and the Gamma factor never vanishes, so the winding
// of Lambda over a closed contour equals the winding of L
double phase_walk(const AfeEvaluator& ev, cplx from, cplx to) {
    double len = std::abs(to - from);
    if (len == 0.0) return 0.0;
    cplx dir = (to - from) / len;
    double pos = 0.0, h = std::min(0.05, len), total = 0.0;
    cplx cur = ev.L_value(from).value;
    if (cur == 0.0) throw numeric_failure("phase walk started on a zero");
    while (pos < len - 1e-12) {
        h = std::min(h, len - pos);
        cplx nxt = ev.L_value(from + (pos + h) * dir).value;
        double d = std::arg(nxt / cur);
        if (std::abs(d) > 1.2 || nxt == 0.0) {
            h *= 0.5;
            if (h < 1e-7) throw numeric_failure("phase walk stalled (zero near contour)");
            continue;
        }
        total += d;
        cur = nxt;
        pos += h;
        if (std::abs(d) < 0.3) h = std::min(h * 1.6, 0.25);
    }
    return total;
}

long long winding_rectangle(const AfeEvaluator& ev, cplx s1, cplx s2) {
    cplx a(s1.real(), s1.imag()), b(s2.real(), s1.imag());
    cplx c(s2.real(), s2.imag()), d(s1.real(), s2.imag());
    double w = phase_walk(ev, a, b) + phase_walk(ev, b, c) + phase_walk(ev, c, d) +
               phase_walk(ev, d, a);
    double turns = w / two_pi;
    long long n = std::llround(turns);
    if (std::abs(turns - n) > 0.1)
        throw numeric_failure("argument count failed to settle on an integer");
    return n;
}

long long winding_circle(const AfeEvaluator& ev, cplx center, double r) {
    const int segs = 16;
    double w = 0.0;
    for (int j = 0; j < segs; ++j) {
        cplx p = center + r * std::polar(1.0, two_pi * j / segs);
        cplx q = center + r * std::polar(1.0, two_pi * (j + 1) / segs);
        w += phase_walk(ev, p, q);
    }
    double turns = w / two_pi;
    long long n = std::llround(turns);
    if (std::abs(turns - n) > 0.1)
        throw numeric_failure("disk multiplicity count failed to settle");
    return n;
}

// Newton iteration on Lambda'/Lambda from a seed; returns nullopt on escape
std::optional<cplx> newton_zero(const AfeEvaluator& ev, cplx seed) {
    cplx s = seed;
    for (int it = 0; it < 40; ++it) {
        if (s.real() < -0.45 || s.real() > 1.45 || std::abs(s.imag()) > 61.0)
            return std::nullopt;
        auto jet = ev.L_jet(s);
        cplx gl1 = -std::log(two_pi) + digamma(s + kw_of(ev.form()));
        cplx logd = gl1 + jet[1] / jet[0];  // Lambda'/Lambda
        cplx step = -1.0 / logd;
        if (std::abs(step) > 0.5) step *= 0.5 / std::abs(step);
        s += step;
        if (std::abs(step) < 1e-12 * (1.0 + std::abs(s))) return s;
    }
    return std::nullopt;
}

ZeroRecord certify(const FormPtr& f, cplx rho, const std::string& method) {
    const auto& ev = evaluator(f);
    ZeroRecord z;
    z.form_name = f->name;
    z.beta = rho.real();
    z.gamma = rho.imag();
    z.cert_radius = 0.01;
    z.method = method;
    z.multiplicity = static_cast<int>(winding_circle(ev, rho, z.cert_radius));
    z.lambda_prime = ev.lambda_jet(rho)[1];
    return z;
}

bool near_known(cplx rho, const std::vector<ZeroRecord>& zs, double tol = 1e-6) {
    for (const auto& z : zs)
        if (std::abs(rho - cplx(z.beta, z.gamma)) < tol) return true;
    return false;
}

// strip count with automatic boundary perturbation
long long strip_count(const AfeEvaluator& ev, double t1, double t2) {
    double eps_shift = 0.0;
    for (int attempt = 0; attempt < 5; ++attempt) {
        try {
            return winding_rectangle(ev, cplx(-0.1, t1 - eps_shift), cplx(1.1, t2 + eps_shift));
        } catch (const numeric_failure&) {
            eps_shift += 0.0137;
        }
    }
    throw numeric_failure("strip count failed after boundary perturbations");
}

// locate zeros missed by grid seeding inside (t1, t2); recursive bisection
void find_missing(const FormPtr& f, double t1, double t2, long long expected,
                  std::vector<ZeroRecord>& zeros) {
    const auto& ev = evaluator(f);
    auto found_in = [&](double a, double b) {
        long long n = 0;
        for (const auto& z : zeros)
            if (z.gamma > a && z.gamma <= b) n += z.multiplicity;
        return n;
    };
    if (expected <= found_in(t1, t2)) return;
    if (t2 - t1 > 0.2) {
        double mid = 0.5 * (t1 + t2);
        long long left = strip_count(ev, t1, mid);
        find_missing(f, t1, mid, left, zeros);
        find_missing(f, mid, t2, expected - left, zeros);
        return;
    }
    // short strip: dense Newton seeding across the strip
    for (double re : {0.5, 0.25, 0.75, 0.1, 0.9}) {
        for (int j = 0; j <= 20; ++j) {
            double t = t1 + (t2 - t1) * j / 20.0;
            auto rho = newton_zero(ev, cplx(re, t));
            if (!rho || rho->imag() <= t1 || rho->imag() > t2) continue;
            if (near_known(*rho, zeros)) continue;
            zeros.push_back(certify(f, *rho, "newton"));
            if (expected <= found_in(t1, t2)) return;
        }
    }
}

}  // namespace

double hardy_Z(const FormPtr& f, double t) {
    if (!f->self_dual()) throw bad_input("hardy_Z: self-dual forms only");
    const auto& ev = evaluator(f);
    cplx lam = ev.lambda(cplx(0.5, t)).value;
    cplx omega = std::exp(cplx(0.0, -0.5 * std::arg(ev.eps()) +
                                    0.5 * t * std::log(static_cast<double>(f->N))));
    cplx z = omega * lam;
    double scale = std::exp(log_gamma_C(cplx(0.5, t) + kw_of(f)).real());
    if (std::abs(z.imag()) > 1e-8 * std::max(scale, std::abs(lam)))
        throw numeric_failure("hardy_Z: rotation left a nonreal residue");
    return z.real();
}

long long argument_count(const FormPtr& f, cplx s1, cplx s2) {
    const auto& ev = evaluator(f);
    ev.eps();
    double shift = 0.0;
    for (int attempt = 0; attempt < 5; ++attempt) {
        try {
            return winding_rectangle(ev, s1 - cplx(shift, shift), s2 + cplx(shift, shift));
        } catch (const numeric_failure&) {
            shift += 0.0137;
        }
    }
    throw numeric_failure("argument_count failed after boundary perturbations");
}

ScanReport scan_zeros(const FormPtr& f, double T, double step, int workers) {
    if (T > 60.0) throw bad_input("scan_zeros: heights beyond 60 unsupported");
    if (step > 0.25 || step <= 0.0) throw bad_input("scan_zeros: step must be in (0, 0.25]");
    const auto& ev = evaluator(f);
    ev.eps();  // settle the write-once root-number cache before threading
    ScanReport rep;
    rep.form = f;
    rep.T = T;

    if (f->self_dual()) {
        long long n = static_cast<long long>(std::floor(T / step)) + 1;
        std::vector<double> zv(n);
        parallel_for(n, workers, [&](long long i) { zv[i] = hardy_Z(f, i * step); });
        std::vector<ZeroRecord> found;
        for (long long i = 0; i + 1 < n; ++i) {
            if (zv[i] == 0.0 || zv[i] * zv[i + 1] > 0.0) continue;
            double lo = i * step, hi = (i + 1) * step, zlo = zv[i];
            for (int it = 0; it < 40; ++it) {
                double mid = 0.5 * (lo + hi);
                double zm = hardy_Z(f, mid);
                if (zm == 0.0) {
                    lo = hi = mid;
                    break;
                }
                (zm * zlo > 0 ? lo : hi) = mid;
                if (zm * zlo > 0) zlo = zm;
            }
            auto rho = newton_zero(ev, cplx(0.5, 0.5 * (lo + hi)));
            if (!rho || rho->imag() > T || near_known(*rho, found)) continue;
            found.push_back(certify(f, *rho, "hardy bisection"));
        }
        // mirror to negative heights (conjugate zeros for real coefficients)
        std::vector<ZeroRecord> all;
        for (const auto& z : found) {
            if (z.gamma > 1e-9) {
                ZeroRecord m = z;
                m.gamma = -z.gamma;
                m.lambda_prime = std::conj(z.lambda_prime);
                all.push_back(m);
            }
            all.push_back(z);
        }
        rep.zeros = std::move(all);
    } else {
        long long n = static_cast<long long>(std::floor(2.0 * T / step)) + 1;
        std::vector<double> av(n);
        parallel_for(n, workers, [&](long long i) {
            av[i] = std::abs(ev.L_value(cplx(0.5, -T + i * step)).value);
        });
        std::vector<ZeroRecord> found;
        for (long long i = 1; i + 1 < n; ++i) {
            if (!(av[i] <= av[i - 1] && av[i] <= av[i + 1])) continue;
            auto rho = newton_zero(ev, cplx(0.5, -T + i * step));
            if (!rho || std::abs(rho->imag()) > T || near_known(*rho, found)) continue;
            found.push_back(certify(f, *rho, "newton"));
        }
        rep.zeros = std::move(found);
    }

    long long total = strip_count(ev, -T, T);
    rep.argument_total = total;
    long long have = 0;
    for (const auto& z : rep.zeros) have += z.multiplicity;
    if (have != total) {
        find_missing(f, -T, T, total, rep.zeros);
        have = 0;
        for (const auto& z : rep.zeros) have += z.multiplicity;
    }
    std::sort(rep.zeros.begin(), rep.zeros.end(),
              [](const ZeroRecord& a, const ZeroRecord& b) { return a.gamma < b.gamma; });
    rep.complete = (have == total);
    return rep;
}

cplx residue_at_zero(const FormPtr& f, const ZeroRecord& z) {
    if (z.multiplicity != 1) throw bad_input("residue_at_zero: simple zeros only");
    const auto& ev = evaluator(f);
    cplx rho(z.beta, z.gamma);
    const double r = 0.02;
    auto contour = [&](int nodes) {
        cplx sum = 0.0;
        for (int j = 0; j < nodes; ++j) {
            cplx w = std::polar(1.0, two_pi * j / nodes);
            cplx s = rho + r * w;
            auto jet = ev.L_jet(s);
            cplx D = jet[2] - jet[1] * jet[1] / jet[0];
            cplx G = std::exp(log_gamma_C(s + kw_of(f)));
            sum += G * D * w;
        }
        return r * sum / static_cast<double>(nodes);
    };
    cplx v48 = contour(48), v96 = contour(96);
    if (std::abs(v96 - v48) > 1e-8 * (1.0 + std::abs(v96)))
        throw numeric_failure("residue_at_zero: contour not converged");
    if (std::abs(v96 + z.lambda_prime) > 1e-6 * std::max(1.0, std::abs(z.lambda_prime)))
        throw numeric_failure("residue_at_zero: residue/derivative identity violated");
    return v96;
}

long long count_Ng(const ScanReport& r, double beta) {
    long long n = 0;
    for (const auto& z : r.zeros)
        if (z.beta >= beta - 1e-9 && std::abs(z.gamma) <= r.T) n += z.multiplicity;
    return n;
}

long long count_Nfs(const ScanReport& r) {
    long long n = 0;
    double w = kw_of(r.form);
    for (const auto& z : r.zeros) {
        // simplicity threshold is scaled by the Gamma envelope, which decays
        // like exp(-pi|t|/2) and would otherwise swamp any fixed cutoff
        double scale = std::exp(log_gamma_C(cplx(z.beta, z.gamma) + w).real());
        if (z.multiplicity == 1 && std::abs(z.lambda_prime) > 1e-6 * scale) ++n;
    }
    return n;
}

double theta_observed(const FormPtr& f, const ScanReport& r) {
    (void)f;
    double m = 0.5;  // proved floor; reported, never asserted against the true sup
    for (const auto& z : r.zeros)
        if (z.multiplicity == 1) m = std::max(m, z.beta);
    return m;
}

DensityReport density_experiment(const FormPtr& f, long long X, double T, double beta,
                                 int workers) {
    if (X > 500 || T > 20.0) throw bad_input("density_experiment: envelope X <= 500, T <= 20");
    DensityReport rep;
    rep.form = f;
    rep.X = X;
    rep.T = T;
    rep.beta = beta;
    rep.ref_exp_small = 4.0 * (1.0 - beta);
    rep.ref_exp_large = 6.0 * (1.0 - beta) / (3.0 * beta - 1.0);
    rep.complete = true;
    for (long long p : primes_up_to(X)) {
        if (p % f->N != 1 % f->N || f->N % p == 0) continue;
        // deterministic psi_p: sends the smallest primitive root to e(1/(p-1))
        long long g = 2;
        while (true) {
            long long ord = 1, v = g % p;
            while (v != 1) {
                v = v * g % p;
                ++ord;
            }
            if (ord == p - 1) break;
            ++g;
        }
        auto chars = enumerate_characters(p);
        cplx target = e_of(1.0 / (p - 1));
        int psi_idx = -1;
        for (const auto& c : chars)
            if (std::abs(c(g) - target) < 1e-9) {
                psi_idx = c.index;
                break;
            }
        if (psi_idx < 0) throw numeric_failure("density_experiment: psi_p not found");
        auto tw = twist_form(f, chars[psi_idx]);
        ScanReport scan = scan_zeros_cached(tw, T, 0.05, workers);
        if (!scan.complete) rep.complete = false;
        rep.rows.push_back({p, psi_idx, count_Ng(scan, beta)});
        rep.aggregate += rep.rows.back().count;
    }
    return rep;
}

// --- zero cache -----------------------------------------------------------

std::string zero_cache_path(const FormPtr& f, double T) {
    std::ostringstream ss;
    ss << registry_config().cache_dir << "/zeros-" << f->name << "-T" << std::fixed
       << std::setprecision(3) << T << ".txt";
    return ss.str();
}

void save_zero_cache(const ScanReport& r) {
    std::filesystem::create_directories(registry_config().cache_dir);
    std::ofstream out(zero_cache_path(r.form, r.T));
    out << "lzero-zeros v1 " << r.form->name << " T=" << std::fixed << std::setprecision(3)
        << r.T << " total=" << r.argument_total << " complete=" << (r.complete ? 1 : 0) << "\n";
    out << std::setprecision(15) << std::scientific;
    for (const auto& z : r.zeros)
        out << z.form_name << " " << z.beta << " " << z.gamma << " " << z.multiplicity << " "
            << z.lambda_prime.real() << " " << z.lambda_prime.imag() << " " << z.cert_radius
            << "\n";
}

std::optional<ScanReport> load_zero_cache(const FormPtr& f, double T) {
    std::ifstream in(zero_cache_path(f, T));
    if (!in) return std::nullopt;
    std::string header;
    std::getline(in, header);
    std::istringstream hs(header);
    std::string magic, ver, name, tpart, totpart, cpart;
    hs >> magic >> ver >> name >> tpart >> totpart >> cpart;
    if (magic != "lzero-zeros" || name != f->name) return std::nullopt;
    ScanReport rep;
    rep.form = f;
    rep.T = T;
    rep.argument_total = std::stoll(totpart.substr(totpart.find('=') + 1));
    rep.complete = cpart.substr(cpart.find('=') + 1) == "1";
    ZeroRecord z;
    double re, im;
    while (in >> z.form_name >> z.beta >> z.gamma >> z.multiplicity >> re >> im >>
           z.cert_radius) {
        z.lambda_prime = {re, im};
        z.method = "cache";
        rep.zeros.push_back(z);
    }
    return rep;
}

ScanReport scan_zeros_cached(const FormPtr& f, double T, double step, int workers) {
    if (auto c = load_zero_cache(f, T); c && c->complete) return *c;
    ScanReport rep = scan_zeros(f, T, step, workers);
    save_zero_cache(rep);
    return rep;
}

// --- explicit formula -----------------------------------------------------

namespace {

cplx ipow(cplx z, int k) {
    cplx r = 1.0;
    for (int i = 0; i < k; ++i) r *= z;
    return r;
}

// pi^2 / sin^2(pi u), overflow-safe for large |Im u|
cplx sin_kernel(cplx u) {
    cplx q = std::exp(cplx(0.0, two_pi) * (u.imag() >= 0 ? u : std::conj(u)));
    cplx val = -4.0 * pi * pi * q / ((1.0 - q) * (1.0 - q));
    return u.imag() >= 0 ? val : std::conj(val);
}

// F_{f,a,q}(z) = 2 sum c_{f,a,q}(n) n^{(k-1)/2} e(nz), tail < 1e-14
cplx F_sum(const FormPtr& f, long long a, long long q, cplx z) {
    double decay = two_pi * z.imag();
    long long M = static_cast<long long>(std::ceil(45.0 / decay)) + 40;
    auto dc = d_series_coefficients(f, std::min(M, default_limit(f)),
                                    q == 1 ? std::optional<std::pair<long long, long long>>{}
                                           : std::optional<std::pair<long long, long long>>{
                                                 {a, q}});
    double w = kw_of(f);
    cplx total = 0.0;
    for (long long n = 1; n < static_cast<long long>(dc.c.size()); ++n) {
        if (dc.c[n] == 0.0) continue;
        total += dc.c[n] * std::pow(static_cast<double>(n), w) *
                 std::exp(cplx(0.0, two_pi) * (static_cast<double>(n) * z));
    }
    return 2.0 * total;
}

// Lambda_f(s, a/q) on a vertical line: direct series when convergent, else AFE
cplx lambda_aq_line(const FormPtr& f, cplx s, long long a, long long q) {
    if (s.real() >= 2.6) {
        const auto& lam = lambda_table(f, default_limit(f));
        cplx sum = 0.0;
        double sig = s.real();
        long long M = static_cast<long long>(std::pow(1e18, 1.0 / (sig - 1.0))) + 10;
        M = std::min<long long>(M, 200000);
        for (long long n = 1; n <= M; ++n) {
            if (lam[n] == 0.0) continue;
            cplx ph = q == 1 ? cplx(1.0) : e_of(static_cast<double>((n % q) * a % q) / q);
            sum += lam[n] * ph * std::exp(-s * std::log(static_cast<double>(n)));
        }
        return std::exp(log_gamma_C(s + kw_of(f))) * sum;
    }
    return additive_twist_lambda(f, s, a, q).value;
}

struct PoleTerm {
    cplx rho;
    cplx residue;  // of Delta_{f,a,q}
};

// poles of Delta_{f,a,q} in the strip from the zero sets of the twisted L-functions
std::vector<PoleTerm> pole_terms(const FormPtr& f, long long a, long long q, double T) {
    std::vector<PoleTerm> out;
    auto add_from = [&](const ScanReport& scan, auto coef) {
        for (const auto& z : scan.zeros) {
            if (z.multiplicity != 1)
                throw numeric_failure("explicit formula: non-simple zero encountered");
            cplx rho(z.beta, z.gamma);
            out.push_back({rho, coef(rho) * (-z.lambda_prime)});
        }
    };
    if (q == 1) {
        add_from(scan_zeros_cached(f, T), [](cplx) { return cplx(1.0); });
        return out;
    }
    double phi = static_cast<double>(euler_phi(q));
    auto lf = local_factor(f, q);
    add_from(scan_zeros_cached(f, T), [&](cplx rho) {
        cplx x = std::exp(-rho * std::log(static_cast<double>(q)));
        return (q - 1.0) / phi - (static_cast<double>(q) / phi) * lf.P(x);
    });
    auto chars = enumerate_characters(q);
    for (size_t i = 1; i < chars.size(); ++i) {
        cplx coef = gauss_sum(chars[i].conjugate()).value * chars[i](a) / phi;
        auto tw = twist_form(f, chars[i]);
        add_from(scan_zeros_cached(tw, T), [coef](cplx) { return coef; });
    }
    return out;
}

cplx zero_sum(const std::vector<PoleTerm>& poles, cplx z, double w) {
    cplx log_miz = std::log(cplx(0.0, -1.0) * z);  // principal branch
    cplx total = 0.0;
    for (const auto& p : poles) total += p.residue * std::exp(-(p.rho + w) * log_miz);
    return total;
}

}  // namespace

double explicit_formula_residual(const FormPtr& f, long long a, long long q, cplx z,
                                 double T_trunc) {
    if (!in_QN(q, f->N)) throw bad_input("explicit_formula_residual: q not in Q(N)");
    if (std::gcd(a, q) != 1) throw bad_input("explicit_formula_residual: gcd(a,q) > 1");
    if (z.imag() < 0.2 || z.imag() > 2.0 || std::abs(z.real()) < 0.1 || std::abs(z.real()) > 2.0)
        throw bad_input("explicit_formula_residual: z outside the conditioning window");
    cplx miz(z.imag(), -z.real());  // -iz
    if (std::abs(std::arg(miz)) > pi / 2 - 0.05)
        throw bad_input("explicit_formula_residual: too close to the branch cut");
    const double w = kw_of(f);
    const auto& ev = evaluator(f);

    cplx F = F_sum(f, a, q, z);
    // reflected term, twisted by -(Na)^{-1} mod q
    long long nbar_a = q == 1 ? 0 : (q - mod_inverse(f->N % q * (a % q) % q, q)) % q;
    cplx z2 = -1.0 / (static_cast<double>(f->N) * q * q * z);
    cplx F2 = F_sum(f, q == 1 ? 0 : nbar_a, q, z2);
    cplx xi_q = q == 1 ? cplx(1.0) : f->xi(q);
    cplx refl = ev.eps() * xi_q /
                ipow(cplx(0.0, -1.0) * std::sqrt(static_cast<double>(f->N)) *
                         static_cast<double>(q) * z,
                     f->k) *
                F2;

    // A and B: vertical line Re s = k/2
    cplx log_miz = std::log(miz);
    double sigma = f->k / 2.0;
    auto decay = [](double t) { return std::exp(-0.5 * std::abs(t)); };
    auto integrand_A = [&](cplx s) {
        return lambda_aq_line(f, s, a, q) * (trigamma(s + w) + trigamma(s - w)) *
               std::exp(-(s + w) * log_miz);
    };
    auto integrand_B = [&](cplx s) {
        return lambda_aq_line(f, s, a, q) * sin_kernel(s + w) * std::exp(-(s + w) * log_miz);
    };
    cplx A = line_integral(integrand_A, sigma, decay).value / cplx(0.0, two_pi);
    cplx B = line_integral(integrand_B, sigma, decay).value / cplx(0.0, two_pi);

    cplx S = zero_sum(pole_terms(f, a, q, T_trunc), z, w);
    if (f->k == 1) throw bad_input("explicit_formula_residual: weight 1 unsupported");
    return std::abs(S - F + refl - A + B);
}

EvalResult truncated_mellin_I(const FormPtr& f, long long anum, long long aden, cplx s,
                              double T_trunc) {
    if (s.real() <= 0.0) throw bad_input("truncated_mellin_I: Re(s) must be positive");
    if (anum == 0 || aden < 1) throw bad_input("truncated_mellin_I: bad alpha");
    double alpha = static_cast<double>(anum) / aden;
    const double w = kw_of(f);
    auto poles = pole_terms(f, 1, 1, T_trunc);
    double top = std::abs(alpha) / 4.0;
    const double floor_y = 1e-8;
    double err = 0.0;
    auto integral = [&](const std::vector<PoleTerm>& ps, bool track_err) {
        auto Sf = [&](cplx z) { return zero_sum(ps, z, w); };
        cplx total = 0.0;
        double hi = top;
        while (hi > floor_y) {
            double lo = std::max(hi / 4.0, floor_y);
            auto seg = integrate_segment(
                [&](double y) {
                    return Sf(cplx(alpha, y)) * std::exp((s + w) * std::log(y)) / y;
                },
                lo, hi, 16);
            total += seg.value;
            if (track_err) err += seg.err;
            hi = lo;
        }
        if (track_err) {
            // remainder below floor_y: |S| bounded on the segment
            double msup = 0.0;
            for (double y : {floor_y, floor_y * 0.5, floor_y * 0.1})
                msup = std::max(msup, std::abs(Sf(cplx(alpha, y))));
            double sw = s.real() + w;
            err += msup * std::pow(floor_y, sw) / sw;
        }
        return total;
    };
    cplx total = integral(poles, true);
    // truncation error: zeros below T/2 only, difference bounds the tail profile
    std::vector<PoleTerm> half;
    for (const auto& p : poles)
        if (std::abs(p.rho.imag()) <= T_trunc / 2.0) half.push_back(p);
    err += std::abs(total - integral(half, false));
    return {total, err, "AFE"};
}

// --- reports --------------------------------------------------------------

std::string density_csv(const DensityReport& r) {
    std::ostringstream ss;
    ss << "p,psi_index,count\n";
    for (const auto& row : r.rows)
        ss << row.p << "," << row.psi_index << "," << row.count << "\n";
    ss << "# aggregate=" << r.aggregate << " T=" << r.T << " beta=" << r.beta
       << " ref_exponents=(" << r.ref_exp_small << "," << r.ref_exp_large << ")"
       << " complete=" << (r.complete ? 1 : 0) << "\n";
    return ss.str();
}

void write_Z_svg(const FormPtr& f, double T, const ScanReport& scan, const std::string& path) {
    if (!f->self_dual()) throw bad_input("write_Z_svg: self-dual forms only");
    const int W = 900, H = 300;
    const double step = std::max(T / 600.0, 0.01);
    std::vector<double> ts, zs;
    double zmax = 1e-300;
    for (double t = 0.0; t <= T + 1e-9; t += step) {
        double scale = std::exp(log_gamma_C(cplx(0.5, t) + kw_of(f)).real());
        double v = hardy_Z(f, t) / scale;  // normalize out the Gamma envelope
        ts.push_back(t);
        zs.push_back(v);
        zmax = std::max(zmax, std::abs(v));
    }
    std::ofstream out(path);
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H
        << "\" viewBox=\"0 0 " << W << " " << H << "\">\n";
    out << "<line x1=\"0\" y1=\"" << H / 2 << "\" x2=\"" << W << "\" y2=\"" << H / 2
        << "\" stroke=\"#999\"/>\n<polyline fill=\"none\" stroke=\"#1f4e9c\" points=\"";
    for (size_t i = 0; i < ts.size(); ++i)
        out << ts[i] / T * W << "," << H / 2 - zs[i] / zmax * (H / 2 - 10) << " ";
    out << "\"/>\n";
    for (const auto& z : scan.zeros)
        if (z.gamma >= 0.0 && z.gamma <= T)
            out << "<circle cx=\"" << z.gamma / T * W << "\" cy=\"" << H / 2
                << "\" r=\"4\" fill=\"#c0392b\"/>\n";
    out << "</svg>\n";
}

}  // namespace lz
