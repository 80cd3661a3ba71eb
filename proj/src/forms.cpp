#include "lzero/forms.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <numeric>
#include <fstream>
#include <map>
#include <mutex>
#include <sstream>

namespace lz {

namespace fs = std::filesystem;

RegistryConfig& registry_config() {
    static RegistryConfig cfg = [] {
        RegistryConfig c;
        const char* env = std::getenv("LZERO_CACHE");
        c.cache_dir = env ? env : ".lzero-cache";
        return c;
    }();
    return cfg;
}

bool in_QN(long long q, long long N) { return q == 1 || (is_prime(q) && N % q != 0); }

bool Form::self_dual() const {
    if (!is_twist()) return true;  // registry coefficients are real
    return twist_base->self_dual() && twist_chi.order <= 2;
}

cplx Form::xi(long long n) const {
    if (is_twist()) {
        cplx c = twist_chi(n);
        return twist_base->xi(n) * c * c;
    }
    return nebentypus(n);
}

FormPtr Form::dual(const FormPtr& self) const {
    if (self_dual()) return self;
    return twist_form(twist_base, twist_chi.conjugate());
}

// --- registry -------------------------------------------------------------

namespace {
std::vector<FormPtr> g_registry;
std::mutex g_registry_mu;
}  // namespace

std::vector<FormPtr> load_registry(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw bad_input("cannot open registry file: " + path);
    std::vector<FormPtr> out;
    std::string line;
    while (std::getline(in, line)) {
        auto hash = line.find('#');
        if (hash != std::string::npos) line.resize(hash);
        std::istringstream ss(line);
        std::string name, source;
        int k;
        long long N;
        if (!(ss >> name >> k >> N >> source)) continue;
        auto f = std::make_shared<Form>();
        f->name = name;
        f->k = k;
        f->N = N;
        f->nebentypus = enumerate_characters(N).at(0);  // trivial
        if (source == "eta24") {
            f->source = Form::Source::Eta24;
            if (k != 12 || N != 1) throw bad_input("eta24 source requires weight 12, level 1");
        } else if (source == "curve") {
            f->source = Form::Source::Curve;
            for (auto& a : f->curve)
                if (!(ss >> a)) throw bad_input("registry: curve needs a1 a2 a3 a4 a6");
            if (k != 2) throw bad_input("curve source requires weight 2");
        } else {
            throw bad_input("registry: unknown source " + source);
        }
        out.push_back(std::move(f));
    }
    return out;
}

void set_registry(std::vector<FormPtr> forms) {
    std::lock_guard<std::mutex> lock(g_registry_mu);
    g_registry = std::move(forms);
}

const std::vector<FormPtr>& registry_forms() {
    std::lock_guard<std::mutex> lock(g_registry_mu);
    if (g_registry.empty()) throw bad_input("registry not loaded");
    return g_registry;
}

FormPtr registry_form(const std::string& name) {
    for (const auto& f : registry_forms())
        if (f->name == name) return f;
    throw bad_input("unknown form: " + name);
}

// --- eta-product expansions ----------------------------------------------

namespace {

struct SparseTerm {
    long long offset;
    long long coeff;
};

// prod (1 - q^{dn}), exponents d*j(3j-1)/2
std::vector<SparseTerm> pentagonal(long long limit, long long dilate) {
    std::vector<SparseTerm> out{{0, 1}};
    for (long long j = 1;; ++j) {
        long long g1 = dilate * (j * (3 * j - 1) / 2);
        long long g2 = dilate * (j * (3 * j + 1) / 2);
        long long sign = (j % 2 == 0) ? 1 : -1;
        if (g1 > limit && g2 > limit) break;
        if (g1 <= limit) out.push_back({g1, sign});
        if (g2 <= limit) out.push_back({g2, sign});
    }
    return out;
}

// prod (1 - q^n)^3 = sum (-1)^j (2j+1) q^{j(j+1)/2}
std::vector<SparseTerm> pentagonal_cubed(long long limit) {
    std::vector<SparseTerm> out;
    for (long long j = 0; j * (j + 1) / 2 <= limit; ++j)
        out.push_back({j * (j + 1) / 2, (j % 2 == 0 ? 1 : -1) * (2 * j + 1)});
    return out;
}

template <typename T>
std::vector<T> sparse_sparse(const std::vector<SparseTerm>& a, const std::vector<SparseTerm>& b,
                             long long limit) {
    std::vector<T> out(limit + 1, 0);
    for (const auto& ta : a) {
        if (ta.offset > limit) continue;
        for (const auto& tb : b) {
            long long off = ta.offset + tb.offset;
            if (off > limit) break;
            out[off] += static_cast<T>(ta.coeff) * static_cast<T>(tb.coeff);
        }
    }
    return out;
}

template <typename T>
void dense_sparse_inplace(std::vector<T>& dense, const std::vector<SparseTerm>& sp) {
    std::vector<T> out(dense.size(), 0);
    for (const auto& t : sp) {
        const T c = static_cast<T>(t.coeff);
        const long long off = t.offset;
        for (long long n = off; n < static_cast<long long>(dense.size()); ++n)
            out[n] += c * dense[n - off];
    }
    dense.swap(out);
}

// --- disk cache of exact integer coefficients ----------------------------

constexpr const char* kCacheMagic = "lzero-coefficients v1";

bool load_int_cache(const std::string& path, const std::string& id, long long limit,
                    std::vector<__int128>& out) {
    std::ifstream in(path, std::ios::binary);
    if (!in) return false;
    std::string header;
    std::getline(in, header);
    std::ostringstream want;
    want << kCacheMagic << " " << id << " " << limit;
    if (header != want.str()) return false;
    out.resize(limit + 1);
    out[0] = 0;
    std::vector<int64_t> buf(2 * limit);
    in.read(reinterpret_cast<char*>(buf.data()), buf.size() * sizeof(int64_t));
    if (!in) return false;
    for (long long n = 1; n <= limit; ++n) {
        __int128 hi = buf[2 * (n - 1)];
        __int128 lo = static_cast<uint64_t>(buf[2 * (n - 1) + 1]);
        out[n] = (hi << 64) | lo;
    }
    return true;
}

void save_int_cache(const std::string& path, const std::string& id, long long limit,
                    const std::vector<__int128>& vals) {
    fs::create_directories(fs::path(path).parent_path());
    std::ofstream out(path, std::ios::binary);
    out << kCacheMagic << " " << id << " " << limit << "\n";
    std::vector<int64_t> buf(2 * limit);
    for (long long n = 1; n <= limit; ++n) {
        buf[2 * (n - 1)] = static_cast<int64_t>(vals[n] >> 64);
        buf[2 * (n - 1) + 1] = static_cast<int64_t>(static_cast<uint64_t>(vals[n]));
    }
    out.write(reinterpret_cast<const char*>(buf.data()), buf.size() * sizeof(int64_t));
}

std::string cache_path(const std::string& id, long long limit) {
    std::ostringstream ss;
    ss << registry_config().cache_dir << "/" << id << "-" << limit << ".coef";
    return ss.str();
}

// exact tau(n), n <= limit: coefficient of q^{n-1} in prod (1-q^m)^24
std::vector<__int128> build_delta_exact(long long limit) {
    std::vector<__int128> cached;
    if (load_int_cache(cache_path("delta", limit), "delta", limit, cached)) return cached;
    const long long M = limit - 1;  // degree in the eta expansion
    auto p3 = pentagonal_cubed(M);
    auto dense = sparse_sparse<__int128>(p3, p3, M);
    for (int rep = 0; rep < 6; ++rep) dense_sparse_inplace(dense, p3);
    std::vector<__int128> tau(limit + 1, 0);
    for (long long n = 1; n <= limit; ++n) tau[n] = dense[n - 1];
    if (tau[2] != -24 || tau[3] != 252 || tau[4] != -1472 || tau[5] != 4830)
        throw numeric_failure("tau table failed its spot checks");
    save_int_cache(cache_path("delta", limit), "delta", limit, tau);
    return tau;
}

// q-expansions of the two registry weight-2 levels as eta quotients, with
// point counts as the source of truth (cross-checked below at build time)
std::vector<__int128> build_curve_exact(const Form& f, long long limit) {
    std::vector<__int128> cached;
    if (load_int_cache(cache_path(f.name, limit), f.name, limit, cached)) return cached;
    const long long M = limit - 1;
    std::vector<int64_t> dense;
    if (f.N == 11) {  // eta(z)^2 eta(11z)^2
        auto p1 = pentagonal(M, 1);
        auto p11 = pentagonal(M, 11);
        dense = sparse_sparse<int64_t>(p1, p1, M);
        dense_sparse_inplace(dense, p11);
        dense_sparse_inplace(dense, p11);
    } else if (f.N == 32) {  // eta(4z)^2 eta(8z)^2
        auto p4 = pentagonal(M, 4);
        auto p8 = pentagonal(M, 8);
        dense = sparse_sparse<int64_t>(p4, p4, M);
        dense_sparse_inplace(dense, p8);
        dense_sparse_inplace(dense, p8);
    } else {
        throw bad_input("no expansion available for curve level " + std::to_string(f.N));
    }
    std::vector<__int128> a(limit + 1, 0);
    for (long long n = 1; n <= limit; ++n) a[n] = dense[n - 1];
    // cross-check the expansion against direct point counts
    for (long long p : primes_up_to(std::min<long long>(20000, limit)))
        if (static_cast<long long>(a[p]) != ec_ap(f.curve, p))
            throw numeric_failure("eta expansion disagrees with point count at p=" +
                                  std::to_string(p));
    save_int_cache(cache_path(f.name, limit), f.name, limit, a);
    return a;
}

// --- in-memory tables ----------------------------------------------------

std::mutex g_table_mu;
std::map<std::string, std::shared_ptr<std::vector<double>>> g_lambda_tables;
std::map<std::string, std::shared_ptr<std::vector<double>>> g_c_tables;
std::shared_ptr<std::vector<__int128>> g_delta_exact;

std::shared_ptr<std::vector<double>> build_lambda(const FormPtr& f, long long limit) {
    std::vector<__int128> exact;
    if (f->source == Form::Source::Eta24) {
        exact = build_delta_exact(limit);
        {
            std::lock_guard<std::mutex> lock(g_table_mu);
            if (!g_delta_exact)
                g_delta_exact = std::make_shared<std::vector<__int128>>(exact);
        }
    } else {
        exact = build_curve_exact(*f, limit);
    }
    auto lam = std::make_shared<std::vector<double>>(limit + 1, 0.0);
    const double half = (f->k - 1) / 2.0;
    for (long long n = 1; n <= limit; ++n)
        (*lam)[n] = static_cast<double>(exact[n]) / std::pow(static_cast<double>(n), half);
    return lam;
}

}  // namespace

long long default_limit(const FormPtr& f) {
    const auto& cfg = registry_config();
    if (f->is_twist()) return default_limit(f->twist_base);
    return f->source == Form::Source::Eta24 ? cfg.delta_limit : cfg.curve_limit;
}

const std::vector<double>& lambda_table(const FormPtr& f, long long limit) {
    if (f->is_twist()) throw bad_input("lambda_table: base (registry) forms only");
    if (limit > default_limit(f)) throw bad_input("lambda_table: limit beyond configured cap");
    std::unique_lock<std::mutex> lock(g_table_mu);
    auto it = g_lambda_tables.find(f->name);
    if (it != g_lambda_tables.end()) return *it->second;
    lock.unlock();
    auto tab = build_lambda(f, default_limit(f));  // built outside the lock; single writer wins
    lock.lock();
    auto [pos, inserted] = g_lambda_tables.try_emplace(f->name, tab);
    return *pos->second;
}

CoefficientTable delta_tau_table(long long limit) {
    if (limit < 1) throw bad_input("delta_tau_table: limit must be positive");
    auto f = registry_form("delta");
    const auto& lam = lambda_table(f, limit);
    CoefficientTable t;
    t.form = f;
    t.limit = limit;
    t.lam.assign(lam.begin(), lam.begin() + limit + 1);
    return t;
}

__int128 delta_tau_exact(long long n) {
    auto f = registry_form("delta");
    lambda_table(f, std::min<long long>(n, default_limit(f)));
    std::lock_guard<std::mutex> lock(g_table_mu);
    if (!g_delta_exact || n >= static_cast<long long>(g_delta_exact->size()))
        throw bad_input("delta_tau_exact: beyond configured cap");
    return (*g_delta_exact)[n];
}

// --- point counting -------------------------------------------------------

long long ec_ap(const std::array<long long, 5>& curve, long long p) {
    if (!is_prime(p)) throw bad_input("ec_ap: p must be prime");
    if (p > registry_config().ec_enum_cap) throw bad_input("ec_ap: p exceeds enumeration cap");
    auto [a1, a2, a3, a4, a6] = curve;
    long long b2 = a1 * a1 + 4 * a2;
    long long b4 = 2 * a4 + a1 * a3;
    long long b6 = a3 * a3 + 4 * a6;
    long long b8 = (b2 * b6 - b4 * b4) / 4 + 0;  // integral for integral models
    // b8 = a1^2 a6 + 4 a2 a6 - a1 a3 a4 + a2 a3^2 - a4^2 (use the closed form to stay exact)
    b8 = a1 * a1 * a6 + 4 * a2 * a6 - a1 * a3 * a4 + a2 * a3 * a3 - a4 * a4;
    long long c4 = b2 * b2 - 24 * b4;
    long long c6 = -b2 * b2 * b2 + 36 * b2 * b4 - 216 * b6;
    long long disc = -b2 * b2 * b8 - 8 * b4 * b4 * b4 - 27 * b6 * b6 + 9 * b2 * b4 * b6;

    auto md = [p](long long v) {
        v %= p;
        return v < 0 ? v + p : v;
    };

    if (md(disc) == 0) {
        // bad reduction: additive (0) when p | c4, else multiplicative (+-1)
        if (md(c4) == 0) return 0;
        if (p == 2) throw bad_input("ec_ap: multiplicative reduction at p=2 unsupported");
        // split iff -c6 is a square mod p
        return mod_pow(md(-c6), (p - 1) / 2, p) == 1 ? 1 : -1;
    }

    if (p == 2) {
        long long count = 1;  // infinity
        for (long long x = 0; x < 2; ++x)
            for (long long y = 0; y < 2; ++y) {
                long long lhs = y * y + a1 * x * y + a3 * y;
                long long rhs = x * x * x + a2 * x * x + a4 * x + a6;
                if (md(lhs - rhs) == 0) ++count;
            }
        return 2 + 1 - count;
    }

    // complete the square: a_p = -sum_x chi(4 rhs(x) + (a1 x + a3)^2)
    std::vector<int8_t> chi(p, -1);
    chi[0] = 0;
    for (long long t = 1; t <= (p - 1) / 2; ++t) chi[static_cast<long long>((__int128)t * t % p)] = 1;
    long long A1 = md(a1), A2 = md(a2), A3 = md(a3), A4 = md(a4), A6 = md(a6);
    long long sum = 0;
    for (long long x = 0; x < p; ++x) {
        long long x2 = static_cast<long long>((__int128)x * x % p);
        long long rhs = (static_cast<long long>((__int128)x2 * x % p) +
                         static_cast<long long>((__int128)A2 * x2 % p) +
                         static_cast<long long>((__int128)A4 * x % p) + A6) % p;
        long long lin = (static_cast<long long>((__int128)A1 * x % p) + A3) % p;
        long long u = (4 * rhs % p + static_cast<long long>((__int128)lin * lin % p)) % p;
        sum += chi[u];
    }
    long long ap = -sum;
    if (ap * ap > 4 * p) throw numeric_failure("ec_ap: Hasse bound violated");
    return ap;
}

// --- lambda access and twists --------------------------------------------

cplx lambda_value(const FormPtr& f, long long n) {
    if (n < 1) throw bad_input("lambda_value: n must be positive");
    if (f->is_twist()) return lambda_value(f->twist_base, n) * f->twist_chi(n);
    const auto& lam = lambda_table(f, std::min<long long>(n, default_limit(f)));
    if (n < static_cast<long long>(lam.size())) return lam[n];
    throw bad_input("lambda_value: beyond configured cap");
}

FormPtr twist_form(const FormPtr& f, const CharacterHandle& chi) {
    if (f->is_twist()) throw bad_input("twist_form: twists of twists not supported");
    if (chi.q == 1) return f;
    if (!chi.is_primitive) throw bad_input("twist_form: character must be primitive");
    if (!in_QN(chi.q, f->N)) throw bad_input("twist_form: modulus not in Q(N)");
    // canonicalize (conjugates carry a stale index): match the value table
    auto chars = enumerate_characters(chi.q);
    const CharacterHandle* canon = nullptr;
    for (const auto& c : chars) {
        double diff = 0.0;
        for (long long n = 0; n < chi.q; ++n)
            diff = std::max(diff, std::abs(c.values[n] - chi.values[n]));
        if (diff < 1e-9) {
            canon = &c;
            break;
        }
    }
    if (!canon) throw bad_input("twist_form: unrecognized character table");
    const CharacterHandle& cc = *canon;
    auto g = std::make_shared<Form>();
    g->name = f->name + "@" + std::to_string(cc.q) + "." + std::to_string(cc.index);
    g->k = f->k;
    g->N = f->N * chi.q * chi.q;
    g->source = Form::Source::Twist;
    g->twist_base = f;
    g->twist_chi = cc;
    return g;
}

// --- c-coefficients -------------------------------------------------------

namespace {

std::shared_ptr<std::vector<double>> build_c(const FormPtr& f, long long limit) {
    const auto& lam = lambda_table(f, limit);
    auto cp = std::make_shared<std::vector<double>>(limit + 1, 0.0);
    auto& c = *cp;
    for (long long p : primes_up_to(limit)) {
        double logp = std::log(static_cast<double>(p));
        bool good = f->N % p != 0;
        // traces of Satake powers: t_{j+1} = lam(p) t_j - xi(p) t_{j-1}
        double t_prev = 2.0, t_cur = lam[p];
        double bad_pow = lam[p];
        long long pj = p;
        for (long long j = 1; pj <= limit; ++j) {
            double von_mangoldt = (good ? t_cur : bad_pow) * logp;
            double weight = von_mangoldt * j * logp;  // Lambda_f(p^j) * log(p^j)
            for (long long n = pj; n <= limit; n += pj) c[n] += lam[n / pj] * weight;
            if (pj > limit / p) break;
            pj *= p;
            double t_next = lam[p] * t_cur - (good ? 1.0 : 0.0) * t_prev;
            t_prev = t_cur;
            t_cur = t_next;
            bad_pow *= lam[p];
        }
    }
    c[1] = 0.0;
    return cp;
}

}  // namespace

const std::vector<double>& c_table(const FormPtr& f, long long limit) {
    if (f->is_twist()) throw bad_input("c_table: base (registry) forms only");
    if (limit > default_limit(f)) throw bad_input("c_table: limit beyond configured cap");
    std::unique_lock<std::mutex> lock(g_table_mu);
    auto it = g_c_tables.find(f->name);
    if (it != g_c_tables.end()) return *it->second;
    lock.unlock();
    auto tab = build_c(f, default_limit(f));
    lock.lock();
    auto [pos, inserted] = g_c_tables.try_emplace(f->name, tab);
    return *pos->second;
}

DSeriesCoefficients d_series_coefficients(const FormPtr& f, long long limit,
                                          std::optional<std::pair<long long, long long>> aq) {
    DSeriesCoefficients out;
    out.form = f;
    out.limit = limit;
    out.aq = aq;
    const auto& c = c_table(f, limit);
    out.c.assign(limit + 1, 0.0);
    if (!aq) {
        for (long long n = 1; n <= limit; ++n) out.c[n] = c[n];
        return out;
    }
    auto [a, q] = *aq;
    if (!in_QN(q, f->N)) throw bad_input("d_series_coefficients: q not in Q(N)");
    if (std::gcd(a, q) != 1) throw bad_input("d_series_coefficients: gcd(a,q) > 1");
    for (long long n = 1; n <= limit; ++n)
        out.c[n] = e_of(static_cast<double>(((__int128)n * a) % q) / q) * c[n];
    if (q == 1) return out;
    const auto& lam = lambda_table(f, limit);
    long long jmax = static_cast<long long>(std::log2(static_cast<double>(limit)) /
                                            std::log2(static_cast<double>(q))) + 2;
    auto r = r_series_coefficients(f, q, jmax);
    long long qj = q;
    for (long long j = 1; j <= jmax && qj <= limit; ++j) {
        for (long long n = qj; n <= limit; n += qj) out.c[n] -= r[j] * lam[n / qj];
        if (qj > limit / q) break;
        qj *= q;
    }
    return out;
}

std::vector<double> r_series_coefficients(const FormPtr& f, long long q, long long jmax) {
    // R = (q log^2 q/phi) x (lam_q - 4 xi x + lam_q xi x^2) / P expanded geometrically
    if (!in_QN(q, f->N) || q == 1)
        throw bad_input("r_series_coefficients: q must be a prime in Q(N)");
    const auto& lam = lambda_table(f->is_twist() ? f->twist_base : f, q);
    double lq = lam[q], xiq = 1.0;  // q in Q(N), trivial nebentypus
    double scale = q * std::log(q) * std::log(q) / euler_phi(q);
    std::vector<double> u(jmax + 3, 0.0);  // 1/P coefficients
    u[0] = 1.0;
    for (long long j = 1; j < static_cast<long long>(u.size()); ++j)
        u[j] = lq * u[j - 1] - (j >= 2 ? xiq * u[j - 2] : 0.0);
    std::vector<double> r(jmax + 1, 0.0);
    for (long long j = 1; j <= jmax; ++j) {
        double v = lq * u[j - 1];
        if (j >= 2) v += -4.0 * xiq * u[j - 2];
        if (j >= 3) v += lq * xiq * u[j - 3];
        r[j] = scale * v;
    }
    return r;
}

RankinSum rankin_prime_sum(const FormPtr& f, long long p, long long c, double x) {
    if (f->is_twist()) throw bad_input("rankin_prime_sum: base forms only");
    long long limit = static_cast<long long>(x);
    if (limit > default_limit(f)) throw bad_input("rankin_prime_sum: x beyond coefficient cap");
    const auto& lam = lambda_table(f, std::max<long long>(limit, 2));
    double observed = 0.0;
    for (long long r : primes_up_to(limit))
        if (r % p == c % p) observed += lam[r] * lam[r];
    double predicted = x < 3 ? 0.0 : x / (euler_phi(p) * std::log(x));
    return {observed, predicted};
}

}  // namespace lz
