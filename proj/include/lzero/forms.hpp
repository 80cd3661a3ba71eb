#pragma once

#include <array>
#include <memory>
#include <optional>

#include "lzero/arithmetic.hpp"

namespace lz {

// a primitive form: registry entry (eta24 / elliptic curve) or a twist of one
class Form;
using FormPtr = std::shared_ptr<const Form>;

class Form {
  public:
    enum class Source { Eta24, Curve, Twist };

    std::string name;
    int k = 0;
    long long N = 1;
    CharacterHandle nebentypus;  // character mod N; trivial for registry forms
    Source source = Source::Eta24;
    std::array<long long, 5> curve{};  // a1,a2,a3,a4,a6 when source == Curve
    FormPtr twist_base;
    CharacterHandle twist_chi;  // primitive mod q, (q, base level) = 1

    bool is_twist() const { return source == Source::Twist; }
    bool self_dual() const;
    cplx xi(long long n) const;  // nebentypus value

    // dual form (conjugate coefficients); self-dual registry forms return *this
    FormPtr dual(const FormPtr& self) const;

    // root-number cache, write-once
    mutable std::optional<cplx> eps_cache;
};

struct CoefficientTable {
    FormPtr form;
    long long limit = 0;
    std::vector<double> lam;  // lam[n], n = 0..limit; lam[0] unused; real (registry forms)
};

struct DSeriesCoefficients {
    FormPtr form;
    long long limit = 0;
    std::optional<std::pair<long long, long long>> aq;
    std::vector<cplx> c;  // c[n]; real-valued when no (a,q) twist on a registry form
};

struct RegistryConfig {
    std::string cache_dir;                  // persistent coefficient caches
    long long delta_limit = 2'000'000;      // exact tau table cap
    long long curve_limit = 1'000'000;      // weight-2 table cap
    long long ec_enum_cap = 100'000;        // point-enumeration cap for ec_ap
};

RegistryConfig& registry_config();  // process-wide settings

// --- registry -------------------------------------------------------------

std::vector<FormPtr> load_registry(const std::string& path);
FormPtr registry_form(const std::string& name);  // from the configured registry
void set_registry(std::vector<FormPtr> forms);
const std::vector<FormPtr>& registry_forms();

// --- coefficient generation ----------------------------------------------

// exact Ramanujan tau by pentagonal-series powering; cached on disk
CoefficientTable delta_tau_table(long long limit);
__int128 delta_tau_exact(long long n);  // n <= configured cap

// trace of Frobenius; enumeration at good primes, standard rules at bad ones
long long ec_ap(const std::array<long long, 5>& curve, long long p);

// normalized lambda(n) with memoized table; twists give lambda(n) chi(n)
cplx lambda_value(const FormPtr& f, long long n);

// shared, immutable lambda table for a registry form (built once, cached)
const std::vector<double>& lambda_table(const FormPtr& f, long long limit);
long long default_limit(const FormPtr& f);

// coefficients of the Dirichlet series of L * (L'/L)'; cached per form
const std::vector<double>& c_table(const FormPtr& f, long long limit);

DSeriesCoefficients d_series_coefficients(const FormPtr& f, long long limit,
                                          std::optional<std::pair<long long, long long>> aq = {});

// expansion of R_{f,q}(q^{-s}) = sum_{j>=1} r_j q^{-js}; r[0] = 0
std::vector<double> r_series_coefficients(const FormPtr& f, long long q, long long jmax);

// descriptor of f (x) chi for primitive chi mod q in Q(N)
FormPtr twist_form(const FormPtr& f, const CharacterHandle& chi);

// q in Q(N) = {1} + primes not dividing N
bool in_QN(long long q, long long N);

struct RankinSum {
    double observed;
    double predicted;  // x / (phi(p) log x)
};
RankinSum rankin_prime_sum(const FormPtr& f, long long p, long long c, double x);

}  // namespace lz
