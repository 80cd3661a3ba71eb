#include "lzero/arithmetic.hpp"

#include <algorithm>
#include <numeric>

namespace lz {

namespace {

// cyclic component of (Z/qZ)*: generator g with given order, modulo the prime power pk
struct UnitComponent {
    long long pk;     // prime power carrying this component
    long long gen;
    long long order;
};

std::vector<std::pair<long long, long long>> factorize(long long n) {
    std::vector<std::pair<long long, long long>> out;
    for (long long p = 2; p * p <= n; ++p) {
        if (n % p == 0) {
            long long e = 0;
            while (n % p == 0) n /= p, ++e;
            out.push_back({p, e});
        }
    }
    if (n > 1) out.push_back({n, 1});
    return out;
}

long long primitive_root_mod_pk(long long p, long long e) {
    long long phi_p = p - 1;
    auto fac = factorize(phi_p);
    long long g = 2;
    for (;; ++g) {
        bool ok = true;
        for (auto& [r, _] : fac)
            if (mod_pow(g, phi_p / r, p) == 1) {
                ok = false;
                break;
            }
        if (ok) break;
    }
    if (e == 1) return g;
    // lift: g generates mod p^e iff g^{p-1} != 1 mod p^2
    if (mod_pow(g, p - 1, p * p) == 1) g += p;
    return g;
}

}  // namespace

CharacterHandle CharacterHandle::conjugate() const {
    CharacterHandle out = *this;
    for (auto& v : out.values) v = std::conj(v);
    return out;
}

std::vector<CharacterHandle> enumerate_characters(long long q) {
    if (q < 1) throw bad_input("enumerate_characters: modulus must be positive");
    if (q > kModulusCap) throw bad_input("enumerate_characters: modulus exceeds cap");

    std::vector<UnitComponent> comps;
    for (auto& [p, e] : factorize(q)) {
        long long pk = 1;
        for (long long i = 0; i < e; ++i) pk *= p;
        if (p == 2) {
            if (e == 2) comps.push_back({pk, 3, 2});
            if (e >= 3) {
                comps.push_back({pk, pk - 1, 2});
                comps.push_back({pk, 3, pk / 4});
            }
        } else {
            comps.push_back({pk, primitive_root_mod_pk(p, e), (p - 1) * (pk / p)});
        }
    }

    // discrete logs per component for every unit mod q
    size_t nc = comps.size();
    std::vector<std::vector<long long>> dlog(nc);
    for (size_t i = 0; i < nc; ++i) {
        auto& c = comps[i];
        // table over residues mod c.pk: every unit mod 2^e (e>=3) is (-1)^s 3^t
        std::vector<long long> tab(c.pk, -1);
        if (c.pk % 2 == 0 && c.pk >= 8) {
            bool is_sign_part = (c.gen == c.pk - 1);
            long long half = c.pk / 4;
            for (long long s = 0; s < 2; ++s) {
                long long base = s ? c.pk - 1 : 1;
                long long v = base;
                for (long long t = 0; t < half; ++t) {
                    tab[v] = is_sign_part ? s : t;
                    v = static_cast<long long>((__int128)v * 3 % c.pk);
                }
            }
        } else {
            long long v = 1;
            for (long long t = 0; t < c.order; ++t) {
                tab[v] = t;
                v = static_cast<long long>((__int128)v * c.gen % c.pk);
            }
        }
        dlog[i] = std::move(tab);
    }

    long long phi = 1;
    for (auto& c : comps) phi *= c.order;

    std::vector<CharacterHandle> chars;
    chars.reserve(phi);
    std::vector<long long> k(nc, 0);
    for (long long idx = 0; idx < phi; ++idx) {
        CharacterHandle ch;
        ch.q = q;
        ch.index = static_cast<int>(idx);
        ch.values.assign(q, cplx(0.0, 0.0));
        long long ord = 1;
        for (size_t i = 0; i < nc; ++i)
            ord = std::lcm(ord, comps[i].order / std::gcd(comps[i].order, k[i]));
        ch.order = ord;
        for (long long n = 0; n < q; ++n) {
            if (std::gcd(n, q) != 1) continue;
            double phase = 0.0;
            for (size_t i = 0; i < nc; ++i) {
                long long t = dlog[i][n % comps[i].pk];
                phase += static_cast<double>(k[i]) * t / comps[i].order;
            }
            ch.values[n] = e_of(phase);
        }
        if (q == 1) ch.values[0] = 1.0;
        ch.is_trivial = std::all_of(k.begin(), k.end(), [](long long v) { return v == 0; });

        // conductor: least d | q with chi trivial on units congruent to 1 mod d
        ch.conductor = q;
        for (long long d = 1; d <= q; ++d) {
            if (q % d != 0) continue;
            bool ok = true;
            for (long long n = 1; n < q && ok; ++n)
                if (n % d == 1 % d && std::gcd(n, q) == 1 &&
                    std::abs(ch.values[n] - cplx(1.0)) > 1e-12)
                    ok = false;
            if (ok) {
                ch.conductor = d;
                break;
            }
        }
        ch.is_primitive = (ch.conductor == q);
        chars.push_back(std::move(ch));

        // next index tuple; the all-zero (trivial) tuple comes first
        for (size_t i = 0; i < nc; ++i) {
            if (++k[i] < comps[i].order) break;
            k[i] = 0;
        }
    }
    return chars;
}

GaussSumValue gauss_sum(const CharacterHandle& chi) {
    cplx s = 0.0;
    for (long long n = 0; n < chi.q; ++n)
        s += chi.values[n] * e_of(static_cast<double>(n) / chi.q);
    return {chi.q, chi.index, s};
}

double additive_expansion_residual(long long q, long long a) {
    if (q != 1 && !is_prime(q)) throw bad_input("additive_expansion_residual: q must be 1 or prime");
    if (std::gcd(a, q) != 1) throw bad_input("additive_expansion_residual: gcd(a,q) > 1");
    auto chars = enumerate_characters(q);
    double phi = static_cast<double>(euler_phi(q));
    std::vector<cplx> tau(chars.size()), tau_bar(chars.size());
    for (size_t i = 0; i < chars.size(); ++i) {
        tau[i] = gauss_sum(chars[i]).value;
        tau_bar[i] = gauss_sum(chars[i].conjugate()).value;
    }
    double worst = 0.0;
    for (long long n = 0; n < q; ++n) {
        long long na = ((__int128)n * a) % q;
        cplx rhs = (q - 1.0) / phi + (q / phi) * tau[0] * chars[0](na);
        for (size_t i = 1; i < chars.size(); ++i) rhs += tau_bar[i] * chars[i](na) / phi;
        worst = std::max(worst, std::abs(e_of(static_cast<double>(na) / q) - rhs));
    }
    return worst;
}

}  // namespace lz
