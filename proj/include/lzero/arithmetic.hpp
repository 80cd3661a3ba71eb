#pragma once

#include "lzero/util.hpp"

namespace lz {

// Dirichlet character mod q, stored as an explicit value table.
// values[n] = chi(n mod q); zero off the unit group.
struct CharacterHandle {
    long long q = 1;
    std::vector<cplx> values;
    long long conductor = 1;
    bool is_primitive = true;
    bool is_trivial = true;
    long long order = 1;
    int index = 0;  // position within enumerate_characters(q), stable

    cplx operator()(long long n) const {
        n %= q;
        if (n < 0) n += q;
        return values[static_cast<size_t>(n)];
    }
    CharacterHandle conjugate() const;
};

struct GaussSumValue {
    long long q;
    int character_index;
    cplx value;
};

inline constexpr long long kModulusCap = 10000;

// all phi(q) characters mod q; index 0 is the trivial character
std::vector<CharacterHandle> enumerate_characters(long long q);

GaussSumValue gauss_sum(const CharacterHandle& chi);

// max_n | e(na/q) - [character expansion of e(na/q)] | for q prime or 1
double additive_expansion_residual(long long q, long long a);

}  // namespace lz
