#pragma once

#include <array>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "lzero/arithmetic.hpp"
#include "lzero/forms.hpp"
#include "lzero/special.hpp"
#include "lzero/util.hpp"

namespace lz {

// direct Dirichlet-series evaluation, absolutely convergent regime only
inline constexpr double kSeriesFloor = 1.25;

EvalResult direct_L(const FormPtr& f, cplx s, long long cutoff);
// sum c(n) e(n alpha) n^{-s}; alpha = a/b exact rational phase
EvalResult direct_D_alpha(const FormPtr& f, cplx s, long long a, long long b, long long cutoff);
EvalResult direct_D(const FormPtr& f, cplx s, long long cutoff);
// D_{f,a,q}: additive twist of D minus the R_{f,q} correction series
EvalResult direct_D_aq(const FormPtr& f, cplx s, long long a, long long q, long long cutoff);
// sum lam(n) e(n a/b) n^{-s}
EvalResult direct_lambda_alpha(const FormPtr& f, cplx s, long long a, long long b,
                               long long cutoff);

// smoothed approximate-functional-equation evaluator for Lambda_f and jets
class AfeEvaluator {
  public:
    explicit AfeEvaluator(FormPtr f);

    const FormPtr& form() const { return f_; }
    long long conductor() const { return f_->N; }

    EvalResult lambda(cplx s) const;
    std::array<cplx, 3> lambda_jet(cplx s) const;  // Lambda, Lambda', Lambda''
    EvalResult L_value(cplx s) const;
    std::array<cplx, 3> L_jet(cplx s) const;  // finite L-function and derivatives

    cplx eps() const;  // root number, solved once and cached
    // |Lambda(s) - eps C^{1/2-s} Lambda_dual(1-s)| / max(|Lambda(s)|, 1)
    double fe_residual(cplx s) const;

    // cutoff actually used at s (exposed for parameter-contract tests)
    double cutoff_X(cplx s) const;

  private:
    struct Sums {
        std::array<cplx, 3> B{}, Bstar{};
        double err = 0.0;
    };
    Sums sums(cplx s, double X, int jet_order) const;
    std::array<cplx, 3> series_jet(cplx s) const;  // B + eps B* and s-derivatives
    const AfeEvaluator& dual() const;
    void check_envelope(cplx s) const;

    FormPtr f_;
    const std::vector<double>* lam_;  // base-form coefficient table
    CharacterHandle chi_;             // multiplicative phases (trivial for base forms)
    double kw_;                       // (k-1)/2
    mutable std::optional<cplx> eps_cache_;
    mutable std::shared_ptr<const AfeEvaluator> dual_cache_;
};

// process-wide evaluator cache keyed by form name
const AfeEvaluator& evaluator(const FormPtr& f);

struct LocalFactorData {
    FormPtr form;
    long long q = 1;
    cplx lambda_q{0.0}, xi_q{0.0};
    cplx alpha{0.0}, beta{0.0};  // Satake roots, alpha*beta = xi, alpha+beta = lambda
    double theta = 0.0;          // arg alpha in [0, 2pi) when |lambda| < 2

    cplx P(cplx x) const;  // 1 - lambda x + xi x^2  (1 when q=1)
    cplx R(cplx x) const;  // (q log^2 q/phi) x (lambda - 4 xi x + lambda xi x^2)/P
};

LocalFactorData local_factor(const FormPtr& f, long long q);
// residual of R(q^{-s}) = -(q/phi) P(q^{-s}) ((P(q^{-s}))'/P(q^{-s}))', d/ds
double r_and_p_residual(const FormPtr& f, long long q, cplx s);

// L, L', L'' of f tensor chi; trivial chi mod q uses P_{f,q}(q^{-s}) L(s)
std::array<EvalResult, 3> multiplicative_twist_values(const FormPtr& f, const CharacterHandle& chi,
                                                      cplx s);

// Delta_{f,a,q}(s) assembled from the character decomposition
EvalResult delta_aq_value(const FormPtr& f, cplx s, long long a, long long q);

// completed additive twist Lambda_f(s, a/q) via the character expansion (entire)
EvalResult additive_twist_lambda(const FormPtr& f, cplx s, long long a, long long q);

// Delta_f(s) = Gamma_C(s+(k-1)/2) (L'' - (L')^2/L), away from zeros of L
EvalResult delta_value(const FormPtr& f, cplx s);

// H_{f,alpha}(s) = Delta_f(s,alpha) - eps (i sgn alpha)^k (N alpha^2)^{s-1/2}
//                  Delta_dual(s, -1/(N alpha)); series regime Re(s) >= 1.25
EvalResult H_value(const FormPtr& f, long long anum, long long aden, cplx s);

// G_{f,p}(s) = Delta_{f,1,p}(s) - Delta_{f,-Nbar,p}(s); p = N+1 rejected
EvalResult G_value(const FormPtr& f, long long p, cplx s);

// order-th derivative of Lambda_f via trapezoidal Cauchy integral, radius 0.05
EvalResult lambda_derivative(const FormPtr& f, cplx s, int order);

struct RationalWeight {
    std::string num, den;  // exact decimal strings
    double approx;
};
// exact weights with sum_j c_j q_j^{-m} = delta_{m,m0}, 0 <= m < M
std::vector<RationalWeight> vandermonde_weights(const std::vector<long long>& q_list,
                                                long long m0);
// exact verification of the delta property (rational arithmetic)
bool vandermonde_delta_check(const std::vector<long long>& q_list);

struct DistinctnessReport {
    double value = 0.0;       // |Lambda_f(it, 1/p) - Lambda_f(it, -Nbar/p)|
    long long witness_r = 0;  // first prime r = 1 mod p with lambda(r) != 0
    cplx phase_a, phase_b;    // e(r/p) vs e(-r Nbar/p), distinct by construction
};
DistinctnessReport twist_distinctness(const FormPtr& f, long long p, double t);

}  // namespace lz
