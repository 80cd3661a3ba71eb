#pragma once

#include <functional>

#include "lzero/util.hpp"

namespace lz {

// principal-branch log Gamma, valid away from the nonpositive integers
cplx log_gamma(cplx z);
cplx complex_gamma(cplx z);
cplx digamma(cplx z);
cplx trigamma(cplx z);

// Gamma_C(z) = 2 (2 pi)^{-z} Gamma(z)
cplx gamma_C(cplx z);
cplx log_gamma_C(cplx z);

// log K_z(2) (modified Bessel of the second kind at argument 2),
// computed on a shifted horizontal contour so that large |Im z| stays accurate
cplx log_bessel_k2(cplx z);

// Smoothing weight g(x) = kappa * int_x^inf exp(-y-1/y) dy/y, normalized so g(0)=1,
// with Mellin transform ghat(z) = int_0^inf g(x) x^{z-1} dx = 2 kappa K_z(2) / z.
// The closed form is re-verified against direct quadrature in the test suite.
class SmoothingKernel {
  public:
    static const SmoothingKernel& instance();

    double kappa() const { return kappa_; }
    double g(double x) const;
    cplx g_hat(cplx z) const;      // z != 0
    cplx log_g_hat(cplx z) const;  // avoids under/overflow for large |Im z|

    // direct Mellin quadrature of int_0^1 + int_1^inf g(x) x^{z-1} dx; slow,
    // used only to cross-check the closed form (needs Re z > 0)
    cplx g_hat_direct(cplx z) const;

  private:
    SmoothingKernel();
    double kappa_;
    std::vector<double> grid_, gval_, gder_;  // cubic Hermite data, log-spaced
};

// composite Gauss-Legendre on [a,b], fixed panels; err from panel doubling
QuadratureResult integrate_segment(const std::function<cplx(double)>& f, double a, double b,
                                   int panels = 32);

// integral over the vertical line Re(u)=eta of f(eta+it) i dt, truncated where
// decay_bound(|t|) drops below tol * running scale; decay_bound must dominate |f|
QuadratureResult line_integral(const std::function<cplx(cplx)>& f, double eta,
                               const std::function<double(double)>& decay_bound,
                               double tol = 1e-14);

}  // namespace lz
