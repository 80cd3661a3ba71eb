#pragma once

#include <optional>
#include <string>
#include <vector>

#include "lzero/lfunc.hpp"

namespace lz {

struct ZeroRecord {
    std::string form_name;
    double beta = 0.0, gamma = 0.0;  // rho = beta + i gamma
    int multiplicity = 1;            // certified on a disk of radius cert_radius
    cplx lambda_prime{0.0};          // Lambda'(rho), meaningful when multiplicity 1
    double cert_radius = 0.01;
    std::string method;  // "hardy bisection" | "newton" | "cache"
};

struct ScanReport {
    FormPtr form;
    double T = 0.0;
    std::vector<ZeroRecord> zeros;  // sorted by gamma
    long long argument_total = 0;   // rectangle [-0.1,1.1] x [-T,T]
    bool complete = false;          // zeros (with multiplicity) match the total
};

struct DensityRow {
    long long p;
    int psi_index;
    long long count;
};

struct DensityReport {
    FormPtr form;
    double T = 0.0, beta = 0.0;
    long long X = 0;
    std::vector<DensityRow> rows;
    long long aggregate = 0;
    double ref_exp_small = 0.0, ref_exp_large = 0.0;  // 4(1-beta), 6(1-beta)/(3beta-1)
    bool complete = false;
};

// Hardy rotation Z(t) = omega Lambda(1/2+it), real for self-dual forms
double hardy_Z(const FormPtr& f, double t);

// winding number of Lambda along the rectangle [s1.re, s2.re] x [s1.im, s2.im]
long long argument_count(const FormPtr& f, cplx s1, cplx s2);

ScanReport scan_zeros(const FormPtr& f, double T, double step = 0.05, int workers = 1);

// Res_{s=rho} Delta_f by a circle integral; asserted close to -Lambda'(rho)
cplx residue_at_zero(const FormPtr& f, const ZeroRecord& z);

long long count_Ng(const ScanReport& r, double beta);   // Re >= beta, with multiplicity
long long count_Nfs(const ScanReport& r);               // certified simple
double theta_observed(const FormPtr& f, const ScanReport& r);  // floored at 1/2

DensityReport density_experiment(const FormPtr& f, long long X, double T, double beta,
                                 int workers = 1);

// |S - F + reflected - A + B| for the truncated explicit-formula relation
double explicit_formula_residual(const FormPtr& f, long long a, long long q, cplx z,
                                 double T_trunc);

// int_0^{|alpha|/4} S_f(alpha + iy) y^{s+(k-1)/2} dy/y with the truncated zero sum
EvalResult truncated_mellin_I(const FormPtr& f, long long anum, long long aden, cplx s,
                              double T_trunc);

// zero-list cache: one record per line under the configured cache directory
std::string zero_cache_path(const FormPtr& f, double T);
void save_zero_cache(const ScanReport& r);
std::optional<ScanReport> load_zero_cache(const FormPtr& f, double T);
// scan with cache reuse (exact (form, T) match)
ScanReport scan_zeros_cached(const FormPtr& f, double T, double step = 0.05, int workers = 1);

std::string density_csv(const DensityReport& r);
void write_Z_svg(const FormPtr& f, double T, const ScanReport& scan, const std::string& path);

}  // namespace lz
