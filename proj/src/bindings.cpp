#include <pybind11/complex.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "lzero/exponents.hpp"
#include "lzero/zeros.hpp"

namespace py = pybind11;
using namespace lz;

namespace {

FormPtr form_of(const std::string& name) { return registry_form(name); }

py::dict eval_dict(const EvalResult& r) {
    py::dict d;
    d["value"] = r.value;
    d["err"] = r.err;
    d["method"] = r.method;
    return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "numerical toolkit for simple zeros of degree-two L-functions";

    m.def("load_registry", [](const std::string& path) {
        set_registry(load_registry(path));
        std::vector<std::string> names;
        for (const auto& f : registry_forms()) names.push_back(f->name);
        return names;
    });
    m.def("set_cache_dir", [](const std::string& dir) { registry_config().cache_dir = dir; });
    m.def("set_coefficient_caps", [](long long delta_cap, long long curve_cap) {
        registry_config().delta_limit = delta_cap;
        registry_config().curve_limit = curve_cap;
    });

    m.def("lambda_coeff", [](const std::string& f, long long n) {
        return lambda_value(form_of(f), n);
    });
    m.def("L", [](const std::string& f, cplx s) {
        auto fp = form_of(f);
        return eval_dict(s.real() > 2.75 ? direct_L(fp, s, default_limit(fp))
                                         : evaluator(fp).L_value(s));
    });
    m.def("Lambda", [](const std::string& f, cplx s) {
        return eval_dict(evaluator(form_of(f)).lambda(s));
    });
    m.def("root_number", [](const std::string& f) { return evaluator(form_of(f)).eps(); });
    m.def("fe_residual", [](const std::string& f, cplx s) {
        return evaluator(form_of(f)).fe_residual(s);
    });
    m.def("Delta", [](const std::string& f, cplx s, long long a, long long q) {
        return eval_dict(q == 1 ? delta_value(form_of(f), s)
                                : delta_aq_value(form_of(f), s, a, q));
    },
          py::arg("form"), py::arg("s"), py::arg("a") = 1, py::arg("q") = 1);
    m.def("additive_twist_Lambda", [](const std::string& f, cplx s, long long a, long long q) {
        return eval_dict(additive_twist_lambda(form_of(f), s, a, q));
    });
    m.def("H", [](const std::string& f, long long anum, long long aden, cplx s) {
        return eval_dict(H_value(form_of(f), anum, aden, s));
    });
    m.def("G", [](const std::string& f, long long p, cplx s) {
        return eval_dict(G_value(form_of(f), p, s));
    });
    m.def("hardy_Z", [](const std::string& f, double t) { return hardy_Z(form_of(f), t); });
    m.def("argument_count", [](const std::string& f, cplx s1, cplx s2) {
        return argument_count(form_of(f), s1, s2);
    });
    m.def("scan_zeros",
          [](const std::string& f, double T, double step, int workers) {
              auto rep = scan_zeros_cached(form_of(f), T, step, workers);
              py::list zs;
              for (const auto& z : rep.zeros) {
                  py::dict d;
                  d["beta"] = z.beta;
                  d["gamma"] = z.gamma;
                  d["multiplicity"] = z.multiplicity;
                  d["lambda_prime"] = z.lambda_prime;
                  zs.append(d);
              }
              py::dict out;
              out["zeros"] = zs;
              out["argument_total"] = rep.argument_total;
              out["complete"] = rep.complete;
              return out;
          },
          py::arg("form"), py::arg("T"), py::arg("step") = 0.05, py::arg("workers") = 1);
    m.def("density_experiment",
          [](const std::string& f, long long X, double T, double beta, int workers) {
              auto rep = density_experiment(form_of(f), X, T, beta, workers);
              return density_csv(rep);
          },
          py::arg("form"), py::arg("X"), py::arg("T"), py::arg("beta"), py::arg("workers") = 1);
    m.def("explicit_formula_residual",
          [](const std::string& f, long long a, long long q, cplx z, double T) {
              return explicit_formula_residual(form_of(f), a, q, z, T);
          });
    m.def("vandermonde_weights", [](const std::vector<long long>& qs, long long m0) {
        py::list out;
        for (const auto& w : vandermonde_weights(qs, m0)) {
            py::dict d;
            d["num"] = w.num;
            d["den"] = w.den;
            d["approx"] = w.approx;
            out.append(d);
        }
        return out;
    });
    m.def("twist_distinctness", [](const std::string& f, long long p, double t) {
        auto r = twist_distinctness(form_of(f), p, t);
        py::dict d;
        d["value"] = r.value;
        d["witness_r"] = r.witness_r;
        d["phase_a"] = r.phase_a;
        d["phase_b"] = r.phase_b;
        return d;
    });

    m.def("kappa_threshold", [] { return std::pair(kappa_threshold().num, kappa_threshold().den); });
    m.def("density_c", [](double alpha) { return density_c(alpha); });
    m.def("headline_exponent", [](double theta) { return headline_exponent(theta); });
    m.def("density_bound_exponents", [](double beta) { return density_bound_exponents(beta); });
}
