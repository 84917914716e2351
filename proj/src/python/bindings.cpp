#include "warpite/errors.hpp"
#include "warpite/ite.hpp"
#include "warpite/manifold.hpp"
#include "warpite/radial.hpp"
#include "warpite/symbolic.hpp"
#include "warpite/weyl.hpp"

#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

namespace py = pybind11;
using namespace warpite;

namespace {

RationalPolynomial poly(const std::vector<std::string>& coeffs) {
    std::vector<Rational> c;
    for (const auto& s : coeffs) c.push_back(parse_rational(s));
    return RationalPolynomial(c);
}

WarpedManifold make_manifold(int dimension, const std::string& domain, const std::string& outer,
                             const std::vector<std::string>& warp, const std::vector<std::string>& index,
                             const std::string& inner) {
    RadialDomain dom;
    if (domain == "cap") dom = RadialDomain::cap(parse_exact_real(outer));
    else if (domain == "shell") dom = RadialDomain::shell(parse_exact_real(inner), parse_exact_real(outer));
    else fail(ErrorKind::InvalidInput, "domain must be \"cap\" or \"shell\"");
    return WarpedManifold(dimension, dom, poly(warp), poly(index));
}

py::dict ite_dict(const ITERecord& r) {
    py::dict d;
    d["lambda"] = r.lambda;
    d["kind"] = ite_kind_name(r.kind);
    d["modes"] = r.modes;
    d["multiplicity"] = r.multiplicity;
    d["residual"] = r.residual;
    d["at_pole"] = r.at_pole;
    d["ambiguous"] = r.ambiguous;
    return d;
}

}  // namespace

PYBIND11_MODULE(_core, mod) {
    mod.doc() = "Interior transmission eigenvalues on warped-product manifolds";

    static py::exception<Error> error(mod, "WarpiteError");
    py::register_exception_translator([](std::exception_ptr p) {
        try {
            if (p) std::rethrow_exception(p);
        } catch (const Error& e) {
            py::set_error(error, (std::string(error_kind_name(e.kind())) + ": " + e.what()).c_str());
        }
    });

    py::class_<WarpedManifold>(mod, "Manifold")
        .def(py::init(&make_manifold), py::arg("dimension"), py::arg("domain"), py::arg("outer"), py::arg("warp"),
             py::arg("index"), py::arg("inner") = "0")
        .def_property_readonly("dimension", &WarpedManifold::dimension)
        .def_property_readonly("components", &WarpedManifold::components)
        .def("describe", &WarpedManifold::describe)
        .def(
            "dtn",
            [](const WarpedManifold& m, double lambda, int l) -> py::object {
                const DtnModeSample s = dtn_mode(m, lambda, l);
                if (s.is_pole) return py::none();
                return py::cast(s.matrix);
            },
            py::arg("lam"), py::arg("l"), "Mode-l D-N matrix, or None at a Dirichlet pole.")
        .def(
            "dirichlet_spectrum",
            [](const WarpedManifold& m, int l, double lambda_max) {
                std::vector<std::tuple<double, int, long long>> out;
                for (const auto& r : dirichlet_spectrum_mode(m, l, lambda_max))
                    out.emplace_back(r.lambda0, r.j, r.mult_geometric);
                return out;
            },
            py::arg("l"), py::arg("lambda_max"), "(lambda, j, multiplicity) for mode l up to lambda_max.")
        .def(
            "counting",
            [](const WarpedManifold& m, double lambda, int l_max) { return dirichlet_counting(m, lambda, l_max); },
            py::arg("lam"), py::arg("l_max") = 400)
        .def("weyl_constant", [](const WarpedManifold& m) { return weyl_constant(m).value; });

    py::class_<ManifoldPair>(mod, "Pair")
        .def(py::init([](const WarpedManifold& m1, const WarpedManifold& m2, std::vector<double> zeta,
                         std::optional<std::string> kase) {
                 std::optional<AssumptionCase> req;
                 if (kase) req = parse_case(*kase);
                 return validate_pair(m1, m2, zeta, req);
             }),
             py::arg("m1"), py::arg("m2"), py::arg("zeta"), py::arg("case") = py::none())
        .def_property_readonly("case", [](const ManifoldPair& p) { return case_name(p.kase); })
        .def_property_readonly("gamma", [](const ManifoldPair& p) { return p.gamma; })
        .def_property_readonly("weight_order", &ManifoldPair::weight_order)
        .def(
            "find_ites",
            [](const ManifoldPair& p, double a, double b, int l_max, int threads) {
                SearchOptions opts;
                opts.threads = threads;
                py::list out;
                for (const auto& r : find_ites(p, a, b, l_max, opts)) out.append(ite_dict(r));
                return out;
            },
            py::arg("a"), py::arg("b"), py::arg("l_max") = 120, py::arg("threads") = 1)
        .def(
            "mu",
            [](const ManifoldPair& p, double lambda, int l) { return mu_mode(p, lambda, l).values; },
            py::arg("lam"), py::arg("l"));

    mod.def(
        "difference_symbol",
        [](const std::string& kase) {
            const DifferenceSymbol d = difference_principal_symbol(parse_case(kase));
            return py::make_tuple(d.term.coeff.str(), d.closed_form.str(), d.matches_closed_form);
        },
        py::arg("case"), "(leading coefficient, closed form, match flag) of the principal difference symbol.");
}
