#include <pybind11/pybind11.h>
#include <pybind11/functional.h>
#include <pybind11/stl.h>

#include "shadowmt/barrier_sim.hpp"
#include "shadowmt/coupling.hpp"
#include "shadowmt/error.hpp"
#include "shadowmt/io.hpp"
#include "shadowmt/mot.hpp"
#include "shadowmt/shadow.hpp"

namespace py = pybind11;
using namespace shadowmt;

namespace {

using AtomList = std::vector<std::pair<double, double>>;

DiscreteMeasure from_list(const AtomList& atoms) {
    std::vector<Atom> a;
    for (const auto& [x, m] : atoms) a.push_back({x, m});
    return DiscreteMeasure(std::move(a));
}

AtomList to_list(const DiscreteMeasure& m) {
    AtomList out;
    for (const Atom& a : m.atoms()) out.emplace_back(a.x, a.m);
    return out;
}

std::vector<std::tuple<double, double, double>> entries(const Coupling& c) {
    std::vector<std::tuple<double, double, double>> out;
    for (const PlanEntry& e : c.entries()) out.emplace_back(e.x, e.y, e.mass);
    return out;
}

SlabRule rule_from(const std::string& name) {
    if (name == "dilation") return SlabRule::Dilation;
    if (name == "atomwise") return SlabRule::Atomwise;
    throw Error(ErrorKind::Parse, "unknown slab rule '" + name + "'");
}

} // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Shadow martingale couplings between finitely-atomic measures";

    static py::exception<Error> error(m, "ShadowError");
    py::register_exception_translator([](std::exception_ptr p) {
        try {
            if (p) std::rethrow_exception(p);
        } catch (const Error& e) {
            py::set_error(error, e.what());
        }
    });

    py::class_<DiscreteMeasure>(m, "Measure")
        .def(py::init(&from_list), py::arg("atoms"))
        .def_property_readonly("atoms", &to_list)
        .def("mass", &DiscreteMeasure::mass)
        .def("barycenter", &DiscreteMeasure::barycenter)
        .def("potential", &DiscreteMeasure::potential)
        .def("to_json", &measure_to_json)
        .def_static("from_json", &measure_from_json)
        .def("__len__", &DiscreteMeasure::size)
        .def("__repr__", [](const DiscreteMeasure& d) { return "Measure(" + py::repr(py::cast(to_list(d))).cast<std::string>() + ")"; });

    py::class_<Coupling>(m, "Coupling")
        .def(py::init([](const std::vector<std::tuple<double, double, double>>& e) {
            std::vector<PlanEntry> v;
            for (const auto& [x, y, w] : e) v.push_back({x, y, w});
            return Coupling(std::move(v));
        }))
        .def_property_readonly("entries", &entries)
        .def("mass", &Coupling::mass)
        .def("x_marginal", &Coupling::x_marginal)
        .def("y_marginal", &Coupling::y_marginal)
        .def("kernel", &Coupling::kernel);

    py::class_<LiftedCoupling>(m, "LiftedCoupling")
        .def_property_readonly("slices", [](const LiftedCoupling& lc) {
            std::vector<std::tuple<double, double, Coupling>> out;
            for (const Slice& s : lc.slices()) out.emplace_back(s.u0, s.u1, s.plan);
            return out;
        })
        .def("boundaries", &LiftedCoupling::boundaries)
        .def("y_prefix", &LiftedCoupling::y_prefix);

    py::class_<Lift>(m, "Lift")
        .def_property_readonly("pieces", [](const Lift& l) {
            std::vector<std::tuple<double, double, DiscreteMeasure>> out;
            for (const LiftPiece& p : l.pieces()) out.emplace_back(p.u0, p.u1, p.conditional);
            return out;
        })
        .def("marginal", &Lift::marginal)
        .def("prefix", &Lift::prefix);

    py::class_<CheckReport>(m, "CheckReport")
        .def_readonly("passed", &CheckReport::pass)
        .def_readonly("worst", &CheckReport::worst)
        .def_readonly("details", &CheckReport::details);

    m.def("leq_convex", &leq_convex);
    m.def("leq_convex_positive", &leq_convex_positive);
    m.def("leq_stochastic", &leq_stochastic);
    m.def("leq_diatomic", &leq_diatomic);
    m.def("w1", &w1);
    m.def("shadow", &shadow, py::arg("target"), py::arg("source"));
    m.def("lift", &lift_preset, py::arg("name"), py::arg("mu"));
    m.def(
        "shadow_coupling",
        [](const Lift& l, const DiscreteMeasure& nu, int k, const std::string& rule) {
            return shadow_coupling(l, nu, k, rule_from(rule));
        },
        py::arg("lift"), py::arg("nu"), py::arg("k") = 1, py::arg("rule") = "dilation");
    m.def("project", &project);
    m.def("check_martingale", py::overload_cast<const LiftedCoupling&, double>(&check_martingale),
          py::arg("lc"), py::arg("tol") = 1e-9);
    m.def("check_monotone", &check_monotone, py::arg("lc"), py::arg("tol") = 1e-6);
    m.def("check_shadow_property", &check_shadow_property, py::arg("lc"), py::arg("lift"), py::arg("nu"),
          py::arg("tol") = 1e-9);
    m.def("check_lipschitz", &check_lipschitz, py::arg("coupling"), py::arg("tol") = 1e-6);
    m.def(
        "mot_lp",
        [](const DiscreteMeasure& mu, const DiscreteMeasure& nu, const std::function<double(double, double)>& c) {
            MotResult r = mot_lp(mu, nu, CostSpec::plain(c));
            return std::make_pair(r.value, r.coupling);
        },
        py::arg("mu"), py::arg("nu"), py::arg("cost"));
    m.def(
        "certify_optimal",
        [](const LiftedCoupling& lc, const Lift& l, const DiscreteMeasure& nu, double tol) {
            return certify_optimal(lc, l, nu, tol).pass;
        },
        py::arg("lc"), py::arg("lift"), py::arg("nu"), py::arg("tol") = 1e-7);
    m.def(
        "simulate",
        [](const Lift& l, const DiscreteMeasure& nu, std::uint64_t paths, double step, std::uint64_t seed) {
            SimConfig cfg;
            cfg.paths = paths;
            cfg.step = step;
            cfg.seed = seed;
            SimResult r = simulate(l, exact_barrier(l, nu), cfg);
            return py::make_tuple(project(r.coupling), r.mean_stop, r.stderr_stop);
        },
        py::arg("lift"), py::arg("nu"), py::arg("paths") = 100000, py::arg("step") = 1e-3, py::arg("seed") = 0);
}
