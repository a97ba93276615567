#pragma once

#include <cmath>
#include <vector>

#include <doctest.h>

#include "shadowmt/error.hpp"
#include "shadowmt/measure.hpp"
#include "shadowmt/plan.hpp"

using namespace shadowmt;

inline DiscreteMeasure M(std::vector<Atom> a) { return DiscreteMeasure(std::move(a)); }

inline bool same(const DiscreteMeasure& a, const DiscreteMeasure& b, double tol = 1e-12) {
    if (a.size() != b.size()) return false;
    for (std::size_t i = 0; i < a.size(); ++i)
        if (std::abs(a[i].x - b[i].x) > tol || std::abs(a[i].m - b[i].m) > tol) return false;
    return true;
}

inline bool same(const Coupling& a, const Coupling& b, double tol = 1e-12) {
    const auto ea = a.entries(), eb = b.entries();
    if (ea.size() != eb.size()) return false;
    for (std::size_t i = 0; i < ea.size(); ++i)
        if (std::abs(ea[i].x - eb[i].x) > tol || std::abs(ea[i].y - eb[i].y) > tol ||
            std::abs(ea[i].mass - eb[i].mass) > tol)
            return false;
    return true;
}

template <class F>
ErrorKind kind_of(F&& f) {
    try {
        f();
    } catch (const Error& e) {
        return e.kind();
    }
    FAIL("no error thrown");
    return ErrorKind::Parse;
}
