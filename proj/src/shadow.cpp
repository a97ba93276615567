#include "shadowmt/shadow.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "shadowmt/error.hpp"

namespace shadowmt {

ClosedSet closed_support(const DiscreteMeasure& m) {
    std::vector<double> pts;
    for (const Atom& a : m.atoms())
        if (a.m > kEps) pts.push_back(a.x);
    return ClosedSet::from_points(pts);
}

DiscreteMeasure dilation(const ClosedSet& t, double x) {
    if (t.empty()) throw Error(ErrorKind::EmptySet, "dilation onto the empty set");
    const double lo = t.inf(), hi = t.sup();
    if (x < lo - slack(lo) || x > hi + slack(hi))
        throw Error(ErrorKind::OutsideHull, std::to_string(x) + " outside [" + std::to_string(lo) +
                                                ", " + std::to_string(hi) + "]");
    if (x <= lo) return DiscreteMeasure::dirac(lo);
    if (x >= hi) return DiscreteMeasure::dirac(hi);
    if (t.contains(x)) return DiscreteMeasure::dirac(x);
    const double left = t.left_of(x), right = t.right_of(x);
    const double span = right - left;
    return DiscreteMeasure({{left, (right - x) / span}, {right, (x - left) / span}});
}

Coupling dilation_coupling(const DiscreteMeasure& m, const ClosedSet& t) {
    std::vector<PlanEntry> e;
    for (const Atom& a : m.atoms()) {
        const DiscreteMeasure k = dilation(t, a.x);
        for (const Atom& y : k.atoms()) e.push_back({a.x, y.x, a.m * y.m});
    }
    return Coupling(std::move(e));
}

ShadowResidual::ShadowResidual(const DiscreteMeasure& target)
    : rest_(target.atoms().begin(), target.atoms().end()) {}

double ShadowResidual::mass() const {
    double s = 0.0;
    for (const Atom& a : rest_) s += a.m;
    return s;
}

DiscreteMeasure ShadowResidual::take_atom(double x, double a) {
    if (!(a > 0.0)) return {};
    const std::size_t n = rest_.size();
    std::vector<double> cum(n + 1, 0.0), qint(n + 1, 0.0);
    double reach = std::abs(x);
    for (std::size_t k = 0; k < n; ++k) {
        cum[k + 1] = cum[k] + rest_[k].m;
        qint[k + 1] = qint[k] + rest_[k].m * rest_[k].x;
        reach = std::max(reach, std::abs(rest_[k].x));
    }
    const double total = cum[n];
    if (n == 0 || a > total + slack(total))
        throw Error(ErrorKind::NotDominated, "atom of mass " + std::to_string(a) +
                                                 " exceeds residual mass " + std::to_string(total));
    a = std::min(a, total);

    // integral of the residual quantile function over [0, t]
    auto integral = [&](double t) {
        t = std::clamp(t, 0.0, total);
        std::size_t k = static_cast<std::size_t>(std::upper_bound(cum.begin(), cum.end(), t) - cum.begin());
        k = std::clamp<std::size_t>(k, 1, n) - 1;
        return qint[k] + (t - cum[k]) * rest_[k].x;
    };
    auto window_moment = [&](double s) { return integral(s + a) - integral(s); };

    // window_moment is piecewise linear and nondecreasing in s, with kinks
    // where either window edge crosses a cumulative mass level
    const double s_max = std::max(total - a, 0.0);
    std::vector<double> cand{0.0, s_max};
    for (std::size_t k = 1; k < n; ++k) {
        if (cum[k] > 0.0 && cum[k] < s_max) cand.push_back(cum[k]);
        if (cum[k] - a > 0.0 && cum[k] - a < s_max) cand.push_back(cum[k] - a);
    }
    std::sort(cand.begin(), cand.end());
    cand.erase(std::unique(cand.begin(), cand.end()), cand.end());

    const double goal = a * x;
    const double tol = kEps * a * (1.0 + reach);
    std::vector<double> fv(cand.size());
    for (std::size_t k = 0; k < cand.size(); ++k) fv[k] = window_moment(cand[k]);

    double s = 0.0;
    const auto hit = std::find_if(fv.begin(), fv.end(), [&](double f) { return f >= goal; });
    if (hit == fv.end()) {
        if (goal > fv.back() + tol)
            throw Error(ErrorKind::NotDominated, "no window of mass " + std::to_string(a) +
                                                     " has barycenter " + std::to_string(x));
        s = cand.back();
    } else if (hit == fv.begin()) {
        if (fv.front() > goal + tol)
            throw Error(ErrorKind::NotDominated, "no window of mass " + std::to_string(a) +
                                                     " has barycenter " + std::to_string(x));
        s = cand.front();
    } else {
        const std::size_t k = static_cast<std::size_t>(hit - fv.begin());
        const double f0 = fv[k - 1], f1 = fv[k];
        s = cand[k - 1] + (goal - f0) * (cand[k] - cand[k - 1]) / (f1 - f0);
    }

    const double negligible = 1e-14 * (1.0 + total);
    std::vector<Atom> window;
    for (std::size_t k = 0; k < n; ++k) {
        const double overlap = std::min(cum[k + 1], s + a) - std::max(cum[k], s);
        if (overlap <= negligible) continue;
        const double take = std::min(overlap, rest_[k].m);
        window.push_back({rest_[k].x, take});
        rest_[k].m -= take;
    }
    compact();
    return DiscreteMeasure(std::move(window));
}

DiscreteMeasure ShadowResidual::take(const DiscreteMeasure& source) {
    std::vector<Atom> out;
    for (const Atom& a : source.atoms()) {
        const DiscreteMeasure w = take_atom(a.x, a.m);
        out.insert(out.end(), w.atoms().begin(), w.atoms().end());
    }
    return DiscreteMeasure(std::move(out));
}

void ShadowResidual::compact() {
    double dropped = 0.0, kept = 0.0;
    for (const Atom& a : rest_) (a.m < kEps ? dropped : kept) += a.m;
    std::erase_if(rest_, [](const Atom& a) { return a.m < kEps; });
    if (dropped > 0.0 && kept > 0.0) {
        const double factor = (kept + dropped) / kept;
        for (Atom& a : rest_) a.m *= factor;
    }
}

DiscreteMeasure shadow(const DiscreteMeasure& target, const DiscreteMeasure& source) {
    const double ms = source.mass(), mt = target.mass();
    if (ms > mt + slack(mt))
        throw Error(ErrorKind::NotDominated, "source heavier than target");
    ShadowResidual r(target);
    return r.take(source);
}

DiscreteMeasure residual(const DiscreteMeasure& target, const DiscreteMeasure& source) {
    const double ms = source.mass(), mt = target.mass();
    if (ms > mt + slack(mt))
        throw Error(ErrorKind::NotDominated, "source heavier than target");
    ShadowResidual r(target);
    r.take(source);
    return r.measure();
}

DiscreteMeasure shadow_atom(const DiscreteMeasure& target, double x, double a) {
    ShadowResidual r(target);
    return r.take_atom(x, a);
}

} // namespace shadowmt
