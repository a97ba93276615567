#include "shadowmt/plan.hpp"

#include <algorithm>
#include <cmath>

#include "shadowmt/error.hpp"

namespace shadowmt {

Coupling::Coupling(std::vector<PlanEntry> entries) {
    for (const PlanEntry& e : entries)
        if (e.mass < -kEps) throw Error(ErrorKind::NegativeMass, "coupling entry with negative mass");
    std::erase_if(entries, [](const PlanEntry& e) { return e.mass <= 0.0; });
    std::sort(entries.begin(), entries.end(), [](const PlanEntry& a, const PlanEntry& b) {
        return a.x < b.x || (a.x == b.x && a.y < b.y);
    });
    // Group rows by x first, then merge y within each row.
    for (std::size_t i = 0; i < entries.size();) {
        std::size_t j = i;
        double xm = 0.0, mass = 0.0;
        const double x0 = entries[i].x;
        while (j < entries.size() && entries[j].x - x0 < kEps) {
            xm += (entries[j].x - x0) * entries[j].mass;
            mass += entries[j].mass;
            ++j;
        }
        const double x = x0 + xm / mass;
        std::vector<Atom> row;
        for (std::size_t k = i; k < j; ++k) row.push_back({entries[k].y, entries[k].mass});
        const DiscreteMeasure merged(std::move(row));
        for (const Atom& a : merged.atoms()) entries_.push_back({x, a.x, a.m});
        i = j;
    }
}

double Coupling::mass() const {
    double s = 0.0;
    for (const PlanEntry& e : entries_) s += e.mass;
    return s;
}

DiscreteMeasure Coupling::x_marginal() const {
    std::vector<Atom> a;
    a.reserve(entries_.size());
    for (const PlanEntry& e : entries_) a.push_back({e.x, e.mass});
    return DiscreteMeasure(std::move(a));
}

DiscreteMeasure Coupling::y_marginal() const {
    std::vector<Atom> a;
    a.reserve(entries_.size());
    for (const PlanEntry& e : entries_) a.push_back({e.y, e.mass});
    return DiscreteMeasure(std::move(a));
}

DiscreteMeasure Coupling::row(double x) const {
    std::vector<Atom> a;
    for (const PlanEntry& e : entries_)
        if (std::abs(e.x - x) < kEps) a.push_back({e.y, e.mass});
    return DiscreteMeasure(std::move(a));
}

DiscreteMeasure Coupling::kernel(double x) const {
    DiscreteMeasure r = row(x);
    const double m = r.mass();
    return m > 0.0 ? scale(r, 1.0 / m) : r;
}

Coupling add(const Coupling& a, const Coupling& b) {
    std::vector<PlanEntry> e(a.entries().begin(), a.entries().end());
    e.insert(e.end(), b.entries().begin(), b.entries().end());
    return Coupling(std::move(e));
}

Coupling scale(const Coupling& c, double factor) {
    std::vector<PlanEntry> e(c.entries().begin(), c.entries().end());
    for (PlanEntry& p : e) p.mass *= factor;
    return Coupling(std::move(e));
}

double coupling_distance(const Coupling& a, const Coupling& b) {
    const DiscreteMeasure xa = a.x_marginal(), xb = b.x_marginal();
    double d = w1(xa, xb);
    // kernels compared on the union of x-atoms, weighted by the larger row mass
    std::vector<double> xs = breakpoints(xa, xb);
    for (double x : xs) {
        const DiscreteMeasure ka = a.kernel(x), kb = b.kernel(x);
        const double weight = std::max(a.row(x).mass(), b.row(x).mass());
        if (ka.empty() || kb.empty()) {
            // unmatched row: its full spread from x is charged
            const DiscreteMeasure& k = ka.empty() ? kb : ka;
            for (const Atom& at : k.atoms()) d += weight * at.m * std::abs(at.x - x);
            continue;
        }
        d += weight * w1(ka, kb);
    }
    return d;
}

LiftedCoupling::LiftedCoupling(std::vector<Slice> slices) : slices_(std::move(slices)) {
    for (const Slice& s : slices_)
        if (!(s.u1 >= s.u0)) throw Error(ErrorKind::OutOfRange, "slice with u1 < u0");
}

std::vector<double> LiftedCoupling::boundaries() const {
    std::vector<double> b;
    if (slices_.empty()) return b;
    b.push_back(slices_.front().u0);
    for (const Slice& s : slices_) b.push_back(s.u1);
    return b;
}

Coupling LiftedCoupling::prefix(double u) const {
    std::vector<PlanEntry> e;
    for (const Slice& s : slices_) {
        if (s.u0 >= u) break;
        double frac = 1.0;
        if (s.u1 > u) frac = (s.u1 > s.u0) ? (u - s.u0) / (s.u1 - s.u0) : 0.0;
        for (PlanEntry p : s.plan.entries()) {
            p.mass *= frac;
            e.push_back(p);
        }
    }
    return Coupling(std::move(e));
}

DiscreteMeasure LiftedCoupling::y_prefix(double u) const { return prefix(u).y_marginal(); }

Coupling project(const LiftedCoupling& lc) {
    std::vector<PlanEntry> e;
    for (const Slice& s : lc.slices()) e.insert(e.end(), s.plan.entries().begin(), s.plan.entries().end());
    return Coupling(std::move(e));
}

LiftedCoupling rebin(const LiftedCoupling& lc, std::span<const double> grid) {
    std::vector<Slice> out;
    for (std::size_t k = 0; k + 1 < grid.size(); ++k) {
        const double a = grid[k], b = grid[k + 1];
        std::vector<PlanEntry> e;
        for (const Slice& s : lc.slices()) {
            const double len = s.u1 - s.u0;
            const double overlap = std::min(b, s.u1) - std::max(a, s.u0);
            if (len <= 0.0 || overlap <= 0.0) continue;
            for (PlanEntry p : s.plan.entries()) {
                p.mass *= overlap / len;
                e.push_back(p);
            }
        }
        out.push_back({a, b, Coupling(std::move(e))});
    }
    return LiftedCoupling(std::move(out));
}

} // namespace shadowmt
