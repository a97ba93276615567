#include "shadowmt/measure.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "shadowmt/error.hpp"

namespace shadowmt {

const char* to_string(ErrorKind kind) {
    switch (kind) {
    case ErrorKind::ZeroMass: return "ZeroMass";
    case ErrorKind::OutOfRange: return "OutOfRange";
    case ErrorKind::MassMismatch: return "MassMismatch";
    case ErrorKind::BarycenterMismatch: return "BarycenterMismatch";
    case ErrorKind::NegativeMass: return "NegativeMass";
    case ErrorKind::NotDominated: return "NotDominated";
    case ErrorKind::EmptySet: return "EmptySet";
    case ErrorKind::OutsideHull: return "OutsideHull";
    case ErrorKind::MassError: return "MassError";
    case ErrorKind::NotInConvexOrder: return "NotInConvexOrder";
    case ErrorKind::BoundaryMismatch: return "BoundaryMismatch";
    case ErrorKind::OrderViolation: return "OrderViolation";
    case ErrorKind::InvalidCost: return "InvalidCost";
    case ErrorKind::DimensionMismatch: return "DimensionMismatch";
    case ErrorKind::MaxStepsExceeded: return "MaxStepsExceeded";
    case ErrorKind::Parse: return "Parse";
    }
    return "Unknown";
}

DiscreteMeasure::DiscreteMeasure(std::vector<Atom> atoms) {
    for (const Atom& a : atoms) {
        if (!std::isfinite(a.x) || !std::isfinite(a.m))
            throw Error(ErrorKind::OutOfRange, "non-finite atom");
        if (a.m < -kEps)
            throw Error(ErrorKind::NegativeMass, "atom at " + std::to_string(a.x) + " has mass " +
                                                     std::to_string(a.m));
    }
    std::erase_if(atoms, [](const Atom& a) { return a.m <= 0.0; });
    std::sort(atoms.begin(), atoms.end(), [](const Atom& l, const Atom& r) { return l.x < r.x; });

    atoms_.reserve(atoms.size());
    for (std::size_t i = 0; i < atoms.size();) {
        // cluster of atoms chained within kEps of the first one
        double mass = 0.0, moment = 0.0;
        const double start = atoms[i].x;
        std::size_t j = i;
        while (j < atoms.size() && atoms[j].x - start < kEps) {
            mass += atoms[j].m;
            moment += (atoms[j].x - start) * atoms[j].m;
            ++j;
        }
        // offsets from the first position keep equal positions exact
        const double x = start + moment / mass;
        atoms_.push_back({x, mass});
        i = j;
    }
}

DiscreteMeasure DiscreteMeasure::dirac(double x, double mass) { return DiscreteMeasure({{x, mass}}); }

double DiscreteMeasure::mass() const {
    double s = 0.0;
    for (const Atom& a : atoms_) s += a.m;
    return s;
}

double DiscreteMeasure::first_moment() const {
    double s = 0.0;
    for (const Atom& a : atoms_) s += a.x * a.m;
    return s;
}

double DiscreteMeasure::second_moment() const {
    double s = 0.0;
    for (const Atom& a : atoms_) s += a.x * a.x * a.m;
    return s;
}

double DiscreteMeasure::barycenter() const {
    const double m = mass();
    if (!(m > 0.0)) throw Error(ErrorKind::ZeroMass, "barycenter of an empty measure");
    return first_moment() / m;
}

double DiscreteMeasure::min_position() const {
    if (atoms_.empty()) throw Error(ErrorKind::ZeroMass, "min_position of an empty measure");
    return atoms_.front().x;
}

double DiscreteMeasure::max_position() const {
    if (atoms_.empty()) throw Error(ErrorKind::ZeroMass, "max_position of an empty measure");
    return atoms_.back().x;
}

double DiscreteMeasure::potential(double t) const {
    double s = 0.0;
    for (const Atom& a : atoms_) s += std::abs(a.x - t) * a.m;
    return s;
}

double DiscreteMeasure::call(double t) const {
    double s = 0.0;
    for (const Atom& a : atoms_)
        if (a.x > t) s += (a.x - t) * a.m;
    return s;
}

double DiscreteMeasure::put(double t) const {
    double s = 0.0;
    for (const Atom& a : atoms_)
        if (a.x < t) s += (t - a.x) * a.m;
    return s;
}

double DiscreteMeasure::cdf(double t) const {
    double s = 0.0;
    for (const Atom& a : atoms_) {
        if (a.x > t) break;
        s += a.m;
    }
    return s;
}

double DiscreteMeasure::quantile(double s) const {
    const double total = mass();
    if (!(s > 0.0) || s > total + slack(total))
        throw Error(ErrorKind::OutOfRange, "quantile level " + std::to_string(s) + " outside (0, " +
                                               std::to_string(total) + "]");
    double cum = 0.0;
    for (const Atom& a : atoms_) {
        cum += a.m;
        if (cum >= s) return a.x;
    }
    return atoms_.back().x;
}

DiscreteMeasure DiscreteMeasure::quantile_window(double s, double a) const {
    const double total = mass();
    if (s < -slack(total) || a < 0.0 || s + a > total + slack(total))
        throw Error(ErrorKind::OutOfRange, "window ]" + std::to_string(s) + ", " +
                                               std::to_string(s + a) + "[ outside [0, " +
                                               std::to_string(total) + "]");
    const double lo = std::max(s, 0.0);
    const double hi = std::min(s + a, total);
    const double negligible = 1e-14 * (1.0 + total);
    std::vector<Atom> out;
    double cum = 0.0;
    for (const Atom& at : atoms_) {
        const double c0 = cum;
        cum += at.m;
        const double overlap = std::min(cum, hi) - std::max(c0, lo);
        if (overlap > negligible) out.push_back({at.x, overlap});
        if (cum >= hi) break;
    }
    return DiscreteMeasure(std::move(out));
}

double DiscreteMeasure::quantile_integral(double s) const {
    double cum = 0.0, integral = 0.0;
    for (const Atom& at : atoms_) {
        const double take = std::min(at.m, s - cum);
        if (take <= 0.0) break;
        integral += take * at.x;
        cum += at.m;
    }
    return integral;
}

DiscreteMeasure scale(const DiscreteMeasure& m, double c) {
    if (c < 0.0) throw Error(ErrorKind::NegativeMass, "negative scale factor");
    std::vector<Atom> out(m.atoms().begin(), m.atoms().end());
    for (Atom& a : out) a.m *= c;
    return DiscreteMeasure(std::move(out));
}

DiscreteMeasure add(const DiscreteMeasure& a, const DiscreteMeasure& b) {
    std::vector<Atom> out(a.atoms().begin(), a.atoms().end());
    out.insert(out.end(), b.atoms().begin(), b.atoms().end());
    return DiscreteMeasure(std::move(out));
}

DiscreteMeasure subtract(const DiscreteMeasure& a, const DiscreteMeasure& b) {
    std::vector<Atom> out;
    std::size_t i = 0, j = 0;
    auto push = [&](double x, double m) {
        if (m < -kEps)
            throw Error(ErrorKind::NegativeMass, "difference has mass " + std::to_string(m) +
                                                     " at " + std::to_string(x));
        if (std::abs(m) >= kEps) out.push_back({x, m});
    };
    while (i < a.size() || j < b.size()) {
        if (j == b.size() || (i < a.size() && a[i].x < b[j].x - kEps)) {
            push(a[i].x, a[i].m);
            ++i;
        } else if (i == a.size() || b[j].x < a[i].x - kEps) {
            push(b[j].x, -b[j].m);
            ++j;
        } else {
            push(a[i].x, a[i].m - b[j].m);
            ++i;
            ++j;
        }
    }
    return DiscreteMeasure(std::move(out));
}

std::vector<double> breakpoints(const DiscreteMeasure& a, const DiscreteMeasure& b) {
    std::vector<double> t;
    t.reserve(a.size() + b.size());
    for (const Atom& at : a.atoms()) t.push_back(at.x);
    for (const Atom& at : b.atoms()) t.push_back(at.x);
    std::sort(t.begin(), t.end());
    t.erase(std::unique(t.begin(), t.end()), t.end());
    return t;
}

double cdf_distance(const DiscreteMeasure& a, const DiscreteMeasure& b) {
    const std::vector<double> t = breakpoints(a, b);
    double fa = 0.0, fb = 0.0, dist = 0.0;
    std::size_t i = 0, j = 0;
    for (std::size_t k = 0; k + 1 < t.size(); ++k) {
        while (i < a.size() && a[i].x <= t[k]) fa += a[i++].m;
        while (j < b.size() && b[j].x <= t[k]) fb += b[j++].m;
        dist += std::abs(fa - fb) * (t[k + 1] - t[k]);
    }
    return dist;
}

double w1(const DiscreteMeasure& a, const DiscreteMeasure& b) {
    const double ma = a.mass(), mb = b.mass();
    if (std::abs(ma - mb) > 1e3 * slack(std::max(ma, mb)))
        throw Error(ErrorKind::MassMismatch, "w1 between masses " + std::to_string(ma) + " and " +
                                                 std::to_string(mb));
    return cdf_distance(a, b);
}

namespace {

double abs_moment(const DiscreteMeasure& m) {
    double s = 0.0;
    for (const Atom& a : m.atoms()) s += std::abs(a.x) * a.m;
    return s;
}

} // namespace

bool leq_convex(const DiscreteMeasure& a, const DiscreteMeasure& b) {
    const double ma = a.mass(), mb = b.mass();
    if (std::abs(ma - mb) > slack(std::max(ma, mb))) return false;
    const double scale_moment = std::max(abs_moment(a), abs_moment(b));
    if (std::abs(a.first_moment() - b.first_moment()) > slack(scale_moment)) return false;
    for (double t : breakpoints(a, b)) {
        const double pb = b.potential(t);
        if (a.potential(t) > pb + slack(pb)) return false;
    }
    return true;
}

bool leq_convex_positive(const DiscreteMeasure& a, const DiscreteMeasure& b) {
    const double mb = b.mass();
    if (a.mass() > mb + slack(mb)) return false;
    for (double t : breakpoints(a, b)) {
        const double cb = b.call(t), pb = b.put(t);
        if (a.call(t) > cb + slack(cb)) return false;
        if (a.put(t) > pb + slack(pb)) return false;
    }
    return true;
}

bool leq_stochastic(const DiscreteMeasure& a, const DiscreteMeasure& b) {
    const double ma = a.mass(), mb = b.mass();
    if (std::abs(ma - mb) > slack(std::max(ma, mb)))
        throw Error(ErrorKind::MassMismatch, "stochastic order needs equal masses");
    if (a.empty() || b.empty()) return true;
    std::vector<double> levels;
    double ca = 0.0, cb = 0.0;
    for (const Atom& at : a.atoms()) levels.push_back(ca += at.m);
    for (const Atom& at : b.atoms()) levels.push_back(cb += at.m);
    levels.push_back(0.0);
    std::sort(levels.begin(), levels.end());
    const double top = std::min(ma, mb);
    double prev = 0.0;
    for (double level : levels) {
        const double hi = std::min(level, top);
        if (hi - prev <= 1e-12 * (1.0 + top)) continue;
        // both quantile functions are constant on ]prev, hi]
        const double s = 0.5 * (prev + hi);
        const double gb = b.quantile(s);
        if (a.quantile(s) > gb + slack(gb)) return false;
        prev = hi;
    }
    return true;
}

std::vector<CentralPiece> central_pieces(const DiscreteMeasure& m) {
    std::vector<CentralPiece> pieces;
    if (m.empty()) return pieces;
    const double total = m.mass();
    const double c = m.barycenter();
    const auto atoms = m.atoms();
    const std::ptrdiff_t n = static_cast<std::ptrdiff_t>(atoms.size());

    std::vector<double> rest(atoms.size());
    for (std::size_t k = 0; k < atoms.size(); ++k) rest[k] = atoms[k].m;

    double u = 0.0;
    std::ptrdiff_t i = -1, j = n;
    for (std::ptrdiff_t k = 0; k < n; ++k) {
        if (std::abs(atoms[k].x - c) <= slack(c)) {
            pieces.push_back({0.0, atoms[k].m, atoms[k].x, atoms[k].x, 1.0, 0.0});
            u = atoms[k].m;
            i = k - 1;
            j = k + 1;
            break;
        }
        if (atoms[k].x < c) i = k;
    }
    if (pieces.empty()) j = i + 1;

    while (i >= 0 && j < n) {
        const double lo = atoms[i].x, hi = atoms[j].x;
        const double w_low = (hi - c) / (hi - lo);
        const double w_high = (c - lo) / (hi - lo);
        const double t_low = rest[i] / w_low;
        const double t_high = rest[j] / w_high;
        const double dt = std::min(t_low, t_high);
        pieces.push_back({u, u + dt, lo, hi, w_low, w_high});
        u += dt;
        const double tie = 1e-12 * (1.0 + dt);
        const bool low_done = t_low <= dt + tie;
        const bool high_done = t_high <= dt + tie;
        rest[i] -= w_low * dt;
        rest[j] -= w_high * dt;
        if (low_done) --i;
        if (high_done) ++j;
    }
    if (!pieces.empty()) pieces.back().u1 = total;
    return pieces;
}

DiscreteMeasure central_shadow(const std::vector<CentralPiece>& pieces, double u) {
    std::vector<Atom> out;
    for (const CentralPiece& p : pieces) {
        const double len = std::min(p.u1, u) - p.u0;
        if (len <= 0.0) break;
        if (p.w_low > 0.0) out.push_back({p.low, p.w_low * len});
        if (p.w_high > 0.0) out.push_back({p.high, p.w_high * len});
    }
    return DiscreteMeasure(std::move(out));
}

bool leq_diatomic(const DiscreteMeasure& a, const DiscreteMeasure& b) {
    if (std::abs(a.mass() - 1.0) > slack(1.0) || std::abs(b.mass() - 1.0) > slack(1.0))
        throw Error(ErrorKind::MassMismatch, "diatomic order needs probability measures");
    const double ca = a.barycenter();
    if (std::abs(ca - b.barycenter()) > slack(ca))
        throw Error(ErrorKind::BarycenterMismatch, "diatomic order needs equal barycenters");
    const auto pa = central_pieces(a);
    const auto pb = central_pieces(b);
    std::vector<double> grid;
    for (const auto& p : pa) grid.push_back(p.u1);
    for (const auto& p : pb) grid.push_back(p.u1);
    std::sort(grid.begin(), grid.end());
    for (double u : grid)
        if (!leq_convex(central_shadow(pa, u), central_shadow(pb, u))) return false;
    return true;
}

} // namespace shadowmt
