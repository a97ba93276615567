#include "shadowmt/coupling.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>

#include "shadowmt/error.hpp"
#include "shadowmt/shadow.hpp"

namespace shadowmt {

namespace {

void require_convex_order(const DiscreteMeasure& mu, const DiscreteMeasure& nu) {
    if (!leq_convex(mu, nu)) throw Error(ErrorKind::NotInConvexOrder, "mu is not below nu in convex order");
}

std::string fmt(double v) {
    std::ostringstream os;
    os.precision(10);
    os << v;
    return os.str();
}

// Rows of a canonical coupling: consecutive entries sharing the same x.
template <class F>
void for_each_row(const Coupling& c, F&& f) {
    const auto e = c.entries();
    std::size_t i = 0;
    while (i < e.size()) {
        std::size_t j = i;
        while (j < e.size() && e[j].x == e[i].x) ++j;
        f(e.subspan(i, j - i));
        i = j;
    }
}

LiftedCoupling atomwise(const Lift& l, const DiscreteMeasure& nu) {
    ShadowResidual rest(nu);
    std::vector<Slice> slices;
    for (const LiftPiece& p : l.pieces()) {
        const double len = p.u1 - p.u0;
        std::vector<PlanEntry> entries;
        for (const Atom& a : p.conditional.atoms()) {
            const DiscreteMeasure window = rest.take_atom(a.x, a.m * len);
            for (const Atom& y : window.atoms()) entries.push_back({a.x, y.x, y.m});
        }
        slices.push_back({p.u0, p.u1, Coupling(std::move(entries))});
    }
    return LiftedCoupling(std::move(slices));
}

// exhausted, when given, receives for each atom of nu the u at which it runs out
LiftedCoupling dilation(const Lift& l, const DiscreteMeasure& nu, std::vector<double>* exhausted = nullptr) {
    std::vector<Atom> rest(nu.atoms().begin(), nu.atoms().end());
    std::vector<std::size_t> id(rest.size());
    for (std::size_t j = 0; j < id.size(); ++j) id[j] = j;
    if (exhausted) exhausted->assign(rest.size(), 1.0);
    const double residue = 1e-13 * (1.0 + nu.mass());
    std::vector<Slice> slices;

    struct Route {
        double x;
        std::size_t j;
        double rate;  // mass per unit u sent from x to rest[j]
    };

    for (const LiftPiece& p : l.pieces()) {
        double u = p.u0;
        while (p.u1 - u > 1e-15) {
            if (rest.empty()) {
                // rounding may use the target up a hair before u = 1
                if (1.0 - u > 1e-9) throw Error(ErrorKind::NotInConvexOrder, "target exhausted before u = 1");
                return LiftedCoupling(std::move(slices));
            }
            std::vector<Route> routes;
            std::vector<double> rate(rest.size(), 0.0);
            for (const Atom& a : p.conditional.atoms()) {
                const auto it = std::lower_bound(rest.begin(), rest.end(), a.x - kEps,
                                                 [](const Atom& r, double v) { return r.x < v; });
                const std::size_t idx = static_cast<std::size_t>(it - rest.begin());
                if (idx < rest.size() && std::abs(rest[idx].x - a.x) <= kEps) {
                    routes.push_back({a.x, idx, a.m});
                } else if (idx == 0 || idx == rest.size()) {
                    throw Error(ErrorKind::NotInConvexOrder,
                                "x = " + fmt(a.x) + " outside the hull of the residual target");
                } else {
                    const double lo = rest[idx - 1].x, hi = rest[idx].x;
                    routes.push_back({a.x, idx - 1, a.m * (hi - a.x) / (hi - lo)});
                    routes.push_back({a.x, idx, a.m * (a.x - lo) / (hi - lo)});
                }
            }
            for (const Route& r : routes) rate[r.j] += r.rate;

            const double remain = p.u1 - u;
            double dt = remain;
            for (std::size_t j = 0; j < rest.size(); ++j)
                if (rate[j] > 0.0) dt = std::min(dt, rest[j].m / rate[j]);
            // an exhaustion within rounding of the piece end happens at the end
            if (remain - dt <= 1e-12) dt = remain;
            const bool piece_done = dt >= remain;
            const double u_next = piece_done ? p.u1 : u + dt;

            std::vector<PlanEntry> entries;
            for (const Route& r : routes)
                if (r.rate > 0.0) entries.push_back({r.x, rest[r.j].x, r.rate * dt});
            slices.push_back({u, u_next, Coupling(std::move(entries))});

            for (std::size_t j = 0; j < rest.size(); ++j) {
                if (rate[j] <= 0.0) continue;
                const bool binding = rest[j].m / rate[j] <= dt * (1.0 + 1e-12);
                rest[j].m = binding ? 0.0 : rest[j].m - rate[j] * dt;
            }
            std::size_t keep = 0;
            for (std::size_t j = 0; j < rest.size(); ++j) {
                if (rest[j].m <= residue) {
                    if (exhausted) (*exhausted)[id[j]] = u_next;
                    continue;
                }
                rest[keep] = rest[j];
                id[keep++] = id[j];
            }
            rest.resize(keep);
            id.resize(keep);
            u = u_next;
        }
    }
    return LiftedCoupling(std::move(slices));
}

} // namespace

LiftedCoupling shadow_coupling(const Lift& l, const DiscreteMeasure& nu, int k, SlabRule rule) {
    require_convex_order(l.marginal(), nu);
    const Lift fine = refine(l, k);
    return rule == SlabRule::Atomwise ? atomwise(fine, nu) : dilation(fine, nu);
}

std::vector<DiscreteMeasure> shadow_curve(const Lift& l, const DiscreteMeasure& nu, std::span<const double> grid) {
    require_convex_order(l.marginal(), nu);
    std::vector<DiscreteMeasure> out;
    out.reserve(grid.size());
    for (double u : grid) out.push_back(shadow(nu, l.prefix(u)));
    return out;
}

Barrier barrier_family(const Lift& l, const DiscreteMeasure& nu, std::span<const double> grid) {
    require_convex_order(l.marginal(), nu);
    Barrier b;
    const double lo = nu.min_position(), hi = nu.max_position();
    for (double u : grid) {
        b.grid.push_back(u);
        b.sections.push_back(extend_to_I(closed_support(residual(nu, l.prefix(u))), lo, hi));
    }
    return b;
}

std::vector<double> exhaustion_times(const Lift& l, const DiscreteMeasure& nu) {
    require_convex_order(l.marginal(), nu);
    std::vector<double> out;
    dilation(l, nu, &out);
    return out;
}

Barrier exact_barrier(const Lift& l, const DiscreteMeasure& nu) {
    std::vector<double> times = exhaustion_times(l, nu);
    std::sort(times.begin(), times.end());
    std::vector<double> grid{0.0};
    for (double t : times) {
        if (t >= 1.0 - 1e-12) break;
        if (t - grid.back() <= 1e-12)
            grid.back() = std::max(grid.back(), t);
        else
            grid.push_back(t);
    }
    return barrier_family(l, nu, grid);
}

CheckReport check_martingale(const Coupling& c, double tol) {
    CheckReport r;
    for_each_row(c, [&](std::span<const PlanEntry> row) {
        double m = 0.0, ym = 0.0;
        for (const PlanEntry& e : row) {
            m += e.mass;
            ym += e.y * e.mass;
        }
        const double dev = std::abs(ym - row.front().x * m);
        r.worst = std::max(r.worst, dev);
        if (dev > tol) r.details.push_back("x = " + fmt(row.front().x) + ": deviation " + fmt(dev));
    });
    r.pass = r.worst <= tol;
    return r;
}

CheckReport check_martingale(const LiftedCoupling& lc, double tol) {
    CheckReport r;
    for (std::size_t s = 0; s < lc.slices().size(); ++s) {
        CheckReport one = check_martingale(lc.slices()[s].plan, tol);
        r.worst = std::max(r.worst, one.worst);
        for (auto& d : one.details) r.details.push_back("slice " + std::to_string(s) + ", " + d);
    }
    r.pass = r.worst <= tol;
    return r;
}

std::vector<MonotoneViolation> monotone_violations(const LiftedCoupling& lc, double tol) {
    struct Later {
        std::size_t t;
        double x;
    };
    std::vector<MonotoneViolation> out;
    std::multimap<double, Later> later;
    const auto slices = lc.slices();
    for (std::size_t s = slices.size(); s-- > 0;) {
        for_each_row(slices[s].plan, [&](std::span<const PlanEntry> row) {
            const double y_minus = row.front().y, y_plus = row.back().y;
            if (!(y_minus < y_plus - tol)) return;
            const auto it = later.upper_bound(y_minus + tol);
            if (it != later.end() && it->first < y_plus - tol)
                out.push_back({s, it->second.t, row.front().x, y_minus, y_plus, it->second.x, it->first});
        });
        for (const PlanEntry& e : slices[s].plan.entries()) later.insert({e.y, {s, e.x}});
    }
    std::reverse(out.begin(), out.end());
    return out;
}

CheckReport check_monotone(const LiftedCoupling& lc, double tol) {
    CheckReport r;
    for (const MonotoneViolation& v : monotone_violations(lc, tol)) {
        r.details.push_back("slice " + std::to_string(v.s) + " sends " + fmt(v.x) + " to " + fmt(v.y_minus) +
                            " and " + fmt(v.y_plus) + "; slice " + std::to_string(v.t) + " sends " +
                            fmt(v.x_prime) + " to " + fmt(v.y_prime));
        r.worst = std::max(r.worst, std::min(v.y_prime - v.y_minus, v.y_plus - v.y_prime));
    }
    r.pass = r.details.empty();
    return r;
}

CheckReport check_shadow_property(const LiftedCoupling& lc, const Lift& l, const DiscreteMeasure& nu, double tol) {
    CheckReport r;
    const double span = nu.empty() ? 0.0 : nu.max_position() - nu.min_position();
    for (double u : lc.boundaries()) {
        const DiscreteMeasure got = lc.y_prefix(u);
        const DiscreteMeasure want = shadow(nu, l.prefix(u));
        const double d = cdf_distance(got, want) + std::abs(got.mass() - want.mass()) * (1.0 + span);
        r.worst = std::max(r.worst, d);
        if (d > tol) r.details.push_back("u = " + fmt(u) + ": distance " + fmt(d));
    }
    r.pass = r.worst <= tol;
    return r;
}

DiscreteMeasure kernel(const Coupling& c, double x) { return c.kernel(x); }

CheckReport check_lipschitz(const Coupling& c, double tol) {
    CheckReport r;
    std::vector<std::pair<double, DiscreteMeasure>> rows;
    const DiscreteMeasure xs = c.x_marginal();
    for (const Atom& a : xs.atoms()) rows.emplace_back(a.x, c.kernel(a.x));
    for (std::size_t i = 0; i < rows.size(); ++i)
        for (std::size_t j = i + 1; j < rows.size(); ++j) {
            const double excess = w1(rows[i].second, rows[j].second) - std::abs(rows[i].first - rows[j].first);
            r.worst = std::max(r.worst, excess);
            if (excess > tol)
                r.details.push_back("x = " + fmt(rows[i].first) + ", x' = " + fmt(rows[j].first) + ": excess " +
                                    fmt(excess));
        }
    r.pass = r.worst <= tol;
    return r;
}

CheckReport check_two_graph(const LiftedCoupling& lc, double tol) {
    struct Branch {
        std::size_t s;
        double x, down, up;
    };
    CheckReport r;
    std::vector<Branch> seen;
    double up_max = -INFINITY;
    const auto slices = lc.slices();
    for (std::size_t s = 0; s < slices.size(); ++s) {
        for_each_row(slices[s].plan, [&](std::span<const PlanEntry> row) {
            const double x = row.front().x;
            Branch b{s, x, row.front().y, row.back().y};
            auto fail = [&](const std::string& what) {
                r.pass = false;
                r.details.push_back("slice " + std::to_string(s) + ", x = " + fmt(x) + ": " + what);
            };
            if (row.size() > 2) fail(std::to_string(row.size()) + " targets");
            if (b.down > x + tol || b.up < x - tol) fail("targets do not bracket x");
            if (b.up < up_max - tol) fail("upper graph decreases");
            for (const Branch& e : seen)
                if (b.down > e.down + tol && b.down < e.up - tol)
                    fail("lower graph enters ]" + fmt(e.down) + ", " + fmt(e.up) + "[ of slice " +
                         std::to_string(e.s));
            up_max = std::max(up_max, b.up);
            seen.push_back(b);
        });
    }
    return r;
}

DiscreteMeasure stochastic_shadow(const DiscreteMeasure& nu, double u) { return nu.quantile_window(0.0, u); }

Coupling quantile_coupling(const DiscreteMeasure& mu, const DiscreteMeasure& nu) {
    const double mm = mu.mass(), mn = nu.mass();
    if (std::abs(mm - mn) > slack(mn)) throw Error(ErrorKind::MassMismatch, "quantile coupling needs equal masses");
    const auto a = mu.atoms(), b = nu.atoms();
    std::vector<PlanEntry> out;
    std::size_t i = 0, j = 0;
    double ra = a.empty() ? 0.0 : a[0].m, rb = b.empty() ? 0.0 : b[0].m;
    while (i < a.size() && j < b.size()) {
        const double m = std::min(ra, rb);
        if (m > 0.0) out.push_back({a[i].x, b[j].x, m});
        ra -= m;
        rb -= m;
        if (ra <= kEps * 1e-3 && ++i < a.size()) ra = a[i].m;
        if (rb <= kEps * 1e-3 && ++j < b.size()) rb = b[j].m;
    }
    return Coupling(std::move(out));
}

Coupling product_coupling(const DiscreteMeasure& mu, const DiscreteMeasure& nu) {
    std::vector<PlanEntry> out;
    for (const Atom& a : mu.atoms())
        for (const Atom& b : nu.atoms()) out.push_back({a.x, b.x, a.m * b.m});
    return Coupling(std::move(out));
}

LiftedCoupling stochastic_shadow_coupling(const Lift& l, const DiscreteMeasure& nu) {
    std::vector<Slice> slices;
    for (const LiftPiece& p : l.pieces()) {
        const DiscreteMeasure inc = nu.quantile_window(p.u0, p.u1 - p.u0);
        const double len = p.u1 - p.u0;
        std::vector<PlanEntry> out;
        for (const Atom& a : p.conditional.atoms())
            for (const Atom& b : inc.atoms()) out.push_back({a.x, b.x, a.m * b.m * (len / inc.mass())});
        slices.push_back({p.u0, p.u1, Coupling(std::move(out))});
    }
    return LiftedCoupling(std::move(slices));
}

Coupling middle_slice_formula(double f, double g, double f_out, double g_out, double a) {
    if (!(f_out <= f && f <= g && g <= g_out))
        throw Error(ErrorKind::OrderViolation, "need f' <= f <= g <= g'");
    if (!(a >= 0.0 && a <= 1.0)) throw Error(ErrorKind::OutOfRange, "weight a must lie in [0, 1]");
    const double b = 1.0 - a;
    const double width = g_out - f_out;
    if (width <= 0.0) return Coupling({{f, f, 1.0}});
    return Coupling({{f, f_out, a * (g_out - f) / width},
                     {f, g_out, a * (f - f_out) / width},
                     {g, f_out, b * (g_out - g) / width},
                     {g, g_out, b * (g - f_out) / width}});
}

double cost(const LiftedCoupling& lc, const CostSpec& c) {
    double s = 0.0;
    for (const Slice& sl : lc.slices()) {
        const double w = c.u_weight(sl.u0, sl.u1);
        if (w == 0.0) continue;
        for (const PlanEntry& e : sl.plan.entries()) s += w * e.mass * c.xy(e.x, e.y);
    }
    return s;
}

double cost(const Coupling& pi, const CostSpec& c) {
    const double w = c.u_weight(0.0, 1.0);
    double s = 0.0;
    for (const PlanEntry& e : pi.entries()) s += e.mass * c.xy(e.x, e.y);
    return w * s;
}

} // namespace shadowmt
