#include "shadowmt/barrier_sim.hpp"

#include <algorithm>
#include <cmath>
#include <thread>

#include "shadowmt/error.hpp"
#include "shadowmt/philox.hpp"

namespace shadowmt {

namespace {

struct PathRecord {
    double u;
    double x0;
    double y;
    std::uint64_t steps;
    bool done;
};

class PathRunner {
public:
    PathRunner(const Lift& l, const Barrier& b, const SimConfig& cfg)
        : lift_(l), barrier_(b), cfg_(cfg), sd_(std::sqrt(cfg.step)) {
        for (const LiftPiece& p : l.pieces()) ends_.push_back(p.u1);
    }

    PathRecord run(std::uint64_t index) const {
        PhiloxStream rng(cfg_.seed, index);
        const double u = rng.uniform();
        const std::size_t k = std::min<std::size_t>(
            static_cast<std::size_t>(std::upper_bound(ends_.begin(), ends_.end(), u) - ends_.begin()),
            ends_.size() - 1);
        const double x0 = draw(lift_.pieces()[k].conditional, rng.uniform());
        const ClosedSet& r = barrier_.section_at(u);
        PathRecord rec{u, x0, x0, 0, true};

        if (cfg_.rule == StopRule::Closed || !r.contains(x0)) {
            if (r.contains(x0)) return rec;
            walk(r, x0, rng, rec);
            return rec;
        }
        if (r.interior_contains(x0)) return rec;

        // open rule from a level: the first move decides which gap the path enters
        const double x1 = x0 + sd_ * rng.normal();
        rec.steps = 1;
        if (r.interior_contains(x1)) return rec;
        const double crossed = x1 > x0 ? r.level_above(x0) : r.level_below(x0);
        if (x1 > x0 ? crossed <= x1 : crossed >= x1) {
            rec.y = crossed;
            return rec;
        }
        if (r.contains(x1)) {
            rec.y = x1;
            return rec;
        }
        walk(r, x1, rng, rec);
        return rec;
    }

private:
    static double draw(const DiscreteMeasure& m, double v) {
        double cum = 0.0;
        const auto atoms = m.atoms();
        for (const Atom& a : atoms) {
            cum += a.m;
            if (v < cum) return a.x;
        }
        return atoms.back().x;
    }

    void walk(const ClosedSet& r, double x, PhiloxStream& rng, PathRecord& rec) const {
        const double lo = r.left_of(x), hi = r.right_of(x);
        while (rec.steps < cfg_.max_steps) {
            x += sd_ * rng.normal();
            ++rec.steps;
            if (x <= lo) {
                rec.y = lo;
                return;
            }
            if (x >= hi) {
                rec.y = hi;
                return;
            }
        }
        rec.y = x;
        rec.done = false;
    }

    const Lift& lift_;
    const Barrier& barrier_;
    const SimConfig& cfg_;
    double sd_;
    std::vector<double> ends_;
};

} // namespace

void SimConfig::validate() const {
    if (paths < 1) throw Error(ErrorKind::OutOfRange, "need at least one path");
    if (!(step > 0.0)) throw Error(ErrorKind::OutOfRange, "step must be positive");
    if (max_steps < 1) throw Error(ErrorKind::OutOfRange, "max_steps must be positive");
}

SimResult simulate(const Lift& l, const Barrier& b, const SimConfig& cfg) {
    cfg.validate();
    if (b.sections.empty()) throw Error(ErrorKind::EmptySet, "barrier without sections");
    for (const ClosedSet& s : b.sections)
        if (!s.in_class_I()) throw Error(ErrorKind::OutOfRange, "barrier section without rays on both sides");

    const PathRunner runner(l, b, cfg);
    const std::uint64_t n = cfg.paths;
    std::vector<PathRecord> records(n);
    const unsigned threads = std::max(1u, std::min<unsigned>(cfg.threads, static_cast<unsigned>(n)));
    if (threads == 1) {
        for (std::uint64_t i = 0; i < n; ++i) records[i] = runner.run(i);
    } else {
        std::vector<std::thread> pool;
        for (unsigned t = 0; t < threads; ++t)
            pool.emplace_back([&, t] {
                for (std::uint64_t i = t * n / threads; i < (t + 1) * n / threads; ++i) records[i] = runner.run(i);
            });
        for (std::thread& th : pool) th.join();
    }

    SimResult res;
    const auto pieces = l.pieces();
    std::vector<std::vector<PlanEntry>> per_piece(pieces.size());
    const double w = 1.0 / static_cast<double>(n);
    double sum_sq = 0.0, steps = 0.0;
    for (const PathRecord& r : records) {
        std::size_t k = 0;
        while (k + 1 < pieces.size() && r.u >= pieces[k].u1) ++k;
        per_piece[k].push_back({r.x0, r.y, w});
        if (!r.done) ++res.unfinished;
        res.mean_start += r.x0 * w;
        res.mean_stop += r.y * w;
        sum_sq += r.y * r.y * w;
        steps += static_cast<double>(r.steps) * w;
    }
    if (static_cast<double>(res.unfinished) > 1e-3 * static_cast<double>(n))
        throw Error(ErrorKind::MaxStepsExceeded,
                    std::to_string(res.unfinished) + " of " + std::to_string(n) + " paths did not stop");

    std::vector<Slice> slices;
    for (std::size_t k = 0; k < pieces.size(); ++k)
        slices.push_back({pieces[k].u0, pieces[k].u1, Coupling(std::move(per_piece[k]))});
    res.coupling = LiftedCoupling(std::move(slices));
    const double var = std::max(0.0, sum_sq - res.mean_stop * res.mean_stop);
    res.stderr_stop = n > 1 ? std::sqrt(var / static_cast<double>(n - 1)) : 0.0;
    res.mean_steps = steps;
    return res;
}

CompareReport compare(const LiftedCoupling& emp, const LiftedCoupling& ref, int n_slabs) {
    if (n_slabs < 1) throw Error(ErrorKind::OutOfRange, "need at least one slab");
    CompareReport rep;
    rep.projected = coupling_distance(project(emp), project(ref));
    std::vector<double> grid(static_cast<std::size_t>(n_slabs) + 1);
    for (int i = 0; i <= n_slabs; ++i) grid[static_cast<std::size_t>(i)] = static_cast<double>(i) / n_slabs;
    const LiftedCoupling a = rebin(emp, grid), b = rebin(ref, grid);
    for (std::size_t i = 0; i < a.slices().size(); ++i) {
        const double d = cdf_distance(a.slices()[i].plan.y_marginal(), b.slices()[i].plan.y_marginal());
        rep.bins.push_back(d);
        rep.worst_bin = std::max(rep.worst_bin, d);
    }
    return rep;
}

OpenClosedReport open_vs_closed(const Lift& l, const Barrier& b, SimConfig cfg) {
    OpenClosedReport rep;
    cfg.rule = StopRule::Open;
    rep.open = simulate(l, b, cfg);
    cfg.rule = StopRule::Closed;
    rep.closed = simulate(l, b, cfg);
    rep.distance = coupling_distance(project(rep.open.coupling), project(rep.closed.coupling));
    return rep;
}

} // namespace shadowmt
