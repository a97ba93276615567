#include "shadowmt/lift.hpp"

#include <algorithm>
#include <cmath>

#include "shadowmt/error.hpp"

namespace shadowmt {

namespace {

void require_probability(const DiscreteMeasure& m) {
    const double total = m.mass();
    if (std::abs(total - 1.0) > slack(1.0))
        throw Error(ErrorKind::MassError, "lift needs a probability measure, mass is " + std::to_string(total));
}

double abs_moment(const DiscreteMeasure& m) {
    double s = 0.0;
    for (const Atom& a : m.atoms()) s += std::abs(a.x) * a.m;
    return s;
}

} // namespace

Lift::Lift(std::vector<LiftPiece> pieces) : pieces_(std::move(pieces)) {
    if (pieces_.empty()) throw Error(ErrorKind::MassError, "lift without pieces");
    if (std::abs(pieces_.front().u0) > kEps || std::abs(pieces_.back().u1 - 1.0) > kEps)
        throw Error(ErrorKind::MassError, "lift pieces must cover [0, 1]");
    pieces_.front().u0 = 0.0;
    pieces_.back().u1 = 1.0;
    for (std::size_t k = 0; k < pieces_.size(); ++k) {
        LiftPiece& p = pieces_[k];
        if (k > 0) {
            if (std::abs(p.u0 - pieces_[k - 1].u1) > kEps)
                throw Error(ErrorKind::MassError, "lift pieces are not contiguous");
            p.u0 = pieces_[k - 1].u1;
        }
        if (!(p.u1 > p.u0)) throw Error(ErrorKind::MassError, "lift piece with u1 <= u0");
        if (std::abs(p.conditional.mass() - 1.0) > slack(1.0))
            throw Error(ErrorKind::MassError, "lift conditional without unit mass");
    }
}

DiscreteMeasure Lift::marginal() const { return prefix(1.0); }

DiscreteMeasure Lift::prefix(double u) const {
    std::vector<Atom> out;
    for (const LiftPiece& p : pieces_) {
        const double len = std::min(p.u1, u) - p.u0;
        if (len <= 0.0) break;
        for (const Atom& a : p.conditional.atoms()) out.push_back({a.x, a.m * len});
    }
    return DiscreteMeasure(std::move(out));
}

const DiscreteMeasure& Lift::conditional_at(double u) const {
    for (const LiftPiece& p : pieces_)
        if (u < p.u1) return p.conditional;
    return pieces_.back().conditional;
}

std::vector<double> Lift::boundaries() const {
    std::vector<double> b{0.0};
    for (const LiftPiece& p : pieces_) b.push_back(p.u1);
    return b;
}

Lift lift_quantile(const DiscreteMeasure& m) {
    require_probability(m);
    std::vector<LiftPiece> pieces;
    double u = 0.0;
    for (const Atom& a : m.atoms()) {
        pieces.push_back({u, u + a.m, DiscreteMeasure::dirac(a.x)});
        u += a.m;
    }
    return Lift(std::move(pieces));
}

Lift lift_reverse_quantile(const DiscreteMeasure& m) {
    require_probability(m);
    std::vector<LiftPiece> pieces;
    double u = 0.0;
    const auto atoms = m.atoms();
    for (auto it = atoms.rbegin(); it != atoms.rend(); ++it) {
        pieces.push_back({u, u + it->m, DiscreteMeasure::dirac(it->x)});
        u += it->m;
    }
    return Lift(std::move(pieces));
}

Lift lift_product(const DiscreteMeasure& m) {
    require_probability(m);
    return Lift({{0.0, 1.0, m}});
}

Lift lift_middle(const DiscreteMeasure& m) {
    require_probability(m);
    std::vector<LiftPiece> pieces;
    for (const CentralPiece& c : central_pieces(m)) {
        if (c.u1 - c.u0 <= 1e-15) continue;
        const double u0 = pieces.empty() ? 0.0 : pieces.back().u1;
        std::vector<Atom> cond;
        if (c.w_low > 0.0) cond.push_back({c.low, c.w_low});
        if (c.w_high > 0.0) cond.push_back({c.high, c.w_high});
        pieces.push_back({u0, c.u1, DiscreteMeasure(std::move(cond))});
    }
    return Lift(std::move(pieces));
}

Lift refine(const Lift& l, int k) {
    if (k < 1) throw Error(ErrorKind::OutOfRange, "refinement factor must be >= 1");
    std::vector<LiftPiece> out;
    for (const LiftPiece& p : l.pieces()) {
        const double len = (p.u1 - p.u0) / k;
        for (int i = 0; i < k; ++i) {
            const double a = p.u0 + i * len;
            const double b = (i + 1 == k) ? p.u1 : p.u0 + (i + 1) * len;
            out.push_back({a, b, p.conditional});
        }
    }
    return Lift(std::move(out));
}

Lift split(const Lift& l, std::span<const double> cuts) {
    std::vector<double> sorted(cuts.begin(), cuts.end());
    std::sort(sorted.begin(), sorted.end());
    std::vector<LiftPiece> out;
    for (const LiftPiece& p : l.pieces()) {
        double start = p.u0;
        for (double c : sorted) {
            if (c <= start + kEps || c >= p.u1 - kEps) continue;
            out.push_back({start, c, p.conditional});
            start = c;
        }
        out.push_back({start, p.u1, p.conditional});
    }
    return Lift(std::move(out));
}

bool validate(const Lift& l, const DiscreteMeasure& m) {
    const DiscreteMeasure marginal = l.marginal();
    if (std::abs(marginal.mass() - m.mass()) > slack(m.mass())) return false;
    return w1(marginal, m) <= slack(abs_moment(m));
}

Lift lift_preset(const std::string& name, const DiscreteMeasure& m) {
    if (name == "left-curtain") return lift_quantile(m);
    if (name == "right-curtain") return lift_reverse_quantile(m);
    if (name == "sunset") return lift_product(m);
    if (name == "middle") return lift_middle(m);
    throw Error(ErrorKind::Parse, "unknown lift preset '" + name + "'");
}

} // namespace shadowmt
