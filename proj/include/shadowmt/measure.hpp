#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace shadowmt {

struct Atom {
    double x;
    double m;

    friend bool operator==(const Atom&, const Atom&) = default;
};

/// Finitely-atomic positive measure on the real line.
///
/// Atoms are kept sorted by position with distinct positions: construction
/// sorts, merges atoms closer than kEps (mass-weighted position) and drops
/// atoms whose mass is zero. Negative masses below -kEps are rejected.
class DiscreteMeasure {
public:
    DiscreteMeasure() = default;
    explicit DiscreteMeasure(std::vector<Atom> atoms);

    static DiscreteMeasure dirac(double x, double mass = 1.0);

    std::span<const Atom> atoms() const& { return atoms_; }
    // by value on temporaries, so `for (auto& a : f().atoms())` stays valid
    std::vector<Atom> atoms() && { return std::move(atoms_); }
    std::size_t size() const { return atoms_.size(); }
    bool empty() const { return atoms_.empty(); }
    const Atom& operator[](std::size_t i) const { return atoms_[i]; }

    double mass() const;
    double first_moment() const;
    double second_moment() const;
    /// Throws ZeroMass when the measure is empty.
    double barycenter() const;
    double min_position() const;
    double max_position() const;

    /// t -> integral of |x - t|.
    double potential(double t) const;
    /// t -> integral of (x - t)^+.
    double call(double t) const;
    /// t -> integral of (t - x)^+.
    double put(double t) const;
    /// Mass of (-inf, t].
    double cdf(double t) const;

    /// Left-continuous generalized inverse of the cdf, s in (0, mass].
    double quantile(double s) const;
    /// Push-forward of Lebesgue measure on ]s, s+a[ under the quantile function.
    DiscreteMeasure quantile_window(double s, double a) const;
    /// Integral of the quantile function over [0, s], s in [0, mass].
    double quantile_integral(double s) const;

    friend bool operator==(const DiscreteMeasure&, const DiscreteMeasure&) = default;

private:
    std::vector<Atom> atoms_;
};

DiscreteMeasure scale(const DiscreteMeasure& m, double c);
DiscreteMeasure add(const DiscreteMeasure& a, const DiscreteMeasure& b);
/// a - b; throws NegativeMass if some atom ends below -kEps. Atoms with
/// |mass| < kEps are deleted.
DiscreteMeasure subtract(const DiscreteMeasure& a, const DiscreteMeasure& b);

/// Sorted union of the atom positions of both measures.
std::vector<double> breakpoints(const DiscreteMeasure& a, const DiscreteMeasure& b);

/// Integral of |F_a - F_b| without any mass requirement.
double cdf_distance(const DiscreteMeasure& a, const DiscreteMeasure& b);

/// Wasserstein-1 distance between measures of equal mass.
double w1(const DiscreteMeasure& a, const DiscreteMeasure& b);

bool leq_convex(const DiscreteMeasure& a, const DiscreteMeasure& b);
bool leq_convex_positive(const DiscreteMeasure& a, const DiscreteMeasure& b);
bool leq_stochastic(const DiscreteMeasure& a, const DiscreteMeasure& b);
bool leq_diatomic(const DiscreteMeasure& a, const DiscreteMeasure& b);

/// One linear stretch of the centred shadow curve u -> S^m(u * delta_c), c the
/// barycenter: on [u0, u1] the curve grows at rate w_low at `low` and
/// w_high at `high` (w_low + w_high = 1, low <= c <= high).
struct CentralPiece {
    double u0;
    double u1;
    double low;
    double high;
    double w_low;
    double w_high;
};

/// Exact piecewise description of u -> S^m(u * delta_c) for u in [0, mass].
std::vector<CentralPiece> central_pieces(const DiscreteMeasure& m);

/// S^m(u * delta_c) assembled from `pieces`.
DiscreteMeasure central_shadow(const std::vector<CentralPiece>& pieces, double u);

} // namespace shadowmt
