#pragma once

#include <span>
#include <string>
#include <vector>

#include "shadowmt/measure.hpp"

namespace shadowmt {

struct LiftPiece {
    double u0;
    double u1;
    DiscreteMeasure conditional;  // mass 1
};

/// Element of Pi(lambda, mu) whose conditional law is constant on each of
/// finitely many u-intervals partitioning [0, 1]. Pieces are half-open
/// [u0, u1).
class Lift {
public:
    Lift() = default;
    /// Validates contiguity, cover of [0, 1] and unit conditional masses.
    explicit Lift(std::vector<LiftPiece> pieces);

    std::span<const LiftPiece> pieces() const& { return pieces_; }
    std::vector<LiftPiece> pieces() && { return std::move(pieces_); }
    std::size_t size() const { return pieces_.size(); }

    /// Integral of the conditionals, i.e. mu.
    DiscreteMeasure marginal() const;
    /// mu_[0,u]: integral of the conditionals over [0, u].
    DiscreteMeasure prefix(double u) const;
    /// Conditional in force at u.
    const DiscreteMeasure& conditional_at(double u) const;
    std::vector<double> boundaries() const;

private:
    std::vector<LiftPiece> pieces_;
};

/// Quantile (monotone) lift; its shadow coupling is the left-curtain coupling.
Lift lift_quantile(const DiscreteMeasure& m);
/// Antitone lift; its shadow coupling is the right-curtain coupling.
Lift lift_reverse_quantile(const DiscreteMeasure& m);
/// Product lift lambda x mu; its shadow coupling is the sunset coupling.
Lift lift_product(const DiscreteMeasure& m);
/// mu_[0,u] = S^mu(u delta_c), c the barycenter; the middle-curtain lift.
Lift lift_middle(const DiscreteMeasure& m);

/// Splits every piece into k equal sub-pieces.
Lift refine(const Lift& l, int k);
/// Splits pieces at the given u values (values on existing boundaries are ignored).
Lift split(const Lift& l, std::span<const double> cuts);

/// Marginal property: sum of length * conditional equals m.
bool validate(const Lift& l, const DiscreteMeasure& m);

/// Named presets: left-curtain, right-curtain, sunset, middle.
Lift lift_preset(const std::string& name, const DiscreteMeasure& m);

} // namespace shadowmt
