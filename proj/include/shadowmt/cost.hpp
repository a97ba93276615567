#pragma once

#include <functional>
#include <utility>
#include <vector>

namespace shadowmt {

/// Continuous piecewise-linear function on [0, 1] given by knots (u, value),
/// constant beyond the first and last knot.
class PiecewiseLinear {
public:
    PiecewiseLinear() = default;
    explicit PiecewiseLinear(std::vector<std::pair<double, double>> knots);

    double operator()(double u) const;
    /// Exact integral over [a, b].
    double integral(double a, double b) const;
    bool nonincreasing() const;

private:
    std::vector<std::pair<double, double>> knots_;
};

/// Cost c(u, x, y) = u_factor(u) * xy_factor(x, y) in one of three flavours:
///   cpq(p, q)       1{u <= p} |y - q|
///   separable       phi(u) psi(y), phi nonincreasing, psi convex
///   plain           c(x, y), no u dependence
class CostSpec {
public:
    enum class Kind { Cpq, Separable, Plain };

    static CostSpec cpq(double p, double q);
    static CostSpec separable(PiecewiseLinear u_factor, std::function<double(double)> y_factor);
    static CostSpec plain(std::function<double(double, double)> c);

    Kind kind() const { return kind_; }
    double p() const { return p_; }
    double q() const { return q_; }

    /// Average of the u-factor over [u0, u1] (its value at u0 if u0 == u1).
    double u_weight(double u0, double u1) const;
    double xy(double x, double y) const { return xy_(x, y); }
    /// Average of c(., x, y) over [u0, u1].
    double slice_average(double u0, double u1, double x, double y) const {
        return u_weight(u0, u1) * xy(x, y);
    }

    /// Discrete convexity of the y-factor on the sorted points (separable only;
    /// other kinds return true).
    bool y_convex_on(const std::vector<double>& ys) const;

private:
    Kind kind_ = Kind::Plain;
    double p_ = 1.0;
    double q_ = 0.0;
    PiecewiseLinear u_factor_;
    std::function<double(double)> y_factor_;
    std::function<double(double, double)> xy_;
};

} // namespace shadowmt
