#include "shadowmt/cost.hpp"

#include <algorithm>
#include <cmath>

#include "shadowmt/error.hpp"

namespace shadowmt {

PiecewiseLinear::PiecewiseLinear(std::vector<std::pair<double, double>> knots) : knots_(std::move(knots)) {
    if (knots_.empty()) throw Error(ErrorKind::InvalidCost, "piecewise-linear function without knots");
    std::sort(knots_.begin(), knots_.end());
    for (std::size_t k = 1; k < knots_.size(); ++k)
        if (knots_[k].first == knots_[k - 1].first)
            throw Error(ErrorKind::InvalidCost, "duplicate knot");
}

double PiecewiseLinear::operator()(double u) const {
    if (u <= knots_.front().first) return knots_.front().second;
    if (u >= knots_.back().first) return knots_.back().second;
    const auto it = std::upper_bound(knots_.begin(), knots_.end(), u,
                                     [](double v, const auto& k) { return v < k.first; });
    const auto& [u1, v1] = *it;
    const auto& [u0, v0] = *(it - 1);
    return v0 + (v1 - v0) * (u - u0) / (u1 - u0);
}

double PiecewiseLinear::integral(double a, double b) const {
    if (b <= a) return 0.0;
    // trapezoid rule is exact between consecutive breakpoints
    std::vector<double> pts{a, b};
    for (const auto& k : knots_)
        if (k.first > a && k.first < b) pts.push_back(k.first);
    std::sort(pts.begin(), pts.end());
    double s = 0.0;
    for (std::size_t k = 0; k + 1 < pts.size(); ++k)
        s += 0.5 * ((*this)(pts[k]) + (*this)(pts[k + 1])) * (pts[k + 1] - pts[k]);
    return s;
}

bool PiecewiseLinear::nonincreasing() const {
    for (std::size_t k = 1; k < knots_.size(); ++k)
        if (knots_[k].second > knots_[k - 1].second) return false;
    return true;
}

CostSpec CostSpec::cpq(double p, double q) {
    if (!(p >= 0.0 && p <= 1.0)) throw Error(ErrorKind::InvalidCost, "c_{p,q} needs p in [0, 1]");
    CostSpec c;
    c.kind_ = Kind::Cpq;
    c.p_ = p;
    c.q_ = q;
    c.xy_ = [q](double, double y) { return std::abs(y - q); };
    return c;
}

CostSpec CostSpec::separable(PiecewiseLinear u_factor, std::function<double(double)> y_factor) {
    if (!u_factor.nonincreasing())
        throw Error(ErrorKind::InvalidCost, "separable cost needs a nonincreasing u-factor");
    CostSpec c;
    c.kind_ = Kind::Separable;
    c.u_factor_ = std::move(u_factor);
    c.y_factor_ = std::move(y_factor);
    c.xy_ = [f = c.y_factor_](double, double y) { return f(y); };
    return c;
}

CostSpec CostSpec::plain(std::function<double(double, double)> cost) {
    CostSpec c;
    c.kind_ = Kind::Plain;
    c.xy_ = std::move(cost);
    return c;
}

double CostSpec::u_weight(double u0, double u1) const {
    switch (kind_) {
    case Kind::Plain: return 1.0;
    case Kind::Cpq:
        if (u1 <= u0) return u0 <= p_ ? 1.0 : 0.0;
        return std::clamp(p_ - u0, 0.0, u1 - u0) / (u1 - u0);
    case Kind::Separable:
        if (u1 <= u0) return u_factor_(u0);
        return u_factor_.integral(u0, u1) / (u1 - u0);
    }
    return 0.0;
}

bool CostSpec::y_convex_on(const std::vector<double>& ys) const {
    if (kind_ != Kind::Separable || ys.size() < 3) return true;
    for (std::size_t k = 1; k + 1 < ys.size(); ++k) {
        const double left = (y_factor_(ys[k]) - y_factor_(ys[k - 1])) / (ys[k] - ys[k - 1]);
        const double right = (y_factor_(ys[k + 1]) - y_factor_(ys[k])) / (ys[k + 1] - ys[k]);
        if (right < left - slack(std::abs(left))) return false;
    }
    return true;
}

} // namespace shadowmt
