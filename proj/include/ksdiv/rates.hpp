// rates.hpp: Time-dependent rate functions (closed-form registry + tabulated)
// and the quadrature used to accumulate them.

#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace ksdiv {

// Adaptive Simpson with absolute tolerance; the error estimate is the
// standard Richardson difference |S_halves - S| / 15.
namespace detail {

inline double simpson_segment(double a, double fa, double b, double fb, double fm) {
    return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}

template <class F>
double simpson_adaptive_rec(F& f, double a, double fa, double b, double fb, double m, double fm,
                            double whole, double tol, int depth) {
    const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    const double flm = f(lm), frm = f(rm);
    const double left = simpson_segment(a, fa, m, fm, flm);
    const double right = simpson_segment(m, fm, b, fb, frm);
    const double delta = left + right - whole;
    if (depth <= 0 || std::abs(delta) <= 15.0 * tol)
        return left + right + delta / 15.0;
    return simpson_adaptive_rec(f, a, fa, m, fm, lm, flm, left, 0.5 * tol, depth - 1) +
           simpson_adaptive_rec(f, m, fm, b, fb, rm, frm, right, 0.5 * tol, depth - 1);
}

}  // namespace detail

template <class F>
double simpson_adaptive(F f, double a, double b, double tol = 1e-10, int max_depth = 40) {
    if (a == b) return 0.0;
    const double m = 0.5 * (a + b);
    const double fa = f(a), fb = f(b), fm = f(m);
    const double whole = detail::simpson_segment(a, fa, b, fb, fm);
    return detail::simpson_adaptive_rec(f, a, fa, b, fb, m, fm, whole, tol, max_depth);
}

}  // namespace ksdiv

namespace ksdiv::generators {

// One rate γ(t) on [0, t_max]: either a closed-form registry entry carrying an
// exact antiderivative, or a table with linear interpolation (whose exact
// antiderivative is the cumulative trapezoid).
class RateFunction {
  public:
    enum class Kind { Constant, TanhScaled, Exponential, Tabulated, Custom };

    static RateFunction constant(double c) {
        RateFunction r;
        r.kind_ = Kind::Constant;
        r.a_ = c;
        return r;
    }

    // a * tanh(b * t)
    static RateFunction tanh_scaled(double a, double b) {
        RateFunction r;
        r.kind_ = Kind::TanhScaled;
        r.a_ = a;
        r.b_ = b;
        return r;
    }

    // a * exp(-b * t)
    static RateFunction exponential(double a, double b) {
        RateFunction r;
        r.kind_ = Kind::Exponential;
        r.a_ = a;
        r.b_ = b;
        return r;
    }

    // arbitrary evaluable without a closed-form antiderivative; accumulation
    // falls back to adaptive Simpson
    static RateFunction custom(std::function<double(double)> f) {
        if (!f) throw std::invalid_argument("rate: empty custom function");
        RateFunction r;
        r.kind_ = Kind::Custom;
        r.fn_ = std::move(f);
        return r;
    }

    static RateFunction tabulated(std::vector<double> t, std::vector<double> g) {
        if (t.size() != g.size() || t.size() < 2)
            throw std::invalid_argument("rate table: need matching t/gamma columns, length >= 2");
        for (std::size_t i = 0; i + 1 < t.size(); ++i)
            if (!(t[i] < t[i + 1]))
                throw std::invalid_argument("rate table: time column must be strictly increasing");
        for (double v : g)
            if (!std::isfinite(v)) throw std::invalid_argument("rate table: non-finite rate value");
        RateFunction r;
        r.kind_ = Kind::Tabulated;
        r.tt_ = std::move(t);
        r.gg_ = std::move(g);
        r.cum_.resize(r.tt_.size(), 0.0);
        for (std::size_t i = 1; i < r.tt_.size(); ++i)
            r.cum_[i] = r.cum_[i - 1] +
                        0.5 * (r.gg_[i] + r.gg_[i - 1]) * (r.tt_[i] - r.tt_[i - 1]);
        return r;
    }

    double operator()(double t) const {
        switch (kind_) {
            case Kind::Constant: return a_;
            case Kind::TanhScaled: return a_ * std::tanh(b_ * t);
            case Kind::Exponential: return a_ * std::exp(-b_ * t);
            case Kind::Tabulated: {
                const std::size_t i = segment(t);
                const double u = (t - tt_[i]) / (tt_[i + 1] - tt_[i]);
                return gg_[i] + u * (gg_[i + 1] - gg_[i]);
            }
            case Kind::Custom: return fn_(t);
        }
        return 0.0;
    }

    // ∫_0^t γ(τ) dτ, exact for every registry kind (tanh: (a/b) ln cosh(bt);
    // trapezoid is exact for a piecewise-linear table)
    double accumulated(double t) const {
        switch (kind_) {
            case Kind::Constant: return a_ * t;
            case Kind::TanhScaled:
                if (b_ == 0.0) return 0.0;
                return (a_ / b_) * std::log(std::cosh(b_ * t));
            case Kind::Exponential:
                if (b_ == 0.0) return a_ * t;
                return a_ * (1.0 - std::exp(-b_ * t)) / b_;
            case Kind::Tabulated: {
                const std::size_t i = segment(t);
                const double gmid = operator()(t);
                return cum_[i] + 0.5 * (gg_[i] + gmid) * (t - tt_[i]);
            }
            case Kind::Custom:
                throw std::logic_error("rate: custom functions have no exact antiderivative");
        }
        return 0.0;
    }

    bool has_exact_antiderivative() const { return kind_ != Kind::Custom; }

    Kind kind() const { return kind_; }

    // tabulated rates only: evaluation within one grid step of the right edge,
    // where quadrature and interpolation lose support
    bool near_right_edge(double t) const {
        if (kind_ != Kind::Tabulated) return false;
        const std::size_t n = tt_.size();
        return t > tt_[n - 1] - (tt_[n - 1] - tt_[n - 2]);
    }

  private:
    RateFunction() = default;

    std::size_t segment(double t) const {
        if (t < tt_.front() - 1e-12 || t > tt_.back() + 1e-12)
            throw std::invalid_argument("rate table: evaluation outside tabulated domain");
        const double tc = std::clamp(t, tt_.front(), tt_.back());
        const auto it = std::upper_bound(tt_.begin(), tt_.end(), tc);
        std::size_t i = static_cast<std::size_t>(it - tt_.begin());
        if (i > 0) --i;
        if (i + 1 >= tt_.size()) i = tt_.size() - 2;
        return i;
    }

    Kind kind_ = Kind::Constant;
    double a_ = 0.0, b_ = 0.0;
    std::vector<double> tt_, gg_, cum_;
    std::function<double(double)> fn_;
};

// the three rates of a Pauli-type generator
struct RateFunctions {
    std::array<RateFunction, 3> gamma{RateFunction::constant(0.0), RateFunction::constant(0.0),
                                      RateFunction::constant(0.0)};

    std::array<double, 3> at(double t) const {
        return {gamma[0](t), gamma[1](t), gamma[2](t)};
    }

    // accumulated rates; exact antiderivatives where the registry has them,
    // adaptive Simpson (abs tol 1e-10, depth 40) otherwise
    std::array<double, 3> accumulated(double t) const {
        std::array<double, 3> r{};
        for (int k = 0; k < 3; ++k) {
            if (gamma[k].has_exact_antiderivative()) {
                r[k] = gamma[k].accumulated(t);
            } else {
                const RateFunction& g = gamma[k];
                r[k] = simpson_adaptive([&g](double u) { return g(u); }, 0.0, t);
            }
        }
        return r;
    }
};

}  // namespace ksdiv::generators
