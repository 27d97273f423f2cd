// dynamics.hpp: Time evolution: accumulated rates and closed-form Pauli
// trajectories, fixed-step integration of the transfer matrix, amplitude
// damping from G(t), propagators, divisibility scans, and trace-norm
// monotonicity checks.

#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <limits>
#include <stdexcept>
#include <vector>

#include "generators.hpp"
#include "linalg.hpp"
#include "maps.hpp"
#include "pauli.hpp"
#include "rates.hpp"
#include "witness.hpp"

namespace ksdiv::dynamics {

using generators::RateFunctions;
using maps::QubitMap;
using pauli::QubitOperator;

inline std::vector<double> uniform_grid(double t_max, int n_points) {
    if (!(t_max > 0.0) || n_points < 2)
        throw std::invalid_argument("uniform_grid: need t_max > 0 and at least 2 points");
    std::vector<double> g(n_points);
    for (int i = 0; i < n_points; ++i) g[i] = t_max * i / (n_points - 1);
    g.front() = 0.0;
    g.back() = t_max;
    return g;
}

// ------------------------------ rate trajectories ----------------------------

// accumulated rates and the induced eigenvalue/mixture trajectories of the
// Pauli model on a fixed time grid
struct TrajectoryGrid {
    std::vector<double> times;
    std::vector<std::array<double, 3>> gamma_acc;  // G_k(t) = int_0^t g_k
    std::vector<std::array<double, 3>> lambda;     // l_1 = exp(-G_2 - G_3), cyc.
    std::vector<std::array<double, 4>> p;          // mixture weights
    RateFunctions rates;

    double t_max() const { return times.back(); }
};

inline TrajectoryGrid accumulate_rates(const RateFunctions& r, const std::vector<double>& grid) {
    if (grid.size() < 2 || grid.front() != 0.0)
        throw std::invalid_argument("accumulate_rates: grid must start at 0 with >= 2 points");
    for (std::size_t i = 0; i + 1 < grid.size(); ++i)
        if (!(grid[i] < grid[i + 1]))
            throw std::invalid_argument("accumulate_rates: grid must be strictly increasing");

    TrajectoryGrid tr;
    tr.times = grid;
    tr.rates = r;
    tr.gamma_acc.reserve(grid.size());
    tr.lambda.reserve(grid.size());
    tr.p.reserve(grid.size());
    for (double t : grid) {
        const std::array<double, 3> G = r.accumulated(t);
        const std::array<double, 3> l{std::exp(-G[1] - G[2]), std::exp(-G[0] - G[2]),
                                      std::exp(-G[0] - G[1])};
        tr.gamma_acc.push_back(G);
        tr.lambda.push_back(l);
        tr.p.push_back(maps::eigenvalues_to_mixture(l));
    }
    return tr;
}

struct MapAtResult {
    maps::PauliMixtureMap mixture;
    bool cptp = false;
};

// mixture map at time t, weights linearly interpolated between grid nodes
inline MapAtResult map_at(const TrajectoryGrid& tr, double t) {
    if (t < tr.times.front() - 1e-12 || t > tr.times.back() + 1e-12)
        throw std::invalid_argument("map_at: time outside trajectory grid");
    const double tc = std::clamp(t, tr.times.front(), tr.times.back());
    auto it = std::upper_bound(tr.times.begin(), tr.times.end(), tc);
    std::size_t i = static_cast<std::size_t>(it - tr.times.begin());
    if (i > 0) --i;
    if (i + 1 >= tr.times.size()) i = tr.times.size() - 2;
    const double u = (tc - tr.times[i]) / (tr.times[i + 1] - tr.times[i]);

    MapAtResult r;
    double pmin = std::numeric_limits<double>::infinity();
    for (int a = 0; a < 4; ++a) {
        r.mixture.p[a] = (1.0 - u) * tr.p[i][a] + u * tr.p[i + 1][a];
        pmin = std::min(pmin, r.mixture.p[a]);
    }
    r.cptp = pmin >= -1e-10;
    return r;
}

// ------------------------- fixed-step integration ----------------------------

// classical 4th-order integration of dM/dt = L(t) M with M(0) = I;
// deterministic, no adaptivity, queryable at grid multiples of h
struct IntegratedEvolution {
    double h = 0.0;
    std::vector<QubitMap> states;  // states[i] at t = i h

    const QubitMap& at_step(std::size_t i) const {
        if (i >= states.size()) throw std::invalid_argument("at_step: beyond integrated range");
        return states[i];
    }

    const QubitMap& at_time(double t) const {
        const double idx = t / h;
        const std::size_t i = static_cast<std::size_t>(std::llround(idx));
        if (std::abs(idx - static_cast<double>(i)) > 1e-6)
            throw std::invalid_argument("at_time: t is not a grid multiple of h");
        return at_step(i);
    }
};

inline IntegratedEvolution integrate_master_equation(
    const std::function<QubitMap(double)>& L, double t_max, double h = 1e-3) {
    if (!(h > 0.0) || !(t_max >= 0.0))
        throw std::invalid_argument("integrate_master_equation: need h > 0, t_max >= 0");
    IntegratedEvolution ev;
    ev.h = h;
    const std::size_t n = static_cast<std::size_t>(std::llround(t_max / h));
    ev.states.reserve(n + 1);
    Mat4 m = Mat4::identity();
    ev.states.push_back(QubitMap(m));
    for (std::size_t i = 0; i < n; ++i) {
        const double t = i * h;
        const Mat4 l1 = L(t).t;
        const Mat4 l2 = L(t + 0.5 * h).t;
        const Mat4 l4 = L(t + h).t;
        const Mat4 k1 = l1 * m;
        const Mat4 k2 = l2 * (m + 0.5 * h * k1);
        const Mat4 k3 = l2 * (m + 0.5 * h * k2);
        const Mat4 k4 = l4 * (m + h * k3);
        m = m + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        ev.states.push_back(QubitMap(m));
    }
    return ev;
}

// ------------------------------ amplitude damping ----------------------------

// dynamics governed by a single complex G(t) with G(0) = 1;
// rate and frequency are recovered from the logarithmic derivative
struct AmplitudeDampingSpec {
    std::function<cplx(double)> G;
    double h_G = 1e-6;  // finite-difference step for dG/dt

    explicit AmplitudeDampingSpec(std::function<cplx(double)> g, double step = 1e-6)
        : G(std::move(g)), h_G(step) {
        if (!G) throw std::invalid_argument("damping: empty G");
        if (std::abs(G(0.0) - cplx(1.0, 0.0)) > 1e-12)
            throw std::invalid_argument("damping: G(0) must be 1");
    }
};

struct DampingMapResult {
    QubitMap map;
    bool cptp = false;  // |G(t)| <= 1 required
};

inline DampingMapResult damping_map(const AmplitudeDampingSpec& spec, double t) {
    const cplx g = spec.G(t);
    const double a2 = std::norm(g);
    Mat4 m;
    m(0, 0) = 1.0;
    m(1, 1) = g.real();
    m(1, 2) = g.imag();
    m(2, 1) = -g.imag();
    m(2, 2) = g.real();
    m(3, 0) = 1.0 - a2;
    m(3, 3) = a2;
    DampingMapResult r;
    r.map = QubitMap(m);
    r.cptp = std::sqrt(a2) <= 1.0 + 1e-12;
    return r;
}

struct DampingRates {
    double gamma = 0.0;  // -2 Re(G'/G)
    double omega = 0.0;  // -2 Im(G'/G)
};

// central differences with one Richardson step: D = (4 D(h/2) - D(h)) / 3
inline DampingRates damping_rates(const AmplitudeDampingSpec& spec, double t) {
    const cplx g = spec.G(t);
    if (std::abs(g) <= 1e-12)
        throw std::runtime_error("damping_rates: G(t) = 0, dynamics not invertible");
    const double h = spec.h_G;
    const auto central = [&](double step) {
        return (spec.G(t + step) - spec.G(t - step)) / cplx(2.0 * step, 0.0);
    };
    const cplx d = (4.0 * central(0.5 * h) - central(h)) / cplx(3.0, 0.0);
    const cplx lg = d / g;
    return DampingRates{-2.0 * lg.real(), -2.0 * lg.imag()};
}

// -------------------------------- propagators --------------------------------

inline QubitMap propagator(const QubitMap& lam_t, const QubitMap& lam_s) {
    return maps::compose(lam_t, maps::invert(lam_s));
}

// exact diagonal propagator of the Pauli model, q_k = l_k(t) / l_k(s)
inline maps::PauliDiagonalMap propagator_diag(const RateFunctions& r, double s, double t) {
    if (!(t >= s)) throw std::invalid_argument("propagator_diag: need t >= s");
    const std::array<double, 3> Gs = r.accumulated(s);
    const std::array<double, 3> Gt = r.accumulated(t);
    const std::array<double, 3> d{Gt[0] - Gs[0], Gt[1] - Gs[1], Gt[2] - Gs[2]};
    return maps::PauliDiagonalMap{
        {std::exp(-d[1] - d[2]), std::exp(-d[0] - d[2]), std::exp(-d[0] - d[1])}};
}

// ----------------------- positivity of TP maps (Bloch) -----------------------

struct BlochPositivity {
    bool positive = false;
    double max_radius = 0.0;  // largest image norm over the Bloch sphere
};

// a trace-preserving Hermiticity-preserving qubit map is positive iff it maps
// the Bloch ball into the ball; sampled on a Fibonacci sphere plus local
// golden-section polish around the best direction
inline BlochPositivity bloch_image_positive(const QubitMap& m, int samples = 10000) {
    if (!maps::is_trace_preserving(m, 1e-9))
        throw std::invalid_argument("bloch_image_positive: map is not trace-preserving");

    auto radius = [&m](double th, double ph) {
        const double x = std::sin(th) * std::cos(ph);
        const double y = std::sin(th) * std::sin(ph);
        const double z = std::cos(th);
        // rho = (I + b . s)/2 -> coords (1/2, b/2); image Bloch vector doubles the w part
        const std::array<double, 4> in{0.5, 0.5 * x, 0.5 * y, 0.5 * z};
        std::array<double, 4> out{};
        for (int i = 0; i < 4; ++i)
            for (int j = 0; j < 4; ++j) out[i] += m.t(i, j) * in[j];
        const double bx = 2.0 * out[1], by = 2.0 * out[2], bz = 2.0 * out[3];
        return std::sqrt(bx * bx + by * by + bz * bz);
    };

    const double golden_angle = 3.14159265358979323846 * (3.0 - std::sqrt(5.0));
    double best = -1.0, best_th = 0.0, best_ph = 0.0;
    for (int i = 0; i < samples; ++i) {
        const double z = 1.0 - 2.0 * (i + 0.5) / samples;
        const double th = std::acos(std::clamp(z, -1.0, 1.0));
        const double ph = golden_angle * i;
        const double r = radius(th, ph);
        if (r > best) {
            best = r;
            best_th = th;
            best_ph = ph;
        }
    }
    // local polish: alternate golden-section in each spherical coordinate
    double th = best_th, ph = best_ph, span = 0.1;
    for (int round = 0; round < 6; ++round) {
        auto neg_th = [&](double v) { return -radius(v, ph); };
        th = maps::detail::golden_section(neg_th, th - span, th + span, 1e-10, 60);
        auto neg_ph = [&](double v) { return -radius(th, v); };
        ph = maps::detail::golden_section(neg_ph, ph - span, ph + span, 1e-10, 60);
        best = std::max(best, radius(th, ph));
        span *= 0.3;
    }

    BlochPositivity r;
    r.max_radius = best;
    r.positive = best <= 1.0 + 1e-10;
    return r;
}

// ----------------------------- divisibility scan -----------------------------

enum class KSState { NotApplicable, Certified, Violation, Undecided };

struct PairVerdict {
    double s = 0.0, t = 0.0;
    bool positive = false;
    bool cp = false;
    KSState ks = KSState::NotApplicable;
    double positivity_margin = 0.0;  // 1 - max |q_k| (diagonal) or 1 - max radius
    double ks_margin = 0.0;          // closed-form slack or search margin
    double cp_margin = 0.0;          // smallest Choi eigenvalue
};

struct FirstViolations {
    double p_loss = std::numeric_limits<double>::infinity();
    double ks_loss = std::numeric_limits<double>::infinity();
    double cp_loss = std::numeric_limits<double>::infinity();
};

struct DivisibilityScanReport {
    std::vector<PairVerdict> pairs;
    FirstViolations generator_level;  // from rate margins, bisected to 1e-6 in t
    bool hierarchy_ok = true;         // cp => ks-not-violated => positive per pair
    bool short_interval_consistent = true;  // dense pairs: certification vs rate signs
};

namespace detail {

// first t in [grid] where margin(t) < -1e-12, refined by bisection to 1e-6;
// +inf when the margin never crosses
inline double first_crossing(const std::function<double(double)>& margin,
                             const std::vector<double>& grid) {
    const double tol = 1e-12;
    double prev_t = grid.front();
    if (margin(prev_t) < -tol) return prev_t;
    for (std::size_t i = 1; i < grid.size(); ++i) {
        const double t = grid[i];
        if (margin(t) < -tol) {
            double lo = prev_t, hi = t;
            while (hi - lo > 1e-6) {
                const double mid = 0.5 * (lo + hi);
                if (margin(mid) < -tol)
                    hi = mid;
                else
                    lo = mid;
            }
            return 0.5 * (lo + hi);
        }
        prev_t = t;
    }
    return std::numeric_limits<double>::infinity();
}

inline double min3(const std::array<double, 3>& a) { return std::min({a[0], a[1], a[2]}); }

inline double min_ks_margin(const std::array<double, 3>& g) {
    double m = std::numeric_limits<double>::infinity();
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
            if (i == j) continue;
            m = std::min(m, g[i] + 2.0 * g[j]);
        }
    return m;
}

}  // namespace detail

// scan of the Pauli model: propagator-level verdicts on all grid pairs s < t,
// generator-level first-violation times from the rate margins
inline DivisibilityScanReport divisibility_scan(const TrajectoryGrid& tr, std::uint64_t seed,
                                                std::uint64_t budget = 200) {
    DivisibilityScanReport rep;
    const std::vector<double>& g = tr.times;

    for (std::size_t a = 0; a < g.size(); ++a) {
        for (std::size_t b = a + 1; b < g.size(); ++b) {
            PairVerdict v;
            v.s = g[a];
            v.t = g[b];
            const maps::PauliDiagonalMap q = propagator_diag(tr.rates, v.s, v.t);
            const double qmax = std::max({std::abs(q.q[0]), std::abs(q.q[1]), std::abs(q.q[2])});
            v.positivity_margin = 1.0 - qmax;
            v.positive = qmax <= 1.0 + 1e-12;

            const std::array<double, 4> choi_p = maps::eigenvalues_to_mixture(q.q);
            v.cp_margin = std::min({choi_p[0], choi_p[1], choi_p[2], choi_p[3]});
            v.cp = v.cp_margin >= -1e-10;

            if (!v.positive) {
                v.ks = KSState::Violation;  // KS maps are positive
                v.ks_margin = v.positivity_margin;
            } else {
                const maps::KSClosedForm cf = maps::ks_closed_form_diag(q.q);
                v.ks_margin = cf.margin;
                if (cf.certified) {
                    v.ks = KSState::Certified;
                } else {
                    const maps::KSReport search =
                        maps::ks_witness_search(q.to_map(), true, mix_seed(seed, a * g.size() + b),
                                                budget);
                    v.ks = search.verdict == maps::Verdict::VIOLATION ? KSState::Violation
                                                                      : KSState::Undecided;
                    v.ks_margin = search.margin;
                }
            }

            if (v.cp && v.ks == KSState::Violation) rep.hierarchy_ok = false;
            if (v.ks == KSState::Certified && !v.positive) rep.hierarchy_ok = false;
            rep.pairs.push_back(v);
        }
    }

    const RateFunctions& rf = tr.rates;
    rep.generator_level.p_loss = detail::first_crossing(
        [&rf](double t) { const auto gg = rf.at(t);
                          return detail::min3({gg[1] + gg[2], gg[0] + gg[2], gg[0] + gg[1]}); }, g);
    rep.generator_level.ks_loss = detail::first_crossing(
        [&rf](double t) { return detail::min_ks_margin(rf.at(t)); }, g);
    rep.generator_level.cp_loss = detail::first_crossing(
        [&rf](double t) { return detail::min3(rf.at(t)); }, g);

    // short intervals: closed-form certification against the rate-sign region
    // {pair sums >= 0 and g1 g2 + g2 g3 + g3 g1 >= 0}, outside a 1e-3 band
    for (const PairVerdict& v : rep.pairs) {
        if (v.t - v.s > 0.05) continue;
        if (v.ks == KSState::Undecided) continue;
        double band = std::numeric_limits<double>::infinity();
        bool region = true;
        for (double tt : {v.s, 0.5 * (v.s + v.t), v.t}) {
            const auto gg = rf.at(tt);
            const double ps = detail::min3({gg[1] + gg[2], gg[0] + gg[2], gg[0] + gg[1]});
            const double e2 = gg[0] * gg[1] + gg[1] * gg[2] + gg[2] * gg[0];
            band = std::min({band, std::abs(ps), std::abs(e2)});
            region = region && ps >= 0.0 && e2 >= 0.0;
        }
        if (band < 1e-3) continue;
        if (region != (v.ks == KSState::Certified)) rep.short_interval_consistent = false;
    }
    return rep;
}

// scan of the amplitude-damping model: per-pair CP via the propagator Choi,
// positivity via the Bloch image, divisibility classes via the sign of the
// recovered rate (they coincide for this model)
inline DivisibilityScanReport divisibility_scan(const AmplitudeDampingSpec& spec, double t_max,
                                                int n_points) {
    DivisibilityScanReport rep;
    const std::vector<double> g = uniform_grid(t_max, n_points);

    for (std::size_t a = 0; a < g.size(); ++a) {
        for (std::size_t b = a + 1; b < g.size(); ++b) {
            PairVerdict v;
            v.s = g[a];
            v.t = g[b];
            const QubitMap lt = damping_map(spec, v.t).map;
            const QubitMap ls = damping_map(spec, v.s).map;
            if (std::abs(det(ls.t)) <= 1e-12) continue;  // untestable pair
            const QubitMap prop = propagator(lt, ls);

            const BlochPositivity bp = bloch_image_positive(prop);
            v.positive = bp.positive;
            v.positivity_margin = 1.0 - bp.max_radius;

            v.cp_margin = pauli::min_eig_hermitian(maps::choi_matrix(prop));
            v.cp = v.cp_margin >= -1e-10;
            v.ks = KSState::NotApplicable;

            if (v.cp && !v.positive) rep.hierarchy_ok = false;
            rep.pairs.push_back(v);
        }
    }

    rep.generator_level.cp_loss = detail::first_crossing(
        [&spec](double t) { return damping_rates(spec, t).gamma; }, g);
    rep.generator_level.p_loss = rep.generator_level.cp_loss;
    rep.generator_level.ks_loss = rep.generator_level.cp_loss;

    for (const PairVerdict& v : rep.pairs) {
        if (v.t - v.s > 0.05) continue;
        double worst = std::numeric_limits<double>::infinity();
        double band = std::numeric_limits<double>::infinity();
        for (double tt : {v.s, 0.5 * (v.s + v.t), v.t}) {
            const double gam = damping_rates(spec, tt).gamma;
            worst = std::min(worst, gam);
            band = std::min(band, std::abs(gam));
        }
        if (band < 1e-3) continue;
        if ((worst >= 0.0) != v.cp) rep.short_interval_consistent = false;
    }
    return rep;
}

// --------------------------- trace-norm monotonicity -------------------------

// max central-difference derivative of t -> |Lambda_t(X)|_1 over the grid;
// positive values witness information backflow
inline double blp_monotonicity(const std::function<QubitMap(double)>& lam,
                               const QubitOperator& x, const std::vector<double>& grid) {
    if (hermiticity_defect(x.m) > 1e-10)
        throw std::invalid_argument("blp_monotonicity: X must be Hermitian");
    if (grid.size() < 3) throw std::invalid_argument("blp_monotonicity: need >= 3 grid points");

    std::vector<double> tn(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i)
        tn[i] = pauli::trace_norm(maps::apply(lam(grid[i]), x));

    double worst = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 1; i + 1 < grid.size(); ++i)
        worst = std::max(worst, (tn[i + 1] - tn[i - 1]) / (grid[i + 1] - grid[i - 1]));
    return worst;
}

}  // namespace ksdiv::dynamics
