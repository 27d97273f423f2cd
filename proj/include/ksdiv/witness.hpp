// witness.hpp: Derivative-free violation search over unit-norm qubit operators.
// Sampling refutes, never certifies: searches return UNDECIDED or VIOLATION.

#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <cstdlib>
#include <functional>
#include <limits>
#include <optional>
#include <stdexcept>
#include <thread>
#include <vector>

#include "linalg.hpp"
#include "maps.hpp"
#include "pauli.hpp"

namespace ksdiv::maps {

enum class Verdict { KS_CERTIFIED, VIOLATION, UNDECIDED };

inline const char* verdict_name(Verdict v) {
    switch (v) {
        case Verdict::KS_CERTIFIED: return "KS_CERTIFIED";
        case Verdict::VIOLATION: return "VIOLATION";
        default: return "UNDECIDED";
    }
}

struct KSReport {
    Verdict verdict = Verdict::UNDECIDED;
    double margin = 0.0;
    std::optional<PauliCoordinates> witness;
    long evaluations = 0;
};

namespace detail {

// 8 real parameters <-> complex (w0, w); the searched operator is rescaled to
// unit Frobenius norm, so margins across starts are comparable.
inline QubitOperator operator_from_params(const std::array<double, 8>& th) {
    PauliCoordinates c;
    c.w0 = cplx(th[0], th[1]);
    c.w = Vec3c{cplx(th[2], th[3]), cplx(th[4], th[5]), cplx(th[6], th[7])};
    return pauli::pauli_compose(c);
}

template <class F>
double eval_params(F& f, const std::array<double, 8>& th, long& evals) {
    QubitOperator x = detail::operator_from_params(th);
    const double nf = frobenius_norm(x.m);
    if (nf < 1e-12) return std::numeric_limits<double>::infinity();
    Mat2 scaled = (cplx(1.0 / nf, 0.0)) * x.m;
    ++evals;
    return f(QubitOperator(scaled));
}

struct StartResult {
    double margin = std::numeric_limits<double>::infinity();
    std::array<double, 8> theta{};
};

// strict ordering: smaller margin wins; ties broken by lexicographically
// smaller parameters so parallel reductions are deterministic
inline bool better(const StartResult& a, const StartResult& b) {
    if (a.margin != b.margin) return a.margin < b.margin;
    return a.theta < b.theta;
}

inline int thread_cap() {
    if (const char* env = std::getenv("KSDIV_THREADS")) {
        const int n = std::atoi(env);
        if (n >= 1) return n;
    }
    return 1;
}

constexpr double kGolden = 0.6180339887498949;

// golden-section minimization of g on [lo, hi]
template <class G>
double golden_section(G& g, double lo, double hi, double tol, int max_iter) {
    double x1 = hi - kGolden * (hi - lo);
    double x2 = lo + kGolden * (hi - lo);
    double f1 = g(x1), f2 = g(x2);
    for (int i = 0; i < max_iter && (hi - lo) > tol; ++i) {
        if (f1 <= f2) {
            hi = x2;
            x2 = x1; f2 = f1;
            x1 = hi - kGolden * (hi - lo);
            f1 = g(x1);
        } else {
            lo = x1;
            x1 = x2; f1 = f2;
            x2 = lo + kGolden * (hi - lo);
            f2 = g(x2);
        }
    }
    return f1 <= f2 ? x1 : x2;
}

}  // namespace detail

struct SearchOutcome {
    double margin = std::numeric_limits<double>::infinity();
    std::array<double, 8> theta{};
    long evaluations = 0;
};

// Minimize f over unit-Frobenius operators: `budget` seeded random starts,
// then coordinate-wise golden-section descent (200 line searches) from the
// best start.  Deterministic for a given (seed, budget) at any thread count.
template <class F>
SearchOutcome minimize_over_unit_operators(F f, std::uint64_t seed, std::uint64_t budget) {
    const int nthreads = std::min<std::uint64_t>(std::max(budget, std::uint64_t{1}), detail::thread_cap());

    std::vector<detail::StartResult> winners(nthreads);
    std::vector<long> counts(nthreads, 0);

    auto run_chunk = [&](int ti, std::uint64_t lo, std::uint64_t hi) {
        detail::StartResult best;
        long evals = 0;
        for (std::uint64_t i = lo; i < hi; ++i) {
            Rng rng(mix_seed(seed, i));
            detail::StartResult r;
            double n2 = 0.0;
            for (double& v : r.theta) {
                v = rng.normal();
                n2 += v * v;
            }
            if (n2 < 1e-24) continue;
            const double inv = 1.0 / std::sqrt(n2);
            for (double& v : r.theta) v *= inv;
            r.margin = detail::eval_params(f, r.theta, evals);
            if (detail::better(r, best)) best = r;
        }
        winners[ti] = best;
        counts[ti] = evals;
    };

    if (nthreads == 1) {
        run_chunk(0, 0, budget);
    } else {
        std::vector<std::thread> pool;
        const std::uint64_t chunk = (budget + nthreads - 1) / nthreads;
        for (int ti = 0; ti < nthreads; ++ti) {
            const std::uint64_t lo = std::min<std::uint64_t>(ti * chunk, budget);
            const std::uint64_t hi = std::min(budget, lo + chunk);
            pool.emplace_back(run_chunk, ti, lo, hi);
        }
        for (auto& th : pool) th.join();
    }

    detail::StartResult best;
    long evals = 0;
    for (int ti = 0; ti < nthreads; ++ti) {
        if (detail::better(winners[ti], best)) best = winners[ti];
        evals += counts[ti];
    }

    // refinement: cycle the 8 coordinates, shrinking the bracket each cycle
    if (best.margin < std::numeric_limits<double>::infinity()) {
        double radius = 0.8;
        std::array<double, 8> th = best.theta;
        double cur = best.margin;
        for (int iter = 0; iter < 200; ++iter) {
            const int k = iter % 8;
            auto line = [&](double v) {
                std::array<double, 8> probe = th;
                probe[k] = v;
                return detail::eval_params(f, probe, evals);
            };
            const double v = detail::golden_section(line, th[k] - radius, th[k] + radius, 1e-9, 60);
            const double fv = line(v);
            if (fv < cur) {
                th[k] = v;
                cur = fv;
            }
            if (k == 7) radius = std::max(radius * 0.6, 1e-7);
        }
        if (cur < best.margin) {
            best.margin = cur;
            best.theta = th;
        }
    }

    SearchOutcome out;
    out.margin = best.margin;
    out.theta = best.theta;
    out.evaluations = evals;
    return out;
}

namespace detail {

inline PauliCoordinates normalized_witness(const std::array<double, 8>& th) {
    QubitOperator x = operator_from_params(th);
    const double nf = frobenius_norm(x.m);
    const cplx s(nf > 1e-12 ? 1.0 / nf : 1.0, 0.0);
    PauliCoordinates c = x.c;
    c.w0 *= s;
    for (auto& v : c.w) v *= s;
    return c;
}

inline KSReport report_from_outcome(const SearchOutcome& o) {
    KSReport r;
    r.margin = o.margin;
    r.evaluations = o.evaluations;
    if (o.margin < -1e-8) {
        r.verdict = Verdict::VIOLATION;
        r.witness = normalized_witness(o.theta);
    } else {
        r.verdict = Verdict::UNDECIDED;
    }
    return r;
}

}  // namespace detail

// Search for a violation of the KS inequality (unital maps) or of its
// generalized form (non-unital, via the Phi(I)^{-1} middle term).
inline KSReport ks_witness_search(const QubitMap& m, bool unital, std::uint64_t seed,
                                  std::uint64_t budget) {
    if (unital) {
        if (!is_unital(m, 1e-10))
            throw std::invalid_argument("ks_witness_search: map is not unital; pass unital=false");
        auto target = [&m](const QubitOperator& x) { return ks_check(m, x); };
        return detail::report_from_outcome(minimize_over_unit_operators(target, seed, budget));
    }
    const Mat2 unit_img = apply(m, QubitOperator(Mat2::identity())).m;
    if (pauli::min_eig_hermitian(QubitOperator(unit_img)) <= 1e-10)
        throw std::invalid_argument("ks_witness_search: image of identity not positive definite");
    auto target = [&m](const QubitOperator& x) { return ks2_check(m, x); };
    return detail::report_from_outcome(minimize_over_unit_operators(target, seed, budget));
}

}  // namespace ksdiv::maps
