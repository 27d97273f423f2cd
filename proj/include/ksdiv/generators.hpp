// generators.hpp: Time-local generators: GKSL builders in both pictures,
// Pauli rate-triple generators, and generator-level divisibility
// classification (sign conditions and numerical dissipativity search).

#pragma once

#include <array>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <utility>
#include <vector>

#include "linalg.hpp"
#include "maps.hpp"
#include "pauli.hpp"
#include "rates.hpp"
#include "witness.hpp"

namespace ksdiv::generators {

using maps::KSReport;
using maps::QubitMap;
using pauli::QubitOperator;

// --------------------------------- GKSL data ---------------------------------

struct JumpTerm {
    pauli::QubitOperator op;
    double rate = 0.0;  // may be negative for time-local generators
};

struct GKSLData {
    pauli::QubitOperator hamiltonian;  // Hermitian, hbar = 1
    std::vector<JumpTerm> jumps;
};

namespace detail {

inline void require_hermitian_h(const GKSLData& g) {
    if (hermiticity_defect(g.hamiltonian.m) > 1e-12)
        throw std::invalid_argument("generator: Hamiltonian not Hermitian within 1e-12");
}

// transfer matrix of a Hermiticity-preserving action given on Pauli basis inputs
template <class Action>
Mat4 transfer_of(Action&& act) {
    Mat4 m;
    for (int j = 0; j < 4; ++j) {
        const Mat2 img = act(pauli::sigma(j));
        const pauli::PauliCoordinates c = pauli::pauli_decompose(img);
        m(0, j) = c.w0.real();
        m(1, j) = c.w[0].real();
        m(2, j) = c.w[1].real();
        m(3, j) = c.w[2].real();
    }
    return m;
}

}  // namespace detail

// L(rho) = -i[H, rho] + sum_k g_k V_k rho V_k' - 1/2 {sum_k g_k V_k'V_k, rho}
inline QubitMap generator_schrodinger(const GKSLData& g) {
    detail::require_hermitian_h(g);
    const Mat2 H = g.hamiltonian.m;
    Mat2 K = Mat2::zero();  // sum_k g_k V_k' V_k
    for (const JumpTerm& j : g.jumps) K = K + cplx(j.rate, 0.0) * (adjoint(j.op.m) * j.op.m);

    auto act = [&](const Mat2& rho) {
        const cplx mi(0.0, -1.0);
        Mat2 r = mi * (H * rho - rho * H);
        for (const JumpTerm& j : g.jumps)
            r = r + cplx(j.rate, 0.0) * (j.op.m * rho * adjoint(j.op.m));
        r = r - cplx(0.5, 0.0) * (K * rho + rho * K);
        return r;
    };
    return QubitMap(detail::transfer_of(act));
}

// Heisenberg picture: the adjoint of the Schrodinger generator.  In the Pauli
// basis the adjoint's transfer matrix is the transpose, exactly; the action
// equals i[H, X] + sum_k g_k V_k' X V_k - 1/2 {sum_k g_k V_k'V_k, X}, which
// the test suite verifies against this construction.
inline QubitMap generator_heisenberg(const GKSLData& g) {
    return maps::dual(generator_schrodinger(g));
}

// -------------------------- Pauli rate-triple class --------------------------

// L(rho) = 1/2 sum_k g_k (s_k rho s_k - rho); self-dual,
// transfer = diag(0, -(g2+g3), -(g3+g1), -(g1+g2))
inline QubitMap pauli_generator(const std::array<double, 3>& g) {
    for (double v : g)
        if (!std::isfinite(v)) throw std::invalid_argument("pauli_generator: non-finite rate");
    return QubitMap(Mat4::diagonal(0.0, -(g[1] + g[2]), -(g[2] + g[0]), -(g[0] + g[1])));
}

// ------------------------------ classification -------------------------------

struct DissipativityVerdict {
    bool p_divisible_now = false;
    bool ks_divisible_now = false;
    bool cp_divisible_now = false;
    // ordered pairs (i,j), i != j, lexicographic: margins of g_i + 2 g_j
    std::array<double, 6> ks_margins{};
    // complement indexing: pair_sums[k] = g_i + g_j with {i,j,k} = {0,1,2}
    std::array<double, 3> pair_sums{};
    std::array<double, 3> rates{};
};

// sign conditions with a 1e-12 tie tolerance; margins reported so callers can
// apply their own bands
inline DissipativityVerdict classify_rates(const std::array<double, 3>& g) {
    for (double v : g)
        if (!std::isfinite(v)) throw std::invalid_argument("classify_rates: non-finite rate");
    DissipativityVerdict v;
    v.rates = g;
    v.pair_sums = {g[1] + g[2], g[0] + g[2], g[0] + g[1]};
    int m = 0;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
            if (i == j) continue;
            v.ks_margins[m++] = g[i] + 2.0 * g[j];
        }
    const double tol = 1e-12;
    v.p_divisible_now = v.pair_sums[0] >= -tol && v.pair_sums[1] >= -tol && v.pair_sums[2] >= -tol;
    v.ks_divisible_now = true;
    for (double km : v.ks_margins) v.ks_divisible_now = v.ks_divisible_now && km >= -tol;
    v.cp_divisible_now = g[0] >= -tol && g[1] >= -tol && g[2] >= -tol;
    if ((v.cp_divisible_now && !v.ks_divisible_now) || (v.ks_divisible_now && !v.p_divisible_now))
        throw std::logic_error("classify_rates: hierarchy cp => ks => p broken");
    return v;
}

// ------------------------- numerical dissipativity ---------------------------

// Minimizes the smallest eigenvalue of L(X'X) - L(X')X - X'L(X) over
// unit-norm X.  Requires a Heisenberg-picture generator annihilating the
// identity (dual of trace-preserving dynamics).
inline KSReport dissipativity_numeric(const QubitMap& lh, std::uint64_t seed,
                                      std::uint64_t budget) {
    const double unit_defect =
        std::max({std::abs(lh.t(0, 0)), std::abs(lh.t(1, 0)), std::abs(lh.t(2, 0)),
                  std::abs(lh.t(3, 0))});
    if (unit_defect > 1e-12)
        throw std::invalid_argument("dissipativity_numeric: generator does not annihilate the identity");

    auto target = [&lh](const QubitOperator& x) {
        const Mat2 X = x.m;
        const Mat2 Xd = adjoint(X);
        const Mat2 e = maps::apply(lh, QubitOperator(Xd * X)).m -
                       maps::apply(lh, QubitOperator(Xd)).m * X -
                       Xd * maps::apply(lh, x).m;
        return pauli::min_eig_hermitian(QubitOperator(e));
    };
    return maps::detail::report_from_outcome(
        maps::minimize_over_unit_operators(target, seed, budget));
}

// --------------------------- spectral decomposition --------------------------

struct MuLambda {
    std::array<double, 3> lambda{};    // eigenvalue slopes at Sum g = 2
    std::array<double, 3> mu{};        // 1 - l_i - l_j + l_k, equal to 2 g_k
    std::array<double, 3> a_coeffs{};  // 1 - l_k, equal to g_i + g_j rescaled
};

// canonical rescaling Sum g = 2 (so the map of the unit sphere stays unital);
// all public verdicts remain scale-invariant
inline MuLambda mu_lambda_decomposition(const std::array<double, 3>& g) {
    const double total = g[0] + g[1] + g[2];
    if (std::abs(total) <= 1e-14)
        throw std::invalid_argument("mu_lambda_decomposition: degenerate generator (Sum g = 0)");
    const double scale = 2.0 / total;
    const std::array<double, 3> gg{scale * g[0], scale * g[1], scale * g[2]};

    MuLambda r;
    r.lambda = {0.5 * (gg[0] - gg[1] - gg[2]), 0.5 * (gg[1] - gg[0] - gg[2]),
                0.5 * (gg[2] - gg[0] - gg[1])};
    for (int k = 0; k < 3; ++k) {
        const int i = (k + 1) % 3, j = (k + 2) % 3;
        r.mu[k] = 1.0 - r.lambda[i] - r.lambda[j] + r.lambda[k];
        r.a_coeffs[k] = 1.0 - r.lambda[k];
        if (std::abs(r.mu[k] - 2.0 * gg[k]) > 1e-12)
            throw std::logic_error("mu_lambda_decomposition: mu identity broken");
        if (std::abs(r.a_coeffs[k] - (gg[i] + gg[j])) > 1e-12)
            throw std::logic_error("mu_lambda_decomposition: a-coefficient identity broken");
    }
    return r;
}

// ------------------------------ relaxation times -----------------------------

struct RelaxationTimes {
    double t1 = std::numeric_limits<double>::infinity();
    double t2 = std::numeric_limits<double>::infinity();
    double t3 = std::numeric_limits<double>::infinity();
};

// T_i = 1/(g_j + g_k); non-decaying directions get the +inf sentinel.  When
// the triple is KS-divisible with g3 < 0, the bounds T1, T2 <= 1/|g3| and
// T3 <= 1/(4|g3|) follow from the sign conditions and are asserted.
inline RelaxationTimes relaxation_times(const std::array<double, 3>& g) {
    const DissipativityVerdict v = classify_rates(g);
    RelaxationTimes r;
    if (v.pair_sums[0] > 0.0) r.t1 = 1.0 / v.pair_sums[0];
    if (v.pair_sums[1] > 0.0) r.t2 = 1.0 / v.pair_sums[1];
    if (v.pair_sums[2] > 0.0) r.t3 = 1.0 / v.pair_sums[2];

    if (v.ks_divisible_now && g[2] < 0.0) {
        const double cap12 = 1.0 / std::abs(g[2]);
        const double cap3 = 0.25 / std::abs(g[2]);
        const double rel = 1e-12;
        if (r.t1 > cap12 * (1.0 + rel) || r.t2 > cap12 * (1.0 + rel) ||
            r.t3 > cap3 * (1.0 + rel))
            throw std::logic_error("relaxation_times: KS bound violated");
    }
    return r;
}

}  // namespace ksdiv::generators
