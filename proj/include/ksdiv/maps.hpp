// maps.hpp: Qubit linear maps in the Pauli transfer representation and the
// static classification hierarchy: positivity, Kadison-Schwarz (closed form),
// complete positivity via Choi, generalized KS, and the dissipativity core.

#pragma once

#include <array>
#include <cmath>
#include <optional>
#include <stdexcept>
#include <string>

#include "linalg.hpp"
#include "pauli.hpp"

namespace ksdiv::maps {

using pauli::PauliCoordinates;
using pauli::QubitOperator;
using pauli::Vec3c;

// --------------------------------- QubitMap ----------------------------------

// Linear qubit map as a real 4×4 transfer matrix acting on Pauli coordinates
// (w0, w1, w2, w3).  Real transfer <=> Hermiticity-preserving.  Extended to
// complex coordinates by linearity.
struct QubitMap {
    Mat4 t;

    QubitMap() : t(Mat4::identity()) {}
    explicit QubitMap(const Mat4& transfer) : t(transfer) {}

    static QubitMap identity() { return QubitMap(Mat4::identity()); }
};

inline bool is_trace_preserving(const QubitMap& m, double tol = 1e-12) {
    return std::abs(m.t(0, 0) - 1.0) <= tol && std::abs(m.t(0, 1)) <= tol &&
           std::abs(m.t(0, 2)) <= tol && std::abs(m.t(0, 3)) <= tol;
}

inline bool is_unital(const QubitMap& m, double tol = 1e-12) {
    return std::abs(m.t(0, 0) - 1.0) <= tol && std::abs(m.t(1, 0)) <= tol &&
           std::abs(m.t(2, 0)) <= tol && std::abs(m.t(3, 0)) <= tol;
}

// unital trace-preserving map with Phi(s_k) = q_k s_k
struct PauliDiagonalMap {
    std::array<double, 3> q{};

    QubitMap to_map() const { return QubitMap(Mat4::diagonal(1.0, q[0], q[1], q[2])); }
};

// random-unitary mixture with weights p over {I, s1, s2, s3} conjugations
struct PauliMixtureMap {
    std::array<double, 4> p{};
};

// ------------------------- mixture <-> eigenvalues ---------------------------

// involutive +-1 relation: (1, l1, l2, l3)^T = H p, p = (1/4) H (1, l)^T,
// H = [[1,1,1,1],[1,1,-1,-1],[1,-1,1,-1],[1,-1,-1,1]]
inline std::array<double, 3> mixture_to_eigenvalues(const std::array<double, 4>& p) {
    for (double v : p)
        if (!std::isfinite(v)) throw std::invalid_argument("mixture_to_eigenvalues: non-finite weight");
    return {p[0] + p[1] - p[2] - p[3],
            p[0] - p[1] + p[2] - p[3],
            p[0] - p[1] - p[2] + p[3]};
}

inline std::array<double, 4> eigenvalues_to_mixture(const std::array<double, 3>& l) {
    for (double v : l)
        if (!std::isfinite(v)) throw std::invalid_argument("eigenvalues_to_mixture: non-finite eigenvalue");
    return {0.25 * (1.0 + l[0] + l[1] + l[2]),
            0.25 * (1.0 + l[0] - l[1] - l[2]),
            0.25 * (1.0 - l[0] + l[1] - l[2]),
            0.25 * (1.0 - l[0] - l[1] + l[2])};
}

inline QubitMap mixture_to_map(const PauliMixtureMap& m) {
    const auto l = mixture_to_eigenvalues(m.p);
    const double s = m.p[0] + m.p[1] + m.p[2] + m.p[3];
    return QubitMap(Mat4::diagonal(s, l[0], l[1], l[2]));
}

// ------------------------------ map application ------------------------------

inline QubitOperator apply(const QubitMap& m, const QubitOperator& x) {
    std::array<cplx, 4> in{x.c.w0, x.c.w[0], x.c.w[1], x.c.w[2]};
    std::array<cplx, 4> out{};
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j)
            out[i] += m.t(i, j) * in[j];
    return pauli::pauli_compose(out[0], Vec3c{out[1], out[2], out[3]});
}

// adjoint with respect to Tr(X Phi(Y)): transpose of the transfer matrix
inline QubitMap dual(const QubitMap& m) { return QubitMap(transpose(m.t)); }

inline QubitMap compose(const QubitMap& a, const QubitMap& b) { return QubitMap(a.t * b.t); }

inline QubitMap invert(const QubitMap& m) {
    if (std::abs(det(m.t)) <= 1e-12)
        throw std::runtime_error("invert: non-invertible map (|det| <= 1e-12)");
    return QubitMap(inverse(m.t));
}

// ------------------------------- Choi matrix ---------------------------------

// (id ⊗ Phi)|Omega><Omega| with |Omega> = (|00> + |11>)/sqrt(2), so the Choi
// eigenvalues of a mixture map equal its weights p directly.
inline CMat4 choi_matrix(const QubitMap& m) {
    CMat4 c;
    for (int a = 0; a < 2; ++a)
        for (int cc = 0; cc < 2; ++cc) {
            const QubitOperator img = apply(m, QubitOperator(pauli::unit_matrix(a, cc)));
            for (int b = 0; b < 2; ++b)
                for (int d = 0; d < 2; ++d)
                    c(2 * a + b, 2 * cc + d) = 0.5 * img.m(b, d);
        }
    return c;
}

inline bool is_cp(const QubitMap& m) {
    return pauli::min_eig_hermitian(choi_matrix(m)) >= -1e-10;
}

// positivity of the unital diagonal map: |q_k| <= 1
inline bool is_positive_diag(const std::array<double, 3>& q) {
    return std::max({std::abs(q[0]), std::abs(q[1]), std::abs(q[2])}) <= 1.0 + 1e-12;
}

// --------------------------- KS closed-form check ----------------------------

struct KSClosedForm {
    bool certified = false;          // sum q_k^2 <= 1 + 2 q1 q2 q3
    bool general_certified = false;  // A <= bg, B <= ag, C <= ab
    double margin = 0.0;             // slack of the first form
};

// Sufficient conditions for the KS property of the diagonal map; the two
// forms are algebraically equivalent on the positivity cube and that
// agreement is asserted.
inline KSClosedForm ks_closed_form_diag(const std::array<double, 3>& q) {
    if (!is_positive_diag(q))
        throw std::invalid_argument("ks_closed_form_diag: map not positive (some |q_k| > 1)");
    const double q1 = q[0], q2 = q[1], q3 = q[2];

    KSClosedForm r;
    r.margin = 1.0 + 2.0 * q1 * q2 * q3 - (q1 * q1 + q2 * q2 + q3 * q3);
    r.certified = r.margin >= -1e-12;

    const double al = std::abs(1.0 - q1 * q1);
    const double be = std::abs(1.0 - q2 * q2);
    const double ga = std::abs(1.0 - q3 * q3);
    const double A = (q1 - q2 * q3) * (q1 - q2 * q3);
    const double B = (q2 - q1 * q3) * (q2 - q1 * q3);
    const double C = (q3 - q1 * q2) * (q3 - q1 * q2);
    r.general_certified = (A <= be * ga + 1e-12) && (B <= al * ga + 1e-12) && (C <= al * be + 1e-12);

    if (r.certified != r.general_certified && std::abs(r.margin) > 1e-9)
        throw std::logic_error("ks_closed_form_diag: the two certification forms disagree");
    return r;
}

// ------------------------- pointwise margin checks ---------------------------

inline Mat2 inverse2(const Mat2& x) {
    const cplx d = det(x);
    if (std::abs(d) < 1e-300) throw std::invalid_argument("inverse2: singular matrix");
    Mat2 r;
    r(0, 0) = x(1, 1) / d;
    r(1, 1) = x(0, 0) / d;
    r(0, 1) = -x(0, 1) / d;
    r(1, 0) = -x(1, 0) / d;
    return r;
}

// KS margin at X for a unital map: min eig of Phi(XX') - Phi(X)Phi(X')
inline double ks_check(const QubitMap& m, const QubitOperator& x) {
    if (!is_unital(m, 1e-10))
        throw std::invalid_argument("ks_check: map not unital; use ks2_check");
    const Mat2 X = x.m;
    const Mat2 Xd = adjoint(X);
    const Mat2 lhs = apply(m, QubitOperator(X * Xd)).m;
    const Mat2 rhs = apply(m, x).m * apply(m, QubitOperator(Xd)).m;
    return pauli::min_eig_hermitian(QubitOperator(lhs - rhs));
}

// generalized KS margin at X: min eig of Phi(XX') - Phi(X) Phi(I)^{-1} Phi(X')
inline double ks2_check(const QubitMap& m, const QubitOperator& x) {
    const Mat2 unit_img = apply(m, QubitOperator(Mat2::identity())).m;
    if (pauli::min_eig_hermitian(QubitOperator(unit_img)) <= 1e-10)
        throw std::invalid_argument("ks2_check: image of the identity is not positive definite");
    const Mat2 X = x.m;
    const Mat2 Xd = adjoint(X);
    const Mat2 lhs = apply(m, QubitOperator(X * Xd)).m;
    const Mat2 rhs = apply(m, x).m * inverse2(unit_img) * apply(m, QubitOperator(Xd)).m;
    return pauli::min_eig_hermitian(QubitOperator(lhs - rhs));
}

// dissipativity-core margin at X:
// min eig of Phi(X'X) - Phi(X')X - X'Phi(X) + X'Phi(I)X
inline double qks_check(const QubitMap& m, const QubitOperator& x) {
    const Mat2 unit_img = apply(m, QubitOperator(Mat2::identity())).m;
    const Mat2 X = x.m;
    const Mat2 Xd = adjoint(X);
    const Mat2 e = apply(m, QubitOperator(Xd * X)).m - apply(m, QubitOperator(Xd)).m * X -
                   Xd * apply(m, x).m + Xd * unit_img * X;
    return pauli::min_eig_hermitian(QubitOperator(e));
}

}  // namespace ksdiv::maps
