// pauli.hpp: Pauli basis algebra on a qubit: coordinates, products, norms, eigenvalue bounds

#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <stdexcept>

#include "linalg.hpp"

namespace ksdiv::pauli {

using Vec3c = std::array<cplx, 3>;

// ------------------------------ basis matrices -------------------------------

inline Mat2 sigma(int k) {
    Mat2 m;
    switch (k) {
        case 0: m(0, 0) = 1.0; m(1, 1) = 1.0; break;
        case 1: m(0, 1) = 1.0; m(1, 0) = 1.0; break;
        case 2: m(0, 1) = cplx(0.0, -1.0); m(1, 0) = cplx(0.0, 1.0); break;
        case 3: m(0, 0) = 1.0; m(1, 1) = -1.0; break;
        default: throw std::invalid_argument("pauli: sigma index out of range");
    }
    return m;
}

// |r><c| in the computational basis
inline Mat2 unit_matrix(int r, int c) {
    Mat2 m;
    m(r, c) = 1.0;
    return m;
}

// ------------------------------- coordinates ---------------------------------

// X = w0*I + w1*s1 + w2*s2 + w3*s3; w0, w complex for general operators,
// all real exactly when X is Hermitian.
struct PauliCoordinates {
    cplx w0{};
    Vec3c w{};
};

inline PauliCoordinates pauli_decompose(const Mat2& x) {
    if (!is_finite(x)) throw std::invalid_argument("pauli_decompose: non-finite entries");
    PauliCoordinates c;
    c.w0 = 0.5 * (x(0, 0) + x(1, 1));
    c.w[0] = 0.5 * (x(0, 1) + x(1, 0));
    c.w[1] = 0.5 * cplx(0.0, 1.0) * (x(0, 1) - x(1, 0));
    c.w[2] = 0.5 * (x(0, 0) - x(1, 1));
    return c;
}

inline Mat2 coords_to_matrix(const PauliCoordinates& c) {
    Mat2 m;
    m(0, 0) = c.w0 + c.w[2];
    m(1, 1) = c.w0 - c.w[2];
    m(0, 1) = c.w[0] - cplx(0.0, 1.0) * c.w[1];
    m(1, 0) = c.w[0] + cplx(0.0, 1.0) * c.w[1];
    return m;
}

// operator with both representations kept consistent
struct QubitOperator {
    Mat2 m;
    PauliCoordinates c;

    QubitOperator() : m(Mat2::zero()), c() {}
    explicit QubitOperator(const Mat2& mat) : m(mat), c(pauli_decompose(mat)) {}
    explicit QubitOperator(const PauliCoordinates& coords) : m(coords_to_matrix(coords)), c(coords) {
        if (!finite(coords.w0) || !finite(coords.w[0]) || !finite(coords.w[1]) || !finite(coords.w[2]))
            throw std::invalid_argument("pauli_compose: non-finite coordinates");
    }
};

inline QubitOperator pauli_compose(const PauliCoordinates& c) { return QubitOperator(c); }

inline QubitOperator pauli_compose(const cplx& w0, const Vec3c& w) {
    return QubitOperator(PauliCoordinates{w0, w});
}

// --------------------------- 3-vector conveniences ---------------------------

// bilinear dot, no conjugation; callers pass conjugates explicitly
inline cplx cdot(const Vec3c& a, const Vec3c& b) {
    return a[0] * b[0] + a[1] * b[1] + a[2] * b[2];
}

inline double norm3(const Vec3c& a) {
    return std::sqrt(std::norm(a[0]) + std::norm(a[1]) + std::norm(a[2]));
}

inline Vec3c conj3(const Vec3c& a) {
    return {std::conj(a[0]), std::conj(a[1]), std::conj(a[2])};
}

// bilinear vector product; (a.s)(b.s) = (a.b) I + i (a×b).s
inline Vec3c complex_cross(const Vec3c& a, const Vec3c& b) {
    return {a[1] * b[2] - a[2] * b[1],
            a[2] * b[0] - a[0] * b[2],
            a[0] * b[1] - a[1] * b[0]};
}

// ------------------------------- eigen bounds --------------------------------

// smallest eigenvalue of a Hermitian 2×2, closed form w0 - |w|
inline double min_eig_hermitian(const QubitOperator& x) {
    if (hermiticity_defect(x.m) > 1e-10)
        throw std::invalid_argument("min_eig_hermitian: operator not Hermitian within 1e-10");
    const Mat2 h = 0.5 * (x.m + adjoint(x.m));
    const PauliCoordinates c = pauli_decompose(h);
    const double w0 = c.w0.real();
    const double nw = std::sqrt(c.w[0].real() * c.w[0].real() +
                                c.w[1].real() * c.w[1].real() +
                                c.w[2].real() * c.w[2].real());
    return w0 - nw;
}

inline double min_eig_hermitian(const Mat2& x) { return min_eig_hermitian(QubitOperator(x)); }

// smallest eigenvalue of a Hermitian 4×4 via the cyclic Jacobi solver
inline double min_eig_hermitian(const CMat4& x) {
    if (hermiticity_defect(x) > 1e-10)
        throw std::invalid_argument("min_eig_hermitian: matrix not Hermitian within 1e-10");
    return eigvals_hermitian(x)[0];
}

// --------------------------------- norms -------------------------------------

// trace norm (sum of singular values); for 2×2 exactly
// sqrt(|X|_F^2 + 2|det X|), since the singular values satisfy
// s+^2 + s-^2 = |X|_F^2 and s+ s- = |det X|.
inline double trace_norm(const QubitOperator& x) {
    const double f2 = frobenius_norm(x.m);
    const double d = std::abs(det(x.m));
    return std::sqrt(f2 * f2 + 2.0 * d);
}

inline double trace_norm(const Mat2& x) { return trace_norm(QubitOperator(x)); }

}  // namespace ksdiv::pauli
