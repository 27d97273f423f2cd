// linalg.hpp: Fixed-size dense kernels: 2×2 complex, 4×4 real, 4×4 Hermitian eigensolver, seeded RNG

#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <cstdint>
#include <limits>
#include <stdexcept>

namespace ksdiv {

using cplx = std::complex<double>;

inline bool finite(double x) { return std::isfinite(x); }
inline bool finite(const cplx& z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); }

// --------------------------------- Mat2 -------------------------------------

// 2×2 complex matrix, row-major.
struct Mat2 {
    std::array<cplx, 4> a{};

    cplx& operator()(int r, int c) { return a[2 * r + c]; }
    const cplx& operator()(int r, int c) const { return a[2 * r + c]; }

    static Mat2 zero() { return {}; }
    static Mat2 identity() {
        Mat2 m;
        m(0, 0) = 1.0; m(1, 1) = 1.0;
        return m;
    }
};

inline Mat2 operator+(const Mat2& x, const Mat2& y) {
    Mat2 r;
    for (int i = 0; i < 4; ++i) r.a[i] = x.a[i] + y.a[i];
    return r;
}

inline Mat2 operator-(const Mat2& x, const Mat2& y) {
    Mat2 r;
    for (int i = 0; i < 4; ++i) r.a[i] = x.a[i] - y.a[i];
    return r;
}

inline Mat2 operator*(const cplx& s, const Mat2& x) {
    Mat2 r;
    for (int i = 0; i < 4; ++i) r.a[i] = s * x.a[i];
    return r;
}

inline Mat2 operator*(const Mat2& x, const Mat2& y) {
    Mat2 r;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
            r(i, j) = x(i, 0) * y(0, j) + x(i, 1) * y(1, j);
    return r;
}

inline Mat2 adjoint(const Mat2& x) {
    Mat2 r;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
            r(i, j) = std::conj(x(j, i));
    return r;
}

inline cplx trace(const Mat2& x) { return x(0, 0) + x(1, 1); }

inline cplx det(const Mat2& x) { return x(0, 0) * x(1, 1) - x(0, 1) * x(1, 0); }

inline double frobenius_norm(const Mat2& x) {
    double s = 0.0;
    for (const cplx& z : x.a) s += std::norm(z);
    return std::sqrt(s);
}

inline double max_abs(const Mat2& x) {
    double m = 0.0;
    for (const cplx& z : x.a) m = std::max(m, std::abs(z));
    return m;
}

inline double max_abs_diff(const Mat2& x, const Mat2& y) { return max_abs(x - y); }

inline bool is_finite(const Mat2& x) {
    for (const cplx& z : x.a)
        if (!finite(z)) return false;
    return true;
}

// deviation from Hermiticity, max-abs entrywise
inline double hermiticity_defect(const Mat2& x) { return max_abs(x - adjoint(x)); }

// --------------------------------- Mat4 -------------------------------------

// 4×4 real matrix, row-major.  Carries transfer matrices of qubit maps.
struct Mat4 {
    std::array<double, 16> a{};

    double& operator()(int r, int c) { return a[4 * r + c]; }
    const double& operator()(int r, int c) const { return a[4 * r + c]; }

    static Mat4 zero() { return {}; }
    static Mat4 identity() {
        Mat4 m;
        for (int i = 0; i < 4; ++i) m(i, i) = 1.0;
        return m;
    }
    static Mat4 diagonal(double d0, double d1, double d2, double d3) {
        Mat4 m;
        m(0, 0) = d0; m(1, 1) = d1; m(2, 2) = d2; m(3, 3) = d3;
        return m;
    }
};

inline Mat4 operator+(const Mat4& x, const Mat4& y) {
    Mat4 r;
    for (int i = 0; i < 16; ++i) r.a[i] = x.a[i] + y.a[i];
    return r;
}

inline Mat4 operator-(const Mat4& x, const Mat4& y) {
    Mat4 r;
    for (int i = 0; i < 16; ++i) r.a[i] = x.a[i] - y.a[i];
    return r;
}

inline Mat4 operator*(double s, const Mat4& x) {
    Mat4 r;
    for (int i = 0; i < 16; ++i) r.a[i] = s * x.a[i];
    return r;
}

inline Mat4 operator*(const Mat4& x, const Mat4& y) {
    Mat4 r;
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) {
            double s = 0.0;
            for (int k = 0; k < 4; ++k) s += x(i, k) * y(k, j);
            r(i, j) = s;
        }
    return r;
}

inline Mat4 transpose(const Mat4& x) {
    Mat4 r;
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j)
            r(i, j) = x(j, i);
    return r;
}

inline double max_abs(const Mat4& x) {
    double m = 0.0;
    for (double v : x.a) m = std::max(m, std::abs(v));
    return m;
}

inline double max_abs_diff(const Mat4& x, const Mat4& y) { return max_abs(x - y); }

inline bool is_finite(const Mat4& x) {
    for (double v : x.a)
        if (!std::isfinite(v)) return false;
    return true;
}

// determinant by LU with partial pivoting
inline double det(const Mat4& x) {
    Mat4 m = x;
    double d = 1.0;
    for (int col = 0; col < 4; ++col) {
        int piv = col;
        for (int r = col + 1; r < 4; ++r)
            if (std::abs(m(r, col)) > std::abs(m(piv, col))) piv = r;
        if (m(piv, col) == 0.0) return 0.0;
        if (piv != col) {
            for (int c = 0; c < 4; ++c) std::swap(m(piv, c), m(col, c));
            d = -d;
        }
        d *= m(col, col);
        for (int r = col + 1; r < 4; ++r) {
            double f = m(r, col) / m(col, col);
            for (int c = col; c < 4; ++c) m(r, c) -= f * m(col, c);
        }
    }
    return d;
}

// Gauss-Jordan inverse with partial pivoting; caller guards |det|.
inline Mat4 inverse(const Mat4& x) {
    Mat4 m = x;
    Mat4 inv = Mat4::identity();
    for (int col = 0; col < 4; ++col) {
        int piv = col;
        for (int r = col + 1; r < 4; ++r)
            if (std::abs(m(r, col)) > std::abs(m(piv, col))) piv = r;
        if (m(piv, col) == 0.0) throw std::runtime_error("linalg: singular 4x4 matrix");
        if (piv != col)
            for (int c = 0; c < 4; ++c) {
                std::swap(m(piv, c), m(col, c));
                std::swap(inv(piv, c), inv(col, c));
            }
        double p = m(col, col);
        for (int c = 0; c < 4; ++c) {
            m(col, c) /= p;
            inv(col, c) /= p;
        }
        for (int r = 0; r < 4; ++r) {
            if (r == col) continue;
            double f = m(r, col);
            if (f == 0.0) continue;
            for (int c = 0; c < 4; ++c) {
                m(r, c) -= f * m(col, c);
                inv(r, c) -= f * inv(col, c);
            }
        }
    }
    return inv;
}

// --------------------------------- CMat4 ------------------------------------

// 4×4 complex matrix, row-major; used for Choi matrices and their spectra.
struct CMat4 {
    std::array<cplx, 16> a{};

    cplx& operator()(int r, int c) { return a[4 * r + c]; }
    const cplx& operator()(int r, int c) const { return a[4 * r + c]; }
};

inline double hermiticity_defect(const CMat4& x) {
    double m = 0.0;
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j)
            m = std::max(m, std::abs(x(i, j) - std::conj(x(j, i))));
    return m;
}

// Eigenvalues of a Hermitian 4×4 by cyclic complex Jacobi rotations.
// Deterministic; converges when the off-diagonal Frobenius mass drops
// below 1e-14 (relative to unit scale) or after a fixed sweep cap.
inline std::array<double, 4> eigvals_hermitian(const CMat4& input) {
    CMat4 m = input;
    // symmetrize: callers tolerate defects up to their own threshold
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j)
            m(i, j) = 0.5 * (m(i, j) + std::conj(input(j, i)));

    const int max_sweeps = 60;
    for (int sweep = 0; sweep < max_sweeps; ++sweep) {
        double off = 0.0;
        for (int p = 0; p < 4; ++p)
            for (int q = p + 1; q < 4; ++q)
                off += 2.0 * std::norm(m(p, q));
        if (std::sqrt(off) < 1e-14) break;

        for (int p = 0; p < 4; ++p)
            for (int q = p + 1; q < 4; ++q) {
                const double r = std::abs(m(p, q));
                if (r < 1e-300) continue;
                const double phi = std::arg(m(p, q));
                const double tau = (m(p, p).real() - m(q, q).real()) / (2.0 * r);
                const double sgn = (tau >= 0.0) ? 1.0 : -1.0;
                const double t = sgn / (std::abs(tau) + std::sqrt(1.0 + tau * tau));
                const double c = 1.0 / std::sqrt(1.0 + t * t);
                const double s = t * c;
                const cplx eip(std::cos(phi), std::sin(phi));
                const cplx ein = std::conj(eip);

                // columns: col p <- c*col_p + s*conj(e)*col_q ; col q <- -s*e*col_p + c*col_q
                for (int i = 0; i < 4; ++i) {
                    const cplx ap = m(i, p), aq = m(i, q);
                    m(i, p) = c * ap + s * ein * aq;
                    m(i, q) = -s * eip * ap + c * aq;
                }
                // rows: row p <- c*row_p + s*e*row_q ; row q <- -s*conj(e)*row_p + c*row_q
                for (int j = 0; j < 4; ++j) {
                    const cplx ap = m(p, j), aq = m(q, j);
                    m(p, j) = c * ap + s * eip * aq;
                    m(q, j) = -s * ein * ap + c * aq;
                }
            }
    }

    std::array<double, 4> ev{m(0, 0).real(), m(1, 1).real(), m(2, 2).real(), m(3, 3).real()};
    for (int i = 0; i < 3; ++i)  // insertion sort ascending
        for (int j = i + 1; j > 0 && ev[j] < ev[j - 1]; --j)
            std::swap(ev[j], ev[j - 1]);
    return ev;
}

// ---------------------------------- RNG -------------------------------------

// splitmix64 step; used to derive independent per-start streams from one seed
inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t salt) {
    std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (salt + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

// xoshiro256** with splitmix64 seeding.  Self-contained so streams are
// bit-identical across platforms and standard-library versions.
struct Rng {
    std::array<std::uint64_t, 4> s{};

    explicit Rng(std::uint64_t seed) {
        std::uint64_t z = seed;
        for (auto& w : s) {
            z += 0x9e3779b97f4a7c15ULL;
            std::uint64_t x = z;
            x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
            x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
            w = x ^ (x >> 31);
        }
    }

    std::uint64_t next() {
        auto rotl = [](std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); };
        const std::uint64_t result = rotl(s[1] * 5, 7) * 9;
        const std::uint64_t t = s[1] << 17;
        s[2] ^= s[0];
        s[3] ^= s[1];
        s[1] ^= s[2];
        s[0] ^= s[3];
        s[2] ^= t;
        s[3] = rotl(s[3], 45);
        return result;
    }

    // uniform in [0, 1)
    double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    // standard normal via Box-Muller, one value per call (cached pair)
    double normal() {
        if (have_cached_) {
            have_cached_ = false;
            return cached_;
        }
        double u1 = uniform();
        while (u1 <= 0.0) u1 = uniform();
        const double u2 = uniform();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double th = 2.0 * 3.14159265358979323846 * u2;
        cached_ = r * std::sin(th);
        have_cached_ = true;
        return r * std::cos(th);
    }

  private:
    double cached_ = 0.0;
    bool have_cached_ = false;
};

}  // namespace ksdiv
