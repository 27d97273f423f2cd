// test_maps.cpp: transfer-matrix calculus, Choi positivity, and the
// closed-form KS certificates with their closure properties.

#include <catch2/catch_amalgamated.hpp>

#include "ksdiv/maps.hpp"
#include "test_support.hpp"

using namespace ksdiv;
using namespace ksdiv::maps;
using pauli::QubitOperator;
using testsup::random_matrix;
using testsup::random_mixture;
using testsup::random_operator;
using testsup::random_q;

TEST_CASE("transfer matrices of reference maps") {
    const QubitMap id = QubitMap::identity();
    REQUIRE(is_trace_preserving(id));
    REQUIRE(is_unital(id));

    // the signed mixture with weights (1, 1, -1) flips sigma_3 and swaps the
    // diagonal projectors; transposition up to a change of basis
    const QubitMap tp = PauliDiagonalMap{{1.0, 1.0, -1.0}}.to_map();
    const Mat2 e11 = pauli::unit_matrix(1, 1);
    REQUIRE(max_abs_diff(apply(tp, QubitOperator(e11)).m, pauli::unit_matrix(0, 0)) < 1e-15);
    Mat2 tp_sigma3 = apply(tp, QubitOperator(pauli::sigma(3))).m;
    REQUIRE(max_abs_diff(tp_sigma3, cplx(-1.0, 0.0) * pauli::sigma(3)) < 1e-15);
}

TEST_CASE("apply is complex-linear over the real transfer matrix") {
    Rng rng(21);
    for (int it = 0; it < 50; ++it) {
        std::array<double, 3> q = random_q(rng);
        const QubitMap m = PauliDiagonalMap{q}.to_map();
        const QubitOperator x = random_operator(rng);
        const QubitOperator y = random_operator(rng);
        const cplx s(rng.normal(), rng.normal());
        const Mat2 lhs = apply(m, QubitOperator(s * x.m + y.m)).m;
        const Mat2 rhs = s * apply(m, x).m + apply(m, y).m;
        REQUIRE(max_abs_diff(lhs, rhs) < 1e-12);
    }
}

TEST_CASE("duality: transpose pairs the map with its adjoint") {
    Rng rng(22);
    for (int it = 0; it < 50; ++it) {
        Mat4 t;
        for (int r = 0; r < 4; ++r)
            for (int c = 0; c < 4; ++c) t(r, c) = rng.normal();
        const QubitMap m(t);
        const QubitMap md = dual(m);
        // tr(X Phi(Y)) = tr(Phi#(X) Y)
        const QubitOperator x = random_operator(rng);
        const QubitOperator y = random_operator(rng);
        const cplx lhs = trace(x.m * apply(m, y).m);
        const cplx rhs = trace(apply(md, x).m * y.m);
        REQUIRE(std::abs(lhs - rhs) < 1e-11);
        // involution, bit for bit
        const QubitMap mdd = dual(md);
        REQUIRE(testsup::mat4_diff(mdd.t, m.t) == 0.0);
    }
    // TP <-> unital under duality
    const QubitMap damp = testsup::damping_like(cplx(0.8, 0.1));
    REQUIRE(is_trace_preserving(damp));
    REQUIRE_FALSE(is_unital(damp));
    REQUIRE(is_unital(dual(damp)));
    REQUIRE_FALSE(is_trace_preserving(dual(damp)));
}

TEST_CASE("mixture weights and eigenvalues are inverse transforms") {
    // p = (1/2, 1/2, 0, 0) averages identity and sigma_1 conjugation
    const auto l = mixture_to_eigenvalues({0.5, 0.5, 0.0, 0.0});
    REQUIRE(l[0] == Catch::Approx(1.0).margin(1e-15));
    REQUIRE(l[1] == Catch::Approx(0.0).margin(1e-15));
    REQUIRE(l[2] == Catch::Approx(0.0).margin(1e-15));

    Rng rng(23);
    for (int it = 0; it < 100; ++it) {
        const auto p = random_mixture(rng);
        const auto lam = mixture_to_eigenvalues(p);
        const auto back = eigenvalues_to_mixture(lam);
        for (int k = 0; k < 4; ++k) REQUIRE(back[k] == Catch::Approx(p[k]).margin(1e-13));
    }
}

TEST_CASE("composition and inversion act on transfer matrices") {
    Rng rng(24);
    for (int it = 0; it < 30; ++it) {
        const QubitMap a = PauliDiagonalMap{random_q(rng, 0.2, 1.0)}.to_map();
        const QubitMap b = testsup::random_rotation(rng);
        const QubitMap ab = compose(a, b);
        const QubitOperator x = random_operator(rng);
        REQUIRE(max_abs_diff(apply(ab, x).m, apply(a, apply(b, x)).m) < 1e-12);
        const QubitMap inv = invert(ab);
        REQUIRE(testsup::mat4_diff(compose(ab, inv).t, Mat4::identity()) < 1e-10);
    }
    REQUIRE_THROWS_AS(invert(PauliDiagonalMap{{0.5, 0.0, 0.5}}.to_map()), std::runtime_error);
}

TEST_CASE("Choi spectrum of a Pauli mixture is the weight vector") {
    // Choi of the identity is the maximally entangled projector
    const auto ev_id = eigvals_hermitian(choi_matrix(QubitMap::identity()));
    REQUIRE(ev_id[0] == Catch::Approx(0.0).margin(1e-12));
    REQUIRE(ev_id[1] == Catch::Approx(0.0).margin(1e-12));
    REQUIRE(ev_id[2] == Catch::Approx(0.0).margin(1e-12));
    REQUIRE(ev_id[3] == Catch::Approx(1.0).margin(1e-12));

    Rng rng(25);
    for (int it = 0; it < 50; ++it) {
        // allow signed weights: spectrum tracks them through the same transform
        std::array<double, 4> p{};
        double s = 0.0;
        for (double& v : p) {
            v = rng.uniform(-0.3, 1.0);
            s += v;
        }
        for (double& v : p) v /= s;
        auto ev = eigvals_hermitian(choi_matrix(mixture_to_map(PauliMixtureMap{p})));
        std::array<double, 4> ps = p;
        std::sort(ps.begin(), ps.end());
        for (int k = 0; k < 4; ++k) REQUIRE(ev[k] == Catch::Approx(ps[k]).margin(1e-10));
    }

    REQUIRE_FALSE(is_cp(PauliDiagonalMap{{1.0, 1.0, -1.0}}.to_map()));
    REQUIRE(is_cp(PauliDiagonalMap{{1.0 / 3, 1.0 / 3, 1.0 / 3}}.to_map()));
}

TEST_CASE("closed-form KS certificate: reference points") {
    // CP-triangle vertices and the identity sit exactly on the boundary
    for (const auto& q : {std::array<double, 3>{1, 0, 0}, {0, 1, 0}, {0, 0, 1}, {1, 1, 1}}) {
        const KSClosedForm r = ks_closed_form_diag(q);
        REQUIRE(r.certified);
        REQUIRE(r.general_certified);
        REQUIRE(std::abs(r.margin) <= 1e-12);
    }
    // positivity-triangle vertices are positive but not KS
    for (const auto& q : {std::array<double, 3>{1, 1, -1}, {1, -1, 1}, {-1, 1, 1}}) {
        REQUIRE(is_positive_diag(q));
        const KSClosedForm r = ks_closed_form_diag(q);
        REQUIRE_FALSE(r.certified);
        REQUIRE_FALSE(r.general_certified);
    }
    REQUIRE(ks_closed_form_diag({0.9, 0.9, 0.9}).certified);
    REQUIRE_THROWS_AS(ks_closed_form_diag({1.2, 0.0, 0.0}), std::invalid_argument);
}

TEST_CASE("certificate hierarchy on random diagonal maps") {
    Rng rng(26);
    int n_cp = 0, n_ks = 0;
    for (int it = 0; it < 2000; ++it) {
        const auto q = random_q(rng);
        const KSClosedForm r = ks_closed_form_diag(q);
        const auto p = eigenvalues_to_mixture(q);
        const bool cp = *std::min_element(p.begin(), p.end()) >= -1e-10;
        n_cp += cp;
        n_ks += r.certified;
        if (cp) REQUIRE(r.certified);  // cp implies ks
        REQUIRE(r.certified == r.general_certified);
    }
    // both regions are hit with real frequency
    REQUIRE(n_cp > 100);
    REQUIRE(n_ks > n_cp);
}

TEST_CASE("certified diagonal maps are closed under products and mixtures") {
    Rng rng(27);
    int used = 0;
    for (int it = 0; it < 20000 && used < 5000; ++it) {
        const auto a = random_q(rng);
        const auto b = random_q(rng);
        if (!ks_closed_form_diag(a).certified || !ks_closed_form_diag(b).certified) continue;
        ++used;
        const std::array<double, 3> prod{a[0] * b[0], a[1] * b[1], a[2] * b[2]};
        REQUIRE(ks_closed_form_diag(prod).certified);
        const double w = rng.uniform();
        std::array<double, 3> mix{};
        for (int k = 0; k < 3; ++k) mix[k] = w * a[k] + (1.0 - w) * b[k];
        REQUIRE(ks_closed_form_diag(mix).certified);
    }
    REQUIRE(used == 5000);
}

TEST_CASE("KS inequality margins for the identity and for CP maps") {
    Rng rng(28);
    const QubitMap id = QubitMap::identity();
    for (int it = 0; it < 50; ++it) {
        // identity: Phi(XX+) - Phi(X)Phi(X+) vanishes identically
        const QubitOperator x = random_operator(rng);
        REQUIRE(std::abs(ks_check(id, x)) < 1e-11);
    }
    // CPTP unital: KS margin nonnegative on every operator
    const QubitMap dep = PauliDiagonalMap{{0.4, 0.4, 0.4}}.to_map();
    for (int it = 0; it < 300; ++it)
        REQUIRE(ks_check(dep, random_operator(rng)) >= -1e-10);
    // CPTP non-unital: KS-2 margin nonnegative
    const QubitMap damp = testsup::damping_like(cplx(0.7, 0.2));
    for (int it = 0; it < 300; ++it)
        REQUIRE(ks2_check(damp, random_operator(rng)) >= -1e-10);
}

TEST_CASE("KS-2 implies the dissipativity form at the adjoint witness") {
    // Phi(X+X) - Phi(X+)X - X+Phi(X) + X+Phi(1)X >= 0 whenever the KS-2
    // operator at X+ is PSD; checked over mixed CP and non-CP samples
    Rng rng(29);
    int accepted = 0, hermitian_accepted = 0;
    for (int it = 0; it < 4000 && accepted < 1000; ++it) {
        const QubitMap m =
            compose(testsup::random_rotation(rng),
                    compose(testsup::damping_like(cplx(rng.uniform(0.3, 0.95), rng.uniform(-0.2, 0.2))),
                            compose(PauliDiagonalMap{random_q(rng, -1.1, 1.1)}.to_map(),
                                    testsup::random_rotation(rng))));
        const QubitOperator x = random_operator(rng);
        const QubitOperator xdag(adjoint(x.m));
        double ks2_at_adjoint;
        try {
            ks2_at_adjoint = ks2_check(m, xdag);
        } catch (const std::invalid_argument&) {
            continue;  // image of identity not positive definite
        }
        if (ks2_at_adjoint < 0.0) continue;
        ++accepted;
        REQUIRE(qks_check(m, x) >= -1e-10);
        // hermitian witnesses make the implication a same-argument statement
        const QubitOperator h(cplx(0.5, 0.0) * (x.m + adjoint(x.m)));
        if (ks2_check(m, h) >= 0.0) {
            ++hermitian_accepted;
            REQUIRE(qks_check(m, h) >= -1e-10);
        }
    }
    REQUIRE(accepted == 1000);
    REQUIRE(hermitian_accepted > 200);
}
