// acceptance.cpp: end-to-end checks of the library's headline guarantees.
// Runs all ten criteria, or a single one named by its number on the command
// line, and prints exactly one PASS/FAIL line per criterion.  Exit code 0
// only when every criterion that ran passed.

#include <chrono>
#include <cstdarg>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <string>

#include "ksdiv/commands.hpp"
#include "test_support.hpp"

using namespace ksdiv;
using maps::PauliDiagonalMap;
using maps::QubitMap;
using maps::Verdict;
using pauli::QubitOperator;
using pauli::sigma;

namespace {

struct Outcome {
    bool pass = false;
    std::string detail;
};

std::string fmt(const char* spec, ...) {
    char buf[512];
    va_list ap;
    va_start(ap, spec);
    std::vsnprintf(buf, sizeof buf, spec, ap);
    va_end(ap);
    return buf;
}

struct Timer {
    std::chrono::steady_clock::time_point t0 = std::chrono::steady_clock::now();
    double s() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    }
};

generators::RateFunctions eternal_rates() {
    generators::RateFunctions r;
    r.gamma = {generators::RateFunction::constant(1.0), generators::RateFunction::constant(1.0),
               generators::RateFunction::tanh_scaled(-1.0, 1.0)};
    return r;
}

generators::RateFunctions softened_rates() {
    generators::RateFunctions r;
    r.gamma = {generators::RateFunction::constant(1.0), generators::RateFunction::constant(1.0),
               generators::RateFunction::tanh_scaled(-0.5, 1.0)};
    return r;
}

// 1. The signed-mixture map that is positive but not KS: at X = |1><2| the
//    dissipativity defect is exactly diag(1, -1), and the witness search
//    certifies a violation with margin -1.
Outcome criterion1() {
    Timer tm;
    const QubitMap m = PauliDiagonalMap{{1.0, 1.0, -1.0}}.to_map();
    const Mat2 x = pauli::unit_matrix(0, 1);
    const Mat2 xd = adjoint(x);
    const Mat2 d = maps::apply(m, QubitOperator(xd * x)).m -
                   maps::apply(m, QubitOperator(xd)).m * maps::apply(m, QubitOperator(x)).m;
    const Mat2 expect = pauli::unit_matrix(0, 0) - pauli::unit_matrix(1, 1);
    const double defect = max_abs_diff(d, expect);

    const maps::KSReport rep = maps::ks_witness_search(m, true, 42, 2000);
    const bool ok = defect <= 1e-14 && rep.verdict == Verdict::VIOLATION &&
                    rep.margin <= -1.0 + 1e-6 && tm.s() < 1.0;
    return {ok, fmt("matrix defect %.2e, search margin %.9f after %llu evaluations, %.2f s",
                    defect, rep.margin, (unsigned long long)rep.evaluations, tm.s())};
}

// 2. Closed-form KS region: equality at the CP-triangle vertices and the
//    identity, strict failure at the three signed corners, full-resolution
//    region scan within its time budget.
Outcome criterion2() {
    Timer tm;
    double worst_eq = 0.0;
    for (const std::array<double, 3>& q :
         {std::array<double, 3>{1, 0, 0}, {0, 1, 0}, {0, 0, 1}, {1, 1, 1}})
        worst_eq = std::max(worst_eq, std::abs(maps::ks_closed_form_diag(q).margin));

    bool corners_ok = true;
    for (const std::array<double, 3>& q :
         {std::array<double, 3>{1, 1, -1}, {1, -1, 1}, {-1, 1, 1}}) {
        const auto cf = maps::ks_closed_form_diag(q);
        corners_ok = corners_ok && maps::is_positive_diag(q) && !cf.certified &&
                     !cf.general_certified;
    }

    cli::RunConfig rc;
    rc.region_slice = true;
    rc.resolution = 201;
    rc.out_csv = true;
    rc.out_svg = true;
    const auto out = std::filesystem::temp_directory_path() / "ksdiv_accept_region";
    std::filesystem::create_directories(out);
    Timer scan;
    cli::cmd_region_scan(rc, out.string());
    const double scan_s = scan.s();

    const bool ok = worst_eq <= 1e-12 && corners_ok && scan_s < 10.0;
    return {ok, fmt("equality slack %.2e at 4 points, signed corners positive-not-KS: %s, "
                    "201x201 scan in %.2f s",
                    worst_eq, corners_ok ? "yes" : "no", scan_s)};
}

// 3. Eternal model: mixture weights match their closed forms, every scanned
//    propagator is positive, KS-divisibility ends at artanh(1/2).
Outcome criterion3() {
    const auto rf = eternal_rates();
    const auto probe = dynamics::accumulate_rates(rf, {0.0, 0.1, 1.0, 10.0});
    double dev = 0.0;
    for (std::size_t i = 0; i < probe.times.size(); ++i) {
        const double e = std::exp(-2.0 * probe.times[i]);
        dev = std::max({dev, std::abs(probe.p[i][0] - 0.5 * (1.0 + e)),
                        std::abs(probe.p[i][1] - 0.25 * (1.0 - e)),
                        std::abs(probe.p[i][2] - 0.25 * (1.0 - e)), std::abs(probe.p[i][3])});
    }

    const auto tr = dynamics::accumulate_rates(rf, dynamics::uniform_grid(5.0, 101));
    const auto rep = dynamics::divisibility_scan(tr, 42, 200);
    std::size_t positive = 0;
    for (const auto& pv : rep.pairs)
        if (pv.positive) ++positive;

    const double target = 0.5 * std::log(3.0);
    const double ks_err = std::abs(rep.generator_level.ks_loss - target);
    const bool ok = dev <= 1e-9 && positive == rep.pairs.size() &&
                    std::isinf(rep.generator_level.p_loss) && ks_err <= 1e-6;
    return {ok, fmt("weight deviation %.1e, %zu/%zu pairs positive, KS lost at %.9f "
                    "(target %.9f, err %.1e)",
                    dev, positive, rep.pairs.size(), rep.generator_level.ks_loss, target, ks_err)};
}

// 4. Softened model: p3 stays a nonnegative weight matching its closed form,
//    all rate margins nonnegative, CPTP across [0, 10].
Outcome criterion4() {
    const auto rf = softened_rates();
    const auto grid = dynamics::uniform_grid(10.0, 201);
    const auto tr = dynamics::accumulate_rates(rf, grid);
    double p3_min = 0.0, p3_dev = 0.0, margin_min = 1e300, weight_min = 0.0;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const double t = grid[i];
        const double closed = 0.5 * std::exp(-t) * (std::cosh(t) - std::sqrt(std::cosh(t)));
        p3_min = std::min(p3_min, tr.p[i][3]);
        p3_dev = std::max(p3_dev, std::abs(tr.p[i][3] - closed));
        for (double w : tr.p[i]) weight_min = std::min(weight_min, w);
        const auto v = generators::classify_rates(rf.at(t));
        for (double km : v.ks_margins) margin_min = std::min(margin_min, km);
    }
    const bool ok = p3_min >= -1e-12 && p3_dev <= 1e-9 && margin_min >= -1e-12 &&
                    weight_min >= -1e-12;
    return {ok, fmt("p3 min %.1e (closed-form dev %.1e), rate margin min %.2e, "
                    "smallest Choi weight %.1e over 201 nodes",
                    p3_min, p3_dev, margin_min, weight_min)};
}

// 5. Fixed-step integration against the closed-form transfer matrices for all
//    three reference models at h = 1e-3 over [0, 5].
Outcome criterion5() {
    double dev[3] = {0.0, 0.0, 0.0};
    double secs[3] = {0.0, 0.0, 0.0};

    int slot = 0;
    for (const auto& rf : {eternal_rates(), softened_rates()}) {
        Timer tm;
        const auto gen = [&rf](double t) { return generators::pauli_generator(rf.at(t)); };
        const auto ev = dynamics::integrate_master_equation(gen, 5.0, 1e-3);
        for (std::size_t i = 0; i < ev.states.size(); ++i) {
            const auto g = rf.accumulated(double(i) * ev.h);
            const Mat4 exact = Mat4::diagonal(1.0, std::exp(-g[1] - g[2]),
                                              std::exp(-g[2] - g[0]), std::exp(-g[0] - g[1]));
            dev[slot] = std::max(dev[slot], testsup::mat4_diff(ev.states[i].t, exact));
        }
        secs[slot] = tm.s();
        ++slot;
    }

    {
        Timer tm;
        const dynamics::AmplitudeDampingSpec spec(
            [](double t) { return cplx(std::exp(-0.5 * t), 0.0); });
        Mat4 l;
        l(1, 1) = -0.5;
        l(2, 2) = -0.5;
        l(3, 0) = 1.0;
        l(3, 3) = -1.0;
        const QubitMap constant_gen(l);
        const auto ev = dynamics::integrate_master_equation(
            [&constant_gen](double) { return constant_gen; }, 5.0, 1e-3);
        for (std::size_t i = 0; i < ev.states.size(); ++i) {
            const Mat4 exact = dynamics::damping_map(spec, double(i) * ev.h).map.t;
            dev[2] = std::max(dev[2], testsup::mat4_diff(ev.states[i].t, exact));
        }
        secs[2] = tm.s();
    }

    const double worst = std::max({dev[0], dev[1], dev[2]});
    const double slowest = std::max({secs[0], secs[1], secs[2]});
    const bool ok = worst < 1e-6 && slowest < 5.0;
    return {ok, fmt("deviation: eternal %.1e, softened %.1e, damping %.1e; slowest model %.2f s",
                    dev[0], dev[1], dev[2], slowest)};
}

// 6. Sign conditions versus the numeric dissipativity search on 1000 seeded
//    constant-rate triples away from the margin boundary.
Outcome criterion6() {
    Timer tm;
    Rng rng(42);
    int mismatches = 0, checked = 0;
    int alt_mismatches = 0;  // pair sums >= 0 and e2 = g1g2 + g2g3 + g3g1 >= 0
    std::string example;
    while (checked < 1000) {
        const std::array<double, 3> g{rng.uniform(-1.0, 2.0), rng.uniform(-1.0, 2.0),
                                      rng.uniform(-1.0, 2.0)};
        if (g[0] + g[1] + g[2] <= 0.1) continue;
        const auto v = generators::classify_rates(g);
        double band = 1e300;
        for (double km : v.ks_margins) band = std::min(band, std::abs(km));
        if (band < 1e-3) continue;
        ++checked;

        const auto rep = generators::dissipativity_numeric(
            generators::pauli_generator(g), 1000 + std::uint64_t(checked), 400);
        const bool numeric_ks = rep.verdict != Verdict::VIOLATION;
        if (numeric_ks != v.ks_divisible_now) {
            ++mismatches;
            if (example.empty())
                example = fmt("; e.g. (%.3f, %.3f, %.3f) sign margins say %s, numeric margin %.2e",
                              g[0], g[1], g[2], v.ks_divisible_now ? "yes" : "no", rep.margin);
        }
        const double e2 = g[0] * g[1] + g[1] * g[2] + g[2] * g[0];
        const double pair_min = std::min({v.pair_sums[0], v.pair_sums[1], v.pair_sums[2]});
        const bool alt = pair_min >= 0.0 && e2 >= 0.0;
        if (std::min(std::abs(e2), pair_min < 0.0 ? -pair_min : pair_min) > 1e-3 &&
            alt != numeric_ks)
            ++alt_mismatches;
    }
    const bool ok = mismatches == 0 && tm.s() < 60.0;
    return {ok, fmt("%d/1000 disagree with the pairwise-margin conditions%s; "
                    "pair-sum + e2 form disagrees on %d; %.1f s",
                    mismatches, example.c_str(), alt_mismatches, tm.s())};
}

// 7. KS-2 at the adjoint witness forces the dissipativity form: on maps drawn
//    around the CPTP manifold, a nonnegative KS-2 margin at X+ implies a
//    qks margin at X above -1e-10.
Outcome criterion7() {
    Rng rng(29);
    int accepted = 0;
    int exceptions = 0;
    double worst = 1e300;
    for (int it = 0; it < 20000 && accepted < 1000; ++it) {
        const QubitMap m = maps::compose(
            testsup::random_rotation(rng),
            maps::compose(
                testsup::damping_like(cplx(rng.uniform(0.3, 0.95), rng.uniform(-0.2, 0.2))),
                maps::compose(PauliDiagonalMap{testsup::random_q(rng, -1.1, 1.1)}.to_map(),
                              testsup::random_rotation(rng))));
        const QubitOperator x = testsup::random_operator(rng);
        const QubitOperator xdag(adjoint(x.m));
        double ks2_at_adjoint;
        try {
            ks2_at_adjoint = maps::ks2_check(m, xdag);
        } catch (const std::invalid_argument&) {
            continue;
        }
        if (ks2_at_adjoint < 0.0) continue;
        ++accepted;
        const double q = maps::qks_check(m, x);
        worst = std::min(worst, q);
        if (q < -1e-10) ++exceptions;
    }
    const bool ok = accepted == 1000 && exceptions == 0;
    return {ok, fmt("%d pairs with KS-2 margin >= 0 at the adjoint witness, %d exceptions, "
                    "smallest qks margin %.2e",
                    accepted, exceptions, worst)};
}

// 8. Relaxation-time caps for KS triples with a negative third rate.
Outcome criterion8() {
    Rng rng(7);
    int accepted = 0;
    double worst = 1e300;
    while (accepted < 100) {
        const std::array<double, 3> g{rng.uniform(0.0, 2.0), rng.uniform(0.0, 2.0),
                                      rng.uniform(-1.0, 0.0)};
        if (g[2] >= 0.0) continue;
        const auto v = generators::classify_rates(g);
        if (!v.ks_divisible_now) continue;
        if (std::min({v.pair_sums[0], v.pair_sums[1], v.pair_sums[2]}) <= 0.0) continue;
        ++accepted;
        const auto rt = generators::relaxation_times(g);
        const double cap12 = 1.0 / std::abs(g[2]);
        const double cap3 = 0.25 / std::abs(g[2]);
        worst = std::min({worst, cap12 - rt.t1, cap12 - rt.t2, cap3 - rt.t3});
    }
    const bool ok = worst >= -1e-12;
    return {ok, fmt("100 KS triples with g3 < 0, smallest cap slack %.2e", worst)};
}

// 9. Trace-distance monotonicity: flat for the eternal model, strictly
//    growing along the direction whose pair sum is negative.
Outcome criterion9() {
    const auto grid = dynamics::uniform_grid(5.0, 101);
    const auto rf = eternal_rates();
    const auto lam = [&rf](double t) {
        const auto g = rf.accumulated(t);
        return QubitMap(Mat4::diagonal(1.0, std::exp(-g[1] - g[2]), std::exp(-g[2] - g[0]),
                                       std::exp(-g[0] - g[1])));
    };
    double flat = -1e300;
    for (int k = 1; k <= 3; ++k)
        flat = std::max(flat, dynamics::blp_monotonicity(lam, QubitOperator(sigma(k)), grid));

    const auto growing = [](double t) {
        const std::array<double, 3> g{-1.0, 0.4, 0.4};
        return QubitMap(Mat4::diagonal(1.0, std::exp(-(g[1] + g[2]) * t),
                                       std::exp(-(g[2] + g[0]) * t),
                                       std::exp(-(g[0] + g[1]) * t)));
    };
    const double grow = dynamics::blp_monotonicity(growing, QubitOperator(sigma(2)), grid);

    const bool ok = flat <= 1e-8 && grow > 1e-6;
    return {ok, fmt("eternal-model max derivative %.1e, pair-sum-negative direction %.3f", flat,
                    grow)};
}

// 10. Scalar inequality sqrt(xy) <= (a x + b y)/2 on (0, 10]^2: numeric
//     infimum per (a, b) grid point versus the rectangular region
//     {a >= 1 and b >= 1}.
Outcome criterion10() {
    // per ray y = r x the infimum over the box is min(0, x_max(r) g(r)) with
    // g(r) = (a + b r)/2 - sqrt(r); dense log grid in r plus golden polish
    const auto box_inf = [](double a, double b) {
        const auto ray = [&](double lr) {
            const double r = std::exp(lr);
            const double g = 0.5 * (a + b * r) - std::sqrt(r);
            return std::min(0.0, 10.0 * std::min(1.0, 1.0 / r) * g);
        };
        const double lo = std::log(1e-6), hi = std::log(1e6);
        double best = 0.0, best_lr = 0.0;
        const int n = 2400;
        for (int i = 0; i <= n; ++i) {
            const double lr = lo + (hi - lo) * i / n;
            const double v = ray(lr);
            if (v < best) {
                best = v;
                best_lr = lr;
            }
        }
        if (best == 0.0) return 0.0;
        double gl = best_lr - (hi - lo) / n, gr = best_lr + (hi - lo) / n;
        const double phi = 0.5 * (std::sqrt(5.0) - 1.0);
        double m1 = gr - phi * (gr - gl), m2 = gl + phi * (gr - gl);
        for (int it = 0; it < 80; ++it) {
            if (ray(m1) <= ray(m2)) {
                gr = m2;
                m2 = m1;
                m1 = gr - phi * (gr - gl);
            } else {
                gl = m1;
                m1 = m2;
                m2 = gl + phi * (gr - gl);
            }
        }
        return std::min(best, ray(0.5 * (gl + gr)));
    };

    int mismatches = 0, off_band = 0, product_mismatches = 0;
    std::string example;
    for (int i = 1; i <= 40; ++i) {
        for (int j = 1; j <= 40; ++j) {
            const double a = 0.05 * i, b = 0.05 * j;
            if (std::abs(a - 1.0) <= 1e-3 || std::abs(b - 1.0) <= 1e-3) continue;
            ++off_band;
            const double inf = box_inf(a, b);
            const bool valid = inf >= -1e-9;
            const bool rect = a >= 1.0 - 1e-9 && b >= 1.0 - 1e-9;
            if (valid != rect) {
                ++mismatches;
                if (example.empty())
                    example = fmt("; e.g. (%.2f, %.2f): infimum %.2e but rectangle says %s", a,
                                  b, inf, rect ? "valid" : "invalid");
            }
            if (valid != (a * b >= 1.0 - 1e-9)) ++product_mismatches;
        }
    }
    const bool ok = mismatches == 0;
    return {ok, fmt("%d/%d off-band points disagree with {a >= 1 and b >= 1}%s; "
                    "{a*b >= 1} disagrees on %d",
                    mismatches, off_band, example.c_str(), product_mismatches)};
}

}  // namespace

int main(int argc, char** argv) {
    using Fn = Outcome (*)();
    const Fn criteria[10] = {criterion1, criterion2, criterion3, criterion4, criterion5,
                             criterion6, criterion7, criterion8, criterion9, criterion10};
    int lo = 1, hi = 10;
    if (argc > 1) {
        const int n = std::atoi(argv[1]);
        if (n < 1 || n > 10) {
            std::fprintf(stderr, "usage: %s [criterion 1-10]\n", argv[0]);
            return 2;
        }
        lo = hi = n;
    }
    int failures = 0;
    for (int n = lo; n <= hi; ++n) {
        Outcome o;
        try {
            o = criteria[n - 1]();
        } catch (const std::exception& e) {
            o = {false, std::string("unhandled exception: ") + e.what()};
        }
        std::printf("criterion %d: %s - %s\n", n, o.pass ? "PASS" : "FAIL", o.detail.c_str());
        if (!o.pass) ++failures;
    }
    return failures == 0 ? 0 : 1;
}
