// Acceptance gate: one self-contained check per shipped guarantee, each with a
// wall-clock budget. Prints one PASS/FAIL line per check; the exit status is
// the number of failures. Seeds are fixed so reruns are bit-reproducible.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "mongeo/mongeo.hpp"
#include "oracles.hpp"

using namespace mongeo;

namespace {

using Clock = std::chrono::steady_clock;

struct Outcome {
    bool ok = false;
    std::string detail;
};

int g_failures = 0;

std::string format(const char* fmt, ...) {
    char buf[512];
    va_list ap;
    va_start(ap, fmt);
    std::vsnprintf(buf, sizeof buf, fmt, ap);
    va_end(ap);
    return buf;
}

void run(const char* label, double budget_s, const std::function<Outcome()>& body) {
    const auto t0 = Clock::now();
    Outcome out;
    try {
        out = body();
    } catch (const std::exception& ex) {
        out = {false, format("exception: %s", ex.what())};
    }
    const double elapsed = std::chrono::duration<double>(Clock::now() - t0).count();
    const bool ok = out.ok && elapsed <= budget_s;
    if (!ok) ++g_failures;
    std::printf("[%s] %-38s %s [%.2fs / %gs]\n", ok ? "PASS" : "FAIL", label,
                out.detail.c_str(), elapsed, budget_s);
    std::fflush(stdout);
}

std::vector<double> square_values(const SpaceGrid& g) {
    std::vector<double> v(g.nodes());
    for (std::size_t j = 0; j <= g.n; ++j) v[j] = g.node(j) * g.node(j);
    return v;
}

std::vector<double> mix_values(const SpaceGrid& g) {
    std::vector<double> v(g.nodes());
    for (std::size_t j = 0; j <= g.n; ++j)
        v[j] = 0.5 * (g.node(j) + g.node(j) * g.node(j));
    return v;
}

std::vector<double> small_sine(const SpaceGrid& g) {
    std::vector<double> v(g.nodes());
    for (std::size_t j = 0; j <= g.n; ++j) v[j] = 0.1 * std::sin(kPi * g.node(j));
    v.front() = v.back() = 0.0;
    return v;
}

// ---------------------------------------------------------------------------
// moving-jump fixture: gap 0.3 at 0.4, lower limit 0.2 + 0.1 t, matched
// limit velocities; the continuous part is piecewise linear with a knot.

double lo_curve(double t) { return 0.2 + 0.1 * t; }

PathGrid moving_continuous(std::size_t n, std::size_t m) {
    SpaceGrid g(n);
    TimeGrid tg(m, 1.0);
    std::vector<double> vals((m + 1) * (n + 1));
    for (std::size_t k = 0; k <= m; ++k) {
        const double lo = lo_curve(tg.node(k));
        for (std::size_t j = 0; j <= n; ++j) {
            const double x = g.node(j);
            vals[k * (n + 1) + j] =
                (x <= 0.4) ? x * lo / 0.4 : lo + (x - 0.4) * (0.7 - lo) / 0.6;
        }
    }
    return PathGrid(g, tg, std::move(vals), SliceBounds::free_upper);
}

JumpRecord moving_jump(std::size_t m) {
    TimeGrid tg(m, 1.0);
    std::vector<double> lo(m + 1), hi(m + 1);
    for (std::size_t k = 0; k <= m; ++k) {
        lo[k] = lo_curve(tg.node(k));
        hi[k] = lo[k] + 0.3;
    }
    return JumpRecord(0.4, tg, lo, hi);
}

// ---------------------------------------------------------------------------
// the twelve checks

Outcome check_interval_energy() {
    std::mt19937 rng(101);
    std::uniform_real_distribution<double> uv(-1.0, 1.0), ul(0.05, 5.0);
    double worst = 0.0;
    for (int i = 0; i < 50; ++i) {
        const double vm = uv(rng), vp = uv(rng), L = ul(rng);
        const double closed = e_sh_closed(vm, vp, 0.0, L);
        const double discrete = oracle::interval_energy(vm, vp, L, 2000);
        worst = std::max(worst,
                         std::abs(closed - discrete) / std::max(std::abs(discrete), 1e-12));
    }
    return {worst <= 1e-4, format("worst rel %.2e over 50 triples", worst)};
}

Outcome check_lift_identity() {
    std::mt19937 rng(202);
    SpaceGrid g(128);
    TimeGrid t(128, 1.0);
    double worst = 0.0;
    for (int i = 0; i < 20; ++i) {
        const PathGrid p(g, t, oracle::random_smooth_path(128, 128, rng));
        const double e = lagrangian_energy(p).total();
        worst = std::max(worst, std::abs(e - sqrt_lift_energy(p)) / (1.0 + e));
    }
    return {worst <= 1e-12, format("worst |gap|/(1+energy) %.2e on 20 paths", worst)};
}

Outcome check_hellinger_bound() {
    std::mt19937 rng(303);
    SpaceGrid g(256);
    bool bounded = true;
    double worst_ratio = 0.0;
    for (int i = 0; i < 20; ++i) {
        const MonotoneMap a(g, oracle::random_monotone_values(256, rng));
        const MonotoneMap b(g, oracle::random_monotone_values(256, rng));
        const auto rep = hellinger_report(a, b, 64);
        bounded = bounded && rep.within_bound();
        if (rep.d_squared > 1e-12)
            worst_ratio = std::max(worst_ratio,
                                   rep.energy.total() / (144.0 * rep.d_squared));
    }
    const double d2 =
        hellinger_distance_sq(MonotoneMap::identity(g), MonotoneMap(g, square_values(g)));
    const double exact = 2.0 - 4.0 * std::sqrt(2.0) / 3.0;
    const double rel = std::abs(d2 - exact) / exact;
    return {bounded && rel <= 0.005,
            format("worst energy/bound %.3f; analytic d^2 rel %.2e", worst_ratio, rel)};
}

Outcome check_gradient() {
    std::mt19937 rng(404);
    SpaceGrid g(16);
    TimeGrid t(10, 1.0);
    std::uniform_int_distribution<std::size_t> pick_k(1, t.m - 1), pick_j(1, g.n - 1);
    const double eps = 1e-6;
    double worst = 0.0;
    for (int p = 0; p < 5; ++p) {
        const auto vals = oracle::random_smooth_path(g.n, t.m, rng);
        const auto eval = discrete_action(g, t, vals);
        std::vector<std::pair<std::size_t, double>> probes(50);
        double scale = 0.0;
        for (auto& probe : probes) {
            const std::size_t idx = pick_k(rng) * (g.n + 1) + pick_j(rng);
            auto plus = vals, minus = vals;
            plus[idx] += eps;
            minus[idx] -= eps;
            const double fd = (discrete_action(g, t, plus).value -
                               discrete_action(g, t, minus).value) /
                              (2.0 * eps);
            probe = {idx, fd};
            scale = std::max(scale, std::abs(fd));
        }
        for (const auto& [idx, fd] : probes)
            worst = std::max(worst,
                             std::abs(eval.gradient[idx] - fd) / std::max(scale, 1e-12));
    }
    return {worst <= 1e-6, format("worst rel %.2e (5 paths x 50 nodes)", worst)};
}

Outcome check_metric_axioms() {
    SpaceGrid g(128);
    const auto a = MonotoneMap::identity(g);
    const MonotoneMap b(g, square_values(g));
    const MonotoneMap c(g, mix_values(g));
    const auto diag = metric_diagnostics(a, b, c, c, TimeGrid(64, 1.0), SolverOptions{});
    return {diag.ok(),
            format("sym %.2f%%, inv %.2f%%, triangle slack %.1e (tol %.1e), sup/2d %.3f",
                   100.0 * diag.symmetry_gap, 100.0 * diag.invariance_gap,
                   diag.triangle_slack, diag.tol_solver, diag.sup_ratio)};
}

Outcome check_conservation_convergence() {
    SpaceGrid g512(512);
    const auto ref = ch_evolve(g512, TimeGrid(512, 0.3), small_sine(g512));
    if (ref.blowup) return {false, "reference run tripped the slope guard"};

    const double e0 = ref.energy_trace.front();
    double drift = 0.0;
    for (double e : ref.energy_trace) drift = std::max(drift, std::abs(e - e0) / e0);

    SpaceGrid g128(128), g256(256);
    const auto r128 = ch_evolve(g128, TimeGrid(128, 0.3), small_sine(g128));
    const auto r256 = ch_evolve(g256, TimeGrid(256, 0.3), small_sine(g256));
    if (r128.blowup || r256.blowup) return {false, "coarse run tripped the slope guard"};

    const auto fin512 = ref.state_values(512);
    const auto fin256 = r256.state_values(256);
    const auto fin128 = r128.state_values(128);
    double e128 = 0.0, e256 = 0.0;
    for (std::size_t j = 0; j <= 128; ++j)
        e128 = std::max(e128, std::abs(fin128[j] - fin512[4 * j]));
    for (std::size_t j = 0; j <= 256; ++j)
        e256 = std::max(e256, std::abs(fin256[j] - fin512[2 * j]));
    const double ratio = e128 / std::max(e256, 1e-300);

    return {drift <= 1e-3 && ratio >= 3.5,
            format("drift %.2e; halving errors %.2e -> %.2e, factor %.2f", drift, e128,
                   e256, ratio)};
}

Outcome check_constant_speed() {
    SpaceGrid g(512);
    TimeGrid t(512, 0.3);
    const auto ev = ch_evolve(g, t, small_sine(g));
    if (ev.blowup) return {false, "run tripped the slope guard"};
    const auto path = integrate_flow(ev.field(), MonotoneMap::identity(g));
    const double action = lagrangian_energy(path).total();
    const double expected = t.T * ev.energy_trace.front();
    const double rel = std::abs(action - expected) / expected;
    return {rel <= 0.01,
            format("action %.6f vs T*E(0) %.6f, rel %.2e", action, expected, rel)};
}

Outcome check_certificates() {
    SpaceGrid g(64);
    const double h = g.h();

    bool zero_ok = true;
    for (double T : {0.1, 1.0, 10.0, 100.0})
        zero_ok = zero_ok &&
                  certificate_from_pressure(std::vector<double>(g.nodes(), 0.0), h, T)
                          .verdict == Certificate::Verdict::strict_minimizer;

    const double c = 0.8;
    const std::vector<double> flat(g.nodes(), c);
    const double t_star = kPi / std::sqrt(2.0 * c);
    const bool below = certificate_from_pressure(flat, h, t_star * (1.0 - 1e-6)).verdict ==
                       Certificate::Verdict::strict_minimizer;
    const bool above = certificate_from_pressure(flat, h, t_star * (1.0 + 1e-6)).verdict ==
                       Certificate::Verdict::inconclusive;

    bool decreasing = true;
    double prev = certificate_from_pressure(flat, h, 0.25).margin;
    for (double T : {0.5, 1.0, 2.0, 4.0, 8.0}) {
        const double m = certificate_from_pressure(flat, h, T).margin;
        decreasing = decreasing && m < prev;
        prev = m;
    }

    return {zero_ok && below && above && decreasing,
            format("zero-case %s; flip at T*=%.6f %s; margins %s", zero_ok ? "ok" : "BAD",
                   t_star, (below && above) ? "exact" : "BAD",
                   decreasing ? "decreasing" : "BAD")};
}

Outcome check_widen_collapse_laws() {
    std::mt19937 rng(909);
    std::uniform_real_distribution<double> jitter(-0.05, 0.05), uw(0.02, 0.25),
        ux(0.0, 1.0);
    SpaceGrid g(200);
    double worst_inv = 0.0, worst_mass = 0.0, worst_gap = 0.0;
    for (int s = 0; s < 10; ++s) {
        const std::size_t count = 1 + static_cast<std::size_t>(s % 3);
        std::vector<double> locs(count), widths(count);
        for (std::size_t i = 0; i < count; ++i) {
            locs[i] = (static_cast<double>(i) + 1.0) / (static_cast<double>(count) + 1.0) +
                      jitter(rng);
            widths[i] = uw(rng);
        }
        const JumpSpec spec(locs, widths);
        for (int i = 0; i < 100; ++i) {
            const double x = ux(rng);
            worst_inv = std::max(
                worst_inv, std::abs(stairs_function_G(spec, jump_function_F(spec, x)) - x));
        }
        std::vector<double> f(g.nodes());
        for (std::size_t j = 0; j <= g.n; ++j)
            f[j] = 1.0 + 0.5 * std::sin(2.0 * kPi * g.node(j));
        const auto rep = pushforward_check(spec, g, f);
        worst_mass = std::max(
            worst_mass, std::abs(rep.total_mass_source - rep.total_mass_pushforward));
        worst_gap = std::max(worst_gap, rep.max_gap_cell_mass);
    }
    const bool ok = worst_inv <= 1e-12 && worst_mass <= 1e-12 && worst_gap <= 1e-12;
    return {ok, format("collapse-of-widen gap %.1e; mass gap %.1e; gap-cell mass %.1e",
                       worst_inv, worst_mass, worst_gap)};
}

Outcome check_filling() {
    const std::size_t n = 200, m = 64;
    const double eps = 0.2;
    const auto cont = moving_continuous(n, m);
    const auto jump = moving_jump(m);
    const auto filled = fill_jumps(cont, {jump}, eps, n);

    double max_inc = 0.0;
    for (std::size_t k = 0; k <= m; ++k)
        for (std::size_t j = 0; j < filled.space.n; ++j)
            max_inc = std::max(max_inc, filled.at(k, j + 1) - filled.at(k, j));

    double l1 = 0.0;
    for (std::size_t k = 0; k <= m; ++k) {
        const double lo = lo_curve(filled.time.node(k));
        std::vector<double> diff(filled.space.nodes());
        for (std::size_t j = 0; j <= filled.space.n; ++j) {
            const double x = filled.space.node(j);
            const double step = ((x <= 0.4) ? x * lo / 0.4
                                            : lo + (x - 0.4) * (0.7 - lo) / 0.6) +
                                (x > 0.4 ? 0.3 : 0.0);
            diff[j] = std::abs(filled.at(k, j) - step);
        }
        l1 = std::max(l1, trapezoid(diff, filled.space.h()));
    }

    const double relaxed = relaxed_energy(cont, {jump}).total();
    const double direct = lagrangian_energy(filled).total();
    const double rel = std::abs(direct - relaxed) / relaxed;

    const bool ok = max_inc <= 3.0 * filled.space.h() && l1 <= eps && rel <= 0.01;
    return {ok, format("max increment %.2fh; worst L1 %.3f (eps %.2g); energy rel %.2e",
                       max_inc / filled.space.h(), l1, eps, rel)};
}

Outcome check_collapse_flow() {
    const std::size_t n = 4096, m = 2048;
    SpaceGrid space(n);
    TimeGrid time(m, 0.75);
    const auto profile = collapse_field(CollapseKind::to_half);
    const auto field = VelocityField::autonomous(space, time, profile.sample(space));
    const auto path = integrate_flow(field, MonotoneMap::identity(space));

    const double exact = CollapseField::arrival_time(0.75);
    double measured = time.T;
    for (std::size_t k = 0; k <= m; ++k)
        if (std::abs(path.at(k, 3 * n / 4) - 0.5) <= 2.5e-4) {
            measured = time.node(k);
            break;
        }
    const double rel = std::abs(measured - exact) / exact;

    double stationary_drift = 0.0;
    for (std::size_t k = 0; k <= m; ++k)
        stationary_drift =
            std::max(stationary_drift, std::abs(path.at(k, n / 2) - 0.5));

    return {rel <= 0.02 && stationary_drift == 0.0,
            format("arrival %.4f vs %.4f (rel %.2e); stationary drift %.1e", measured,
                   exact, rel, stationary_drift)};
}

Outcome check_peakon_collision() {
    SpaceGrid g(512);
    TimeGrid t(1024, 1.0);
    const auto ev = ch_evolve(g, t, peakon_pair_profile(g, 0.6, 0.05));
    if (!ev.blowup) return {false, "slope guard never tripped"};

    const auto path = integrate_flow(ev.field(), MonotoneMap::identity(g));
    double min_density = 1e300;
    for (std::size_t j = 0; j < g.n; ++j)
        min_density = std::min(min_density, (path.at(ev.steps_completed, j + 1) -
                                             path.at(ev.steps_completed, j)) /
                                                g.h());
    return {min_density < 0.05,
            format("guard at step %zu of %zu; min density %.2e", ev.blowup_step, t.m,
                   min_density)};
}

} // namespace

int main() {
    std::printf("acceptance gate: 12 checks\n");
    run("interval energy closed form", 5.0, check_interval_energy);
    run("square-root lift identity", 5.0, check_lift_identity);
    run("explicit interpolation bound", 10.0, check_hellinger_bound);
    run("action gradient vs finite differences", 10.0, check_gradient);
    run("metric axioms at solver tolerance", 120.0, check_metric_axioms);
    run("conservation and self-convergence", 30.0, check_conservation_convergence);
    run("constant-speed consistency", 30.0, check_constant_speed);
    run("certificate horizon behavior", 5.0, check_certificates);
    run("widen/collapse inverse laws", 2.0, check_widen_collapse_laws);
    run("jump filling fidelity", 30.0, check_filling);
    run("collapse flow non-uniqueness", 5.0, check_collapse_flow);
    run("peakon collision diagnostic", 60.0, check_peakon_collision);
    std::printf("summary: %d of 12 passed\n", 12 - g_failures);
    return g_failures;
}
