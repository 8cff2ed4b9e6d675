// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any failure.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <limits>
#include <random>
#include <string>

#include "mosk/mosk.hpp"

using namespace mosk;

namespace {

int failures = 0;

void report(int n, bool ok, const std::string& what, const std::string& detail) {
    std::printf("%s %d %s [%s]\n", ok ? "PASS" : "FAIL", n, what.c_str(), detail.c_str());
    std::fflush(stdout);
    if (!ok) ++failures;
}

std::string fmt(const char* f, double a) {
    char buf[128];
    std::snprintf(buf, sizeof buf, f, a);
    return buf;
}

std::string fmt(const char* f, double a, double b) {
    char buf[160];
    std::snprintf(buf, sizeof buf, f, a, b);
    return buf;
}

Point random_point(std::mt19937_64& rng, std::size_t dim, double r) {
    std::uniform_real_distribution<double> u(-r, r);
    Point p = Point::zeros(dim);
    for (std::size_t i = 0; i < dim; ++i) p[i] = u(rng);
    return p;
}

template <class F>
void guarded(int n, const std::string& what, F&& body) {
    try {
        body();
    } catch (const std::exception& e) {
        report(n, false, what, std::string("exception: ") + e.what());
    }
}

void cardano() {
    guarded(1, "Cardano resolvent identity", [] {
        const auto start = std::chrono::steady_clock::now();
        double worst = 0.0;
        for (int i = 0; i < 10000; ++i) {
            const double x = -1000.0 + 2000.0 * i / 9999.0;
            const double j = gallery::cubic_resolvent(x);
            worst = std::max(worst, std::abs(j + j * j * j - x));
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        report(1, worst <= 1e-10 && secs < 1.0, "Cardano resolvent identity",
               fmt("max residual %.3g, %.3g s", worst, secs));
    });
}

void staircase_witnesses() {
    guarded(2, "staircase SSNE witnesses", [] {
        double worst = 0.0;
        for (int n = 1; n <= 20; ++n) {
            const auto w = gallery::staircase_witnesses(n);
            worst = std::max(worst, std::abs(w.square_deficit / std::ldexp(1.0, -2 * n) - 1.0));
        }
        const double g30 = gallery::staircase_witnesses(30).gap_norm;
        report(2, worst <= 1e-9 && std::abs(g30 - 1.0) <= 1e-6, "staircase SSNE witnesses",
               fmt("max rel err of d_n %.3g, g_30 = %.12g", worst, g30));
    });
}

void staircase_regions() {
    guarded(3, "staircase per-region contraction", [] {
        const auto& p = gallery::staircase_params();
        bool ok = true;
        double worst_gap = -std::numeric_limits<double>::infinity();
        for (std::size_t m = 1; m <= 8; ++m) {
            SamplerConfig cfg;
            cfg.box_low = Point({-p.a(m) - 1.0, -10.0});
            cfg.box_high = Point({p.a(m), 10.0});
            cfg.sample_count = 10000;
            cfg.seed = 100 + m;
            const auto c = certify_lipschitz(gallery::staircase_map(), cfg);
            const double gap = c.estimates[0].value - p.beta(m);
            worst_gap = std::max(worst_gap, gap);
            ok = ok && gap <= 1e-9;
        }
        report(3, ok, "staircase per-region contraction", fmt("max(ratio - beta_m) = %.3g", worst_gap));
    });
}

void clamp_sin_cld() {
    guarded(4, "clamp-sin CLD profile", [] {
        const auto c = certify_cld(gallery::clamp_sin_map(), {0.01, 0.1, 1.0, 5.0},
                                   SamplerConfig::cube(1, -50.0, 50.0, 1000000));
        bool mono = true;
        for (std::size_t k = 1; k < c.estimates.size(); ++k) mono = mono && c.estimates[k].value <= c.estimates[k - 1].value;
        const double b001 = c.estimates[0].value;
        const double b1 = c.estimates[2].value;
        report(4, b1 <= 0.999 && b001 >= 0.9999 && mono, "clamp-sin CLD profile",
               fmt("beta(0.01) = %.7g, beta(1) = %.7g", b001, b1) + (mono ? ", nonincreasing" : ", NOT monotone"));
    });
}

void pr_oscillation() {
    guarded(5, "PR oscillation", [] {
        StoppingRule s;
        s.max_iter = 50;
        const auto tr = peaceman_rachford(gallery::normal_cone_zero(), gallery::zero_operator(), Point::scalar(1.0), s);
        bool exact = tr.iterates.size() == 51;
        for (std::size_t n = 0; exact && n <= 50; ++n) exact = tr.iterates[n].value() == (n % 2 == 0 ? 1.0 : -1.0);
        report(5, exact && tr.period2_flag, "PR oscillation",
               std::string("x_n = (-1)^n ") + (exact ? "exact" : "violated") + ", period-2 flag " +
                   (tr.period2_flag ? "set" : "clear"));
    });
}

void shift_weak() {
    guarded(6, "truncated shift weak vs strong", [] {
        const std::size_t N = 256;
        StoppingRule s;
        s.max_iter = N + 8;
        TraceOptions opt;
        opt.probes = {1};
        const auto tr =
            peaceman_rachford(gallery::normal_cone_zero(N), gallery::shift_operator(N), Point::basis(N, 1), s, opt);
        bool norms = tr.iterates.size() > N;
        bool probes = norms;
        for (std::size_t n = 0; norms && n < N; ++n) norms = norm(tr.iterates[n]) == 1.0;
        for (std::size_t n = 1; probes && n < N; ++n) probes = tr.weak_probes[n][0] == 0.0;
        report(6, norms && probes, "truncated shift weak vs strong",
               std::string("||x_n|| = 1 ") + (norms ? "exact" : "violated") + ", <e1, x_n> = 0 " +
                   (probes ? "exact" : "violated"));
    });
}

void dr_convergence() {
    guarded(7, "DR strong convergence", [] {
        const auto A = gallery::cubic();
        const auto B = gallery::identity_operator();
        const Point xbar = Point::scalar(0.0);
        const bool fixed = dr_operator(A, B)(xbar) == xbar;
        StoppingRule s;
        s.max_iter = 200;
        const auto tr = douglas_rachford(A, B, Point::scalar(10.0), s);
        std::size_t hit = 0;
        for (std::size_t n = 0; n < tr.shadows->size() && !hit; ++n) {
            if (norm((*tr.shadows)[n]) <= 1e-8) hit = n;
        }
        const auto f = fejer_check(tr, xbar);
        report(7, fixed && hit > 0 && f.monotone(), "DR strong convergence",
               (hit ? "||y_n|| <= 1e-8 at n = " + std::to_string(hit) : std::string("shadow tolerance not reached")) +
                   (f.monotone() ? ", Fejer monotone" : ", Fejer violation at " + std::to_string(*f.first_violation)));
    });
}

void fb_convergence() {
    guarded(8, "FB convergence", [] {
        const auto A = gallery::identity_operator();
        const auto B = gallery::cubic();
        StoppingRule s;
        s.max_iter = 100;
        const auto tr = forward_backward(A, B, 0.5, Point::scalar(5.0), s);
        std::size_t hit = 0;
        for (std::size_t n = 1; n < tr.iterates.size() && !hit; ++n) {
            if (norm(tr.iterates[n]) <= 1e-8) hit = n;
        }
        bool rejected = false;
        try {
            forward_backward(A, B, 2.5, Point::scalar(5.0), s);
        } catch (const StepSizeOutOfRange&) {
            rejected = true;
        }
        report(8, hit > 0 && rejected, "FB convergence",
               (hit ? "||x_n|| <= 1e-8 at n = " + std::to_string(hit) : std::string("tolerance not reached")) +
                   (rejected ? ", gamma = 2.5 rejected" : ", gamma = 2.5 accepted"));
    });
}

void modulus_inequality() {
    guarded(9, "reflected-resolvent inequality for the cubic", [] {
        const auto A = gallery::cubic();
        const auto cfg = SamplerConfig::cube(1, -100.0, 100.0, 100000, 9);
        const auto est = estimate_modulus(A, {0.5, 1.0, 2.0, 4.0}, cfg).certificate;
        bool modulus_ok = true;
        double slack = std::numeric_limits<double>::infinity();
        for (const auto& e : est.estimates) {
            const double q = std::pow(e.probe, 4) / 4.0;
            modulus_ok = modulus_ok && std::isfinite(e.value) && e.value >= q - 1e-6;
            slack = std::min(slack, e.value - q);
        }
        const auto r = check_reflected_modulus_inequality(A, Modulus::power(0.25, 4.0), cfg);
        report(9, modulus_ok && r.max_violation <= 1e-9, "reflected-resolvent inequality for the cubic",
               fmt("min(phi_hat - t^4/4) = %.3g, max violation %.3g", slack, r.max_violation));
    });
}

void identity_layer() {
    guarded(10, "identity layer", [] {
        std::mt19937_64 rng(10);
        double duality = 0.0;
        double firm = -std::numeric_limits<double>::infinity();
        double minty = 0.0;
        for (const auto& id : gallery::gallery_ids()) {
            const auto e = gallery::gallery_entry(id);
            if (!e.op) continue;
            const auto& A = *e.op;
            const auto inv = invert(A);
            for (int i = 0; i < 10000; ++i) {
                const Point x = random_point(rng, A.dim(), 50.0);
                duality = std::max(duality, norm(reflected_resolvent(inv, x) + reflected_resolvent(A, x)));
            }
            const auto c = certify_firm(resolvent_map(A), SamplerConfig::cube(A.dim(), -10.0, 10.0, 100000, 10));
            firm = std::max(firm, c.estimates[0].value);
            if (A.has_direct_eval()) {
                for (int i = 0; i < 10000; ++i) {
                    const Point z = random_point(rng, A.dim(), 20.0);
                    const Point j = A.resolvent(z);
                    minty = std::max(minty, distance(j + A.evaluate(j), z));
                }
            }
        }
        report(10, duality <= 1e-12 && firm <= 1e-9 && minty <= 1e-8, "identity layer",
               fmt("duality %.3g, firm violation %.3g", duality, firm) + fmt(", Minty %.3g", minty));
    });
}

void selfdual() {
    guarded(11, "self-duality triptych", [] {
        auto cfg = SamplerConfig::cube(1, -10.0, 10.0, 20000);
        cfg.escalation_levels = 4;
        const auto cs = check_selfdual(gallery::clamp_sin_operator(), cfg);
        const auto cu = check_selfdual(gallery::cubic(), cfg);
        const auto triple = [](const SelfDualReport& r) {
            return to_string(r.op_modulus.verdict) + "/" + to_string(r.inverse_modulus.verdict) + "/" +
                   to_string(r.reflected_cld.verdict);
        };
        const bool ok = triple(cs) == "consistent/consistent/consistent" && triple(cu) == "consistent/refuted/refuted";
        report(11, ok, "self-duality triptych", "clamp-sin " + triple(cs) + ", cubic " + triple(cu));
    });
}

void clamp_sin_algebra() {
    guarded(12, "g/h solvers and clamp-sin closed forms", [] {
        const double half_pi = 0.5 * std::acos(-1.0);
        double solver = 0.0;
        for (int i = 0; i < 10000; ++i) {
            const double s = -1.0 + 2.0 * i / 9999.0;
            const double vg = s * (half_pi + 1.0);
            const double vh = s * (half_pi - 1.0);
            const double tg = gallery::g_inverse(vg);
            const double th = gallery::h_inverse(vh);
            solver = std::max({solver, std::abs(tg + std::sin(tg) - vg), std::abs(th - std::sin(th) - vh)});
        }
        double algebra = 0.0;
        const auto A = gallery::clamp_sin_operator();
        for (int i = 0; i <= 10000; ++i) {
            const double x = -5.0 + 10.0 * i / 10000.0;
            const double T = gallery::clamp_sin(x);
            const double j = (x - T) / 2.0;
            const double k = (x + T) / 2.0;
            algebra = std::max({algebra, std::abs(j + gallery::clamp_sin_operator_inverse_eval(j) - x),
                                std::abs(k + gallery::clamp_sin_operator_eval(k) - x),
                                std::abs(A.resolvent(Point::scalar(x)).value() - j)});
        }
        report(12, solver <= 1e-12 && algebra <= 1e-10, "g/h solvers and clamp-sin closed forms",
               fmt("solver residual %.3g, closed-form mismatch %.3g", solver, algebra));
    });
}

} // namespace

int main() {
    cardano();
    staircase_witnesses();
    staircase_regions();
    clamp_sin_cld();
    pr_oscillation();
    shift_weak();
    dr_convergence();
    fb_convergence();
    modulus_inequality();
    identity_layer();
    selfdual();
    clamp_sin_algebra();
    std::printf("%d of 12 criteria failed\n", failures);
    return failures == 0 ? 0 : 1;
}
