// Development smoke checks, part 2: sweeps and numeric jets.
#include <chrono>
#include <cstdio>

#include "gcurv/curvature.hpp"
#include "gcurv/expansion.hpp"
#include "gcurv/grassmann.hpp"
#include "gcurv/immersion.hpp"

using namespace gcurv;

static double now() {
    return std::chrono::duration<double>(std::chrono::steady_clock::now().time_since_epoch()).count();
}

int main() {
    SweepSpec sweep = SweepSpec::geometric();

    // 1. energy sweep on space form k=2, dim 4, c=+1 and c=-1
    for (double c : {1.0, -1.0}) {
        MetricChart sf = make_space_form(4, c);
        GrassmannPoint gp = GrassmannPoint::axes(sf, Vec::Zero(4), 2);
        CurvatureData cd = riemann_at(sf, gp.p, gp.frame, false);
        PartialInvariants inv = compute_invariants(sf, gp, cd);
        std::printf("k=2 c=%+.0f: R=%.12g (expect %.0f), r=%.12g (expect %.12g)\n", c, inv.scalar_k1,
                    6.0 * c, inv.r_invariant, 30.0 / 7.0);
        std::vector<std::pair<double, double>> res;
        double t0 = now();
        for (double e : sweep.eps_list) {
            EnergyReport er = energy(sf, gp, e, cd, inv);
            res.push_back({e, er.residual});
        }
        FitResult fr = fit_order(res, sweep);
        std::printf("  slope=%.3f (expect ~6), time=%.2fs\n", fr.slope, now() - t0);
        // eps^4 coefficient via two-point elimination of the eps^6 term
        auto res2 = [&](double e) {
            EnergyReport er = energy(sf, gp, e, cd, inv);
            return er.normalized - 1.0 + e * e * inv.scalar_k1 / (2.0 * (gp.k + 3.0));
        };
        double e1 = sweep.eps_list[7], e2 = sweep.eps_list[5];
        double v1 = res2(e1) / std::pow(e1, 4), v2 = res2(e2) / std::pow(e2, 4);
        double A = (v1 * e2 * e2 - v2 * e1 * e1) / (e2 * e2 - e1 * e1);
        double want = inv.r_invariant / (2.0 * (gp.k + 3.0));
        std::printf("  eps^4 coeff: %.8g vs r/(2(k+3)) = %.8g (rel %.2e)\n", A, want,
                    std::abs(A - want) / std::abs(want));
    }

    // 2. mean curvature of geodesic spheres on space form: k sqrt(c) cot(sqrt(c) eps)
    {
        MetricChart sf = make_space_form(4, 1.0);
        GrassmannPoint gp = GrassmannPoint::axes(sf, Vec::Zero(4), 2);
        JetOptions jo;
        jo.need_d2 = true;
        jo.need_frames = true;
        double maxrel = 0.0;
        std::vector<std::pair<double, double>> lemma_res;
        for (double e : sweep.eps_list) {
            ImmersionJet S = geodesic_sphere(sf, gp, e, jo);
            MeanCurvatureReport mc = mean_curvature(sf, S);
            double want = 2.0 / std::tan(e);
            double dev = 0.0, lem = 0.0;
            for (auto& nd : mc.nodes) {
                dev = std::max(dev, std::abs(nd.tangential - want) / want);
                lem = std::max(lem, std::abs(nd.tangential - 2.0 / e + (e / 3.0) * 2.0 * 1.0));
            }
            maxrel = std::max(maxrel, dev);
            lemma_res.push_back({e, lem});
        }
        FitResult fr = fit_order(lemma_res, sweep);
        std::printf("cot check: max rel dev %.2e (need < 1e-6); lemma-sphere residual slope %.3f (expect ~3)\n",
                    maxrel, fr.slope);
    }

    // 3. conformal bump metric: energy eps^2 tier with numeric jets
    {
        std::vector<std::pair<std::vector<int>, double>> f = {
            {{2, 0, 0}, -1.0}, {{0, 2, 0}, -1.0}, {{0, 0, 2}, -1.0}};
        MetricChart bump = make_conformal(3, f, 1.0);
        GrassmannPoint gp = GrassmannPoint::axes(bump, Vec::Zero(3), 1);
        CurvatureData cd = riemann_at(bump, gp.p, gp.frame, false);
        PartialInvariants inv = compute_invariants(bump, gp, cd);
        std::printf("bump: R_2(0) = %.10g (expect 8: conformal factor hess -2I)\n", inv.scalar_k1);
        double t0 = now();
        auto res2 = [&](double e) {
            EnergyReport er = energy(bump, gp, e, cd, inv);
            return 1.0 - er.normalized;
        };
        double e1 = 0.025, e2 = 0.05;
        double v1 = res2(e1) / (e1 * e1), v2 = res2(e2) / (e2 * e2);
        double coeff = (v1 * e2 * e2 - v2 * e1 * e1) / (e2 * e2 - e1 * e1);
        double want = inv.scalar_k1 / (2.0 * (gp.k + 3.0));
        std::printf("bump eps^2 coeff: %.8g vs %.8g (rel %.2e), time %.2fs\n", coeff, want,
                    std::abs(coeff - want) / want, now() - t0);
    }

    // 4. kernel modes on euclidean: all zero
    {
        MetricChart eu = make_euclidean(3);
        GrassmannPoint gp = GrassmannPoint::axes(eu, Vec::Zero(3), 1);
        JetOptions jo;
        jo.need_d2 = true;
        jo.need_frames = true;
        ImmersionJet S = geodesic_sphere(eu, gp, 0.1, jo);
        MeanCurvatureReport mc = mean_curvature(eu, S);
        KernelModeFit km = kernel_mode_residual(eu, S, mc, 0.1, 1);
        std::printf("euclidean kernel modes: total %.3g, orth %.3g\n", km.total_norm(), km.orth_residual);
    }

    // 5. anisotropic bump: kernel-mode decay at critical point vs offset
    {
        std::vector<std::pair<std::vector<int>, double>> f = {
            {{2, 0, 0}, -1.0}, {{0, 2, 0}, -1.5}, {{0, 0, 2}, -2.25}};
        MetricChart bump = make_conformal(3, f, 1.0);
        JetOptions jo;
        jo.need_d2 = true;
        jo.need_frames = true;
        double t0 = now();
        for (bool critical : {true, false}) {
            Vec p = Vec::Zero(3);
            Mat seed = Mat::Identity(3, 3);
            if (!critical) {
                p << 0.15, 0.1, -0.05;
                seed << 1, 0.2, 0, 0.1, 1, 0, 0, 0.15, 1;
            }
            GrassmannPoint gp = GrassmannPoint::make(bump, p, seed, 1);
            std::vector<std::pair<double, double>> tot;
            for (double e : sweep.eps_list) {
                ImmersionJet S = geodesic_sphere(bump, gp, e, jo);
                MeanCurvatureReport mc = mean_curvature(bump, S);
                KernelModeFit km = kernel_mode_residual(bump, S, mc, e, 1);
                tot.push_back({e, km.total_norm()});
            }
            FitResult fr = fit_order(tot, sweep);
            std::printf("kernel modes at %s: slope %.3f, norms %.2e .. %.2e\n",
                        critical ? "critical" : "offset", fr.slope, tot.front().second,
                        tot.back().second);
        }
        std::printf("kernel sweep time %.2fs\n", now() - t0);
    }
    return 0;
}
