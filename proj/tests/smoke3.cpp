// Development smoke checks, part 3: critical points and kernel decay.
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
    double t0 = now();
    // 1. radial bump, hypersurface case k = m = 2 (dim 3)
    {
        std::vector<std::pair<std::vector<int>, double>> f = {
            {{2, 0, 0}, -1.0}, {{0, 2, 0}, -1.0}, {{0, 0, 2}, -1.0}};
        MetricChart bump = make_conformal(3, f, 1.0);
        Vec seed_p(3);
        seed_p << 0.12, -0.08, 0.1;
        GrassmannPoint seed = GrassmannPoint::axes(bump, seed_p, 2);
        CriticalPointResult res = find_critical(bump, seed);
        std::printf("radial k=m=2: |p|=%.3g grad=%.3g nondeg=%d iters=%d R=%.6g eigs:", res.point.p.norm(),
                    res.gradient_norm, res.nondegenerate, res.iterations, res.objective);
        for (int i = 0; i < res.hessian_eigenvalues.size(); ++i)
            std::printf(" %.3g", res.hessian_eigenvalues(i));
        std::printf("  [%.1fs]\n", now() - t0);
    }
    // 2. space form: critical at seed, degenerate
    {
        t0 = now();
        MetricChart sf = make_space_form(3, 1.0);
        Vec seed_p(3);
        seed_p << 0.1, 0.05, -0.02;
        GrassmannPoint seed = GrassmannPoint::axes(sf, seed_p, 1);
        CriticalPointResult res = find_critical(sf, seed);
        std::printf("space form: grad=%.3g nondeg=%d iters=%d max|eig|=%.3g  [%.1fs]\n",
                    res.gradient_norm, res.nondegenerate, res.iterations,
                    res.hessian_eigenvalues.cwiseAbs().maxCoeff(), now() - t0);
    }
    // 3. cubic-perturbed anisotropic bump, k=1 dim 3
    {
        t0 = now();
        std::vector<std::pair<std::vector<int>, double>> f = {{{2, 0, 0}, -1.0},
                                                              {{0, 2, 0}, -1.5},
                                                              {{0, 0, 2}, -2.25},
                                                              {{1, 1, 1}, -0.3},
                                                              {{3, 0, 0}, 0.2}};
        MetricChart bump = make_conformal(3, f, 1.0);
        Vec seed_p(3);
        seed_p << 0.1, -0.05, 0.08;
        GrassmannPoint seed = GrassmannPoint::axes(bump, seed_p, 1);
        CriticalPointResult res = find_critical(bump, seed);
        std::printf("cubic bump: p=(%.5g, %.5g, %.5g) grad=%.3g nondeg=%d iters=%d R=%.6g\n",
                    res.point.p(0), res.point.p(1), res.point.p(2), res.gradient_norm,
                    res.nondegenerate, res.iterations, res.objective);
        std::printf("  eigs:");
        for (int i = 0; i < res.hessian_eigenvalues.size(); ++i)
            std::printf(" %.3g", res.hessian_eigenvalues(i));
        std::printf("  [%.1fs]\n", now() - t0);

        // kernel decay at the converged point vs a deliberate offset
        t0 = now();
        SweepSpec sweep = SweepSpec::geometric();
        JetOptions jo;
        jo.need_d2 = true;
        jo.need_frames = true;
        for (int mode = 0; mode < 2; ++mode) {
            GrassmannPoint gp = res.point;
            if (mode == 1) {
                Vec off(3);
                off << 0.15, 0.1, -0.05;
                Mat fr = Mat::Identity(3, 3);
                fr(0, 1) = 0.2;
                fr(2, 1) = 0.15;
                gp = GrassmannPoint::make(bump, off, fr, 1);
            }
            std::vector<std::pair<double, double>> tot;
            for (double e : sweep.eps_list) {
                ImmersionJet S = geodesic_sphere(bump, gp, e, jo);
                MeanCurvatureReport mc = mean_curvature(bump, S);
                KernelModeFit km = kernel_mode_residual(bump, S, mc, e, 1);
                tot.push_back({e, km.total_norm()});
            }
            FitResult fr = fit_order(tot, sweep);
            std::printf("  %s: slope %.3f, norms %.2e .. %.2e  [%.1fs]\n",
                        mode == 0 ? "critical" : "offset  ", fr.slope, tot.front().second,
                        tot.back().second, now() - t0);
        }
        // corrected vs uncorrected tangential residual on this metric
        t0 = now();
        GrassmannPoint gp = res.point;
        CurvatureData cd = riemann_at(bump, gp.p, gp.frame, false);
        CorrectionFields cf = correction_fields(cd, gp);
        std::vector<std::pair<double, double>> unc, cor;
        for (double e : sweep.eps_list) {
            ImmersionJet S0 = geodesic_sphere(bump, gp, e, jo);
            ImmersionJet S1 = corrected_sphere(bump, gp, e, cf, jo);
            auto maxres = [&](const ImmersionJet& S) {
                MeanCurvatureReport mc = mean_curvature(bump, S);
                double m = 0.0;
                for (auto& nd : mc.nodes) m = std::max(m, std::abs(nd.tangential - 1.0 / e));
                return m;
            };
            unc.push_back({e, maxres(S0)});
            cor.push_back({e, maxres(S1)});
        }
        std::printf("  tangential residual slopes: uncorrected %.3f corrected %.3f  [%.1fs]\n",
                    fit_order(unc, sweep).slope, fit_order(cor, sweep).slope, now() - t0);
    }
    return 0;
}
