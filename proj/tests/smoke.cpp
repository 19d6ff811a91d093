// Temporary development smoke checks (replaced by the real suites).
#include <cstdio>

#include "gcurv/curvature.hpp"
#include "gcurv/expansion.hpp"
#include "gcurv/geodesic.hpp"
#include "gcurv/grassmann.hpp"
#include "gcurv/immersion.hpp"
#include "gcurv/metric.hpp"
#include "gcurv/polyops.hpp"

using namespace gcurv;

int main() {
    // 1. space form christoffel vs frozen sympy values
    {
        MetricChart sf = make_space_form(3, 1.0);
        Vec x(3);
        x << 0.21, -0.13, 0.33;
        Tensor3 gam = sf.christoffel(x);
        std::printf("Gamma[0][0][0] = %.15g (expect -0.00465939923246122)\n", gam(0, 0, 0));
        std::printf("Gamma[1][0][1] = %.15g (expect -0.0701799730511348)\n", gam(1, 0, 1));
        std::printf("Gamma[1][2][2] = %.15g (expect -0.0862658385521437)\n", gam(1, 2, 2));
    }
    // 2. closed-form exp vs frozen mpmath values
    {
        MetricChart sf = make_space_form(3, 1.0);
        Vec p(3), w(3);
        p << 0.1, -0.2, 0.15;
        w << 0.3, 0.1, -0.25;
        Vec q = exp_map(sf, p, w);
        std::printf("exp c=1: %.15g %.15g %.15g (expect 0.391721927668866 -0.0902513644419833 -0.10560959939245)\n",
                    q(0), q(1), q(2));
        MetricChart sf2 = make_space_form(3, -0.7);
        Vec q2 = exp_map(sf2, p, w);
        std::printf("exp c=-0.7: %.15g %.15g %.15g (expect 0.405657454058631 -0.107019216830744 -0.0958095101985712)\n",
                    q2(0), q2(1), q2(2));
    }
    // 3. RK4 vs closed form on space form (drop closed form to force RK4)
    {
        MetricChart sf = make_space_form(3, 1.0);
        MetricChart numeric(3, [&](const Vec& x) { return sf.metric(x); }, sf.domain_radius());
        Vec p(3), w(3);
        p << 0.1, -0.2, 0.15;
        w << 0.3, 0.1, -0.25;
        Vec a = exp_map(sf, p, w), b = exp_map(numeric, p, w);
        std::printf("RK4 vs closed form: %.3g\n", (a - b).norm());
    }
    // 4. curvature on space form: R_{ijkl} = c (d_il d_jk - d_ik d_jl)
    {
        MetricChart sf = make_space_form(4, 1.0);
        Vec p = Vec::Zero(4);
        p << 0.05, -0.1, 0.02, 0.08;
        Mat fr = orthonormal_frame(sf, p);
        CurvatureData cd = riemann_at(sf, p, fr, false);
        double maxerr = 0.0;
        for (int i = 0; i < 4; ++i)
            for (int j = 0; j < 4; ++j)
                for (int k = 0; k < 4; ++k)
                    for (int l = 0; l < 4; ++l) {
                        double want = (i == l && j == k ? 1.0 : 0.0) - (i == k && j == l ? 1.0 : 0.0);
                        maxerr = std::max(maxerr, std::abs(cd.R(i, j, k, l) - want));
                    }
        std::printf("space form R error: %.3g\n", maxerr);
        GrassmannPoint gp = GrassmannPoint::axes(sf, p, 2);
        std::printf("partial scalar k=2: %.15g (expect 6)\n", partial_scalar(cd, gp));
    }
    // 5. dR, d2R on space form should vanish
    {
        MetricChart sf = make_space_form(3, 1.0);
        Vec p(3);
        p << 0.1, 0.05, -0.08;
        Mat fr = orthonormal_frame(sf, p);
        CurvatureData cd = riemann_at(sf, p, fr, true);
        std::printf("space form dR max: %.3g, d2R max: %.3g\n", cd.dR.max_abs(), cd.d2R.max_abs());
    }
    // 6. energy on space form k=1 c=1 vs frozen sympy closed form
    {
        MetricChart sf = make_space_form(3, 1.0);
        GrassmannPoint gp = GrassmannPoint::axes(sf, Vec::Zero(3), 1);
        CurvatureData cd = riemann_at(sf, gp.p, gp.frame, false);
        PartialInvariants inv = compute_invariants(sf, gp, cd);
        std::printf("invariants: R=%.12g (2), r=%.12g (0.75), lap=%.3g (0)\n", inv.scalar_k1,
                    inv.r_invariant, inv.lap_scalar);
        EnergyReport e1 = energy(sf, gp, 0.1, cd, inv);
        std::printf("normalized(0.1) = %.17g (expect 0.99751242202148866716)\n", e1.normalized);
        EnergyReport e2 = energy(sf, gp, 0.05, cd, inv);
        std::printf("normalized(0.05) = %.17g (expect 0.99937578002987022750)\n", e2.normalized);
        std::printf("residual(0.1) = %.3g (expect ~ -5eps^6/64 = -1.56e-08)\n", e1.residual);
    }
    // 7. euclidean sphere volume and mean curvature
    {
        MetricChart eu = make_euclidean(4);
        GrassmannPoint gp = GrassmannPoint::axes(eu, Vec::Zero(4), 2);
        JetOptions jo;
        jo.need_d2 = true;
        jo.need_frames = true;
        ImmersionJet S = geodesic_sphere(eu, gp, 0.3, jo);
        double vol = volume(eu, S);
        std::printf("S^2_0.3 volume: %.15g (expect %.15g)\n", vol, 4.0 * M_PI * 0.09);
        MeanCurvatureReport mc = mean_curvature(eu, S);
        double tmax = 0.0, pmax = 0.0;
        for (auto& nd : mc.nodes) {
            tmax = std::max(tmax, std::abs(nd.tangential - 2.0 / 0.3));
            pmax = std::max(pmax, nd.perp.cwiseAbs().maxCoeff());
        }
        std::printf("mean curvature dev: tangential %.3g, perp %.3g, tangency %.3g\n", tmax, pmax,
                    mc.max_tangency);
    }
    // 8. polyops basics
    {
        Poly x1 = Poly::variable(3, 0), x2 = Poly::variable(3, 1);
        Poly h = x1 * x1 - x2 * x2;
        std::printf("Delta(x1^2-x2^2) zero: %d\n", h.laplacian().is_zero());
        Poly r2 = Poly::radius2(3);
        Poly p = r2 * x1;  // |y|^2 y_1, k+1 = 3 vars -> 2(k+3) = 2*... k=2: Delta = 2(k+3) y_1? n=3: 2(n+2)=10
        Poly lap = p.laplacian();
        Poly want = x1.scaled(Rational(10));
        std::printf("Delta(|y|^2 y1) == 10 y1 (k=2): %d\n", lap == want);
        Poly dec = Poly::variable(3, 0) * Poly::variable(3, 0);  // x1^2
        auto parts = harmonic_decompose(dec);
        std::printf("decompose x1^2 parts: %zu\n", parts.size());
        for (auto& [j, hh] : parts) std::printf("  j=%d: %s\n", j, hh.to_string().c_str());
    }
    return 0;
}
