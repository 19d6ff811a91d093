#include "gcurv/expansion.hpp"

#include <algorithm>
#include <cmath>

#include "gcurv/errors.hpp"
#include "gcurv/polyops.hpp"
#include "gcurv/rng.hpp"

namespace gcurv {

SweepSpec SweepSpec::geometric(double eps_max, double eps_min, int count) {
    SweepSpec s;
    double ratio = std::pow(eps_max / eps_min, 1.0 / (count - 1));
    for (int i = 0; i < count; ++i) s.eps_list.push_back(eps_max / std::pow(ratio, i));
    s.validate();
    return s;
}

void SweepSpec::validate() const {
    if (eps_list.size() < 4) throw ConfigError("sweep needs at least 4 epsilon values");
    for (std::size_t i = 0; i + 1 < eps_list.size(); ++i) {
        if (eps_list[i] <= eps_list[i + 1]) throw ConfigError("sweep epsilons must decrease");
        double ratio = eps_list[i] / eps_list[i + 1];
        // the default sweep (8 values over [0.0125, 0.2]) has ratio 16^{1/7} = 1.486
        if (ratio < 1.4 || ratio > 2.6)
            throw ConfigError("sweep ratio between consecutive epsilons must lie in [1.4, 2.6]");
    }
    for (double e : eps_list)
        if (e <= 0.0) throw ConfigError("sweep epsilons must be positive");
}

FitResult fit_order(const std::vector<std::pair<double, double>>& eps_residual,
                    const SweepSpec& spec) {
    // order by decreasing eps, drop the largest `drop_largest`, then the floor
    std::vector<std::pair<double, double>> pts = eps_residual;
    std::sort(pts.begin(), pts.end(), [](auto& a, auto& b) { return a.first > b.first; });
    std::vector<std::pair<double, double>> keep;
    for (std::size_t i = 0; i < pts.size(); ++i) {
        if (static_cast<int>(i) < spec.drop_largest) continue;
        if (std::abs(pts[i].second) <= spec.noise_floor) continue;
        keep.push_back({std::log(pts[i].first), std::log(std::abs(pts[i].second))});
    }
    FitResult fr;
    fr.points_used = static_cast<int>(keep.size());
    if (keep.size() < 2) return fr;  // order unresolvable: residuals at noise floor
    double sx = 0, sy = 0, sxx = 0, sxy = 0, syy = 0;
    for (auto& [x, y] : keep) {
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
        syy += y * y;
    }
    double n = static_cast<double>(keep.size());
    double denom = n * sxx - sx * sx;
    fr.slope = (n * sxy - sx * sy) / denom;
    fr.intercept = (sy - fr.slope * sx) / n;
    double ss_tot = syy - sy * sy / n;
    double ss_res = 0.0;
    for (auto& [x, y] : keep) {
        double e = y - (fr.slope * x + fr.intercept);
        ss_res += e * e;
    }
    fr.r_squared = ss_tot > 0 ? 1.0 - ss_res / ss_tot : 1.0;
    fr.resolved = true;
    return fr;
}

EnergyReport energy(const MetricChart& chart, const GrassmannPoint& gp, double eps,
                    const CurvatureData& cd, const PartialInvariants& inv, const QuadOrders& quad) {
    const int k = gp.k;
    CorrectionFields cf = correction_fields(cd, gp);
    JetOptions opts;
    opts.quad = quad;
    ImmersionJet K = corrected_sphere(chart, gp, eps, cf, opts);
    ImmersionJet Q = corrected_ball(chart, gp, eps, cf, opts);
    EnergyReport rep;
    rep.eps = eps;
    rep.vol_K = volume(chart, K);
    rep.vol_Q = volume(chart, Q);
    rep.energy = rep.vol_K - (static_cast<double>(k) / eps) * rep.vol_Q;
    rep.normalized = (k + 1.0) * rep.energy / (std::pow(eps, k) * sphere_volume(k));
    rep.predicted = 1.0 - eps * eps * inv.scalar_k1 / (2.0 * (k + 3.0)) +
                    std::pow(eps, 4) * inv.r_invariant / (2.0 * (k + 3.0));
    rep.residual = rep.normalized - rep.predicted;
    return rep;
}

std::vector<MomentCheck> moment_identities(int k, std::uint64_t seed) {
    SphereGrid grid(k);
    const double vol = sphere_volume(k);
    const double k1 = k + 1.0, k3 = k + 3.0;
    std::vector<MomentCheck> checks;

    auto add = [&](const std::string& id, double quad, double closed) {
        checks.push_back({id, quad, closed, std::abs(quad - closed)});
    };

    for (int i = 0; i <= k; ++i) {
        double q = grid.integrate_sigma([&](const SphereNode& n) { return n.theta(i) * n.theta(i); });
        add("second_moment_i" + std::to_string(i + 1), q, vol / k1);
    }
    double q4 = grid.integrate_sigma([&](const SphereNode& n) { return std::pow(n.theta(0), 4); });
    add("fourth_moment_pure", q4, 3.0 * vol / (k1 * k3));
    if (k >= 1) {
        double qm = grid.integrate_sigma([&](const SphereNode& n) {
            double t = n.theta(0) * n.theta(k);
            return t * t;
        });
        add("fourth_moment_mixed", qm, vol / (k1 * k3));
    }

    // general symmetric fourth-moment identity on random coefficient arrays
    Xoshiro256ss rng(seed);
    for (int trial = 0; trial < 10; ++trial) {
        Tensor4 a = Tensor4::cube(k + 1);
        for (double& v : a.raw()) v = rng.uniform(-1.0, 1.0);
        double quad = grid.integrate_sigma([&](const SphereNode& n) {
            double s = 0.0;
            for (int p = 0; p <= k; ++p)
                for (int q = 0; q <= k; ++q)
                    for (int l = 0; l <= k; ++l)
                        for (int m = 0; m <= k; ++m)
                            s += a(p, q, l, m) * n.theta(p) * n.theta(q) * n.theta(l) * n.theta(m);
            return s;
        });
        double closed = 0.0;
        for (int p = 0; p <= k; ++p)
            for (int q = 0; q <= k; ++q) closed += a(p, p, q, q) + a(p, q, p, q) + a(p, q, q, p);
        closed *= vol / (k1 * k3);
        add("fourth_moment_general_" + std::to_string(trial), quad, closed);
    }

    // antisymmetric coefficients integrate to zero
    Tensor4 anti = Tensor4::cube(k + 1);
    for (int p = 0; p <= k; ++p)
        for (int q = 0; q <= k; ++q)
            for (int l = 0; l <= k; ++l)
                for (int m = 0; m <= k; ++m) anti(p, q, l, m) = (l - m) * (p + 1.3 * q + 0.7);
    double quad0 = grid.integrate_sigma([&](const SphereNode& n) {
        double s = 0.0;
        for (int p = 0; p <= k; ++p)
            for (int q = 0; q <= k; ++q)
                for (int l = 0; l <= k; ++l)
                    for (int m = 0; m <= k; ++m)
                        s += anti(p, q, l, m) * n.theta(p) * n.theta(q) * n.theta(l) * n.theta(m);
        return s;
    });
    add("fourth_moment_antisymmetric", quad0, 0.0);
    return checks;
}

std::vector<TermRow> appendix_term_table(const MetricChart& chart, const GrassmannPoint& gp,
                                         double eps) {
    const int k = gp.k;
    const int n = chart.dim();
    const int nperp = n - k - 1;
    CurvatureData cd = riemann_at(chart, gp.p, gp.frame, true);
    auto [ric, ric_perp] = partial_ricci(cd, gp);
    auto [norm_R, norm_R_perp] = restricted_riemann_norms(cd, gp);
    double scal = partial_scalar(cd, gp);
    double ric2 = ric.squaredNorm();
    double ricp2 = ric_perp.squaredNorm();
    const double vol = sphere_volume(k);
    const double k1 = k + 1.0, k3 = k + 3.0, k5 = k + 5.0;

    // Delta R_{k+1} from the same second-derivative data as the quadrature side
    double lap_d2R = 0.0;
    for (int c = 0; c <= k; ++c)
        for (int i = 0; i <= k; ++i)
            for (int j = 0; j <= k; ++j) lap_d2R -= cd.d2R(i, j, i, j, c, c);

    SphereGrid grid(k);
    auto ric_theta = [&](const Vec& th) { return th.dot(ric * th); };

    std::vector<TermRow> rows;
    auto add = [&](const std::string& name, double quad, double closed) {
        double denom = std::abs(closed) > 1e-14 ? std::abs(closed) : 1.0;
        rows.push_back({name, quad, closed, std::abs(quad - closed) / denom});
    };

    add("int_ric_theta_theta",
        grid.integrate_sigma([&](const SphereNode& nd) { return ric_theta(nd.theta); }),
        vol / k1 * scal);

    add("int_ric_theta_theta_sq",
        grid.integrate_sigma([&](const SphereNode& nd) {
            double v = ric_theta(nd.theta);
            return v * v;
        }),
        vol / (k1 * k3) * (2.0 * ric2 + scal * scal));

    add("int_R_theta_tangential_sq",
        grid.integrate_sigma([&](const SphereNode& nd) {
            double s = 0.0;
            for (int i = 0; i <= k; ++i)
                for (int j = 0; j <= k; ++j) {
                    double v = 0.0;
                    for (int a = 0; a <= k; ++a)
                        for (int b = 0; b <= k; ++b) v += cd.R(a, i, b, j) * nd.theta(a) * nd.theta(b);
                    s += v * v;
                }
            return s;
        }),
        vol / (k1 * k3) * (ric2 + 1.5 * norm_R));

    if (nperp > 0) {
        add("int_R_theta_perp_sq",
            grid.integrate_sigma([&](const SphereNode& nd) {
                double s = 0.0;
                for (int i = 0; i <= k; ++i)
                    for (int mu = k + 1; mu < n; ++mu) {
                        double v = 0.0;
                        for (int a = 0; a <= k; ++a)
                            for (int b = 0; b <= k; ++b)
                                v += cd.R(a, i, b, mu) * nd.theta(a) * nd.theta(b);
                        s += v * v;
                    }
                return s;
            }),
            vol / (k1 * k3) * (ricp2 + 1.5 * norm_R_perp));
    }

    add("int_hess_ric_theta4",
        grid.integrate_sigma([&](const SphereNode& nd) {
            double s = 0.0;
            for (int i = 0; i <= k; ++i)
                for (int a = 0; a <= k; ++a)
                    for (int b = 0; b <= k; ++b)
                        for (int c = 0; c <= k; ++c)
                            for (int d = 0; d <= k; ++d)
                                s -= cd.d2R(i, a, i, b, c, d) * nd.theta(a) * nd.theta(b) *
                                     nd.theta(c) * nd.theta(d);
            return s;
        }),
        2.0 * vol / (k1 * k3) * lap_d2R);

    if (nperp > 0) {
        // W integrals over the flat ball; Delta W evaluated by the exact
        // polynomial Laplacian (coefficients converted exactly to rationals)
        auto sphere = std::make_shared<SphereGrid>(k);
        BallGrid ball(k, sphere);
        double cw = -(eps * eps / (3.0 * (k + 3.0)));

        std::vector<Poly> Wpoly;
        Poly r2 = Poly::radius2(k + 1);
        Poly one = Poly::constant(k + 1, 1);
        for (int mu = 0; mu < nperp; ++mu) {
            Poly lin(k + 1);
            for (int a = 0; a <= k; ++a)
                lin = lin + Poly::variable(k + 1, a).scaled(rational_from_double(ric_perp(a, mu)));
            Wpoly.push_back(((one - r2) * lin).scaled(rational_from_double(cw)));
        }

        double t6 = 0.0, t7 = 0.0, t8 = 0.0;
        for (int mu = 0; mu < nperp; ++mu) {
            Poly lap = Wpoly[mu].laplacian();
            t6 += ball.integrate_flat([&](const Vec& y) { return Wpoly[mu].eval(y) * lap.eval(y); });
            t7 += ball.integrate_flat(
                [&](const Vec& y) { return Wpoly[mu].eval(y) * (ric_perp.col(mu).dot(y)); });
            for (int i = 0; i <= k; ++i) {
                Poly dW = Wpoly[mu].diff(i);
                t8 += ball.integrate_flat([&](const Vec& y) {
                    double rterm = 0.0;
                    for (int a = 0; a <= k; ++a)
                        for (int b = 0; b <= k; ++b) rterm += cd.R(a, i, b, k + 1 + mu) * y(a) * y(b);
                    return dW.eval(y) * rterm;
                });
            }
        }
        double c0 = vol * ricp2 / (k1 * k3 * k3 * k5);
        add("int_W_lap_W", t6, -(4.0 * std::pow(eps, 4) / 9.0) * c0);
        add("int_W_ricperp", t7, -(2.0 * eps * eps / 3.0) * c0);
        add("int_dW_R", t8, (2.0 * eps * eps / 3.0) * c0);
    }
    return rows;
}

}  // namespace gcurv
