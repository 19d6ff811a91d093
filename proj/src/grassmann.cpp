#include "gcurv/grassmann.hpp"

#include <cmath>
#include <limits>

#include "gcurv/errors.hpp"

namespace gcurv {

GrassmannPoint GrassmannPoint::make(const MetricChart& chart, const Vec& p, const Mat& seed_frame,
                                    int k) {
    const int n = chart.dim();
    if (k < 1 || k > n - 1) throw ConfigError("k out of range: need 1 <= k <= m");
    GrassmannPoint gp;
    gp.p = p;
    gp.frame = gram_schmidt(seed_frame, chart.metric(p));
    gp.k = k;
    return gp;
}

GrassmannPoint GrassmannPoint::axes(const MetricChart& chart, const Vec& p, int k) {
    return make(chart, p, Mat::Identity(chart.dim(), chart.dim()), k);
}

double partial_scalar(const CurvatureData& cd, const GrassmannPoint& gp) {
    double s = 0.0;
    for (int i = 0; i <= gp.k; ++i)
        for (int j = 0; j <= gp.k; ++j) s += cd.R(i, j, i, j);
    return -s;
}

std::pair<Mat, Mat> partial_ricci(const CurvatureData& cd, const GrassmannPoint& gp) {
    const int k = gp.k;
    const int n = static_cast<int>(gp.frame.rows());
    Mat ric = Mat::Zero(k + 1, k + 1);
    Mat ric_perp = Mat::Zero(k + 1, n - k - 1);
    for (int a = 0; a <= k; ++a) {
        for (int b = 0; b <= k; ++b) {
            double s = 0.0;
            for (int i = 0; i <= k; ++i) s += cd.R(i, a, i, b);
            ric(a, b) = -s;
        }
        for (int mu = k + 1; mu < n; ++mu) {
            double s = 0.0;
            for (int i = 0; i <= k; ++i) s += cd.R(i, a, i, mu);
            ric_perp(a, mu - k - 1) = -s;
        }
    }
    return {ric, ric_perp};
}

std::pair<double, double> restricted_riemann_norms(const CurvatureData& cd, const GrassmannPoint& gp) {
    const int k = gp.k;
    const int n = static_cast<int>(gp.frame.rows());
    double nR = 0.0, nRp = 0.0;
    for (int a = 0; a <= k; ++a)
        for (int b = 0; b <= k; ++b)
            for (int c = 0; c <= k; ++c) {
                for (int d = 0; d <= k; ++d) nR += cd.R(a, b, c, d) * cd.R(a, b, c, d);
                for (int mu = k + 1; mu < n; ++mu) nRp += cd.R(a, b, c, mu) * cd.R(a, b, c, mu);
            }
    return {nR, nRp};
}

double partial_laplacian_scalar(const MetricChart& chart, const GrassmannPoint& gp, double step) {
    const double h = step;
    CurvatureData cd0 = riemann_at(chart, gp.p, gp.frame, false);
    double f0 = partial_scalar(cd0, gp);
    double lap = 0.0;
    for (int i = 0; i <= gp.k; ++i) {
        Vec v = gp.frame.col(i);
        auto value_at = [&](double t) {
            GeodesicSolution sol = geodesic(chart, gp.p, v, t, gp.frame, false);
            GrassmannPoint gt{sol.endpoint, sol.transported_frame, gp.k};
            CurvatureData cd = riemann_at(chart, sol.endpoint, sol.transported_frame, false);
            return partial_scalar(cd, gt);
        };
        double fp2 = value_at(2.0 * h), fp1 = value_at(h), fm1 = value_at(-h), fm2 = value_at(-2.0 * h);
        lap += (-fp2 + 16.0 * fp1 - 30.0 * f0 + 16.0 * fm1 - fm2) / (12.0 * h * h);
    }
    return lap;
}

double partial_laplacian_scalar_checked(const MetricChart& chart, const GrassmannPoint& gp,
                                        double step, double abs_floor) {
    double v1 = partial_laplacian_scalar(chart, gp, step);
    double v2 = partial_laplacian_scalar(chart, gp, 0.5 * step);
    double err = std::abs(v1 - v2);
    if (err > 0.05 * std::abs(v2) && err > abs_floor)
        throw PrecisionError("partial Laplacian: FD noise exceeds signal estimate");
    return v2;
}

double r_invariant_value(int k, double scalar, double ric_norm2, double norm_R, double ric_perp_norm2,
                         double norm_R_perp, double lap_scalar) {
    if (k == 0) throw ConfigError("r invariant undefined for k = 0");
    double kk = static_cast<double>(k);
    double t1 = (8.0 * ric_norm2 - 18.0 * lap_scalar - 3.0 * norm_R + 5.0 * scalar * scalar +
                 8.0 * ric_perp_norm2 + 12.0 * norm_R_perp) /
                (36.0 * (kk + 5.0));
    double t2 = ((kk + 6.0) / kk * scalar * scalar - 2.0 * ric_norm2) / (9.0 * (kk + 2.0));
    double t3 = 4.0 * kk / (3.0 * (kk + 3.0) * (kk + 5.0)) * ric_perp_norm2;
    return t1 + t2 - t3;
}

double psi_value(double energy, double eps, int k, double vol_sk) {
    if (eps <= 0.0) throw ConfigError("psi requires eps > 0");
    double kk = static_cast<double>(k);
    return 2.0 * (kk + 3.0) / (eps * eps) * (1.0 - (kk + 1.0) * energy / (std::pow(eps, kk) * vol_sk));
}

PartialInvariants compute_invariants(const MetricChart& chart, const GrassmannPoint& gp,
                                     const CurvatureData& cd) {
    PartialInvariants inv;
    inv.scalar_k1 = partial_scalar(cd, gp);
    std::tie(inv.ric, inv.ric_perp) = partial_ricci(cd, gp);
    std::tie(inv.norm_R, inv.norm_R_perp) = restricted_riemann_norms(cd, gp);
    inv.lap_scalar = partial_laplacian_scalar(chart, gp);
    inv.r_invariant = r_invariant_value(gp.k, inv.scalar_k1, inv.ric.squaredNorm(), inv.norm_R,
                                        inv.ric_perp.squaredNorm(), inv.norm_R_perp, inv.lap_scalar);
    return inv;
}

// ---------------------------------------------------------------------------
// Critical-point search
// ---------------------------------------------------------------------------
namespace {

int param_count(int n, int k) { return n + (k + 1) * (n - 1 - k); }

Mat rotation_generator(int n, int k, const Vec& b) {
    Mat A = Mat::Zero(n, n);
    int idx = 0;
    for (int a = 0; a <= k; ++a)
        for (int mu = k + 1; mu < n; ++mu) {
            A(a, mu) = -b(idx);
            A(mu, a) = b(idx);
            ++idx;
        }
    return A;
}

}  // namespace

GrassmannPoint retract(const MetricChart& chart, const GrassmannPoint& gp, const Vec& theta) {
    const int n = chart.dim();
    Vec dp = theta.head(n);
    Vec brot = theta.tail(theta.size() - n);
    Vec p2 = gp.p;
    Mat fr2 = gp.frame;
    if (dp.norm() > 0.0) {
        GeodesicSolution sol = geodesic(chart, gp.p, gp.frame * dp, 1.0, gp.frame, false);
        p2 = sol.endpoint;
        fr2 = sol.transported_frame;
    }
    if (brot.size() > 0 && brot.norm() > 0.0) fr2 = fr2 * expm(rotation_generator(n, gp.k, brot));
    return GrassmannPoint::make(chart, p2, fr2, gp.k);
}

CriticalPointResult find_critical(const MetricChart& chart, const GrassmannPoint& seed,
                                  const CriticalOptions& opts) {
    const int n = chart.dim();
    const int P = param_count(n, seed.k);

    auto objective_at = [&](const GrassmannPoint& gp) {
        CurvatureData cd = riemann_at(chart, gp.p, gp.frame, false);
        return partial_scalar(cd, gp);
    };
    // +inf outside the chart (with a 2% safety margin) so searches back off
    // from the boundary instead of escaping
    auto safe_objective = [&](const GrassmannPoint& gp, const Vec& theta) {
        try {
            GrassmannPoint moved = retract(chart, gp, theta);
            if (moved.p.norm() > 0.98 * chart.domain_radius())
                return std::numeric_limits<double>::infinity();
            return objective_at(moved);
        } catch (const DomainError&) {
            return std::numeric_limits<double>::infinity();
        }
    };

    auto fd_gradient = [&](const GrassmannPoint& gp) {
        Vec g(P);
        for (int i = 0; i < P; ++i) {
            Vec tp = Vec::Zero(P), tm = Vec::Zero(P);
            tp(i) = opts.fd_step;
            tm(i) = -opts.fd_step;
            g(i) = (safe_objective(gp, tp) - safe_objective(gp, tm)) / (2.0 * opts.fd_step);
        }
        return g;
    };
    auto fd_hessian = [&](const GrassmannPoint& gp, double f0) {
        const double h = opts.hess_step;
        Mat H(P, P);
        std::vector<double> fp(P), fm(P);
        for (int i = 0; i < P; ++i) {
            Vec t = Vec::Zero(P);
            t(i) = h;
            fp[i] = safe_objective(gp, t);
            t(i) = -h;
            fm[i] = safe_objective(gp, t);
            H(i, i) = (fp[i] - 2.0 * f0 + fm[i]) / (h * h);
        }
        for (int i = 0; i < P; ++i)
            for (int j = i + 1; j < P; ++j) {
                Vec t = Vec::Zero(P);
                t(i) = h;
                t(j) = h;
                double fpp = safe_objective(gp, t);
                t(i) = -h;
                t(j) = -h;
                double fmm = safe_objective(gp, t);
                double v = (fpp - fp[i] - fp[j] + 2.0 * f0 - fm[i] - fm[j] + fmm) / (2.0 * h * h);
                H(i, j) = v;
                H(j, i) = v;
            }
        return H;
    };

    auto run = [&](double sign) {
        // minimize sign * R_{k+1}
        GrassmannPoint gp = seed;
        double f = sign * objective_at(gp);
        int iters = 0;
        for (int it = 0; it < opts.max_iters; ++it) {
            Vec g = sign * fd_gradient(gp);
            double gnorm = g.norm();
            if (gnorm < opts.grad_tol) break;
            bool accepted = false;
            if (gnorm < opts.newton_threshold) {
                // saddle-capable Newton refinement: accept whenever the
                // gradient norm shrinks, regardless of the objective
                Mat H = sign * fd_hessian(gp, sign * f);
                Eigen::FullPivLU<Mat> lu(H);
                if (lu.isInvertible()) {
                    Vec step = lu.solve(-g);
                    if (step.allFinite() && step.norm() < 0.5) {
                        GrassmannPoint cand = retract(chart, gp, step);
                        double cnorm = (sign * fd_gradient(cand)).norm();
                        if (cnorm < gnorm) {
                            gp = cand;
                            f = sign * objective_at(gp);
                            accepted = true;
                        }
                    }
                }
            }
            if (!accepted) {
                // backtracking gradient step; accepted steps never increase f
                Vec step = -g;
                double t = std::min(1.0, 0.2 / std::max(1e-12, gnorm));
                double gdots = g.dot(step);
                for (int ls = 0; ls < 40; ++ls) {
                    double ft = sign * safe_objective(gp, t * step);
                    if (ft <= f + 1e-4 * t * gdots) {
                        gp = retract(chart, gp, t * step);
                        f = ft;
                        accepted = true;
                        break;
                    }
                    t *= 0.5;
                }
            }
            ++iters;
            if (!accepted) break;  // no progress possible at this resolution
        }
        CriticalPointResult res;
        res.point = gp;
        res.gradient_norm = fd_gradient(gp).norm();
        res.iterations = iters;
        res.objective = objective_at(gp);
        Mat H = fd_hessian(gp, res.objective);
        Eigen::SelfAdjointEigenSolver<Mat> es(0.5 * (H + H.transpose()));
        res.hessian_eigenvalues = es.eigenvalues();
        double lmax = res.hessian_eigenvalues.cwiseAbs().maxCoeff();
        double lmin = res.hessian_eigenvalues.cwiseAbs().minCoeff();
        // eigenvalues below the FD noise scale are indistinguishable from zero
        res.nondegenerate = lmin > std::max(opts.nondegeneracy_floor * lmax, opts.hessian_noise);
        return res;
    };

    objective_at(seed);  // seed outside the chart domain propagates as DomainError

    auto try_run = [&](double sign) {
        try {
            return run(sign);
        } catch (const DomainError&) {
            CriticalPointResult failed;
            failed.point = seed;
            failed.gradient_norm = std::numeric_limits<double>::infinity();
            return failed;
        }
    };
    CriticalPointResult down = try_run(+1.0);
    CriticalPointResult up = try_run(-1.0);
    auto better = [](const CriticalPointResult& a, const CriticalPointResult& b) {
        if (a.gradient_norm != b.gradient_norm) return a.gradient_norm < b.gradient_norm;
        for (int i = 0; i < a.point.p.size(); ++i)
            if (a.point.p(i) != b.point.p(i)) return a.point.p(i) < b.point.p(i);
        return false;
    };
    CriticalPointResult best = better(down, up) ? down : up;
    if (best.gradient_norm > std::max(opts.grad_tol, opts.newton_threshold))
        throw NumericalError("find_critical: no critical point located within max iterations");
    return best;
}

}  // namespace gcurv
