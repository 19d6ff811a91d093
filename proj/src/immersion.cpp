#include "gcurv/immersion.hpp"

#include <array>
#include <cmath>

#include "gcurv/errors.hpp"

namespace gcurv {

CorrectionFields correction_fields(const CurvatureData& cd, const GrassmannPoint& gp) {
    CorrectionFields cf;
    cf.k = gp.k;
    double scal = partial_scalar(cd, gp);
    auto [ric, ric_perp] = partial_ricci(cd, gp);
    double kk = gp.k;
    cf.phi_const = 2.0 * scal / (3.0 * kk * (kk + 2.0));
    cf.phi_quad = -ric / (3.0 * (kk + 2.0));
    cf.ric_perp = ric_perp;
    return cf;
}

namespace {

// Frame-component displacement Psi(r, Theta) and its derivatives for the
// (possibly corrected) sphere/ball map F = exp_p(eps Frame Psi).
struct DisplacementMap {
    int k, n;                       // plane dim k+1, ambient n
    double eps;
    const CorrectionFields* cf;     // nullptr: plain geodesic sphere/ball

    double phi(const Vec& th) const { return cf ? cf->phi(eps, th) : 0.0; }
    Vec dphi(const Vec& th, const Mat& dth) const {
        if (!cf) return Vec::Zero(dth.cols());
        return 2.0 * eps * eps * (dth.transpose() * (cf->phi_quad * th));
    }
    double d2phi(const Vec& th, const Vec& dth_a, const Vec& dth_b, const Vec& d2th_ab) const {
        if (!cf) return 0.0;
        return 2.0 * eps * eps *
               (dth_a.dot(cf->phi_quad * dth_b) + th.dot(cf->phi_quad * d2th_ab));
    }
    double cw() const { return cf ? -(eps * eps / (3.0 * (k + 3.0))) : 0.0; }

    // frame components of the displacement at (r, node)
    Vec psi(double r, const SphereNode& node) const {
        Vec out = Vec::Zero(n);
        double s = 1.0 - phi(node.theta);
        out.head(k + 1) = r * s * node.theta;
        if (cf && n > k + 1) {
            Vec w = cw() * r * (1.0 - r * r) * (cf->ric_perp.transpose() * node.theta);
            out.tail(n - k - 1) = w;
        }
        return out;
    }
    Vec dpsi_dr(double r, const SphereNode& node) const {
        Vec out = Vec::Zero(n);
        out.head(k + 1) = (1.0 - phi(node.theta)) * node.theta;
        if (cf && n > k + 1)
            out.tail(n - k - 1) = cw() * (1.0 - 3.0 * r * r) * (cf->ric_perp.transpose() * node.theta);
        return out;
    }
    Vec d2psi_drdr(double r, const SphereNode& node) const {
        Vec out = Vec::Zero(n);
        if (cf && n > k + 1)
            out.tail(n - k - 1) = cw() * (-6.0 * r) * (cf->ric_perp.transpose() * node.theta);
        return out;
    }
    Vec dpsi_dangle(double r, const SphereNode& node, int alpha) const {
        Vec out = Vec::Zero(n);
        double s = 1.0 - phi(node.theta);
        Vec dph = dphi(node.theta, node.dtheta);
        out.head(k + 1) = r * (s * node.dtheta.col(alpha) - dph(alpha) * node.theta);
        if (cf && n > k + 1)
            out.tail(n - k - 1) =
                cw() * r * (1.0 - r * r) * (cf->ric_perp.transpose() * node.dtheta.col(alpha));
        return out;
    }
    Vec d2psi_drdangle(double r, const SphereNode& node, int alpha) const {
        Vec out = Vec::Zero(n);
        double s = 1.0 - phi(node.theta);
        Vec dph = dphi(node.theta, node.dtheta);
        out.head(k + 1) = s * node.dtheta.col(alpha) - dph(alpha) * node.theta;
        if (cf && n > k + 1)
            out.tail(n - k - 1) =
                cw() * (1.0 - 3.0 * r * r) * (cf->ric_perp.transpose() * node.dtheta.col(alpha));
        return out;
    }
    Vec d2psi_dangles(double r, const SphereNode& node, int a, int b) const {
        const int kk = k;
        Vec d2th(kk + 1);
        for (int c = 0; c <= kk; ++c) d2th(c) = node.d2theta(c, a, b);
        Vec out = Vec::Zero(n);
        double s = 1.0 - phi(node.theta);
        Vec dph = dphi(node.theta, node.dtheta);
        double d2ph = d2phi(node.theta, node.dtheta.col(a), node.dtheta.col(b), d2th);
        out.head(kk + 1) = r * (s * d2th - dph(a) * node.dtheta.col(b) - dph(b) * node.dtheta.col(a) -
                                d2ph * node.theta);
        if (cf && n > kk + 1)
            out.tail(n - kk - 1) = cw() * r * (1.0 - r * r) * (cf->ric_perp.transpose() * d2th);
        return out;
    }
};

bool analytic_jets_available(const MetricChart& chart, const GrassmannPoint& gp) {
    if (chart.name() == "euclidean") return true;
    return chart.has_closed_form() && gp.p.norm() < 1e-12;
}

/// Evaluate the ambient map at arbitrary parameters (numeric path).
Vec eval_map(const MetricChart& chart, const GrassmannPoint& gp, double eps, const DisplacementMap& dm,
             bool is_sphere, const Vec& params) {
    SphereNode node;
    Vec angles;
    double r;
    if (is_sphere) {
        angles = params;
        r = 1.0;
    } else {
        angles = params.tail(params.size() - 1);
        r = params(0);
    }
    node.u = angles;
    sphere_parametrization(angles, node.theta, node.dtheta, node.d2theta);
    Vec w = eps * (gp.frame * dm.psi(r, node));
    return exp_point(chart, gp.p, w);
}

void build_node_analytic(const MetricChart& chart, const GrassmannPoint& gp, double eps,
                         const DisplacementMap& dm, bool is_sphere, double r, const SphereNode& snode,
                         bool need_d2, ImmersionNode& out) {
    const int n = chart.dim();
    const int d = is_sphere ? dm.k : dm.k + 1;
    Vec base = (chart.name() == "euclidean") ? gp.p : Vec(Vec::Zero(n));
    out.F = base + eps * (gp.frame * dm.psi(r, snode));
    out.dF.resize(n, d);
    if (is_sphere) {
        for (int a = 0; a < dm.k; ++a) out.dF.col(a) = eps * (gp.frame * dm.dpsi_dangle(r, snode, a));
    } else {
        out.dF.col(0) = eps * (gp.frame * dm.dpsi_dr(r, snode));
        for (int a = 0; a < dm.k; ++a)
            out.dF.col(a + 1) = eps * (gp.frame * dm.dpsi_dangle(r, snode, a));
    }
    if (need_d2) {
        out.d2F = Tensor3({n, d, d});
        auto set = [&](int a, int b, const Vec& v) {
            for (int i = 0; i < n; ++i) {
                out.d2F(i, a, b) = v(i);
                out.d2F(i, b, a) = v(i);
            }
        };
        if (is_sphere) {
            for (int a = 0; a < dm.k; ++a)
                for (int b = a; b < dm.k; ++b)
                    set(a, b, Vec(eps * (gp.frame * dm.d2psi_dangles(r, snode, a, b))));
        } else {
            set(0, 0, Vec(eps * (gp.frame * dm.d2psi_drdr(r, snode))));
            for (int a = 0; a < dm.k; ++a) {
                set(0, a + 1, Vec(eps * (gp.frame * dm.d2psi_drdangle(r, snode, a))));
                for (int b = a; b < dm.k; ++b)
                    set(a + 1, b + 1, Vec(eps * (gp.frame * dm.d2psi_dangles(r, snode, a, b))));
            }
        }
    }
}

void build_node_numeric(const MetricChart& chart, const GrassmannPoint& gp, double eps,
                        const DisplacementMap& dm, bool is_sphere, const Vec& params, bool need_d2,
                        double del, ImmersionNode& out) {
    const int n = chart.dim();
    const int d = static_cast<int>(params.size());
    auto f = [&](const Vec& q) { return eval_map(chart, gp, eps, dm, is_sphere, q); };
    out.F = f(params);
    out.dF.resize(n, d);
    std::vector<std::array<Vec, 4>> line(d);  // +-del, +-2del per axis
    for (int a = 0; a < d; ++a) {
        Vec e = Vec::Zero(d);
        e(a) = 1.0;
        line[a][0] = f(params - 2.0 * del * e);
        line[a][1] = f(params - del * e);
        line[a][2] = f(params + del * e);
        line[a][3] = f(params + 2.0 * del * e);
        out.dF.col(a) =
            (line[a][0] - 8.0 * line[a][1] + 8.0 * line[a][2] - line[a][3]) / (12.0 * del);
    }
    if (!need_d2) return;
    out.d2F = Tensor3({n, d, d});
    auto second_from = [&](const std::array<Vec, 4>& L) {
        return Vec((-L[3] + 16.0 * L[2] - 30.0 * out.F + 16.0 * L[1] - L[0]) / (12.0 * del * del));
    };
    std::vector<Vec> diag(d);
    for (int a = 0; a < d; ++a) {
        diag[a] = second_from(line[a]);
        for (int i = 0; i < n; ++i) out.d2F(i, a, a) = diag[a](i);
    }
    for (int a = 0; a < d; ++a)
        for (int b = a + 1; b < d; ++b) {
            Vec e = Vec::Zero(d);
            e(a) = 1.0;
            e(b) = 1.0;
            std::array<Vec, 4> L{f(params - 2.0 * del * e), f(params - del * e), f(params + del * e),
                                 f(params + 2.0 * del * e)};
            Vec dd = second_from(L);
            for (int i = 0; i < n; ++i) {
                double v = 0.5 * (dd(i) - diag[a](i) - diag[b](i));
                out.d2F(i, a, b) = v;
                out.d2F(i, b, a) = v;
            }
        }
}

ImmersionJet build_jet(const MetricChart& chart, const GrassmannPoint& gp, double eps,
                       const CorrectionFields* cf, bool is_sphere, const JetOptions& opts) {
    const int n = chart.dim();
    if (eps >= chart.domain_radius() / 2.0)
        throw DomainError("immersion radius eps must stay below domain_radius/2", 0.0);
    DisplacementMap dm{gp.k, n, eps, cf};
    auto sphere = std::make_shared<SphereGrid>(gp.k, opts.quad);
    const bool analytic = analytic_jets_available(chart, gp);

    ImmersionJet jet;
    jet.k = gp.k;
    jet.ambient = n;
    jet.param_dim = is_sphere ? gp.k : gp.k + 1;
    jet.eps = eps;
    jet.is_sphere = is_sphere;
    jet.has_d2 = opts.need_d2;
    jet.has_frames = opts.need_frames && is_sphere;
    jet.base = gp;

    std::vector<std::pair<double, double>> radial;
    if (is_sphere) {
        radial = {{1.0, 1.0}};
    } else {
        BallGrid bg(gp.k, sphere, opts.quad.radial);
        for (std::size_t i = 0; i < bg.rnodes.size(); ++i) radial.push_back({bg.rnodes[i], bg.rweights[i]});
    }

    for (auto [r, wr] : radial) {
        for (const auto& snode : sphere->nodes()) {
            ImmersionNode node;
            if (is_sphere) {
                node.u = snode.u;
                node.y = snode.theta;
            } else {
                node.u = Vec(gp.k + 1);
                node.u(0) = r;
                node.u.tail(gp.k) = snode.u;
                node.y = r * snode.theta;
            }
            node.w = wr * snode.wu;
            if (analytic) {
                build_node_analytic(chart, gp, eps, dm, is_sphere, r, snode, opts.need_d2, node);
            } else {
                build_node_numeric(chart, gp, eps, dm, is_sphere, node.u, opts.need_d2, opts.fd_delta,
                                   node);
            }
            if (opts.need_frames) {
                if (is_sphere) {
                    // inward conormal seed: -d/dr of the ball map at r = 1
                    if (analytic) {
                        node.conormal_seed = -eps * (gp.frame * dm.dpsi_dr(1.0, snode));
                    } else {
                        Vec q(gp.k + 1);
                        q(0) = 1.0;
                        q.tail(gp.k) = snode.u;
                        const double del = opts.fd_delta;
                        auto fb = [&](double rr) {
                            Vec qq = q;
                            qq(0) = rr;
                            return eval_map(chart, gp, eps, dm, false, qq);
                        };
                        node.conormal_seed = -(fb(1.0 - 2.0 * del) - 8.0 * fb(1.0 - del) +
                                               8.0 * fb(1.0 + del) - fb(1.0 + 2.0 * del)) /
                                             (12.0 * del);
                    }
                }
                // normal seeds: E_mu transported along the node's ray
                if (n > gp.k + 1) {
                    Vec w = eps * (gp.frame * dm.psi(r, snode));
                    Mat emu = gp.frame.rightCols(n - gp.k - 1);
                    if (w.norm() < 1e-300)
                        node.normal_seeds = emu;
                    else
                        node.normal_seeds = exp_with_frame(chart, gp.p, w, emu).transported_frame;
                }
            }
            jet.nodes.push_back(std::move(node));
        }
    }
    return jet;
}

}  // namespace

ImmersionJet geodesic_sphere(const MetricChart& chart, const GrassmannPoint& gp, double eps,
                             const JetOptions& opts) {
    return build_jet(chart, gp, eps, nullptr, true, opts);
}

ImmersionJet geodesic_ball(const MetricChart& chart, const GrassmannPoint& gp, double eps,
                           const JetOptions& opts) {
    return build_jet(chart, gp, eps, nullptr, false, opts);
}

ImmersionJet corrected_sphere(const MetricChart& chart, const GrassmannPoint& gp, double eps,
                              const CorrectionFields& cf, const JetOptions& opts) {
    return build_jet(chart, gp, eps, &cf, true, opts);
}

ImmersionJet corrected_ball(const MetricChart& chart, const GrassmannPoint& gp, double eps,
                            const CorrectionFields& cf, const JetOptions& opts) {
    return build_jet(chart, gp, eps, &cf, false, opts);
}

double volume(const MetricChart& chart, const ImmersionJet& jet) {
    double vol = 0.0;
    for (const auto& node : jet.nodes) {
        Mat G = chart.metric(node.F);
        Mat gbar = node.dF.transpose() * G * node.dF;
        double det = gbar.determinant();
        if (!(det > 0.0)) throw NumericalError("degenerate induced metric at an immersion node");
        vol += node.w * std::sqrt(det);
    }
    return vol;
}

double volume_checked(const MetricChart& chart, const ImmersionJet& jet,
                      const std::function<ImmersionJet(const QuadOrders&)>& rebuild, double rel_tol) {
    double v1 = volume(chart, jet);
    QuadOrders finer;
    finer.polar = 40;
    finer.azimuth = 96;
    finer.circle = 384;
    finer.radial = 40;
    double v2 = volume(chart, rebuild(finer));
    if (std::abs(v1 - v2) > rel_tol * std::max(1.0, std::abs(v2)))
        throw PrecisionError("quadrature order insufficient for requested volume accuracy");
    return v2;
}

MeanCurvatureReport mean_curvature(const MetricChart& chart, const ImmersionJet& jet) {
    if (!jet.has_d2) throw ConfigError("mean_curvature requires a jet built with need_d2");
    const int n = jet.ambient;
    const int d = jet.param_dim;
    const int nperp = n - jet.k - 1;
    MeanCurvatureReport rep;
    rep.nodes.reserve(jet.nodes.size());
    Mat prev_normals;  // sign continuity across the node ordering

    for (const auto& node : jet.nodes) {
        Mat G = chart.metric(node.F);
        Tensor3 gam = chart.christoffel(node.F);
        Mat gbar = node.dF.transpose() * G * node.dF;
        Eigen::LLT<Mat> llt(gbar);
        if (llt.info() != Eigen::Success)
            throw NumericalError("degenerate induced metric in mean_curvature");
        Mat gbar_inv = llt.solve(Mat::Identity(d, d));

        Vec Hfull = Vec::Zero(n);
        for (int a = 0; a < d; ++a)
            for (int b = 0; b < d; ++b) {
                Vec A(n);
                for (int l = 0; l < n; ++l) {
                    double v = node.d2F(l, a, b);
                    for (int i = 0; i < n; ++i)
                        for (int j = 0; j < n; ++j) v += gam(l, i, j) * node.dF(i, a) * node.dF(j, b);
                    A(l) = v;
                }
                Hfull += gbar_inv(a, b) * A;
            }
        // normal projection
        Vec coef = gbar_inv * (node.dF.transpose() * (G * Hfull));
        Vec H = Hfull - node.dF * coef;

        MeanCurvatureNode mn;
        mn.H = H;
        double tang = 0.0;
        for (int a = 0; a < d; ++a) {
            double ta = std::abs(node.dF.col(a).dot(G * H)) / std::sqrt(node.dF.col(a).dot(G * node.dF.col(a)));
            tang = std::max(tang, ta);
        }
        rep.max_tangency = std::max(rep.max_tangency, tang);

        // frames: Gram-Schmidt of [tangents | conormal seed | normal seeds]
        int extras = (jet.is_sphere ? 1 : 0) + nperp;
        Mat cols(n, d + extras);
        cols.leftCols(d) = node.dF;
        int cpos = d;
        if (jet.is_sphere) cols.col(cpos++) = node.conormal_seed;
        if (nperp > 0) cols.rightCols(nperp) = node.normal_seeds;
        Mat onb = gram_schmidt(cols, G);
        Mat normals = onb.rightCols(extras);
        if (prev_normals.size() > 0) {
            for (int c = 0; c < normals.cols(); ++c)
                if (normals.col(c).dot(prev_normals.col(c)) < 0.0) normals.col(c) = -normals.col(c);
        }
        prev_normals = normals;

        int npos = 0;
        if (jet.is_sphere) {
            mn.n = normals.col(npos++);
            mn.tangential = H.dot(G * mn.n);
        }
        mn.N.resize(n, nperp);
        mn.perp.resize(nperp);
        for (int mu = 0; mu < nperp; ++mu) {
            mn.N.col(mu) = normals.col(npos + mu);
            mn.perp(mu) = H.dot(G * mn.N.col(mu));
        }
        rep.nodes.push_back(std::move(mn));
    }
    return rep;
}

KernelModeFit kernel_mode_residual(const MetricChart& chart, const ImmersionJet& jet,
                                   const MeanCurvatureReport& report, double eps, int k) {
    if (!jet.is_sphere) throw ConfigError("kernel_mode_residual applies to sphere immersions");
    const int n = jet.ambient;
    const int nperp = n - k - 1;
    const int M = (k + 1) + nperp * (k + 2);
    const std::size_t nn = jet.nodes.size();

    // dvol weights
    std::vector<double> wv(nn);
    for (std::size_t i = 0; i < nn; ++i) {
        Mat G = chart.metric(jet.nodes[i].F);
        Mat gbar = jet.nodes[i].dF.transpose() * G * jet.nodes[i].dF;
        wv[i] = jet.nodes[i].w * std::sqrt(gbar.determinant());
    }

    auto mode = [&](int j, std::size_t i) -> Vec {
        const auto& node = jet.nodes[i];
        const auto& mc = report.nodes[i];
        if (j <= k) return Vec(node.y(j) * mc.n);
        int jj = j - (k + 1);
        int mu = jj / (k + 2);
        int a = jj % (k + 2);
        if (a <= k) return Vec(node.y(a) * mc.N.col(mu));
        return Vec(mc.N.col(mu));
    };

    Mat gramM = Mat::Zero(M, M);
    Vec rhs = Vec::Zero(M);
    double vnorm2 = 0.0;
    for (std::size_t i = 0; i < nn; ++i) {
        Mat G = chart.metric(jet.nodes[i].F);
        Vec V = report.nodes[i].H - (static_cast<double>(k) / eps) * report.nodes[i].n;
        vnorm2 += wv[i] * V.dot(G * V);
        std::vector<Vec> B(M);
        for (int j = 0; j < M; ++j) B[j] = mode(j, i);
        for (int j = 0; j < M; ++j) {
            rhs(j) += wv[i] * V.dot(G * B[j]);
            for (int l = j; l < M; ++l) {
                double v = wv[i] * B[j].dot(G * B[l]);
                gramM(j, l) += v;
                gramM(l, j) = gramM(j, l);
            }
        }
    }
    Eigen::SelfAdjointEigenSolver<Mat> es(gramM);
    if (es.eigenvalues().minCoeff() < 1e-12 * std::max(1e-300, es.eigenvalues().maxCoeff()))
        throw NumericalError("kernel_mode_residual: rank-deficient normal equations (degenerate node set)");
    Vec coef = es.eigenvectors() *
               (es.eigenvalues().cwiseInverse().asDiagonal() * (es.eigenvectors().transpose() * rhs));

    KernelModeFit fit;
    fit.a = coef.head(k + 1);
    fit.c = Mat::Zero(k + 1, nperp);
    fit.d = Vec::Zero(nperp);
    for (int mu = 0; mu < nperp; ++mu) {
        for (int a = 0; a <= k; ++a) fit.c(a, mu) = coef(k + 1 + mu * (k + 2) + a);
        fit.d(mu) = coef(k + 1 + mu * (k + 2) + k + 1);
    }
    double res2 = vnorm2 - 2.0 * coef.dot(rhs) + coef.dot(gramM * coef);
    fit.orth_residual = std::sqrt(std::max(0.0, res2));
    return fit;
}

}  // namespace gcurv
