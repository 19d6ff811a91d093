/// @file immersion.hpp
/// @brief Parametrized immersed submanifolds: geodesic spheres and balls,
///        their corrected (approximately CMC / approximately minimal)
///        versions, induced volumes, mean curvature, and the kernel-mode
///        residual projection.
#pragma once

#include "gcurv/grassmann.hpp"
#include "gcurv/quadrature.hpp"

namespace gcurv {

/// Correction fields attached to a Grassmann point:
///   phi(Theta)  = eps^2 (phi_const + Theta^T phi_quad Theta)   (scalar, on S^k)
///   W^mu(y)     = -eps^2/(3(k+3)) (1-|y|^2) ricperp(y, E_mu)   (on B^{k+1})
/// phi_perp is identically zero at this order.
struct CorrectionFields {
    int k = 0;
    double phi_const = 0.0;  // 2 R_{k+1} / (3 k (k+2))
    Mat phi_quad;            // -ric / (3 (k+2)),  (k+1)x(k+1)
    Mat ric_perp;            // (k+1)x(m-k)

    double phi(double eps, const Vec& theta) const {
        return eps * eps * (phi_const + theta.dot(phi_quad * theta));
    }
    /// W in frame components E_{k+2}.. (an (m-k)-vector), y in the unit ball.
    Vec w_field(double eps, const Vec& y) const {
        return -(eps * eps / (3.0 * (k + 3.0))) * (1.0 - y.squaredNorm()) * (ric_perp.transpose() * y);
    }
};

CorrectionFields correction_fields(const CurvatureData& cd, const GrassmannPoint& gp);

struct ImmersionNode {
    Vec u;            // parameters: angles (sphere) or [r, angles] (ball)
    Vec y;            // point of S^k or B^{k+1} in Pi-coordinates
    Vec F;            // ambient chart coordinates
    Mat dF;           // (m+1) x param_dim
    Tensor3 d2F;      // (m+1, d, d), only when requested
    double w = 0.0;   // parameter-space quadrature weight
    Vec conormal_seed;  // spheres: inward ball direction (ambient)
    Mat normal_seeds;   // (m+1) x (m-k): transported E_mu
};

struct ImmersionJet {
    int k = 0;
    int ambient = 0;
    int param_dim = 0;
    double eps = 0.0;
    bool is_sphere = true;
    bool has_d2 = false;
    bool has_frames = false;
    GrassmannPoint base;
    std::vector<ImmersionNode> nodes;
};

struct JetOptions {
    bool need_d2 = false;
    bool need_frames = false;
    QuadOrders quad;
    double fd_delta = 0.01;  // parameter FD step for charts without closed-form jets
};

/// Theta |-> exp_p(eps Theta^a E_a) on the S^k grid.
ImmersionJet geodesic_sphere(const MetricChart& chart, const GrassmannPoint& gp, double eps,
                             const JetOptions& opts = {});

/// y |-> exp_p(eps y^a E_a) on the B^{k+1} grid.
ImmersionJet geodesic_ball(const MetricChart& chart, const GrassmannPoint& gp, double eps,
                           const JetOptions& opts = {});

/// Theta |-> exp_p(eps (1 - phi(Theta)) Theta^a E_a).
ImmersionJet corrected_sphere(const MetricChart& chart, const GrassmannPoint& gp, double eps,
                              const CorrectionFields& cf, const JetOptions& opts = {});

/// y |-> exp_p(eps (y + u_phi(y) + W_eps(y))), u_phi(y) = -phi(y/|y|) y.
ImmersionJet corrected_ball(const MetricChart& chart, const GrassmannPoint& gp, double eps,
                            const CorrectionFields& cf, const JetOptions& opts = {});

/// Integral of sqrt(det gbar) over the parameter grid.
double volume(const MetricChart& chart, const ImmersionJet& jet);

/// Volume with a refinement-based error estimate: rebuilds the immersion on
/// a finer rule via `rebuild` and throws PrecisionError when the two rules
/// disagree beyond rel_tol.
double volume_checked(const MetricChart& chart, const ImmersionJet& jet,
                      const std::function<ImmersionJet(const QuadOrders&)>& rebuild,
                      double rel_tol = 1e-8);

struct MeanCurvatureNode {
    Vec H;             // ambient mean curvature vector
    Vec n;             // unit conormal (spheres; empty for balls)
    Mat N;             // orthonormal normal frame of the ball restricted here
    double tangential = 0.0;  // g(H, n)
    Vec perp;          // g(H, N_mu)
};

struct MeanCurvatureReport {
    std::vector<MeanCurvatureNode> nodes;
    double max_tangency = 0.0;  // max |g(H, tangent)| over nodes (orthogonality check)
};

MeanCurvatureReport mean_curvature(const MetricChart& chart, const ImmersionJet& jet);

struct KernelModeFit {
    Vec a;               // k+1
    Mat c;               // (k+1) x (m-k)
    Vec d;               // m-k
    double orth_residual = 0.0;
    double total_norm() const {
        return std::sqrt(a.squaredNorm() + c.squaredNorm() + d.squaredNorm());
    }
};

/// Least-squares projection of H - (k/eps) n onto the kernel modes
/// span{g_p(.,Theta) n} + span{(g_p(.,Theta) + const) N_mu} over the node
/// set, in the L^2(dvol) inner product of the immersion.
KernelModeFit kernel_mode_residual(const MetricChart& chart, const ImmersionJet& jet,
                                   const MeanCurvatureReport& report, double eps, int k);

}  // namespace gcurv
