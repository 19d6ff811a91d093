/// @file grassmann.hpp
/// @brief Points of the Grassmann bundle, the partial curvature invariants
///        (partial scalar, partial Ricci, restricted norms, the quartic
///        invariant r, Psi), and critical-point search by Riemannian descent.
#pragma once

#include "gcurv/curvature.hpp"

namespace gcurv {

/// A base point plus an adapted g-orthonormal frame; the first k+1 columns
/// span the plane Pi_p.
struct GrassmannPoint {
    Vec p;
    Mat frame;
    int k = 1;

    /// Orthonormalizes the seed columns at p (fixed order, positive diagonal).
    static GrassmannPoint make(const MetricChart& chart, const Vec& p, const Mat& seed_frame, int k);
    /// Coordinate-axis frame at p.
    static GrassmannPoint axes(const MetricChart& chart, const Vec& p, int k);
};

struct PartialInvariants {
    double scalar_k1 = 0.0;   // R_{k+1}
    Mat ric;                  // (k+1)x(k+1)
    Mat ric_perp;             // (k+1)x(m-k)
    double norm_R = 0.0;      // ||R_{k+1}||^2
    double norm_R_perp = 0.0; // ||R^perp_{k+1}||^2
    double lap_scalar = 0.0;  // Delta^g_{k+1} R_{k+1}
    double r_invariant = 0.0;
    double psi = 0.0;         // Psi(eps, Pi_p), stored with its eps
    double psi_eps = 0.0;
};

double partial_scalar(const CurvatureData& cd, const GrassmannPoint& gp);
std::pair<Mat, Mat> partial_ricci(const CurvatureData& cd, const GrassmannPoint& gp);
std::pair<double, double> restricted_riemann_norms(const CurvatureData& cd, const GrassmannPoint& gp);

/// Sum over i <= k+1 of second differences of R_{k+1}(Pi_{exp_p(t E_i)}) at
/// t = 0, the plane transported in parallel. 5-point stencil with the given
/// step (default 1e-2; the metric-derivative step h2 is far too small for
/// second differences of quantities carrying ~1e-12 noise).
double partial_laplacian_scalar(const MetricChart& chart, const GrassmannPoint& gp, double step = 1e-2);

/// Same, with an h vs h/2 error estimate; throws PrecisionError when the
/// estimate exceeds both 5% of the value and an absolute floor.
double partial_laplacian_scalar_checked(const MetricChart& chart, const GrassmannPoint& gp,
                                        double step = 1e-2, double abs_floor = 1e-4);

/// The quartic curvature invariant r from its scalar ingredients.
double r_invariant_value(int k, double scalar, double ric_norm2, double norm_R, double ric_perp_norm2,
                         double norm_R_perp, double lap_scalar);

/// Psi = 2 eps^{-2} (k+3) (1 - (k+1) energy / (eps^k vol_sk)).
double psi_value(double energy, double eps, int k, double vol_sk);

/// Everything except psi (filled by callers that evaluate the energy).
PartialInvariants compute_invariants(const MetricChart& chart, const GrassmannPoint& gp,
                                     const CurvatureData& cd);

struct CriticalOptions {
    double grad_tol = 1e-9;
    int max_iters = 200;
    double fd_step = 1e-3;
    double hess_step = 5e-3;
    double newton_threshold = 1e-3;
    double nondegeneracy_floor = 1e-4;  // relative to the largest |eigenvalue|
    double hessian_noise = 1e-6;        // absolute FD-noise scale for eigenvalues
};

struct CriticalPointResult {
    GrassmannPoint point;
    double gradient_norm = 0.0;
    Vec hessian_eigenvalues;
    bool nondegenerate = false;
    int iterations = 0;
    double objective = 0.0;  // R_{k+1} at the point
};

/// Parameter space: base translations (m+1, frame components) plus plane
/// rotations Pi -> Pi^perp ((k+1)(m-k) skew parameters). The retraction moves
/// p by exp, transports the frame in parallel, applies exp(tA), and
/// re-orthonormalizes. Both descent directions (minimize R and minimize -R)
/// are tried, with Newton refinement near critical points; ties break by
/// lowest gradient norm, then lexicographic parameter order.
CriticalPointResult find_critical(const MetricChart& chart, const GrassmannPoint& seed,
                                  const CriticalOptions& opts = {});

/// The retraction used by find_critical (exposed for tests and sweeps).
GrassmannPoint retract(const MetricChart& chart, const GrassmannPoint& gp, const Vec& theta);

}  // namespace gcurv
