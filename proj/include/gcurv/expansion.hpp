/// @file expansion.hpp
/// @brief Epsilon sweeps, asymptotic-order fits, the energy functional,
///        moment identities, and the term-by-term integral table.
#pragma once

#include <string>

#include "gcurv/immersion.hpp"

namespace gcurv {

struct SweepSpec {
    std::vector<double> eps_list;  // decreasing
    int drop_largest = 2;          // pre-asymptotic values excluded from fits
    double noise_floor = 1e-12;

    /// Geometric sweep, count values from eps_max down to eps_min.
    static SweepSpec geometric(double eps_max = 0.2, double eps_min = 0.0125, int count = 8);
    void validate() const;
};

struct FitResult {
    double slope = 0.0;
    double intercept = 0.0;
    double r_squared = 0.0;
    bool resolved = false;  // false: residuals at the noise floor
    int points_used = 0;
};

/// Least-squares line on (log eps, log |residual|) over the fit window.
FitResult fit_order(const std::vector<std::pair<double, double>>& eps_residual,
                    const SweepSpec& spec);

struct EnergyReport {
    double eps = 0.0;
    double vol_K = 0.0;      // corrected sphere volume
    double vol_Q = 0.0;      // corrected ball volume
    double energy = 0.0;     // vol_K - (k/eps) vol_Q
    double normalized = 0.0; // (k+1) energy / (eps^k Vol(S^k))
    double predicted = 0.0;  // 1 - eps^2 R/(2(k+3)) + eps^4 r/(2(k+3))
    double residual = 0.0;   // normalized - predicted
};

/// Energy of the corrected pair at one eps. cd/inv are the (eps-independent)
/// curvature data and invariants at gp; pass cached values during sweeps.
EnergyReport energy(const MetricChart& chart, const GrassmannPoint& gp, double eps,
                    const CurvatureData& cd, const PartialInvariants& inv,
                    const QuadOrders& quad = {});

struct MomentCheck {
    std::string identity_id;
    double quadrature_value = 0.0;
    double closed_form = 0.0;
    double abs_error = 0.0;
};

/// Second/fourth moment identities on S^k plus the general symmetric
/// fourth-moment identity on seeded random coefficient arrays.
std::vector<MomentCheck> moment_identities(int k, std::uint64_t seed = 7);

struct TermRow {
    std::string name;
    double quadrature = 0.0;
    double closed_form = 0.0;
    double rel_error = 0.0;
};

/// Term-by-term check of the displayed integrals in the energy expansion:
/// each row evaluates the integral by quadrature from the curvature data at
/// gp and compares with its closed form in the partial invariants.
std::vector<TermRow> appendix_term_table(const MetricChart& chart, const GrassmannPoint& gp,
                                         double eps);

}  // namespace gcurv
