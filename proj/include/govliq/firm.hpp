#pragma once

#include <cstdint>

namespace govliq {

/// Penalty-scale family f(c) = kappa * c^beta used by general-type firms.
/// Increasing and concave on [0,1) with f(0) = 0 requires kappa > 0 and
/// 0 < beta <= 1.
struct PowerPenalty {
    double kappa = 1.0;
    double beta = 1.0;
};

enum class FirmKind { General, Controlled };

/// Governance bound c_m plus the firm type. General firms choose their
/// extraction share against the penalty f; controlled firms carry an
/// exogenous extraction share rho0 <= c_m.
struct GovernanceSpec {
    double c_m = 0.0;
    FirmKind kind = FirmKind::General;
    PowerPenalty penalty{};
    double rho0 = 0.0;

    double penalty_scale() const;  // f(c_m)
    void validate() const;         // throws std::invalid_argument
};

/// Production, discount and share parameters of the representative firm.
/// w_t is the realized Brownian value at the valuation time t_eval; it is
/// a fixed input, never sampled here.
struct FirmParams {
    double alpha = 0.5;     // output elasticity, 0 < alpha < 1
    double delta = 0.05;    // capital depreciation rate
    double r = 0.05;        // borrowing rate
    double mu_z = 0.01;     // drift of the technology-cost state
    double sigma_z = 0.2;   // volatility of the technology-cost state
    double theta = 0.5;     // controlling community's equity fraction
    double gamma = 0.12;    // outside-investor discount rate
    double s_total = 1e6;   // total share count
    double z0 = 1.0;        // initial technology-cost state
    double t_eval = 1.0;    // valuation time
    double w_t = 0.0;       // realized Brownian value at t_eval

    void validate() const;  // throws std::invalid_argument
};

/// Drift/volatility/initial value of the per-share max-profit process X
/// derived from the technology-cost dynamics by Ito's formula.
struct XDynamics {
    double mu = 0.0;
    double sigma = 0.0;
    double x0 = 0.0;
};

/// Extraction share chosen by the controlling community. General firms:
/// the interior first-order solution (1-theta)/2 * f(c_m) clamped to
/// [0, c_m]; controlled firms: rho0. Always in [0, c_m].
double agency_cost_share(const GovernanceSpec& gov, const FirmParams& firm);

/// Profit-maximizing capital (alpha/(r+delta))^(1/(1-alpha)) * z^(1/(1-alpha)).
/// Rejects z < 0.
double optimal_capital(const FirmParams& firm, double z);

/// Per-unit-profit objective of the controlling community:
/// rho + (1-rho)*theta - rho^2 / f(c_m). General firms only; rho must lie
/// in [0, c_m]. Returns -infinity if f(c_m) = 0 with rho > 0, and theta
/// if f(c_m) = 0 with rho = 0.
double controller_objective(double rho, const GovernanceSpec& gov, const FirmParams& firm);

/// Dynamics of X from the firm parameters. Throws std::domain_error when
/// gamma <= mu, where the perpetual discounted cash flow diverges.
XDynamics derive_x_dynamics(const FirmParams& firm);

/// X evaluated at t_eval on the realized path: x0 * exp((mu - sigma^2/2) *
/// t_eval + sigma * w_t).
double x_at_eval(const FirmParams& firm, const XDynamics& dyn);

/// Per-share value under a believed extraction share rho_hat:
/// (1 - rho_hat)/(gamma - mu) * X at t_eval. Linear and decreasing in
/// rho_hat. Throws std::domain_error when gamma <= mu.
double share_value(const FirmParams& firm, const XDynamics& dyn, double rho_hat);

/// Per-share income advantage of the controlling community over outside
/// investors: (rho - rho^2/f(c_m))/theta * X at t_eval, with rho the
/// firm's chosen extraction share. Zero when f(c_m) = 0; weakly
/// increasing in c_m. Throws std::domain_error when theta <= 0.
double benefit_of_control(const FirmParams& firm, const GovernanceSpec& gov, const XDynamics& dyn);

/// Maximum possible price discount (c_m - rho)/(1 - rho), in [0, 1).
double s_bar(const GovernanceSpec& gov, double rho);

}  // namespace govliq
