#include "govliq/firm.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace govliq {

namespace {

void require(bool ok, const std::string& msg) {
    if (!ok) throw std::invalid_argument(msg);
}

}  // namespace

double GovernanceSpec::penalty_scale() const {
    if (c_m == 0.0) return 0.0;
    return penalty.kappa * std::pow(c_m, penalty.beta);
}

void GovernanceSpec::validate() const {
    require(c_m >= 0.0 && c_m < 1.0, "governance.c_m must lie in [0, 1)");
    if (kind == FirmKind::General) {
        require(penalty.kappa > 0.0, "governance penalty scale requires kappa > 0");
        require(penalty.beta > 0.0 && penalty.beta <= 1.0,
                "governance penalty scale requires 0 < beta <= 1");
    } else {
        require(rho0 >= 0.0, "governance.rho0 must be non-negative");
        require(rho0 <= c_m, "governance.rho0 must not exceed c_m");
    }
}

void FirmParams::validate() const {
    require(alpha > 0.0 && alpha < 1.0, "firm.alpha must lie in (0, 1)");
    require(r + delta > 0.0, "firm.r + firm.delta must be positive");
    require(theta > 0.0 && theta <= 1.0, "firm.theta must lie in (0, 1]");
    require(sigma_z >= 0.0, "firm.sigma_z must be non-negative");
    require(s_total > 0.0, "firm.s_total must be positive");
    require(z0 > 0.0, "firm.z0 must be positive");
    require(t_eval >= 0.0, "firm.t_eval must be non-negative");
    require(std::isfinite(gamma), "firm.gamma must be finite");
}

double agency_cost_share(const GovernanceSpec& gov, const FirmParams& firm) {
    gov.validate();
    if (gov.kind == FirmKind::Controlled) return gov.rho0;
    const double interior = 0.5 * (1.0 - firm.theta) * gov.penalty_scale();
    return std::min(interior, gov.c_m);
}

double optimal_capital(const FirmParams& firm, double z) {
    if (z < 0.0) throw std::invalid_argument("optimal_capital: state value must be non-negative");
    if (z == 0.0) return 0.0;
    const double inv = 1.0 / (1.0 - firm.alpha);
    return std::pow(firm.alpha / (firm.r + firm.delta), inv) * std::pow(z, inv);
}

double controller_objective(double rho, const GovernanceSpec& gov, const FirmParams& firm) {
    if (gov.kind != FirmKind::General)
        throw std::invalid_argument("controller_objective: general-type firms only");
    if (rho < 0.0 || rho > gov.c_m)
        throw std::invalid_argument("controller_objective: rho must lie in [0, c_m]");
    const double scale = gov.penalty_scale();
    if (scale == 0.0) {
        if (rho > 0.0) return -std::numeric_limits<double>::infinity();
        return firm.theta;
    }
    return rho + (1.0 - rho) * firm.theta - rho * rho / scale;
}

XDynamics derive_x_dynamics(const FirmParams& firm) {
    firm.validate();
    const double one_minus = 1.0 - firm.alpha;
    XDynamics dyn;
    dyn.mu = firm.mu_z / one_minus +
             0.5 * firm.sigma_z * firm.sigma_z * firm.alpha / (one_minus * one_minus);
    dyn.sigma = firm.sigma_z / one_minus;
    dyn.x0 = one_minus / firm.s_total *
             std::pow(firm.alpha / (firm.r + firm.delta), firm.alpha / one_minus) *
             std::pow(firm.z0, 1.0 / one_minus);
    if (firm.gamma <= dyn.mu)
        throw std::domain_error(
            "derive_x_dynamics: discounted cash flow diverges, gamma must exceed the derived "
            "drift mu");
    return dyn;
}

double x_at_eval(const FirmParams& firm, const XDynamics& dyn) {
    return dyn.x0 *
           std::exp((dyn.mu - 0.5 * dyn.sigma * dyn.sigma) * firm.t_eval + dyn.sigma * firm.w_t);
}

double share_value(const FirmParams& firm, const XDynamics& dyn, double rho_hat) {
    if (rho_hat < 0.0 || rho_hat >= 1.0)
        throw std::invalid_argument("share_value: believed share must lie in [0, 1)");
    if (firm.gamma <= dyn.mu)
        throw std::domain_error("share_value: gamma must exceed mu for the value to be finite");
    return (1.0 - rho_hat) / (firm.gamma - dyn.mu) * x_at_eval(firm, dyn);
}

double benefit_of_control(const FirmParams& firm, const GovernanceSpec& gov,
                          const XDynamics& dyn) {
    if (gov.kind != FirmKind::General)
        throw std::invalid_argument("benefit_of_control: general-type firms only");
    if (firm.theta <= 0.0)
        throw std::domain_error("benefit_of_control: theta must be positive");
    const double scale = gov.penalty_scale();
    if (scale == 0.0) return 0.0;
    const double rho = agency_cost_share(gov, firm);
    return (rho - rho * rho / scale) / firm.theta * x_at_eval(firm, dyn);
}

double s_bar(const GovernanceSpec& gov, double rho) {
    if (rho < 0.0 || rho > gov.c_m || gov.c_m >= 1.0)
        throw std::invalid_argument("s_bar: requires 0 <= rho <= c_m < 1");
    return (gov.c_m - rho) / (1.0 - rho);
}

}  // namespace govliq
