#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <limits>

#include "govliq/firm.hpp"
#include "govliq/rng.hpp"

using namespace govliq;

namespace {

FirmParams base_firm() {
    FirmParams firm;
    firm.alpha = 0.5;
    firm.delta = 0.05;
    firm.r = 0.05;
    firm.mu_z = 0.01;
    firm.sigma_z = 0.2;
    firm.theta = 0.5;
    firm.gamma = 0.12;
    firm.s_total = 1e6;
    firm.z0 = 1.0;
    firm.t_eval = 1.0;
    firm.w_t = 0.0;
    return firm;
}

GovernanceSpec general(double c_m, double kappa = 1.0, double beta = 1.0) {
    GovernanceSpec gov;
    gov.c_m = c_m;
    gov.kind = FirmKind::General;
    gov.penalty = {kappa, beta};
    return gov;
}

GovernanceSpec controlled(double c_m, double rho0) {
    GovernanceSpec gov;
    gov.c_m = c_m;
    gov.kind = FirmKind::Controlled;
    gov.rho0 = rho0;
    return gov;
}

// Composite-Simpson quadrature of the truncated value integral
// int_0^H exp(-(gamma - mu) u) du scaled by the instantaneous payout;
// an independent route to the perpetual discounted value.
double share_value_by_quadrature(const FirmParams& firm, const XDynamics& dyn, double rho_hat,
                                 double horizon, int panels) {
    const double x_now = x_at_eval(firm, dyn);
    auto integrand = [&](double u) {
        return std::exp(-firm.gamma * u) * (1.0 - rho_hat) * x_now * std::exp(dyn.mu * u);
    };
    const double h = horizon / (2.0 * panels);
    double acc = integrand(0.0) + integrand(horizon);
    for (int i = 1; i < 2 * panels; ++i) acc += integrand(i * h) * (i % 2 == 1 ? 4.0 : 2.0);
    return acc * h / 3.0;
}

// Per-share incomes of the controlling community and outside investors
// recomputed from the production function and the penalty directly.
double benefit_of_control_from_raw_incomes(const FirmParams& firm, const GovernanceSpec& gov) {
    const double z_eval =
        firm.z0 * std::exp((firm.mu_z - 0.5 * firm.sigma_z * firm.sigma_z) * firm.t_eval +
                           firm.sigma_z * firm.w_t);
    const double capital = optimal_capital(firm, z_eval);
    const double profit = z_eval * std::pow(capital, firm.alpha) - (firm.r + firm.delta) * capital;
    const double rho = agency_cost_share(gov, firm);
    const double scale = gov.penalty_scale();
    const double penalty = scale > 0.0 ? rho * rho / scale : 0.0;
    const double controlling_total = (rho + (1.0 - rho) * firm.theta - penalty) * profit;
    const double outside_total = (1.0 - rho) * (1.0 - firm.theta) * profit;
    const double controlling_per_share = controlling_total / (firm.theta * firm.s_total);
    const double outside_per_share = outside_total / ((1.0 - firm.theta) * firm.s_total);
    return controlling_per_share - outside_per_share;
}

}  // namespace

TEST_CASE("extraction share: full ownership leaves nothing to extract") {
    FirmParams firm = base_firm();
    firm.theta = 1.0;
    CHECK(agency_cost_share(general(0.4), firm) == 0.0);
    CHECK(agency_cost_share(general(0.9), firm) == 0.0);
}

TEST_CASE("extraction share: zero governance bound pins the share at zero") {
    CHECK(agency_cost_share(general(0.0), base_firm()) == 0.0);
}

TEST_CASE("extraction share: interior first-order solution") {
    // (1 - 0.5)/2 * 0.4 = 0.1
    CHECK(agency_cost_share(general(0.4), base_firm()) == doctest::Approx(0.1).epsilon(1e-14));
}

TEST_CASE("extraction share: clamped at the bound when the penalty is weak") {
    // interior solution 0.25 * 8 * 0.1 = 0.2 > c_m = 0.1
    CHECK(agency_cost_share(general(0.1, 8.0, 1.0), base_firm()) == doctest::Approx(0.1));
}

TEST_CASE("extraction share: controlled firms use the exogenous share") {
    CHECK(agency_cost_share(controlled(0.4, 0.17), base_firm()) == 0.17);
    CHECK_THROWS_AS(agency_cost_share(controlled(0.1, 0.2), base_firm()), std::invalid_argument);
}

TEST_CASE("extraction share: non-decreasing in the governance bound") {
    SplitMix64 rng(7);
    for (int trial = 0; trial < 50; ++trial) {
        FirmParams firm = base_firm();
        firm.theta = rng.uniform(0.05, 0.95);
        const double kappa = rng.uniform(0.2, 3.0);
        const double beta = rng.uniform(0.2, 1.0);
        double previous = -1.0;
        for (double c = 0.02; c < 0.99; c += 0.02) {
            const double rho = agency_cost_share(general(c, kappa, beta), firm);
            CHECK(rho >= previous);
            CHECK(rho <= c);
            previous = rho;
        }
    }
}

TEST_CASE("optimal capital") {
    FirmParams firm = base_firm();
    CHECK(optimal_capital(firm, 0.0) == 0.0);
    // (0.5 / 0.1)^2 = 25
    CHECK(optimal_capital(firm, 1.0) == doctest::Approx(25.0).epsilon(1e-12));
    // power-law homogeneity: doubling z scales by 2^(1/(1-alpha))
    const double scale = std::pow(2.0, 1.0 / (1.0 - firm.alpha));
    CHECK(optimal_capital(firm, 2.0) ==
          doctest::Approx(scale * optimal_capital(firm, 1.0)).epsilon(1e-12));
    CHECK_THROWS_AS(optimal_capital(firm, -1.0), std::invalid_argument);
}

TEST_CASE("controller objective: boundary values") {
    FirmParams firm = base_firm();
    CHECK(controller_objective(0.0, general(0.4), firm) == doctest::Approx(firm.theta));
    CHECK_THROWS_AS(controller_objective(0.5, general(0.4), firm), std::invalid_argument);
    CHECK_THROWS_AS(controller_objective(-0.1, general(0.4), firm), std::invalid_argument);
    CHECK_THROWS_AS(controller_objective(0.1, controlled(0.4, 0.1), firm),
                    std::invalid_argument);
    // degenerate penalty scale at c_m = 0: only rho = 0 is feasible
    CHECK(controller_objective(0.0, general(0.0), firm) == doctest::Approx(firm.theta));
}

TEST_CASE("controller objective: grid argmax agrees with the closed-form share") {
    FirmParams firm = base_firm();
    const GovernanceSpec gov = general(0.4);
    const double step = 1e-4;
    double best_rho = 0.0;
    double best = -std::numeric_limits<double>::infinity();
    for (double rho = 0.0; rho <= gov.c_m + 0.5 * step; rho += step) {
        const double value = controller_objective(std::min(rho, gov.c_m), gov, firm);
        if (value > best) {
            best = value;
            best_rho = std::min(rho, gov.c_m);
        }
    }
    CHECK(std::abs(best_rho - agency_cost_share(gov, firm)) <= step + 1e-12);
}

TEST_CASE("controller objective: full ownership is maximized at zero extraction") {
    FirmParams firm = base_firm();
    firm.theta = 1.0;
    const GovernanceSpec gov = general(0.4);
    CHECK(controller_objective(0.0, gov, firm) == doctest::Approx(1.0));
    for (double rho : {0.05, 0.1, 0.2, 0.4})
        CHECK(controller_objective(rho, gov, firm) < controller_objective(0.0, gov, firm));
}

TEST_CASE("derived dynamics") {
    FirmParams firm = base_firm();
    const XDynamics dyn = derive_x_dynamics(firm);
    CHECK(dyn.mu == doctest::Approx(0.06).epsilon(1e-14));
    CHECK(dyn.sigma == doctest::Approx(0.4).epsilon(1e-14));

    SUBCASE("deterministic state: volatility passes through the exponent") {
        firm.sigma_z = 0.0;
        const XDynamics det = derive_x_dynamics(firm);
        CHECK(det.sigma == 0.0);
        CHECK(det.mu == doctest::Approx(firm.mu_z / (1.0 - firm.alpha)).epsilon(1e-14));
    }

    SUBCASE("vanishing elasticity recovers the raw state dynamics") {
        firm.alpha = 1e-9;
        const XDynamics flat = derive_x_dynamics(firm);
        CHECK(flat.mu == doctest::Approx(firm.mu_z).epsilon(1e-6));
        CHECK(flat.sigma == doctest::Approx(firm.sigma_z).epsilon(1e-6));
    }

    SUBCASE("diverging discounting is rejected") {
        firm.gamma = 0.05;  // below the derived drift 0.06
        CHECK_THROWS_AS(derive_x_dynamics(firm), std::domain_error);
    }
}

TEST_CASE("share value: linear in the believed share") {
    const FirmParams firm = base_firm();
    const XDynamics dyn = derive_x_dynamics(firm);
    const double ceiling = share_value(firm, dyn, 0.0);
    CHECK(ceiling > 0.0);
    SplitMix64 rng(11);
    for (int i = 0; i < 25; ++i) {
        const double rho_hat = rng.uniform(0.0, 0.999);
        CHECK(share_value(firm, dyn, rho_hat) ==
              doctest::Approx((1.0 - rho_hat) * ceiling).epsilon(1e-13));
    }
    const double c_m = 0.35;
    CHECK(share_value(firm, dyn, c_m) == doctest::Approx((1.0 - c_m) * ceiling).epsilon(1e-13));
    CHECK(share_value(firm, dyn, 0.2) > share_value(firm, dyn, 0.3));
    CHECK_THROWS_AS(share_value(firm, dyn, 1.0), std::invalid_argument);
}

TEST_CASE("share value: finite-horizon quadrature oracle") {
    const FirmParams firm = base_firm();
    const XDynamics dyn = derive_x_dynamics(firm);
    const double horizon = 50.0 / (firm.gamma - dyn.mu);
    for (double rho_hat : {0.0, 0.1, 0.45}) {
        const double oracle = share_value_by_quadrature(firm, dyn, rho_hat, horizon, 20000);
        const double value = share_value(firm, dyn, rho_hat);
        CHECK(std::abs(oracle - value) / value < 1e-6);
    }
}

TEST_CASE("share value: nonzero path input shifts the level only") {
    FirmParams firm = base_firm();
    firm.w_t = 0.7;
    const XDynamics dyn = derive_x_dynamics(firm);
    const double horizon = 50.0 / (firm.gamma - dyn.mu);
    const double oracle = share_value_by_quadrature(firm, dyn, 0.2, horizon, 20000);
    CHECK(std::abs(oracle - share_value(firm, dyn, 0.2)) / oracle < 1e-6);
}

TEST_CASE("benefit of control") {
    const FirmParams firm = base_firm();
    const XDynamics dyn = derive_x_dynamics(firm);

    SUBCASE("no penalty headroom means no extraction advantage") {
        CHECK(benefit_of_control(firm, general(0.0), dyn) == 0.0);
    }

    SUBCASE("matches the raw per-share income difference") {
        for (double c_m : {0.05, 0.2, 0.4, 0.7, 0.95}) {
            const GovernanceSpec gov = general(c_m);
            const double direct = benefit_of_control(firm, gov, dyn);
            const double raw = benefit_of_control_from_raw_incomes(firm, gov);
            CHECK(direct > 0.0);
            CHECK(std::abs(direct - raw) / direct < 1e-12);
        }
    }

    SUBCASE("matches the interior closed form when the bound is slack") {
        const GovernanceSpec gov = general(0.4);
        const double scale = gov.penalty_scale();
        const double closed = (1.0 - firm.theta * firm.theta) * scale / (4.0 * firm.theta) *
                              x_at_eval(firm, dyn);
        CHECK(benefit_of_control(firm, gov, dyn) == doctest::Approx(closed).epsilon(1e-13));
    }

    SUBCASE("weakly increasing in the governance bound") {
        double previous = -1.0;
        for (double c_m = 0.05; c_m < 0.96; c_m += 0.05) {
            const double value = benefit_of_control(firm, general(c_m), dyn);
            CHECK(value >= previous);
            previous = value;
        }
    }

    SUBCASE("degenerate ownership rejected") {
        FirmParams broken = base_firm();
        broken.theta = 0.0;
        CHECK_THROWS_AS(benefit_of_control(broken, general(0.4), dyn), std::domain_error);
    }
}

TEST_CASE("maximum discount rate") {
    CHECK(s_bar(general(0.4), 0.4) == 0.0);
    CHECK(s_bar(general(0.4), 0.0) == doctest::Approx(0.4));
    CHECK(s_bar(general(0.4), 0.1) == doctest::Approx(1.0 / 3.0).epsilon(1e-14));
    CHECK_THROWS_AS(s_bar(general(0.4), 0.5), std::invalid_argument);
}

TEST_CASE("retained-earnings curvature: share minus bound-weighted slope stays positive") {
    // rho(c) - c * rho'(c) > 0 for strictly concave penalty scales; the
    // linear member of the family sits exactly on the boundary.
    const auto curvature_gap = [](const FirmParams& firm, double kappa, double beta, double c) {
        const double h = 1e-5 * c;
        const double up = agency_cost_share(general(c + h, kappa, beta), firm);
        const double down = agency_cost_share(general(c - h, kappa, beta), firm);
        const double rho = agency_cost_share(general(c, kappa, beta), firm);
        return rho - c * (up - down) / (2.0 * h);
    };
    SplitMix64 rng(23);
    for (int trial = 0; trial < 60; ++trial) {
        FirmParams firm = base_firm();
        firm.theta = rng.uniform(0.1, 0.9);
        const double kappa = rng.uniform(0.2, 1.5);
        const double beta = rng.uniform(0.2, 0.95);
        const double c = rng.uniform(0.05, 0.9);
        // only where the interior solution binds
        if (0.5 * (1.0 - firm.theta) * kappa * std::pow(c, beta) >= c) continue;
        CHECK(curvature_gap(firm, kappa, beta, c) > 0.0);
    }
    // linear penalty: the gap degenerates to zero
    CHECK(std::abs(curvature_gap(base_firm(), 1.0, 1.0, 0.4)) < 1e-10);
}
