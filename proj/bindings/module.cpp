#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "govliq/config.hpp"
#include "govliq/liquidity.hpp"
#include "govliq/sweep.hpp"

namespace py = pybind11;
using namespace govliq;

PYBIND11_MODULE(_govliq, m) {
    m.doc() = "Governance / noise-trading stock liquidity model";

    py::enum_<FirmKind>(m, "FirmKind")
        .value("General", FirmKind::General)
        .value("Controlled", FirmKind::Controlled);

    py::class_<PowerPenalty>(m, "PowerPenalty")
        .def(py::init<>())
        .def(py::init([](double kappa, double beta) {
                 return PowerPenalty{kappa, beta};
             }),
             py::arg("kappa"), py::arg("beta"))
        .def_readwrite("kappa", &PowerPenalty::kappa)
        .def_readwrite("beta", &PowerPenalty::beta);

    py::class_<GovernanceSpec>(m, "GovernanceSpec")
        .def(py::init<>())
        .def(py::init([](double c_m, FirmKind kind, PowerPenalty penalty, double rho0) {
                 return GovernanceSpec{c_m, kind, penalty, rho0};
             }),
             py::arg("c_m"), py::arg("kind") = FirmKind::General,
             py::arg("penalty") = PowerPenalty{}, py::arg("rho0") = 0.0)
        .def_readwrite("c_m", &GovernanceSpec::c_m)
        .def_readwrite("kind", &GovernanceSpec::kind)
        .def_readwrite("penalty", &GovernanceSpec::penalty)
        .def_readwrite("rho0", &GovernanceSpec::rho0)
        .def("penalty_scale", &GovernanceSpec::penalty_scale)
        .def("validate", &GovernanceSpec::validate);

    py::class_<FirmParams>(m, "FirmParams")
        .def(py::init<>())
        .def_readwrite("alpha", &FirmParams::alpha)
        .def_readwrite("delta", &FirmParams::delta)
        .def_readwrite("r", &FirmParams::r)
        .def_readwrite("mu_z", &FirmParams::mu_z)
        .def_readwrite("sigma_z", &FirmParams::sigma_z)
        .def_readwrite("theta", &FirmParams::theta)
        .def_readwrite("gamma", &FirmParams::gamma)
        .def_readwrite("s_total", &FirmParams::s_total)
        .def_readwrite("z0", &FirmParams::z0)
        .def_readwrite("t_eval", &FirmParams::t_eval)
        .def_readwrite("w_t", &FirmParams::w_t)
        .def("validate", &FirmParams::validate);

    py::class_<XDynamics>(m, "XDynamics")
        .def(py::init<>())
        .def_readwrite("mu", &XDynamics::mu)
        .def_readwrite("sigma", &XDynamics::sigma)
        .def_readwrite("x0", &XDynamics::x0);

    py::class_<MarketParams>(m, "MarketParams")
        .def(py::init<>())
        .def_readwrite("lambda_", &MarketParams::lambda)
        .def_readwrite("delta_t", &MarketParams::delta_t)
        .def_readwrite("n_informed", &MarketParams::n_informed)
        .def_readwrite("m_deals", &MarketParams::m_deals)
        .def_readwrite("n_shares_per_deal", &MarketParams::n_shares_per_deal)
        .def("arrival_mean", &MarketParams::arrival_mean)
        .def("surplus_deals", &MarketParams::surplus_deals)
        .def("validate", &MarketParams::validate);

    py::class_<BeliefProfile>(m, "BeliefProfile")
        .def(py::init<>())
        .def_readwrite("informed_value", &BeliefProfile::informed_value)
        .def_readwrite("noise_estimates", &BeliefProfile::noise_estimates)
        .def_readwrite("floor", &BeliefProfile::floor)
        .def_readwrite("ceiling", &BeliefProfile::ceiling);

    py::class_<AuctionOutcome>(m, "AuctionOutcome")
        .def_readonly("deal_prices", &AuctionOutcome::deal_prices)
        .def_readonly("final_price", &AuctionOutcome::final_price)
        .def_readonly("floor_triggered", &AuctionOutcome::floor_triggered);

    py::class_<EquilibriumCheck>(m, "EquilibriumCheck")
        .def_readonly("confirmed", &EquilibriumCheck::confirmed)
        .def_readonly("trader", &EquilibriumCheck::trader)
        .def_readonly("deal", &EquilibriumCheck::deal)
        .def_readonly("bid", &EquilibriumCheck::bid)
        .def_readonly("gain", &EquilibriumCheck::gain);

    py::class_<LiquidityPoint>(m, "LiquidityPoint")
        .def_readonly("s0", &LiquidityPoint::s0)
        .def_readonly("f_value", &LiquidityPoint::f_value)
        .def_readonly("ill_value", &LiquidityPoint::ill_value);

    py::class_<McEstimate>(m, "McEstimate")
        .def_readonly("estimate", &McEstimate::estimate)
        .def_readonly("std_error", &McEstimate::std_error)
        .def_readonly("trials", &McEstimate::trials);

    py::class_<SeriesControl>(m, "SeriesControl")
        .def(py::init<>())
        .def_readwrite("tail_tol", &SeriesControl::tail_tol)
        .def_readwrite("max_terms", &SeriesControl::max_terms);

    py::class_<CrossPartialReport>(m, "CrossPartialReport")
        .def_readonly("d_ill_d_lambda", &CrossPartialReport::d_ill_d_lambda)
        .def_readonly("d_ill_d_cm", &CrossPartialReport::d_ill_d_cm)
        .def_readonly("d2_ill_dcm_dlambda", &CrossPartialReport::d2_ill_dcm_dlambda)
        .def_readonly("sign_d_lambda", &CrossPartialReport::sign_d_lambda)
        .def_readonly("sign_d_cm", &CrossPartialReport::sign_d_cm)
        .def_readonly("sign_d2", &CrossPartialReport::sign_d2);

    m.def("agency_cost_share", &agency_cost_share, py::arg("gov"), py::arg("firm"));
    m.def("optimal_capital", &optimal_capital, py::arg("firm"), py::arg("z"));
    m.def("controller_objective", &controller_objective, py::arg("rho"), py::arg("gov"),
          py::arg("firm"));
    m.def("derive_x_dynamics", &derive_x_dynamics, py::arg("firm"));
    m.def("x_at_eval", &x_at_eval, py::arg("firm"), py::arg("dyn"));
    m.def("share_value", &share_value, py::arg("firm"), py::arg("dyn"), py::arg("rho_hat"));
    m.def("benefit_of_control", &benefit_of_control, py::arg("firm"), py::arg("gov"),
          py::arg("dyn"));
    m.def("s_bar", &s_bar, py::arg("gov"), py::arg("rho"));

    m.def("sample_arrivals", &sample_arrivals, py::arg("market"), py::arg("seed"));
    m.def("sample_noise_beliefs", &sample_noise_beliefs, py::arg("count"), py::arg("floor"),
          py::arg("ceiling"), py::arg("seed"));
    m.def("equilibrium_price", &equilibrium_price, py::arg("beliefs"), py::arg("market"));
    m.def(
        "brute_force_equilibrium_check",
        [](const BeliefProfile& beliefs, const MarketParams& market, double step,
           const std::vector<double>& bids) {
            return brute_force_equilibrium_check(beliefs, market, step, bids);
        },
        py::arg("beliefs"), py::arg("market"), py::arg("bid_grid_step"),
        py::arg("bids") = std::vector<double>{});
    m.def("run_auction_trial", &run_auction_trial, py::arg("informed_value"), py::arg("floor"),
          py::arg("ceiling"), py::arg("market"), py::arg("seed"));

    m.def("g_s0", &g_s0, py::arg("s0"), py::arg("gov"), py::arg("rho"));
    m.def("k_series", &k_series, py::arg("g"), py::arg("l"), py::arg("m"),
          py::arg("ctl") = SeriesControl{});
    m.def("k_closed_form", &k_closed_form, py::arg("g"), py::arg("l"), py::arg("m"));
    m.def("dk_dl", &dk_dl, py::arg("g"), py::arg("l"), py::arg("m"));
    m.def("dk_dg", &dk_dg, py::arg("g"), py::arg("l"), py::arg("m"));
    m.def("ill_index", &ill_index, py::arg("g"), py::arg("l"), py::arg("m"));
    m.def(
        "f_s0",
        [](double s0, const GovernanceSpec& gov, const FirmParams& firm,
           const MarketParams& market, const SeriesControl& ctl) {
            return f_s0({s0}, gov, firm, market, ctl);
        },
        py::arg("s0"), py::arg("gov"), py::arg("firm"), py::arg("market"),
        py::arg("ctl") = SeriesControl{});
    m.def(
        "mc_estimate_f",
        [](double s0, const GovernanceSpec& gov, const FirmParams& firm,
           const MarketParams& market, std::uint64_t trials, std::uint64_t seed, int workers) {
            return mc_estimate_f({s0}, gov, firm, market, trials, seed, workers);
        },
        py::arg("s0"), py::arg("gov"), py::arg("firm"), py::arg("market"), py::arg("trials"),
        py::arg("seed"), py::arg("workers") = 1);
    m.def(
        "delta_lambda_ill",
        [](double s0, const GovernanceSpec& gov, const FirmParams& firm,
           const MarketParams& market, double lambda1, double lambda2) {
            return delta_lambda_ill({s0}, gov, firm, market, lambda1, lambda2);
        },
        py::arg("s0"), py::arg("gov"), py::arg("firm"), py::arg("market"), py::arg("lambda1"),
        py::arg("lambda2"));
    m.def(
        "delta_cm_ill",
        [](double s0, const GovernanceSpec& improved, const GovernanceSpec& baseline,
           const FirmParams& firm, const MarketParams& market, double lambda) {
            return delta_cm_ill({s0}, improved, baseline, firm, market, lambda);
        },
        py::arg("s0"), py::arg("improved"), py::arg("baseline"), py::arg("firm"),
        py::arg("market"), py::arg("lambda"));
    m.def(
        "cross_partial_signs",
        [](double s0, const GovernanceSpec& gov, const FirmParams& firm,
           const MarketParams& market) {
            return cross_partial_signs({s0}, gov, firm, market);
        },
        py::arg("s0"), py::arg("gov"), py::arg("firm"), py::arg("market"));

    py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);

    py::class_<RunConfig>(m, "RunConfig")
        .def_readonly("firm", &RunConfig::firm)
        .def_readonly("governance", &RunConfig::governance)
        .def_readonly("market", &RunConfig::market)
        .def_readonly("s0_values", &RunConfig::s0_values)
        .def_readonly("cm_grid", &RunConfig::cm_grid)
        .def_readonly("lambda_grid", &RunConfig::lambda_grid)
        .def_readonly("trials", &RunConfig::trials)
        .def_readonly("seed", &RunConfig::seed)
        .def_readonly("workers", &RunConfig::workers);

    m.def("parse_config", &parse_config, py::arg("text"),
          "Parse and validate a dotted-key configuration document");
    m.def(
        "analytic_csv",
        [](const std::string& config_text) {
            const RunConfig config = parse_config(config_text);
            std::ostringstream out, log;
            if (cmd_analytic(config, out, log) != kExitOk)
                throw std::runtime_error(log.str());
            return out.str();
        },
        py::arg("config_text"), "Analytic sweep rows as CSV text");

    m.attr("__version__") = "0.1.0";
}
