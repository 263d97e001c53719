#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "govliq/config.hpp"

namespace govliq {

inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 1;
inline constexpr int kExitProperty = 2;
inline constexpr int kExitIo = 3;

/// One output row of a parameter sweep.
struct SweepRow {
    double c_m = 0.0;
    double lambda = 0.0;
    double s0 = 0.0;
    double rho = 0.0;
    double s_bar = 0.0;
    double g = 0.0;
    double f_analytic = 0.0;
    double ill_analytic = 0.0;
    double f_mc = 0.0;
    double f_mc_se = 0.0;
    std::string firm_kind{};
};

/// Fault hooks for the validation harness self-test. flip_dk_dl_sign
/// negates the analytic l-derivative inside the derivative check only.
struct FaultInjection {
    bool flip_dk_dl_sign = false;
};

/// Rows of the (c_m, lambda, s0) grid in lexicographic order, analytic
/// columns only.
std::vector<SweepRow> analytic_rows(const RunConfig& config);

/// analytic_rows plus Monte Carlo columns; flagged receives the indices
/// of rows where the estimate strays more than four null standard
/// errors from the analytic value.
std::vector<SweepRow> simulate_rows(const RunConfig& config, std::vector<std::size_t>& flagged);

/// Formats a double with 12 significant digits; infinities print "inf".
std::string format_value(double v);

int cmd_analytic(const RunConfig& config, std::ostream& out, std::ostream& log);
int cmd_simulate(const RunConfig& config, std::ostream& out, std::ostream& log);
int cmd_synergy(const RunConfig& config, std::ostream& out, std::ostream& log);
int cmd_validate(const RunConfig& config, std::ostream& out, std::ostream& log,
                 const FaultInjection& fault = {});

}  // namespace govliq
