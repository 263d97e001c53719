#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "govliq/auction.hpp"
#include "govliq/firm.hpp"
#include "govliq/liquidity.hpp"

namespace govliq {

/// Parse or validation failure. Parse errors carry the line number;
/// validation errors list every violated field at once.
class ConfigError : public std::runtime_error {
  public:
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

enum class S0Mode { Absolute, SbarFraction };

/// Fully resolved run configuration with defaults applied.
struct RunConfig {
    FirmParams firm{};
    GovernanceSpec governance{};
    MarketParams market{};

    std::vector<double> s0_values{0.0, 0.25, 0.5, 0.75};
    S0Mode s0_mode = S0Mode::SbarFraction;

    std::vector<double> cm_grid{};      // defaults to {governance.c_m}
    std::vector<double> lambda_grid{};  // defaults to {market.lambda}

    // Controlled firms: rho0 per grid point is rho0_factor * c_m when
    // rho0_factor > 0, otherwise the fixed governance.rho0.
    double rho0_factor = 0.0;

    std::uint64_t trials = 100'000;
    std::uint64_t seed = 0;
    std::string output_path{};  // empty: stdout
    SeriesControl series_ctl{};
    int workers = 0;  // 0: automatic

    /// Governance spec at one grid c_m (applies the rho0 policy).
    GovernanceSpec governance_at(double c_m) const;

    /// s0 values resolved at one grid point (fraction mode scales by
    /// s_bar of that point's governance).
    std::vector<double> resolved_s0(double c_m) const;
};

/// Parses the flat dotted-key document ("firm.alpha = 0.5", '#'
/// comments, lists "a, b", grids "start:stop:step") and validates every
/// invariant, reporting all violations together. Unknown and duplicate
/// keys are errors.
RunConfig parse_config(const std::string& text);

/// parse_config plus file I/O; the path is used in error messages.
RunConfig load_config_file(const std::string& path);

}  // namespace govliq
