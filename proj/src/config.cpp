#include "govliq/config.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <map>
#include <sstream>

namespace govliq {

namespace {

struct RawEntry {
    std::string value;
    int line = 0;
};

std::string trim(const std::string& s) {
    const auto begin = s.find_first_not_of(" \t\r");
    if (begin == std::string::npos) return {};
    const auto end = s.find_last_not_of(" \t\r");
    return s.substr(begin, end - begin + 1);
}

std::map<std::string, RawEntry> tokenize(const std::string& text) {
    std::map<std::string, RawEntry> entries;
    std::istringstream stream(text);
    std::string line;
    int line_no = 0;
    while (std::getline(stream, line)) {
        ++line_no;
        const auto comment = line.find('#');
        if (comment != std::string::npos) line.erase(comment);
        const std::string stripped = trim(line);
        if (stripped.empty()) continue;
        const auto eq = stripped.find('=');
        if (eq == std::string::npos)
            throw ConfigError("line " + std::to_string(line_no) +
                              ": expected 'key = value', got '" + stripped + "'");
        const std::string key = trim(stripped.substr(0, eq));
        const std::string value = trim(stripped.substr(eq + 1));
        if (key.empty())
            throw ConfigError("line " + std::to_string(line_no) + ": missing key before '='");
        if (value.empty())
            throw ConfigError("line " + std::to_string(line_no) + ": missing value for '" + key +
                              "'");
        if (entries.count(key))
            throw ConfigError("line " + std::to_string(line_no) + ": duplicate key '" + key +
                              "' (first set on line " + std::to_string(entries[key].line) + ")");
        entries[key] = RawEntry{value, line_no};
    }
    return entries;
}

class EntryReader {
  public:
    explicit EntryReader(std::map<std::string, RawEntry> entries)
        : entries_(std::move(entries)) {}

    bool has(const std::string& key) const { return entries_.count(key) > 0; }

    double number(const std::string& key, double fallback) {
        if (!has(key)) return fallback;
        return parse_number(key, take(key));
    }

    std::uint64_t count(const std::string& key, std::uint64_t fallback) {
        if (!has(key)) return fallback;
        const RawEntry entry = take(key);
        const double v = parse_number(key, entry);
        if (v < 0.0 || v != std::floor(v))
            throw ConfigError("line " + std::to_string(entry.line) + ": " + key +
                              " must be a non-negative integer");
        return static_cast<std::uint64_t>(v);
    }

    std::string word(const std::string& key, const std::string& fallback) {
        if (!has(key)) return fallback;
        return take(key).value;
    }

    // Comma list or start:stop:step grid.
    std::vector<double> grid(const std::string& key, std::vector<double> fallback) {
        if (!has(key)) return fallback;
        const RawEntry entry = take(key);
        std::vector<double> values;
        if (entry.value.find(':') != std::string::npos) {
            const auto first = entry.value.find(':');
            const auto second = entry.value.find(':', first + 1);
            if (second == std::string::npos)
                throw ConfigError("line " + std::to_string(entry.line) + ": " + key +
                                  " grid must be start:stop:step");
            const double start = parse_number(key, {entry.value.substr(0, first), entry.line});
            const double stop =
                parse_number(key, {entry.value.substr(first + 1, second - first - 1), entry.line});
            const double step = parse_number(key, {entry.value.substr(second + 1), entry.line});
            if (step <= 0.0)
                throw ConfigError("line " + std::to_string(entry.line) + ": " + key +
                                  " grid step must be positive");
            for (double v = start; v <= stop + 1e-9 * step; v += step)
                values.push_back(std::min(v, stop));
        } else {
            std::istringstream items(entry.value);
            std::string item;
            while (std::getline(items, item, ','))
                values.push_back(parse_number(key, {trim(item), entry.line}));
        }
        return values;
    }

    void fail_unknown() const {
        if (entries_.empty()) return;
        std::string msg = "unknown configuration keys:";
        for (const auto& [key, entry] : entries_)
            msg += " '" + key + "' (line " + std::to_string(entry.line) + ")";
        throw ConfigError(msg);
    }

  private:
    RawEntry take(const std::string& key) {
        RawEntry entry = entries_.at(key);
        entries_.erase(key);
        return entry;
    }

    static double parse_number(const std::string& key, const RawEntry& entry) {
        try {
            std::size_t used = 0;
            const double v = std::stod(entry.value, &used);
            if (used != entry.value.size()) throw std::invalid_argument("trailing characters");
            return v;
        } catch (const std::exception&) {
            throw ConfigError("line " + std::to_string(entry.line) + ": " + key +
                              " expects a number, got '" + entry.value + "'");
        }
    }

    std::map<std::string, RawEntry> entries_;
};

void check_grid(std::vector<std::string>& problems, const std::vector<double>& grid,
                const std::string& name) {
    if (grid.empty()) {
        problems.push_back(name + ": grid must be non-empty");
        return;
    }
    for (std::size_t i = 1; i < grid.size(); ++i)
        if (grid[i] <= grid[i - 1]) {
            problems.push_back(name + ": grid must be strictly increasing");
            return;
        }
}

}  // namespace

GovernanceSpec RunConfig::governance_at(double c_m) const {
    GovernanceSpec gov = governance;
    gov.c_m = c_m;
    if (gov.kind == FirmKind::Controlled && rho0_factor > 0.0) gov.rho0 = rho0_factor * c_m;
    return gov;
}

std::vector<double> RunConfig::resolved_s0(double c_m) const {
    if (s0_mode == S0Mode::Absolute) return s0_values;
    const GovernanceSpec gov = governance_at(c_m);
    const double cap = s_bar(gov, agency_cost_share(gov, firm));
    std::vector<double> resolved;
    resolved.reserve(s0_values.size());
    for (double frac : s0_values) resolved.push_back(frac * cap);
    return resolved;
}

RunConfig parse_config(const std::string& text) {
    EntryReader reader(tokenize(text));
    RunConfig config;

    config.firm.alpha = reader.number("firm.alpha", config.firm.alpha);
    config.firm.delta = reader.number("firm.delta", config.firm.delta);
    config.firm.r = reader.number("firm.r", config.firm.r);
    config.firm.mu_z = reader.number("firm.mu_z", config.firm.mu_z);
    config.firm.sigma_z = reader.number("firm.sigma_z", config.firm.sigma_z);
    config.firm.theta = reader.number("firm.theta", config.firm.theta);
    config.firm.gamma = reader.number("firm.gamma", config.firm.gamma);
    config.firm.s_total = reader.number("firm.s_total", config.firm.s_total);
    config.firm.z0 = reader.number("firm.z0", config.firm.z0);
    config.firm.t_eval = reader.number("firm.t_eval", config.firm.t_eval);
    config.firm.w_t = reader.number("firm.w_t", config.firm.w_t);

    const std::string kind = reader.word("governance.kind", "general");
    config.governance.c_m = reader.number("governance.c_m", 0.3);
    config.governance.penalty.kappa = reader.number("governance.f_kappa", 1.0);
    config.governance.penalty.beta = reader.number("governance.f_beta", 1.0);
    config.governance.rho0 = reader.number("governance.rho0", 0.0);
    config.rho0_factor = reader.number("governance.rho0_factor", 0.0);

    config.market.lambda = reader.number("market.lambda", config.market.lambda);
    config.market.delta_t = reader.number("market.delta_t", config.market.delta_t);
    config.market.n_informed =
        static_cast<int>(reader.count("market.n_informed", config.market.n_informed));
    config.market.m_deals =
        static_cast<int>(reader.count("market.m_deals", config.market.m_deals));
    config.market.n_shares_per_deal = static_cast<int>(
        reader.count("market.n_shares_per_deal", config.market.n_shares_per_deal));

    config.s0_values = reader.grid("query.s0", config.s0_values);
    const std::string s0_mode = reader.word("query.s0_mode", "sbar_fraction");

    config.cm_grid = reader.grid("sweep.c_m", {config.governance.c_m});
    config.lambda_grid = reader.grid("sweep.lambda", {config.market.lambda});

    config.trials = reader.count("mc.trials", config.trials);
    config.seed = reader.count("seed", config.seed);
    config.output_path = reader.word("output", config.output_path);
    config.series_ctl.tail_tol = reader.number("series.tail_tol", config.series_ctl.tail_tol);
    config.series_ctl.max_terms = reader.count("series.max_terms", config.series_ctl.max_terms);
    config.workers = static_cast<int>(reader.count("workers", 0));

    reader.fail_unknown();

    // Validation: collect every violation before failing.
    std::vector<std::string> problems;
    if (kind == "general") {
        config.governance.kind = FirmKind::General;
    } else if (kind == "controlled") {
        config.governance.kind = FirmKind::Controlled;
    } else {
        problems.push_back("governance.kind: must be 'general' or 'controlled'");
    }
    if (s0_mode == "absolute") {
        config.s0_mode = S0Mode::Absolute;
    } else if (s0_mode == "sbar_fraction") {
        config.s0_mode = S0Mode::SbarFraction;
    } else {
        problems.push_back("query.s0_mode: must be 'absolute' or 'sbar_fraction'");
    }

    bool firm_ok = true;
    try {
        config.firm.validate();
    } catch (const std::exception& e) {
        firm_ok = false;
        problems.emplace_back(e.what());
    }
    try {
        config.market.validate();
    } catch (const std::exception& e) {
        problems.emplace_back(e.what());
    }
    if (firm_ok) {
        try {
            derive_x_dynamics(config.firm);
        } catch (const std::exception& e) {
            problems.emplace_back(e.what());
        }
    }

    check_grid(problems, config.cm_grid, "sweep.c_m");
    check_grid(problems, config.lambda_grid, "sweep.lambda");
    for (double c : config.cm_grid)
        if (c < 0.0 || c >= 1.0) {
            problems.push_back("sweep.c_m: every value must lie in [0, 1)");
            break;
        }
    for (double l : config.lambda_grid)
        if (l < 0.0) {
            problems.push_back("sweep.lambda: every value must be non-negative");
            break;
        }
    if (config.rho0_factor < 0.0 || config.rho0_factor > 1.0)
        problems.push_back("governance.rho0_factor: must lie in [0, 1]");
    for (double c : config.cm_grid) {
        if (c < 0.0 || c >= 1.0) continue;  // reported above
        try {
            config.governance_at(c).validate();
        } catch (const std::exception& e) {
            problems.push_back(std::string(e.what()) + " (at sweep c_m = " + std::to_string(c) +
                               ")");
            break;
        }
    }
    if (config.s0_values.empty()) problems.push_back("query.s0: at least one value required");
    std::sort(config.s0_values.begin(), config.s0_values.end());
    if (std::adjacent_find(config.s0_values.begin(), config.s0_values.end()) !=
        config.s0_values.end())
        problems.push_back("query.s0: values must be distinct");
    for (double s : config.s0_values)
        if (s < 0.0 || s >= 1.0) {
            problems.push_back(config.s0_mode == S0Mode::Absolute
                                   ? "query.s0: values must lie in [0, 1)"
                                   : "query.s0: fractions must lie in [0, 1)");
            break;
        }
    if (config.trials < 1) problems.push_back("mc.trials: at least one trial required");
    if (config.series_ctl.tail_tol <= 0.0)
        problems.push_back("series.tail_tol: must be positive");
    if (config.series_ctl.max_terms < 1)
        problems.push_back("series.max_terms: must be at least 1");

    if (!problems.empty()) {
        std::string msg = "configuration invalid:";
        for (const std::string& p : problems) msg += "\n  - " + p;
        throw ConfigError(msg);
    }
    return config;
}

RunConfig load_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file '" + path + "'");
    std::ostringstream buffer;
    buffer << in.rdbuf();
    try {
        return parse_config(buffer.str());
    } catch (const ConfigError& e) {
        throw ConfigError(path + ": " + e.what());
    }
}

}  // namespace govliq
