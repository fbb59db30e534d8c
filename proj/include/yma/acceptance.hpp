#pragma once

#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace yma {

inline constexpr const char* kLibraryVersion = "0.3.0";
inline constexpr int kReportSchema = 1;

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Flat "key = value" file; '#' starts a comment. Unknown keys are errors.
struct AcceptanceConfig {
    std::uint64_t seed = 20240611;
    double quad_tol = 1e-13;       // relative doubling tolerance of every quadrature
    double variational_R = 2.0;
    int variational_n = 45;
    double coulomb_R = 3.0;
    int coulomb_n = 25;
    double coulomb_tol = 1e-10;
    int flow_nodes = 16;
    int lower_bound_samples = 200;
    int commutator_draws = 10000;
    std::vector<int> criteria{1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11, 12};
    bool timing = false;           // runtimes make reports run-dependent, so they are opt-in
    std::string report;            // JSON report path, empty for none
};

AcceptanceConfig parse_config(const std::string& text);
AcceptanceConfig load_config(const std::string& path);
// "key=value" on top of an existing config
void apply_override(AcceptanceConfig& cfg, const std::string& key_value);

enum class Relation { Rel, Abs, Le, Lt, Ge, Gt };

struct CheckResult {
    int criterion = 0;
    std::string id;
    std::string anchor;
    Relation relation = Relation::Le;
    double value = 0;
    double target = 0;
    double tol = 0;
    bool pass = false;
    double runtime = 0;
    std::string note;
};

struct CriterionSummary {
    int criterion = 0;
    std::string title;
    int checks = 0;
    int failed = 0;
    double runtime = 0;
    std::string worst; // id of the first failing check
    bool pass() const { return checks > 0 && failed == 0; }
};

struct AcceptanceReport {
    AcceptanceConfig config;
    std::vector<CheckResult> checks;
    std::vector<CriterionSummary> criteria;
    bool pass() const;
};

const char* criterion_title(int criterion);
// Check-id prefix and the statement it verifies.
const std::vector<std::pair<std::string, std::string>>& anchor_map();

AcceptanceReport run_acceptance(const AcceptanceConfig& cfg,
                                const std::function<void(const CriterionSummary&)>& on_criterion = {});
std::string report_json(const AcceptanceReport& r);
std::string criterion_line(const CriterionSummary& s);

} // namespace yma
