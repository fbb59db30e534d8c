// Runs the acceptance criteria and prints one PASS/FAIL line per criterion.
#include <CLI11.hpp>

#include <fstream>
#include <iostream>

#include "yma/acceptance.hpp"

int main(int argc, char** argv)
{
    CLI::App app{"yma acceptance suite"};
    std::string config_path, report;
    std::vector<std::string> overrides;
    bool verbose = false;
    app.add_option("--config", config_path, "key = value config file")->check(CLI::ExistingFile);
    app.add_option("--set", overrides, "key=value override, repeatable");
    app.add_option("--report", report, "write the JSON report here");
    app.add_flag("-v,--verbose", verbose, "print every check");
    CLI11_PARSE(app, argc, argv);

    yma::AcceptanceConfig cfg;
    try {
        if (!config_path.empty()) cfg = yma::load_config(config_path);
        for (const auto& kv : overrides) yma::apply_override(cfg, kv);
    } catch (const yma::ConfigError& e) {
        std::cerr << e.what() << "\n";
        return 2;
    }
    if (!report.empty()) cfg.report = report;

    auto rep = yma::run_acceptance(cfg, [](const yma::CriterionSummary& s) {
        std::cout << yma::criterion_line(s) << std::endl;
    });

    for (const auto& c : rep.checks)
        if (verbose || !c.pass)
            std::cout << "  " << (c.pass ? "ok   " : "FAIL ") << c.id << " value=" << c.value << " target=" << c.target
                      << (c.note.empty() ? "" : "  [" + c.note + "]") << "\n";

    if (!cfg.report.empty()) {
        std::ofstream out(cfg.report);
        if (!out) {
            std::cerr << "cannot write " << cfg.report << "\n";
            return 2;
        }
        out << yma::report_json(rep);
    }
    std::cout << (rep.pass() ? "ALL CRITERIA PASS" : "SOME CRITERIA FAIL") << std::endl;
    return rep.pass() ? 0 : 1;
}
