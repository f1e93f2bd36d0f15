// kerr - figure data, single expectation values and validation suites.
//
// Exit codes: 0 success, 1 validation or check failure, 2 usage or config error.

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "kerr/figures.hpp"
#include "kerr/output.hpp"
#include "kerr/run_config.hpp"
#include "kerr/validation.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitFailed = 1;
constexpr int kExitUsage = 2;

// Flags that map one-to-one onto config keys.
const std::vector<std::string> kValueFlags = {"xi",        "w1",    "w2",     "alpha-re", "alpha-im", "tau-abs",
                                              "tau-phase", "t",     "t-min",  "t-max",    "steps",    "out",
                                              "format",    "threads", "xi-list", "x2-list", "s-list"};

kerr::RunConfig resolve(const std::string& config_path, const std::map<std::string, std::string>& flags, bool check) {
    kerr::RunConfig cfg;
    if (!config_path.empty()) {
        std::ifstream f(config_path, std::ios::binary);
        if (!f) throw kerr::ConfigError("config: cannot read '" + config_path + "'");
        std::stringstream ss;
        ss << f.rdbuf();
        cfg.apply(kerr::parse_config_text(ss.str(), config_path));
    }
    for (const auto& [key, value] : flags) cfg.apply(key, {value, "--" + key});
    if (check) cfg.check = true;
    cfg.validate();
    return cfg;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Kerr oscillator: Weyl-symbol dynamics, expectation values and validation"};
    app.require_subcommand(1);
    app.fallthrough();

    std::map<std::string, std::string> raw;
    std::string config_path;
    bool check = false;
    for (const auto& name : kValueFlags) app.add_option("--" + name, raw[name]);
    app.add_option("--config", config_path, "flat key = value file; flags override it");
    app.add_flag("--check", check, "expect: also evaluate the Fock oracle and the quadrature");

    std::string figure_name, suite, fault;
    auto* fig = app.add_subcommand("figure", "emit the data of one figure");
    fig->add_option("name", figure_name, "qampl | qphase | squeeze-num | squeeze-phase")->required();
    auto* expect = app.add_subcommand("expect", "<a(t)>, <q(t)>, <p(t)> for one state and time");
    auto* validate = app.add_subcommand("validate", "run invariant suites, JSON report on stdout or --out");
    validate->add_option("suite", suite, "algebra | moyal | states | expectation | all")->required();
    validate->add_option("--inject-fault", fault, "deliberate fault to prove the suites can fail (w2-sign)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    }

    std::map<std::string, std::string> flags;
    for (const auto& name : kValueFlags)
        if (app.count("--" + name) > 0) flags[name] = raw[name];

    try {
        const kerr::RunConfig cfg = resolve(config_path, flags, check);
        if (*fig) {
            kerr::emit_table(kerr::figure(figure_name, cfg), cfg, std::cout);
            return kExitOk;
        }
        if (*expect) {
            const auto rec = kerr::expect_record(cfg);
            kerr::emit_table(rec.table, cfg, std::cout);
            if (!rec.checks_passed) std::cerr << "kerr: --check deviations exceed thresholds\n";
            return rec.checks_passed ? kExitOk : kExitFailed;
        }
        const auto reports = kerr::run_validation(suite, kerr::Faults::parse(fault));
        bool ok = true;
        for (const auto& r : reports) {
            ok = ok && r.passed();
            for (const auto& c : r.checks)
                if (!c.passed()) std::cerr << "kerr: FAIL " << r.suite << ": " << c.name << "\n";
        }
        if (cfg.out.empty()) {
            kerr::write_validation_report(std::cout, reports);
        } else {
            std::ofstream f(cfg.out, std::ios::binary);
            if (!f) throw kerr::ConfigError("out: cannot open '" + cfg.out + "' for writing");
            kerr::write_validation_report(f, reports);
        }
        return ok ? kExitOk : kExitFailed;
    } catch (const kerr::ConfigError& e) {
        std::cerr << "kerr: " << e.what() << "\n";
        return kExitUsage;
    } catch (const kerr::InvalidArgument& e) {
        std::cerr << "kerr: " << e.what() << "\n";
        return kExitUsage;
    } catch (const kerr::InvalidState& e) {
        std::cerr << "kerr: " << e.what() << "\n";
        return kExitUsage;
    } catch (const kerr::Error& e) {
        std::cerr << "kerr: " << e.what() << "\n";
        return kExitFailed;
    }
}
