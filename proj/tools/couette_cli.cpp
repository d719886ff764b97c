#include <CLI11.hpp>

#include <iostream>
#include <sstream>

#include "couette/experiments.hpp"

using namespace couette;

namespace {

std::vector<double> parse_mu_list(const std::string& s) {
    std::vector<double> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(std::stod(item));
    if (out.empty()) throw std::invalid_argument("empty --mu list");
    return out;
}

void print_summary(const RunResult& r) {
    std::cout << "run directory: " << r.dir.string() << "\n";
    for (const auto& s : r.subruns) {
        for (const auto& a : s.audits)
            std::cout << "  " << s.name << "/" << a.claim << ": fitted " << a.fitted << " required " << a.required
                      << (a.pass ? "  PASS" : "  FAIL") << (a.inconclusive ? " (inconclusive)" : "") << "\n";
        std::cout << "  " << s.name << ": " << (s.pass ? "PASS" : "FAIL") << "\n";
    }
    std::cout << (r.pass ? "all audits passed\n" : "some audits failed\n");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Linearized compressible Couette flow: mode-by-mode simulation and decay audits"};
    app.require_subcommand(1);

    std::string config_path;
    auto* sim = app.add_subcommand("simulate", "run a preset experiment from a config file");
    sim->add_option("--config", config_path, "config file")->required()->check(CLI::ExistingFile);

    std::string run_dir, claim;
    auto* aud = app.add_subcommand("audit", "re-audit a finished run, or run the multiplier audit");
    aud->add_option("--run", run_dir, "run directory");
    aud->add_option("--claim", claim, "claim id, or 'multipliers'")->required();

    std::string mu_text = "1e-2,1e-3,1e-4";
    auto* swp = app.add_subcommand("sweep", "run a preset over several viscosities");
    swp->add_option("--config", config_path, "config file")->required()->check(CLI::ExistingFile);
    swp->add_option("--mu", mu_text, "comma separated viscosities");

    auto* pre = app.add_subcommand("presets", "list presets and their claims");

    CLI11_PARSE(app, argc, argv);

    try {
        if (pre->parsed()) {
            for (const auto& p : presets()) {
                std::cout << p.name;
                for (const auto& c : p.claims) std::cout << " " << c;
                std::cout << "\n    " << p.description << "\n";
            }
            return 0;
        }
        if (sim->parsed()) {
            const auto r = run(load_config(config_path));
            print_summary(r);
            return r.pass ? 0 : 1;
        }
        if (swp->parsed()) {
            const auto r = sweep(load_config(config_path), parse_mu_list(mu_text));
            print_summary(r);
            if (r.manifest.contains("scaling") && !r.manifest["scaling"].is_null())
                std::cout << "scaling slope " << r.manifest["scaling"]["slope"] << "\n";
            return r.pass ? 0 : 1;
        }
        if (aud->parsed()) {
            if (run_dir.empty()) {
                if (claim != "multipliers") throw std::invalid_argument("--run is required for claim " + claim);
                auto cfg = preset_config("multiplier-audit");
                const auto r = run(cfg);
                std::cout << r.subruns.front().extra["multiplier_audit"].dump(2) << "\n";
                return r.pass ? 0 : 1;
            }
            bool ok = true;
            for (const auto& a : audit_run(run_dir, claim)) {
                std::cout << to_json(a).dump(2) << "\n";
                ok = ok && a.pass;
            }
            return ok ? 0 : 1;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
