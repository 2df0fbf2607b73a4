#include "commands.hpp"

#include "regfrac/parallel.hpp"

#include <CLI11.hpp>

#include <fstream>

namespace regfrac::cli {

std::filesystem::path write_json(const nlohmann::ordered_json& j, const std::filesystem::path& path) {
    std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path);
    if (!out) throw InvalidArgument("cannot write " + path.string());
    out << j.dump(2) << '\n';
    return path;
}

}  // namespace regfrac::cli

int main(int argc, char** argv) {
    using namespace regfrac::cli;

    CLI::App app{"Bistable reaction-diffusion with regional fractional diffusion outside an obstacle"};
    app.set_version_flag("--version", REGFRAC_VERSION);
    app.require_subcommand(1);

    Globals g;
    app.add_option("--output-dir", g.output_dir, "Directory for reports, snapshots and manifest.json")
        ->capture_default_str();
    app.add_option("--threads", g.threads, "Worker threads for the numerical kernels")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    app.add_flag("--quiet", g.quiet, "Only print errors");

    SimulateArgs sim;
    auto* cmd_sim = app.add_subcommand("simulate", "Run the evolution and write snapshots");
    cmd_sim->add_option("--config", sim.config, "Run configuration")->required()->check(CLI::ExistingFile);

    WaveArgs wave;
    const auto open_unit = CLI::Validator(
        [](std::string& v) -> std::string {
            const double x = std::stod(v);
            return (x > 0.0 && x < 1.0) ? "" : "value " + v + " not in (0,1)";
        },
        "(0,1)");
    auto* cmd_wave = app.add_subcommand("wave", "Compute the 1-D travelling front and its speed");
    cmd_wave->set_help_flag("--help", "Print this help message and exit");
    cmd_wave->add_option("--theta", wave.theta, "Unstable zero of the cubic")->check(CLI::Number & open_unit)
        ->capture_default_str();
    cmd_wave->add_option("--s", wave.s, "Fractional order")->check(CLI::Number & open_unit)->capture_default_str();
    cmd_wave->add_option("--Z", wave.Z, "Half-width of the front domain")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    cmd_wave->add_option("--h", wave.h, "Front grid spacing")->check(CLI::PositiveNumber)->capture_default_str();
    cmd_wave->add_option("--c-norm", wave.c_norm, "Multiplier of the 1-D operator")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();

    LiouvilleArgs liou;
    auto* cmd_liou = app.add_subcommand("check-liouville", "Run to steady state and test u = 1 outside K");
    cmd_liou->add_option("--config", liou.config, "Run configuration")->required()->check(CLI::ExistingFile);
    cmd_liou->add_option("--tol-one", liou.tol_one, "Accept min u >= 1 - tol")
        ->check(CLI::Range(0.0, 1.0))
        ->capture_default_str();
    cmd_liou->add_flag("--allow-nonconvex", liou.allow_nonconvex,
                       "Run on a non-convex obstacle; the report is then non-certifying");

    SelftestArgs self;
    auto* cmd_self = app.add_subcommand("selftest", "Small-scale consistency suites");
    cmd_self->add_option("--inject-fault", self.inject_fault, "Deliberate defect for negative controls")
        ->check(CLI::IsMember({"operator-sign"}));

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : kUsage;
    }

    regfrac::set_thread_count(g.threads);
    if (*cmd_sim) return run_simulate(g, sim);
    if (*cmd_wave) return run_wave(g, wave);
    if (*cmd_liou) return run_check_liouville(g, liou);
    return run_selftest(g, self);
}
