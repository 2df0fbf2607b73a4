#include "commands.hpp"

#include "regfrac/config.hpp"
#include "regfrac/field_io.hpp"

#include <cstdio>

namespace regfrac::cli {

namespace {

std::string time_tag(double t) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%06.1f", t);
    return buf;
}

nlohmann::ordered_json echo_json(const RunConfig& rc) {
    nlohmann::ordered_json j = nlohmann::ordered_json::object();
    for (const auto& [sec, kv] : rc.echo)
        for (const auto& [k, v] : kv) j[sec][k] = v;
    return j;
}

}  // namespace

int run_simulate(const Globals& g, const SimulateArgs& a) {
    RunManifest manifest("simulate", g.output_dir);
    manifest.add_parameter("config", a.config.string());
    return guarded(manifest, [&] {
        Stopwatch clock;
        const RunConfig rc = load_config(a.config);
        manifest.set_config(rc.echo);
        manifest.add_timing("load_config", clock.lap());

        const Trajectory tr = simulate(rc.sim);
        manifest.add_timing("evolve", clock.lap());

        std::filesystem::create_directories(g.output_dir);
        nlohmann::ordered_json snaps = nlohmann::ordered_json::array();
        for (std::size_t k = 0; k < tr.snapshots.size(); ++k) {
            const auto& sn = tr.snapshots[k];
            const std::string stem = rc.name + "_t" + time_tag(rc.sim.snapshot_times[k]);
            const auto csv = g.output_dir / (stem + ".csv");
            const auto pgm = g.output_dir / (stem + ".pgm");
            write_field_csv(sn.field, csv);
            manifest.add_output(csv);
            write_field_pgm(sn.field, pgm);
            manifest.add_output(pgm);
            snaps.push_back({{"requested_time", rc.sim.snapshot_times[k]},
                             {"time", sn.time},
                             {"min", sn.field.min()},
                             {"max", sn.field.max()},
                             {"csv", csv.filename().string()},
                             {"pgm", pgm.filename().string()}});
        }
        manifest.add_timing("write_snapshots", clock.lap());

        // invasion is monotone once the minimum has passed theta
        bool monotone = true;
        const double theta = rc.sim.reaction.theta();
        for (std::size_t k = 1; k < tr.min_history.size(); ++k)
            if (tr.min_history[k - 1] > theta && tr.min_history[k] < tr.min_history[k - 1]) monotone = false;

        nlohmann::ordered_json rep;
        rep["name"] = rc.name;
        rep["dt"] = tr.dt;
        rep["steps"] = tr.times.size() - 1;
        rep["final_time"] = tr.times.back();
        rep["reached_steady"] = tr.reached_steady;
        rep["final_residual"] = tr.final_residual;
        rep["final_min"] = tr.min_history.back();
        rep["final_max"] = tr.max_history.back();
        rep["min_monotone_after_theta"] = monotone;
        rep["snapshots"] = snaps;
        rep["times"] = tr.times;
        rep["min_history"] = tr.min_history;
        rep["max_history"] = tr.max_history;
        rep["residual_history"] = tr.residual_history;
        rep["config"] = echo_json(rc);
        const auto report = write_json(rep, g.output_dir / (rc.name + "_report.json"));
        manifest.add_output(report);

        if (!g.quiet) {
            std::printf("simulate %s: %zu steps, dt %.6g, t = %.6g%s\n", rc.name.c_str(), tr.times.size() - 1, tr.dt,
                        tr.times.back(), tr.reached_steady ? " (steady)" : "");
            for (const auto& s : snaps)
                std::printf("  t=%-7g min %.6f max %.6f\n", s["requested_time"].get<double>(),
                            s["min"].get<double>(), s["max"].get<double>());
            std::printf("  final residual %.3e, report %s\n", tr.final_residual, report.string().c_str());
        }
        return kOk;
    });
}

}  // namespace regfrac::cli
