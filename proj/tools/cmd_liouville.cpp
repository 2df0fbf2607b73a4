#include "commands.hpp"

#include "regfrac/config.hpp"
#include "regfrac/field_io.hpp"
#include "regfrac/liouville.hpp"

#include <cstdio>

namespace regfrac::cli {

int run_check_liouville(const Globals& g, const LiouvilleArgs& a) {
    RunManifest manifest("check-liouville", g.output_dir);
    manifest.add_parameter("config", a.config.string());
    manifest.add_parameter("tol_one", std::to_string(a.tol_one));
    manifest.add_parameter("allow_nonconvex", a.allow_nonconvex ? "true" : "false");
    return guarded(manifest, [&] {
        Stopwatch clock;
        RunConfig rc = load_config(a.config);
        manifest.set_config(rc.echo);
        // the theorem is about solutions tending to 1 at infinity
        if (!rc.sim.liouville_closure) {
            rc.sim.liouville_closure = true;
            manifest.add_parameter("grid.liouville_closure", "forced true");
        }
        manifest.add_timing("load_config", clock.lap());

        LiouvilleOptions opt;
        opt.tol_one = a.tol_one;
        opt.allow_nonconvex = a.allow_nonconvex;
        rc.sim.validate();
        if (rc.sim.obstacle && !is_convex(*rc.sim.obstacle) && !opt.allow_nonconvex)
            throw InvalidArgument("check-liouville: obstacle is not convex; rerun with --allow-nonconvex for an "
                                  "exploratory, non-certifying report");
        if (const auto cond = check_conditions(rc.sim.reaction); !cond.pass())
            throw HypothesisViolation("check-liouville: reaction fails " + cond.failures());
        const Trajectory tr = simulate(rc.sim);
        manifest.add_timing("evolve", clock.lap());
        const LiouvilleReport r = check_liouville(rc.sim, tr, opt);
        manifest.add_timing("checks", clock.lap());

        std::filesystem::create_directories(g.output_dir);
        if (tr.final_field) {
            const auto csv = g.output_dir / (rc.name + "_steady.csv");
            write_field_csv(*tr.final_field, csv);
            manifest.add_output(csv);
        }

        nlohmann::ordered_json slides = nlohmann::ordered_json::array();
        for (std::size_t k = 0; k < r.slides.size(); ++k)
            slides.push_back({{"e", {r.directions[k].x, r.directions[k].y}},
                              {"outcome", r.slides[k].describe()},
                              {"below_grid", r.slides[k].below_grid},
                              {"r_min", r.slides[k].r_min},
                              {"r_max", r.slides[k].r_max}});
        nlohmann::ordered_json j;
        j["name"] = rc.name;
        j["pass"] = r.pass();
        j["certified"] = r.certified();
        j["non_certifying"] = !r.convexity_certified;
        j["convexity_certified"] = r.convexity_certified;
        j["tol_one"] = r.tol_one;
        j["steady_min"] = r.steady_min;
        j["steady_ok"] = r.steady_ok();
        j["steady_reached"] = r.steady_reached;
        j["final_time"] = r.final_time;
        j["final_residual"] = r.final_residual;
        j["gamma_observed"] = r.gamma_observed;
        j["sliding_run"] = r.sliding_run;
        j["sliding_ok"] = r.sliding_ok();
        j["wave_speed"] = r.wave_speed;
        j["sliding"] = slides;
        j["maxprinciple"] = {{"pass", r.maxprinciple_pass},
                             {"instances", r.maxprinciple.instances},
                             {"passed", r.maxprinciple.passed},
                             {"min_gap", r.maxprinciple.min_gap},
                             {"c0", r.maxprinciple.c0},
                             {"c1", r.maxprinciple.c1}};
        const auto json = write_json(j, g.output_dir / (rc.name + "_liouville.json"));
        manifest.add_output(json);

        if (!g.quiet) {
            std::printf("check-liouville %s\n", rc.name.c_str());
            std::printf("  steady state  min u = %.8f at t = %g (residual %.2e)  %s\n", r.steady_min, r.final_time,
                        r.final_residual, r.steady_ok() ? "ok" : "FAIL");
            std::printf("  gamma         min u over t > 0 = %.4g  %s\n", r.gamma_observed,
                        r.gamma_observed > 0.0 ? "ok" : "FAIL");
            std::printf("  sliding       %s  %s\n", r.r_star_summary().c_str(), r.sliding_ok() ? "ok" : "FAIL");
            std::printf("  comparison    %d/%d instances  %s\n", r.maxprinciple.passed, r.maxprinciple.instances,
                        r.maxprinciple_pass ? "ok" : "FAIL");
            std::printf("  verdict       %s%s\n", r.pass() ? "u = 1 outside K (numerically)" : "FAIL",
                        r.convexity_certified ? "" : "  [non-certifying: obstacle not convex]");
        }
        return r.pass() ? kOk : kCheckFailed;
    });
}

}  // namespace regfrac::cli
