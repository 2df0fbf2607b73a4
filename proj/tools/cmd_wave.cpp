#include "commands.hpp"

#include "regfrac/travelling_wave.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>

namespace regfrac::cli {

int run_wave(const Globals& g, const WaveArgs& a) {
    RunManifest manifest("wave", g.output_dir);
    for (auto [k, v] : {std::pair{"theta", a.theta}, {"s", a.s}, {"Z", a.Z}, {"h", a.h}, {"c_norm", a.c_norm}}) {
        char buf[32];
        std::snprintf(buf, sizeof buf, "%.17g", v);
        manifest.add_parameter(k, buf);
    }
    return guarded(manifest, [&] {
        Stopwatch clock;
        const auto reaction = BistableSpec::cubic(a.theta);
        const int half = static_cast<int>(std::lround(a.Z / a.h));
        if (half < 2) throw InvalidArgument("wave: Z/h too small");
        WaveOptions opt;
        opt.c_norm = a.c_norm;
        const WaveProfile w = solve_front(reaction, a.s, a.Z, 2 * half + 1, opt);
        manifest.add_timing("solve_front", clock.lap());

        std::filesystem::create_directories(g.output_dir);
        const auto csv = g.output_dir / "wave_profile.csv";
        {
            std::ofstream out(csv);
            if (!out) throw InvalidArgument("cannot write " + csv.string());
            out << "# z,phi\n";
            char buf[64];
            for (std::size_t k = 0; k < w.size(); ++k) {
                std::snprintf(buf, sizeof buf, "%.17g,%.17g\n", w.node(k), w.phi[k]);
                out << buf;
            }
        }
        manifest.add_output(csv);

        const auto cond = check_conditions(reaction);
        const double sign_expected = cond.integral > 1e-10 ? 1.0 : (cond.integral < -1e-10 ? -1.0 : 0.0);
        nlohmann::ordered_json rep;
        rep["theta"] = a.theta;
        rep["s"] = a.s;
        rep["c_norm"] = a.c_norm;
        rep["Z"] = w.halfwidth();
        rep["h"] = w.h;
        rep["nodes"] = w.size();
        rep["c"] = w.speed_c;
        rep["residual_norm"] = w.residual_norm;
        rep["monotone"] = w.monotone;
        rep["phi_left"] = w.phi.front();
        rep["phi_right"] = w.phi.back();
        rep["integral_f"] = cond.integral;
        rep["phase1_steps"] = w.phase1_steps;
        rep["newton_steps"] = w.newton_steps;
        rep["certificates"] = {
            {"residual_le_1e-6", w.residual_norm <= 1e-6},
            {"monotone", w.monotone},
            {"speed_sign_matches_integral",
             sign_expected == 0.0 ? std::abs(w.speed_c) <= 1e-4 : w.speed_c * sign_expected > 0.0},
        };
        const auto json = write_json(rep, g.output_dir / "wave_report.json");
        manifest.add_output(json);

        if (!g.quiet)
            std::printf("wave theta=%g s=%g: c = %.10g, residual %.3e, %s, %zu nodes on [-%g, %g]\n", a.theta, a.s,
                        w.speed_c, w.residual_norm, w.monotone ? "monotone" : "NOT monotone", w.size(),
                        w.halfwidth(), w.halfwidth());
        return kOk;
    });
}

}  // namespace regfrac::cli
