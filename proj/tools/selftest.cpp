#include "commands.hpp"

#include "regfrac/evolution.hpp"
#include "regfrac/liouville.hpp"
#include "regfrac/operator.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <random>
#include <sstream>

namespace regfrac::cli {

namespace {

struct Row {
    std::string suite;
    std::string detail;
    bool pass = false;
};

struct Setup {
    Obstacle obstacle = Obstacle::disk({0.3, -0.2}, 1.0);
    GridPtr grid = std::make_shared<const Grid2D>(Grid2D::with_obstacle(4.0, 32, obstacle));
    BistableSpec reaction = BistableSpec::cubic(0.1);
    double sign = 1.0;  // -1 under --inject-fault operator-sign

    std::vector<double> apply(const RegionalOperator& op, const Field& u) const {
        auto out = op.apply(u);
        for (double& v : out) v *= sign;
        return out;
    }
};

Field random_field(const GridPtr& g, std::mt19937_64& rng, double farfield) {
    std::uniform_real_distribution<double> U(0.0, 1.0);
    Field f(g, farfield);
    for (std::size_t i : g->exterior_cells()) f[i] = U(rng);
    return f;
}

// One forward Euler step written out here, so a faulty operator sign shows.
void euler(const Setup& st, const RegionalOperator& op, Field& u, double dt) {
    const auto Lu = st.apply(op, u);
    for (std::size_t i : u.grid().exterior_cells()) u[i] += dt * (Lu[i] + st.reaction.f(u[i]));
}

Row oracle_equivalence(const Setup& st) {
    auto k = make_kernel(KernelFamily::RegularizedFractional, 0.5, 2, 0.01);
    RegionalOperator op(st.grid, k);
    std::mt19937_64 rng(11);
    double worst = 0.0;
    for (int trial = 0; trial < 5; ++trial) {
        const Field u = random_field(st.grid, rng, trial % 2);
        const auto fast = st.apply(op, u);
        const auto ref = apply_bruteforce(u, k);
        double scale = 0.0;
        for (double v : ref) scale = std::max(scale, std::abs(v));
        for (std::size_t i : st.grid->exterior_cells()) worst = std::max(worst, std::abs(fast[i] - ref[i]) / scale);
    }
    std::ostringstream d;
    d.precision(2);
    d << std::scientific << "5 fields, max rel. deviation " << worst;
    return {"oracle-equivalence", d.str(), worst <= 1e-10};
}

Row invariant_region(const Setup& st) {
    auto k = make_kernel(KernelFamily::RegularizedFractional, 0.5, 2, 0.01);
    RegionalOperator op(st.grid, k);
    const double dt = 0.9 / (op.lambda_max() + st.reaction.lip_bound());
    std::mt19937_64 rng(12);
    double lo = 1.0, hi = 0.0;
    for (int trial = 0; trial < 3; ++trial) {
        Field u = random_field(st.grid, rng, trial % 2);
        for (int n = 0; n < 200; ++n) {
            euler(st, op, u, dt);
            lo = std::min(lo, u.min());
            hi = std::max(hi, u.max());
        }
    }
    const bool ok = lo >= 0.0 && hi <= 1.0;
    std::ostringstream d;
    d << "3 x 200 steps, range [" << (ok ? "0,1" : "left") << "]";
    return {"invariant-region", d.str(), ok};
}

Row weight_nonnegativity(const Setup& st) {
    bool ok = true;
    int checked = 0;
    for (double s : {0.25, 0.5, 0.75}) {
        auto k = make_kernel(KernelFamily::RegularizedFractional, s, 2, 0.01);
        RegionalOperator op(st.grid, k);
        // interaction weights as seen through the operator: L applied to a unit bump
        for (std::size_t c : {st.grid->exterior_cells().front(), st.grid->exterior_cells().back()}) {
            Field e(st.grid, 0.0);
            e[c] = 1.0;
            const auto Le = st.apply(op, e);
            for (std::size_t i : st.grid->exterior_cells())
                if (i != c && Le[i] < 0.0) ok = false;
            ++checked;
        }
        if (!operator_weights_nonneg(*st.grid, k).nonnegative) ok = false;
    }
    std::ostringstream d;
    d << "s in {0.25,0.5,0.75}, " << checked << " bump columns";
    return {"weight-nonnegativity", d.str(), ok};
}

Row comparison(const Setup& st) {
    auto k = make_kernel(KernelFamily::RegularizedFractional, 0.5, 2, 0.01);
    RegionalOperator op(st.grid, k);
    const double dt = 0.9 / (op.lambda_max() + st.reaction.lip_bound());
    std::mt19937_64 rng(13);
    std::uniform_real_distribution<double> U(0.0, 1.0);
    int ordered = 0;
    const int trials = 5;
    for (int trial = 0; trial < trials; ++trial) {
        Field v = random_field(st.grid, rng, 0.0);
        Field u(st.grid, 1.0);
        for (std::size_t i : st.grid->exterior_cells()) u[i] = v[i] + U(rng) * (1.0 - v[i]);
        bool ok = true;
        for (int n = 0; n < 100 && ok; ++n) {
            euler(st, op, u, dt);
            euler(st, op, v, dt);
            for (std::size_t i : st.grid->exterior_cells())
                if (!(v[i] <= u[i])) ok = false;
        }
        ordered += ok;
    }
    const auto lemma = discrete_weak_max_test(k, st.grid, st.obstacle, st.reaction, 5, 3);
    const auto control = discrete_weak_max_test(k, st.grid, st.obstacle, st.reaction, 5, 3, true);
    std::ostringstream d;
    d << "ordered " << ordered << "/" << trials << ", half-space lemma " << lemma.passed << "/" << lemma.instances
      << ", control detected " << control.detected << "/" << control.instances;
    const bool pass = ordered == trials && lemma.pass() && control.detected == control.instances;
    return {"comparison-principle", d.str(), pass};
}

}  // namespace

int run_selftest(const Globals& g, const SelftestArgs& a) {
    RunManifest manifest("selftest", g.output_dir);
    if (!a.inject_fault.empty()) manifest.add_parameter("inject_fault", a.inject_fault);
    return guarded(manifest, [&] {
        Setup st;
        if (a.inject_fault == "operator-sign") st.sign = -1.0;

        Stopwatch clock;
        std::vector<Row> rows;
        auto run = [&](const char* name, Row (*suite)(const Setup&)) {
            try {
                rows.push_back(suite(st));
            } catch (const std::exception& e) {
                rows.push_back({name, std::string("exception: ") + e.what(), false});
            }
            manifest.add_timing(name, clock.lap());
        };
        run("oracle-equivalence", oracle_equivalence);
        run("invariant-region", invariant_region);
        run("weight-nonnegativity", weight_nonnegativity);
        run("comparison-principle", comparison);

        std::ostringstream table;
        bool all = true;
        for (const auto& r : rows) {
            char line[256];
            std::snprintf(line, sizeof line, "%-22s %-4s  %s\n", r.suite.c_str(), r.pass ? "pass" : "FAIL",
                          r.detail.c_str());
            table << line;
            all = all && r.pass;
        }
        table << (all ? "selftest: all suites pass\n" : "selftest: FAILED\n");

        std::filesystem::create_directories(g.output_dir);
        const auto path = g.output_dir / "selftest.txt";
        std::ofstream(path) << table.str();
        manifest.add_output(path);
        if (!g.quiet) std::fputs(table.str().c_str(), stdout);
        return all ? kOk : kCheckFailed;
    });
}

}  // namespace regfrac::cli
