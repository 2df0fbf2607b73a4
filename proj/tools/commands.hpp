#pragma once

#include "regfrac/error.hpp"
#include "regfrac/manifest.hpp"

#include <json.hpp>

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <string>

namespace regfrac::cli {

// Exit codes shared by every subcommand.
inline constexpr int kOk = 0;
inline constexpr int kCheckFailed = 1;  // ran fine, verdict negative
inline constexpr int kUsage = 2;        // bad arguments or config
inline constexpr int kNumerical = 3;    // numerics or hypotheses failed

struct Globals {
    std::filesystem::path output_dir = "regfrac_out";
    int threads = 1;
    bool quiet = false;
};

struct SimulateArgs {
    std::filesystem::path config;
};

struct WaveArgs {
    double theta = 0.1;
    double s = 0.5;
    double Z = 60.0;
    double h = 0.02;
    double c_norm = 1.0;
};

struct LiouvilleArgs {
    std::filesystem::path config;
    double tol_one = 0.05;
    bool allow_nonconvex = false;
};

struct SelftestArgs {
    std::string inject_fault;  // "" or "operator-sign"
};

int run_simulate(const Globals& g, const SimulateArgs& a);
int run_wave(const Globals& g, const WaveArgs& a);
int run_check_liouville(const Globals& g, const LiouvilleArgs& a);
int run_selftest(const Globals& g, const SelftestArgs& a);

class Stopwatch {
public:
    double lap() {
        const auto now = std::chrono::steady_clock::now();
        const double s = std::chrono::duration<double>(now - last_).count();
        last_ = now;
        return s;
    }

private:
    std::chrono::steady_clock::time_point last_ = std::chrono::steady_clock::now();
};

std::filesystem::path write_json(const nlohmann::ordered_json& j, const std::filesystem::path& path);

// Runs body with the manifest; maps library exceptions to exit codes and
// writes the manifest on every path.
template <class Body>
int guarded(RunManifest& manifest, Body&& body) {
    int code = kOk;
    try {
        code = body();
    } catch (const InvalidArgument& e) {
        manifest.set_error(e.what());
        std::fprintf(stderr, "error: %s\n", e.what());
        code = kUsage;
    } catch (const Error& e) {
        manifest.set_error(e.what());
        std::fprintf(stderr, "error: %s\n", e.what());
        code = kNumerical;
    } catch (const std::exception& e) {
        manifest.set_error(e.what());
        std::fprintf(stderr, "error: %s\n", e.what());
        code = kNumerical;
    }
    try {
        manifest.write();
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: could not write manifest: %s\n", e.what());
        if (code == kOk) code = kNumerical;
    }
    return code;
}

}  // namespace regfrac::cli
