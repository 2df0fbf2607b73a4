#include "regfrac/manifest.hpp"

#include "regfrac/error.hpp"

#include <json.hpp>

#include <chrono>
#include <cstdio>
#include <ctime>
#include <fstream>

#ifndef REGFRAC_VERSION
#define REGFRAC_VERSION "unknown"
#endif

namespace regfrac {

std::uint64_t file_checksum(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InvalidArgument("cannot read " + path.string());
    std::uint64_t h = 0xcbf29ce484222325ULL;
    char buf[1 << 14];
    while (in) {
        in.read(buf, sizeof buf);
        for (std::streamsize i = 0; i < in.gcount(); ++i) {
            h ^= static_cast<unsigned char>(buf[i]);
            h *= 0x100000001b3ULL;
        }
    }
    return h;
}

RunManifest::RunManifest(std::string command, std::filesystem::path output_dir)
    : command_(std::move(command)), dir_(std::move(output_dir)) {}

void RunManifest::set_config(
    std::vector<std::pair<std::string, std::vector<std::pair<std::string, std::string>>>> echo) {
    config_ = std::move(echo);
}

void RunManifest::add_parameter(const std::string& key, const std::string& value) { params_.emplace_back(key, value); }

void RunManifest::add_timing(const std::string& phase, double seconds) { timings_.emplace_back(phase, seconds); }

void RunManifest::add_output(const std::filesystem::path& file) { outputs_.push_back(file); }

void RunManifest::set_error(const std::string& message) { error_ = message; }

std::filesystem::path RunManifest::write() const {
    using nlohmann::ordered_json;
    ordered_json j;
    j["tool"] = "regfrac";
    j["version"] = REGFRAC_VERSION;
    j["command"] = command_;
    {
        const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
        char buf[32];
        std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&now));
        j["created_utc"] = buf;
    }
    j["status"] = error_.empty() ? "ok" : "error";
    if (!error_.empty()) j["error"] = error_;

    ordered_json cfg = ordered_json::object();
    for (const auto& [sec, kv] : config_) {
        ordered_json s = ordered_json::object();
        for (const auto& [k, v] : kv) s[k] = v;
        cfg[sec] = s;
    }
    j["config"] = cfg;

    ordered_json params = ordered_json::object();
    for (const auto& [k, v] : params_) params[k] = v;
    j["parameters"] = params;

    ordered_json timings = ordered_json::object();
    for (const auto& [k, v] : timings_) timings[k] = v;
    j["timings_s"] = timings;

    ordered_json outs = ordered_json::array();
    for (const auto& f : outputs_) {
        ordered_json o;
        o["file"] = f.lexically_relative(dir_).empty() ? f.string() : f.lexically_relative(dir_).string();
        if (std::filesystem::exists(f)) {
            char hex[20];
            std::snprintf(hex, sizeof hex, "%016llx", static_cast<unsigned long long>(file_checksum(f)));
            o["fnv1a64"] = hex;
            o["bytes"] = std::filesystem::file_size(f);
        } else {
            o["missing"] = true;
        }
        outs.push_back(o);
    }
    j["outputs"] = outs;

    std::filesystem::create_directories(dir_);
    const auto path = dir_ / "manifest.json";
    std::ofstream out(path);
    if (!out) throw InvalidArgument("cannot write " + path.string());
    out << j.dump(2) << '\n';
    return path;
}

}  // namespace regfrac
