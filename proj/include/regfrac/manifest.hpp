#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <utility>
#include <vector>

namespace regfrac {

/// 64-bit FNV-1a of a file's bytes.
std::uint64_t file_checksum(const std::filesystem::path& path);

/// Record of one CLI run: resolved configuration, timings, emitted files.
class RunManifest {
public:
    RunManifest(std::string command, std::filesystem::path output_dir);

    void set_config(std::vector<std::pair<std::string, std::vector<std::pair<std::string, std::string>>>> echo);
    void add_parameter(const std::string& key, const std::string& value);
    void add_timing(const std::string& phase, double seconds);
    /// Records a file written under the output directory.
    void add_output(const std::filesystem::path& file);
    void set_error(const std::string& message);

    /// Writes manifest.json into the output directory (checksums computed now).
    std::filesystem::path write() const;

private:
    std::string command_;
    std::filesystem::path dir_;
    std::vector<std::pair<std::string, std::vector<std::pair<std::string, std::string>>>> config_;
    std::vector<std::pair<std::string, std::string>> params_;
    std::vector<std::pair<std::string, double>> timings_;
    std::vector<std::filesystem::path> outputs_;
    std::string error_;
};

}  // namespace regfrac
