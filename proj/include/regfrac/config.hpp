#pragma once

#include "regfrac/evolution.hpp"

#include <filesystem>
#include <map>
#include <string>
#include <utility>
#include <vector>

namespace regfrac {

/// A parsed run configuration plus the resolved key/value echo (defaults
/// included) for reports and manifests.
struct RunConfig {
    SimConfig sim;
    std::string name = "run";
    /// section -> key -> resolved value, in file order of sections
    std::vector<std::pair<std::string, std::vector<std::pair<std::string, std::string>>>> echo;
};

/// Flat sectioned key = value text; '#' starts a comment. Unknown sections
/// or keys, malformed values and failed validations are reported as
/// InvalidArgument with "path:line: section.key ..." messages. Relative file
/// references resolve against the config's directory.
RunConfig load_config(const std::filesystem::path& path);
RunConfig parse_config(const std::string& text, const std::string& origin = "<string>",
                       const std::filesystem::path& base_dir = ".");

}  // namespace regfrac
