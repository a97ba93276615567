#pragma once

#include <map>
#include <string>
#include <vector>

#include <json.hpp>

namespace shadowmt::cli {

inline constexpr const char* kVersion = "0.1.0";

std::string sha256_hex(const std::string& bytes);

/// Record of one CLI run: equal manifests imply byte-identical outputs.
struct RunManifest {
    std::string command;
    nlohmann::json parameters = nlohmann::json::object();
    std::uint64_t seed = 0;
    std::vector<std::pair<std::string, std::string>> inputs;   // path, digest
    std::vector<std::pair<std::string, std::string>> outputs;  // name, digest

    void add_input(const std::string& path, const std::string& contents);
    void add_output(const std::string& name, const std::string& contents);
    nlohmann::json to_json() const;
};

} // namespace shadowmt::cli
