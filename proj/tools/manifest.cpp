#include "manifest.hpp"

#include <cstdio>

#include <openssl/evp.h>

namespace shadowmt::cli {

std::string sha256_hex(const std::string& bytes) {
    unsigned char md[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    EVP_Digest(bytes.data(), bytes.size(), md, &len, EVP_sha256(), nullptr);
    std::string hex;
    char buf[3];
    for (unsigned int i = 0; i < len; ++i) {
        std::snprintf(buf, sizeof buf, "%02x", md[i]);
        hex += buf;
    }
    return hex;
}

void RunManifest::add_input(const std::string& path, const std::string& contents) {
    inputs.emplace_back(path, sha256_hex(contents));
}

void RunManifest::add_output(const std::string& name, const std::string& contents) {
    outputs.emplace_back(name, sha256_hex(contents));
}

nlohmann::json RunManifest::to_json() const {
    nlohmann::json in = nlohmann::json::array(), out = nlohmann::json::array();
    for (const auto& [p, d] : inputs) in.push_back({{"path", p}, {"sha256", d}});
    for (const auto& [p, d] : outputs) out.push_back({{"name", p}, {"sha256", d}});
    return {{"command", command}, {"tool_version", kVersion}, {"seed", seed},
            {"parameters", parameters}, {"inputs", in}, {"outputs", out}};
}

} // namespace shadowmt::cli
