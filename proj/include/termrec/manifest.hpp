#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace termrec {

// Ordered key=value record of everything a run resolved: subcommand, config
// values, input/output paths, artifact hashes. Contains no wall-clock data,
// so identical runs write identical manifests.
struct RunManifest {
    std::string subcommand;
    std::vector<std::pair<std::string, std::string>> entries;

    void set(const std::string& key, const std::string& value);
    void set(const std::string& key, double value);
    void set(const std::string& key, std::int64_t value);
    void set_file(const std::string& key, const std::string& path); // path plus content hash

    std::string to_text() const;
    void write(const std::string& path) const;
};

std::uint64_t hash_file(const std::string& path);
std::string hash_hex(std::uint64_t h);

} // namespace termrec
