#include "termrec/manifest.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "termrec/errors.hpp"
#include "termrec/text.hpp"

namespace termrec {

void RunManifest::set(const std::string& key, const std::string& value) {
    entries.emplace_back(key, value);
}

void RunManifest::set(const std::string& key, double value) {
    entries.emplace_back(key, format_double(value));
}

void RunManifest::set(const std::string& key, std::int64_t value) {
    entries.emplace_back(key, std::to_string(value));
}

void RunManifest::set_file(const std::string& key, const std::string& path) {
    entries.emplace_back(key, path);
    entries.emplace_back(key + "_hash", hash_hex(hash_file(path)));
}

std::string RunManifest::to_text() const {
    std::ostringstream os;
    os << "subcommand=" << subcommand << "\n";
    for (const auto& [key, value] : entries) os << key << '=' << value << "\n";
    return os.str();
}

void RunManifest::write(const std::string& path) const {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw DataError("cannot write manifest '" + path + "'");
    os << to_text();
}

std::uint64_t hash_file(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw DataError("cannot hash '" + path + "'");
    std::uint64_t h = 0xcbf29ce484222325ULL;
    char buf[1 << 16];
    while (is.read(buf, sizeof(buf)) || is.gcount() > 0)
        h = fnv1a64(h, std::string_view(buf, static_cast<std::size_t>(is.gcount())));
    return h;
}

std::string hash_hex(std::uint64_t h) {
    char buf[20];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

} // namespace termrec
