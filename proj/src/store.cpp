#include "rav/store.hpp"

#include <chrono>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "rav/errors.hpp"
#include "rav/version.hpp"

namespace rav::store {

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

uint64_t fnv1a64(std::string_view data) {
    uint64_t h = 0xcbf29ce484222325ull;
    for (unsigned char c : data) {
        h ^= c;
        h *= 0x100000001b3ull;
    }
    return h;
}

namespace {

std::string now_iso8601() {
    const auto now = std::chrono::system_clock::now();
    const std::time_t t = std::chrono::system_clock::to_time_t(now);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&t));
    return buf;
}

std::string sanitize(const std::string& key) {
    std::string out = key;
    for (char& c : out) {
        const bool ok = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') ||
                        (c >= '0' && c <= '9') || c == '=' || c == ',' || c == '-' ||
                        c == '_' || c == '.';
        if (!ok) {
            c = '_';
        }
    }
    return out;
}

std::string serialize(const CacheEntry& e) {
    json j;
    j["kind"] = e.kind;
    j["params"] = e.params;
    j["bits_hex"] = e.bits_hex;
    j["bit_length"] = e.bit_length;
    j["tool_version"] = e.tool_version;
    j["created_at"] = e.created_at;
    std::string body = j.dump();
    char checksum[24];
    std::snprintf(checksum, sizeof checksum, "%016llx",
                  static_cast<unsigned long long>(fnv1a64(body)));
    return body + "\nchecksum " + checksum + "\n";
}

CacheEntry deserialize(const std::string& text, const std::string& path) {
    const auto nl = text.find('\n');
    if (nl == std::string::npos) {
        throw IoError("store entry " + path + " is missing its checksum line");
    }
    const std::string body = text.substr(0, nl);
    std::istringstream trailer(text.substr(nl + 1));
    std::string word, hex;
    if (!(trailer >> word >> hex) || word != "checksum") {
        throw IoError("store entry " + path + " has a malformed checksum line");
    }
    char expected[24];
    std::snprintf(expected, sizeof expected, "%016llx",
                  static_cast<unsigned long long>(fnv1a64(body)));
    if (hex != expected) {
        throw IoError("store entry " + path + " failed its checksum (corrupt payload)");
    }
    json j;
    try {
        j = json::parse(body);
    } catch (const json::exception& e) {
        throw IoError("store entry " + path + " is not valid JSON: " + e.what());
    }
    CacheEntry entry;
    entry.kind = j.at("kind").get<std::string>();
    entry.params = j.at("params").get<std::string>();
    entry.bits_hex = j.at("bits_hex").get<std::string>();
    entry.bit_length = j.at("bit_length").get<uint64_t>();
    entry.tool_version = j.at("tool_version").get<std::string>();
    entry.created_at = j.at("created_at").get<std::string>();
    return entry;
}

} // namespace

CacheEntry make_entry(std::string kind, std::string params, const BitVec& payload) {
    CacheEntry e;
    e.kind = std::move(kind);
    e.params = std::move(params);
    e.bits_hex = payload.to_hex();
    e.bit_length = payload.size();
    e.tool_version = kToolVersion;
    e.created_at = now_iso8601();
    return e;
}

Store::Store(fs::path root) : root_(std::move(root)) {
    std::error_code ec;
    fs::create_directories(root_, ec);
    if (ec) {
        throw IoError("cannot create store root " + root_.string() + ": " + ec.message());
    }
}

fs::path Store::entry_path(const std::string& kind, const std::string& params) const {
    return root_ / sanitize(kind) / (sanitize(params) + ".json");
}

std::optional<CacheEntry> Store::get(const std::string& kind, const std::string& params) const {
    const fs::path path = entry_path(kind, params);
    std::ifstream f(path);
    if (!f) {
        return std::nullopt;
    }
    std::ostringstream buf;
    buf << f.rdbuf();
    return deserialize(buf.str(), path.string());
}

void Store::put(const CacheEntry& entry, bool force) {
    if (entry.bits_hex.empty()) {
        throw ContractError("refusing to store an empty payload");
    }
    const fs::path path = entry_path(entry.kind, entry.params);

    if (auto existing = get(entry.kind, entry.params)) {
        if (existing->bits_hex == entry.bits_hex && existing->bit_length == entry.bit_length) {
            return; // idempotent
        }
        if (!force) {
            throw DivergenceError("store key " + entry.kind + "/" + entry.params +
                                  " re-derived with a different payload");
        }
    }

    std::error_code ec;
    fs::create_directories(path.parent_path(), ec);
    if (ec) {
        throw IoError("cannot create " + path.parent_path().string() + ": " + ec.message());
    }
    const fs::path tmp = path.parent_path() / (path.filename().string() + ".tmp");
    {
        std::ofstream f(tmp, std::ios::trunc);
        if (!f) {
            throw IoError("cannot open " + tmp.string() + " for writing");
        }
        f << serialize(entry);
        f.flush();
        if (!f) {
            throw IoError("short write to " + tmp.string());
        }
    }
    fs::rename(tmp, path, ec);
    if (ec) {
        throw IoError("cannot rename " + tmp.string() + ": " + ec.message());
    }
}

std::vector<CacheEntry> Store::list() const {
    std::vector<CacheEntry> entries;
    if (!fs::exists(root_)) {
        return entries;
    }
    for (const auto& kind_dir : fs::directory_iterator(root_)) {
        if (!kind_dir.is_directory()) {
            continue;
        }
        for (const auto& file : fs::directory_iterator(kind_dir.path())) {
            if (file.path().extension() != ".json") {
                continue;
            }
            std::ifstream f(file.path());
            std::ostringstream buf;
            buf << f.rdbuf();
            entries.push_back(deserialize(buf.str(), file.path().string()));
        }
    }
    return entries;
}

Store::VerifyReport Store::verify() const {
    VerifyReport report;
    if (!fs::exists(root_)) {
        return report;
    }
    for (const auto& kind_dir : fs::directory_iterator(root_)) {
        if (!kind_dir.is_directory()) {
            continue;
        }
        for (const auto& file : fs::directory_iterator(kind_dir.path())) {
            if (file.path().extension() != ".json") {
                continue;
            }
            ++report.checked;
            std::ifstream f(file.path());
            std::ostringstream buf;
            buf << f.rdbuf();
            try {
                deserialize(buf.str(), file.path().string());
            } catch (const IoError&) {
                report.corrupt.push_back(file.path().string());
            }
        }
    }
    return report;
}

} // namespace rav::store
