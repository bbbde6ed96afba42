#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "rav/bitvec.hpp"

namespace rav::store {

/*! \brief One cached canonical artifact.
 *
 * The (kind, params) key uniquely determines the payload: putting a
 * different payload under an existing key is a divergence fault, because
 * every cached object has a single-valued contract.
 */
struct CacheEntry {
    std::string kind;
    std::string params;
    std::string bits_hex;
    uint64_t bit_length = 0;
    std::string tool_version;
    std::string created_at;

    BitVec bits() const { return BitVec::from_hex(bits_hex, bit_length); }
};

CacheEntry make_entry(std::string kind, std::string params, const BitVec& payload);

uint64_t fnv1a64(std::string_view data);

/*! \brief Directory-backed cache: one directory per kind, one file per key.
 *
 * Each file is a JSON record followed by a trailing checksum line.  Writes
 * go through a temp file and an atomic rename, so concurrent readers never
 * observe partial entries.
 */
class Store {
public:
    explicit Store(std::filesystem::path root);

    /// Returns the entry iff present; never recomputes.  Throws IoError on
    /// a checksum mismatch.
    std::optional<CacheEntry> get(const std::string& kind, const std::string& params) const;

    /// Idempotent for identical payloads; DivergenceError otherwise unless
    /// `force` (a development escape) is set.
    void put(const CacheEntry& entry, bool force = false);

    std::vector<CacheEntry> list() const;

    struct VerifyReport {
        std::size_t checked = 0;
        std::vector<std::string> corrupt; // file paths
    };
    VerifyReport verify() const;

    const std::filesystem::path& root() const { return root_; }

private:
    std::filesystem::path entry_path(const std::string& kind, const std::string& params) const;

    std::filesystem::path root_;
};

} // namespace rav::store
