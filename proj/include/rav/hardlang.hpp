#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>

#include "rav/avoid.hpp"
#include "rav/circuit.hpp"
#include "rav/codec.hpp"
#include "rav/store.hpp"

namespace rav::hardlang {

/// Time function descriptor t(n) = n^exponent.
struct TimeBound {
    uint32_t exponent = 1;
};

struct Params {
    uint64_t s = 0;
    bool micro_regime = false; // n below the paper-regime floor of 12
};

/// s = floor(t(n)^(1/4) / log2(t(n))); throws when the formula gives s < 1.
Params params_from_t(TimeBound t, uint32_t n);

/// Identifies one hard-language slice: the Avoid(PTT) instance parameters.
struct HardLanguageSpec {
    uint32_t n = 0;
    uint32_t s = 0;
    codec::Scheme scheme = codec::Scheme::Micro;

    uint64_t encoding_bits() const { return codec::encoding_length(n, s, scheme); }
    std::string key() const;
};

/*! \brief Characteristic string of one slice: explicit prefix f_n followed
 *  by an implicit zero tail out to length 2^n. */
struct CharString {
    uint32_t n = 0;
    BitVec prefix;
    uint32_t s = 0; // provenance; 0 for synthetic tables
    codec::Scheme scheme = codec::Scheme::Micro;

    bool bit(uint64_t value) const {
        return value < prefix.size() && prefix.get(value);
    }
    uint64_t full_length() const { return uint64_t{1} << n; }
    BitVec full_bits() const;

    static CharString from_table(uint32_t n, BitVec table);
};

/*! \brief Hard-language context: builds canonical characteristic strings and
 *  answers membership queries through the witness cache.
 *
 * One Avoid solve per (n, s, scheme) ever; everything else is a cache hit,
 * which is the executable form of witness obliviousness.  The cache is
 * two-level: an in-memory map in front of the persistent store.
 */
class HardLang {
public:
    explicit HardLang(store::Store& store, uint64_t budget = uint64_t{1} << 22,
                      unsigned workers = 1);

    /*! Derive (or fetch) the canonical characteristic string for a spec.
     *
     * `force_recompute` re-derives and re-puts even on a cache hit, so the
     * store's divergence check re-attests the single-valued contract.
     * `allow_heuristic` substitutes a sampled Avoid solve when the
     * exhaustive one is over budget; the result is cached under a separate
     * kind and never mixes with canonical entries.
     */
    CharString build_char_string(const HardLanguageSpec& spec, bool force_recompute = false,
                                 bool allow_heuristic = false);

    /// Membership bit of x in the slice: bit value(x) of the CharString.
    bool membership(const BitVec& x, const HardLanguageSpec& spec);

    /// The uniformly-sparse extension: 1 iff value(x) <= |E|.  Needs no
    /// witness, runs in O(n).
    bool extension_membership(const BitVec& x, const HardLanguageSpec& spec) const;

    uint64_t solve_count() const { return solves_; }
    uint64_t cache_hits() const { return cache_hits_; }

private:
    const CharString& cached(const HardLanguageSpec& spec);
    CharString derive(const HardLanguageSpec& spec, bool allow_heuristic);

    store::Store& store_;
    uint64_t budget_;
    unsigned workers_;
    std::map<std::string, CharString> memory_;
    uint64_t solves_ = 0;
    uint64_t cache_hits_ = 0;
};

struct LowerBoundReport {
    uint64_t circuits_checked = 0;
    uint64_t matches = 0;
    std::optional<Circuit> first_match;
    uint64_t min_hamming = 0; // nearest-miss distance over non-matching circuits
};

/*! \brief Enumerate every circuit of size 0..s_max directly (no reliance on
 *  padding) and compare its full truth table against the characteristic
 *  string. Zero matches certifies the micro-scale lower bound. */
LowerBoundReport verify_lower_bound(const CharString& cs, uint32_t s_max, uint64_t budget);

/// All 2^n-bit truth tables achievable with at most s_max gates.
std::set<BitVec> achievable_tables(uint32_t n, uint32_t s_max, uint64_t budget);

struct HierarchyReport {
    uint64_t tables_small = 0;
    uint64_t tables_large = 0;
    bool strict = false;
    std::optional<BitVec> witness; // lex-min table in the difference
};

/// Size-hierarchy desk experiment: SIZE[<=s1] vs SIZE[<=s2] truth table
/// sets; containment is asserted, strictness and a witness are reported.
HierarchyReport hierarchy_experiment(uint32_t n, uint32_t s1, uint32_t s2, uint64_t budget);

/*! \brief Hard-code oblivious witnesses into a verifier circuit.
 *
 * `pred` ranges over the blocks (x, y, z) with |x| = inputs - |y*| - |z*|;
 * the result is specialize(pred, y := y*, z := z*), a decider over x with
 * no more gates than the predicate circuit.
 */
Circuit compile_o2_decider(const Circuit& pred, const BitVec& y_star, const BitVec& z_star);

} // namespace rav::hardlang
