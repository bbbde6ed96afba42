#pragma once

#include <cstdint>

#include "rav/circuit.hpp"
#include "rav/codec.hpp"

namespace rav::generator {

/*! \brief Parameters of a (prefix) truth table generator circuit.
 *
 * The generator G has |E| inputs (one per encoding bit) and k outputs; for
 * every e of length |E| it computes the first k truth table entries of the
 * decoded circuit: eval(G, e) = truth_table(decode(e), k).  k = 2^n gives
 * the full-table generator, k = |E|+1 the prefix generator whose Avoid
 * instance is input-expanding.
 */
struct GeneratorSpec {
    uint32_t n = 0;
    uint32_t s = 0;
    codec::Scheme scheme = codec::Scheme::Micro;
    uint64_t k = 0;

    uint64_t encoding_bits() const { return codec::encoding_length(n, s, scheme); }
};

/// Full-table spec (k = 2^n); requires n <= 32.
GeneratorSpec tt_spec(uint32_t n, uint32_t s, codec::Scheme scheme);

/// Prefix spec (k = |E|+1); throws unless |E|+1 <= 2^n.
GeneratorSpec ptt_spec(uint32_t n, uint32_t s, codec::Scheme scheme);

/*! \brief Construct the generator circuit.
 *
 * For each of the k evaluation points and each simulated gate, a selector
 * gadget (a B-bit multiplexer over previously computed node values, with
 * the decoder's modular label normalization baked into the select patterns)
 * feeds a 4-bit op-lookup gadget.  Construction is deterministic.
 */
Circuit build_tt_generator(const GeneratorSpec& spec);

/// Documented implementation constant for the cubic size envelope: across
/// the desk-scale sweep the construction stays within 2 * |E|^3 gates.
inline constexpr uint64_t kCubicSizeConstant = 2;

struct SizeReport {
    GeneratorSpec spec;
    uint64_t encoding_bits = 0;
    uint64_t gates = 0;
    uint64_t bound = 0; // kCubicSizeConstant * |E|^3
    bool pass = false;
};

SizeReport generator_size_report(const GeneratorSpec& spec);

} // namespace rav::generator
