#pragma once

#include <cstdint>
#include <string>

#include "rav/circuit.hpp"

namespace rav::codec {

enum class Scheme : uint8_t {
    Paper = 0, // n input labels, then per gate: lhs, rhs, op
    Micro = 1, // gate block only
};

std::string scheme_name(Scheme s);
Scheme scheme_from_name(const std::string& name);

/// Field width for node labels: B = ceil(log2(n+s)).
uint32_t label_bits(uint32_t n, uint32_t s);

/// Exact bit length: n*B + s*(2B+4) for the paper scheme, s*(2B+4) for micro.
uint64_t encoding_length(uint32_t n, uint32_t s, Scheme scheme);

/*! \brief A bit-exact circuit description under one of the two schemes.
 *
 * Every bit vector of the right length decodes to some valid circuit
 * (decode is total), which is what lets Avoid over the generator range over
 * all size-s circuits.
 */
struct Encoding {
    Scheme scheme = Scheme::Paper;
    uint32_t n = 0;
    uint32_t s = 0;
    BitVec bits;

    bool operator==(const Encoding&) const = default;
};

/*! \brief Encode a single-output circuit with n inputs and at most s gates.
 *
 * Layout per gate: lhs (B bits), rhs (B bits), op (4 bits, table high-to-low),
 * gates in label order; the paper scheme prefixes the identity input-label
 * block 1..n.  Circuits with fewer than s gates are padded with projection
 * gates copying the output forward, so the padded description is
 * semantically identical.
 */
Encoding encode(const Circuit& c, uint32_t n, uint32_t s, Scheme scheme);

/*! \brief Total decode: any bits of the right length give a valid circuit.
 *
 * A label field value v for gate i normalizes to ((v-1) mod (n+i-1)) + 1;
 * the paper scheme's input block is ignored.  Round trip law:
 * truth_table(decode(encode(C))) == truth_table(C).
 */
Circuit decode(const Encoding& e);

/// Convenience: wrap loose bits (length must match encoding_length).
Encoding make_encoding(BitVec bits, uint32_t n, uint32_t s, Scheme scheme);

/// Bit offset of gate i's record (i is 1-based) inside the encoding.
uint64_t gate_record_offset(uint32_t n, uint32_t s, Scheme scheme, uint32_t gate_index);

/// Binary file format: 8-byte header (scheme, n, s, reserved as little-endian
/// 16-bit fields), then the raw bitstream MSB-first, zero-padded to a byte.
void write_encoding_file(const Encoding& e, const std::string& path);
Encoding read_encoding_file(const std::string& path);

} // namespace rav::codec
