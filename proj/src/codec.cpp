#include "rav/codec.hpp"

#include <bit>
#include <cstdio>
#include <fstream>

namespace rav::codec {

std::string scheme_name(Scheme s) {
    return s == Scheme::Paper ? "paper" : "micro";
}

Scheme scheme_from_name(const std::string& name) {
    if (name == "paper") {
        return Scheme::Paper;
    }
    if (name == "micro") {
        return Scheme::Micro;
    }
    throw ParseError("unknown scheme \"" + name + "\" (expected paper or micro)");
}

uint32_t label_bits(uint32_t n, uint32_t s) {
    if (n < 1 || s < 1) {
        throw ContractError("encoding parameters require n >= 1 and s >= 1");
    }
    return static_cast<uint32_t>(std::bit_width(uint64_t{n} + s - 1));
}

uint64_t encoding_length(uint32_t n, uint32_t s, Scheme scheme) {
    const uint64_t b = label_bits(n, s);
    const uint64_t gate_block = uint64_t{s} * (2 * b + 4);
    return scheme == Scheme::Paper ? uint64_t{n} * b + gate_block : gate_block;
}

uint64_t gate_record_offset(uint32_t n, uint32_t s, Scheme scheme, uint32_t gate_index) {
    const uint64_t b = label_bits(n, s);
    const uint64_t base = scheme == Scheme::Paper ? uint64_t{n} * b : 0;
    return base + uint64_t{gate_index - 1} * (2 * b + 4);
}

namespace {

void append_field(BitVec& bits, uint64_t value, uint32_t width) {
    for (uint32_t i = 0; i < width; ++i) {
        bits.push_back((value >> (width - 1 - i)) & 1u);
    }
}

uint64_t read_field(const BitVec& bits, uint64_t offset, uint32_t width) {
    uint64_t v = 0;
    for (uint32_t i = 0; i < width; ++i) {
        v = (v << 1) | (bits.get(offset + i) ? 1u : 0u);
    }
    return v;
}

} // namespace

Encoding encode(const Circuit& c, uint32_t n, uint32_t s, Scheme scheme) {
    if (c.n_inputs != n) {
        throw ContractError("wrong input count: circuit has " + std::to_string(c.n_inputs) +
                            " inputs, encoding expects " + std::to_string(n));
    }
    const auto outs = c.effective_outputs();
    if (outs.size() != 1) {
        throw ContractError("encoding requires a single-output circuit");
    }

    // Pad to exactly s gates with projections that copy the output forward.
    // A non-sink output costs one redirect gate first.
    std::vector<Gate> gates = c.gates;
    if (outs[0] != c.sink_label()) {
        gates.push_back({ops::proj_l, outs[0], outs[0]});
    }
    if (gates.size() > s) {
        throw ContractError("too many gates: circuit needs " + std::to_string(gates.size()) +
                            " but the encoding size is " + std::to_string(s));
    }
    while (gates.size() < s) {
        const uint32_t prev_sink = n + static_cast<uint32_t>(gates.size());
        gates.push_back({ops::proj_l, prev_sink, prev_sink});
    }

    const uint32_t b = label_bits(n, s);
    Encoding e;
    e.scheme = scheme;
    e.n = n;
    e.s = s;
    if (scheme == Scheme::Paper) {
        for (uint32_t i = 1; i <= n; ++i) {
            append_field(e.bits, i, b);
        }
    }
    for (const Gate& g : gates) {
        append_field(e.bits, g.lhs, b);
        append_field(e.bits, g.rhs, b);
        append_field(e.bits, g.op.index, 4);
    }
    return e;
}

Circuit decode(const Encoding& e) {
    if (e.bits.size() != encoding_length(e.n, e.s, e.scheme)) {
        throw ContractError("encoding length mismatch: got " + std::to_string(e.bits.size()) +
                            " bits, expected " +
                            std::to_string(encoding_length(e.n, e.s, e.scheme)));
    }
    const uint32_t b = label_bits(e.n, e.s);
    Circuit c;
    c.n_inputs = e.n;
    uint64_t offset = e.scheme == Scheme::Paper ? uint64_t{e.n} * b : 0;
    for (uint32_t i = 1; i <= e.s; ++i) {
        const uint64_t avail = uint64_t{e.n} + i - 1;
        Gate g;
        g.lhs = static_cast<uint32_t>((read_field(e.bits, offset, b) + avail - 1) % avail + 1);
        offset += b;
        g.rhs = static_cast<uint32_t>((read_field(e.bits, offset, b) + avail - 1) % avail + 1);
        offset += b;
        g.op.index = static_cast<uint8_t>(read_field(e.bits, offset, 4));
        offset += 4;
        c.gates.push_back(g);
    }
    c.outputs = {c.sink_label()};
    return c;
}

Encoding make_encoding(BitVec bits, uint32_t n, uint32_t s, Scheme scheme) {
    Encoding e{scheme, n, s, std::move(bits)};
    if (e.bits.size() != encoding_length(n, s, scheme)) {
        throw ContractError("encoding length mismatch");
    }
    return e;
}

void write_encoding_file(const Encoding& e, const std::string& path) {
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f) {
        throw IoError("cannot open " + path + " for writing");
    }
    const auto put16 = [&](uint16_t v) {
        f.put(static_cast<char>(v & 0xff));
        f.put(static_cast<char>(v >> 8));
    };
    put16(static_cast<uint16_t>(e.scheme));
    put16(static_cast<uint16_t>(e.n));
    put16(static_cast<uint16_t>(e.s));
    put16(0); // reserved
    const auto bytes = e.bits.to_bytes();
    f.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
    if (!f) {
        throw IoError("short write to " + path);
    }
}

Encoding read_encoding_file(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) {
        throw IoError("cannot open " + path);
    }
    uint8_t header[8];
    if (!f.read(reinterpret_cast<char*>(header), 8)) {
        throw ParseError("encoding file too short for its header");
    }
    const auto get16 = [&](int i) {
        return static_cast<uint16_t>(header[i] | (header[i + 1] << 8));
    };
    const uint16_t scheme_tag = get16(0);
    if (scheme_tag > 1) {
        throw ParseError("encoding file has an unknown scheme tag");
    }
    const uint32_t n = get16(2);
    const uint32_t s = get16(4);
    const uint64_t nbits = encoding_length(n, s, static_cast<Scheme>(scheme_tag));
    std::vector<uint8_t> bytes((nbits + 7) / 8);
    if (!f.read(reinterpret_cast<char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()))) {
        throw ParseError("encoding file body shorter than its declared length");
    }
    return Encoding{static_cast<Scheme>(scheme_tag), n, s, BitVec::from_bytes(bytes, nbits)};
}

} // namespace rav::codec
