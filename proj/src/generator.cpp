#include "rav/generator.hpp"

#include "rav/builder.hpp"

namespace rav::generator {

GeneratorSpec tt_spec(uint32_t n, uint32_t s, codec::Scheme scheme) {
    if (n > 32) {
        throw ContractError("full truth table generator capped at n <= 32");
    }
    return {n, s, scheme, uint64_t{1} << n};
}

GeneratorSpec ptt_spec(uint32_t n, uint32_t s, codec::Scheme scheme) {
    const uint64_t k = codec::encoding_length(n, s, scheme) + 1;
    if (n < 64 && k > (uint64_t{1} << n)) {
        throw ContractError("prefix generator is not input-expanding: |E|+1 > 2^n");
    }
    return {n, s, scheme, k};
}

namespace {

void check_spec(const GeneratorSpec& spec) {
    if (spec.k < 1) {
        throw ContractError("generator spec needs k >= 1");
    }
    if (spec.n < 64 && spec.k > (uint64_t{1} << spec.n)) {
        throw ContractError("generator spec has k > 2^n");
    }
    codec::label_bits(spec.n, spec.s); // validates n, s >= 1
}

/// Multiplexer with the decoder's normalization: for each B-bit field value
/// v the candidate ((v-1) mod avail) + 1 is selected.
Signal select_node(CircuitBuilder& cb, std::span<const Signal> field,
                   const std::vector<Signal>& node_values, uint32_t avail) {
    const uint32_t b = static_cast<uint32_t>(field.size());
    std::vector<Signal> terms;
    terms.reserve(std::size_t{1} << b);
    for (uint64_t v = 0; v < (uint64_t{1} << b); ++v) {
        const uint32_t target = static_cast<uint32_t>((v + avail - 1) % avail + 1);
        terms.push_back(cb.and_(cb.eq_const(field, v), node_values[target]));
    }
    return cb.or_all(terms);
}

/// out = op-table lookup at row (a, b); op[0] is the f(0,0) bit.
Signal op_lookup(CircuitBuilder& cb, std::span<const Signal> op, Signal a, Signal b) {
    const Signal na = cb.not_(a);
    const Signal nb = cb.not_(b);
    std::vector<Signal> rows = {
        cb.and_(cb.and_(na, nb), op[0]),
        cb.and_(cb.and_(na, b), op[1]),
        cb.and_(cb.and_(a, nb), op[2]),
        cb.and_(cb.and_(a, b), op[3]),
    };
    return cb.or_all(rows);
}

} // namespace

Circuit build_tt_generator(const GeneratorSpec& spec) {
    check_spec(spec);
    const uint64_t enc_bits = spec.encoding_bits();
    const uint32_t b = codec::label_bits(spec.n, spec.s);

    CircuitBuilder cb(static_cast<uint32_t>(enc_bits));

    // Field wires per simulated gate, shared across evaluation points.
    struct GateFields {
        std::vector<Signal> lhs, rhs, op;
    };
    std::vector<GateFields> fields(spec.s);
    for (uint32_t i = 1; i <= spec.s; ++i) {
        const uint64_t off = codec::gate_record_offset(spec.n, spec.s, spec.scheme, i);
        GateFields& f = fields[i - 1];
        for (uint32_t j = 0; j < b; ++j) {
            f.lhs.push_back(cb.input(static_cast<uint32_t>(off + j) + 1));
            f.rhs.push_back(cb.input(static_cast<uint32_t>(off + b + j) + 1));
        }
        for (uint32_t j = 0; j < 4; ++j) {
            f.op.push_back(cb.input(static_cast<uint32_t>(off + 2 * b + j) + 1));
        }
    }

    std::vector<Signal> outputs;
    outputs.reserve(spec.k);
    std::vector<Signal> node_values(spec.n + spec.s + 1, Signal::constant(false));
    for (uint64_t point = 0; point < spec.k; ++point) {
        for (uint32_t in = 0; in < spec.n; ++in) {
            node_values[in + 1] =
                Signal::constant((point >> (spec.n - 1 - in)) & 1u);
        }
        for (uint32_t i = 1; i <= spec.s; ++i) {
            const GateFields& f = fields[i - 1];
            const uint32_t avail = spec.n + i - 1;
            const Signal lhs = select_node(cb, f.lhs, node_values, avail);
            const Signal rhs = select_node(cb, f.rhs, node_values, avail);
            node_values[spec.n + i] = op_lookup(cb, f.op, lhs, rhs);
        }
        outputs.push_back(node_values[spec.n + spec.s]);
    }
    return cb.build(outputs);
}

SizeReport generator_size_report(const GeneratorSpec& spec) {
    const Circuit g = build_tt_generator(spec);
    SizeReport r;
    r.spec = spec;
    r.encoding_bits = spec.encoding_bits();
    r.gates = g.gates.size();
    r.bound = kCubicSizeConstant * r.encoding_bits * r.encoding_bits * r.encoding_bits;
    r.pass = r.gates <= r.bound;
    return r;
}

} // namespace rav::generator
