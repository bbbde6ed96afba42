#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "rav/bitvec.hpp"
#include "rav/errors.hpp"

namespace rav {

/*! \brief One of the 16 binary Boolean operations, indexed by its truth table.
 *
 * The index is the 4-bit table (f(0,0), f(0,1), f(1,0), f(1,1)) read as bits
 * high-to-low, so e.g. XOR = 0b0110 = 6 and AND = 0b0001 = 1.
 */
struct BinOp {
    uint8_t index = 0;

    constexpr bool apply(bool a, bool b) const {
        return (index >> (3 - ((static_cast<unsigned>(a) << 1) | static_cast<unsigned>(b)))) & 1u;
    }

    /// True when the op ignores both operands.
    constexpr bool is_constant() const { return index == 0 || index == 15; }

    bool operator==(const BinOp&) const = default;
};

namespace ops {
inline constexpr BinOp const0{0};
inline constexpr BinOp and_op{1};
inline constexpr BinOp andnot{2}; // a AND NOT b
inline constexpr BinOp proj_l{3};
inline constexpr BinOp proj_r{5};
inline constexpr BinOp xor_op{6};
inline constexpr BinOp or_op{7};
inline constexpr BinOp not_r{10};
inline constexpr BinOp not_l{12};
inline constexpr BinOp const1{15};
} // namespace ops

/// A fan-in-2 gate. Operands are node labels: inputs are 1..n, gate i is n+i.
struct Gate {
    BinOp op;
    uint32_t lhs = 0;
    uint32_t rhs = 0;

    bool operator==(const Gate&) const = default;
};

/*! \brief A Boolean circuit: a DAG of fan-in-2 gates over the 16 binary ops.
 *
 * Node labels 1..n name the inputs and gate i carries label n+i; both
 * operands of gate i must reference an earlier node (label <= n+i-1).  When
 * `outputs` is empty the circuit has the single default output n+s (the
 * sink).
 *
 * A degenerate extension keeps partial evaluation total: in a circuit with
 * no inputs the first gate has no node to reference, so it must be a
 * constant op (0000 or 1111) with both operand labels 0 and it evaluates to
 * f(0,0).  Label 0 is invalid everywhere else.
 */
struct Circuit {
    uint32_t n_inputs = 0;
    std::vector<Gate> gates;
    std::vector<uint32_t> outputs;

    uint32_t sink_label() const { return n_inputs + static_cast<uint32_t>(gates.size()); }

    std::vector<uint32_t> effective_outputs() const {
        if (!outputs.empty()) {
            return outputs;
        }
        return {sink_label()};
    }

    std::size_t n_outputs() const { return outputs.empty() ? 1 : outputs.size(); }

    bool operator==(const Circuit&) const = default;
};

/// Truth table of a circuit on its first `k` lexicographic inputs,
/// output-major for multi-output circuits: bit (o, i) sits at o*k + i.
struct TruthTable {
    uint32_t n_inputs = 0;
    uint32_t n_outputs = 1;
    uint64_t k = 0;
    BitVec bits;

    bool get(std::size_t output, uint64_t point) const { return bits.get(output * k + point); }

    bool operator==(const TruthTable&) const = default;
};

/// Evaluate every gate once in label order; one result bit per output.
BitVec eval(const Circuit& c, const BitVec& assignment);

/*! \brief Low-level evaluation into caller-owned buffers.
 *
 * `inputs` holds n 0/1 bytes, `node_values` must have room for n+s+1 bytes
 * (entry 0 is the label-0 slot).  Used by the hot enumeration loops.
 */
void eval_raw(const Circuit& c, const uint8_t* inputs, uint8_t* node_values);

/// First k rows of the truth table, inputs in big-endian integer order.
TruthTable truth_table(const Circuit& c, uint64_t k);

/// Structural well-formedness check; an empty list means ok.
std::vector<std::string> validate(const Circuit& c);

/*! \brief Partial evaluation: fix some input labels and propagate constants.
 *
 * The result ranges over the unfixed inputs, keeps their relative order,
 * agrees with the original on every completion of the fixing, and never has
 * more gates.  Gates whose value is decided by the fixing are removed.
 */
Circuit specialize(const Circuit& c, const std::map<uint32_t, bool>& fixed);

/// Number of circuits with exactly s gates and single output = sink:
/// the product of 16*(n+i-1)^2 over i = 1..s, saturating at UINT64_MAX.
uint64_t circuit_space_size(uint32_t n, uint32_t s);

/*! \brief The `index`-th circuit in the toolkit's fixed enumeration order.
 *
 * A circuit is read as a mixed-radix numeral with gate 1 most significant;
 * each gate contributes the digit ((lhs-1)*avail + (rhs-1))*16 + op where
 * avail = n+i-1.  Index 0 is therefore all gates op 0000 with lhs = rhs = 1.
 * The s = 0 space holds the single wire circuit (output = input 1).
 */
Circuit circuit_at_index(uint32_t n, uint32_t s, uint64_t index);

/*! \brief Stream over all circuits with exactly s gates, in index order.
 *
 * Throws BudgetExceededError up front when the space is larger than the
 * budget.  Streams may be partitioned by index range across workers via
 * circuit_at_index.
 */
class CircuitEnumerator {
public:
    CircuitEnumerator(uint32_t n, uint32_t s, uint64_t budget);

    /// Next circuit, or nullopt once the space is exhausted.
    std::optional<Circuit> next();

    uint64_t total() const { return total_; }

private:
    uint32_t n_;
    uint32_t s_;
    uint64_t total_;
    uint64_t index_ = 0;
    Circuit current_; // odometer state
};

/// Textual circuit format: header "n s o", then s lines "op lhs rhs" with
/// op as 4-bit binary, then one line of o output labels.
std::string to_text(const Circuit& c);
Circuit circuit_from_text(std::string_view text);

} // namespace rav
