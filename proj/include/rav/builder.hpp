#pragma once

#include <cstdint>
#include <span>
#include <unordered_map>
#include <vector>

#include "rav/circuit.hpp"

namespace rav {

/// A value under construction: either a known constant or a circuit node.
struct Signal {
    bool is_const = true;
    bool const_value = false;
    uint32_t label = 0;

    static Signal constant(bool v) { return {true, v, 0}; }
    static Signal wire(uint32_t label) { return {false, false, label}; }
};

/*! \brief Incremental single-pass circuit constructor.
 *
 * Gates are appended in creation order, which keeps the result topological.
 * add_gate folds constants at build time (and the degenerate lhs == rhs
 * case), so gadgets written against Signals shrink automatically when parts
 * of their input are known.  Folding never changes semantics.
 */
class CircuitBuilder {
public:
    explicit CircuitBuilder(uint32_t n_inputs) : n_inputs_(n_inputs) {}

    Signal input(uint32_t i) const {
        if (i < 1 || i > n_inputs_) {
            throw ContractError("builder input index out of range");
        }
        return Signal::wire(i);
    }

    Signal add_gate(BinOp op, Signal a, Signal b);

    Signal not_(Signal a);
    Signal and_(Signal a, Signal b) { return add_gate(ops::and_op, a, b); }
    Signal or_(Signal a, Signal b) { return add_gate(ops::or_op, a, b); }
    Signal xor_(Signal a, Signal b) { return add_gate(ops::xor_op, a, b); }
    Signal xnor_(Signal a, Signal b) { return add_gate(BinOp{9}, a, b); }

    Signal and_all(std::span<const Signal> xs);
    Signal or_all(std::span<const Signal> xs);

    /// AND of literals: true iff the wires spell `value` big-endian.
    Signal eq_const(std::span<const Signal> wires, uint64_t value);

    /// True iff the big-endian value of `wires` is <= `threshold`.
    Signal value_leq_const(std::span<const Signal> wires, uint64_t threshold);

    /// Bitwise equality of two equal-width signal vectors.
    Signal eq_signals(std::span<const Signal> a, std::span<const Signal> b);

    /*! Replay another single-output circuit's gates onto the given input
     *  signals and return its output signal.  Constant inputs fold away. */
    Signal embed(const Circuit& sub, const std::vector<Signal>& inputs);

    std::size_t gate_count() const { return gates_.size(); }

    /// Materialize the circuit; constant outputs become constant-op gates.
    Circuit build(const std::vector<Signal>& outputs);

private:
    uint32_t materialize_const(bool v);

    uint32_t n_inputs_;
    std::vector<Gate> gates_;
    std::unordered_map<uint32_t, uint32_t> not_cache_;
    uint32_t const_label_[2] = {0, 0};
};

} // namespace rav
