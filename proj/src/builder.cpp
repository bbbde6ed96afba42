#include "rav/builder.hpp"

namespace rav {

namespace {

/// f restricted by fixing one side; mirrors the fold in specialize().
enum class Shape { Const0, Const1, Identity, Negation };

Shape restrict_shape(BinOp op, bool fixed_is_lhs, bool fixed_value) {
    const bool on0 = fixed_is_lhs ? op.apply(fixed_value, false) : op.apply(false, fixed_value);
    const bool on1 = fixed_is_lhs ? op.apply(fixed_value, true) : op.apply(true, fixed_value);
    if (on0 == on1) {
        return on0 ? Shape::Const1 : Shape::Const0;
    }
    return on1 ? Shape::Identity : Shape::Negation;
}

} // namespace

Signal CircuitBuilder::add_gate(BinOp op, Signal a, Signal b) {
    if (a.is_const && b.is_const) {
        return Signal::constant(op.apply(a.const_value, b.const_value));
    }
    if (a.is_const || b.is_const) {
        const bool fixed_is_lhs = a.is_const;
        const Signal live = fixed_is_lhs ? b : a;
        const bool cval = fixed_is_lhs ? a.const_value : b.const_value;
        switch (restrict_shape(op, fixed_is_lhs, cval)) {
        case Shape::Const0:
            return Signal::constant(false);
        case Shape::Const1:
            return Signal::constant(true);
        case Shape::Identity:
            return live;
        case Shape::Negation:
            return not_(live);
        }
    }
    if (op.is_constant()) {
        return Signal::constant(op.index == 15);
    }
    if (a.label == b.label) {
        const bool on0 = op.apply(false, false);
        const bool on1 = op.apply(true, true);
        if (on0 == on1) {
            return Signal::constant(on0);
        }
        if (on1) {
            return a; // diagonal is the identity
        }
        return not_(a);
    }
    gates_.push_back({op, a.label, b.label});
    return Signal::wire(n_inputs_ + static_cast<uint32_t>(gates_.size()));
}

Signal CircuitBuilder::not_(Signal a) {
    if (a.is_const) {
        return Signal::constant(!a.const_value);
    }
    auto it = not_cache_.find(a.label);
    if (it != not_cache_.end()) {
        return Signal::wire(it->second);
    }
    gates_.push_back({ops::not_l, a.label, a.label});
    const uint32_t out = n_inputs_ + static_cast<uint32_t>(gates_.size());
    not_cache_[a.label] = out;
    not_cache_[out] = a.label;
    return Signal::wire(out);
}

Signal CircuitBuilder::and_all(std::span<const Signal> xs) {
    Signal acc = Signal::constant(true);
    for (const Signal& x : xs) {
        acc = and_(acc, x);
        if (acc.is_const && !acc.const_value) {
            return acc;
        }
    }
    return acc;
}

Signal CircuitBuilder::or_all(std::span<const Signal> xs) {
    Signal acc = Signal::constant(false);
    for (const Signal& x : xs) {
        acc = or_(acc, x);
        if (acc.is_const && acc.const_value) {
            return acc;
        }
    }
    return acc;
}

Signal CircuitBuilder::eq_const(std::span<const Signal> wires, uint64_t value) {
    const std::size_t width = wires.size();
    Signal acc = Signal::constant(true);
    for (std::size_t i = 0; i < width; ++i) {
        const bool bit = (value >> (width - 1 - i)) & 1u;
        acc = and_(acc, bit ? wires[i] : not_(wires[i]));
    }
    return acc;
}

Signal CircuitBuilder::value_leq_const(std::span<const Signal> wires, uint64_t threshold) {
    const std::size_t width = wires.size();
    if (width < 64 && threshold >= (uint64_t{1} << width)) {
        return Signal::constant(true);
    }
    Signal gt = Signal::constant(false);
    Signal prefix_eq = Signal::constant(true);
    for (std::size_t i = 0; i < width; ++i) {
        const bool t = (threshold >> (width - 1 - i)) & 1u;
        if (!t) {
            gt = or_(gt, and_(prefix_eq, wires[i]));
            prefix_eq = and_(prefix_eq, not_(wires[i]));
        } else {
            prefix_eq = and_(prefix_eq, wires[i]);
        }
    }
    return not_(gt);
}

Signal CircuitBuilder::eq_signals(std::span<const Signal> a, std::span<const Signal> b) {
    if (a.size() != b.size()) {
        throw ContractError("eq_signals width mismatch");
    }
    Signal acc = Signal::constant(true);
    for (std::size_t i = 0; i < a.size(); ++i) {
        acc = and_(acc, xnor_(a[i], b[i]));
    }
    return acc;
}

Signal CircuitBuilder::embed(const Circuit& sub, const std::vector<Signal>& inputs) {
    if (inputs.size() != sub.n_inputs) {
        throw ContractError("embed input width mismatch");
    }
    const auto outs = sub.effective_outputs();
    if (outs.size() != 1) {
        throw ContractError("embed expects a single-output circuit");
    }
    std::vector<Signal> values(sub.n_inputs + sub.gates.size() + 1, Signal::constant(false));
    for (std::size_t i = 0; i < inputs.size(); ++i) {
        values[i + 1] = inputs[i];
    }
    uint32_t label = sub.n_inputs;
    for (const Gate& g : sub.gates) {
        ++label;
        values[label] = add_gate(g.op, values[g.lhs], values[g.rhs]);
    }
    return values[outs[0]];
}

uint32_t CircuitBuilder::materialize_const(bool v) {
    if (const_label_[v] != 0) {
        return const_label_[v];
    }
    const BinOp op = v ? ops::const1 : ops::const0;
    const uint32_t operand = n_inputs_ >= 1 ? 1u : 0u;
    gates_.push_back({op, operand, operand});
    const_label_[v] = n_inputs_ + static_cast<uint32_t>(gates_.size());
    return const_label_[v];
}

Circuit CircuitBuilder::build(const std::vector<Signal>& outputs) {
    std::vector<uint32_t> labels;
    labels.reserve(outputs.size());
    for (const Signal& s : outputs) {
        labels.push_back(s.is_const ? materialize_const(s.const_value) : s.label);
    }
    Circuit c;
    c.n_inputs = n_inputs_;
    c.gates = gates_;
    c.outputs = std::move(labels);
    return c;
}

} // namespace rav
