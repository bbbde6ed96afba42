#include "rav/circuit.hpp"

#include <algorithm>
#include <sstream>

namespace rav {

void eval_raw(const Circuit& c, const uint8_t* inputs, uint8_t* node_values) {
    node_values[0] = 0;
    for (uint32_t i = 0; i < c.n_inputs; ++i) {
        node_values[i + 1] = inputs[i];
    }
    uint32_t label = c.n_inputs;
    for (const Gate& g : c.gates) {
        ++label;
        node_values[label] =
            g.op.apply(node_values[g.lhs] != 0, node_values[g.rhs] != 0) ? 1 : 0;
    }
}

BitVec eval(const Circuit& c, const BitVec& assignment) {
    if (assignment.size() != c.n_inputs) {
        throw ContractError("assignment length does not match the circuit's input count");
    }
    std::vector<uint8_t> in(c.n_inputs);
    for (uint32_t i = 0; i < c.n_inputs; ++i) {
        in[i] = assignment.get(i) ? 1 : 0;
    }
    std::vector<uint8_t> values(c.n_inputs + c.gates.size() + 1);
    eval_raw(c, in.data(), values.data());

    const auto outs = c.effective_outputs();
    BitVec result(outs.size());
    for (std::size_t i = 0; i < outs.size(); ++i) {
        result.set(i, values[outs[i]] != 0);
    }
    return result;
}

TruthTable truth_table(const Circuit& c, uint64_t k) {
    if (c.n_inputs < 64 && k > (uint64_t{1} << c.n_inputs)) {
        throw ContractError("k exceeds the circuit's input space");
    }
    const auto outs = c.effective_outputs();
    TruthTable tt;
    tt.n_inputs = c.n_inputs;
    tt.n_outputs = static_cast<uint32_t>(outs.size());
    tt.k = k;
    tt.bits = BitVec(outs.size() * k);

    std::vector<uint8_t> in(c.n_inputs, 0);
    std::vector<uint8_t> values(c.n_inputs + c.gates.size() + 1);
    for (uint64_t point = 0; point < k; ++point) {
        for (uint32_t b = 0; b < c.n_inputs; ++b) {
            in[b] = (point >> (c.n_inputs - 1 - b)) & 1u;
        }
        eval_raw(c, in.data(), values.data());
        for (std::size_t o = 0; o < outs.size(); ++o) {
            if (values[outs[o]]) {
                tt.bits.set(o * k + point, true);
            }
        }
    }
    return tt;
}

std::vector<std::string> validate(const Circuit& c) {
    std::vector<std::string> violations;
    const uint32_t n = c.n_inputs;
    for (std::size_t i = 0; i < c.gates.size(); ++i) {
        const Gate& g = c.gates[i];
        const uint32_t avail = n + static_cast<uint32_t>(i); // n+i-1 for 1-based i
        const uint32_t label = n + static_cast<uint32_t>(i) + 1;
        if (avail == 0) {
            // No referencable node: only the nullary constant convention applies.
            if (g.lhs != 0 || g.rhs != 0 || !g.op.is_constant()) {
                violations.push_back("gate " + std::to_string(label) +
                                     " has no available operands and is not a nullary constant");
            }
            continue;
        }
        for (const auto& [operand, side] : {std::pair{g.lhs, "lhs"}, std::pair{g.rhs, "rhs"}}) {
            if (operand == 0 || operand > n + c.gates.size()) {
                violations.push_back("gate " + std::to_string(label) + " " + side +
                                     " label out of range");
            } else if (operand > avail) {
                violations.push_back("gate " + std::to_string(label) + " " + side +
                                     " forward reference to node " + std::to_string(operand));
            }
        }
    }
    for (uint32_t out : c.effective_outputs()) {
        if (out == 0 || out > c.sink_label()) {
            violations.push_back("output label out of range: " + std::to_string(out));
        }
    }
    return violations;
}

namespace {

struct NodeState {
    bool is_const = false;
    bool const_value = false;
    uint32_t label = 0; // new-circuit label when !is_const
};

NodeState const_state(bool v) { return {true, v, 0}; }
NodeState wire_state(uint32_t label) { return {false, false, label}; }

/// Classification of a binary op with one side fixed.
enum class UnaryKind { Const0, Const1, Identity, Negation };

UnaryKind restrict_op(BinOp op, bool fixed_is_lhs, bool fixed_value) {
    const bool on0 = fixed_is_lhs ? op.apply(fixed_value, false) : op.apply(false, fixed_value);
    const bool on1 = fixed_is_lhs ? op.apply(fixed_value, true) : op.apply(true, fixed_value);
    if (on0 == on1) {
        return on0 ? UnaryKind::Const1 : UnaryKind::Const0;
    }
    return on1 ? UnaryKind::Identity : UnaryKind::Negation;
}

} // namespace

Circuit specialize(const Circuit& c, const std::map<uint32_t, bool>& fixed) {
    for (const auto& [label, value] : fixed) {
        (void)value;
        if (label == 0 || label > c.n_inputs) {
            throw ContractError("fixed label " + std::to_string(label) +
                                " is not an input label");
        }
    }

    Circuit out;
    std::vector<NodeState> state(c.n_inputs + c.gates.size() + 1);
    state[0] = const_state(false); // label-0 slot of the nullary convention

    for (uint32_t i = 1; i <= c.n_inputs; ++i) {
        auto it = fixed.find(i);
        if (it != fixed.end()) {
            state[i] = const_state(it->second);
        } else {
            ++out.n_inputs;
            state[i] = wire_state(out.n_inputs);
        }
    }

    auto emit_gate = [&](BinOp op, uint32_t lhs, uint32_t rhs) {
        out.gates.push_back({op, lhs, rhs});
        return out.n_inputs + static_cast<uint32_t>(out.gates.size());
    };

    for (std::size_t i = 0; i < c.gates.size(); ++i) {
        const Gate& g = c.gates[i];
        const uint32_t label = c.n_inputs + static_cast<uint32_t>(i) + 1;
        const NodeState a = state[g.lhs];
        const NodeState b = state[g.rhs];
        if (a.is_const && b.is_const) {
            state[label] = const_state(g.op.apply(a.const_value, b.const_value));
        } else if (a.is_const || b.is_const) {
            const bool fixed_is_lhs = a.is_const;
            const NodeState& live = fixed_is_lhs ? b : a;
            const bool cval = fixed_is_lhs ? a.const_value : b.const_value;
            switch (restrict_op(g.op, fixed_is_lhs, cval)) {
            case UnaryKind::Const0:
                state[label] = const_state(false);
                break;
            case UnaryKind::Const1:
                state[label] = const_state(true);
                break;
            case UnaryKind::Identity:
                state[label] = live;
                break;
            case UnaryKind::Negation:
                state[label] = wire_state(emit_gate(ops::not_l, live.label, live.label));
                break;
            }
        } else if (g.op.is_constant()) {
            state[label] = const_state(g.op.index == 15);
        } else {
            state[label] = wire_state(emit_gate(g.op, a.label, b.label));
        }
    }

    // Materialize constant outputs. One shared gate per polarity.
    uint32_t const_label[2] = {0, 0};
    auto const_output = [&](bool v) {
        if (const_label[v] == 0) {
            const BinOp op = v ? ops::const1 : ops::const0;
            const uint32_t operand = out.n_inputs >= 1 ? 1u : 0u;
            const_label[v] = emit_gate(op, operand, operand);
        }
        return const_label[v];
    };

    for (uint32_t o : c.effective_outputs()) {
        const NodeState s = state[o];
        out.outputs.push_back(s.is_const ? const_output(s.const_value) : s.label);
    }
    return out;
}

uint64_t circuit_space_size(uint32_t n, uint32_t s) {
    uint64_t total = 1;
    for (uint32_t i = 1; i <= s; ++i) {
        const uint64_t avail = n + i - 1;
        const uint64_t per_gate = 16 * avail * avail;
        if (per_gate == 0) {
            return 0;
        }
        if (total > UINT64_MAX / per_gate) {
            return UINT64_MAX;
        }
        total *= per_gate;
    }
    return total;
}

Circuit circuit_at_index(uint32_t n, uint32_t s, uint64_t index) {
    if (s == 0) {
        if (index != 0) {
            throw ContractError("the s=0 space has a single circuit");
        }
        if (n == 0) {
            throw ContractError("the s=0 wire convention needs at least one input");
        }
        return Circuit{n, {}, {1}};
    }
    Circuit c;
    c.n_inputs = n;
    c.gates.resize(s);
    for (uint32_t i = s; i >= 1; --i) {
        const uint64_t avail = n + i - 1;
        uint64_t digit = index % (16 * avail * avail);
        index /= 16 * avail * avail;
        Gate& g = c.gates[i - 1];
        g.op.index = static_cast<uint8_t>(digit % 16);
        digit /= 16;
        g.rhs = static_cast<uint32_t>(digit % avail) + 1;
        g.lhs = static_cast<uint32_t>(digit / avail) + 1;
    }
    if (index != 0) {
        throw ContractError("circuit index out of range");
    }
    c.outputs = {c.sink_label()};
    return c;
}

CircuitEnumerator::CircuitEnumerator(uint32_t n, uint32_t s, uint64_t budget)
    : n_(n), s_(s), total_(circuit_space_size(n, s)) {
    if (total_ > budget) {
        throw BudgetExceededError("circuit space of " + std::to_string(total_) +
                                  " exceeds budget " + std::to_string(budget));
    }
    if (s_ > 0 && n_ == 0) {
        throw ContractError("cannot enumerate gate circuits without inputs");
    }
}

std::optional<Circuit> CircuitEnumerator::next() {
    if (index_ >= total_) {
        return std::nullopt;
    }
    if (index_ == 0) {
        current_ = circuit_at_index(n_, s_, 0);
    } else {
        // Odometer increment, gate s least significant, op fastest.
        for (uint32_t i = s_; i >= 1; --i) {
            Gate& g = current_.gates[i - 1];
            const uint32_t avail = n_ + i - 1;
            if (g.op.index < 15) {
                ++g.op.index;
                break;
            }
            g.op.index = 0;
            if (g.rhs < avail) {
                ++g.rhs;
                break;
            }
            g.rhs = 1;
            if (g.lhs < avail) {
                ++g.lhs;
                break;
            }
            g.lhs = 1; // carry into the previous gate
        }
    }
    ++index_;
    return current_;
}

std::string to_text(const Circuit& c) {
    std::ostringstream os;
    const auto outs = c.effective_outputs();
    os << c.n_inputs << ' ' << c.gates.size() << ' ' << outs.size() << '\n';
    for (const Gate& g : c.gates) {
        for (int b = 3; b >= 0; --b) {
            os << ((g.op.index >> b) & 1);
        }
        os << ' ' << g.lhs << ' ' << g.rhs << '\n';
    }
    for (std::size_t i = 0; i < outs.size(); ++i) {
        os << outs[i] << (i + 1 == outs.size() ? '\n' : ' ');
    }
    return os.str();
}

Circuit circuit_from_text(std::string_view text) {
    std::istringstream is{std::string(text)};
    Circuit c;
    std::size_t n_gates = 0;
    std::size_t n_outputs = 0;
    if (!(is >> c.n_inputs >> n_gates >> n_outputs)) {
        throw ParseError("circuit text: bad header, expected \"n s o\"");
    }
    for (std::size_t i = 0; i < n_gates; ++i) {
        std::string op_bits;
        Gate g;
        if (!(is >> op_bits >> g.lhs >> g.rhs)) {
            throw ParseError("circuit text: truncated gate list");
        }
        if (op_bits.size() != 4 || op_bits.find_first_not_of("01") != std::string::npos) {
            throw ParseError("circuit text: op must be 4 binary digits");
        }
        g.op.index = 0;
        for (char ch : op_bits) {
            g.op.index = static_cast<uint8_t>((g.op.index << 1) | (ch == '1'));
        }
        c.gates.push_back(g);
    }
    for (std::size_t i = 0; i < n_outputs; ++i) {
        uint32_t label = 0;
        if (!(is >> label)) {
            throw ParseError("circuit text: truncated output list");
        }
        c.outputs.push_back(label);
    }
    return c;
}

} // namespace rav
