#include "rav/s2game.hpp"

#include <algorithm>
#include <random>

#include "rav/builder.hpp"

namespace rav::s2game {

namespace {

void check_widths(const S2Predicate& p, const BitVec& x) {
    if (x.size() != p.n) {
        throw ContractError("input width does not match the predicate's n");
    }
    if (p.ell > 30) {
        throw ContractError("certificate space 2^ell too large for exhaustive play");
    }
}

uint64_t pow2(uint32_t bits) { return uint64_t{1} << bits; }

} // namespace

bool check_irrefutable(const S2Predicate& p, const BitVec& x, const BitVec& w, Side side,
                       uint64_t budget) {
    check_widths(p, x);
    if (w.size() != p.ell) {
        throw ContractError("certificate width does not match the predicate's ell");
    }
    if (pow2(p.ell) > budget) {
        throw BudgetExceededError("irrefutability sweep over 2^" + std::to_string(p.ell) +
                                  " certificates exceeds the budget");
    }
    for (uint64_t v = 0; v < pow2(p.ell); ++v) {
        const BitVec other = BitVec::from_value(v, p.ell);
        if (side == Side::Yes) {
            if (!p(x, w, other)) {
                return false;
            }
        } else {
            if (p(x, other, w)) {
                return false;
            }
        }
    }
    return true;
}

Decision decide_s2(const S2Predicate& p, const BitVec& x, uint64_t budget) {
    check_widths(p, x);
    if (p.ell > 15 || pow2(2 * p.ell) > budget) {
        throw BudgetExceededError("decide_s2 needs 2^(2*ell) predicate calls, over budget");
    }
    bool member = false;
    for (uint64_t y = 0; y < pow2(p.ell) && !member; ++y) {
        member = check_irrefutable(p, x, BitVec::from_value(y, p.ell), Side::Yes, budget);
    }
    bool nonmember = false;
    for (uint64_t z = 0; z < pow2(p.ell) && !nonmember; ++z) {
        nonmember = check_irrefutable(p, x, BitVec::from_value(z, p.ell), Side::No, budget);
    }
    if (member && nonmember) {
        // A yes-irrefutable y and a no-irrefutable z would force P(x,y,z)
        // to be 1 and 0 at once.
        throw Error("minimax violation: both sides hold an irrefutable certificate");
    }
    if (member) {
        return Decision::Member;
    }
    if (nonmember) {
        return Decision::NonMember;
    }
    return Decision::Invalid;
}

std::optional<std::pair<BitVec, BitVec>>
find_oblivious_witnesses(const S2Predicate& p, const LangOracle& lang, uint64_t budget) {
    if (p.n > 30 || p.ell > 30 || pow2(p.n) + pow2(p.ell) > budget ||
        pow2(std::min(p.n + p.ell, uint32_t{63})) > budget) {
        throw BudgetExceededError("oblivious witness search over 2^(n+ell) exceeds the budget");
    }
    std::vector<BitVec> members;
    std::vector<BitVec> nonmembers;
    for (uint64_t v = 0; v < pow2(p.n); ++v) {
        BitVec x = BitVec::from_value(v, p.n);
        (lang(x) ? members : nonmembers).push_back(std::move(x));
    }

    std::optional<BitVec> y_star;
    for (uint64_t y = 0; y < pow2(p.ell) && !y_star; ++y) {
        const BitVec candidate = BitVec::from_value(y, p.ell);
        bool ok = true;
        for (const BitVec& x : members) {
            if (!check_irrefutable(p, x, candidate, Side::Yes, budget)) {
                ok = false;
                break;
            }
        }
        if (ok) {
            y_star = candidate;
        }
    }
    if (!y_star) {
        return std::nullopt;
    }
    std::optional<BitVec> z_star;
    for (uint64_t z = 0; z < pow2(p.ell) && !z_star; ++z) {
        const BitVec candidate = BitVec::from_value(z, p.ell);
        bool ok = true;
        for (const BitVec& x : nonmembers) {
            if (!check_irrefutable(p, x, candidate, Side::No, budget)) {
                ok = false;
                break;
            }
        }
        if (ok) {
            z_star = candidate;
        }
    }
    if (!z_star) {
        return std::nullopt;
    }
    return std::make_pair(*y_star, *z_star);
}

BitVec WitnessTable::serialize_y() const {
    BitVec out;
    for (const auto& [x, y] : y_star) {
        out.append(x);
        out.append(y);
    }
    return out;
}

BitVec WitnessTable::serialize_z() const {
    BitVec out;
    for (const BitVec& z : z_star) {
        out.append(z);
    }
    return out;
}

TransformedVerifier::TransformedVerifier(SparseFilter filter, S2Predicate base,
                                         uint32_t y_records, uint32_t z_records)
    : filter_(std::move(filter)), base_(std::move(base)), y_records_(y_records),
      z_records_(z_records) {}

bool TransformedVerifier::eval(const BitVec& x, const BitVec& y_arg, const BitVec& z_arg,
                               std::vector<TraceEvent>* trace) const {
    if (x.size() != base_.n) {
        throw ContractError("transformed verifier: input width mismatch");
    }
    if (y_arg.size() < y_length() || z_arg.size() < z_length()) {
        throw ContractError("transformed verifier: certificate argument too short");
    }
    auto record = [&](TraceStep step, uint64_t detail = 0) {
        if (trace) {
            trace->push_back({step, detail});
        }
    };

    bool output = true; // (1)
    record(TraceStep::SetOutput, 1);

    if (!filter_(x)) { // (2)
        record(TraceStep::FilterReject);
        record(TraceStep::Return, 0);
        return false;
    }
    record(TraceStep::FilterPass);

    // (3) binary search the sorted records for x.
    const uint32_t rec = record_bits();
    BitVec y_x(base_.ell);
    uint32_t lo = 0;
    uint32_t hi = y_records_;
    while (lo < hi) {
        const uint32_t mid = lo + (hi - lo) / 2;
        const BitVec field = y_arg.slice(uint64_t{mid} * rec, base_.n);
        if (field < x) {
            lo = mid + 1;
        } else {
            hi = mid;
        }
    }
    bool found = false;
    if (lo < y_records_ && y_arg.slice(uint64_t{lo} * rec, base_.n) == x) {
        y_x = y_arg.slice(uint64_t{lo} * rec + base_.n, base_.ell);
        found = true;
    }
    record(TraceStep::ParseWitness, found ? lo : y_records_);

    for (uint32_t i = 0; i < z_records_; ++i) { // (4)
        const BitVec z_i = z_arg.slice(uint64_t{i} * base_.ell, base_.ell);
        output = output && base_(x, y_x, z_i);
        record(TraceStep::AndStep, i);
    }

    record(TraceStep::Return, output ? 1 : 0); // (5)
    return output;
}

S2Predicate TransformedVerifier::as_predicate() const {
    S2Predicate p;
    p.name = "transform(" + base_.name + ")";
    p.n = base_.n;
    p.ell = static_cast<uint32_t>(witness_length());
    TransformedVerifier self = *this;
    p.fn = [self](const BitVec& x, const BitVec& y, const BitVec& z) {
        return self.eval(x, y, z);
    };
    return p;
}

BitVec Transform::y_argument() const {
    BitVec b = table.serialize_y();
    while (b.size() < verifier.witness_length()) {
        b.push_back(false);
    }
    return b;
}

BitVec Transform::z_argument() const {
    BitVec b = table.serialize_z();
    while (b.size() < verifier.witness_length()) {
        b.push_back(false);
    }
    return b;
}

Transform build_sparse_transform(const S2Predicate& p, const SparseFilter& f,
                                 const LangOracle& lang, uint64_t budget) {
    if (f.n != p.n) {
        throw ContractError("filter and predicate disagree on the input length");
    }
    if (p.n > 30 || pow2(p.n) > budget) {
        throw BudgetExceededError("filter pass-set enumeration exceeds the budget");
    }

    std::vector<BitVec> pass_set;
    for (uint64_t v = 0; v < pow2(p.n); ++v) {
        BitVec x = BitVec::from_value(v, p.n);
        if (f.accept(x)) {
            pass_set.push_back(std::move(x));
        }
    }

    WitnessTable table;
    table.n = p.n;
    table.ell = p.ell;
    for (const BitVec& x : pass_set) {
        if (lang(x)) {
            std::optional<BitVec> y_x;
            for (uint64_t y = 0; y < pow2(p.ell) && !y_x; ++y) {
                BitVec candidate = BitVec::from_value(y, p.ell);
                if (check_irrefutable(p, x, candidate, Side::Yes, budget)) {
                    y_x = std::move(candidate);
                }
            }
            if (!y_x) {
                throw ContractError("x = " + x.to_string() +
                                    " is invalid for the predicate: the oracle says member "
                                    "but no yes-certificate is irrefutable");
            }
            table.y_star.emplace_back(x, *y_x);
        } else {
            std::optional<BitVec> z_x;
            for (uint64_t z = 0; z < pow2(p.ell) && !z_x; ++z) {
                BitVec candidate = BitVec::from_value(z, p.ell);
                if (check_irrefutable(p, x, candidate, Side::No, budget)) {
                    z_x = std::move(candidate);
                }
            }
            if (!z_x) {
                throw ContractError("x = " + x.to_string() +
                                    " is invalid for the predicate: the oracle says non-member "
                                    "but no no-certificate is irrefutable");
            }
            table.y_star.emplace_back(x, BitVec(p.ell)); // all-zero filler
            table.z_star.push_back(*z_x);
        }
    }

    TransformedVerifier verifier(f, p, static_cast<uint32_t>(table.y_star.size()),
                                 static_cast<uint32_t>(table.z_star.size()));
    return Transform{std::move(verifier), std::move(table)};
}

TransformReport verify_transform(const TransformedVerifier& v, const WitnessTable& table,
                                 const LangOracle& lang, uint32_t n, uint64_t budget,
                                 uint64_t samples, uint64_t seed) {
    const uint32_t ell = table.ell;
    if (n > 30 || pow2(n) > budget || pow2(ell) > budget) {
        throw BudgetExceededError("transform verification sweep exceeds the budget");
    }

    // Positional x for each Z* record: the filtered non-members in order.
    std::vector<std::optional<BitVec>> z_owner(table.z_star.size());
    {
        std::size_t zi = 0;
        for (const auto& [x, y] : table.y_star) {
            if (!lang(x) && zi < z_owner.size()) {
                z_owner[zi++] = x;
            }
        }
    }

    TransformReport report;
    std::mt19937_64 rng(seed);
    const BitVec y_ser = [&] {
        BitVec b = table.serialize_y();
        while (b.size() < v.witness_length()) {
            b.push_back(false);
        }
        return b;
    }();
    const BitVec z_ser = [&] {
        BitVec b = table.serialize_z();
        while (b.size() < v.witness_length()) {
            b.push_back(false);
        }
        return b;
    }();

    auto random_arg = [&] {
        BitVec b(v.witness_length());
        for (std::size_t i = 0; i < b.size(); ++i) {
            b.set(i, (rng() & 1u) != 0);
        }
        return b;
    };

    auto table_lookup = [&](const BitVec& x) -> BitVec {
        for (const auto& [xf, yf] : table.y_star) {
            if (xf == x) {
                return yf;
            }
        }
        return BitVec(ell);
    };

    for (uint64_t xv = 0; xv < pow2(n); ++xv) {
        const BitVec x = BitVec::from_value(xv, n);
        ++report.inputs_checked;
        const bool member = lang(x);
        const bool filtered_in = v.filter().accept(x);

        if (!filtered_in) {
            if (member) {
                report.filter_violations.push_back(xv);
            }
            continue;
        }
        if (member) {
            // Every parse of any z argument yields ell-bit records, so
            // sweeping the record space covers all z arguments.
            const BitVec y_x = table_lookup(x);
            for (uint64_t zv = 0; zv < pow2(ell); ++zv) {
                if (!v.base()(x, y_x, BitVec::from_value(zv, ell))) {
                    report.yes_violations.push_back(xv);
                    break;
                }
            }
        } else {
            for (uint64_t yv = 0; yv < pow2(ell); ++yv) {
                const BitVec y_rec = BitVec::from_value(yv, ell);
                bool refuted = false;
                for (const BitVec& z_i : table.z_star) {
                    if (!v.base()(x, y_rec, z_i)) {
                        refuted = true;
                        break;
                    }
                }
                if (!refuted) {
                    report.soundness_violations.push_back(xv);
                    break;
                }
            }
        }
    }

    // Designated-record diagnostics: is each z_x still irrefutable alone?
    for (std::size_t i = 0; i < table.z_star.size(); ++i) {
        if (!z_owner[i]) {
            continue;
        }
        if (!check_irrefutable(v.base(), *z_owner[i], table.z_star[i], Side::No, budget)) {
            ++report.weak_z_records;
        }
    }

    // Sampled full-width arguments through the real eval path.
    for (uint64_t xv = 0; xv < pow2(n); ++xv) {
        const BitVec x = BitVec::from_value(xv, n);
        const bool member = lang(x);
        for (uint64_t t = 0; t < samples; ++t) {
            ++report.sampled_checks;
            if (member) {
                if (!v.eval(x, y_ser, random_arg())) {
                    ++report.sampled_failures;
                }
            } else {
                if (v.eval(x, random_arg(), z_ser)) {
                    ++report.sampled_failures;
                }
            }
        }
    }
    return report;
}

namespace toys {

namespace {

bool proper_divisor(uint64_t d, uint64_t v) { return d > 1 && d < v && v % d == 0; }

bool is_composite(uint64_t v) {
    for (uint64_t d = 2; d * d <= v; ++d) {
        if (v % d == 0) {
            return true;
        }
    }
    return false;
}

} // namespace

S2Predicate divisor(uint32_t n, uint32_t ell) {
    S2Predicate p;
    p.name = "divisor";
    p.n = n;
    p.ell = ell;
    p.fn = [](const BitVec& x, const BitVec& y, const BitVec&) {
        return proper_divisor(y.value(), x.value());
    };
    return p;
}

S2Predicate divisor_succ(uint32_t n, uint32_t ell) {
    S2Predicate p;
    p.name = "divisor-succ";
    p.n = n;
    p.ell = ell;
    p.fn = [](const BitVec& x, const BitVec& y, const BitVec& z) {
        return proper_divisor(y.value(), x.value()) || z.value() == x.value() + 1;
    };
    return p;
}

S2Predicate xor_pathology(uint32_t n, uint32_t ell) {
    if (ell < 1) {
        throw ContractError("xor-pathology needs ell >= 1");
    }
    S2Predicate p;
    p.name = "xor-pathology";
    p.n = n;
    p.ell = ell;
    p.fn = [](const BitVec&, const BitVec& y, const BitVec& z) {
        return y.get(0) != z.get(0);
    };
    return p;
}

S2Predicate witness_independent(uint32_t n, uint32_t ell,
                                std::function<bool(const BitVec&)> h) {
    S2Predicate p;
    p.name = "witness-independent";
    p.n = n;
    p.ell = ell;
    p.fn = [h = std::move(h)](const BitVec& x, const BitVec&, const BitVec&) { return h(x); };
    return p;
}

S2Predicate from_circuit(Circuit c, uint32_t n, uint32_t ell) {
    if (c.n_inputs != n + 2 * ell) {
        throw ContractError("predicate circuit width must be n + 2*ell");
    }
    if (c.effective_outputs().size() != 1) {
        throw ContractError("predicate circuit must have a single output");
    }
    S2Predicate p;
    p.name = "circuit";
    p.n = n;
    p.ell = ell;
    p.fn = [c = std::move(c)](const BitVec& x, const BitVec& y, const BitVec& z) {
        BitVec joined = x;
        joined.append(y);
        joined.append(z);
        return eval(c, joined).get(0);
    };
    return p;
}

S2Predicate registry(const std::string& name, uint32_t n, uint32_t ell) {
    if (name == "divisor") {
        return divisor(n, ell);
    }
    if (name == "divisor-succ") {
        return divisor_succ(n, ell);
    }
    if (name == "xor-pathology") {
        return xor_pathology(n, ell);
    }
    throw ParseError("unknown built-in predicate \"" + name + "\"");
}

LangOracle composites(uint32_t) {
    return [](const BitVec& x) {
        const uint64_t v = x.value();
        return v >= 4 && is_composite(v);
    };
}

LangOracle restrict_to(LangOracle base, std::function<bool(const BitVec&)> keep) {
    return [base = std::move(base), keep = std::move(keep)](const BitVec& x) {
        return keep(x) && base(x);
    };
}

SparseFilter value_at_most(uint32_t n, uint64_t vmax) {
    SparseFilter f;
    f.name = "value<=" + std::to_string(vmax);
    f.n = n;
    f.declared_bound = vmax + 1;
    f.accept = [vmax](const BitVec& x) { return x.value_leq(vmax); };
    return f;
}

SparseFilter value_in(uint32_t n, std::vector<uint64_t> allowed) {
    SparseFilter f;
    f.name = "value-set";
    f.n = n;
    f.declared_bound = allowed.size();
    f.accept = [allowed = std::move(allowed)](const BitVec& x) {
        return std::find(allowed.begin(), allowed.end(), x.value()) != allowed.end();
    };
    return f;
}

Circuit divisor_circuit(uint32_t n, uint32_t ell) {
    if (n > 12 || ell > 12) {
        throw ContractError("divisor circuit capped at 12-bit values");
    }
    CircuitBuilder cb(n + 2 * ell);
    std::vector<Signal> x(n), y(ell);
    for (uint32_t i = 0; i < n; ++i) {
        x[i] = cb.input(i + 1);
    }
    for (uint32_t i = 0; i < ell; ++i) {
        y[i] = cb.input(n + i + 1);
    }
    // z block (inputs n+ell+1 .. n+2*ell) is ignored by this predicate.
    std::vector<Signal> terms;
    for (uint64_t d = 2; d < (uint64_t{1} << ell); ++d) {
        std::vector<Signal> multiples;
        for (uint64_t m = 2 * d; m < (uint64_t{1} << n); m += d) {
            multiples.push_back(cb.eq_const(x, m));
        }
        if (multiples.empty()) {
            continue;
        }
        terms.push_back(cb.and_(cb.eq_const(y, d), cb.or_all(multiples)));
    }
    return cb.build({cb.or_all(terms)});
}

Circuit transformed_verifier_circuit(const Circuit& pred, uint32_t n, uint32_t ell,
                                     uint64_t filter_max, uint32_t y_records,
                                     uint32_t z_records) {
    if (pred.n_inputs != n + 2 * ell) {
        throw ContractError("base predicate circuit width must be n + 2*ell");
    }
    const uint32_t rec = n + ell;
    const uint32_t total_inputs = n + y_records * rec + z_records * ell;
    CircuitBuilder cb(total_inputs);

    std::vector<Signal> x(n);
    for (uint32_t i = 0; i < n; ++i) {
        x[i] = cb.input(i + 1);
    }
    const Signal filter_ok = cb.value_leq_const(x, filter_max);

    // Parse: y_x* = OR over records of (x == x-field) AND y-field.
    std::vector<Signal> y_sel(ell, Signal::constant(false));
    for (uint32_t r = 0; r < y_records; ++r) {
        const uint32_t base = n + r * rec;
        std::vector<Signal> xf(n), yf(ell);
        for (uint32_t i = 0; i < n; ++i) {
            xf[i] = cb.input(base + i + 1);
        }
        for (uint32_t i = 0; i < ell; ++i) {
            yf[i] = cb.input(base + n + i + 1);
        }
        const Signal match = cb.eq_signals(x, xf);
        for (uint32_t i = 0; i < ell; ++i) {
            y_sel[i] = cb.or_(y_sel[i], cb.and_(match, yf[i]));
        }
    }

    // Conjunction over the Z records of the embedded base predicate.
    Signal conj = Signal::constant(true);
    for (uint32_t r = 0; r < z_records; ++r) {
        const uint32_t base = n + y_records * rec + r * ell;
        std::vector<Signal> pred_inputs;
        pred_inputs.insert(pred_inputs.end(), x.begin(), x.end());
        pred_inputs.insert(pred_inputs.end(), y_sel.begin(), y_sel.end());
        for (uint32_t i = 0; i < ell; ++i) {
            pred_inputs.push_back(cb.input(base + i + 1));
        }
        conj = cb.and_(conj, cb.embed(pred, pred_inputs));
    }

    return cb.build({cb.and_(filter_ok, conj)});
}

} // namespace toys

} // namespace rav::s2game
