#include "rav/hardlang.hpp"

#include <bit>
#include <cmath>

#include "rav/generator.hpp"

namespace rav::hardlang {

Params params_from_t(TimeBound t, uint32_t n) {
    if (n < 2) {
        throw ContractError("params_from_t requires n >= 2");
    }
    if (t.exponent < 1) {
        throw ContractError("time bound exponent must be >= 1");
    }
    const long double log2_t =
        static_cast<long double>(t.exponent) * std::log2(static_cast<long double>(n));
    const long double s_real = std::exp2(log2_t / 4.0L) / log2_t;
    if (s_real < 1.0L) {
        throw ContractError("time bound too small: s = t(n)^(1/4)/log2(t(n)) is below 1");
    }
    Params p;
    p.s = static_cast<uint64_t>(std::floor(s_real));
    p.micro_regime = n < 12;
    return p;
}

std::string HardLanguageSpec::key() const {
    return "n=" + std::to_string(n) + ",s=" + std::to_string(s) +
           ",scheme=" + codec::scheme_name(scheme);
}

BitVec CharString::full_bits() const {
    if (n > 24) {
        throw ContractError("refusing to materialize a table beyond n = 24");
    }
    BitVec out(full_length());
    for (std::size_t i = 0; i < prefix.size(); ++i) {
        out.set(i, prefix.get(i));
    }
    return out;
}

CharString CharString::from_table(uint32_t n, BitVec table) {
    if (n < 64 && table.size() > (uint64_t{1} << n)) {
        throw ContractError("table longer than 2^n");
    }
    CharString cs;
    cs.n = n;
    cs.prefix = std::move(table);
    return cs;
}

HardLang::HardLang(store::Store& store, uint64_t budget, unsigned workers)
    : store_(store), budget_(budget), workers_(workers == 0 ? 1 : workers) {}

CharString HardLang::derive(const HardLanguageSpec& spec, bool allow_heuristic) {
    const auto gen_spec = generator::ptt_spec(spec.n, spec.s, spec.scheme);
    const uint64_t enc_bits = gen_spec.encoding_bits();
    const bool in_budget = enc_bits < 63 && (uint64_t{1} << enc_bits) <= budget_;
    if (!in_budget && !allow_heuristic) {
        throw BudgetExceededError(
            "exhaustive Avoid over 2^" + std::to_string(enc_bits) +
            " encodings exceeds budget " + std::to_string(budget_) +
            " (pass the heuristic override to downgrade explicitly)");
    }

    avoid::AvoidInstance instance{generator::build_tt_generator(gen_spec)};
    avoid::SolveOptions opt;
    opt.mode = in_budget ? avoid::SolveMode::Exhaustive : avoid::SolveMode::Sampled;
    opt.budget = budget_;
    opt.workers = workers_;
    ++solves_;
    const avoid::AvoidSolution sol = avoid::solve(instance, opt);

    CharString cs;
    cs.n = spec.n;
    cs.s = spec.s;
    cs.scheme = spec.scheme;
    cs.prefix = sol.y;

    const char* kind =
        sol.certificate == avoid::Certificate::ExhaustiveVerified ? "charstring"
                                                                  : "charstring-heuristic";
    store_.put(store::make_entry(kind, spec.key(), cs.prefix));
    return cs;
}

const CharString& HardLang::cached(const HardLanguageSpec& spec) {
    const std::string key = spec.key();
    if (auto it = memory_.find(key); it != memory_.end()) {
        ++cache_hits_;
        return it->second;
    }
    if (auto entry = store_.get("charstring", key)) {
        ++cache_hits_;
        CharString cs;
        cs.n = spec.n;
        cs.s = spec.s;
        cs.scheme = spec.scheme;
        cs.prefix = entry->bits();
        return memory_.emplace(key, std::move(cs)).first->second;
    }
    CharString cs = derive(spec, false);
    return memory_.emplace(key, std::move(cs)).first->second;
}

CharString HardLang::build_char_string(const HardLanguageSpec& spec, bool force_recompute,
                                       bool allow_heuristic) {
    if (!force_recompute) {
        if (allow_heuristic) {
            // Heuristic results live outside the canonical cache.
            const std::string key = spec.key();
            if (auto entry = store_.get("charstring-heuristic", key)) {
                ++cache_hits_;
                CharString cs;
                cs.n = spec.n;
                cs.s = spec.s;
                cs.scheme = spec.scheme;
                cs.prefix = entry->bits();
                return cs;
            }
            const uint64_t enc_bits = spec.encoding_bits();
            if (enc_bits >= 63 || (uint64_t{1} << enc_bits) > budget_) {
                return derive(spec, true);
            }
        }
        return cached(spec);
    }
    CharString cs = derive(spec, allow_heuristic);
    memory_[spec.key()] = cs;
    return cs;
}

bool HardLang::membership(const BitVec& x, const HardLanguageSpec& spec) {
    if (x.size() != spec.n) {
        throw ContractError("membership query length does not match the spec");
    }
    if (spec.n > 62) {
        throw ContractError("membership queries capped at n <= 62");
    }
    const CharString& cs = cached(spec);
    return cs.bit(x.value());
}

bool HardLang::extension_membership(const BitVec& x, const HardLanguageSpec& spec) const {
    if (x.size() != spec.n) {
        throw ContractError("extension query length does not match the spec");
    }
    return x.value_leq(spec.encoding_bits());
}

namespace {

uint64_t table_as_value(const Circuit& c, uint32_t n, std::vector<uint8_t>& in,
                        std::vector<uint8_t>& values) {
    const uint32_t out_label = c.effective_outputs()[0];
    uint64_t table = 0;
    const uint64_t points = uint64_t{1} << n;
    for (uint64_t p = 0; p < points; ++p) {
        for (uint32_t b = 0; b < n; ++b) {
            in[b] = (p >> (n - 1 - b)) & 1u;
        }
        eval_raw(c, in.data(), values.data());
        table = (table << 1) | (values[out_label] != 0 ? 1u : 0u);
    }
    return table;
}

} // namespace

LowerBoundReport verify_lower_bound(const CharString& cs, uint32_t s_max, uint64_t budget) {
    const uint32_t n = cs.n;
    if (n > 6) {
        throw ContractError("verify_lower_bound fast path is capped at n <= 6");
    }
    uint64_t total = 0;
    for (uint32_t s = 0; s <= s_max; ++s) {
        total += circuit_space_size(n, s);
    }
    if (total > budget) {
        throw BudgetExceededError("lower-bound sweep of " + std::to_string(total) +
                                  " circuits exceeds budget " + std::to_string(budget));
    }

    const uint64_t points = uint64_t{1} << n;
    uint64_t target = 0;
    for (uint64_t p = 0; p < points; ++p) {
        target = (target << 1) | (cs.bit(p) ? 1u : 0u);
    }

    LowerBoundReport report;
    report.min_hamming = points + 1;
    std::vector<uint8_t> in(n);
    std::vector<uint8_t> values(n + s_max + 1);
    for (uint32_t s = 0; s <= s_max; ++s) {
        CircuitEnumerator en(n, s, budget);
        while (auto c = en.next()) {
            ++report.circuits_checked;
            const uint64_t table = table_as_value(*c, n, in, values);
            if (table == target) {
                ++report.matches;
                if (!report.first_match) {
                    report.first_match = *c;
                }
            } else {
                const uint64_t dist =
                    static_cast<uint64_t>(std::popcount(table ^ target));
                report.min_hamming = std::min(report.min_hamming, dist);
            }
        }
    }
    if (report.matches > 0) {
        report.min_hamming = 0;
    }
    return report;
}

std::set<BitVec> achievable_tables(uint32_t n, uint32_t s_max, uint64_t budget) {
    if (n > 16) {
        throw ContractError("achievable_tables capped at n <= 16");
    }
    uint64_t total = 0;
    for (uint32_t s = 0; s <= s_max; ++s) {
        total += circuit_space_size(n, s);
    }
    if (total > budget) {
        throw BudgetExceededError("table sweep of " + std::to_string(total) +
                                  " circuits exceeds budget " + std::to_string(budget));
    }
    std::set<BitVec> tables;
    const uint64_t points = uint64_t{1} << n;
    for (uint32_t s = 0; s <= s_max; ++s) {
        CircuitEnumerator en(n, s, budget);
        while (auto c = en.next()) {
            tables.insert(truth_table(*c, points).bits);
        }
    }
    return tables;
}

HierarchyReport hierarchy_experiment(uint32_t n, uint32_t s1, uint32_t s2, uint64_t budget) {
    if (s1 > s2) {
        throw ContractError("hierarchy experiment needs s1 <= s2");
    }
    const std::set<BitVec> small = achievable_tables(n, s1, budget);
    const std::set<BitVec> large = achievable_tables(n, s2, budget);
    for (const BitVec& t : small) {
        if (!large.contains(t)) {
            throw Error("containment violation: a size-" + std::to_string(s1) +
                        " table is missing at size " + std::to_string(s2));
        }
    }
    HierarchyReport report;
    report.tables_small = small.size();
    report.tables_large = large.size();
    report.strict = large.size() > small.size();
    for (const BitVec& t : large) {
        if (!small.contains(t)) {
            report.witness = t;
            break; // std::set iterates in lex order
        }
    }
    return report;
}

Circuit compile_o2_decider(const Circuit& pred, const BitVec& y_star, const BitVec& z_star) {
    const std::size_t witness_bits = y_star.size() + z_star.size();
    if (pred.n_inputs < witness_bits + 1) {
        throw ContractError("predicate width " + std::to_string(pred.n_inputs) +
                            " cannot hold the witness blocks plus an input block");
    }
    if (pred.effective_outputs().size() != 1) {
        throw ContractError("the verifier circuit must have a single output");
    }
    const uint32_t n = pred.n_inputs - static_cast<uint32_t>(witness_bits);
    std::map<uint32_t, bool> fixed;
    for (std::size_t i = 0; i < y_star.size(); ++i) {
        fixed[n + 1 + static_cast<uint32_t>(i)] = y_star.get(i);
    }
    for (std::size_t i = 0; i < z_star.size(); ++i) {
        fixed[n + 1 + static_cast<uint32_t>(y_star.size() + i)] = z_star.get(i);
    }
    Circuit decider = specialize(pred, fixed);
    if (decider.gates.size() > pred.gates.size()) {
        throw Error("internal: specialization grew the circuit");
    }
    return decider;
}

} // namespace rav::hardlang
