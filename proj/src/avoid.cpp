#include "rav/avoid.hpp"

#include <algorithm>
#include <random>
#include <thread>

namespace rav::avoid {

namespace {

void check_instance(const AvoidInstance& inst) {
    if (inst.m_out() < inst.n_in() + std::size_t{1}) {
        throw ContractError("instance is not input-expanding: m_out <= n_in");
    }
    const auto violations = validate(inst.circuit);
    if (!violations.empty()) {
        throw ContractError("instance circuit is malformed: " + violations.front());
    }
}

/// One worker's evaluation sweep over [begin, end), writing value-indexed
/// results straight into the shared table (index-addressed, so race-free).
template <typename Sink>
void sweep_domain(const Circuit& c, uint64_t begin, uint64_t end, Sink&& sink) {
    const uint32_t n = c.n_inputs;
    const auto outs = c.effective_outputs();
    std::vector<uint8_t> in(n);
    std::vector<uint8_t> values(n + c.gates.size() + 1);
    for (uint64_t x = begin; x < end; ++x) {
        for (uint32_t b = 0; b < n; ++b) {
            in[b] = (x >> (n - 1 - b)) & 1u;
        }
        eval_raw(c, in.data(), values.data());
        sink(x, outs, values);
    }
}

void run_partitioned(uint64_t domain, unsigned workers, auto&& body) {
    if (workers <= 1 || domain < 1024) {
        body(uint64_t{0}, domain);
        return;
    }
    std::vector<std::thread> threads;
    const uint64_t chunk = (domain + workers - 1) / workers;
    for (unsigned w = 0; w < workers; ++w) {
        const uint64_t begin = std::min<uint64_t>(domain, w * chunk);
        const uint64_t end = std::min<uint64_t>(domain, begin + chunk);
        if (begin < end) {
            threads.emplace_back([&body, begin, end] { body(begin, end); });
        }
    }
    for (auto& t : threads) {
        t.join();
    }
}

AvoidSolution solve_exhaustive(const AvoidInstance& inst, const SolveOptions& opt) {
    const uint32_t n = inst.n_in();
    const std::size_t m = inst.m_out();
    if (n >= 63 || (uint64_t{1} << n) > opt.budget) {
        throw BudgetExceededError("exhaustive solve needs 2^" + std::to_string(n) +
                                  " evaluations, over budget " + std::to_string(opt.budget));
    }
    const uint64_t domain = uint64_t{1} << n;

    AvoidSolution sol;
    sol.certificate = Certificate::ExhaustiveVerified;
    sol.canonical = true;

    if (m <= 64) {
        std::vector<uint64_t> range(domain);
        run_partitioned(domain, opt.workers, [&](uint64_t begin, uint64_t end) {
            sweep_domain(inst.circuit, begin, end,
                         [&](uint64_t x, const std::vector<uint32_t>& outs,
                             const std::vector<uint8_t>& values) {
                             uint64_t v = 0;
                             for (uint32_t o : outs) {
                                 v = (v << 1) | (values[o] != 0 ? 1u : 0u);
                             }
                             range[x] = v;
                         });
        });
        std::sort(range.begin(), range.end());
        uint64_t candidate = 0;
        for (uint64_t v : range) {
            if (v > candidate) {
                break;
            }
            if (v == candidate) {
                ++candidate;
            }
        }
        sol.y = BitVec::from_value(candidate, m);
        return sol;
    }

    // Wide-output path: lexicographic gap walk over sorted range strings.
    std::vector<BitVec> range(domain);
    run_partitioned(domain, opt.workers, [&](uint64_t begin, uint64_t end) {
        sweep_domain(inst.circuit, begin, end,
                     [&](uint64_t x, const std::vector<uint32_t>& outs,
                         const std::vector<uint8_t>& values) {
                         BitVec v(outs.size());
                         for (std::size_t o = 0; o < outs.size(); ++o) {
                             v.set(o, values[outs[o]] != 0);
                         }
                         range[x] = std::move(v);
                     });
    });
    std::sort(range.begin(), range.end());
    BitVec candidate(m);
    for (const BitVec& v : range) {
        const int cmp = v.compare(candidate);
        if (cmp > 0) {
            break;
        }
        if (cmp == 0) {
            candidate.increment();
        }
    }
    sol.y = std::move(candidate);
    return sol;
}

AvoidSolution solve_sampled(const AvoidInstance& inst, const SolveOptions& opt) {
    const uint32_t n = inst.n_in();
    const std::size_t m = inst.m_out();
    std::mt19937_64 rng(opt.seed);

    const auto outs = inst.circuit.effective_outputs();
    std::vector<uint8_t> in(n);
    std::vector<uint8_t> values(n + inst.circuit.gates.size() + 1);

    for (int attempt = 0; attempt < 1000; ++attempt) {
        BitVec y(m);
        for (std::size_t i = 0; i < m; ++i) {
            y.set(i, (rng() & 1u) != 0);
        }
        bool hit = false;
        for (uint64_t t = 0; t < opt.budget && !hit; ++t) {
            for (uint32_t b = 0; b < n; ++b) {
                in[b] = (rng() & 1u) != 0 ? 1 : 0;
            }
            eval_raw(inst.circuit, in.data(), values.data());
            hit = true;
            for (std::size_t o = 0; o < outs.size(); ++o) {
                if ((values[outs[o]] != 0) != y.get(o)) {
                    hit = false;
                    break;
                }
            }
        }
        if (!hit) {
            AvoidSolution sol;
            sol.y = std::move(y);
            sol.certificate = Certificate::HeuristicSampled;
            sol.canonical = false;
            return sol;
        }
    }
    throw ContractError("sampled solve failed to find a candidate surviving its samples");
}

} // namespace

AvoidSolution solve(const AvoidInstance& instance, const SolveOptions& options) {
    check_instance(instance);
    return options.mode == SolveMode::Exhaustive ? solve_exhaustive(instance, options)
                                                 : solve_sampled(instance, options);
}

VerifyResult verify_avoided(const AvoidInstance& instance, const BitVec& y, uint64_t budget) {
    check_instance(instance);
    if (y.size() != instance.m_out()) {
        throw ContractError("candidate length does not match the instance's output count");
    }
    const uint32_t n = instance.n_in();
    const uint64_t domain = n >= 63 ? UINT64_MAX : (uint64_t{1} << n);
    const uint64_t limit = std::min(domain, budget);

    const auto outs = instance.circuit.effective_outputs();
    std::vector<uint8_t> in(n);
    std::vector<uint8_t> values(n + instance.circuit.gates.size() + 1);
    for (uint64_t x = 0; x < limit; ++x) {
        for (uint32_t b = 0; b < n; ++b) {
            in[b] = (x >> (n - 1 - b)) & 1u;
        }
        eval_raw(instance.circuit, in.data(), values.data());
        bool equal = true;
        for (std::size_t o = 0; o < outs.size() && equal; ++o) {
            equal = (values[outs[o]] != 0) == y.get(o);
        }
        if (equal) {
            return {VerifyStatus::Refuted, BitVec::from_value(x, n)};
        }
    }
    if (limit < domain) {
        return {VerifyStatus::BudgetExceeded, std::nullopt};
    }
    return {VerifyStatus::Verified, std::nullopt};
}

} // namespace rav::avoid
