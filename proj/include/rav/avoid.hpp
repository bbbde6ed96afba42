#pragma once

#include <cstdint>
#include <optional>

#include "rav/circuit.hpp"

namespace rav::avoid {

/// How a solution's non-membership in the range was established.
enum class Certificate {
    ExhaustiveVerified, // all 2^n preimages enumerated
    HeuristicSampled,   // only seed-driven sampled preimages checked
};

/// An input-expanding circuit: strictly more outputs than inputs.
struct AvoidInstance {
    Circuit circuit;

    uint32_t n_in() const { return circuit.n_inputs; }
    std::size_t m_out() const { return circuit.n_outputs(); }
};

struct AvoidSolution {
    BitVec y;
    Certificate certificate = Certificate::ExhaustiveVerified;
    bool canonical = false; // lexicographically minimal avoided string
};

enum class SolveMode { Exhaustive, Sampled };

struct SolveOptions {
    SolveMode mode = SolveMode::Exhaustive;
    uint64_t budget = uint64_t{1} << 22;
    uint64_t seed = 0;
    unsigned workers = 1;
};

/*! \brief Find a string outside the circuit's range.
 *
 * Exhaustive mode enumerates the whole 2^n domain (partitioned across
 * workers into a shared, index-addressed range table) and returns the
 * lexicographically smallest avoided string, so repeated solves are
 * bit-identical regardless of worker count.  Sampled mode draws a random
 * candidate and checks it only against seeded sample preimages; its
 * certificate says so.
 */
AvoidSolution solve(const AvoidInstance& instance, const SolveOptions& options);

enum class VerifyStatus { Verified, Refuted, BudgetExceeded };

struct VerifyResult {
    VerifyStatus status = VerifyStatus::Verified;
    std::optional<BitVec> witness; // preimage with eval(circuit, x) == y
};

/// Check a claimed solution by enumeration, up to `budget` preimages.
VerifyResult verify_avoided(const AvoidInstance& instance, const BitVec& y, uint64_t budget);

} // namespace rav::avoid
