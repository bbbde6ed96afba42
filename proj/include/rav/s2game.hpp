#pragma once

#include <atomic>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "rav/bitvec.hpp"
#include "rav/circuit.hpp"

namespace rav::s2game {

/*! \brief An executable symmetric-time predicate P(x, y, z).
 *
 * x has n bits, the certificates y and z have ell bits each.  The functor
 * must be pure; a shared call counter backs the cost-shape assertions.
 */
struct S2Predicate {
    std::string name = "lambda";
    uint32_t n = 0;
    uint32_t ell = 0;
    std::function<bool(const BitVec&, const BitVec&, const BitVec&)> fn;
    std::shared_ptr<std::atomic<uint64_t>> calls =
        std::make_shared<std::atomic<uint64_t>>(0);

    bool operator()(const BitVec& x, const BitVec& y, const BitVec& z) const {
        calls->fetch_add(1, std::memory_order_relaxed);
        return fn(x, y, z);
    }
    uint64_t call_count() const { return calls->load(); }
    void reset_calls() const { calls->store(0); }
};

/// Decision procedure for a uniformly-sparse extension, with its declared
/// per-length bound on yes-instances (assertable by enumeration).
struct SparseFilter {
    std::string name = "filter";
    uint32_t n = 0;
    std::function<bool(const BitVec&)> accept;
    uint64_t declared_bound = 0;
    std::shared_ptr<std::atomic<uint64_t>> calls =
        std::make_shared<std::atomic<uint64_t>>(0);

    bool operator()(const BitVec& x) const {
        calls->fetch_add(1, std::memory_order_relaxed);
        return accept(x);
    }
    uint64_t call_count() const { return calls->load(); }
    void reset_calls() const { calls->store(0); }
};

using LangOracle = std::function<bool(const BitVec&)>;

enum class Side { Yes, No };

/// Yes side: forall z, P(x, w, z) = 1.  No side: forall y, P(x, y, w) = 0.
/// Exhaustive over the 2^ell certificate space.
bool check_irrefutable(const S2Predicate& p, const BitVec& x, const BitVec& w, Side side,
                       uint64_t budget);

enum class Decision { Member, NonMember, Invalid };

/// Member iff some y is yes-irrefutable, non-member iff some z is
/// no-irrefutable, invalid when neither exists; never both (minimax).
Decision decide_s2(const S2Predicate& p, const BitVec& x, uint64_t budget);

/// Lexicographically smallest (y*, z*) valid for the whole slice, if any.
std::optional<std::pair<BitVec, BitVec>>
find_oblivious_witnesses(const S2Predicate& p, const LangOracle& lang, uint64_t budget);

/*! \brief Oblivious witness tables for a filtered slice.
 *
 * Y* holds fixed-width records (x, y_x*) sorted by x ascending, with the
 * all-zero filler for non-members; Z* is the raw concatenation of the
 * no-certificates of the filtered non-members, in x order.
 */
struct WitnessTable {
    uint32_t n = 0;
    uint32_t ell = 0;
    std::vector<std::pair<BitVec, BitVec>> y_star;
    std::vector<BitVec> z_star;

    BitVec serialize_y() const;
    BitVec serialize_z() const;
};

enum class TraceStep : uint8_t {
    SetOutput = 1,
    FilterReject = 2,
    FilterPass = 20,
    ParseWitness = 3,
    AndStep = 4,
    Return = 5,
};

struct TraceEvent {
    TraceStep step;
    uint64_t detail = 0;

    bool operator==(const TraceEvent&) const = default;
};

/*! \brief The five-step verifier of the sparse-extension transform.
 *
 *   (1) output := 1
 *   (2) if F(x) = 0, return 0
 *   (3) parse Y* (binary search over sorted records) to get y_x*
 *   (4) for each z_i in Z*: output := output AND P(x, y_x*, z_i)
 *   (5) return output
 *
 * Per input it makes exactly one filter call and at most |Z*| predicate
 * calls.  An optional trace sink records the steps taken.
 */
class TransformedVerifier {
public:
    TransformedVerifier(SparseFilter filter, S2Predicate base, uint32_t y_records,
                        uint32_t z_records);

    bool eval(const BitVec& x, const BitVec& y_arg, const BitVec& z_arg,
              std::vector<TraceEvent>* trace = nullptr) const;

    uint32_t n() const { return base_.n; }
    uint32_t record_bits() const { return base_.n + base_.ell; }
    uint64_t y_length() const { return uint64_t{y_records_} * record_bits(); }
    uint64_t z_length() const { return uint64_t{z_records_} * base_.ell; }
    /// Common certificate width of the verifier-as-predicate.
    uint64_t witness_length() const { return std::max(y_length(), z_length()); }

    const SparseFilter& filter() const { return filter_; }
    const S2Predicate& base() const { return base_; }

    /// Wrap as an S2Predicate over (n, witness_length()) for reuse in the
    /// game operations.
    S2Predicate as_predicate() const;

private:
    SparseFilter filter_;
    S2Predicate base_;
    uint32_t y_records_ = 0;
    uint32_t z_records_ = 0;
};

struct Transform {
    TransformedVerifier verifier;
    WitnessTable table;

    /// Table serializations zero-padded to the verifier's witness length.
    BitVec y_argument() const;
    BitVec z_argument() const;
};

/*! \brief Build the Figure-1 transform for a filtered slice.
 *
 * Enumerates the filter's pass-set X, finds each member's lexicographically
 * smallest irrefutable yes-certificate and each non-member's no-certificate
 * (erroring out when an x in X has neither side), and assembles the tables.
 * The result depends only on (P, F, lang), never on later queries.
 */
Transform build_sparse_transform(const S2Predicate& p, const SparseFilter& f,
                                 const LangOracle& lang, uint64_t budget);

struct TransformReport {
    uint64_t inputs_checked = 0;
    std::vector<uint64_t> yes_violations;       // members that V can reject
    std::vector<uint64_t> soundness_violations; // non-members some y-arg gets past
    std::vector<uint64_t> filter_violations;    // members outside the filter
    uint64_t weak_z_records = 0; // designated z_x no longer irrefutable itself
    uint64_t sampled_checks = 0;
    uint64_t sampled_failures = 0;

    bool pass() const {
        return yes_violations.empty() && soundness_violations.empty() &&
               filter_violations.empty() && sampled_failures == 0;
    }
};

/*! \brief Check the transform against the language oracle on a whole slice.
 *
 * Exhaustive over the certificate record space (which covers every possible
 * argument parse) plus seeded random full-width arguments through the real
 * eval path.  `weak_z_records` distinguishes Z* corruptions that another
 * record still compensates for from true soundness violations.
 */
TransformReport verify_transform(const TransformedVerifier& v, const WitnessTable& table,
                                 const LangOracle& lang, uint32_t n, uint64_t budget,
                                 uint64_t samples = 8, uint64_t seed = 1);

/// Built-in toy predicates, filters and oracles.
namespace toys {

/// P(x,y,z) = [1 < val(y) < val(x) and val(y) divides val(x)]; ignores z.
/// Its S2 language is the composite values >= 4.
S2Predicate divisor(uint32_t n, uint32_t ell);

/// Divisor predicate with a z escape hatch: P = divisor OR [val(z) = val(x)+1].
/// Same language, but no-certificates must dodge the successor value.
S2Predicate divisor_succ(uint32_t n, uint32_t ell);

/// P(x,y,z) = y_1 XOR z_1: no side has an irrefutable certificate anywhere.
S2Predicate xor_pathology(uint32_t n, uint32_t ell);

/// Witness-independent predicate P(x,y,z) = h(x).
S2Predicate witness_independent(uint32_t n, uint32_t ell, std::function<bool(const BitVec&)> h);

/// Wrap a single-output circuit over blocks (x, y, z) as a predicate.
S2Predicate from_circuit(Circuit c, uint32_t n, uint32_t ell);

/// Named built-ins for the CLI: divisor, divisor-succ, xor-pathology.
S2Predicate registry(const std::string& name, uint32_t n, uint32_t ell);

/// Oracle for {x : val(x) is composite, i.e. >= 4 with a proper divisor}.
LangOracle composites(uint32_t n);

/// Restrict an oracle to a filter's pass-set.
LangOracle restrict_to(LangOracle base, std::function<bool(const BitVec&)> keep);

SparseFilter value_at_most(uint32_t n, uint64_t vmax);
SparseFilter value_in(uint32_t n, std::vector<uint64_t> allowed);

/// The divisor predicate as an explicit circuit over (x, y, z) blocks.
Circuit divisor_circuit(uint32_t n, uint32_t ell);

/*! \brief The Figure-1 verifier as an explicit circuit over
 *  (x, Y-table, Z-table) input blocks, for witness hard-coding.
 *
 * The filter is val(x) <= filter_max and the base predicate is given as a
 * circuit over (x, y, z).  Record parsing is by equality match against the
 * table's x-fields.
 */
Circuit transformed_verifier_circuit(const Circuit& pred, uint32_t n, uint32_t ell,
                                     uint64_t filter_max, uint32_t y_records,
                                     uint32_t z_records);

} // namespace toys

} // namespace rav::s2game
