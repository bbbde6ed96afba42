#pragma once

#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include "rav/errors.hpp"

namespace rav::gridcolor {

/// A unary grid coloring instance 1^n 0 1^m 0 1^c.
struct GcInstance {
    uint32_t rows = 0;
    uint32_t cols = 0;
    uint32_t colors = 0;

    bool operator==(const GcInstance&) const = default;
};

/// Accepts exactly 1^n 0 1^m 0 1^c with n, m, c >= 1; anything else is
/// malformed (a value, not a fault) and hence outside the language.
std::optional<GcInstance> parse_instance(std::string_view bits);

/// Which four-corner pattern counts as monochromatic.
enum class CheckMode {
    SquareCorners,    // corners of an axis-aligned square, side d >= 1
    RectangleCorners, // corners of any axis-aligned rectangle
};

struct Coloring {
    uint32_t rows = 0;
    uint32_t cols = 0;
    std::vector<uint8_t> cells; // row-major, values 1..colors

    uint8_t at(uint32_t r, uint32_t c) const { return cells[(r - 1) * cols + (c - 1)]; }
    uint8_t& at(uint32_t r, uint32_t c) { return cells[(r - 1) * cols + (c - 1)]; }

    bool operator==(const Coloring&) const = default;
};

/// Corner cells of the offending square/rectangle, 1-based.
struct MonoWitness {
    uint32_t r1 = 0, c1 = 0, r2 = 0, c2 = 0;

    uint32_t side() const { return r2 - r1; }

    bool operator==(const MonoWitness&) const = default;
};

/// First monochromatic witness in deterministic scan order, if any.
std::optional<MonoWitness> find_mono_square(const Coloring& coloring, CheckMode mode);

enum class Outcome { Accept, Reject, BudgetExceeded };

struct SolveResult {
    Outcome outcome = Outcome::Reject;
    std::optional<Coloring> coloring; // present iff Accept
    uint64_t nodes = 0;               // assignments tried
};

/*! \brief Decide colorability by backtracking.
 *
 * Cells are assigned in row-major order with color-symmetry pruning (the
 * first occurrence of each color is forced ascending).  Accept returns a
 * coloring re-checked against find_mono_square; Reject is only reported
 * after the pruned space is exhausted, and running out of budget is a
 * distinct third outcome.  Workers partition disjoint top-row prefixes; the
 * accepted branch is always the lowest one, so results match a
 * single-worker run.
 */
SolveResult solve(const GcInstance& inst, uint64_t budget,
                  CheckMode mode = CheckMode::SquareCorners, unsigned workers = 1);

enum class Membership { Yes, No, BudgetExceeded };

/// 0 on malformed strings, otherwise the solver's verdict.  The set of
/// well-formed strings is the language's uniformly-sparse extension.
Membership decide_membership(std::string_view bits, uint64_t budget,
                             CheckMode mode = CheckMode::SquareCorners);

} // namespace rav::gridcolor
