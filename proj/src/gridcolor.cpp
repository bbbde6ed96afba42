#include "rav/gridcolor.hpp"

#include <algorithm>
#include <atomic>
#include <mutex>
#include <thread>

namespace rav::gridcolor {

std::optional<GcInstance> parse_instance(std::string_view bits) {
    GcInstance inst;
    uint32_t* fields[3] = {&inst.rows, &inst.cols, &inst.colors};
    std::size_t pos = 0;
    for (int f = 0; f < 3; ++f) {
        uint32_t count = 0;
        while (pos < bits.size() && bits[pos] == '1') {
            ++count;
            ++pos;
        }
        if (count == 0) {
            return std::nullopt;
        }
        *fields[f] = count;
        if (f < 2) {
            if (pos >= bits.size() || bits[pos] != '0') {
                return std::nullopt;
            }
            ++pos;
        }
    }
    if (pos != bits.size()) {
        return std::nullopt; // trailing junk (or a non-binary character)
    }
    return inst;
}

std::optional<MonoWitness> find_mono_square(const Coloring& g, CheckMode mode) {
    if (mode == CheckMode::SquareCorners) {
        for (uint32_t r = 1; r <= g.rows; ++r) {
            for (uint32_t c = 1; c <= g.cols; ++c) {
                const uint32_t dmax = std::min(g.rows - r, g.cols - c);
                for (uint32_t d = 1; d <= dmax; ++d) {
                    const uint8_t col = g.at(r, c);
                    if (g.at(r + d, c) == col && g.at(r, c + d) == col &&
                        g.at(r + d, c + d) == col) {
                        return MonoWitness{r, c, r + d, c + d};
                    }
                }
            }
        }
        return std::nullopt;
    }
    for (uint32_t r1 = 1; r1 <= g.rows; ++r1) {
        for (uint32_t c1 = 1; c1 <= g.cols; ++c1) {
            const uint8_t col = g.at(r1, c1);
            for (uint32_t r2 = r1 + 1; r2 <= g.rows; ++r2) {
                if (g.at(r2, c1) != col) {
                    continue;
                }
                for (uint32_t c2 = c1 + 1; c2 <= g.cols; ++c2) {
                    if (g.at(r1, c2) == col && g.at(r2, c2) == col) {
                        return MonoWitness{r1, c1, r2, c2};
                    }
                }
            }
        }
    }
    return std::nullopt;
}

namespace {

/// Does assigning (r, c) complete a monochromatic pattern whose
/// bottom-right corner it is?
bool completes_mono(const Coloring& g, uint32_t r, uint32_t c, CheckMode mode) {
    const uint8_t col = g.at(r, c);
    if (mode == CheckMode::SquareCorners) {
        const uint32_t dmax = std::min(r - 1, c - 1);
        for (uint32_t d = 1; d <= dmax; ++d) {
            if (g.at(r - d, c - d) == col && g.at(r - d, c) == col && g.at(r, c - d) == col) {
                return true;
            }
        }
        return false;
    }
    for (uint32_t r1 = 1; r1 < r; ++r1) {
        if (g.at(r1, c) != col) {
            continue;
        }
        for (uint32_t c1 = 1; c1 < c; ++c1) {
            if (g.at(r1, c1) == col && g.at(r, c1) == col) {
                return true;
            }
        }
    }
    return false;
}

struct Search {
    GcInstance inst;
    CheckMode mode;
    uint64_t budget;

    Search(const GcInstance& i, CheckMode m, uint64_t b) : inst(i), mode(m), budget(b) {}

    std::atomic<uint64_t> nodes{0};
    std::atomic<bool> exceeded{false};
    std::atomic<uint32_t> best_idx{UINT32_MAX};
    std::mutex best_mu;
    std::optional<Coloring> best;

    /// DFS over cells [cell, rows*cols); true when this branch accepted.
    bool backtrack(Coloring& g, uint32_t cell, uint8_t max_used, uint32_t branch_idx) {
        if (exceeded.load(std::memory_order_relaxed) ||
            best_idx.load(std::memory_order_relaxed) < branch_idx) {
            return false;
        }
        if (cell == inst.rows * inst.cols) {
            std::lock_guard lock(best_mu);
            if (branch_idx < best_idx.load()) {
                best_idx.store(branch_idx);
                best = g;
            }
            return true;
        }
        const uint32_t r = cell / inst.cols + 1;
        const uint32_t c = cell % inst.cols + 1;
        const uint8_t limit =
            static_cast<uint8_t>(std::min<uint32_t>(inst.colors, max_used + 1u));
        for (uint8_t color = 1; color <= limit; ++color) {
            if (nodes.fetch_add(1, std::memory_order_relaxed) + 1 > budget) {
                exceeded.store(true);
                return false;
            }
            g.at(r, c) = color;
            if (!completes_mono(g, r, c, mode)) {
                if (backtrack(g, cell + 1, std::max<uint8_t>(max_used, color), branch_idx)) {
                    return true;
                }
                if (exceeded.load(std::memory_order_relaxed)) {
                    return false;
                }
            }
        }
        g.at(r, c) = 0;
        return false;
    }
};

/// Canonical assignments of the top row (ascending first color use).
void enumerate_prefixes(uint32_t cols, uint32_t colors, std::vector<uint8_t>& row,
                        uint8_t max_used, std::vector<std::vector<uint8_t>>& out) {
    if (row.size() == cols) {
        out.push_back(row);
        return;
    }
    const uint8_t limit = static_cast<uint8_t>(std::min<uint32_t>(colors, max_used + 1u));
    for (uint8_t color = 1; color <= limit; ++color) {
        row.push_back(color);
        enumerate_prefixes(cols, colors, row, std::max(max_used, color), out);
        row.pop_back();
    }
}

} // namespace

SolveResult solve(const GcInstance& inst, uint64_t budget, CheckMode mode, unsigned workers) {
    if (inst.rows < 1 || inst.cols < 1 || inst.colors < 1) {
        throw ContractError("grid instance fields must all be >= 1");
    }
    if (inst.colors > 255) {
        throw ContractError("color count capped at 255");
    }
    Search search(inst, mode, budget);

    if (workers <= 1 || inst.rows == 1) {
        Coloring g{inst.rows, inst.cols, std::vector<uint8_t>(inst.rows * inst.cols, 0)};
        search.backtrack(g, 0, 0, 0);
    } else {
        std::vector<std::vector<uint8_t>> prefixes;
        std::vector<uint8_t> row;
        enumerate_prefixes(inst.cols, inst.colors, row, 0, prefixes);

        std::atomic<uint32_t> next{0};
        auto run = [&] {
            for (;;) {
                const uint32_t idx = next.fetch_add(1);
                if (idx >= prefixes.size() || search.exceeded.load()) {
                    return;
                }
                if (search.best_idx.load() < idx) {
                    continue; // a lower branch already accepted
                }
                Coloring g{inst.rows, inst.cols,
                           std::vector<uint8_t>(inst.rows * inst.cols, 0)};
                uint8_t max_used = 0;
                for (uint32_t c = 0; c < inst.cols; ++c) {
                    g.cells[c] = prefixes[idx][c];
                    max_used = std::max(max_used, prefixes[idx][c]);
                }
                search.nodes.fetch_add(inst.cols, std::memory_order_relaxed);
                search.backtrack(g, inst.cols, max_used, idx);
            }
        };
        std::vector<std::thread> pool;
        for (unsigned w = 0; w < workers; ++w) {
            pool.emplace_back(run);
        }
        for (auto& t : pool) {
            t.join();
        }
    }

    SolveResult result;
    result.nodes = search.nodes.load();
    if (search.best) {
        if (find_mono_square(*search.best, mode)) {
            throw Error("internal: accepted coloring fails its own recheck");
        }
        result.outcome = Outcome::Accept;
        result.coloring = std::move(search.best);
    } else if (search.exceeded.load()) {
        result.outcome = Outcome::BudgetExceeded;
    } else {
        result.outcome = Outcome::Reject;
    }
    return result;
}

Membership decide_membership(std::string_view bits, uint64_t budget, CheckMode mode) {
    const auto inst = parse_instance(bits);
    if (!inst) {
        return Membership::No;
    }
    switch (solve(*inst, budget, mode).outcome) {
    case Outcome::Accept:
        return Membership::Yes;
    case Outcome::Reject:
        return Membership::No;
    case Outcome::BudgetExceeded:
        return Membership::BudgetExceeded;
    }
    return Membership::No;
}

} // namespace rav::gridcolor
