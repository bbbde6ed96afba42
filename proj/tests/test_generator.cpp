#include "doctest.h"

#include <random>

#include "rav/generator.hpp"
#include "test_util.hpp"

using namespace rav;
using namespace rav::generator;
using codec::Scheme;

namespace {

BitVec random_bits(std::mt19937_64& rng, uint64_t len) {
    BitVec b(len);
    for (uint64_t i = 0; i < len; ++i) {
        b.set(i, (rng() & 1) != 0);
    }
    return b;
}

/// The generator's contract oracle: decode then evaluate directly.
BitVec oracle_prefix(const BitVec& e, uint32_t n, uint32_t s, Scheme scheme, uint64_t k) {
    const Circuit c = codec::decode(codec::make_encoding(e, n, s, scheme));
    return truth_table(c, k).bits;
}

} // namespace

TEST_CASE("spec constructors") {
    const GeneratorSpec tt = tt_spec(2, 1, Scheme::Paper);
    CHECK(tt.k == 4);
    CHECK(tt.encoding_bits() == 12);

    const GeneratorSpec ptt = ptt_spec(5, 2, Scheme::Micro);
    CHECK(ptt.k == 21);
    CHECK(ptt.encoding_bits() == 20);

    // |E|+1 = 13 > 2^2: not input-expanding.
    CHECK_THROWS_AS(ptt_spec(2, 1, Scheme::Paper), ContractError);
}

TEST_CASE("generator is exhaustively universal at (2,1,paper,k=4)") {
    const GeneratorSpec spec = tt_spec(2, 1, Scheme::Paper);
    const Circuit g = build_tt_generator(spec);
    CHECK(g.n_inputs == 12);
    CHECK(g.n_outputs() == 4);
    CHECK(validate(g).empty());
    for (uint64_t v = 0; v < (uint64_t{1} << 12); ++v) {
        const BitVec e = BitVec::from_value(v, 12);
        CHECK(eval(g, e) == oracle_prefix(e, 2, 1, Scheme::Paper, 4));
    }
}

TEST_CASE("generator matches the oracle on random encodings at (5,2,micro,k=21)") {
    const GeneratorSpec spec = ptt_spec(5, 2, Scheme::Micro);
    const Circuit g = build_tt_generator(spec);
    CHECK(g.n_inputs == 20);
    CHECK(g.n_outputs() == 21);
    std::mt19937_64 rng(31);
    for (int trial = 0; trial < 200; ++trial) {
        const BitVec e = random_bits(rng, 20);
        CHECK(eval(g, e) == oracle_prefix(e, 5, 2, Scheme::Micro, 21));
    }
}

TEST_CASE("generator spot check in the paper regime (12,12,paper,k=229)") {
    const GeneratorSpec spec = ptt_spec(12, 12, Scheme::Paper);
    CHECK(spec.k == 229);
    const Circuit g = build_tt_generator(spec);
    CHECK(g.n_inputs == 228);
    std::mt19937_64 rng(32);
    for (int trial = 0; trial < 20; ++trial) {
        const BitVec e = random_bits(rng, 228);
        CHECK(eval(g, e) == oracle_prefix(e, 12, 12, Scheme::Paper, 229));
    }
}

TEST_CASE("output prefixes are consistent across k") {
    std::mt19937_64 rng(33);
    const GeneratorSpec big = ptt_spec(5, 2, Scheme::Micro); // k = 21
    GeneratorSpec small = big;
    small.k = 9;
    const Circuit g_big = build_tt_generator(big);
    const Circuit g_small = build_tt_generator(small);
    for (int trial = 0; trial < 50; ++trial) {
        const BitVec e = random_bits(rng, 20);
        const BitVec full = eval(g_big, e);
        const BitVec part = eval(g_small, e);
        for (uint64_t i = 0; i < small.k; ++i) {
            CHECK(part.get(i) == full.get(i));
        }
    }
}

TEST_CASE("size report fits the cubic envelope") {
    const SizeReport r = generator_size_report(ptt_spec(5, 2, Scheme::Micro));
    CHECK(r.encoding_bits == 20);
    CHECK(r.bound == kCubicSizeConstant * 20 * 20 * 20);
    CHECK(r.pass);
    CHECK(r.gates <= r.bound);
}

TEST_CASE("size grows monotonically with s at fixed n") {
    uint64_t prev = 0;
    for (uint32_t s = 1; s <= 3; ++s) {
        const SizeReport r = generator_size_report(ptt_spec(5, s, Scheme::Micro));
        CHECK(r.pass);
        CHECK(r.gates >= prev);
        prev = r.gates;
    }
}

TEST_CASE("a k=1 generator is no bigger than a k=2 one") {
    GeneratorSpec one = ptt_spec(5, 2, Scheme::Micro);
    one.k = 1;
    GeneratorSpec two = one;
    two.k = 2;
    CHECK(generator_size_report(one).gates <= generator_size_report(two).gates);
}

TEST_CASE("cubic envelope across a parameter sweep") {
    for (uint32_t n = 3; n <= 6; ++n) {
        for (uint32_t s = 1; s <= 3; ++s) {
            const uint64_t enc = codec::encoding_length(n, s, Scheme::Micro);
            if (enc + 1 > (uint64_t{1} << n)) {
                continue; // not a valid prefix instance
            }
            CHECK(generator_size_report(ptt_spec(n, s, Scheme::Micro)).pass);
        }
    }
}
