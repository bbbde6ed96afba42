#pragma once

#include <bit>
#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "rav/errors.hpp"

namespace rav {

/*! \brief Fixed-length bit string in the toolkit's canonical order.
 *
 * Bit 0 is the leftmost (most significant) position, so lexicographic order
 * over equal-length strings coincides with integer order of the big-endian
 * value.  Bits are packed MSB-first into 64-bit words; unused tail bits of
 * the last word are kept zero, which makes comparison a word walk.
 */
class BitVec {
public:
    BitVec() = default;

    /// All-zero vector of `nbits` bits.
    explicit BitVec(std::size_t nbits) : size_(nbits), words_(word_count(nbits), 0) {}

    /// Parse a string of '0'/'1' characters.
    static BitVec from_string(std::string_view bits) {
        BitVec v(bits.size());
        for (std::size_t i = 0; i < bits.size(); ++i) {
            if (bits[i] == '1') {
                v.set(i, true);
            } else if (bits[i] != '0') {
                throw ParseError("bit string contains a character other than 0/1");
            }
        }
        return v;
    }

    /// The `width`-bit big-endian representation of `value`.
    static BitVec from_value(uint64_t value, std::size_t width) {
        if (width < 64 && width > 0 && (value >> width) != 0) {
            throw ContractError("value does not fit in the requested width");
        }
        BitVec v(width);
        for (std::size_t i = 0; i < width; ++i) {
            if (i < 64) {
                v.set(width - 1 - i, (value >> i) & 1u);
            }
        }
        return v;
    }

    /// Hex payload as produced by to_hex(); `nbits` recovers the exact length.
    static BitVec from_hex(std::string_view hex, std::size_t nbits) {
        if (hex.size() * 4 < nbits) {
            throw ParseError("hex payload shorter than the declared bit length");
        }
        BitVec v(nbits);
        for (std::size_t i = 0; i < nbits; ++i) {
            const char c = hex[i / 4];
            int nibble;
            if (c >= '0' && c <= '9') {
                nibble = c - '0';
            } else if (c >= 'a' && c <= 'f') {
                nibble = c - 'a' + 10;
            } else if (c >= 'A' && c <= 'F') {
                nibble = c - 'A' + 10;
            } else {
                throw ParseError("invalid hex digit");
            }
            v.set(i, (nibble >> (3 - (i % 4))) & 1);
        }
        return v;
    }

    std::size_t size() const { return size_; }
    bool empty() const { return size_ == 0; }

    bool get(std::size_t i) const {
        return (words_[i >> 6] >> (63 - (i & 63))) & 1u;
    }

    void set(std::size_t i, bool v) {
        const uint64_t mask = uint64_t{1} << (63 - (i & 63));
        if (v) {
            words_[i >> 6] |= mask;
        } else {
            words_[i >> 6] &= ~mask;
        }
    }

    void push_back(bool v) {
        if (size_ % 64 == 0) {
            words_.push_back(0);
        }
        ++size_;
        set(size_ - 1, v);
    }

    void append(const BitVec& other) {
        for (std::size_t i = 0; i < other.size_; ++i) {
            push_back(other.get(i));
        }
    }

    BitVec slice(std::size_t pos, std::size_t len) const {
        BitVec out(len);
        for (std::size_t i = 0; i < len; ++i) {
            out.set(i, get(pos + i));
        }
        return out;
    }

    /// Big-endian integer value; requires size() <= 64.
    uint64_t value() const {
        if (size_ > 64) {
            throw ContractError("bit vector too wide for a 64-bit value");
        }
        if (size_ == 0) {
            return 0;
        }
        return words_[0] >> (64 - size_);
    }

    /// True iff the big-endian value is <= `threshold`; works for any width.
    bool value_leq(uint64_t threshold) const {
        if (size_ <= 64) {
            return value() <= threshold;
        }
        for (std::size_t i = 0; i + 64 < size_; ++i) {
            if (get(i)) {
                return false;
            }
        }
        return slice(size_ - 64, 64).value() <= threshold;
    }

    std::size_t count_ones() const {
        std::size_t total = 0;
        for (uint64_t w : words_) {
            total += static_cast<std::size_t>(std::popcount(w));
        }
        return total;
    }

    /// Binary +1 on the big-endian value, wrapping to all-zero on overflow.
    BitVec& increment() {
        for (std::size_t i = size_; i-- > 0;) {
            if (!get(i)) {
                set(i, true);
                return *this;
            }
            set(i, false);
        }
        return *this;
    }

    /// Lexicographic three-way compare; a proper prefix sorts first.
    int compare(const BitVec& other) const {
        if (size_ == other.size_) {
            // Tail bits are zero, so MSB-first packing makes whole-word
            // compare exact for equal lengths.
            for (std::size_t w = 0; w < words_.size(); ++w) {
                if (words_[w] != other.words_[w]) {
                    return words_[w] < other.words_[w] ? -1 : 1;
                }
            }
            return 0;
        }
        const std::size_t common = std::min(size_, other.size_);
        for (std::size_t i = 0; i < common; ++i) {
            if (get(i) != other.get(i)) {
                return get(i) ? 1 : -1;
            }
        }
        return size_ < other.size_ ? -1 : 1;
    }

    bool operator==(const BitVec& other) const {
        return size_ == other.size_ && words_ == other.words_;
    }
    bool operator!=(const BitVec& other) const { return !(*this == other); }
    bool operator<(const BitVec& other) const { return compare(other) < 0; }
    bool operator<=(const BitVec& other) const { return compare(other) <= 0; }
    bool operator>(const BitVec& other) const { return compare(other) > 0; }
    bool operator>=(const BitVec& other) const { return compare(other) >= 0; }

    std::string to_string() const {
        std::string s(size_, '0');
        for (std::size_t i = 0; i < size_; ++i) {
            if (get(i)) {
                s[i] = '1';
            }
        }
        return s;
    }

    /// MSB-first nibbles, zero-padded at the end to a nibble boundary.
    std::string to_hex() const {
        static const char* digits = "0123456789abcdef";
        const std::size_t nibbles = (size_ + 3) / 4;
        std::string s(nibbles, '0');
        for (std::size_t j = 0; j < nibbles; ++j) {
            int nibble = 0;
            for (std::size_t b = 0; b < 4; ++b) {
                const std::size_t i = j * 4 + b;
                nibble = (nibble << 1) | ((i < size_ && get(i)) ? 1 : 0);
            }
            s[j] = digits[nibble];
        }
        return s;
    }

    /// Raw bytes, MSB-first, zero-padded to a byte boundary.
    std::vector<uint8_t> to_bytes() const {
        std::vector<uint8_t> out((size_ + 7) / 8, 0);
        for (std::size_t i = 0; i < size_; ++i) {
            if (get(i)) {
                out[i / 8] |= static_cast<uint8_t>(0x80u >> (i % 8));
            }
        }
        return out;
    }

    static BitVec from_bytes(const std::vector<uint8_t>& bytes, std::size_t nbits) {
        if (bytes.size() * 8 < nbits) {
            throw ParseError("byte payload shorter than the declared bit length");
        }
        BitVec v(nbits);
        for (std::size_t i = 0; i < nbits; ++i) {
            v.set(i, (bytes[i / 8] >> (7 - (i % 8))) & 1u);
        }
        return v;
    }

private:
    static std::size_t word_count(std::size_t nbits) { return (nbits + 63) / 64; }

    std::size_t size_ = 0;
    std::vector<uint64_t> words_;
};

} // namespace rav
