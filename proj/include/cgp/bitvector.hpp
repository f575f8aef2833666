#pragma once

#include <bit>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace cgp {

using Word = std::uint64_t;
inline constexpr std::size_t kWordBits = 64;

constexpr std::size_t words_for(std::size_t bits) noexcept
{
    return (bits + kWordBits - 1) / kWordBits;
}

/// Mask of the valid bits in the last word of a `bits`-long vector.
constexpr Word tail_mask(std::size_t bits) noexcept
{
    const std::size_t rem = bits % kWordBits;
    return rem == 0 ? ~Word{0} : (Word{1} << rem) - 1;
}

/// Fixed-length bit vector packed into 64-bit words. Bits past `size()` in the
/// last word are always zero.
class PackedVector {
public:
    PackedVector() = default;
    explicit PackedVector(std::size_t length) : length_(length), words_(words_for(length), 0) {}

    static PackedVector ones(std::size_t length)
    {
        PackedVector v(length);
        for (auto& w : v.words_) w = ~Word{0};
        v.canonicalize();
        return v;
    }

    static PackedVector from_words(std::size_t length, std::span<const Word> words)
    {
        PackedVector v(length);
        for (std::size_t i = 0; i < v.words_.size() && i < words.size(); ++i) v.words_[i] = words[i];
        v.canonicalize();
        return v;
    }

    std::size_t size() const noexcept { return length_; }

    bool test(std::size_t i) const noexcept { return (words_[i / kWordBits] >> (i % kWordBits)) & 1U; }

    void set(std::size_t i, bool value = true) noexcept
    {
        const Word bit = Word{1} << (i % kWordBits);
        if (value)
            words_[i / kWordBits] |= bit;
        else
            words_[i / kWordBits] &= ~bit;
    }

    std::span<Word> words() noexcept { return words_; }
    std::span<const Word> words() const noexcept { return words_; }

    std::size_t count() const noexcept
    {
        std::size_t n = 0;
        for (Word w : words_) n += static_cast<std::size_t>(std::popcount(w));
        return n;
    }

    void canonicalize() noexcept
    {
        if (!words_.empty()) words_.back() &= tail_mask(length_);
    }

    /// Bit 0 first.
    std::string to_string() const
    {
        std::string s(length_, '0');
        for (std::size_t i = 0; i < length_; ++i)
            if (test(i)) s[i] = '1';
        return s;
    }

    bool operator==(const PackedVector&) const = default;

private:
    std::size_t length_ = 0;
    std::vector<Word> words_;
};

/// Dense table of per-node value vectors stored row-major in one buffer.
class Valuation {
public:
    Valuation() = default;
    Valuation(std::size_t rows, std::size_t bits) { reshape(rows, bits); }

    /// Resizes without clearing contents; every row is marked not ready.
    void reshape(std::size_t rows, std::size_t bits)
    {
        rows_ = rows;
        bits_ = bits;
        stride_ = words_for(bits);
        data_.resize(rows_ * stride_);
        ready_.assign(rows_, 0);
    }

    std::size_t rows() const noexcept { return rows_; }
    std::size_t bits() const noexcept { return bits_; }
    std::size_t word_count() const noexcept { return stride_; }

    std::span<Word> row(std::size_t r) noexcept { return {data_.data() + r * stride_, stride_}; }
    std::span<const Word> row(std::size_t r) const noexcept { return {data_.data() + r * stride_, stride_}; }

    bool ready(std::size_t r) const noexcept { return ready_[r] != 0; }
    void mark_ready(std::size_t r, bool value = true) noexcept { ready_[r] = value ? 1 : 0; }

    PackedVector vector(std::size_t r) const { return PackedVector::from_words(bits_, row(r)); }

private:
    std::size_t rows_ = 0;
    std::size_t bits_ = 0;
    std::size_t stride_ = 0;
    std::vector<Word> data_;
    std::vector<unsigned char> ready_;
};

}  // namespace cgp
