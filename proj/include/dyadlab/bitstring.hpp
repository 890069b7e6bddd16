#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <string>
#include <string_view>

namespace dyadlab {

inline constexpr std::size_t kMaxBitStringLength = std::size_t{1} << 20;

/// Finite binary word. Stored one character ('0'/'1') per bit so that the
/// type hashes, compares and prints without conversion.
class BitString {
public:
    BitString() = default;

    /// Accepts only '0' and '1'; throws std::invalid_argument otherwise.
    static BitString from_string(std::string_view bits);
    /// Inverse of to_hex(): "<bitlength>:<hex>", bits packed MSB-first.
    static BitString from_hex(std::string_view text);

    std::size_t size() const noexcept { return bits_.size(); }
    bool empty() const noexcept { return bits_.empty(); }
    bool operator[](std::size_t i) const noexcept { return bits_[i] == '1'; }

    void push_back(bool bit);
    void append(const BitString& other);
    void pop_back() { bits_.pop_back(); }
    void truncate(std::size_t n) { bits_.resize(n); }

    BitString substr(std::size_t pos, std::size_t len) const;
    bool is_prefix_of(const BitString& other) const noexcept;

    const std::string& str() const noexcept { return bits_; }
    std::string to_hex() const;

    friend bool operator==(const BitString&, const BitString&) = default;

private:
    explicit BitString(std::string bits) : bits_(std::move(bits)) {}
    std::string bits_;
};

/// Shortlex order: shorter strings first, then lexicographic.
struct ShortLex {
    bool operator()(const BitString& a, const BitString& b) const noexcept {
        if (a.size() != b.size()) return a.size() < b.size();
        return a.str() < b.str();
    }
};

}  // namespace dyadlab

template <>
struct std::hash<dyadlab::BitString> {
    std::size_t operator()(const dyadlab::BitString& b) const noexcept {
        return std::hash<std::string>{}(b.str());
    }
};
