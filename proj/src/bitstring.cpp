#include "dyadlab/bitstring.hpp"

#include <stdexcept>

namespace dyadlab {

BitString BitString::from_string(std::string_view bits) {
    if (bits.size() > kMaxBitStringLength)
        throw std::length_error("bit string exceeds length cap");
    for (char c : bits)
        if (c != '0' && c != '1')
            throw std::invalid_argument("bit string may contain only '0' and '1'");
    return BitString(std::string(bits));
}

BitString BitString::from_hex(std::string_view text) {
    auto colon = text.find(':');
    if (colon == std::string_view::npos)
        throw std::invalid_argument("hex bit string needs '<bitlength>:<hex>'");
    std::size_t len = std::stoull(std::string(text.substr(0, colon)));
    std::string_view hex = text.substr(colon + 1);
    if (len > kMaxBitStringLength) throw std::length_error("bit string exceeds length cap");
    if (hex.size() != (len + 3) / 4)
        throw std::invalid_argument("hex digit count does not match bit length");
    std::string bits;
    bits.reserve(len);
    for (char c : hex) {
        int v;
        if (c >= '0' && c <= '9') v = c - '0';
        else if (c >= 'a' && c <= 'f') v = c - 'a' + 10;
        else if (c >= 'A' && c <= 'F') v = c - 'A' + 10;
        else throw std::invalid_argument("bad hex digit");
        for (int k = 3; k >= 0; --k) bits.push_back(((v >> k) & 1) ? '1' : '0');
    }
    for (std::size_t i = len; i < bits.size(); ++i)
        if (bits[i] != '0') throw std::invalid_argument("nonzero padding in hex bit string");
    bits.resize(len);
    return BitString(std::move(bits));
}

void BitString::push_back(bool bit) {
    if (bits_.size() >= kMaxBitStringLength) throw std::length_error("bit string exceeds length cap");
    bits_.push_back(bit ? '1' : '0');
}

void BitString::append(const BitString& other) {
    if (bits_.size() + other.size() > kMaxBitStringLength)
        throw std::length_error("bit string exceeds length cap");
    bits_ += other.bits_;
}

BitString BitString::substr(std::size_t pos, std::size_t len) const {
    return BitString(bits_.substr(pos, len));
}

bool BitString::is_prefix_of(const BitString& other) const noexcept {
    return bits_.size() <= other.bits_.size() &&
           other.bits_.compare(0, bits_.size(), bits_) == 0;
}

std::string BitString::to_hex() const {
    static constexpr char digits[] = "0123456789abcdef";
    std::string out = std::to_string(bits_.size()) + ":";
    for (std::size_t i = 0; i < bits_.size(); i += 4) {
        int v = 0;
        for (std::size_t k = 0; k < 4; ++k) {
            v <<= 1;
            if (i + k < bits_.size() && bits_[i + k] == '1') v |= 1;
        }
        out.push_back(digits[v]);
    }
    return out;
}

}  // namespace dyadlab
