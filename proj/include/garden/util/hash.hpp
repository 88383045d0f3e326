#pragma once

#include <cstdint>
#include <string>
#include <string_view>

namespace garden {

// 64-bit FNV-1a. Used for content fingerprints, not for security.
class Fnv1a {
public:
    Fnv1a& update(std::string_view bytes) {
        for (unsigned char c : bytes) {
            state_ ^= c;
            state_ *= 0x100000001b3ULL;
        }
        return *this;
    }
    // Length-prefixed so that ("ab","c") and ("a","bc") differ.
    Fnv1a& field(std::string_view bytes) {
        update(std::to_string(bytes.size()));
        update(":");
        return update(bytes);
    }
    std::uint64_t digest() const { return state_; }
    std::string hex() const;

private:
    std::uint64_t state_ = 0xcbf29ce484222325ULL;
};

inline std::uint64_t fnv1a(std::string_view bytes) { return Fnv1a{}.update(bytes).digest(); }
std::string to_hex(std::uint64_t value);

}  // namespace garden
