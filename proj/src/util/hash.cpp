#include "garden/util/hash.hpp"

#include <cstdio>

namespace garden {

std::string to_hex(std::uint64_t value) {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(value));
    return buf;
}

std::string Fnv1a::hex() const { return to_hex(state_); }

}  // namespace garden
