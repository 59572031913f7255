#pragma once

#include <cstdint>
#include <cstdlib>
#include <set>
#include <stdexcept>
#include <string>

namespace signet {

using EdgeSet = std::set<std::string>;
using Family = std::set<EdgeSet>;

/// Errors raised on contract violations (unknown ids, bad preconditions).
struct invalid_argument : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// Raised when an exhaustive scan would exceed the subset-size guard.
struct guard_exceeded : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Hard cap on exhaustive subset scans, in bits. Overridable via the
/// SIGNET_MAX_SUBSET_BITS environment variable.
inline int max_subset_bits() {
    if (const char* env = std::getenv("SIGNET_MAX_SUBSET_BITS")) {
        int v = std::atoi(env);
        if (v > 0 && v <= 30) return v;
    }
    return 20;
}

inline void check_subset_guard(std::size_t nbits, const char* what) {
    if (static_cast<int>(nbits) > max_subset_bits())
        throw guard_exceeded(std::string(what) + ": exhaustive scan over " +
                             std::to_string(nbits) +
                             " elements exceeds guard (" +
                             std::to_string(max_subset_bits()) +
                             " bits); raise SIGNET_MAX_SUBSET_BITS or use a "
                             "sampling mode");
}

inline int popcount64(std::uint64_t x) { return __builtin_popcountll(x); }

}  // namespace signet
