#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

#include <gmpxx.h>

namespace slc {

using Int = mpz_class;
using Rat = mpq_class;

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

inline Rat rat(long num, long den = 1) {
    if (den == 0) throw Error("rational with zero denominator");
    Rat r(num, den);
    r.canonicalize();
    return r;
}

/// Parses "p" or "p/q"; q must be positive after canonicalization.
inline Rat parse_rat(std::string_view s) {
    if (s.empty()) throw Error("empty rational literal");
    Rat r;
    try {
        r = Rat(std::string(s));
    } catch (const std::invalid_argument&) {
        throw Error("bad rational literal: " + std::string(s));
    }
    r.canonicalize();
    return r;
}

inline std::string rat_str(const Rat& r) { return r.get_str(); }

inline bool is_zero(const Rat& r) { return sgn(r) == 0; }
inline bool is_one(const Rat& r) { return r == 1; }

/// FNV-1a over bytes; stable across platforms, used for cache keys and
/// convention hashes.
inline std::uint64_t fnv1a(std::string_view data, std::uint64_t seed = 14695981039346656037ull) {
    std::uint64_t h = seed;
    for (unsigned char c : data) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

inline std::string fnv1a_hex(std::string_view data) {
    static const char* digits = "0123456789abcdef";
    std::uint64_t h = fnv1a(data);
    std::string out(16, '0');
    for (int i = 15; i >= 0; --i) {
        out[static_cast<size_t>(i)] = digits[h & 0xf];
        h >>= 4;
    }
    return out;
}

/// SplitMix64: tiny deterministic PRNG for reproducible test inputs.
struct SplitMix64 {
    std::uint64_t state;

    explicit SplitMix64(std::uint64_t seed) : state(seed) {}

    std::uint64_t next() {
        std::uint64_t z = (state += 0x9e3779b97f4a7c15ull);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }

    /// Uniform in [0, bound).
    std::uint64_t below(std::uint64_t bound) {
        if (bound == 0) throw Error("below(0)");
        return next() % bound;
    }

    /// Uniform in [lo, hi].
    long range(long lo, long hi) {
        return lo + static_cast<long>(below(static_cast<std::uint64_t>(hi - lo + 1)));
    }
};

}  // namespace slc
