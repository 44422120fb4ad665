// Bucketed merge keys for canonicalization. In the bulk of [-1,1] deltas
// quantize to tol-wide buckets. Near the endpoints the weight of a symbol in
// I(W,V) goes through log2(1 -+ delta), so absolute buckets would wipe out
// the exact transform identities: symbols with |delta| > 1 - 1/8 quantize
// on log2(1 - |delta|) instead, with a width of 16 tol bits. Merging is then
// always at least as fine as |di - dj| <= tol, and the induced error in any
// tracked parameter stays O(tol) per merge even at saturation. Exact -1, 0,
// +1 and undefined (NaN) keep reserved classes so support boundaries and the
// tie set never blur. Bucket merging is idempotent: a group's weighted mean
// stays inside its own bucket.

#pragma once

#include <bit>
#include <cmath>
#include <cstdint>

namespace mispolar::detail {

enum class ValClass : std::int8_t { NegOne = -1, Interior = 0, PosOne = 1, Zero = 2, Undef = 3 };

inline ValClass classify(double x) {
    if (std::isnan(x)) return ValClass::Undef;
    if (x == 0.0) return ValClass::Zero;
    if (x == 1.0) return ValClass::PosOne;
    if (x == -1.0) return ValClass::NegOne;
    return ValClass::Interior;
}

// tol below 1e-18 would overflow the bucket index; treat as exact matching.
inline bool exact_tol(double tol) { return !(tol >= 1e-18); }

inline std::int64_t bucket_of(double x, double tol) {
    if (exact_tol(tol)) return std::bit_cast<std::int64_t>(x);
    // scheme selection is itself bucket-quantized so group means never
    // switch schemes between passes
    std::int64_t linear = std::llround(std::abs(x) / tol);
    std::int64_t cut = std::llround((1.0 - 1.0 / 8.0) / tol);
    if (linear >= cut) {
        // log-relative bucket, offset clear of the linear range (<= 1/tol)
        std::int64_t bucket = std::llround(std::log2(1.0 - std::abs(x)) / (16.0 * tol));
        std::int64_t offset = std::llround(4.0 / tol);
        return x > 0.0 ? offset - bucket : -offset + bucket;
    }
    return x > 0.0 ? linear : -linear;
}

struct SymbolKey {
    ValClass cw;
    ValClass cv;
    std::int64_t bw;
    std::int64_t bv;

    bool operator==(const SymbolKey&) const = default;
};

inline SymbolKey make_key(double dw, double dv, double tol) {
    SymbolKey k{};
    k.cw = classify(dw);
    k.cv = classify(dv);
    k.bw = k.cw == ValClass::Interior ? bucket_of(dw, tol) : 0;
    k.bv = k.cv == ValClass::Interior ? bucket_of(dv, tol) : 0;
    return k;
}

inline std::uint64_t mix64(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

inline std::uint64_t hash_key(const SymbolKey& k) {
    std::uint64_t h = mix64(static_cast<std::uint64_t>(k.bw) + 0x9E3779B97F4A7C15ULL);
    h ^= mix64(static_cast<std::uint64_t>(k.bv) + 0xC2B2AE3D27D4EB4FULL);
    h ^= mix64((static_cast<std::uint64_t>(static_cast<std::uint8_t>(k.cw)) << 8) |
               static_cast<std::uint64_t>(static_cast<std::uint8_t>(k.cv)));
    return h == 0 ? 1 : h;
}

}  // namespace mispolar::detail
