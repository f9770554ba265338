#pragma once

#include <bit>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace pumasim {

using u32 = std::uint32_t;
using u64 = std::uint64_t;

// Physical/virtual addresses and byte counts are plain u64 throughout.

class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

enum class AllocErrc {
    pool_not_initialized,
    pool_already_initialized,
    pool_exhausted,
    bad_size,
    unknown_hint,
    unknown_address,
    unmapped_address,
    double_release,
    out_of_simulated_memory,
};

class AllocError : public std::runtime_error {
public:
    AllocError(AllocErrc code, const std::string& msg)
        : std::runtime_error(msg), code_(code) {}
    AllocErrc code() const { return code_; }

private:
    AllocErrc code_;
};

constexpr bool is_pow2(u64 v) { return v != 0 && (v & (v - 1)) == 0; }

constexpr u32 log2_exact(u64 v) { return static_cast<u32>(std::countr_zero(v)); }

constexpr u64 ceil_div(u64 a, u64 b) { return (a + b - 1) / b; }

// splitmix64: the simulator's only RNG. Fixed algorithm so that seeded
// runs reproduce bit-exactly on any platform.
constexpr u64 splitmix64(u64& state) {
    state += 0x9e3779b97f4a7c15ull;
    u64 z = state;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

class Rng {
public:
    explicit Rng(u64 seed) : state_(seed) {}

    u64 next() { return splitmix64(state_); }

    // Uniform in [0, bound). Modulo bias is negligible for the bounds used
    // here (all far below 2^32) and keeps the draw sequence stable.
    u64 next_below(u64 bound) { return next() % bound; }

private:
    u64 state_;
};

// Deterministic seed derivation for grid cells: fold each component into
// the stream one at a time.
inline u64 derive_seed(u64 master, std::initializer_list<u64> parts) {
    u64 s = master;
    splitmix64(s);
    for (u64 p : parts) {
        s ^= p + 0x9e3779b97f4a7c15ull;
        splitmix64(s);
    }
    u64 t = s;
    return splitmix64(t);
}

} // namespace pumasim
