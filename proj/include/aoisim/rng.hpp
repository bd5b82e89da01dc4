#pragma once

#include <cstdint>

namespace aoisim {

// Purpose tag separating the random streams consumed by one experiment.
// Streams with distinct purposes are independent even for equal entity/index.
enum class StreamPurpose : std::uint64_t {
    kGeneration = 1,  // inter-generation draws (entity = 0, index = packet)
    kDelay = 2,       // gateway delay draws (entity = gateway, index = packet)
    kService = 3,     // transmission-time draws (entity = link, index = service count)
    kTick = 4,        // Poisson tick inter-arrivals (entity = link, index = tick count)
    kScratch = 15,    // tests and ad-hoc sampling
};

// Addresses one logical draw. Identical keys give identical draws across
// processes and runs; that is what makes coupled policy runs consume the
// same per-link randomness without any coordination at run time.
//
// salt separates otherwise-identical keys between uncoupled runs (the
// engine salts per policy in independent mode, 0 when draws are shared).
struct StreamKey {
    std::uint64_t master_seed = 0;
    StreamPurpose purpose = StreamPurpose::kScratch;
    std::uint64_t entity = 0;
    std::uint64_t index = 0;
    std::uint64_t salt = 0;
};

// splitmix64 finalizer; good avalanche, cheap enough to run per draw.
inline std::uint64_t mix64(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

// Counter-based generator: a fresh xoshiro256++ state is derived from the
// key, so a draw may burn as many uniforms as it needs (rejection sampling)
// while staying reproducible and independent across keys.
class DrawStream {
  public:
    explicit DrawStream(const StreamKey& key) {
        std::uint64_t h = mix64(key.master_seed);
        h = mix64(h ^ static_cast<std::uint64_t>(key.purpose) * 0xd1342543de82ef95ULL);
        h = mix64(h ^ key.entity * 0xaf251af3b0f025b5ULL);
        h = mix64(h ^ key.index * 0x9e6c63d0876a9a47ULL);
        h = mix64(h ^ key.salt * 0xb7e151628aed2a6bULL);
        for (auto& word : state_) {
            h = mix64(h);
            word = h;
        }
        state_[0] |= 1;  // xoshiro must not start from the all-zero state
    }

    std::uint64_t next_u64() {
        const std::uint64_t result = rotl(state_[0] + state_[3], 23) + state_[0];
        const std::uint64_t t = state_[1] << 17;
        state_[2] ^= state_[0];
        state_[3] ^= state_[1];
        state_[1] ^= state_[2];
        state_[0] ^= state_[3];
        state_[2] ^= t;
        state_[3] = rotl(state_[3], 45);
        return result;
    }

    // Uniform in [0,1).
    double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    // Uniform in (0,1]; safe as a log() argument.
    double uniform_pos() {
        return (static_cast<double>(next_u64() >> 11) + 1.0) * 0x1.0p-53;
    }

  private:
    static std::uint64_t rotl(std::uint64_t x, int k) {
        return (x << k) | (x >> (64 - k));
    }

    std::uint64_t state_[4];
};

}  // namespace aoisim
