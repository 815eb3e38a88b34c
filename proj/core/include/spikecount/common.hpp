#pragma once

#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>

namespace spikecount {

// Parameter outside its documented domain (rho out of [0,1], gamma <= 0, ...).
struct ParamError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// Malformed experiment configuration. Maps to CLI exit code 2.
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Numeric failure (non-convergence, singular Gram matrix). CLI exit code 3.
struct NumericError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// SplitMix64 step; used to derive independent child seeds from a master
// seed so results do not depend on how work is split across threads.
inline std::uint64_t splitmix64(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream) {
    return splitmix64(seed ^ splitmix64(stream));
}

inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t a, std::uint64_t b) {
    return mix_seed(mix_seed(seed, a), b);
}

// FNV-1a, used for content hashes in run manifests.
inline std::uint64_t fnv1a(const std::string& s) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

class ThreadPool;

// Runs f(0..count-1). With a pool, tasks are distributed across workers;
// callers must ensure tasks write to disjoint locations so that results
// are identical for any worker count.
void parallel_for(ThreadPool* pool, std::size_t count, const std::function<void(std::size_t)>& f);

}  // namespace spikecount
