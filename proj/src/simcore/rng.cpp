#include "qtk/simcore/rng.hpp"

namespace qtk {

// splitmix64 finalizer
std::uint64_t Rng::mix(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

std::uint64_t Rng::derive(std::uint64_t seed, std::initializer_list<std::uint64_t> path) {
    std::uint64_t h = mix(seed);
    for (auto p : path) h = mix(h ^ mix(p + 0x632be59bd9b4e019ULL));
    return h;
}

// FNV-1a
std::uint64_t Rng::hash(std::string_view text) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : text) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

}  // namespace qtk
