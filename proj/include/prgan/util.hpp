#ifndef PRGAN_UTIL_HPP
#define PRGAN_UTIL_HPP

#include <cstdint>
#include <random>
#include <string>
#include <vector>

namespace prgan {

using Rng = std::mt19937_64;

// FNV-1a over raw bytes; used for artifact provenance hashes, not security.
std::uint64_t fnv1a(const void* data, std::size_t n, std::uint64_t seed = 0xcbf29ce484222325ULL);
std::uint64_t hash_doubles(const std::vector<double>& v);
std::string hash_hex(std::uint64_t h);

std::uint64_t hash_file(const std::string& path);

// Percent with 2 decimals, rounding half away from zero in decimal
// (a 1e-9 nudge undoes binary representation error near .xx5 boundaries).
double round2(double x);
std::string format_percent2(double fraction);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& content);

// Fisher-Yates with the given rng; deterministic across platforms.
template <typename T>
void shuffle_vec(std::vector<T>& v, Rng& rng) {
    for (std::size_t i = v.size(); i > 1; --i) {
        std::size_t j = static_cast<std::size_t>(rng() % i);
        std::swap(v[i - 1], v[j]);
    }
}

double uniform01(Rng& rng);            // [0,1)
double normal(Rng& rng);               // standard normal, Box-Muller
double laplace(Rng& rng, double b);    // scale b, location 0

}  // namespace prgan

#endif
