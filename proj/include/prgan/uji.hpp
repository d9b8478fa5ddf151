#ifndef PRGAN_UJI_HPP
#define PRGAN_UJI_HPP

#include <string>
#include <vector>

#include "prgan/dataset.hpp"

namespace prgan::core {

inline constexpr int kUjiNumAps = 520;
inline constexpr int kUjiClustersPerFloor = 8;
inline constexpr int kUjiNoSignal = 100;  // sentinel strength meaning "no reading"
inline constexpr std::uint64_t kUjiClusterSeed = 0x5eed0001ULL;

// Row metadata kept so a perturbed dataset can be written back in the same
// CSV schema.
struct UjiMeta {
    std::vector<double> longitude, latitude;
    std::vector<int> floor, building;
    std::vector<int> floor_class;  // global index over (building, floor) pairs
};

struct UjiTable {
    LabeledDataset data;
    UjiMeta meta;
};

// CSV with header WAP001..WAP520, LONGITUDE, LATITUDE, FLOOR, BUILDINGID
// (extra columns ignored). Signals become presence bits (sentinel -> 0),
// target = global floor class, sensitive = floor_class * 8 + coordinate
// cluster within the floor.
UjiTable load_uji_full(const std::string& csv_path);
LabeledDataset load_uji(const std::string& csv_path);

// Same schema back out; bit 1 -> -50 dBm-style reading, bit 0 -> sentinel.
void write_uji_csv(const std::string& csv_path, const LabeledDataset& data, const UjiMeta& meta);

}  // namespace prgan::core

#endif
