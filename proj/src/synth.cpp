#include "prgan/synth.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>

#include "prgan/errors.hpp"
#include "prgan/idx.hpp"
#include "prgan/uji.hpp"

namespace prgan::core {

namespace {

// seven segments: top, top-left, top-right, middle, bottom-left, bottom-right, bottom
enum Seg { T = 1 << 0, TL = 1 << 1, TR = 1 << 2, M = 1 << 3, BL = 1 << 4, BR = 1 << 5, B = 1 << 6 };

constexpr int kSegmentsForDigit[10] = {
    T | TL | TR | BL | BR | B,      // 0
    TR | BR,                        // 1
    T | TR | M | BL | B,            // 2
    T | TR | M | BR | B,            // 3
    TL | TR | M | BR,               // 4
    T | TL | M | BR | B,            // 5
    T | TL | M | BL | BR | B,       // 6
    T | TR | BR,                    // 7
    T | TL | TR | M | BL | BR | B,  // 8
    T | TL | TR | M | BR | B,       // 9
};

void paint_rect(std::vector<double>& img, int canvas, int y0, int y1, int x0, int x1, double v) {
    for (int y = y0; y <= y1; ++y)
        for (int x = x0; x <= x1; ++x)
            img[static_cast<std::size_t>(y) * canvas + x] = std::max(img[y * canvas + x], v);
}

std::vector<double> render_digit(int digit, int canvas, double intensity) {
    std::vector<double> img(static_cast<std::size_t>(canvas) * canvas, 0.0);
    int s = kSegmentsForDigit[digit];
    int left = 2, right = canvas - 3, top = 1, bottom = canvas - 2;
    int mid0 = canvas / 2 - 1, mid1 = canvas / 2;
    if (s & T) paint_rect(img, canvas, top, top + 1, left + 1, right - 1, intensity);
    if (s & M) paint_rect(img, canvas, mid0, mid1, left + 1, right - 1, intensity);
    if (s & B) paint_rect(img, canvas, bottom - 1, bottom, left + 1, right - 1, intensity);
    if (s & TL) paint_rect(img, canvas, top, mid1, left, left + 1, intensity);
    if (s & TR) paint_rect(img, canvas, top, mid1, right - 1, right, intensity);
    if (s & BL) paint_rect(img, canvas, mid0, bottom, left, left + 1, intensity);
    if (s & BR) paint_rect(img, canvas, mid0, bottom, right - 1, right, intensity);
    return img;
}

std::vector<double> shift_image(const std::vector<double>& img, int canvas, int dy, int dx) {
    std::vector<double> out(img.size(), 0.0);
    for (int y = 0; y < canvas; ++y) {
        int sy = y - dy;
        if (sy < 0 || sy >= canvas) continue;
        for (int x = 0; x < canvas; ++x) {
            int sx = x - dx;
            if (sx < 0 || sx >= canvas) continue;
            out[static_cast<std::size_t>(y) * canvas + x] =
                img[static_cast<std::size_t>(sy) * canvas + sx];
        }
    }
    return out;
}

}  // namespace

SynthDigits synth_digits(int n, std::uint64_t seed, const DigitSynthParams& p) {
    Rng rng(seed);
    SynthDigits out;
    auto& ds = out.data;
    ds.kind = DataKind::real_valued;
    ds.num_records = n;
    ds.dim = p.canvas * p.canvas;
    ds.image_c = 1;
    ds.image_h = p.canvas;
    ds.image_w = p.canvas;
    ds.num_target_classes = 2;
    ds.num_sensitive_classes = 2;
    ds.features.reserve(static_cast<std::size_t>(n) * ds.dim);
    out.digits.resize(n);

    for (int i = 0; i < n; ++i) {
        int digit = static_cast<int>(rng() % 10);
        out.digits[i] = static_cast<std::uint8_t>(digit);
        double intensity = p.intensity_lo + uniform01(rng) * (p.intensity_hi - p.intensity_lo);
        auto img = render_digit(digit, p.canvas, intensity);
        if (p.jitter > 0) {
            int dy = static_cast<int>(rng() % (2 * p.jitter + 1)) - p.jitter;
            int dx = static_cast<int>(rng() % (2 * p.jitter + 1)) - p.jitter;
            img = shift_image(img, p.canvas, dy, dx);
        }
        for (auto& v : img) {
            v += normal(rng) * p.noise_sigma;
            v = std::clamp(v, 0.0, 1.0);
            // quantize like the byte image files the loader consumes
            v = std::lround(v * 255.0) / 255.0;
            ds.features.push_back(v);
        }
        auto [yl, yp] = derive_mnist_labels(digit);
        ds.target_labels.push_back(yl);
        ds.sensitive_labels.push_back(yp);
    }
    ds.validate();
    return out;
}

void write_synth_digits_idx(int n, std::uint64_t seed, const std::string& images_path,
                            const std::string& labels_path, const DigitSynthParams& params) {
    SynthDigits s = synth_digits(n, seed, params);
    write_dataset_as_idx(s.data, images_path, labels_path, &s.digits);
}

void write_synth_uji_csv(const std::string& csv_path, int n, std::uint64_t seed) {
    Rng rng(seed);
    constexpr int kBuildings = 3;
    constexpr int kFloorsPerBuilding[kBuildings] = {4, 4, 5};
    constexpr int kApsPerFloor = 40;  // 13 floors * 40 = 520
    constexpr double kPlaneX = 120.0, kPlaneY = 60.0;

    struct Ap { int building, floor_in_b; double x, y; };
    std::vector<Ap> aps;
    int fc = 0;
    for (int b = 0; b < kBuildings; ++b)
        for (int f = 0; f < kFloorsPerBuilding[b]; ++f, ++fc)
            for (int ai = 0; ai < kApsPerFloor; ++ai) {
                int gx = ai % 8, gy = ai / 8;
                aps.push_back({b, f, 15.0 * gx + 7.5, 12.0 * gy + 6.0});
            }

    std::ofstream out(csv_path, std::ios::trunc);
    if (!out) throw Error("cannot write CSV: " + csv_path);
    for (int a = 0; a < kUjiNumAps; ++a) {
        char name[8];
        std::snprintf(name, sizeof(name), "WAP%03d", a + 1);
        out << name << ',';
    }
    out << "LONGITUDE,LATITUDE,FLOOR,BUILDINGID\n";

    int total_floors = 13;
    for (int i = 0; i < n; ++i) {
        int floor_class = i % total_floors;  // even coverage
        int b = floor_class < 4 ? 0 : (floor_class < 8 ? 1 : 2);
        int f = floor_class - (b == 0 ? 0 : (b == 1 ? 4 : 8));
        int blob = static_cast<int>(rng() % 8);
        double cx = 15.0 + 30.0 * (blob % 4);
        double cy = 15.0 + 30.0 * (blob / 4);
        double x = std::clamp(cx + normal(rng) * 5.0, 0.0, kPlaneX);
        double y = std::clamp(cy + normal(rng) * 5.0, 0.0, kPlaneY);

        for (const auto& ap : aps) {
            double p;
            if (ap.building != b) {
                p = 0.005;
            } else {
                double d = std::hypot(x - ap.x, y - ap.y);
                int df = std::abs(ap.floor_in_b - f);
                if (df == 0)      p = d < 25 ? 0.98 : (d < 40 ? 0.5 : 0.05);
                else if (df == 1) p = d < 25 ? 0.35 : (d < 40 ? 0.10 : 0.01);
                else              p = 0.01;
            }
            bool seen = uniform01(rng) < p;
            if (seen) {
                double dshow = ap.building == b ? std::hypot(x - ap.x, y - ap.y) : 60.0;
                int strength = static_cast<int>(std::max(-95.0, -30.0 - dshow));
                out << strength << ',';
            } else {
                out << kUjiNoSignal << ',';
            }
        }
        out << (b * 500.0 + x) << ',' << y << ',' << f << ',' << b << '\n';
    }
}

LabeledDataset four_cell_blobs(int n, std::uint64_t seed, double sigma) {
    Rng rng(seed);
    LabeledDataset ds;
    ds.kind = DataKind::real_valued;
    ds.num_records = n;
    ds.dim = 2;
    ds.num_target_classes = 2;
    ds.num_sensitive_classes = 2;
    for (int i = 0; i < n; ++i) {
        int cell = i % 4;                // equal cell counts
        int right = cell & 1, up = cell >> 1;
        double cx = right ? 0.75 : 0.25;
        double cy = up ? 0.75 : 0.25;
        ds.features.push_back(std::clamp(cx + normal(rng) * sigma, 0.0, 1.0));
        ds.features.push_back(std::clamp(cy + normal(rng) * sigma, 0.0, 1.0));
        ds.target_labels.push_back(up);
        ds.sensitive_labels.push_back(right);
    }
    ds.validate();
    return ds;
}

LabeledDataset two_blobs(int n, std::uint64_t seed, double gap, double sigma) {
    Rng rng(seed);
    LabeledDataset ds;
    ds.kind = DataKind::real_valued;
    ds.num_records = n;
    ds.dim = 2;
    ds.num_target_classes = 2;
    ds.num_sensitive_classes = 2;
    for (int i = 0; i < n; ++i) {
        int label = i % 2;
        double cx = 0.5 + (label ? gap / 2 : -gap / 2);
        ds.features.push_back(std::clamp(cx + normal(rng) * sigma, 0.0, 1.0));
        ds.features.push_back(std::clamp(0.5 + normal(rng) * sigma, 0.0, 1.0));
        ds.target_labels.push_back(label);
        ds.sensitive_labels.push_back(label);
    }
    ds.validate();
    return ds;
}

}  // namespace prgan::core
