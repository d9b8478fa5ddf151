#include "prgan/cluster.hpp"

#include <cmath>
#include <limits>

#include "prgan/errors.hpp"
#include "prgan/util.hpp"

namespace prgan::core {

namespace {

double sqdist(const Point2& a, const Point2& b) {
    double dx = a[0] - b[0], dy = a[1] - b[1];
    return dx * dx + dy * dy;
}

struct KmeansRun {
    std::vector<int> assign;
    double inertia = std::numeric_limits<double>::infinity();
};

KmeansRun lloyd(const std::vector<Point2>& pts, int k, Rng& rng) {
    int n = static_cast<int>(pts.size());
    std::vector<Point2> centers;
    centers.reserve(k);

    // k-means++ seeding
    centers.push_back(pts[rng() % n]);
    std::vector<double> d2(n);
    while (static_cast<int>(centers.size()) < k) {
        double total = 0.0;
        for (int i = 0; i < n; ++i) {
            double best = std::numeric_limits<double>::infinity();
            for (const auto& c : centers) best = std::min(best, sqdist(pts[i], c));
            d2[i] = best;
            total += best;
        }
        if (total <= 0.0) {
            centers.push_back(pts[rng() % n]);  // duplicate points; any pick works
            continue;
        }
        double target = uniform01(rng) * total;
        double acc = 0.0;
        int pick = n - 1;
        for (int i = 0; i < n; ++i) {
            acc += d2[i];
            if (acc >= target) { pick = i; break; }
        }
        centers.push_back(pts[pick]);
    }

    KmeansRun run;
    run.assign.assign(n, 0);
    for (int iter = 0; iter < 100; ++iter) {
        bool changed = false;
        for (int i = 0; i < n; ++i) {
            int best = 0;
            double bd = sqdist(pts[i], centers[0]);
            for (int c = 1; c < k; ++c) {
                double d = sqdist(pts[i], centers[c]);
                if (d < bd) { bd = d; best = c; }
            }
            if (run.assign[i] != best) { run.assign[i] = best; changed = true; }
        }

        std::vector<Point2> sums(k, {0.0, 0.0});
        std::vector<int> counts(k, 0);
        for (int i = 0; i < n; ++i) {
            sums[run.assign[i]][0] += pts[i][0];
            sums[run.assign[i]][1] += pts[i][1];
            counts[run.assign[i]]++;
        }
        for (int c = 0; c < k; ++c) {
            if (counts[c] == 0) {
                // revive with the point farthest from its center
                int far = 0;
                double fd = -1.0;
                for (int i = 0; i < n; ++i) {
                    double d = sqdist(pts[i], centers[run.assign[i]]);
                    if (d > fd) { fd = d; far = i; }
                }
                centers[c] = pts[far];
                run.assign[far] = c;
                changed = true;
            } else {
                centers[c] = {sums[c][0] / counts[c], sums[c][1] / counts[c]};
            }
        }
        if (!changed && iter > 0) break;
    }

    run.inertia = 0.0;
    for (int i = 0; i < n; ++i) run.inertia += sqdist(pts[i], centers[run.assign[i]]);
    return run;
}

}  // namespace

std::vector<int> cluster_floor_locations(const std::vector<Point2>& coords, int k,
                                         std::uint64_t seed) {
    if (k <= 0) throw OutOfRange("cluster_floor_locations: k must be positive");
    if (static_cast<int>(coords.size()) < k)
        throw TooFewPoints("cluster_floor_locations: fewer points than clusters");
    if (k == 1) return std::vector<int>(coords.size(), 0);

    KmeansRun best;
    for (int restart = 0; restart < 10; ++restart) {
        Rng rng(seed + 0x9e3779b9ULL * restart);
        KmeansRun run = lloyd(coords, k, rng);
        if (run.inertia < best.inertia) best = run;
    }
    return best.assign;
}

}  // namespace prgan::core
