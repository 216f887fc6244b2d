#include "voroseg/proximal_merge.hpp"

#include <limits>
#include <utility>

#include "voroseg/errors.hpp"

namespace voroseg {

Cluster merge_pair(const Cluster& a, const Cluster& b) {
    const double na = static_cast<double>(a.size());
    const double nb = static_cast<double>(b.size());
    const double total = na + nb;

    Cluster merged;
    merged.centroid = {(na * a.centroid.r + nb * b.centroid.r) / total,
                       (na * a.centroid.g + nb * b.centroid.g) / total,
                       (na * a.centroid.b + nb * b.centroid.b) / total};
    merged.members.reserve(a.members.size() + b.members.size());
    merged.members.insert(merged.members.end(), a.members.begin(), a.members.end());
    merged.members.insert(merged.members.end(), b.members.begin(), b.members.end());
    return merged;
}

namespace {

// Forward nearest neighbor of row i: the closest cluster with a higher
// index, ties to the lowest such index. Scanning rows in order with
// strict comparisons reproduces the lexicographically-smallest-pair rule
// of a full pair scan exactly, so the cached variant below emits the
// same merge_log as the naive O(P^2)-per-step loop.
struct ForwardNn {
    double dist = std::numeric_limits<double>::infinity();
    std::size_t index = 0;
};

ForwardNn scan_row(const std::vector<Cluster>& clusters, std::size_t i) {
    ForwardNn nn;
    for (std::size_t j = i + 1; j < clusters.size(); ++j) {
        const double d = manhattan(clusters[i].centroid, clusters[j].centroid);
        if (d < nn.dist) { // strict: ties keep the smallest j
            nn.dist = d;
            nn.index = j;
        }
    }
    return nn;
}

} // namespace

MergeResult merge_proximal_clusters(std::vector<Cluster> clusters,
                                    double epsilon) {
    if (clusters.empty())
        throw EmptyInputError("no clusters to merge");

    MergeResult result;
    result.clusters = std::move(clusters);
    auto& pool = result.clusters;

    std::vector<ForwardNn> nn(pool.size());
    for (std::size_t i = 0; i < pool.size(); ++i) nn[i] = scan_row(pool, i);

    while (pool.size() > 1) {
        std::size_t min_i = 0;
        for (std::size_t i = 1; i + 1 < pool.size(); ++i)
            if (nn[i].dist < nn[min_i].dist) min_i = i; // ties keep smallest i
        const double min_dist = nn[min_i].dist;
        const std::size_t min_j = nn[min_i].index;
        if (!(min_dist < epsilon)) break;

        result.merge_log.push_back({min_i, min_j, min_dist});

        // Rows pointing at either merged cluster need a rescan; everyone
        // else keeps a valid cache (only the pair's rows changed).
        std::vector<bool> stale(pool.size(), false);
        stale[min_i] = true;
        for (std::size_t p = 0; p + 1 < pool.size(); ++p)
            if (nn[p].index == min_i || nn[p].index == min_j) stale[p] = true;

        pool[min_i] = merge_pair(pool[min_i], pool[min_j]);
        pool.erase(pool.begin() + static_cast<std::ptrdiff_t>(min_j));
        nn.erase(nn.begin() + static_cast<std::ptrdiff_t>(min_j));
        stale.erase(stale.begin() + static_cast<std::ptrdiff_t>(min_j));
        for (ForwardNn& entry : nn)
            if (entry.index > min_j) --entry.index;

        for (std::size_t p = 0; p < pool.size(); ++p) {
            if (stale[p]) {
                nn[p] = scan_row(pool, p);
            } else if (p < min_i) {
                // The merged centroid is the only new forward candidate.
                const double d =
                    manhattan(pool[p].centroid, pool[min_i].centroid);
                if (d < nn[p].dist ||
                    (d == nn[p].dist && min_i < nn[p].index)) {
                    nn[p].dist = d;
                    nn[p].index = min_i;
                }
            }
        }
    }

    result.k = pool.size();
    result.centroids.reserve(result.k);
    for (const Cluster& c : pool) result.centroids.push_back(c.centroid);
    return result;
}

} // namespace voroseg
