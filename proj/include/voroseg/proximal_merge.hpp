#pragma once

#include <cstdint>
#include <vector>

#include "voroseg/cluster.hpp"

namespace voroseg {

/// Centroid proximity: sum of per-channel absolute differences.
inline double manhattan(const FeatureVector& a, const FeatureVector& b) {
    const double dr = a.r - b.r;
    const double dg = a.g - b.g;
    const double db = a.b - b.b;
    return (dr < 0 ? -dr : dr) + (dg < 0 ? -dg : dg) + (db < 0 ? -db : db);
}

struct MergeRecord {
    std::size_t index_a;
    std::size_t index_b;
    double distance;
};

struct MergeResult {
    std::vector<Cluster> clusters;
    std::size_t k = 0;
    std::vector<FeatureVector> centroids;
    std::vector<MergeRecord> merge_log;
};

/// Pool two disjoint clusters; the centroid is the size-weighted mean of
/// the two centroids.
Cluster merge_pair(const Cluster& a, const Cluster& b);

/// Greedy agglomeration: repeatedly merge the globally closest centroid
/// pair while its distance is below epsilon. Ties go to the
/// lexicographically smallest index pair; the merged cluster replaces the
/// lower index and the list compacts. Every merge lands in merge_log with
/// the pair's indices at the time of the merge.
MergeResult merge_proximal_clusters(std::vector<Cluster> clusters,
                                    double epsilon);

} // namespace voroseg
