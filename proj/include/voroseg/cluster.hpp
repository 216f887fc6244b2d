#pragma once

#include <cstdint>
#include <cstddef>
#include <vector>

#include "voroseg/image.hpp"

namespace voroseg {

/// A pixel's position in RGB feature space. Channels are real-valued in
/// [0, 255] for pixels taken from an image; centroids may fall anywhere
/// in between.
struct FeatureVector {
    double r = 0.0;
    double g = 0.0;
    double b = 0.0;

    double operator[](int channel) const {
        return channel == 0 ? r : channel == 1 ? g : b;
    }
    double& operator[](int channel) {
        return channel == 0 ? r : channel == 1 ? g : b;
    }

    friend bool operator==(const FeatureVector&, const FeatureVector&) = default;
};

inline FeatureVector to_feature(const Rgb& p) {
    return {static_cast<double>(p.r), static_cast<double>(p.g),
            static_cast<double>(p.b)};
}

/// Squared Euclidean distance in feature space.
inline double squared_distance(const FeatureVector& a, const FeatureVector& b) {
    const double dr = a.r - b.r;
    const double dg = a.g - b.g;
    const double db = a.b - b.b;
    return dr * dr + dg * dg + db * db;
}

/// A group of pixels with its feature-space centroid. `members` holds
/// indices into the source pixel list; the centroid is always the
/// arithmetic mean of the members' feature vectors.
struct Cluster {
    FeatureVector centroid;
    std::vector<std::uint32_t> members;

    std::size_t size() const { return members.size(); }
};

} // namespace voroseg
