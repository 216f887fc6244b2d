"""Voronoi-region adaptive unsupervised color image segmentation."""

from voroseg._core import (
    __version__,
    assign_voronoi,
    detect_corners,
    evaluate,
    kmeans,
    manhattan,
    merge_clusters,
    segment,
)

__all__ = [
    "__version__",
    "assign_voronoi",
    "detect_corners",
    "evaluate",
    "kmeans",
    "manhattan",
    "merge_clusters",
    "segment",
]
