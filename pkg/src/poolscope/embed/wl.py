"""Weisfeiler-Lehman relabeling over sampled neighbourhoods.

Produces the feature multiset used to train whole-graph embeddings: each
node contributes its bare pool label (depth 0) and a canonical rooted token
of its own label joined with the sorted labels of its sampled neighbours
(depth 1).  Sorting makes tokens independent of neighbour enumeration order.
"""

from __future__ import annotations

from collections import Counter

import numpy as np

WLFeature = str

LABEL_SEP = "|"
NEIGHBOUR_SEP = ","
_FORBIDDEN = (LABEL_SEP, NEIGHBOUR_SEP)


def wl_relabel(
    labels: list[str], neighbourhoods: list[np.ndarray], depth: int = 1
) -> Counter[WLFeature]:
    """Feature multiset of one graph: depth-0 labels plus depth-1 rooted tokens.

    A node with an empty sampled neighbourhood still yields a depth-1 token
    (its own label followed by the separator and nothing else).
    """
    if depth != 1:
        raise ValueError("only depth 1 is supported")
    if len(labels) != len(neighbourhoods):
        raise ValueError("labels and neighbourhoods must align")
    for label in labels:
        if any(ch in label for ch in _FORBIDDEN):
            raise ValueError(f"label {label!r} contains a reserved separator")
    features: Counter[str] = Counter()
    for i, label in enumerate(labels):
        features[label] += 1
        neigh = sorted(labels[int(j)] for j in neighbourhoods[i])
        features[label + LABEL_SEP + NEIGHBOUR_SEP.join(neigh)] += 1
    return features
