"""Hierarchical manifold spectral clustering for boundary-map segmentation."""

try:
    from ._hmsc import (
        adapted_rand_error,
        baseline,
        cc,
        choose_k,
        generate_synthetic,
        segment,
        variation_of_information,
    )
except ImportError:  # extension placed next to the package during development builds
    from _hmsc import (
        adapted_rand_error,
        baseline,
        cc,
        choose_k,
        generate_synthetic,
        segment,
        variation_of_information,
    )

__all__ = [
    "adapted_rand_error",
    "baseline",
    "cc",
    "choose_k",
    "generate_synthetic",
    "segment",
    "variation_of_information",
]
