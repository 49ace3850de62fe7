"""Skill-diversity measurement and training on similarity-kernel Vendi scores."""

from vendirl._core import (
    VendirlError,
    build_kernel_matrix,
    cholesky_logdet,
    effective_unique_skills,
    evaluate_policy,
    knn_f1,
    shannon_entropy,
    similarity,
    sym_eigenvalues,
    train,
    vendi_score,
    __version__,
)

__all__ = [
    "VendirlError",
    "build_kernel_matrix",
    "cholesky_logdet",
    "effective_unique_skills",
    "evaluate_policy",
    "knn_f1",
    "shannon_entropy",
    "similarity",
    "sym_eigenvalues",
    "train",
    "vendi_score",
    "__version__",
]
