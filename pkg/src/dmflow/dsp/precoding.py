#!/usr/bin/env python
"""
Zero-forcing precoding toward the Bobs and the AN-DM baseline transmitter.

``P = H (H^H H)^{-1}`` so that ``H^H P = I``: Bob ``k`` receives only stream ``k``.
The pseudoinverse is obtained from a Cholesky factorization of the ``K x K`` Gram
matrix; its diagonal gives a cheap conditioning estimate used to reject Bob
geometries that zero forcing cannot separate.
"""

import logging
from dataclasses import dataclass

import numpy as np
from scipy.linalg import LinAlgError, cho_factor, cho_solve

from dmflow.utils.constants import DEFAULT_COND_LIMIT
from dmflow.utils.errors import DegenerateBaselineError, IllConditionedGeometryError

logger = logging.getLogger(__name__)

UNIT_NORM_TOLERANCE = 1e-6


@dataclass
class Precoder:
    """
    Zero-forcing precoder.

    Parameters
    ------------
    p_matrix : numpy.ndarray
        ``(2N+1)L x K`` precoding matrix ``P``.
    epsilon : float
        Power normalization factor ``1 / tr(P P^H)``.
    gram_condition : float
        Conditioning estimate of ``H^H H``.
    h_matrix : numpy.ndarray
        The steering matrix the precoder was built from.
    """

    p_matrix: np.ndarray
    epsilon: float
    gram_condition: float
    h_matrix: np.ndarray

    @property
    def n_users(self) -> int:
        return self.p_matrix.shape[1]

    @property
    def dimension(self) -> int:
        return self.p_matrix.shape[0]


@dataclass
class AnDmConfig:
    """Amplitude split of the AN-DM baseline: ``beta1`` on the signal, the rest on AN."""

    beta1: float = 0.9

    def __post_init__(self):
        if not 0 < self.beta1 < 1:
            raise ValueError(f"beta1 must lie strictly between 0 and 1, got {self.beta1}")


def _closest_column_pair(h_matrix: np.ndarray) -> tuple[int, int]:
    n_users = h_matrix.shape[1]
    if n_users < 2:
        return (0, 0)
    norms = np.linalg.norm(h_matrix, axis=0)
    similarity = np.abs(h_matrix.conj().T @ h_matrix) / np.outer(norms, norms)
    np.fill_diagonal(similarity, -np.inf)
    i, j = np.unravel_index(np.argmax(similarity), similarity.shape)
    return (int(min(i, j)), int(max(i, j)))


def build_precoder(h_matrix, cond_limit: float = DEFAULT_COND_LIMIT) -> Precoder:
    """
    Build the zero-forcing precoder for the Bob steering matrix.

    Parameters
    ------------
    h_matrix : array_like
        ``(2N+1)L x K`` steering matrix with unit-norm columns, ``K <= (2N+1)L``.

    cond_limit : float
        Largest accepted conditioning estimate of ``H^H H``.

    Returns
    ------------
    Precoder

    Raises
    ------------
    IllConditionedGeometryError
        When two Bobs are too close for zero forcing to tell them apart.
    """
    h_matrix = np.asarray(h_matrix, dtype=complex)
    if h_matrix.ndim != 2 or h_matrix.shape[1] < 1:
        raise ValueError(f"h_matrix must be a 2-D matrix with at least one column, got shape {h_matrix.shape}")
    dimension, n_users = h_matrix.shape
    if n_users > dimension:
        raise ValueError(f"Cannot zero-force {n_users} users with a {dimension}-dimensional array")
    norms = np.linalg.norm(h_matrix, axis=0)
    if np.max(np.abs(norms - 1.0)) > UNIT_NORM_TOLERANCE:
        raise ValueError(f"Steering matrix columns must have unit norm, got norms {norms}")

    gram = h_matrix.conj().T @ h_matrix
    try:
        factor = cho_factor(gram, lower=True)
        diagonal = np.abs(np.diag(factor[0]))
        condition = float((diagonal.max() / diagonal.min()) ** 2) if diagonal.min() > 0 else np.inf
    except LinAlgError:
        factor = None
        condition = np.inf

    if condition > cond_limit:
        i, j = _closest_column_pair(h_matrix)
        raise IllConditionedGeometryError(
            f"Bob {i + 1} and Bob {j + 1} steering vectors are nearly parallel "
            f"(Gram condition {condition:.3e} exceeds {cond_limit:.1e}); move them apart",
            column_pair=(i, j),
            condition=condition,
        )

    p_matrix = h_matrix @ cho_solve(factor, np.eye(n_users, dtype=complex))
    epsilon = 1.0 / float(np.sum(np.abs(p_matrix) ** 2))
    logger.debug(f"Built ZF precoder for {n_users} Bobs, Gram condition {condition:.3e}")
    return Precoder(p_matrix=p_matrix, epsilon=epsilon, gram_condition=condition, h_matrix=h_matrix)


def null_space_projector(pre: Precoder) -> np.ndarray:
    """``I - H (H^H H)^{-1} H^H``, the projector onto the space no Bob can see."""
    return np.eye(pre.dimension) - pre.p_matrix @ pre.h_matrix.conj().T


def _check_users(pre: Precoder, u: np.ndarray, name: str):
    if u.ndim == 0 or u.shape[-1] != pre.n_users:
        raise ValueError(f"{name} must carry {pre.n_users} entries on its last axis, got shape {u.shape}")


def transmit_cooperative(pre: Precoder, u, ps: float) -> np.ndarray:
    """Radiated vector(s) ``x = sqrt(Ps) P u`` for each ``K``-vector on the last axis of ``u``."""
    u = np.asarray(u, dtype=complex)
    _check_users(pre, u, "u")
    if ps < 0:
        raise ValueError(f"ps must be non-negative, got {ps}")
    return np.sqrt(ps) * (u @ pre.p_matrix.T)


def draw_null_space_noise(pre: Precoder, shape: tuple, rng: np.random.Generator) -> np.ndarray:
    """Unit-norm artificial noise ``w = Pi g / ||Pi g||`` for every index of ``shape``."""
    if pre.n_users >= pre.dimension:
        raise DegenerateBaselineError(
            f"{pre.n_users} Bobs fill the whole {pre.dimension}-dimensional array space; no room for AN"
        )
    projector = null_space_projector(pre)
    size = tuple(shape) + (pre.dimension,)
    g = rng.standard_normal(size) + 1j * rng.standard_normal(size)
    projected = g @ projector.T
    return projected / np.linalg.norm(projected, axis=-1, keepdims=True)


def transmit_an_baseline(pre: Precoder, s, ps: float, cfg: AnDmConfig, rng: np.random.Generator) -> np.ndarray:
    """
    AN-DM transmission ``sqrt(beta1^2 Ps) P s + sqrt((1 - beta1^2) Ps) w``.

    ``w`` is redrawn for every symbol vector and lies in the null space of all Bob
    steering vectors, so each Bob receives ``beta1 sqrt(Ps) s_k`` untouched by AN.
    """
    s = np.asarray(s, dtype=complex)
    _check_users(pre, s, "s")
    noise = draw_null_space_noise(pre, s.shape[:-1], rng)
    signal = transmit_cooperative(pre, s, cfg.beta1**2 * ps)
    return signal + np.sqrt((1.0 - cfg.beta1**2) * ps) * noise
