"""Deterministic, seed-addressable generators of PSD / separable / PPT inputs.

Streams are counter-based (Philox) and keyed by a 64-bit seed, so identical
arguments reproduce identical matrices on every run regardless of call order.
Child seeds for composite draws are derived by hashing ``(seed, labels...)``,
which keeps trials independent and parallel-safe.

Complex Gaussians are produced by Box-Muller on the uniform stream rather
than the generator's built-in normal sampler, so the mapping from uniforms
to entries is pinned by this module and not by the numpy version.
"""

from __future__ import annotations

import hashlib
import math
from dataclasses import dataclass

import numpy as np

from .blockops import BlockMatrix, is_ppt
from .densemat import is_psd, kron
from .errors import UsageError

MAX_SEED = 2**64 - 1
DEFAULT_PPT_ATTEMPTS = 50
_FALLBACK_TERMS = 3


def _check_seed(seed: int) -> int:
    seed = int(seed)
    if not 0 <= seed <= MAX_SEED:
        raise UsageError(f"seed must be a 64-bit unsigned integer, got {seed}")
    return seed


def derive_seed(seed: int, *parts) -> int:
    """Derive a child seed from ``seed`` and a path of labels.

    Labels may be strings or integers. The derivation is a keyed hash, so
    distinct paths give statistically independent streams and the result is
    stable across platforms and Python versions.
    """
    h = hashlib.blake2b(digest_size=8)
    h.update(_check_seed(seed).to_bytes(8, "little"))
    for part in parts:
        if isinstance(part, str):
            raw = part.encode("utf-8")
            h.update(b"s" + len(raw).to_bytes(4, "little") + raw)
        elif isinstance(part, (int, np.integer)):
            h.update(b"i" + int(part).to_bytes(8, "little", signed=True))
        else:
            raise TypeError(f"seed path labels must be str or int, got {type(part)!r}")
    return int.from_bytes(h.digest(), "little")


def complex_gaussians(rows: int, cols: int, seed: int) -> np.ndarray:
    """A ``rows x cols`` matrix of i.i.d. complex Gaussians (N(0,1) parts)."""
    gen = np.random.Generator(np.random.Philox(key=_check_seed(seed)))
    count = rows * cols
    u = gen.random(2 * count)
    # 1 - u lies in (0, 1], keeping the log finite
    radii = np.sqrt(-2.0 * np.log1p(-u[:count]))
    angles = (2.0 * math.pi) * u[count:]
    z = radii * np.cos(angles) + 1j * (radii * np.sin(angles))
    return z.reshape(rows, cols)


def random_psd(dim: int, rank: int, seed: int) -> np.ndarray:
    """A random ``dim x dim`` PSD matrix of the given rank.

    Built as ``G* G`` from a ``rank x dim`` complex Gaussian ``G`` (a Gram
    construction, so positivity holds by design), then symmetrized exactly.
    """
    if dim < 1:
        raise UsageError(f"dim must be positive, got {dim}")
    if not 1 <= rank <= dim:
        raise UsageError(f"rank must satisfy 1 <= rank <= dim, got rank={rank}, dim={dim}")
    g = complex_gaussians(rank, dim, seed)
    a = g.conj().T @ g
    a = (a + a.conj().T) / 2.0
    assert is_psd(a)[0], "Gram construction failed its own PSD self-check"
    return a


def random_separable(m: int, n: int, terms: int, seed: int) -> BlockMatrix:
    """A sum of Kronecker products of independent PSD factors.

    The output is PSD and stays PSD under partial transpose (each term maps
    to ``kron(P^T, Q)``), so it is PPT by construction.
    """
    if terms < 1:
        raise UsageError(f"terms must be positive, got {terms}")
    total = np.zeros((m * n, m * n), dtype=np.complex128)
    for t in range(terms):
        p = random_psd(m, m, derive_seed(seed, "separable-left", t))
        q = random_psd(n, n, derive_seed(seed, "separable-right", t))
        total += kron(p, q)
    out = BlockMatrix(m, n, total)
    assert is_ppt(out)[0], "separable construction failed its own PPT self-check"
    return out


def random_ppt(
    m: int, n: int, seed: int, max_attempts: int = DEFAULT_PPT_ATTEMPTS
) -> tuple[BlockMatrix, str]:
    """Rejection-sample a PPT block matrix; fall back to a separable one.

    Draws full-rank PSD matrices and keeps the first that passes
    :func:`blockineq.blockops.is_ppt`. After ``max_attempts`` rejections the
    output comes from :func:`random_separable` instead, which is PPT by
    construction, so an output is always produced. Returns the matrix and
    the path that produced it (``"rejection"`` or ``"separable"``).
    """
    if max_attempts < 1:
        raise UsageError(f"max_attempts must be positive, got {max_attempts}")
    d = m * n
    for attempt in range(max_attempts):
        candidate = BlockMatrix(m, n, random_psd(d, d, derive_seed(seed, "ppt-attempt", attempt)))
        ok, _, _ = is_ppt(candidate)
        if ok:
            return candidate, "rejection"
    return random_separable(m, n, _FALLBACK_TERMS, derive_seed(seed, "ppt-fallback")), "separable"


GEN_KINDS = ("gram_psd", "low_rank", "separable", "ppt_rejection")


@dataclass(frozen=True)
class GenSpec:
    """A fully-addressed random draw: identical specs give identical matrices."""

    kind: str
    m: int
    n: int
    seed: int
    rank_or_terms: int | None = None

    def __post_init__(self):
        if self.kind not in GEN_KINDS:
            raise UsageError(f"unknown generator kind {self.kind!r}; expected one of {GEN_KINDS}")
        if self.m < 1 or self.n < 1:
            raise UsageError(f"block shape must be positive, got ({self.m}, {self.n})")
        _check_seed(self.seed)


def generate(spec: GenSpec) -> BlockMatrix:
    """Materialize one draw for a :class:`GenSpec`."""
    dim = spec.m * spec.n
    if spec.kind == "gram_psd":
        rank = dim if spec.rank_or_terms is None else spec.rank_or_terms
        return BlockMatrix(spec.m, spec.n, random_psd(dim, rank, spec.seed))
    if spec.kind == "low_rank":
        rank = math.ceil(dim / 2) if spec.rank_or_terms is None else spec.rank_or_terms
        return BlockMatrix(spec.m, spec.n, random_psd(dim, rank, spec.seed))
    if spec.kind == "separable":
        terms = _FALLBACK_TERMS if spec.rank_or_terms is None else spec.rank_or_terms
        return random_separable(spec.m, spec.n, terms, spec.seed)
    block, _ = random_ppt(spec.m, spec.n, spec.seed)
    return block
