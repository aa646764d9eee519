"""Machine checkers for the block-matrix trace and determinant inequalities.

Each checker builds the residual matrix (for operator inequalities) or the
scalar gap (for trace/determinant inequalities), tests it against a relative
tolerance, and returns a :class:`CheckReport`. Checkers *report* inequality
failures; they only raise when a hypothesis of the statement is violated
(not PSD, not PPT, malformed index sets), so a harness can aggregate
counterexamples instead of aborting.

Tolerance conventions (uniform relative testing across magnitudes):

- residual matrices pass when their minimum eigenvalue is at least
  ``-tol * max(1, ||LHS||_F, ||RHS||_F)`` over the two constituent sides;
- scalar gaps pass when ``RHS - LHS >= -tol * max(1, |LHS|, |RHS|)``.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .blockops import (
    BlockMatrix,
    block_get,
    is_ppt,
    partial_trace_1,
    partial_trace_2,
    partial_transpose,
)
from .densemat import (
    DEFAULT_TOL,
    as_matrix,
    determinant,
    frobenius,
    hermitian_eigenvalues,
    is_psd,
    kron,
    require_square,
)
from .errors import PreconditionError, ShapeError, UsageError


@dataclass(frozen=True)
class IndexSet:
    """A sorted, duplicate-free subset of ``{1, ..., universe}`` (1-based)."""

    universe: int
    members: tuple[int, ...]

    def __post_init__(self):
        if self.universe < 1:
            raise UsageError(f"universe must be positive, got {self.universe}")
        members = tuple(int(i) for i in self.members)
        for prev, cur in zip((0,) + members, members):
            if not 1 <= cur <= self.universe:
                raise UsageError(
                    f"index {cur} outside 1..{self.universe} (indices are 1-based)"
                )
            if cur <= prev:
                raise UsageError(f"members must be strictly increasing, got {members}")
        object.__setattr__(self, "members", members)

    @classmethod
    def of(cls, universe: int, members) -> "IndexSet":
        """Build from any iterable of indices; sorts and deduplicates."""
        return cls(universe, tuple(sorted(set(int(i) for i in members))))

    @classmethod
    def full(cls, universe: int) -> "IndexSet":
        return cls(universe, tuple(range(1, universe + 1)))

    def union(self, other: "IndexSet") -> "IndexSet":
        self._require_same_universe(other)
        return IndexSet.of(self.universe, set(self.members) | set(other.members))

    def intersection(self, other: "IndexSet") -> "IndexSet":
        self._require_same_universe(other)
        return IndexSet.of(self.universe, set(self.members) & set(other.members))

    def _require_same_universe(self, other: "IndexSet") -> None:
        if self.universe != other.universe:
            raise ShapeError(
                f"index sets live in different universes: {self.universe} vs {other.universe}"
            )

    def __len__(self) -> int:
        return len(self.members)


@dataclass(frozen=True)
class CheckReport:
    """Outcome of one inequality check.

    ``residual_min_eig`` is the smallest eigenvalue among the residual
    matrices the check tested (when it tests any); ``scalar_gap`` is the
    smallest of its scalar gaps ``RHS - LHS`` (when it has any). ``details``
    carries every recorded residual eigenvalue, gap, and scale, keyed by
    stable names, so reports serialize deterministically.
    """

    check_name: str
    passed: bool
    residual_min_eig: float | None
    scalar_gap: float | None
    tolerance: float
    shape: tuple[int, int] | int
    seed_info: str | None = None
    details: dict = field(default_factory=dict)


def _require_block(a) -> BlockMatrix:
    if not isinstance(a, BlockMatrix):
        raise UsageError(f"expected a BlockMatrix, got {type(a).__name__}")
    return a


def _require_psd(mat: np.ndarray, tol: float, what: str) -> float:
    ok, min_eig = is_psd(mat, tol)
    if not ok:
        raise PreconditionError(
            f"{what} is not PSD within tol {tol:g}: min eigenvalue {min_eig:.6e}",
            min_eig=min_eig,
        )
    return min_eig


def _require_ppt(a: BlockMatrix, tol: float) -> tuple[float, float]:
    ok, min_a, min_t = is_ppt(a, tol)
    if not ok:
        raise PreconditionError(
            f"input is not PPT within tol {tol:g}: min eigenvalue {min_a:.6e} "
            f"(input), {min_t:.6e} (partial transpose)",
            min_eig=min(min_a, min_t),
        )
    return min_a, min_t


def _residual(lhs: np.ndarray, rhs: np.ndarray, tol: float) -> tuple[float, float, bool]:
    """Test ``lhs >= rhs`` in operator order; returns (min_eig, scale, ok)."""
    min_eig = float(hermitian_eigenvalues(lhs - rhs).values[0])
    scale = max(1.0, frobenius(lhs), frobenius(rhs))
    return min_eig, scale, min_eig >= -tol * scale


def _gap(lhs: float, rhs: float, tol: float) -> tuple[float, float, bool]:
    """Test ``lhs <= rhs`` for scalars; returns (gap, scale, ok)."""
    gap = rhs - lhs
    scale = max(1.0, abs(lhs), abs(rhs))
    return gap, scale, gap >= -tol * scale


def check_copositive_partial_trace(a: BlockMatrix, tol: float = DEFAULT_TOL) -> CheckReport:
    """For PSD ``A``: ``(tr2 A^t) (x) I_n >= A^t`` and ``I_m (x) (tr1 A^t) >= A^t``.

    The partial transpose of a PSD block matrix need not be PSD, yet both
    partial-trace envelopes still dominate it; this is the operator form of
    complete copositivity of ``X -> (tr X) I + X``. The input itself must be
    PSD, but ``A^t`` is allowed to be indefinite.
    """
    a = _require_block(a)
    input_min = _require_psd(a.mat, tol, "input")
    at = partial_transpose(a)
    t1 = partial_trace_1(at)
    t2 = partial_trace_2(at)
    eye_m = np.eye(a.m, dtype=np.complex128)
    eye_n = np.eye(a.n, dtype=np.complex128)
    r2, s2, ok2 = _residual(kron(t2, eye_n), at.mat, tol)
    r1, s1, ok1 = _residual(kron(eye_m, t1), at.mat, tol)
    details = {
        "min_eig_tr2_side": r2,
        "scale_tr2_side": s2,
        "min_eig_tr1_side": r1,
        "scale_tr1_side": s1,
        "input_min_eig": input_min,
    }
    return CheckReport(
        check_name="copositive_partial_trace",
        passed=ok1 and ok2,
        residual_min_eig=min(r1, r2),
        scalar_gap=None,
        tolerance=tol,
        shape=(a.m, a.n),
        details=details,
    )


def check_ppt_reduction(a: BlockMatrix, tol: float = DEFAULT_TOL) -> CheckReport:
    """For PPT ``A``: ``I_m (x) (tr1 A) >= A`` and ``(tr2 A) (x) I_n >= A``.

    This strengthening drops the partial transpose from both sides, but it
    needs the PPT hypothesis; a merely-PSD entangled input can violate it,
    which is what :func:`check_copositive_partial_trace` is for.
    """
    a = _require_block(a)
    min_a, min_t = _require_ppt(a, tol)
    t1 = partial_trace_1(a)
    t2 = partial_trace_2(a)
    eye_m = np.eye(a.m, dtype=np.complex128)
    eye_n = np.eye(a.n, dtype=np.complex128)
    r1, s1, ok1 = _residual(kron(eye_m, t1), a.mat, tol)
    r2, s2, ok2 = _residual(kron(t2, eye_n), a.mat, tol)
    details = {
        "min_eig_tr1_side": r1,
        "scale_tr1_side": s1,
        "min_eig_tr2_side": r2,
        "scale_tr2_side": s2,
        "input_min_eig": min_a,
        "input_tau_min_eig": min_t,
    }
    return CheckReport(
        check_name="ppt_reduction",
        passed=ok1 and ok2,
        residual_min_eig=min(r1, r2),
        scalar_gap=None,
        tolerance=tol,
        shape=(a.m, a.n),
        details=details,
    )


def check_combined_reduction(a: BlockMatrix, tol: float = DEFAULT_TOL) -> CheckReport:
    """For PPT ``A``: ``I_m (x) tr1 A + (tr2 A) (x) I_n >= 2 A`` and the same for ``A^t``."""
    a = _require_block(a)
    min_a, min_t = _require_ppt(a, tol)
    eye_m = np.eye(a.m, dtype=np.complex128)
    eye_n = np.eye(a.n, dtype=np.complex128)
    lhs = kron(eye_m, partial_trace_1(a)) + kron(partial_trace_2(a), eye_n)
    r_plain, s_plain, ok_plain = _residual(lhs, 2.0 * a.mat, tol)
    at = partial_transpose(a)
    lhs_t = kron(eye_m, partial_trace_1(at)) + kron(partial_trace_2(at), eye_n)
    r_tau, s_tau, ok_tau = _residual(lhs_t, 2.0 * at.mat, tol)
    details = {
        "min_eig_plain": r_plain,
        "scale_plain": s_plain,
        "min_eig_tau": r_tau,
        "scale_tau": s_tau,
        "input_min_eig": min_a,
        "input_tau_min_eig": min_t,
    }
    return CheckReport(
        check_name="combined_reduction",
        passed=ok_plain and ok_tau,
        residual_min_eig=min(r_plain, r_tau),
        scalar_gap=None,
        tolerance=tol,
        shape=(a.m, a.n),
        details=details,
    )


def check_upper_bound(a: BlockMatrix, tol: float = DEFAULT_TOL) -> CheckReport:
    """For PSD ``A``: ``I_m (x) tr1 A + (tr2 A) (x) I_n <= A + (tr A) I``.

    The ``m = 2`` case has a direct block proof; larger ``m`` follows from a
    known trace inequality, and the report flags which regime the input is in
    (``details["base_case_m2"]``).
    """
    a = _require_block(a)
    input_min = _require_psd(a.mat, tol, "input")
    eye_m = np.eye(a.m, dtype=np.complex128)
    eye_n = np.eye(a.n, dtype=np.complex128)
    eye_full = np.eye(a.dim, dtype=np.complex128)
    tr_a = float(np.trace(a.mat).real)
    big = a.mat + tr_a * eye_full
    small = kron(eye_m, partial_trace_1(a)) + kron(partial_trace_2(a), eye_n)
    r, s, ok = _residual(big, small, tol)
    details = {
        "min_eig_upper": r,
        "scale_upper": s,
        "base_case_m2": a.m == 2,
        "input_min_eig": input_min,
    }
    return CheckReport(
        check_name="upper_bound",
        passed=ok,
        residual_min_eig=r,
        scalar_gap=None,
        tolerance=tol,
        shape=(a.m, a.n),
        details=details,
    )


def check_phi_lower(a: BlockMatrix, tol: float = DEFAULT_TOL) -> CheckReport:
    """For PSD ``A``: ``(tr2 A^t) (x) I_n >= -A^t`` and ``I_m (x) tr1 A^t >= -A^t``.

    The two-sided companion of :func:`check_copositive_partial_trace`: the
    partial-trace envelopes dominate ``A^t`` in absolute value, which is the
    operator form of complete copositivity of ``X -> (tr X) I - X``.
    """
    a = _require_block(a)
    input_min = _require_psd(a.mat, tol, "input")
    at = partial_transpose(a)
    t1 = partial_trace_1(at)
    t2 = partial_trace_2(at)
    eye_m = np.eye(a.m, dtype=np.complex128)
    eye_n = np.eye(a.n, dtype=np.complex128)
    r2, s2, ok2 = _residual(kron(t2, eye_n), -at.mat, tol)
    r1, s1, ok1 = _residual(kron(eye_m, t1), -at.mat, tol)
    details = {
        "min_eig_tr2_side": r2,
        "scale_tr2_side": s2,
        "min_eig_tr1_side": r1,
        "scale_tr1_side": s1,
        "input_min_eig": input_min,
    }
    return CheckReport(
        check_name="phi_lower",
        passed=ok1 and ok2,
        residual_min_eig=min(r1, r2),
        scalar_gap=None,
        tolerance=tol,
        shape=(a.m, a.n),
        details=details,
    )


def check_block2(a2: BlockMatrix, tol: float = DEFAULT_TOL) -> CheckReport:
    """For PSD ``[[A, B], [B*, C]]`` (blocks ``n x n``): three derived facts.

    Builds ``G = [[(tr C)A - BB*, (tr B*)B - AC], [(tr B)B* - CA, (tr A)C - B*B]]``
    and PSD-tests it, then evaluates the two scalar trace inequalities that
    follow by taking traces:

    - eq8: ``tr(AC) + tr(B*B) <= (tr A)(tr C) + |tr B|^2``
    - eq9: ``tr(B*B) - tr(AC) <= (tr A)(tr C) - |tr B|^2``
    """
    a2 = _require_block(a2)
    if a2.m != 2:
        raise UsageError(f"check_block2 requires block shape m=2, got m={a2.m}")
    input_min = _require_psd(a2.mat, tol, "input")
    blk_a = block_get(a2, 1, 1)
    blk_b = block_get(a2, 1, 2)
    blk_c = block_get(a2, 2, 2)
    tr_a = float(np.trace(blk_a).real)
    tr_c = float(np.trace(blk_c).real)
    tr_b = complex(np.trace(blk_b))
    bbs = blk_b @ blk_b.conj().T
    bsb = blk_b.conj().T @ blk_b
    ac = blk_a @ blk_c
    ca = blk_c @ blk_a
    pos = np.block(
        [[tr_c * blk_a, np.conj(tr_b) * blk_b], [tr_b * blk_b.conj().T, tr_a * blk_c]]
    )
    neg = np.block([[bbs, ac], [ca, bsb]])
    g = pos - neg
    min_eig_g = float(hermitian_eigenvalues(g).values[0])
    scale_g = max(1.0, frobenius(pos), frobenius(neg))
    ok_g = min_eig_g >= -tol * scale_g

    tr_ac = float(np.trace(ac).real)
    tr_bsb = float(np.trace(bsb).real)
    gap8, s8, ok8 = _gap(tr_ac + tr_bsb, tr_a * tr_c + abs(tr_b) ** 2, tol)
    gap9, s9, ok9 = _gap(tr_bsb - tr_ac, tr_a * tr_c - abs(tr_b) ** 2, tol)
    details = {
        "min_eig_g": min_eig_g,
        "scale_g": scale_g,
        "gap_eq8": gap8,
        "scale_eq8": s8,
        "gap_eq9": gap9,
        "scale_eq9": s9,
        "input_min_eig": input_min,
    }
    return CheckReport(
        check_name="block2",
        passed=ok_g and ok8 and ok9,
        residual_min_eig=min_eig_g,
        scalar_gap=min(gap8, gap9),
        tolerance=tol,
        shape=(2, a2.n),
        details=details,
    )


def submatrix(a, alpha: IndexSet, beta: IndexSet) -> np.ndarray:
    """``A[alpha, beta]``: rows indexed by ``alpha``, columns by ``beta``."""
    mat = as_matrix(a)
    n = require_square(mat)
    if alpha.universe != n or beta.universe != n:
        raise ShapeError(
            f"index-set universes ({alpha.universe}, {beta.universe}) do not match "
            f"matrix dimension {n}"
        )
    rows = np.array([i - 1 for i in alpha.members], dtype=np.intp)
    cols = np.array([j - 1 for j in beta.members], dtype=np.intp)
    return mat[np.ix_(rows, cols)]


def overlap_embedding(a, alpha: IndexSet, beta: IndexSet) -> np.ndarray:
    """The ``2|alpha| x 2|alpha|`` matrix ``[[A[a], A[a,b]], [A[a,b]*, A[b]]]``.

    For PSD ``A`` this is PSD for *any* pair with ``|alpha| = |beta|``,
    including overlapping index sets: it is a selection congruence ``S A S*``
    up to a zero-padded factor. It is the bridge from submatrix trace
    inequalities to the two-block checker :func:`check_block2`.
    """
    if len(alpha) != len(beta):
        raise UsageError(
            f"index sets must have equal cardinality, got {len(alpha)} and {len(beta)}"
        )
    aa = submatrix(a, alpha, alpha)
    ab = submatrix(a, alpha, beta)
    bb = submatrix(a, beta, beta)
    return np.block([[aa, ab], [ab.conj().T, bb]])


def check_trace_submatrix(
    a, alpha: IndexSet, beta: IndexSet, tol: float = DEFAULT_TOL
) -> CheckReport:
    """For PSD ``A`` and ``|alpha| = |beta| >= 1``: two submatrix trace bounds.

    With ``x = tr(A[a]A[b])``, ``y = tr(A[a,b]* A[a,b])``,
    ``R+ = (tr A[a])(tr A[b]) + |tr A[a,b]|^2`` and
    ``R- = (tr A[a])(tr A[b]) - |tr A[a,b]|^2``:

    - thm8: ``x + y <= R+``
    - thm9: ``|x - y| <= R-``

    ``details["gap_eq9_oneside"]`` records the one-sided gap
    ``R- - (y - x)``, which is the quantity the two-block route
    (:func:`check_block2` on :func:`overlap_embedding`) reproduces directly.
    """
    if len(alpha) != len(beta):
        raise UsageError(
            f"index sets must have equal cardinality, got {len(alpha)} and {len(beta)}"
        )
    if len(alpha) < 1:
        raise UsageError("index sets must be nonempty")
    mat = as_matrix(a)
    n = require_square(mat)
    input_min = _require_psd(mat, tol, "input")
    aa = submatrix(mat, alpha, alpha)
    ab = submatrix(mat, alpha, beta)
    bb = submatrix(mat, beta, beta)
    x = float(np.trace(aa @ bb).real)
    y = float(np.trace(ab.conj().T @ ab).real)
    t_aa = float(np.trace(aa).real)
    t_bb = float(np.trace(bb).real)
    t_ab = complex(np.trace(ab))
    r_plus = t_aa * t_bb + abs(t_ab) ** 2
    r_minus = t_aa * t_bb - abs(t_ab) ** 2
    gap8, s8, ok8 = _gap(x + y, r_plus, tol)
    gap9, s9, ok9 = _gap(abs(x - y), r_minus, tol)
    details = {
        "gap_thm8": gap8,
        "scale_thm8": s8,
        "gap_thm9": gap9,
        "scale_thm9": s9,
        "gap_eq9_oneside": r_minus - (y - x),
        "cardinality": len(alpha),
        "alpha": list(alpha.members),
        "beta": list(beta.members),
        "input_min_eig": input_min,
    }
    return CheckReport(
        check_name="trace_submatrix",
        passed=ok8 and ok9,
        residual_min_eig=None,
        scalar_gap=min(gap8, gap9),
        tolerance=tol,
        shape=n,
        details=details,
    )


def check_det_submatrix(
    a, alpha: IndexSet, beta: IndexSet, tol: float = DEFAULT_TOL
) -> CheckReport:
    """For PSD ``A``, ``|alpha| = |beta|``, ``alpha != beta``: determinant bound.

    ``det A[a u b] * det A[a n b] <= det A[a] * det A[b] - |det A[a, b]|^2``,
    with ``det`` of the empty intersection taken as 1. When ``|alpha \\ beta|``
    is 1 the two sides agree exactly (a Desnanot-Jacobi/Sylvester identity);
    ``details["desnanot_case"]`` flags those pairs. The stated form fails
    trivially at ``alpha = beta`` (the right side collapses to 0), so that
    case is rejected as a usage error.
    """
    if len(alpha) != len(beta):
        raise UsageError(
            f"index sets must have equal cardinality, got {len(alpha)} and {len(beta)}"
        )
    if alpha.universe == beta.universe and alpha.members == beta.members:
        raise UsageError("alpha and beta must differ for the determinant bound")
    mat = as_matrix(a)
    n = require_square(mat)
    input_min = _require_psd(mat, tol, "input")
    det_a = determinant(submatrix(mat, alpha, alpha)).real
    det_b = determinant(submatrix(mat, beta, beta)).real
    det_ab = determinant(submatrix(mat, alpha, beta))
    union = alpha.union(beta)
    inter = alpha.intersection(beta)
    det_union = determinant(submatrix(mat, union, union)).real
    det_inter = determinant(submatrix(mat, inter, inter)).real
    lhs = det_union * det_inter
    rhs = det_a * det_b - abs(det_ab) ** 2
    gap, scale, ok = _gap(lhs, rhs, tol)
    details = {
        "gap": gap,
        "scale": scale,
        "det_alpha": det_a,
        "det_beta": det_b,
        "abs_det_cross_sq": abs(det_ab) ** 2,
        "det_union": det_union,
        "det_intersection": det_inter,
        "desnanot_case": len(set(alpha.members) - set(beta.members)) == 1,
        "alpha": list(alpha.members),
        "beta": list(beta.members),
        "input_min_eig": input_min,
    }
    return CheckReport(
        check_name="det_submatrix",
        passed=ok,
        residual_min_eig=None,
        scalar_gap=gap,
        tolerance=tol,
        shape=n,
        details=details,
    )
