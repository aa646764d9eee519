"""Seeded verification suites: deterministic batches of inequality checks.

Each suite draws its inputs from child seeds derived as
``derive_seed(seed, suite, shape..., trial)``, so any single check can be
replayed from the provenance string in its report without re-running the
batch. Reports are assembled in canonical suite order and trial order; the
wall-clock duration is the only nondeterministic field in a serialized run.
"""

from __future__ import annotations

import itertools
import json
import math
import time
from dataclasses import dataclass, replace
from functools import lru_cache

from .blockops import BlockMatrix
from .densemat import DEFAULT_TOL
from .errors import UsageError
from .inequalities import (
    CheckReport,
    IndexSet,
    check_block2,
    check_combined_reduction,
    check_copositive_partial_trace,
    check_det_submatrix,
    check_phi_lower,
    check_ppt_reduction,
    check_trace_submatrix,
    check_upper_bound,
)
from .maps import (
    BUILTIN_MAPS,
    LinearMapRep,
    builtin_map,
    certify_completely_copositive,
    certify_completely_positive,
    choi_matrix,
)
from .matio import load, to_doc
from .randgen import MAX_SEED, derive_seed, random_ppt, random_psd, random_separable

SUITE_NAMES = (
    "theorem2",
    "corollary3",
    "combined",
    "upper_bound",
    "corollary6",
    "block2",
    "thm8_9",
    "eqlin",
    "choi_certs",
)
_BLOCK_SUITES = frozenset({"theorem2", "corollary3", "combined", "upper_bound", "corollary6", "block2"})
_SUBMATRIX_SUITES = frozenset({"thm8_9", "eqlin"})

DEFAULT_SHAPES = ((2, 2), (2, 3), (3, 2), (3, 3))
DEFAULT_DIMS = (4, 5)
DEFAULT_TRIALS = 1000
# Rejection attempts per PPT draw inside suites; misses fall back to a
# separable (hence PPT) input, so coverage is kept while bounding runtime.
_SUITE_PPT_ATTEMPTS = 2
_CHOI_CERT_DIMS = (2, 3, 4)

# name -> (completely positive?, completely copositive?)
EXPECTED_CERTIFICATION = {
    "phi": (True, True),
    "psi": (False, True),
    "identity": (True, False),
    "transpose": (False, True),
    "trace_map": (True, True),
}


def expand_suites(names) -> tuple[str, ...]:
    """Resolve suite names (including ``all``) to canonical order; no duplicates."""
    requested = set()
    for name in names:
        if name == "all":
            requested.update(SUITE_NAMES)
        elif name in SUITE_NAMES:
            requested.add(name)
        else:
            raise UsageError(
                f"unknown suite {name!r}; expected one of {('all',) + SUITE_NAMES}"
            )
    if not requested:
        raise UsageError("no suites requested")
    return tuple(s for s in SUITE_NAMES if s in requested)


@dataclass(frozen=True)
class SuiteConfig:
    """Full description of one verification run; equal configs give equal reports."""

    suites: tuple[str, ...] = ("all",)
    trials: int = DEFAULT_TRIALS
    shapes: tuple[tuple[int, int], ...] = DEFAULT_SHAPES
    dims: tuple[int, ...] = DEFAULT_DIMS
    seed: int = 0
    tol: float = DEFAULT_TOL
    output_format: str = "text"

    def __post_init__(self):
        object.__setattr__(self, "suites", tuple(self.suites))
        expand_suites(self.suites)
        if self.trials < 1:
            raise UsageError(f"trials must be >= 1, got {self.trials}")
        shapes = tuple((int(m), int(n)) for m, n in self.shapes)
        for m, n in shapes:
            if m < 1 or n < 1:
                raise UsageError(f"shapes must be pairs of positive integers, got ({m}, {n})")
        object.__setattr__(self, "shapes", shapes)
        dims = tuple(int(d) for d in self.dims)
        for d in dims:
            if d < 1:
                raise UsageError(f"dims must be positive integers, got {d}")
        object.__setattr__(self, "dims", dims)
        if not 0 <= int(self.seed) <= MAX_SEED:
            raise UsageError(f"seed must be a 64-bit unsigned integer, got {self.seed}")
        if not self.tol > 0:
            raise UsageError(f"tol must be positive, got {self.tol}")
        if self.output_format not in ("text", "json"):
            raise UsageError(f"output format must be 'text' or 'json', got {self.output_format!r}")


@dataclass(frozen=True)
class Counterexample:
    """A failing check plus the exact input that produced it, ready to replay."""

    suite: str
    trial: int
    report: CheckReport
    input_doc: dict


@dataclass
class RunReport:
    """Everything one :func:`run_suite` call produced."""

    config: SuiteConfig
    reports: dict[str, list[CheckReport]]
    counterexamples: list[Counterexample]
    duration_seconds: float

    @property
    def checks(self) -> int:
        return sum(len(reps) for reps in self.reports.values())

    @property
    def failed(self) -> int:
        return sum(1 for reps in self.reports.values() for r in reps if not r.passed)

    @property
    def passed(self) -> bool:
        return self.failed == 0

    def to_doc(self) -> dict:
        cfg = self.config
        suites_doc = {}
        for name, reps in self.reports.items():
            residuals = [r.residual_min_eig for r in reps if r.residual_min_eig is not None]
            gaps = [r.scalar_gap for r in reps if r.scalar_gap is not None]
            suites_doc[name] = {
                "checks": len(reps),
                "failed": sum(1 for r in reps if not r.passed),
                "passed": all(r.passed for r in reps),
                "worst_residual_min_eig": min(residuals) if residuals else None,
                "worst_scalar_gap": min(gaps) if gaps else None,
                "reports": [report_to_doc(r) for r in reps],
            }
        return {
            "config": {
                "suites": list(cfg.suites),
                "trials": cfg.trials,
                "shapes": [list(s) for s in cfg.shapes],
                "dims": list(cfg.dims),
                "seed": cfg.seed,
                "tol": cfg.tol,
                "output_format": cfg.output_format,
            },
            "suites": suites_doc,
            "counterexamples": [
                {
                    "suite": ce.suite,
                    "trial": ce.trial,
                    "check": report_to_doc(ce.report),
                    "input": ce.input_doc,
                }
                for ce in self.counterexamples
            ],
            "summary": {"checks": self.checks, "failed": self.failed, "passed": self.passed},
            "duration_seconds": self.duration_seconds,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_doc(), allow_nan=False, separators=(",", ":"))

    def to_text(self) -> str:
        lines = [
            "blockineq verification report",
            f"seed={self.config.seed} tol={self.config.tol:g} trials={self.config.trials}",
        ]
        for name, reps in self.reports.items():
            residuals = [r.residual_min_eig for r in reps if r.residual_min_eig is not None]
            gaps = [r.scalar_gap for r in reps if r.scalar_gap is not None]
            worst_r = f"{min(residuals):.6e}" if residuals else "n/a"
            worst_g = f"{min(gaps):.6e}" if gaps else "n/a"
            failed = sum(1 for r in reps if not r.passed)
            lines.append(
                f"suite {name}: checks={len(reps)} failed={failed} "
                f"worst_residual_min_eig={worst_r} worst_scalar_gap={worst_g}"
            )
        lines.append(f"counterexamples: {len(self.counterexamples)}")
        lines.append(
            f"summary: checks={self.checks} failed={self.failed} "
            f"passed={'yes' if self.passed else 'no'}"
        )
        lines.append(f"duration_seconds={self.duration_seconds:.3f}")
        return "\n".join(lines)


def report_to_doc(rep: CheckReport) -> dict:
    shape = list(rep.shape) if isinstance(rep.shape, tuple) else rep.shape
    return {
        "check_name": rep.check_name,
        "passed": rep.passed,
        "residual_min_eig": rep.residual_min_eig,
        "scalar_gap": rep.scalar_gap,
        "tolerance": rep.tolerance,
        "shape": shape,
        "seed_info": rep.seed_info,
        "details": rep.details,
    }


class _Recorder:
    def __init__(self, suite_names):
        self.reports = {name: [] for name in suite_names}
        self.counterexamples = []

    def report(self, suite, rep, matrix=None, trial=None):
        self.reports[suite].append(rep)
        if not rep.passed and matrix is not None:
            self.counterexample(suite, trial, rep, matrix)

    def counterexample(self, suite, trial, rep, matrix):
        self.counterexamples.append(
            Counterexample(suite=suite, trial=int(trial), report=rep, input_doc=to_doc(matrix))
        )


def entangled_pattern(d: int) -> BlockMatrix:
    """The rank-one projector pattern ``sum_{i,j} E_{i,j} (x) E_{i,j}``.

    PSD with eigenvalues ``{d, 0, ...}``, but its partial transpose is the
    swap pattern with eigenvalue -1, so it is the canonical non-PPT PSD input.
    Equals the Choi matrix of the identity map on ``M_d``.
    """
    return choi_matrix(builtin_map("identity", d), d)


def _rank_for_trial(dim: int, trial: int) -> int:
    """Deterministic rank schedule: full rank, half rank, and rank-1 draws."""
    if dim == 1:
        return 1
    if trial % 4 == 3:
        return 1
    if trial % 2 == 1:
        return math.ceil(dim / 2)
    return dim


@lru_cache(maxsize=32)
def _trace_pairs(n: int) -> tuple:
    """All (alpha, beta) with |alpha| = |beta| >= 1, including alpha = beta."""
    pairs = []
    for k in range(1, n + 1):
        combos = [IndexSet(n, c) for c in itertools.combinations(range(1, n + 1), k)]
        for al in combos:
            for be in combos:
                pairs.append((al, be))
    return tuple(pairs)


@lru_cache(maxsize=32)
def _det_pairs(n: int) -> tuple:
    """All (alpha, beta) with |alpha| = |beta| >= 1 and alpha != beta."""
    return tuple(
        (al, be) for al, be in _trace_pairs(n) if al.members != be.members
    )


def _gram_inputs(cfg: SuiteConfig, suite: str, include_pattern: bool):
    """Yield (trial, BlockMatrix, provenance) over shapes x trials."""
    for m, n in cfg.shapes:
        for t in range(cfg.trials):
            if include_pattern and m == n and m >= 2 and t == 0:
                yield t, entangled_pattern(m), f"fixed entangled pattern d={m}"
                continue
            dim = m * n
            rank = _rank_for_trial(dim, t)
            s = derive_seed(cfg.seed, suite, m, n, t)
            yield (
                t,
                BlockMatrix(m, n, random_psd(dim, rank, s)),
                f"random_psd(dim={dim}, rank={rank}, seed={s})",
            )


def _ppt_inputs(cfg: SuiteConfig, suite: str):
    """Yield (trial, BlockMatrix, provenance): separable and rejection-sampled PPT."""
    for m, n in cfg.shapes:
        for t in range(cfg.trials):
            s = derive_seed(cfg.seed, suite, m, n, t)
            if t % 2 == 0:
                terms = 1 + (t // 2) % 3
                yield (
                    t,
                    random_separable(m, n, terms, s),
                    f"random_separable(m={m}, n={n}, terms={terms}, seed={s})",
                )
            else:
                a, path = random_ppt(m, n, s, max_attempts=_SUITE_PPT_ATTEMPTS)
                yield (
                    t,
                    a,
                    f"random_ppt(m={m}, n={n}, seed={s}, "
                    f"max_attempts={_SUITE_PPT_ATTEMPTS}) via {path}",
                )


def _run_theorem2(cfg, rec):
    for t, a, info in _gram_inputs(cfg, "theorem2", include_pattern=True):
        rep = replace(check_copositive_partial_trace(a, cfg.tol), seed_info=info)
        rec.report("theorem2", rep, matrix=a, trial=t)


def _run_corollary3(cfg, rec):
    for t, a, info in _ppt_inputs(cfg, "corollary3"):
        rep = replace(check_ppt_reduction(a, cfg.tol), seed_info=info)
        rec.report("corollary3", rep, matrix=a, trial=t)


def _run_combined(cfg, rec):
    for t, a, info in _ppt_inputs(cfg, "combined"):
        rep = replace(check_combined_reduction(a, cfg.tol), seed_info=info)
        rec.report("combined", rep, matrix=a, trial=t)


def _run_upper_bound(cfg, rec):
    for t, a, info in _gram_inputs(cfg, "upper_bound", include_pattern=False):
        rep = replace(check_upper_bound(a, cfg.tol), seed_info=info)
        rec.report("upper_bound", rep, matrix=a, trial=t)


def _run_corollary6(cfg, rec):
    for t, a, info in _gram_inputs(cfg, "corollary6", include_pattern=True):
        rep = replace(check_phi_lower(a, cfg.tol), seed_info=info)
        rec.report("corollary6", rep, matrix=a, trial=t)


def _run_block2(cfg, rec):
    for _, n in (shape for shape in cfg.shapes if shape[0] == 2):
        for t in range(cfg.trials):
            dim = 2 * n
            rank = _rank_for_trial(dim, t)
            s = derive_seed(cfg.seed, "block2", 2, n, t)
            a = BlockMatrix(2, n, random_psd(dim, rank, s))
            info = f"random_psd(dim={dim}, rank={rank}, seed={s})"
            rep = replace(check_block2(a, cfg.tol), seed_info=info)
            d = rep.details
            # when G certifies PSD, the traced-out scalar bounds must follow
            if d["min_eig_g"] >= -cfg.tol * d["scale_g"]:
                assert (
                    d["gap_eq8"] >= -cfg.tol * d["scale_eq8"]
                    and d["gap_eq9"] >= -cfg.tol * d["scale_eq9"]
                ), "two-block consistency chain broken: G is PSD but a trace gap is negative"
            rec.report("block2", rep, matrix=a, trial=t)


def _exhaustive_trace(mat, tol, info, rec, trial):
    """One full (alpha, beta) enumeration of the trace bounds on one matrix."""
    n = mat.shape[0]
    pairs = _trace_pairs(n)
    worst_gap = math.inf
    worst_pair = pairs[0]
    failed_pairs = 0
    for al, be in pairs:
        rep = check_trace_submatrix(mat, al, be, tol)
        if rep.scalar_gap < worst_gap:
            worst_gap = rep.scalar_gap
            worst_pair = (al, be)
        if not rep.passed:
            failed_pairs += 1
            rec.counterexample("thm8_9", trial, replace(rep, seed_info=info), mat)
    agg = CheckReport(
        check_name="trace_submatrix_exhaustive",
        passed=failed_pairs == 0,
        residual_min_eig=None,
        scalar_gap=worst_gap,
        tolerance=tol,
        shape=n,
        seed_info=info,
        details={
            "pairs": len(pairs),
            "failed_pairs": failed_pairs,
            "worst_alpha": list(worst_pair[0].members),
            "worst_beta": list(worst_pair[1].members),
        },
    )
    rec.report("thm8_9", agg)


def _exhaustive_det(mat, tol, info, rec, trial):
    """One full (alpha != beta) enumeration of the determinant bound on one matrix."""
    n = mat.shape[0]
    pairs = _det_pairs(n)
    if not pairs:
        raise UsageError(f"matrix dimension {n} admits no index-set pairs with alpha != beta")
    worst_gap = math.inf
    worst_pair = pairs[0]
    failed_pairs = 0
    desnanot_max = 0.0
    for al, be in pairs:
        rep = check_det_submatrix(mat, al, be, tol)
        if rep.scalar_gap < worst_gap:
            worst_gap = rep.scalar_gap
            worst_pair = (al, be)
        if rep.details["desnanot_case"]:
            rel = abs(rep.scalar_gap) / rep.details["scale"]
            desnanot_max = max(desnanot_max, rel)
        if not rep.passed:
            failed_pairs += 1
            rec.counterexample("eqlin", trial, replace(rep, seed_info=info), mat)
    agg = CheckReport(
        check_name="det_submatrix_exhaustive",
        passed=failed_pairs == 0,
        residual_min_eig=None,
        scalar_gap=worst_gap,
        tolerance=tol,
        shape=n,
        seed_info=info,
        details={
            "pairs": len(pairs),
            "failed_pairs": failed_pairs,
            "worst_alpha": list(worst_pair[0].members),
            "worst_beta": list(worst_pair[1].members),
            "desnanot_max_relgap": desnanot_max,
        },
    )
    rec.report("eqlin", agg)


def _run_thm8_9(cfg, rec):
    for n in cfg.dims:
        for t in range(cfg.trials):
            rank = _rank_for_trial(n, t)
            s = derive_seed(cfg.seed, "thm8_9", n, t)
            mat = random_psd(n, rank, s)
            _exhaustive_trace(mat, cfg.tol, f"random_psd(dim={n}, rank={rank}, seed={s})", rec, t)


def _run_eqlin(cfg, rec):
    for n in cfg.dims:
        if n < 2:
            raise UsageError("eqlin needs matrix dimension >= 2 (alpha != beta required)")
        for t in range(cfg.trials):
            rank = _rank_for_trial(n, t)
            s = derive_seed(cfg.seed, "eqlin", n, t)
            mat = random_psd(n, rank, s)
            _exhaustive_det(mat, cfg.tol, f"random_psd(dim={n}, rank={rank}, seed={s})", rec, t)


def _run_choi_certs(cfg, rec):
    for n in _CHOI_CERT_DIMS:
        for name in BUILTIN_MAPS:
            phi = builtin_map(name, n)
            cp, min_choi = certify_completely_positive(phi, cfg.tol)
            ccp, min_co = certify_completely_copositive(phi, cfg.tol)
            exp_cp, exp_ccp = EXPECTED_CERTIFICATION[name]
            rep = CheckReport(
                check_name="choi_certification",
                passed=cp == exp_cp and ccp == exp_ccp,
                residual_min_eig=None,
                scalar_gap=None,
                tolerance=cfg.tol,
                shape=(n, phi.k),
                seed_info=f"builtin map {name!r}, n={n}",
                details={
                    "completely_positive": cp,
                    "expected_positive": exp_cp,
                    "min_eig_choi": min_choi,
                    "completely_copositive": ccp,
                    "expected_copositive": exp_ccp,
                    "min_eig_co_choi": min_co,
                },
            )
            rec.report("choi_certs", rep, matrix=phi, trial=0)


_RUNNERS = {
    "theorem2": _run_theorem2,
    "corollary3": _run_corollary3,
    "combined": _run_combined,
    "upper_bound": _run_upper_bound,
    "corollary6": _run_corollary6,
    "block2": _run_block2,
    "thm8_9": _run_thm8_9,
    "eqlin": _run_eqlin,
    "choi_certs": _run_choi_certs,
}


def run_suite(config: SuiteConfig) -> RunReport:
    """Run every requested suite deterministically and collect all reports."""
    start = time.perf_counter()
    names = expand_suites(config.suites)
    if any(name in _BLOCK_SUITES for name in names) and not config.shapes:
        raise UsageError("shapes must be nonempty for the block-matrix suites")
    if any(name in _SUBMATRIX_SUITES for name in names) and not config.dims:
        raise UsageError("dims must be nonempty for the submatrix suites")
    rec = _Recorder(names)
    for name in names:
        _RUNNERS[name](config, rec)
    duration = time.perf_counter() - start
    return RunReport(
        config=config,
        reports=rec.reports,
        counterexamples=rec.counterexamples,
        duration_seconds=duration,
    )


_FILE_CHECKERS = {
    "theorem2": check_copositive_partial_trace,
    "corollary3": check_ppt_reduction,
    "combined": check_combined_reduction,
    "upper_bound": check_upper_bound,
    "corollary6": check_phi_lower,
    "block2": check_block2,
}


def run_files(config: SuiteConfig, paths) -> RunReport:
    """Run the requested suites on explicitly supplied matrix files.

    Block suites require block-matrix documents; the submatrix suites accept
    any square matrix (a block document's matrix is used as-is) and enumerate
    all index-set pairs exhaustively. ``choi_certs`` never consumes matrix
    files; requesting it by name here is a usage error.
    """
    start = time.perf_counter()
    if "choi_certs" in config.suites:
        raise UsageError(
            "suite 'choi_certs' does not consume matrix files; use the 'choi' subcommand"
        )
    names = tuple(n for n in expand_suites(config.suites) if n != "choi_certs")
    paths = list(paths)
    if not paths:
        raise UsageError("no input files given")
    rec = _Recorder(names)
    for idx, path in enumerate(paths):
        obj = load(path)
        if isinstance(obj, LinearMapRep):
            raise UsageError(f"{path}: expected a matrix document, found a linear map")
        label = f"file {path}"
        for name in names:
            if name in _BLOCK_SUITES:
                if not isinstance(obj, BlockMatrix):
                    raise UsageError(
                        f"{path}: suite {name!r} needs a block-matrix document "
                        "(with fields 'm' and 'n')"
                    )
                rep = replace(_FILE_CHECKERS[name](obj, config.tol), seed_info=label)
                rec.report(name, rep, matrix=obj, trial=idx)
            elif name == "thm8_9":
                mat = obj.mat if isinstance(obj, BlockMatrix) else obj
                _exhaustive_trace(mat, config.tol, label, rec, idx)
            else:
                mat = obj.mat if isinstance(obj, BlockMatrix) else obj
                _exhaustive_det(mat, config.tol, label, rec, idx)
    duration = time.perf_counter() - start
    return RunReport(
        config=config,
        reports=rec.reports,
        counterexamples=rec.counterexamples,
        duration_seconds=duration,
    )
