"""Tripartite monogamy audits and the three-tangle.

For a focus party ``f`` with partners ``b`` and ``c`` the audit compares
``C^2_fb + C^2_fc`` against ``C^2_f(bc)``. Pairwise terms are mixed states, so
each is bracketed by a lower bound and an upper estimate unless an exact
formula applies. The verdict only claims a certified violation when the
*lower* bounds already exceed the pure-cut value.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

from .bounds import (
    RoofConfig,
    antisym_exact_sq,
    convex_roof_sq,
    lower_bound_2xM_sq,
    lower_bound_sq,
)
from .errors import WrongArity, WrongDims
from .measures import Certainty, ConcurrenceResult, pure_concurrence_sq, wootters_concurrence
from .qstate import BipartiteSplit, DensityMatrix, PureState, permute_subsystems, reduced_density

DEFAULT_TOLERANCE = 1e-6
LABELS = "ABCDE"


class Verdict(str, Enum):
    SATISFIED = "satisfied"
    VIOLATED_CERTIFIED = "violated_certified"
    VIOLATED_HEURISTIC = "violated_heuristic"
    INCONCLUSIVE = "inconclusive"


@dataclass(frozen=True)
class PairTerm:
    """Bracket ``lower <= C^2 <= upper`` for one pairwise reduced state.

    For exact terms both ends are the same result. ``upper`` is ``None`` when
    no convex-roof search was run.
    """

    lower: ConcurrenceResult
    upper: ConcurrenceResult | None

    @property
    def exact(self) -> bool:
        return self.lower.certainty is Certainty.EXACT

    def to_dict(self) -> dict:
        return {"lower": self.lower.to_dict(), "upper": None if self.upper is None else self.upper.to_dict()}


def pair_term(rho: DensityMatrix, cfg: RoofConfig | None) -> PairTerm:
    """Best available bracket for a two-party reduced state.

    Priority: Wootters (2x2), antisymmetric-support certificate (3x3), then a
    lower bound (analytic when one side is a qubit, else singular-value) plus
    the convex-roof upper estimate.
    """
    split = BipartiteSplit((0,), (1,))
    if rho.dims == (2, 2):
        r = wootters_concurrence(rho)
        return PairTerm(r, r)
    exact = antisym_exact_sq(rho, split)
    if exact is not None:
        return PairTerm(exact, exact)
    if 2 in rho.dims:
        lower = lower_bound_2xM_sq(rho, split)
    else:
        seed = 0 if cfg is None else cfg.seed
        restarts = 8 if cfg is None else cfg.restarts
        lower = lower_bound_sq(rho, split, restarts=restarts, seed=seed)
    upper = None if cfg is None else convex_roof_sq(rho, split, cfg)
    return PairTerm(lower, upper)


@dataclass(frozen=True)
class MonogamyReport:
    focus: int
    partners: tuple[int, int]
    c2_focus_b: ConcurrenceResult
    c2_focus_c: ConcurrenceResult
    c2_focus_rest: ConcurrenceResult
    tangle: float
    verdict: Verdict
    margin: float
    tolerance: float
    term_b: PairTerm
    term_c: PairTerm

    @property
    def pair_sum(self) -> float:
        return self.c2_focus_b.value_sq + self.c2_focus_c.value_sq

    def to_dict(self) -> dict:
        return {
            "focus": self.focus,
            "focus_label": LABELS[self.focus],
            "partners": list(self.partners),
            "c2_focus_b": self.c2_focus_b.to_dict(),
            "c2_focus_c": self.c2_focus_c.to_dict(),
            "c2_focus_rest": self.c2_focus_rest.to_dict(),
            "tangle": self.tangle,
            "verdict": self.verdict.value,
            "margin": self.margin,
            "tolerance": self.tolerance,
            "bounds_b": self.term_b.to_dict(),
            "bounds_c": self.term_c.to_dict(),
        }


def _verdict(tb: PairTerm, tc: PairTerm, rest: float, tol: float) -> Verdict:
    lower = tb.lower.value_sq + tc.lower.value_sq
    if lower > rest + tol:
        return Verdict.VIOLATED_CERTIFIED
    if tb.upper is None or tc.upper is None:
        return Verdict.INCONCLUSIVE
    upper = tb.upper.value_sq + tc.upper.value_sq
    if upper > rest + tol:
        return Verdict.VIOLATED_HEURISTIC
    return Verdict.SATISFIED


def _check_three(psi: PureState) -> None:
    if len(psi.dims) != 3:
        raise WrongArity(f"monogamy audits need exactly 3 subsystems, got {len(psi.dims)}")


def audit(psi: PureState, focus: int, cfg: RoofConfig | None, tolerance: float = DEFAULT_TOLERANCE) -> MonogamyReport:
    """Audit ``C^2_fb + C^2_fc <= C^2_f(bc)`` for the given focus.

    ``margin`` is ``pair_sum - C^2_f(bc)`` over the reported pairwise values
    (positive means violated). The reported pairwise value is the exact one
    when available, the lower bound for a certified violation, and the
    convex-roof estimate otherwise. Passing ``cfg=None`` skips the roof search;
    without exact terms the verdict is then at best inconclusive.
    """
    _check_three(psi)
    if focus not in (0, 1, 2):
        raise WrongArity(f"focus must be 0, 1 or 2, got {focus}")
    b, c = (i for i in range(3) if i != focus)
    rest = pure_concurrence_sq(psi, BipartiteSplit((focus,), (b, c)))
    tb = pair_term(_ordered_pair(psi, focus, b), cfg)
    tc = pair_term(_ordered_pair(psi, focus, c), cfg)
    verdict = _verdict(tb, tc, rest.value_sq, tolerance)

    def shown(t: PairTerm) -> ConcurrenceResult:
        if t.exact or verdict in (Verdict.VIOLATED_CERTIFIED, Verdict.INCONCLUSIVE) or t.upper is None:
            return t.lower
        return t.upper

    cb, cc = shown(tb), shown(tc)
    tangle = rest.value_sq - cb.value_sq - cc.value_sq
    return MonogamyReport(
        focus=focus, partners=(b, c), c2_focus_b=cb, c2_focus_c=cc, c2_focus_rest=rest,
        tangle=tangle, verdict=verdict, margin=-tangle, tolerance=tolerance, term_b=tb, term_c=tc,
    )


def _ordered_pair(psi: PureState, first: int, second: int) -> DensityMatrix:
    """Two-party reduced state with ``first`` as the left subsystem."""
    rho = reduced_density(psi, (first, second))
    return rho if first < second else permute_subsystems(rho, [1, 0])


def audit_all_foci(psi: PureState, cfg: RoofConfig | None, tolerance: float = DEFAULT_TOLERANCE) -> list[MonogamyReport]:
    _check_three(psi)
    return [audit(psi, f, cfg, tolerance) for f in range(3)]


def three_tangle_qubits(psi: PureState, focus: int = 0) -> float:
    """Residual tangle ``C^2_f(bc) - C^2_fb - C^2_fc`` with Wootters pairwise terms."""
    if psi.dims != (2, 2, 2):
        raise WrongDims(f"three_tangle_qubits needs dims [2, 2, 2], got {list(psi.dims)}")
    b, c = (i for i in range(3) if i != focus)
    rest = pure_concurrence_sq(psi, BipartiteSplit((focus,), (b, c))).value_sq
    pb = wootters_concurrence(_ordered_pair(psi, focus, b)).value_sq
    pc = wootters_concurrence(_ordered_pair(psi, focus, c)).value_sq
    return rest - pb - pc
