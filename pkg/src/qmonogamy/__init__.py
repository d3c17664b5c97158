"""Qudit concurrences, three-tangles and monogamy audits."""

from .bounds import (
    RoofConfig,
    antisym_exact_sq,
    convex_roof_sq,
    correlation_tensor,
    lower_bound_2xM_sq,
    lower_bound_sq,
)
from .measures import (
    Certainty,
    ConcurrenceResult,
    pure_concurrence_sq,
    pure_concurrence_sq_purity,
    so_generators,
    wootters_concurrence,
)
from .monogamy import MonogamyReport, Verdict, audit, audit_all_foci, three_tangle_qubits
from .qstate import (
    BipartiteSplit,
    DensityMatrix,
    PureState,
    conjugate,
    density_from_pure,
    partial_trace,
    purity,
    tensor,
)

__version__ = "0.1.0"


def schema_path(name: str):
    """Path to a bundled JSON schema, e.g. ``schema_path("audit")``."""
    from importlib.resources import files

    return files(__name__).joinpath("schemas", f"{name}.schema.json")
