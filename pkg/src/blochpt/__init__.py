"""Exact staircase-diagram coefficients and normalised perturbation series."""

from .version import __version__
from .diagrams import (
    BlochSequence,
    CapExceeded,
    CrossingNumbers,
    InvalidCrossingNumbers,
    ZDecomposition,
    canonical_diagram,
    count_convex,
    count_sequences,
    crossing_numbers,
    enumerate_sequences,
    is_convex,
    iter_sequences,
    z_decompose,
)
from .coefficients import (
    CoefficientEngine,
    c_closed,
    c_recurrence,
    crossing_weight,
    e_closed,
    e_recurrence,
    format_rational,
)
from .grouping import (
    ENERGY,
    VECTOR,
    EqualStrings,
    EquivalenceClass,
    canonicalize,
    group,
    string_less_than,
    survives_offdiagonal,
    term_count_report,
)
from .hamiltonian import (
    DegenerateTarget,
    DimensionMismatch,
    HamiltonianError,
    HamiltonianSpec,
    NotHermitian,
    ResolventPowers,
    eval_diagram_energy,
    eval_diagram_vector,
    from_dict,
    load,
    load_file,
)
from .render import RenderSpec, ascii_diagram, path_points, render, render_figure
from .series import (
    ROUTE_BLOCH,
    ROUTE_DIAGRAMMATIC,
    ROUTE_TEXTBOOK,
    CorrectionSeries,
    VerificationReport,
    bloch_series,
    build_series,
    diagrammatic_series,
    gram_partial_sum,
    route_deviation,
    textbook_series,
    verify,
)

__all__ = [name for name in dir() if not name.startswith("_")]
