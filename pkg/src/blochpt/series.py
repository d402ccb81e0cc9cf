"""Eigenvalue/eigenvector correction series by three routes, plus verification.

Routes:
  * textbook      -- order-by-order coupled recurrences with the half-sum
                     normalisation/phase convention (the oracle route);
  * diagrammatic  -- exact rational coefficients times per-diagram operator
                     values, summed over all diagrams (optionally grouped
                     into permutation classes);
  * bloch         -- unnormalised vectors from convex diagrams only, unit
                     coefficients, target component zero in every order.

verify() assembles truncated states in extended precision and reports
residual norms, norm defects, fitted log-log scaling exponents, and pairwise
route deviations.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field

import numpy as np

from .coefficients import CoefficientEngine, c_closed, e_closed
from .diagrams import is_convex, iter_sequences
from .grouping import ENERGY, VECTOR, group
from .hamiltonian import HamiltonianSpec, ResolventPowers, eval_diagram_energy, eval_diagram_vector

ROUTE_TEXTBOOK = "textbook"
ROUTE_DIAGRAMMATIC = "diagrammatic"
ROUTE_BLOCH = "bloch-unnormalised"
ROUTES = (ROUTE_TEXTBOOK, ROUTE_DIAGRAMMATIC, ROUTE_BLOCH)

IMAG_WARN_RTOL = 1e-12


@dataclass
class CorrectionSeries:
    """Per-order corrections lambda_0..lambda_N and the matching vectors."""

    route: str
    order: int
    energies: np.ndarray  # (N+1,) real
    vectors: np.ndarray  # (N+1, dim) complex
    grouped: bool = False
    evaluated_terms: int | None = None  # diagram evaluations performed, where meaningful

    @property
    def dim(self) -> int:
        return self.vectors.shape[1]

    def energy_at(self, eps: float, dtype=float) -> float:
        """Truncated eigenvalue at coupling eps (Horner evaluation)."""
        coeffs = self.energies.astype(dtype)
        total = dtype(0)
        for lam in coeffs[::-1]:
            total = total * dtype(eps) + lam
        return total

    def vector_at(self, eps: float, dtype=complex) -> np.ndarray:
        """Truncated eigenvector at coupling eps (Horner evaluation)."""
        coeffs = self.vectors.astype(dtype)
        total = np.zeros(self.dim, dtype=dtype)
        for row in coeffs[::-1]:
            total = total * dtype(eps) + row
        return total


def _real_energy(value: complex, order: int, route: str) -> float:
    scale = max(1.0, abs(value.real))
    if abs(value.imag) > IMAG_WARN_RTOL * scale:
        warnings.warn(
            f"{route} energy at order {order} has residual imaginary part "
            f"{value.imag:.3e}; keeping the real part",
            stacklevel=3,
        )
    return float(value.real)


def textbook_series(spec: HamiltonianSpec, order: int) -> CorrectionSeries:
    """Coupled-recurrence route; normalised with real target components."""
    if order < 1:
        raise ValueError("order must be at least 1")
    dim = spec.dim
    s1 = ResolventPowers(spec).diagonal(1)
    energies = np.zeros(order + 1)
    vectors = np.zeros((order + 1, dim), dtype=complex)
    energies[0] = spec.target_energy
    vectors[0] = spec.basis_vector()
    for n in range(1, order + 1):
        rhs = spec.v @ vectors[n - 1]
        for m in range(1, n):
            rhs = rhs - energies[m] * vectors[n - m]
        energies[n] = _real_energy(complex(rhs[spec.target]), n, ROUTE_TEXTBOOK)
        vec = s1 * rhs
        overlap = complex(0)
        for m in range(1, n):
            overlap += np.vdot(vectors[m], vectors[n - m])
        vec[spec.target] = _real_energy(-0.5 * overlap, n, ROUTE_TEXTBOOK)
        vectors[n] = vec
    return CorrectionSeries(ROUTE_TEXTBOOK, order, energies, vectors)


def diagrammatic_series(
    spec: HamiltonianSpec,
    order: int,
    use_grouping: bool = False,
    use_closed_form: bool = True,
    engine: CoefficientEngine | None = None,
    cap: int | None = None,
) -> CorrectionSeries:
    """Coefficient-weighted sum over all diagrams of each order.

    Coefficients come from the closed form by default, or from the
    recurrences when use_closed_form is False.  With use_grouping, sums run
    over equivalence classes weighted by their effective coefficients.
    """
    if order < 1:
        raise ValueError("order must be at least 1")
    if use_closed_form:
        cfun, efun = c_closed, e_closed
    else:
        eng = engine if engine is not None else CoefficientEngine()
        cfun, efun = eng.vector_coeff, eng.energy_coeff
    res = ResolventPowers(spec)
    dim = spec.dim
    energies = np.zeros(order + 1)
    vectors = np.zeros((order + 1, dim), dtype=complex)
    energies[0] = spec.target_energy
    vectors[0] = spec.basis_vector()
    evaluated = 0
    for n in range(1, order + 1):
        if n == 1:
            lam = eval_diagram_energy((), spec, res)  # coefficient 1 on the empty diagram
            evaluated += 1
        elif use_grouping:
            lam = complex(0)
            for cls in group(n - 1, ENERGY, cap):
                if cls.e_eff:
                    lam += float(cls.e_eff) * eval_diagram_energy(cls.representative, spec, res)
                    evaluated += 1
        else:
            lam = complex(0)
            for seq in iter_sequences(n - 1, cap):
                weight = efun(seq)
                if weight:
                    lam += float(weight) * eval_diagram_energy(seq, spec, res)
                    evaluated += 1
        energies[n] = _real_energy(complex(lam), n, ROUTE_DIAGRAMMATIC)
        vec = np.zeros(dim, dtype=complex)
        if use_grouping:
            for cls in group(n, VECTOR, cap):
                if cls.c_eff:
                    vec += float(cls.c_eff) * eval_diagram_vector(cls.representative, spec, res)
                    evaluated += 1
        else:
            for seq in iter_sequences(n, cap):
                weight = cfun(seq)
                if weight:
                    vec += float(weight) * eval_diagram_vector(seq, spec, res)
                    evaluated += 1
        vectors[n] = vec
    return CorrectionSeries(
        ROUTE_DIAGRAMMATIC, order, energies, vectors, grouped=use_grouping, evaluated_terms=evaluated
    )


def bloch_series(spec: HamiltonianSpec, order: int, cap: int | None = None) -> CorrectionSeries:
    """Unnormalised route: convex diagrams only, unit coefficients."""
    if order < 1:
        raise ValueError("order must be at least 1")
    res = ResolventPowers(spec)
    dim = spec.dim
    energies = np.zeros(order + 1)
    vectors = np.zeros((order + 1, dim), dtype=complex)
    energies[0] = spec.target_energy
    vectors[0] = spec.basis_vector()
    evaluated = 0
    for n in range(1, order + 1):
        if n == 1:
            lam = eval_diagram_energy((), spec, res)
            evaluated += 1
        else:
            lam = complex(0)
            for seq in iter_sequences(n - 1, cap):
                if is_convex(seq):
                    lam += eval_diagram_energy(seq, spec, res)
                    evaluated += 1
        energies[n] = _real_energy(complex(lam), n, ROUTE_BLOCH)
        vec = np.zeros(dim, dtype=complex)
        for seq in iter_sequences(n, cap):
            if is_convex(seq):
                vec += eval_diagram_vector(seq, spec, res)
                evaluated += 1
        vectors[n] = vec
    return CorrectionSeries(ROUTE_BLOCH, order, energies, vectors, evaluated_terms=evaluated)


def build_series(spec: HamiltonianSpec, order: int, route: str, **kwargs) -> CorrectionSeries:
    """Dispatch on route name."""
    if route == ROUTE_TEXTBOOK:
        return textbook_series(spec, order)
    if route == ROUTE_DIAGRAMMATIC:
        return diagrammatic_series(spec, order, **kwargs)
    if route in (ROUTE_BLOCH, "bloch"):
        return bloch_series(spec, order)
    raise ValueError(f"unknown route {route!r}")


def gram_partial_sum(series: CorrectionSeries, order: int | None = None) -> complex:
    """Sum of <lambda_n|lambda_m> over n+m <= N; equals 1 for normalised routes."""
    n_max = series.order if order is None else order
    total = complex(0)
    for n in range(n_max + 1):
        for m in range(n_max + 1 - n):
            total += np.vdot(series.vectors[n], series.vectors[m])
    return total


def route_deviation(a: CorrectionSeries, b: CorrectionSeries) -> dict:
    """Per-order and overall deviations between two series.

    Deviations are |x - y| / max(1, |x|, |y|): relative for O(1) and larger
    quantities, absolute below that floor (corrections of a unit-normed
    perturbation are O(1), and exact zeros would break a pure ratio).
    """
    n = min(a.order, b.order)
    energy_dev = []
    vector_dev = []
    for k in range(n + 1):
        scale = max(1.0, abs(a.energies[k]), abs(b.energies[k]))
        energy_dev.append(abs(a.energies[k] - b.energies[k]) / scale)
        vscale = max(
            1.0,
            float(np.max(np.abs(a.vectors[k]))),
            float(np.max(np.abs(b.vectors[k]))),
        )
        vector_dev.append(float(np.max(np.abs(a.vectors[k] - b.vectors[k]))) / vscale)
    return {
        "orders": n,
        "energy": energy_dev,
        "vector": vector_dev,
        "max_energy": max(energy_dev),
        "max_vector": max(vector_dev),
    }


def _extended_complex_dtype():
    # 80-bit extended on x86 Linux; falls back to complex128 elsewhere.
    return np.clongdouble


def residual_norm(spec: HamiltonianSpec, series: CorrectionSeries, eps: float) -> float:
    """2-norm of (H0 + eps*V)|psi> - lambda|psi> for the truncated state.

    Evaluated in extended precision so the exact order-by-order cancellations
    are not masked by assembly roundoff.
    """
    cdtype = _extended_complex_dtype()
    psi = series.vector_at(eps, dtype=cdtype)
    lam = series.energy_at(eps, dtype=np.longdouble)
    h0 = spec.h0.astype(np.longdouble)
    v = spec.v.astype(cdtype)
    resid = h0 * psi + cdtype(eps) * (v @ psi) - lam * psi
    return float(np.sqrt(np.sum(np.abs(resid) ** 2)))


def norm_defect(series: CorrectionSeries, eps: float) -> float:
    """| norm of the truncated state - 1 |."""
    cdtype = _extended_complex_dtype()
    psi = series.vector_at(eps, dtype=cdtype)
    return float(abs(np.sqrt(np.sum(np.abs(psi) ** 2)) - 1.0))


def fit_loglog_slope(xs, ys) -> float | None:
    """Least-squares slope of log10(y) against log10(x); None if underdetermined."""
    xs = np.asarray(xs, dtype=float)
    ys = np.asarray(ys, dtype=float)
    keep = (xs > 0) & (ys > 0)
    if np.count_nonzero(keep) < 2:
        return None
    lx = np.log10(xs[keep])
    ly = np.log10(ys[keep])
    slope = np.polyfit(lx, ly, 1)[0]
    return float(slope)


@dataclass
class VerificationReport:
    """Residuals, norm defects, fitted slopes, and pairwise route deltas."""

    order: int
    eps: list[float]
    rows: dict[str, list[dict]] = field(default_factory=dict)
    slopes: dict[str, dict[str, float | None]] = field(default_factory=dict)
    route_deltas: dict[str, dict] = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "order": self.order,
            "eps": list(self.eps),
            "routes": self.rows,
            "fitted_slopes": self.slopes,
            "route_deltas": self.route_deltas,
        }


def verify(
    spec: HamiltonianSpec,
    series: CorrectionSeries | list[CorrectionSeries] | tuple[CorrectionSeries, ...],
    eps_list,
) -> VerificationReport:
    """Check the defining properties of one or more series on an eps grid."""
    if isinstance(series, CorrectionSeries):
        series = [series]
    eps_list = [float(e) for e in eps_list]
    if not eps_list:
        raise ValueError("eps_list must not be empty")
    report = VerificationReport(order=min(s.order for s in series), eps=eps_list)
    for s in series:
        rows = []
        residuals = []
        defects = []
        for eps in eps_list:
            r = residual_norm(spec, s, eps)
            d = norm_defect(s, eps)
            residuals.append(r)
            defects.append(d)
            rows.append({"eps": eps, "residual": r, "norm_defect": d})
        report.rows[s.route] = rows
        report.slopes[s.route] = {
            "residual": fit_loglog_slope(eps_list, residuals),
            "norm_defect": fit_loglog_slope(eps_list, defects),
        }
    for i, a in enumerate(series):
        for b in series[i + 1 :]:
            dev = route_deviation(a, b)
            report.route_deltas[f"{a.route}|{b.route}"] = {
                "max_energy": dev["max_energy"],
                "max_vector": dev["max_vector"],
            }
    return report
