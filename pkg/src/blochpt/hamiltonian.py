"""Hamiltonian input, reduced-resolvent powers, and per-diagram evaluation.

Inputs live in the eigenbasis of the unperturbed operator: a real diagonal
h0, a Hermitian perturbation matrix v, and a nondegenerate target level.  A
diagram (k1..kn) evaluates to the operator string S^{k1} V ... S^{kn} V
applied to the target basis vector, where S^k is the k-th reduced-resolvent
power and S^0 is minus the target projector.
"""

from __future__ import annotations

import json
import warnings
from dataclasses import dataclass, field

import numpy as np

from .diagrams import BlochSequence, SequenceLike

HERMITICITY_RTOL = 1e-12
DEFAULT_GAP_TOL = 1e-9
CONDITION_WARN_RATIO = 1e8


class HamiltonianError(ValueError):
    """Base class for invalid Hamiltonian input."""


class DimensionMismatch(HamiltonianError):
    pass


class NotHermitian(HamiltonianError):
    pass


class DegenerateTarget(HamiltonianError):
    pass


class ResolventConditionWarning(UserWarning):
    """A non-target level sits very close to the target; resolvent powers are ill-conditioned."""


@dataclass(frozen=True)
class HamiltonianSpec:
    """Validated perturbation problem in the unperturbed eigenbasis."""

    h0: np.ndarray  # (dim,) real unperturbed eigenvalues
    v: np.ndarray  # (dim, dim) complex Hermitian perturbation
    target: int
    gap_tol: float = DEFAULT_GAP_TOL
    gap: float = field(init=False, default=0.0)

    def __post_init__(self):
        h0 = np.asarray(self.h0, dtype=float)
        v = np.asarray(self.v, dtype=complex)
        if h0.ndim != 1:
            raise DimensionMismatch(f"h0 must be a vector, got shape {h0.shape}")
        dim = h0.shape[0]
        if v.shape != (dim, dim):
            raise DimensionMismatch(f"v must be {dim}x{dim}, got shape {v.shape}")
        if not 0 <= self.target < dim:
            raise DimensionMismatch(f"target {self.target} outside 0..{dim - 1}")
        scale = np.max(np.abs(v)) if v.size else 0.0
        defect = np.max(np.abs(v - v.conj().T)) if v.size else 0.0
        if defect > HERMITICITY_RTOL * scale:
            raise NotHermitian(f"max |v - v^H| = {defect:.3e} exceeds {HERMITICITY_RTOL:g}*|v|")
        others = np.delete(h0, self.target)
        gap = float(np.min(np.abs(others - h0[self.target]))) if others.size else np.inf
        if gap < self.gap_tol:
            raise DegenerateTarget(
                f"target gap {gap:.3e} below tolerance {self.gap_tol:g}"
            )
        spread = float(np.max(h0) - np.min(h0)) if dim > 1 else 0.0
        if np.isfinite(gap) and gap > 0 and spread / gap > CONDITION_WARN_RATIO:
            warnings.warn(
                f"target gap {gap:.3e} is tiny relative to the spectral spread "
                f"{spread:.3e}; resolvent powers are ill-conditioned",
                ResolventConditionWarning,
                stacklevel=2,
            )
        h0.setflags(write=False)
        v.setflags(write=False)
        object.__setattr__(self, "h0", h0)
        object.__setattr__(self, "v", v)
        object.__setattr__(self, "gap", gap)

    @property
    def dim(self) -> int:
        return self.h0.shape[0]

    @property
    def target_energy(self) -> float:
        return float(self.h0[self.target])

    def basis_vector(self) -> np.ndarray:
        vec = np.zeros(self.dim, dtype=complex)
        vec[self.target] = 1.0
        return vec

    def to_dict(self) -> dict:
        real = bool(np.all(self.v.imag == 0.0))
        if real:
            v = [[float(x) for x in row] for row in self.v.real]
        else:
            v = [[[float(x.real), float(x.imag)] for x in row] for row in self.v]
        return {
            "dim": self.dim,
            "h0": [float(x) for x in self.h0],
            "v": v,
            "target": self.target,
        }


def load(h0, v, target: int, gap_tol: float = DEFAULT_GAP_TOL) -> HamiltonianSpec:
    """Validate raw arrays into a HamiltonianSpec."""
    return HamiltonianSpec(h0=np.asarray(h0, dtype=float), v=_as_matrix(v), target=int(target), gap_tol=gap_tol)


def _as_matrix(v) -> np.ndarray:
    arr = np.asarray(v)
    if arr.ndim == 3 and arr.shape[-1] == 2:
        # [[ [re, im], ... ], ...] encoding
        arr = arr[..., 0] + 1j * arr[..., 1]
    return np.asarray(arr, dtype=complex)


def from_dict(data: dict, gap_tol: float = DEFAULT_GAP_TOL) -> HamiltonianSpec:
    """Build a spec from the JSON input schema.

    Schema: {"dim": int, "h0": [real...], "v": [[real...]...] for
    real-symmetric or [[[re, im]...]...] for complex Hermitian,
    "target": int}.  A "dim" key, when present, must match h0.
    """
    try:
        h0 = data["h0"]
        v = data["v"]
        target = data["target"]
    except KeyError as exc:
        raise HamiltonianError(f"missing required key {exc}") from exc
    spec = load(h0, v, target, gap_tol=gap_tol)
    if "dim" in data and int(data["dim"]) != spec.dim:
        raise DimensionMismatch(f"declared dim {data['dim']} but h0 has {spec.dim} entries")
    return spec


def load_file(path, gap_tol: float = DEFAULT_GAP_TOL) -> HamiltonianSpec:
    with open(path, "r", encoding="utf-8") as fh:
        return from_dict(json.load(fh), gap_tol=gap_tol)


class ResolventPowers:
    """Diagonal reduced-resolvent powers, cached per exponent.

    diagonal(0) is -1 on the target entry and 0 elsewhere; diagonal(k) for
    k >= 1 is 1/(lambda0 - h0_j)^k off target and 0 on the target entry.
    """

    def __init__(self, spec: HamiltonianSpec):
        self._spec = spec
        base = spec.target_energy - spec.h0
        base[spec.target] = 1.0  # placeholder; the target entry is zeroed below
        self._inverse_gap = 1.0 / base
        self._cache: dict[int, np.ndarray] = {}

    def diagonal(self, k: int) -> np.ndarray:
        if k < 0:
            raise ValueError("resolvent power must be nonnegative")
        cached = self._cache.get(k)
        if cached is not None:
            return cached
        spec = self._spec
        if k == 0:
            diag = np.zeros(spec.dim)
            diag[spec.target] = -1.0
        else:
            diag = self._inverse_gap**k
            diag[spec.target] = 0.0
        diag.setflags(write=False)
        self._cache[k] = diag
        return diag


def _exponents(s: SequenceLike) -> tuple[int, ...]:
    # Any nonnegative exponent string is evaluable, not only Bloch sequences:
    # cut diagrams and illustrative strings like (0,) are legitimate inputs.
    parts = s.parts if isinstance(s, BlochSequence) else tuple(int(k) for k in s)
    if any(k < 0 for k in parts):
        raise ValueError(f"negative resolvent exponent in {parts}")
    return parts


def eval_diagram_vector(
    s: SequenceLike, spec: HamiltonianSpec, resolvents: ResolventPowers | None = None
) -> np.ndarray:
    """Apply the diagram's operator string to the target basis vector.

    Exponents are consumed from the last step backwards: the state is hit n
    times by (perturbation, then resolvent power).  The empty sequence
    returns the target basis vector itself.
    """
    parts = _exponents(s)
    res = resolvents if resolvents is not None else ResolventPowers(spec)
    vec = spec.basis_vector()
    for k in reversed(parts):
        vec = spec.v @ vec
        vec = res.diagonal(k) * vec
    return vec


def eval_diagram_energy(
    s: SequenceLike, spec: HamiltonianSpec, resolvents: ResolventPowers | None = None
) -> complex:
    """Target matrix element of (perturbation times the diagram's vector)."""
    vec = eval_diagram_vector(s, spec, resolvents)
    return complex(spec.v[spec.target] @ vec)
