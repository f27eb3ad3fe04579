"""Entanglement analytics for the three signal photons.

Reduced density matrices, local entropies in bits, the residual three-way
tangle from the degree-4 invariant of the 2x2x2 amplitude tensor, and the
coarse class of the state (product, biseparable, W-like or GHZ-like).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .states import SparseState, to_letter_form

PHOTON_AXES = {1: 0, 3: 1, 5: 2}
MODE_INDEX = {"A": 0, "B": 1}

ENTROPY_EPS = 1e-9   # a local entropy below this counts as "unentangled"
TANGLE_EPS = 1e-10   # a tangle below this counts as zero

CLASS_PRODUCT = "PRODUCT"
CLASS_BISEPARABLE = {1: "BISEPARABLE_1|35", 3: "BISEPARABLE_3|15", 5: "BISEPARABLE_5|13"}
CLASS_W = "W_CLASS"
CLASS_GHZ = "GHZ_CLASS"


class PureState3:
    """Normalized three-qubit state of photons 1, 3, 5 as a (2,2,2) tensor."""

    __slots__ = ("amplitudes",)

    def __init__(self, amplitudes):
        arr = np.asarray(amplitudes, dtype=complex)
        if arr.shape != (2, 2, 2):
            raise ValueError(f"expected shape (2,2,2), got {arr.shape}")
        norm_sq = float(np.vdot(arr, arr).real)
        if abs(norm_sq - 1.0) > 1e-12:
            raise ValueError(f"state not normalized: |psi|^2 = {norm_sq}")
        self.amplitudes = arr

    @classmethod
    def from_sparse(cls, state: SparseState, renormalize: bool = False) -> "PureState3":
        if state.photons != (1, 3, 5):
            raise ValueError(f"expected photons (1, 3, 5), got {state.photons}")
        letters = to_letter_form(state)
        arr = np.zeros((2, 2, 2), dtype=complex)
        for lab, amp in letters.terms.items():
            arr[MODE_INDEX[lab[0]], MODE_INDEX[lab[1]], MODE_INDEX[lab[2]]] = amp
        if renormalize:
            norm = float(np.linalg.norm(arr.ravel()))
            if norm <= 1e-15:
                raise ValueError("cannot normalize a zero state")
            arr = arr / norm
        return cls(arr)

    def to_sparse(self) -> SparseState:
        terms = {}
        for x1 in "AB":
            for x3 in "AB":
                for x5 in "AB":
                    amp = self.amplitudes[MODE_INDEX[x1], MODE_INDEX[x3], MODE_INDEX[x5]]
                    terms[(x1, x3, x5)] = amp
        return SparseState((1, 3, 5), terms)


def reduce_single(state: PureState3, keep: int) -> np.ndarray:
    """2x2 reduced density matrix of one photon (the other two traced out)."""
    if keep not in PHOTON_AXES:
        raise ValueError(f"keep must be one of {sorted(PHOTON_AXES)}, got {keep}")
    axis = PHOTON_AXES[keep]
    psi = np.moveaxis(state.amplitudes, axis, 0).reshape(2, 4)
    return psi @ psi.conj().T


def entropy_bits(rho: np.ndarray) -> float:
    """Von Neumann entropy -Tr[rho log2 rho] of a 2x2 density matrix."""
    rho = np.asarray(rho, dtype=complex)
    if rho.shape != (2, 2):
        raise ValueError("expected a 2x2 density matrix")
    if np.max(np.abs(rho - rho.conj().T)) > 1e-9:
        raise ValueError("density matrix is not Hermitian")
    if abs(float(np.trace(rho).real) - 1.0) > 1e-9:
        raise ValueError("density matrix trace must be 1")
    eigenvalues = np.linalg.eigvalsh(rho)
    if np.any(eigenvalues < -1e-12):
        raise ValueError(f"density matrix has a negative eigenvalue: {eigenvalues}")
    entropy = 0.0
    for lam in eigenvalues:
        lam = max(float(lam), 0.0)
        if lam > 0.0:
            entropy -= lam * math.log2(lam)
    return entropy


def three_tangle(state: PureState3) -> float:
    """Residual three-way tangle, 4x the modulus of the degree-4 invariant
    of the amplitude tensor.  1 for the GHZ reference, 0 on the W family
    and on every biseparable or product state."""
    a = state.amplitudes
    d1 = (
        a[0, 0, 0] ** 2 * a[1, 1, 1] ** 2
        + a[0, 0, 1] ** 2 * a[1, 1, 0] ** 2
        + a[0, 1, 0] ** 2 * a[1, 0, 1] ** 2
        + a[1, 0, 0] ** 2 * a[0, 1, 1] ** 2
    )
    d2 = (
        a[0, 0, 0] * a[1, 1, 1] * a[0, 1, 1] * a[1, 0, 0]
        + a[0, 0, 0] * a[1, 1, 1] * a[1, 0, 1] * a[0, 1, 0]
        + a[0, 0, 0] * a[1, 1, 1] * a[1, 1, 0] * a[0, 0, 1]
        + a[0, 1, 1] * a[1, 0, 0] * a[1, 0, 1] * a[0, 1, 0]
        + a[0, 1, 1] * a[1, 0, 0] * a[1, 1, 0] * a[0, 0, 1]
        + a[1, 0, 1] * a[0, 1, 0] * a[1, 1, 0] * a[0, 0, 1]
    )
    d3 = (
        a[0, 0, 0] * a[1, 1, 0] * a[1, 0, 1] * a[0, 1, 1]
        + a[1, 1, 1] * a[0, 0, 1] * a[0, 1, 0] * a[1, 0, 0]
    )
    tau = 4.0 * abs(d1 - 2.0 * d2 + 4.0 * d3)
    return min(tau, 1.0)


@dataclass(frozen=True)
class EntanglementReport:
    s1: float
    s3: float
    s5: float
    tau: float
    label: str

    def as_dict(self) -> dict:
        return {"S1": self.s1, "S3": self.s3, "S5": self.s5, "tau": self.tau, "class": self.label}


def classify(state: PureState3) -> EntanglementReport:
    """Local entropies, tangle and the entanglement class of the state."""
    entropies = {p: entropy_bits(reduce_single(state, p)) for p in (1, 3, 5)}
    tau = three_tangle(state)
    unentangled = [p for p, s in entropies.items() if s < ENTROPY_EPS]
    if len(unentangled) >= 2:
        label = CLASS_PRODUCT
    elif len(unentangled) == 1:
        label = CLASS_BISEPARABLE[unentangled[0]]
    else:
        label = CLASS_GHZ if tau > TANGLE_EPS else CLASS_W
    return EntanglementReport(entropies[1], entropies[3], entropies[5], tau, label)


def ghz_sparse() -> SparseState:
    s = 1.0 / math.sqrt(2.0)
    return SparseState((1, 3, 5), {("A", "A", "A"): s, ("B", "B", "B"): s})


def w_sparse() -> SparseState:
    s = 1.0 / math.sqrt(3.0)
    return SparseState(
        (1, 3, 5),
        {("A", "A", "B"): s, ("A", "B", "A"): s, ("B", "A", "A"): s},
    )
