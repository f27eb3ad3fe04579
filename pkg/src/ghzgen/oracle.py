"""Brute-force occupation-number simulation of all five photons at once.

Dense state vector over every way of distributing 5 photons among the 10
channels (dimension C(14,5) = 2002); two-mode splitter unitaries are built
from explicit small-factorial sums.  Deliberately free of any sparsity or
closed-form shortcuts so it can arbitrate the other modules: the ideal
pipeline numbers, the joint-outcome engine at perfect interference, and the
fully independent propagation at the engine's independence point.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache
from itertools import product
from math import comb, factorial

import numpy as np

from . import histories, ideal
from .circuit import DETECTOR_CHANNELS, CircuitLayout, Element, standard_layout

N_MODES = 10
N_PHOTONS = 5
BASIS_SIZE = comb(N_MODES + N_PHOTONS - 1, N_PHOTONS)  # 2002

_SIGNAL_CIRCUITS = (1, 3, 5)
_DETECTOR_PARTNER = {3: 4, 4: 3, 7: 8, 8: 7}


def occupation_basis() -> tuple[tuple[int, ...], ...]:
    """All occupation vectors of 5 photons over 10 channels, lexicographic."""
    states: list[tuple[int, ...]] = []

    def extend(prefix: list[int], remaining: int):
        if len(prefix) == N_MODES - 1:
            states.append(tuple(prefix + [remaining]))
            return
        for k in range(remaining + 1):
            extend(prefix + [k], remaining - k)

    extend([], N_PHOTONS)
    return tuple(states)


_BASIS = occupation_basis()
_INDEX = {occ: i for i, occ in enumerate(_BASIS)}


def basis_index(occ: tuple[int, ...]) -> int:
    return _INDEX[occ]


@lru_cache(maxsize=None)
def _two_mode_transfer(m: int, n: int, u_aa: complex, u_ba: complex, u_ab: complex, u_bb: complex):
    """Amplitudes to find P photons in the first port given |m, n> in, for
    the mode map a+ -> u_aa a+ + u_ba b+, b+ -> u_ab a+ + u_bb b+."""
    total = m + n
    raw = [0j] * (total + 1)
    for p in range(m + 1):
        for q in range(n + 1):
            raw[p + q] += (
                comb(m, p)
                * comb(n, q)
                * u_aa**p
                * u_ba ** (m - p)
                * u_ab**q
                * u_bb ** (n - q)
            )
    return tuple(
        raw[P] * math.sqrt(factorial(P) * factorial(total - P) / (factorial(m) * factorial(n)))
        for P in range(total + 1)
    )


def _mode_map(element: Element) -> tuple[complex, complex, complex, complex]:
    r, t = element.r, element.t
    if element.reflect_crosses:
        return complex(t), 1j * r, 1j * r, complex(t)
    return 1j * r, complex(t), complex(t), 1j * r


def apply_element(vec: np.ndarray, element: Element) -> np.ndarray:
    if element.kind == "mirror":
        c = element.ports[0] - 1
        out = vec.copy()
        for i, occ in enumerate(_BASIS):
            if occ[c]:
                out[i] *= 1j ** occ[c]
        return out
    a, b = (p - 1 for p in element.ports)
    u = _mode_map(element)
    out = np.zeros_like(vec)
    for i, occ in enumerate(_BASIS):
        amp = vec[i]
        if amp == 0:
            continue
        m, n = occ[a], occ[b]
        if m == 0 and n == 0:
            out[i] += amp
            continue
        transfer = _two_mode_transfer(m, n, *u)
        base = list(occ)
        for P, coeff in enumerate(transfer):
            if coeff == 0:
                continue
            base[a], base[b] = P, m + n - P
            out[_INDEX[tuple(base)]] += amp * coeff
        base[a], base[b] = m, n
    return out


def evolve_layer(vec: np.ndarray, layout: CircuitLayout, layer: int) -> np.ndarray:
    elements = layout.layer_elements(layer)
    seen: set[int] = set()
    for e in elements:
        if seen & set(e.ports):
            raise ValueError(f"layer {layer} elements share a port at {e.eid}")
        seen |= set(e.ports)
    for e in elements:
        vec = apply_element(vec, e)
    return vec


def initial_vector(layout: CircuitLayout | None = None) -> np.ndarray:
    """State after the source splitters: every photon split over its arms."""
    layout = layout or standard_layout()
    vec = np.zeros(BASIS_SIZE, dtype=complex)
    splits = [dict(layout.source_splitter(p).source_split()) for p in range(1, 6)]
    for letters in product("AB", repeat=5):
        occ = [0] * N_MODES
        amp = 1.0 + 0j
        for photon, letter in enumerate(letters, start=1):
            channel = 2 * photon - 1 if letter == "A" else 2 * photon
            occ[channel - 1] += 1
            amp *= splits[photon - 1][channel]
        vec[_INDEX[tuple(occ)]] += amp
    return vec


def _one_per_circuit(occ: tuple[int, ...]) -> bool:
    return all(occ[2 * j] + occ[2 * j + 1] == 1 for j in range(5))


def _letters_of(occ: tuple[int, ...]) -> tuple[str, ...]:
    return tuple("A" if occ[2 * j] == 1 else "B" for j in range(5))


def _no_invasion_retention(vec: np.ndarray) -> float:
    # weight of the labels with no A_j/B_{j+1} head-on pair
    total = 0.0
    for i, occ in enumerate(_BASIS):
        if vec[i] == 0 or not _one_per_circuit(occ):
            continue
        letters = _letters_of(occ)
        if any(letters[j] == "A" and letters[j + 1] == "B" for j in range(4)):
            continue
        total += abs(vec[i]) ** 2
    return total


@dataclass
class OracleReport:
    retention_probability: float
    survivor_probability: float
    survivor_state: dict[tuple[str, ...], complex]
    conditional_probabilities: dict[tuple[str, str], float]
    conditional_states: dict[tuple[str, str], dict[tuple[str, ...], complex]]
    mirror_identity_deviation: float


def simulate_ideal_pipeline(layout: CircuitLayout | None = None) -> OracleReport:
    """Evolve the five photons exactly and read off the pipeline numbers."""
    layout = layout or standard_layout()
    v0 = initial_vector(layout)
    retention = _no_invasion_retention(v0)

    v_mid = evolve_layer(v0, layout, 2)
    sector = [i for i, occ in enumerate(_BASIS) if _one_per_circuit(occ)]
    survivor_probability = float(sum(abs(v_mid[i]) ** 2 for i in sector))

    projected = np.zeros_like(v_mid)
    projected[sector] = v_mid[sector]
    projected /= math.sqrt(survivor_probability)
    survivor_state = {
        _letters_of(_BASIS[i]): complex(projected[i]) for i in sector if abs(projected[i]) > 1e-15
    }

    v_out = evolve_layer(projected, layout, 3)
    conditional_probabilities: dict[tuple[str, str], float] = {}
    conditional_states: dict[tuple[str, str], dict] = {}
    for pair in ideal.DETECTOR_PAIRS:
        ch_a, ch_b = (DETECTOR_CHANNELS[d] for d in pair)
        want = {ch_a: 1, _DETECTOR_PARTNER[ch_a]: 0, ch_b: 1, _DETECTOR_PARTNER[ch_b]: 0}
        amps: dict[tuple[str, ...], complex] = {}
        prob = 0.0
        for i, occ in enumerate(_BASIS):
            if v_out[i] == 0:
                continue
            if any(occ[c - 1] != n for c, n in want.items()):
                continue
            label = tuple(
                "A" if occ[2 * (j - 1)] == 1 else "B" for j in _SIGNAL_CIRCUITS
            )
            amps[label] = amps.get(label, 0j) + complex(v_out[i])
            prob += abs(v_out[i]) ** 2
        scale = 1.0 / math.sqrt(prob) if prob > 1e-30 else 0.0
        conditional_probabilities[pair] = prob
        conditional_states[pair] = {lab: amp * scale for lab, amp in amps.items()}

    mirror_layer = [Element("mirror", f"MX{c}", (c,), 2) for c in range(1, N_MODES + 1)]
    v_mirror = v0.copy()
    for e in mirror_layer:
        v_mirror = apply_element(v_mirror, e)
    mirror_dev = float(np.max(np.abs(v_mirror - 1j * v0)))

    return OracleReport(
        retention_probability=retention,
        survivor_probability=survivor_probability,
        survivor_state=survivor_state,
        conditional_probabilities=conditional_probabilities,
        conditional_states=conditional_states,
        mirror_identity_deviation=mirror_dev,
    )


def full_outcome_vector(layout: CircuitLayout | None = None) -> np.ndarray:
    """Initial state evolved through both remaining layers, unprojected."""
    layout = layout or standard_layout()
    vec = initial_vector(layout)
    vec = evolve_layer(vec, layout, 2)
    return evolve_layer(vec, layout, 3)


def single_photon_amplitudes(layout: CircuitLayout, photon: int) -> dict[int, complex]:
    """Coherent single-photon transfer amplitudes, source to terminal."""
    amps = [0j] * N_MODES
    for channel, amp in layout.source_splitter(photon).source_split():
        amps[channel - 1] = amp
    for layer in (2, 3):
        for element in layout.layer_elements(layer):
            if element.kind == "mirror":
                c = element.ports[0] - 1
                amps[c] *= 1j
            else:
                a, b = (p - 1 for p in element.ports)
                u_aa, u_ba, u_ab, u_bb = _mode_map(element)
                amps[a], amps[b] = u_aa * amps[a] + u_ab * amps[b], u_ba * amps[a] + u_bb * amps[b]
    return {c + 1: amps[c] for c in range(N_MODES) if abs(amps[c]) > 1e-15}


@dataclass
class DistinguishableReport:
    per_photon: dict[int, dict[int, complex]]
    joint_amplitudes: dict[tuple[int, ...], complex] = field(repr=False)

    def joint_probability(self, assignment: tuple[int, ...]) -> float:
        return abs(self.joint_amplitudes.get(assignment, 0j)) ** 2


def simulate_distinguishable(layout: CircuitLayout | None = None) -> DistinguishableReport:
    """Independent propagation of each photon; joint outcomes are products."""
    layout = layout or standard_layout()
    per_photon = {p: single_photon_amplitudes(layout, p) for p in range(1, 6)}
    joint: dict[tuple[int, ...], complex] = {}
    for combo in product(*(sorted(per_photon[p].items()) for p in range(1, 6))):
        assignment = tuple(c for c, _ in combo)
        amp = 1.0 + 0j
        for _, a in combo:
            amp *= a
        joint[assignment] = amp
    return DistinguishableReport(per_photon, joint)


@dataclass(frozen=True)
class CheckRow:
    name: str
    deviation: float
    tolerance: float
    passed: bool
    gating: bool = True
    note: str = ""


def _occupancy_tuple(assignment: tuple[int, ...]) -> tuple[int, ...]:
    occ = [0] * N_MODES
    for c in assignment:
        occ[c - 1] += 1
    return tuple(occ)


def _state_fidelity_gap(a: dict, b: dict) -> float:
    # 1 - |<a|b>| for normalized dict states (global phase is unphysical)
    overlap = sum(amp.conjugate() * b.get(lab, 0j) for lab, amp in a.items())
    return abs(1.0 - abs(overlap))


def cross_checks(tol: float = 1e-12, layout: CircuitLayout | None = None) -> list[CheckRow]:
    """Every cross-validation between the closed-form modules and this
    simulator, as printable rows.  Gating rows decide the exit status."""
    layout = layout or standard_layout()
    rows: list[CheckRow] = []

    pipeline = ideal.run_pipeline()
    report = simulate_ideal_pipeline(layout)

    dev = max(
        abs(report.survivor_probability - ideal.SURVIVOR_ARRIVAL),
        abs(pipeline.survivor_probability - report.survivor_probability),
        abs(report.retention_probability - ideal.NO_INVASION_RETENTION),
    )
    rows.append(CheckRow("survivor probability, pipeline vs bosonic", dev, tol, dev <= tol))

    ideal_terms = pipeline.survivor.terms
    labels = set(ideal_terms) | set(report.survivor_state)
    dev = max(abs(ideal_terms.get(l, 0j) - report.survivor_state.get(l, 0j)) for l in labels)
    rows.append(CheckRow("survivor state amplitudes, pipeline vs bosonic", dev, tol, dev <= tol))

    reference = dict(zip(ideal.DETECTOR_PAIRS, (0.05, 0.25, 0.25, 0.45)))
    dev = 0.0
    for out in pipeline.outcomes:
        dev = max(
            dev,
            abs(out.probability - report.conditional_probabilities[out.pair]),
            abs(out.probability - reference[out.pair]),
        )
    rows.append(CheckRow("conditional detection probabilities", dev, tol, dev <= tol))

    dev = max(
        _state_fidelity_gap(out.state.terms, report.conditional_states[out.pair])
        for out in pipeline.outcomes
    )
    rows.append(CheckRow("conditional states, pipeline vs bosonic (fidelity)", dev, tol, dev <= tol))

    total = sum(out.probability for out in pipeline.outcomes)
    dev = abs(total - 1.0)
    rows.append(CheckRow("conditional probabilities sum to one", dev, tol, dev <= tol))

    engine = histories.HistoryEngine(layout)
    grouped: dict[tuple[int, ...], complex] = {}
    for assignment, amp in engine.amplitudes(0.0).items():
        occ = _occupancy_tuple(assignment)
        grouped[occ] = grouped.get(occ, 0j) + amp
    bosonic = full_outcome_vector(layout)
    dev = 0.0
    corrected_norm = 0.0
    for i, occ in enumerate(_BASIS):
        boost = math.sqrt(math.prod(factorial(n) for n in occ))
        summed = grouped.get(occ, 0j) * boost
        corrected_norm += abs(summed) ** 2
        dev = max(dev, abs(summed - bosonic[i]))
    rows.append(
        CheckRow(
            "joint outcomes at delta 0 vs bosonic evolution",
            dev,
            tol,
            dev <= tol,
            note="outcome sums carry sqrt(n!) per multiply-occupied channel",
        )
    )
    dev = abs(corrected_norm - 1.0)
    rows.append(CheckRow("delta 0 total probability audit", dev, tol, dev <= tol))

    independent = simulate_distinguishable(layout)
    engine_ind = engine.amplitudes(histories.INDEPENDENCE_DELTA)
    keys = set(engine_ind) | set(independent.joint_amplitudes)
    dev = max(
        abs(engine_ind.get(k, 0j) - independent.joint_amplitudes.get(k, 0j)) for k in keys
    )
    rows.append(
        CheckRow(
            "independence point (delta 1/4) vs per-photon products",
            dev,
            tol,
            dev <= tol,
            note="double-event weight sqrt(1/4) equals the face value 1/2",
        )
    )

    init = ideal.initial_state()
    mirrored, ideal_mirror_norm = ideal.apply_second_layer(init, mirror_central=True)
    dev = max(
        abs(mirrored.amplitude(lab) - 1j * amp) for lab, amp in init.terms.items()
    )
    dev = max(dev, abs(ideal_mirror_norm - 1.0), report.mirror_identity_deviation)
    rows.append(CheckRow("mirror-swapped shared layer gives i * identity", dev, tol, dev <= tol))

    quoted = ideal.QUOTED_SUCCESS_PROBABILITY
    rows.append(
        CheckRow(
            "quoted success probability 0.183211 (informational)",
            abs(ideal.NO_INVASION_RETENTION - quoted),
            tol,
            True,
            gating=False,
            note=(
                "derived values: retention 6/32 = 0.1875, survivor arrival "
                "5/256 = 0.01953125; the quoted 0.183211 matches neither and "
                "is flagged as not reproducible"
            ),
        )
    )

    engine_half = engine.amplitudes(0.5)
    dev_half = max(
        abs(engine_half.get(k, 0j) - independent.joint_amplitudes.get(k, 0j)) for k in keys
    )
    rows.append(
        CheckRow(
            "delta 1/2 vs per-photon products (informational)",
            dev_half,
            tol,
            True,
            gating=False,
            note=(
                "delta 1/2 lies past the independence point 1/4; the sweep "
                "domain extends the closed-form polynomial, not the product law"
            ),
        )
    )

    return rows


def all_gating_passed(rows: list[CheckRow]) -> bool:
    return all(r.passed for r in rows if r.gating)
