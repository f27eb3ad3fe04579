"""Per-photon path bookkeeping with failure-weighted two-photon interference.

Photons are tracked as distinguishable particles.  Every photon has a small
set of possible walks through the network (4 for photons 1 and 5, 6 for the
middle three); a joint history combines one walk per photon and carries a
symbolic coefficient: a power of i (one unit per reflection or mirror
bounce) and an exponent map over the splitter amplitude symbols.

A joint outcome records which photon terminated in which channel, and all
joint histories realizing the same outcome are summed coherently.  Detector
clicks alone cannot tell the photons apart, which is exactly why wrong-photon
outcomes survive the detector postselection.

Imperfect two-photon interference enters through a single failure weight
delta in [0, 1/2].  Whenever two photons take the same action (both reflect,
or both transmit) at one of the four shared layer-2 splitters, the squared
amplitude symbol of that event is evaluated as sqrt(delta) instead of at its
face value r*r = t*t = 1/2:

  * delta = 0 removes these same-action double events entirely; this is
    perfect interference, where the paired both-reflect/both-transmit
    amplitudes cancel each other.
  * delta = 1/4 gives the double events their face weight 1/2 back, which
    makes every photon propagate independently (fully distinguishable
    photons; cross-checked against the product oracle).
  * values up to 1/2 continue the same polynomial past the independence
    point and are accepted because the sweep range is specified over
    [0, 1/2].

All published overlaps are therefore polynomials in sqrt(delta).
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from itertools import product

from . import ideal
from .circuit import (
    CENTRAL_SPLITTERS,
    DETECTOR_CHANNELS,
    CircuitLayout,
    standard_layout,
)
from .states import channel_of

DELTA_MIN = 0.0
DELTA_MAX = 0.5
INDEPENDENCE_DELTA = 0.25  # double-event weight sqrt(1/4) equals the face value 1/2

PAIR_ORDER = (("D1", "D3"), ("D1", "D4"), ("D2", "D3"), ("D2", "D4"))

_PRUNE = 1e-15


@dataclass(frozen=True)
class PhotonHistory:
    """One photon's walk: ordered events plus the channel it ends in."""

    photon: int
    events: tuple[tuple[str, str], ...]  # (element id, reflect|transmit|mirror)
    terminal: int
    i_power: int
    symbols: tuple[tuple[str, str], ...]  # (element id, 'R'|'T') per splitter pass


@dataclass(frozen=True)
class CoefficientMonomial:
    """i^i_power times a product of splitter amplitude symbols."""

    i_power: int
    exponents: tuple[tuple[tuple[str, str], int], ...]  # ((eid, 'R'|'T'), exponent)


@dataclass(frozen=True)
class JointHistory:
    histories: tuple[PhotonHistory, ...]
    coefficient: CoefficientMonomial
    outcome: tuple[int, ...]  # photon j terminates in outcome[j-1]


@dataclass(frozen=True)
class OccupationOutcome:
    """Joint outcome with its channel occupancy and summed amplitude."""

    assignment: tuple[int, ...]
    occupancy: dict[int, int]
    amplitude: complex


def photon_histories(layout: CircuitLayout, photon: int) -> list[PhotonHistory]:
    """Every walk of one photon from its source to a terminal channel."""
    source = layout.source_splitter(photon)
    up, down = source.ports
    seeds = [
        (up, (("BS%d" % photon, "transmit"),), 0, (("BS%d" % photon, "T"),)),
        (down, (("BS%d" % photon, "reflect"),), 1, (("BS%d" % photon, "R"),)),
    ]
    finished: list[PhotonHistory] = []
    for channel, events, i_power, symbols in seeds:
        branches = [(channel, events, i_power, symbols)]
        for layer in (2, 3):
            grown = []
            for ch, ev, ip, sym in branches:
                element = layout.element_on(ch, layer)
                if element is None:
                    grown.append((ch, ev, ip, sym))
                elif element.kind == "mirror":
                    grown.append((ch, ev + ((element.eid, "mirror"),), ip + 1, sym))
                else:
                    partner = element.partner(ch)
                    reflect_to = partner if element.reflect_crosses else ch
                    transmit_to = ch if element.reflect_crosses else partner
                    grown.append(
                        (reflect_to, ev + ((element.eid, "reflect"),), ip + 1, sym + ((element.eid, "R"),))
                    )
                    grown.append(
                        (transmit_to, ev + ((element.eid, "transmit"),), ip, sym + ((element.eid, "T"),))
                    )
            branches = grown
        finished.extend(PhotonHistory(photon, ev, ch, ip, sym) for ch, ev, ip, sym in branches)
    return finished


def _combine(parts: tuple[PhotonHistory, ...]) -> CoefficientMonomial:
    exponents: dict[tuple[str, str], int] = {}
    i_power = 0
    for part in parts:
        i_power += part.i_power
        for key in part.symbols:
            exponents[key] = exponents.get(key, 0) + 1
    return CoefficientMonomial(i_power % 4, tuple(sorted(exponents.items())))


def enumerate_joint_histories(layout: CircuitLayout | None = None) -> list[JointHistory]:
    """All joint walks of the five photons (4*6*6*6*4 = 3456 of them)."""
    layout = layout or standard_layout()
    per_photon = [photon_histories(layout, p) for p in range(1, 6)]
    joint = []
    for parts in product(*per_photon):
        joint.append(
            JointHistory(parts, _combine(parts), tuple(part.terminal for part in parts))
        )
    return joint


def evaluate_coefficient(
    monomial: CoefficientMonomial, delta: float, layout: CircuitLayout | None = None
) -> complex:
    """Numeric value of a coefficient monomial at a given failure weight.

    Squared symbols of the shared layer-2 splitters evaluate to sqrt(delta);
    every other symbol contributes its face amplitude (r or t of its
    element, 1/sqrt2 in the balanced network) per power.
    """
    if not DELTA_MIN <= delta <= DELTA_MAX:
        raise ValueError(f"delta must lie in [{DELTA_MIN}, {DELTA_MAX}], got {delta}")
    layout = layout or standard_layout()
    value: complex = 1j ** (monomial.i_power % 4)
    for (eid, sym), exponent in monomial.exponents:
        central = eid in CENTRAL_SPLITTERS
        if central and exponent == 2:
            value *= math.sqrt(delta)
        elif central and exponent > 2:
            raise ValueError(f"impossible exponent {exponent} on shared splitter {eid}")
        else:
            element = layout.element(eid)
            face = element.r if sym == "R" else element.t
            value *= face**exponent
    return value


def _occupancy(assignment: tuple[int, ...]) -> dict[int, int]:
    occ: dict[int, int] = {}
    for ch in assignment:
        occ[ch] = occ.get(ch, 0) + 1
    return occ


def _one_photon_per_circuit(assignment: tuple[int, ...]) -> bool:
    """True when every circuit's two arms hold exactly one photon combined.

    This is the strong postselection: it rejects not only multiply occupied
    channels but also runs where two photons leave one circuit by different
    arms, or where a circuit ends up empty because its photon was detected
    in somebody else's place.
    """
    occ = _occupancy(assignment)
    return all(occ.get(2 * j - 1, 0) + occ.get(2 * j, 0) == 1 for j in range(1, 6))


def _detector_signature(assignment: tuple[int, ...]) -> tuple[str, str] | None:
    """Which detector pair an outcome feeds, if exactly one photon sits on
    each of two opposite detectors and none on the other two."""
    occ = _occupancy(assignment)
    counts = tuple(occ.get(DETECTOR_CHANNELS[d], 0) for d in ("D1", "D2", "D3", "D4"))
    if counts == (1, 0, 1, 0):
        return ("D1", "D3")
    if counts == (1, 0, 0, 1):
        return ("D1", "D4")
    if counts == (0, 1, 1, 0):
        return ("D2", "D3")
    if counts == (0, 1, 0, 1):
        return ("D2", "D4")
    return None


class HistoryEngine:
    """Precomputed joint histories grouped by outcome.

    Per outcome the summed coefficient is a quadratic polynomial in
    x = sqrt(delta) (at most two shared splitters can host a same-action
    double event at once), so sweeping delta is just polynomial evaluation.
    """

    def __init__(self, layout: CircuitLayout | None = None):
        self.layout = layout or standard_layout()
        self.joint_histories = enumerate_joint_histories(self.layout)
        polys: dict[tuple[int, ...], list[complex]] = {}
        for jh in self.joint_histories:
            phase: complex = 1j ** (jh.coefficient.i_power % 4)
            numeric = phase
            doubles = 0
            for (eid, sym), exponent in jh.coefficient.exponents:
                if eid in CENTRAL_SPLITTERS and exponent == 2:
                    doubles += 1
                else:
                    element = self.layout.element(eid)
                    face = element.r if sym == "R" else element.t
                    numeric *= face**exponent
            coeffs = polys.setdefault(jh.outcome, [0j, 0j, 0j])
            coeffs[doubles] += numeric
        self._polys = {k: tuple(v) for k, v in sorted(polys.items())}
        self._signatures = {k: _detector_signature(k) for k in self._polys}
        self._single_occ = {k: _one_photon_per_circuit(k) for k in self._polys}
        self._desired = {
            pair: desired_assignment_state(pair, self.layout) for pair in PAIR_ORDER
        }

    def amplitudes(self, delta: float) -> dict[tuple[int, ...], complex]:
        """Summed amplitude of every joint outcome at the given delta."""
        if not DELTA_MIN <= delta <= DELTA_MAX:
            raise ValueError(f"delta must lie in [{DELTA_MIN}, {DELTA_MAX}], got {delta}")
        x = math.sqrt(delta)
        return {k: c0 + c1 * x + c2 * x * x for k, (c0, c1, c2) in self._polys.items()}

    def general_outcome(self, delta: float) -> list[OccupationOutcome]:
        return [
            OccupationOutcome(assignment, _occupancy(assignment), amp)
            for assignment, amp in self.amplitudes(delta).items()
            if abs(amp) >= _PRUNE
        ]

    def curve_rows(self, delta: float) -> list["CurveRow"]:
        """The four detector-pair rows (generation probability and the two
        postselected fidelities) at one delta."""
        amps = self.amplitudes(delta)
        desired = self._desired
        rows = []
        for pair in PAIR_ORDER:
            overlap = sum(
                target.conjugate() * amps.get(assignment, 0j)
                for assignment, target in desired[pair].items()
            )
            p_gen = abs(overlap) ** 2
            norm_ps = 0.0
            norm_single = 0.0
            for assignment, amp in amps.items():
                if self._signatures[assignment] != pair:
                    continue
                w = abs(amp) ** 2
                norm_ps += w
                if self._single_occ[assignment]:
                    norm_single += w
            f_ps = p_gen / norm_ps if norm_ps > 1e-30 else math.nan
            f_single = p_gen / norm_single if norm_single > 1e-30 else math.nan
            rows.append(CurveRow(delta, pair, p_gen, f_ps, f_single))
        return rows


def general_outcome(layout: CircuitLayout | None, delta: float) -> list[OccupationOutcome]:
    return HistoryEngine(layout).general_outcome(delta)


def postselect_detectors(outcomes: list[OccupationOutcome], pair) -> list[OccupationOutcome]:
    """Keep outcomes with one photon on each detector of the pair and none
    on the other two detectors."""
    pair = _as_pair(pair)
    return [o for o in outcomes if _detector_signature(o.assignment) == pair]


def postselect_single_occupancy(outcomes: list[OccupationOutcome]) -> list[OccupationOutcome]:
    """Keep outcomes where exactly one photon leaves every circuit.

    Counting photons per circuit (both arms together) discards every
    multiply occupied channel and additionally the runs where one circuit
    emits two photons on separate arms while another goes dark; those runs
    pass the detector check but can never carry the target state.
    """
    return [o for o in outcomes if _one_photon_per_circuit(o.assignment)]


def _as_pair(pair) -> tuple[str, str]:
    if isinstance(pair, str):
        pair = (pair[:2], pair[2:])
    pair = tuple(pair)
    if pair not in PAIR_ORDER:
        raise ValueError(f"unknown detector pair {pair!r}")
    return pair


def pair_name(pair) -> str:
    a, b = _as_pair(pair)
    return a + b


def desired_assignment_state(pair, layout: CircuitLayout | None = None) -> dict[tuple[int, ...], complex]:
    """The target outcome for a detector pair, as joint-outcome amplitudes.

    The three signal photons carry the conditional state of the ideal
    pipeline translated to channel labels; the mediators sit on the pair's
    detector channels.
    """
    pair = _as_pair(pair)
    layout = layout or standard_layout()
    conditional = ideal.condition_on_pair(ideal.survivor_state()[0], pair)
    det2 = layout.detector_channel(pair[0])
    det4 = layout.detector_channel(pair[1])
    target: dict[tuple[int, ...], complex] = {}
    for (x1, x3, x5), amp in conditional.state.terms.items():
        assignment = (
            channel_of(1, x1),
            det2,
            channel_of(3, x3),
            det4,
            channel_of(5, x5),
        )
        target[assignment] = amp
    return target


@dataclass(frozen=True)
class CurveRow:
    delta: float
    pair: tuple[str, str]
    p_gen: float
    f_postselected: float
    f_single_occupancy: float


def default_grid(points: int = 101, lo: float = 0.0, hi: float = 0.5) -> list[float]:
    if points < 2:
        raise ValueError("a sweep needs at least 2 grid points")
    if not (DELTA_MIN <= lo < hi <= DELTA_MAX):
        raise ValueError(f"grid bounds must satisfy {DELTA_MIN} <= lo < hi <= {DELTA_MAX}")
    # k/(points-1) hits 1.0 exactly, so the endpoints are reproduced verbatim
    return [lo + (hi - lo) * k / (points - 1) for k in range(points)]


def overlap_curves(
    delta_grid: list[float],
    layout: CircuitLayout | None = None,
    workers: int = 1,
    engine: HistoryEngine | None = None,
) -> list[CurveRow]:
    """Curve rows for every (delta, pair), ordered delta-major then pair.

    The result is byte-identical for any worker count: each delta row is an
    independent pure evaluation and rows are reassembled in grid order.
    """
    engine = engine or HistoryEngine(layout)
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            chunks = list(pool.map(engine.curve_rows, delta_grid))
    else:
        chunks = [engine.curve_rows(d) for d in delta_grid]
    return [row for chunk in chunks for row in chunk]
