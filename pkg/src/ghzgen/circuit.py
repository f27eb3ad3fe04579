"""Fixed splitter-network geometry: ten channels, three layers, four detectors.

Channel 2j-1 carries the upper (A) arm and channel 2j the lower (B) arm of
photon j's circuit.  Layer 1 splits each source into its two arms.  Layer 2
is the shared row where neighbouring circuits meet: splitters BS6..BS9 couple
arm A_j to arm B_{j+1}, and the two outermost arms (B_1, A_5) see plain
mirrors.  Layer 3 recombines the arms of circuits 2 and 4 in front of the
four detectors (channel 3 -> D1, 4 -> D2, 7 -> D3, 8 -> D4).

Scattering phases: every reflection carries a factor i, transmission none.
Port bookkeeping differs by geometry.  At the shared layer-2 splitters a
reflected photon bounces back into its incident channel and a transmitted
one crosses into the partner circuit.  The layer-3 recombiners sit inside a
single circuit where the two arms converge, so there the transmitted beam
keeps its channel label and the reflected beam is deflected into the partner
output port; this is what routes the detector-addressed superpositions
(i|A> + |B>)/sqrt2 and (i|A> - |B>)/sqrt2 cleanly onto one detector each.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

N_CHANNELS = 10
INV_SQRT2 = 1.0 / math.sqrt(2.0)

DETECTOR_CHANNELS = {"D1": 3, "D2": 4, "D3": 7, "D4": 8}
CHANNEL_DETECTORS = {c: d for d, c in DETECTOR_CHANNELS.items()}
CENTRAL_SPLITTERS = frozenset({"BS6", "BS7", "BS8", "BS9"})

_R2_TOL = 1e-12


def circuit_of(channel: int) -> int:
    return (channel + 1) // 2


@dataclass(frozen=True)
class Element:
    """One optical element: a two-port beam splitter or a one-port mirror."""

    kind: str  # "beam_splitter" | "mirror"
    eid: str
    ports: tuple[int, ...]
    layer: int
    r: float = INV_SQRT2
    t: float = INV_SQRT2
    reflect_crosses: bool = False

    def __post_init__(self):
        if self.kind not in ("beam_splitter", "mirror"):
            raise ValueError(f"unknown element kind {self.kind!r}")
        n_ports = 2 if self.kind == "beam_splitter" else 1
        if len(self.ports) != n_ports or len(set(self.ports)) != n_ports:
            raise ValueError(f"{self.eid}: expected {n_ports} distinct port(s)")
        for c in self.ports:
            if not 1 <= c <= N_CHANNELS:
                raise ValueError(f"{self.eid}: port {c} outside 1..{N_CHANNELS}")
        if self.kind == "beam_splitter" and abs(self.r**2 + self.t**2 - 1.0) > _R2_TOL:
            raise ValueError(f"{self.eid}: r^2 + t^2 must be 1")

    def partner(self, channel: int) -> int:
        a, b = self.ports
        return b if channel == a else a

    def scatter(self, channel: int) -> list[tuple[int, complex]]:
        """Output branches (channel, amplitude) for a photon in one port."""
        if channel not in self.ports:
            raise ValueError(f"channel {channel} is not a port of {self.eid}")
        if self.kind == "mirror":
            return [(channel, 1j)]
        reflect_to = self.partner(channel) if self.reflect_crosses else channel
        transmit_to = channel if self.reflect_crosses else self.partner(channel)
        return [(reflect_to, 1j * self.r), (transmit_to, complex(self.t))]

    def source_split(self) -> list[tuple[int, complex]]:
        """Layer-1 entry: the source transmits into the upper port and
        reflects into the lower one."""
        if self.layer != 1 or self.kind != "beam_splitter":
            raise ValueError(f"{self.eid} is not a source splitter")
        up, down = self.ports
        return [(up, complex(self.t)), (down, 1j * self.r)]

    def scattering_matrix(self):
        """2x2 matrix in the (first port, second port) basis."""
        if self.kind == "mirror":
            return [[1j]]
        rows = {}
        for c in self.ports:
            amps = dict(self.scatter(c))
            rows[c] = [amps.get(p, 0j) for p in self.ports]
        return [rows[self.ports[0]], rows[self.ports[1]]]


_STANDARD_TOPOLOGY = (
    # (kind, id, ports, layer, reflect_crosses)
    ("beam_splitter", "BS1", (1, 2), 1, False),
    ("beam_splitter", "BS2", (3, 4), 1, False),
    ("beam_splitter", "BS3", (5, 6), 1, False),
    ("beam_splitter", "BS4", (7, 8), 1, False),
    ("beam_splitter", "BS5", (9, 10), 1, False),
    ("beam_splitter", "BS6", (1, 4), 2, False),
    ("beam_splitter", "BS7", (3, 6), 2, False),
    ("beam_splitter", "BS8", (5, 8), 2, False),
    ("beam_splitter", "BS9", (7, 10), 2, False),
    ("mirror", "M1", (2,), 2, False),
    ("mirror", "M2", (9,), 2, False),
    ("beam_splitter", "BS10", (3, 4), 3, True),
    ("beam_splitter", "BS11", (7, 8), 3, True),
)


@dataclass(frozen=True)
class CircuitLayout:
    """The full element list in layer order plus the detector wiring."""

    elements: tuple[Element, ...]
    detector_map: dict[int, str] = field(default_factory=lambda: dict(CHANNEL_DETECTORS))

    def __post_init__(self):
        self.validate()

    def validate(self) -> None:
        by_id = {e.eid: e for e in self.elements}
        if len(by_id) != len(self.elements):
            raise ValueError("duplicate element ids")
        expected = {row[1]: row for row in _STANDARD_TOPOLOGY}
        if set(by_id) != set(expected):
            raise ValueError(f"layout must contain exactly {sorted(expected)}")
        for eid, (kind, _, ports, layer, crosses) in expected.items():
            e = by_id[eid]
            if (e.kind, e.ports, e.layer, e.reflect_crosses) != (kind, ports, layer, crosses):
                raise ValueError(f"{eid} deviates from the fixed topology")
        touched = [c for e in self.elements if e.layer == 2 for c in e.ports]
        if sorted(touched) != list(range(1, N_CHANNELS + 1)):
            raise ValueError("layer 2 must touch every channel exactly once")
        if self.detector_map != CHANNEL_DETECTORS:
            raise ValueError("detector wiring must be 3->D1, 4->D2, 7->D3, 8->D4")

    def element(self, eid: str) -> Element:
        for e in self.elements:
            if e.eid == eid:
                return e
        raise KeyError(eid)

    def element_on(self, channel: int, layer: int) -> Element | None:
        for e in self.elements:
            if e.layer == layer and channel in e.ports:
                return e
        return None

    def layer_elements(self, layer: int) -> tuple[Element, ...]:
        return tuple(e for e in self.elements if e.layer == layer)

    def source_splitter(self, photon: int) -> Element:
        return self.element(f"BS{photon}")

    def detector_channel(self, detector: str) -> int:
        return DETECTOR_CHANNELS[detector]


def standard_layout() -> CircuitLayout:
    """The built-in 13-element network with balanced splitters."""
    return CircuitLayout(
        tuple(
            Element(kind, eid, ports, layer, reflect_crosses=crosses)
            for kind, eid, ports, layer, crosses in _STANDARD_TOPOLOGY
        )
    )


def apply_element_single(photon_channel: int, element: Element) -> list[tuple[int, complex]]:
    """Single-photon scattering branches for a photon sitting in one port."""
    return element.scatter(photon_channel)


def layout_from_json(payload) -> CircuitLayout:
    """Build a layout from a JSON element list; topology is checked, only
    the splitting ratios are free."""
    crosses_by_id = {row[1]: row[4] for row in _STANDARD_TOPOLOGY}
    elements = []
    for entry in payload["elements"]:
        eid = entry["id"]
        kwargs = {}
        if "r" in entry:
            kwargs["r"] = float(entry["r"])
        if "t" in entry:
            kwargs["t"] = float(entry["t"])
        elements.append(
            Element(
                entry["kind"],
                eid,
                tuple(int(c) for c in entry["ports"]),
                int(entry["layer"]),
                reflect_crosses=bool(entry.get("reflect_crosses", crosses_by_id.get(eid, False))),
                **kwargs,
            )
        )
    return CircuitLayout(tuple(elements))


def load_layout(path) -> CircuitLayout:
    with open(path, encoding="utf-8") as fh:
        return layout_from_json(json.load(fh))
