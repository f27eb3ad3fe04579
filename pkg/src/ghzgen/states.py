"""Sparse complex state vectors over discrete photon-mode labels.

A state maps basis labels to amplitudes.  A label assigns one mode to every
photon the state describes, either as a letter ('A' upper arm, 'B' lower arm
of that photon's own circuit) or as an interferometer channel number 1..10.
All labels of one state use the same form; the two forms are interconvertible
as long as every photon sits inside its home circuit (photon j owns channels
2j-1 and 2j).

States are immutable after construction and every operation is a pure
function, so they can be shared freely between workers.
"""

from __future__ import annotations

import json
import math
from typing import Iterable, Mapping

PRUNE_TOLERANCE = 1e-15
_NORM_FLOOR = 1e-30

MODE_LETTERS = ("A", "B")
N_CHANNELS = 10

Label = tuple
Mode = "str | int"


def home_channels(photon: int) -> tuple[int, int]:
    """Upper and lower channel owned by the given photon's circuit."""
    return 2 * photon - 1, 2 * photon


def channel_of(photon: int, letter: str) -> int:
    up, down = home_channels(photon)
    return up if letter == "A" else down


def letter_of(photon: int, channel: int) -> str | None:
    """Arm letter for a channel, or None when the photon is not home."""
    up, down = home_channels(photon)
    if channel == up:
        return "A"
    if channel == down:
        return "B"
    return None


def _check_mode(mode) -> None:
    if isinstance(mode, str):
        if mode not in MODE_LETTERS:
            raise ValueError(f"mode letter must be 'A' or 'B', got {mode!r}")
    elif isinstance(mode, int):
        if not 1 <= mode <= N_CHANNELS:
            raise ValueError(f"channel must be in 1..{N_CHANNELS}, got {mode}")
    else:
        raise TypeError(f"mode must be a letter or a channel number, got {mode!r}")


class SparseState:
    """Immutable sparse amplitude vector keyed by per-photon mode labels."""

    __slots__ = ("photons", "terms")

    def __init__(self, photons: Iterable[int], terms: Mapping[Label, complex]):
        photon_tuple = tuple(sorted(photons))
        if not photon_tuple:
            raise ValueError("a state needs at least one photon")
        if len(set(photon_tuple)) != len(photon_tuple):
            raise ValueError("duplicate photon indices")
        kept: dict[Label, complex] = {}
        form = None
        for label, amp in terms.items():
            label = tuple(label)
            if len(label) != len(photon_tuple):
                raise ValueError(f"label {label!r} does not address every photon")
            for mode in label:
                _check_mode(mode)
            label_form = str if isinstance(label[0], str) else int
            if any(not isinstance(m, label_form) for m in label):
                raise ValueError(f"label {label!r} mixes letter and channel modes")
            if form is None:
                form = label_form
            elif label_form is not form:
                raise ValueError("state mixes letter-form and channel-form labels")
            amp = complex(amp)
            if not (math.isfinite(amp.real) and math.isfinite(amp.imag)):
                raise ValueError(f"non-finite amplitude on {label!r}")
            if abs(amp) >= PRUNE_TOLERANCE:
                kept[label] = kept.get(label, 0j) + amp
        object.__setattr__(self, "photons", photon_tuple)
        object.__setattr__(self, "terms", kept)

    def __setattr__(self, name, value):
        raise AttributeError("SparseState is immutable")

    def __len__(self) -> int:
        return len(self.terms)

    def amplitude(self, label: Label) -> complex:
        return self.terms.get(tuple(label), 0j)

    def norm_sq(self) -> float:
        return sum(abs(a) ** 2 for a in self.terms.values())

    def items_sorted(self):
        return sorted(self.terms.items(), key=lambda kv: kv[0])

    def is_channel_form(self) -> bool:
        return all(isinstance(m, int) for lab in self.terms for m in lab)

    def all_photons_home(self) -> bool:
        if not self.is_channel_form():
            return True
        return all(
            letter_of(p, lab[i]) is not None
            for lab in self.terms
            for i, p in enumerate(self.photons)
        )

    def __repr__(self) -> str:
        return f"SparseState(photons={self.photons}, n_terms={len(self.terms)})"


def single_photon_state(photon: int, amplitudes: Mapping[Mode, complex]) -> SparseState:
    return SparseState((photon,), {(mode,): amp for mode, amp in amplitudes.items()})


def inner_product(a: SparseState, b: SparseState) -> complex:
    """Overlap <a|b>, conjugate linear in the first argument."""
    if a.photons != b.photons:
        raise ValueError(f"photon sets differ: {a.photons} vs {b.photons}")
    if len(a.terms) > len(b.terms):
        return sum(a.terms[lab].conjugate() * amp for lab, amp in b.terms.items() if lab in a.terms)
    return sum(amp.conjugate() * b.terms[lab] for lab, amp in a.terms.items() if lab in b.terms)


def normalize(state: SparseState) -> tuple[SparseState, float]:
    """Unit-norm copy of the state plus its squared norm before scaling."""
    nsq = state.norm_sq()
    if nsq <= _NORM_FLOOR:
        raise ValueError("cannot normalize a zero state")
    scale = 1.0 / math.sqrt(nsq)
    return SparseState(state.photons, {lab: amp * scale for lab, amp in state.terms.items()}), nsq


def tensor(a: SparseState, b: SparseState) -> SparseState:
    """Product state over the union of two disjoint photon sets."""
    if set(a.photons) & set(b.photons):
        raise ValueError("photon sets overlap")
    photons = tuple(sorted(a.photons + b.photons))
    position = {p: i for i, p in enumerate(photons)}
    out: dict[Label, complex] = {}
    for lab_a, amp_a in a.terms.items():
        for lab_b, amp_b in b.terms.items():
            merged = [None] * len(photons)
            for p, m in zip(a.photons, lab_a):
                merged[position[p]] = m
            for p, m in zip(b.photons, lab_b):
                merged[position[p]] = m
            out[tuple(merged)] = amp_a * amp_b
    return SparseState(photons, out)


def project_rank1(state: SparseState, bra_factors: list[SparseState]) -> SparseState:
    """Unnormalized residual after projecting some photons onto bra states.

    Each bra factor is a normalized single-photon state.  The measured
    photons are removed; the returned state lives on the remaining photons
    and carries the projection amplitudes, so its squared norm is the
    detection probability.
    """
    measured: dict[int, SparseState] = {}
    for bra in bra_factors:
        if len(bra.photons) != 1:
            raise ValueError("each bra factor must address exactly one photon")
        p = bra.photons[0]
        if p not in state.photons:
            raise ValueError(f"bra addresses photon {p} absent from the state")
        if p in measured:
            raise ValueError(f"photon {p} addressed by two bra factors")
        if abs(bra.norm_sq() - 1.0) > 1e-6:
            raise ValueError(f"bra factor on photon {p} is not normalized")
        measured[p] = bra
    remaining = [p for p in state.photons if p not in measured]
    if not remaining:
        raise ValueError("at least one photon must remain after projection")
    keep_idx = [i for i, p in enumerate(state.photons) if p not in measured]
    meas_idx = [(i, measured[p]) for i, p in enumerate(state.photons) if p in measured]
    out: dict[Label, complex] = {}
    for lab, amp in state.terms.items():
        weight = amp
        for i, bra in meas_idx:
            weight *= bra.amplitude((lab[i],)).conjugate()
            if weight == 0:
                break
        if weight == 0:
            continue
        reduced = tuple(lab[i] for i in keep_idx)
        out[reduced] = out.get(reduced, 0j) + weight
    return SparseState(remaining, out)


def scale(state: SparseState, factor: complex) -> SparseState:
    return SparseState(state.photons, {lab: amp * factor for lab, amp in state.terms.items()})


def to_channel_form(state: SparseState) -> SparseState:
    if state.is_channel_form():
        return state
    out = {
        tuple(channel_of(p, m) for p, m in zip(state.photons, lab)): amp
        for lab, amp in state.terms.items()
    }
    return SparseState(state.photons, out)


def to_letter_form(state: SparseState) -> SparseState:
    """Channel labels to arm letters; fails if any photon left its circuit."""
    if not state.is_channel_form():
        return state
    out: dict[Label, complex] = {}
    for lab, amp in state.terms.items():
        letters = []
        for p, c in zip(state.photons, lab):
            letter = letter_of(p, c)
            if letter is None:
                raise ValueError(f"photon {p} in channel {c} has no home-arm letter")
            letters.append(letter)
        out[tuple(letters)] = amp
    return SparseState(state.photons, out)


def state_to_json(state: SparseState) -> dict:
    """JSON payload; letter form is used whenever every photon is home."""
    emit = state
    if state.is_channel_form() and state.all_photons_home():
        emit = to_letter_form(state)
    terms = [
        {
            "label": {str(p): m for p, m in zip(emit.photons, lab)},
            "re": amp.real,
            "im": amp.imag,
        }
        for lab, amp in emit.items_sorted()
    ]
    return {"photons": list(emit.photons), "terms": terms}


def state_from_json(payload: Mapping) -> SparseState:
    photons = tuple(int(p) for p in payload["photons"])
    terms: dict[Label, complex] = {}
    for entry in payload["terms"]:
        label_map = entry["label"]
        label = tuple(label_map[str(p)] for p in photons)
        terms[label] = complex(float(entry["re"]), float(entry.get("im", 0.0)))
    return SparseState(photons, terms)


def save_state(state: SparseState, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(state_to_json(state), fh, indent=2)
        fh.write("\n")


def load_state(path) -> SparseState:
    with open(path, encoding="utf-8") as fh:
        return state_from_json(json.load(fh))
