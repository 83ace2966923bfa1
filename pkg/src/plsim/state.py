"""Labeled superposition states over a fixed set of subsystem slots.

A basis label is a partial assignment of symbols to subsystem slots: particle
mode slots (positron, electron, photon, the two spins A and B), the special
pair-annihilation symbol γ which replaces both particle slots, and apparatus
register slots appended by detection.  Slots carry a fixed global order so
states serialize and compare deterministically.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Iterator, Mapping, Sequence

from .amplitude import Amplitude, NoExactRootError, RootTwo

GAMMA = "γ"

SLOT_ORDER: tuple[str, ...] = (
    "pair",
    "positron",
    "electron",
    "photon",
    "A",
    "B",
    "meter+",
    "meter-",
    "meterP",
    "meterA",
    "meterB",
)
_SLOT_INDEX = {slot: i for i, slot in enumerate(SLOT_ORDER)}

# Display rank of mode symbols inside one slot (used for canonical term order).
_MODE_RANK: dict[tuple[str, str], int] = {}
for _slot, _modes in {
    "pair": (GAMMA,),
    "positron": ("e+", "u+", "v+", "c+", "d+"),
    "electron": ("e-", "u-", "v-", "c-", "d-"),
    "photon": ("e", "1", "2", "c", "d"),
    "A": ("up_A", "down_A"),
    "B": ("up_B", "down_B"),
}.items():
    for _i, _mode in enumerate(_modes):
        _MODE_RANK[(_slot, _mode)] = _i

_PHOTON_MODES = frozenset({"e", "1", "2", "c", "d"})


class SlotMismatchError(ValueError):
    """Two states (or two halves of a tensor product) disagree on slots."""


class ImpossibleConditionError(ValueError):
    """Conditioning on a value with exactly zero probability."""

    def __init__(self, slot: str, value: str):
        super().__init__(f"conditioning on {slot}={value!r} has probability 0")
        self.slot = slot
        self.value = value


def classify_symbol(symbol: str) -> str:
    """Map a mode or register symbol to its subsystem slot."""
    if symbol == GAMMA:
        return "pair"
    if symbol.startswith("C+=") or symbol.startswith("D+="):
        return "meter+"
    if symbol.startswith("C-=") or symbol.startswith("D-="):
        return "meter-"
    if symbol.startswith("D1=") or symbol.startswith("D2="):
        return "meterP"
    if symbol.startswith("A="):
        return "meterA"
    if symbol.startswith("B="):
        return "meterB"
    if symbol.endswith("_A"):
        return "A"
    if symbol.endswith("_B"):
        return "B"
    if symbol.endswith("+"):
        return "positron"
    if symbol.endswith("-"):
        return "electron"
    if symbol in _PHOTON_MODES:
        return "photon"
    raise ValueError(f"unknown subsystem symbol {symbol!r}")


@dataclass(frozen=True)
class Label:
    """Immutable basis label: (slot, symbol) pairs in canonical slot order."""

    parts: tuple[tuple[str, str], ...] = ()

    @classmethod
    def of(cls, *symbols: str) -> Label:
        parts = []
        for symbol in symbols:
            slot = classify_symbol(symbol)
            parts.append((slot, symbol))
        return cls._from_parts(parts)

    @classmethod
    def _from_parts(cls, parts: Iterable[tuple[str, str]]) -> Label:
        ordered = tuple(sorted(parts, key=lambda p: _SLOT_INDEX[p[0]]))
        slots = [slot for slot, _ in ordered]
        if len(set(slots)) != len(slots):
            dup = sorted({s for s in slots if slots.count(s) > 1})
            raise SlotMismatchError(f"duplicate subsystem slot(s) {dup} in label")
        if any(slot == "pair" for slot, _ in ordered) and any(
            slot in ("positron", "electron") for slot, _ in ordered
        ):
            raise SlotMismatchError("γ cannot coexist with a particle mode")
        return cls(ordered)

    def get(self, slot: str) -> str | None:
        for s, v in self.parts:
            if s == slot:
                return v
        return None

    def slots(self) -> frozenset[str]:
        return frozenset(s for s, _ in self.parts)

    def without(self, *slots: str) -> Label:
        return Label(tuple((s, v) for s, v in self.parts if s not in slots))

    def merge(self, other: Label) -> Label:
        return Label._from_parts((*self.parts, *other.parts))

    def with_symbols(self, *symbols: str) -> Label:
        return self.merge(Label.of(*symbols))

    def sort_key(self) -> tuple:
        return tuple(
            (_SLOT_INDEX[s], _MODE_RANK.get((s, v), 999), v) for s, v in self.parts
        )

    def __str__(self) -> str:
        return ",".join(v for _, v in self.parts)

    @classmethod
    def parse(cls, text: str) -> Label:
        if text == "":
            return cls()
        return cls.of(*text.split(","))


def _normalized_slots(slots: frozenset[str]) -> frozenset[str]:
    # γ stands in for both particle slots when checking slot compatibility.
    if "pair" in slots:
        return (slots - {"pair"}) | {"positron", "electron"}
    return slots


class Superposition:
    """Finite exact-amplitude map from basis labels; zero terms are dropped.

    Instances are immutable by convention: every operation returns a new
    state, so values can be shared freely across threads.
    """

    __slots__ = ("_terms",)

    def __init__(self, terms: Mapping[Label, Amplitude] | None = None):
        cleaned = {}
        for label, amp in (terms or {}).items():
            if not amp.is_zero():
                cleaned[label] = amp
        self._terms: dict[Label, Amplitude] = cleaned

    @classmethod
    def ket(cls, *symbols: str, amp: Amplitude | None = None) -> Superposition:
        return cls({Label.of(*symbols): amp if amp is not None else Amplitude.ONE})

    @classmethod
    def unit(cls) -> Superposition:
        """The empty-slot identity state (tensor unit)."""
        return cls({Label(): Amplitude.ONE})

    @classmethod
    def collect(cls, pairs: Iterable[tuple[Label, Amplitude]]) -> Superposition:
        terms: dict[Label, Amplitude] = {}
        for label, amp in pairs:
            if label in terms:
                terms[label] = terms[label] + amp
            else:
                terms[label] = amp
        return cls(terms)

    def items(self) -> list[tuple[Label, Amplitude]]:
        return sorted(self._terms.items(), key=lambda kv: kv[0].sort_key())

    def labels(self) -> list[Label]:
        return [label for label, _ in self.items()]

    def amplitude(self, label: Label) -> Amplitude:
        return self._terms.get(label, Amplitude.ZERO)

    def __len__(self) -> int:
        return len(self._terms)

    def __iter__(self) -> Iterator[tuple[Label, Amplitude]]:
        return iter(self.items())

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Superposition):
            return NotImplemented
        return self._terms == other._terms

    __hash__ = None  # type: ignore[assignment]

    def is_zero(self) -> bool:
        return not self._terms

    def slots(self) -> frozenset[str]:
        out: set[str] = set()
        for label in self._terms:
            out |= label.slots()
        return frozenset(out)

    def signature(self) -> frozenset[str]:
        return _normalized_slots(self.slots())

    def __add__(self, other: Superposition) -> Superposition:
        return Superposition.collect([*self._terms.items(), *other._terms.items()])

    def __sub__(self, other: Superposition) -> Superposition:
        return self + other.scale(-Amplitude.ONE)

    def scale(self, factor: Amplitude | RootTwo | int | Fraction) -> Superposition:
        return Superposition(
            {label: amp * factor for label, amp in self._terms.items()}
        )

    def tensor(self, other: Superposition) -> Superposition:
        overlap = self.signature() & other.signature()
        if overlap:
            raise SlotMismatchError(
                f"tensor factors share subsystem slot(s) {sorted(overlap)}"
            )
        return Superposition.collect(
            (la.merge(lb), aa * ab)
            for la, aa in self._terms.items()
            for lb, ab in other._terms.items()
        )

    def inner(self, other: Superposition) -> Amplitude:
        """Inner product, conjugate linear in self (the bra side)."""
        if not self.is_zero() and not other.is_zero():
            if self.signature() != other.signature():
                raise SlotMismatchError(
                    f"inner product over mismatched slots "
                    f"{sorted(self.signature())} vs {sorted(other.signature())}"
                )
        total = Amplitude.ZERO
        for label, amp in self._terms.items():
            other_amp = other._terms.get(label)
            if other_amp is not None:
                total = total + amp.conj() * other_amp
        return total

    def norm2(self) -> RootTwo:
        total = RootTwo.ZERO
        for amp in self._terms.values():
            total = total + amp.abs2()
        return total

    def is_normalized(self) -> bool:
        return self.norm2() == RootTwo.ONE

    def condition(self, slot: str, value: str) -> tuple[Superposition, RootTwo]:
        """Project onto slot=value; returns the unnormalized state and its
        exact squared norm (the outcome probability for normalized input)."""
        kept = {
            label: amp for label, amp in self._terms.items() if label.get(slot) == value
        }
        if not kept:
            raise ImpossibleConditionError(slot, value)
        projected = Superposition(kept)
        return projected, projected.norm2()

    def renormalized(self, probability: RootTwo | None = None) -> Superposition:
        """Scale to squared norm exactly 1.

        Needs the norm's square root to exist in Q(sqrt(2)); raises
        NoExactRootError otherwise (see RootTwo.sqrt for the float fallback).
        """
        prob = probability if probability is not None else self.norm2()
        if prob.sign() <= 0:
            raise NoExactRootError("cannot renormalize a zero state")
        root = prob.sqrt()
        return self.scale(root.inverse())

    def equal_up_to_phase(self, other: Superposition) -> bool:
        """True iff self = λ·other for some unit-modulus λ in Q(sqrt2, i)."""
        if self.is_zero() or other.is_zero():
            raise ValueError("phase comparison needs two nonzero states")
        mine, theirs = self.items(), other.items()
        if [l for l, _ in mine] != [l for l, _ in theirs]:
            return False
        lam = mine[0][1] / theirs[0][1]
        if lam.abs2() != RootTwo.ONE:
            return False
        return self == other.scale(lam)

    def __str__(self) -> str:
        if self.is_zero():
            return "0"
        return " + ".join(f"({amp})|{label}⟩" for label, amp in self.items())

    def __repr__(self) -> str:
        return f"Superposition({self})"

    # JSON wire format: [{"label": "u+,d-", "amp": {"a": "p/q", ...}}, ...]
    # in canonical label order; round-trips bit exactly.

    def to_json_obj(self) -> list[dict]:
        return [
            {
                "label": str(label),
                "amp": {
                    "a": str(amp.a),
                    "b": str(amp.b),
                    "c": str(amp.c),
                    "d": str(amp.d),
                },
            }
            for label, amp in self.items()
        ]

    @classmethod
    def from_json_obj(cls, data: Sequence[Mapping]) -> Superposition:
        terms = {}
        for entry in data:
            label = Label.parse(entry["label"])
            amp = entry["amp"]
            terms[label] = Amplitude.of(
                Fraction(amp["a"]),
                Fraction(amp["b"]),
                Fraction(amp["c"]),
                Fraction(amp["d"]),
            )
        return cls(terms)

    def to_json(self, **kwargs) -> str:
        return json.dumps(self.to_json_obj(), ensure_ascii=False, **kwargs)

    @classmethod
    def from_json(cls, text: str) -> Superposition:
        return cls.from_json_obj(json.loads(text))
