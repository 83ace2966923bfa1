"""Interferometer devices as exact linear maps on labeled states.

Conventions (fixed here, verified by the oracle tests):

* first splitters send the source mode to (i·reflected + transmitted)/√2,
  with u± (and photon path 2) the reflected leg;
* second splitters follow |u±⟩ → (i|d±⟩ + |c±⟩)/√2 and
  |v±⟩ → (i|c±⟩ + |d±⟩)/√2, which makes an undisturbed interferometer
  land entirely on the c (bright) port and leaves d dark;
* mirrors are exact identities, any constant mirror phase is a per-arm
  global phase and cancels in every observable;
* pair annihilation is a label substitution (u+, u-) → γ and the γ branch
  is inert afterwards;
* detection appends an orthogonal pointer register per arm, von Neumann
  style, with γ recording a double null result.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Mapping, Sequence

from .amplitude import Amplitude
from .state import GAMMA, Label, Superposition

I_SQ = Amplitude.I_INV_SQRT2  # i/√2
T_SQ = Amplitude.INV_SQRT2  # 1/√2


class UnexpectedModeError(ValueError):
    """A device met a mode it has no rule for on its arm."""


# rules: arm slot -> {input mode -> [(output symbols, coefficient), ...]}

_BS1_RULES: dict[str, dict[str, list[tuple[tuple[str, ...], Amplitude]]]] = {
    "positron": {"e+": [(("u+",), I_SQ), (("v+",), T_SQ)]},
    "electron": {"e-": [(("u-",), I_SQ), (("v-",), T_SQ)]},
    "photon": {"e": [(("1",), T_SQ), (("2",), I_SQ)]},
}

_BS2_RULES: dict[str, dict[str, list[tuple[tuple[str, ...], Amplitude]]]] = {
    "positron": {
        "u+": [(("d+",), I_SQ), (("c+",), T_SQ)],
        "v+": [(("c+",), I_SQ), (("d+",), T_SQ)],
    },
    "electron": {
        "u-": [(("d-",), I_SQ), (("c-",), T_SQ)],
        "v-": [(("c-",), I_SQ), (("d-",), T_SQ)],
    },
    "photon": {
        "1": [(("c",), I_SQ), (("d",), T_SQ)],
        "2": [(("d",), I_SQ), (("c",), T_SQ)],
    },
}

# Detection: mode -> appended pointer register.  γ on the particle arms
# records a null result in that arm's register.
_DETECT_RULES: dict[str, dict[str, str]] = {
    "positron": {"c+": "C+=1;D+=0", "d+": "C+=0;D+=1"},
    "electron": {"c-": "C-=1;D-=0", "d-": "C-=0;D-=1"},
    "photon": {"1": "D1=1;D2=0", "2": "D1=0;D2=1", "c": "D1=1;D2=0", "d": "D1=0;D2=1"},
    "A": {"up_A": "A=up", "down_A": "A=down"},
    "B": {"up_B": "B=up", "down_B": "B=down"},
}

_GAMMA_DETECT: dict[str, str] = {
    "positron": "C+=0;D+=0",
    "electron": "C-=0;D-=0",
}

METER_SLOT: dict[str, str] = {
    "positron": "meter+",
    "electron": "meter-",
    "photon": "meterP",
    "A": "meterA",
    "B": "meterB",
}


def _apply_rules(
    state: Superposition,
    arm: str,
    rules: Mapping[str, Sequence[tuple[tuple[str, ...], Amplitude]]],
    device: str,
    gamma_passes: bool,
) -> Superposition:
    def pieces():
        for label, amp in state.items():
            mode = label.get(arm)
            if mode is None:
                if gamma_passes and label.get("pair") == GAMMA:
                    yield label, amp
                    continue
                raise UnexpectedModeError(
                    f"{device} on arm {arm!r}: term |{label}⟩ has no {arm} mode"
                )
            if mode not in rules:
                raise UnexpectedModeError(
                    f"{device} on arm {arm!r}: unexpected input mode {mode!r}"
                )
            base = label.without(arm)
            for symbols, coeff in rules[mode]:
                yield base.with_symbols(*symbols), amp * coeff

    return Superposition.collect(pieces())


def apply_bs1(state: Superposition, arm: str) -> Superposition:
    """First 50/50 splitter: source mode to both paths, i on reflection."""
    if arm not in _BS1_RULES:
        raise UnexpectedModeError(f"no first splitter for arm {arm!r}")
    return _apply_rules(state, arm, _BS1_RULES[arm], "BS1", gamma_passes=False)


def apply_bs2(state: Superposition, arm: str) -> Superposition:
    """Recombining 50/50 splitter: path modes to output ports c/d."""
    if arm not in _BS2_RULES:
        raise UnexpectedModeError(f"no second splitter for arm {arm!r}")
    return _apply_rules(state, arm, _BS2_RULES[arm], "BS2", gamma_passes=True)


def apply_mirror(state: Superposition, arm: str) -> Superposition:
    """Mirrors are identity maps on mode labels."""
    return state


def annihilate(state: Superposition) -> Superposition:
    """Relabel every (u+, u-) term to the terminal symbol γ.

    Amplitudes are untouched; terms without joint u-path occupancy pass
    through, so the map is idempotent.
    """
    has_gamma = any(label.get("pair") == GAMMA for label, _ in state.items())
    targets = [
        (label, amp)
        for label, amp in state.items()
        if label.get("positron") == "u+" and label.get("electron") == "u-"
    ]
    if has_gamma and targets:
        raise UnexpectedModeError(
            "annihilation applied to a state that already carries γ"
        )

    def pieces():
        for label, amp in state.items():
            if label.get("positron") == "u+" and label.get("electron") == "u-":
                yield label.without("positron", "electron").with_symbols(GAMMA), amp
            else:
                yield label, amp

    return Superposition.collect(pieces())


def detect(state: Superposition, arm: str) -> Superposition:
    """Entangle the arm with its pointer register (ideal detectors)."""
    rules = _DETECT_RULES.get(arm)
    if rules is None:
        raise UnexpectedModeError(f"no detector bank for arm {arm!r}")
    meter = METER_SLOT[arm]

    def pieces():
        for label, amp in state.items():
            if label.get(meter) is not None:
                raise UnexpectedModeError(
                    f"detect on arm {arm!r}: register {meter} already present"
                )
            mode = label.get(arm)
            if mode is None:
                if label.get("pair") == GAMMA and arm in _GAMMA_DETECT:
                    yield label.with_symbols(_GAMMA_DETECT[arm]), amp
                    continue
                raise UnexpectedModeError(
                    f"detect on arm {arm!r}: term |{label}⟩ has no {arm} mode"
                )
            if mode not in rules:
                raise UnexpectedModeError(
                    f"detect on arm {arm!r}: mode {mode!r} is not at a detector"
                )
            yield label.with_symbols(rules[mode]), amp

    return Superposition.collect(pieces())


def relabel_ports_to_paths(state: Superposition, arm: str) -> Superposition:
    """Rename output ports back to path modes (c→u, d→v) on one arm.

    Utility for composing two recombining splitters in sequence, e.g. to
    check that a double pass equals i times a mode swap.
    """
    if arm == "photon":
        mapping = {"c": "1", "d": "2"}
    else:
        suffix = {"positron": "+", "electron": "-"}[arm]
        mapping = {f"c{suffix}": f"u{suffix}", f"d{suffix}": f"v{suffix}"}

    def pieces():
        for label, amp in state.items():
            mode = label.get(arm)
            if mode in mapping:
                yield label.without(arm).with_symbols(mapping[mode]), amp
            else:
                yield label, amp

    return Superposition.collect(pieces())


@dataclass(frozen=True)
class DeviceOp:
    """A named device bound to an arm, applied as a pure function."""

    kind: str
    arm: str
    apply: Callable[[Superposition], Superposition]


def make_device(kind: str, arm: str) -> DeviceOp:
    if kind == "bs1":
        return DeviceOp(kind, arm, lambda s: apply_bs1(s, arm))
    if kind == "bs2":
        return DeviceOp(kind, arm, lambda s: apply_bs2(s, arm))
    if kind == "mirror":
        return DeviceOp(kind, arm, lambda s: apply_mirror(s, arm))
    if kind == "annihilate":
        return DeviceOp(kind, arm, annihilate)
    if kind == "detect":
        return DeviceOp(kind, arm, lambda s: detect(s, arm))
    raise ValueError(f"unknown device kind {kind!r}")
