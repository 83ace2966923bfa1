"""Event schedules, frame orderings, and exact history evaluation.

A scenario is a causal partial order of local device events plus named
frames, where a frame is nothing more than a total ordering of the events
(a linear extension of the causal order).  Evaluation comes in two modes:
unitary (no conditioning, read the outcome distribution off the final
apparatus registers) and collapse (condition on a post-selected detector
configuration at each detection event, in frame order, recording exact
intermediate states and the path facts they certify).
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from math import lcm
from typing import Callable, Iterator, Mapping, Sequence

from .amplitude import Amplitude, NoExactRootError, RootTwo
from .optics import METER_SLOT, DeviceOp, make_device
from .state import (
    ImpossibleConditionError,
    Label,
    SLOT_ORDER,
    Superposition,
    classify_symbol,
)


class FrameOrderError(ValueError):
    """A frame ordering is not a linear extension of the causal order."""

    def __init__(self, frame: str, message: str, pair: tuple[str, str] | None = None):
        super().__init__(f"frame {frame!r}: {message}")
        self.frame = frame
        self.pair = pair


class ZeroProbabilityError(ValueError):
    """Post-selected configuration has exactly zero probability."""


class PostSelectError(ValueError):
    """Post-selection string is malformed, unknown, or ambiguous."""


class UnknownScenarioError(ValueError):
    pass


@dataclass(frozen=True)
class Event:
    """One local device application with its causal predecessors."""

    id: str
    kind: str
    arm: str
    after: frozenset[str] = frozenset()


@dataclass(frozen=True)
class Frame:
    """A named total ordering of the scenario's events."""

    name: str
    order: tuple[str, ...]


@dataclass(frozen=True, order=True)
class PathFact:
    """An element-of-reality statement certified by an exact eigenstate.

    subject is an arm slot (or "joint" for the overlapping path pair), kind
    is "certain" (projector eigenvalue exactly 1) or "excluded" (exactly 0),
    value is the mode, or "m1,m2" for the joint pair.
    """

    subject: str
    kind: str
    value: str

    def __str__(self) -> str:
        if self.subject == "joint":
            return f"joint ({self.value}) {self.kind}"
        return f"{self.subject} takes {self.value} ({self.kind})"


@dataclass(frozen=True)
class ArmPaths:
    """Path-sector bookkeeping for one arm.

    segments are the modes between the two splitters that path facts can
    talk about; unconstrained_visible is the visible set used for a world
    whose history pins nothing on this arm; annihilated_visible is the
    segment occupied in a world whose branch is the terminal γ label.
    """

    slot: str
    segments: tuple[str, ...]
    unconstrained_visible: tuple[str, ...]
    annihilated_visible: str | None = None


@dataclass(frozen=True)
class FactVocabulary:
    arms: tuple[ArmPaths, ...] = ()
    joint_excluded: str | None = None  # "m1,m2", the pair that annihilates

    def all_segments(self) -> tuple[str, ...]:
        return tuple(seg for arm in self.arms for seg in arm.segments)


HARDY_VOCAB = FactVocabulary(
    arms=(
        ArmPaths("positron", ("u+", "v+"), ("v+",), "u+"),
        ArmPaths("electron", ("u-", "v-"), ("v-",), "u-"),
    ),
    joint_excluded="u+,u-",
)

PHOTON_VOCAB = FactVocabulary(
    arms=(ArmPaths("photon", ("1", "2"), ("1", "2")),),
)

EPR_VOCAB = FactVocabulary(
    arms=(
        ArmPaths("A", ("up_A", "down_A"), ()),
        ArmPaths("B", ("up_B", "down_B"), ()),
    ),
)


def extract_elements(
    state: Superposition, vocab: FactVocabulary = HARDY_VOCAB
) -> frozenset[PathFact]:
    """Path facts certified by exact projector eigenstates.

    A "certain" fact needs every term to carry the same path segment on the
    arm; an exclusion needs zero support for a segment while the arm still
    has some path-sector support (an arm that already left the paths, for
    example after detection, certifies nothing).  Exclusions implied by a
    certainty on the same arm are not repeated.
    """
    facts: set[PathFact] = set()
    support: dict[str, set[str]] = {}
    terms = state.items()
    for arm in vocab.arms:
        modes = [label.get(arm.slot) for label, _ in terms]
        present = {m for m in modes if m is not None}
        path_support = present & set(arm.segments)
        support[arm.slot] = path_support
        if not path_support:
            continue
        if None not in modes and len(present) == 1:
            facts.add(PathFact(arm.slot, "certain", next(iter(present))))
            continue
        for seg in arm.segments:
            if seg not in present:
                facts.add(PathFact(arm.slot, "excluded", seg))
    if vocab.joint_excluded is not None:
        modes = vocab.joint_excluded.split(",")
        slots = [classify_symbol(m) for m in modes]
        if all(support.get(s) for s in slots):
            joint_hit = any(
                all(label.get(s) == m for s, m in zip(slots, modes))
                for label, _ in terms
            )
            if not joint_hit:
                facts.add(PathFact("joint", "excluded", vocab.joint_excluded))
    return frozenset(facts)


def fact_allows(label: Label, fact: PathFact) -> bool:
    """Whether a basis label satisfies one path fact."""
    if fact.subject == "joint":
        modes = fact.value.split(",")
        hit = all(label.get(classify_symbol(m)) == m for m in modes)
        return not hit if fact.kind == "excluded" else hit
    value = label.get(fact.subject)
    if fact.kind == "certain":
        return value == fact.value
    return value != fact.value


def find_support(state: Superposition, facts: Sequence[PathFact]) -> Label | None:
    """First basis label of the state satisfying every fact, if any."""
    for label, _ in state.items():
        if all(fact_allows(label, f) for f in facts):
            return label
    return None


@dataclass(frozen=True, eq=False)
class HistoryEntry:
    event_id: str
    kind: str
    state: Superposition
    probability: RootTwo | None  # set on detection events only
    facts: frozenset[PathFact]


@dataclass(frozen=True, eq=False)
class History:
    frame: str
    post_select: str
    entries: tuple[HistoryEntry, ...]
    weight: RootTwo

    def headline_facts(self) -> frozenset[PathFact]:
        """The frame's element-of-reality facts.

        Collapse-derived certainties are the elements of reality proper;
        when a history never certifies one, the strongest statement it has
        are its exclusions, so those are reported instead.
        """
        all_facts = {fact for entry in self.entries for fact in entry.facts}
        certains = {f for f in all_facts if f.kind == "certain"}
        if certains:
            return frozenset(certains)
        return frozenset(f for f in all_facts if f.kind == "excluded")


@dataclass(frozen=True, eq=False)
class Scenario:
    name: str
    events: tuple[Event, ...]
    frames: tuple[Frame, ...]
    initial_state: Superposition
    vocab: FactVocabulary = FactVocabulary()
    outcomes: tuple[str, ...] | None = None
    outcome_names: Mapping[str, str] = field(default_factory=dict)
    fact_stage: str | None = None  # event id after which path facts are final
    device_overrides: Mapping[str, DeviceOp] = field(default_factory=dict)

    def event_map(self) -> dict[str, Event]:
        return {e.id: e for e in self.events}

    def device_for(self, event: Event) -> DeviceOp:
        override = self.device_overrides.get(event.id)
        return override if override is not None else make_device(event.kind, event.arm)

    def meter_slots(self) -> tuple[str, ...]:
        slots = {METER_SLOT[e.arm] for e in self.events if e.kind == "detect"}
        return tuple(sorted(slots, key=SLOT_ORDER.index))

    def config_of(self, label: Label) -> str:
        values = []
        for slot in self.meter_slots():
            value = label.get(slot)
            if value is None:
                raise ValueError(f"final label |{label}⟩ is missing register {slot}")
            values.append(value)
        return ",".join(values)

    def outcome_name(self, config: str) -> str:
        return self.outcome_names.get(config, config)

    def frame_named(self, name: str) -> Frame:
        for frame in self.frames:
            if frame.name == name:
                return frame
        raise KeyError(name)


def validate_frame(frame: Frame, events: Sequence[Event]) -> None:
    """Accept iff the frame order is a linear extension of the causal order."""
    ids = sorted(e.id for e in events)
    if sorted(frame.order) != ids:
        raise FrameOrderError(
            frame.name, f"order must be a permutation of {ids}, got {list(frame.order)}"
        )
    position = {eid: i for i, eid in enumerate(frame.order)}
    for event in events:
        for pred in sorted(event.after):
            if position[pred] > position[event.id]:
                raise FrameOrderError(
                    frame.name,
                    f"event {pred!r} must precede {event.id!r}",
                    pair=(pred, event.id),
                )


def linear_extensions(events: Sequence[Event]) -> Iterator[tuple[str, ...]]:
    """All total orderings compatible with the causal order, lexicographic."""
    deps = {e.id: set(e.after) for e in events}

    def rec(placed: list[str], remaining: set[str]) -> Iterator[tuple[str, ...]]:
        if not remaining:
            yield tuple(placed)
            return
        done = set(placed)
        for eid in sorted(remaining):
            if deps[eid] <= done:
                placed.append(eid)
                yield from rec(placed, remaining - {eid})
                placed.pop()

    yield from rec([], set(deps))


OutcomeTable = dict[str, RootTwo]


def run_unitary(scenario: Scenario, frame: Frame) -> tuple[Superposition, OutcomeTable]:
    """Apply every device in frame order with no conditioning."""
    validate_frame(frame, scenario.events)
    emap = scenario.event_map()
    state = scenario.initial_state
    for eid in frame.order:
        state = scenario.device_for(emap[eid]).apply(state)
    table: OutcomeTable = {name: RootTwo.ZERO for name in scenario.outcomes or ()}
    for label, amp in state.items():
        name = scenario.outcome_name(scenario.config_of(label))
        table[name] = table.get(name, RootTwo.ZERO) + amp.abs2()
    return state, table


def stage_state(scenario: Scenario, frame: Frame | None = None) -> Superposition:
    """State right after the scenario's fact stage (where path facts live)."""
    if scenario.fact_stage is None:
        return scenario.initial_state
    frame = frame if frame is not None else scenario.frames[0]
    emap = scenario.event_map()
    state = scenario.initial_state
    for eid in frame.order:
        state = scenario.device_for(emap[eid]).apply(state)
        if eid == scenario.fact_stage:
            return state
    raise ValueError(f"fact stage {scenario.fact_stage!r} not in frame order")


# Register values a detector bank can record, per meter slot.
REGISTER_VALUES: dict[str, tuple[str, ...]] = {
    "meter+": ("C+=1;D+=0", "C+=0;D+=1", "C+=0;D+=0"),
    "meter-": ("C-=1;D-=0", "C-=0;D-=1", "C-=0;D-=0"),
    "meterP": ("D1=1;D2=0", "D1=0;D2=1"),
    "meterA": ("A=up", "A=down"),
    "meterB": ("B=up", "B=down"),
}


def _register_fields(register: str) -> dict[str, str]:
    return dict(part.split("=", 1) for part in register.split(";"))


def parse_post_select(text: str) -> dict[str, str]:
    """Parse "D+=1,D-=1" style text into detector-name assignments."""
    assignments: dict[str, str] = {}
    if not text.strip():
        raise PostSelectError("post-selection is empty")
    for chunk in text.split(","):
        chunk = chunk.strip()
        if "=" not in chunk:
            raise PostSelectError(f"post-selection entry {chunk!r} is not NAME=VALUE")
        name, value = chunk.split("=", 1)
        name, value = name.strip(), value.strip()
        if name in assignments and assignments[name] != value:
            raise PostSelectError(f"post-selection sets {name!r} twice")
        assignments[name] = value
    return assignments


def resolve_post_select(scenario: Scenario, text: str) -> dict[str, str]:
    """Turn a post-selection string into one register value per meter slot.

    Every detection in the scenario must be pinned to exactly one register
    value, otherwise conditioning at that event would be undefined.
    """
    assignments = parse_post_select(text)
    resolved: dict[str, str] = {}
    used: set[str] = set()
    for slot in scenario.meter_slots():
        candidates = []
        relevant: set[str] = set()
        for register in REGISTER_VALUES[slot]:
            fields = _register_fields(register)
            overlap = set(fields) & set(assignments)
            relevant |= overlap
            if overlap and all(assignments[k] == fields[k] for k in overlap):
                candidates.append(register)
        used |= relevant
        if not relevant:
            raise PostSelectError(
                f"post-selection {text!r} does not determine register {slot}"
            )
        if not candidates:
            raise PostSelectError(
                f"post-selection {text!r} matches no value of register {slot}"
            )
        if len(candidates) > 1:
            raise PostSelectError(
                f"post-selection {text!r} is ambiguous for register {slot}: "
                f"{candidates}"
            )
        resolved[slot] = candidates[0]
    unknown = sorted(set(assignments) - used)
    if unknown:
        raise PostSelectError(
            f"unknown detector name(s) {unknown} for scenario {scenario.name!r}"
        )
    return resolved


def run_collapse(scenario: Scenario, frame: Frame, post_select: str) -> History:
    """Evaluate one frame with collapse at each detection event.

    Detection probabilities are exact squared-norm ratios.  The recorded
    state is renormalized whenever the required square root exists in
    Q(sqrt2); otherwise the unnormalized projected state is carried (the
    two differ by a positive real factor, so facts and later probabilities
    are unaffected).
    """
    validate_frame(frame, scenario.events)
    required = resolve_post_select(scenario, post_select)
    emap = scenario.event_map()
    state = scenario.initial_state
    norm2 = state.norm2()
    entries: list[HistoryEntry] = []
    weight = RootTwo.ONE
    for eid in frame.order:
        event = emap[eid]
        state = scenario.device_for(event).apply(state)
        probability: RootTwo | None = None
        if event.kind == "detect":
            meter = METER_SLOT[event.arm]
            try:
                projected, projected_norm2 = state.condition(meter, required[meter])
            except ImpossibleConditionError as exc:
                raise ZeroProbabilityError(
                    f"post-selection {post_select!r} has probability 0 in frame "
                    f"{frame.name!r} of scenario {scenario.name!r} (at event {eid!r})"
                ) from exc
            probability = projected_norm2 / norm2
            weight = weight * probability
            try:
                state = projected.renormalized(projected_norm2)
                norm2 = RootTwo.ONE
            except NoExactRootError:
                state = projected
                norm2 = projected_norm2
        entries.append(
            HistoryEntry(eid, event.kind, state, probability,
                         extract_elements(state, scenario.vocab))
        )
    return History(frame.name, post_select, tuple(entries), weight)


@dataclass(frozen=True, eq=False)
class InvarianceReport:
    ok: bool
    frame_names: tuple[str, ...]
    tables: Mapping[str, OutcomeTable]
    discrepancy: tuple[str, str, str, RootTwo, RootTwo] | None = None


def order_invariance_check(
    scenario: Scenario,
    frames: Sequence[Frame] | None = None,
    all_extensions: bool = False,
) -> InvarianceReport:
    """Compare outcome tables across frame orderings, exactly."""
    if all_extensions:
        frames = [
            Frame(f"order-{i:03d}", ext)
            for i, ext in enumerate(linear_extensions(scenario.events))
        ]
    elif frames is None:
        frames = list(scenario.frames)
    tables = {f.name: run_unitary(scenario, f)[1] for f in frames}
    names = tuple(f.name for f in frames)
    base_name = names[0]
    base = tables[base_name]
    for name in names[1:]:
        other = tables[name]
        for outcome in sorted(set(base) | set(other)):
            pa = base.get(outcome, RootTwo.ZERO)
            pb = other.get(outcome, RootTwo.ZERO)
            if pa != pb:
                return InvarianceReport(
                    False, names, tables, (base_name, name, outcome, pa, pb)
                )
    return InvarianceReport(True, names, tables)


def sample_outcome(table: OutcomeTable, rng: random.Random) -> str:
    """Draw one outcome for demonstration runs.

    Rational tables are sampled exactly over the common denominator;
    tables with irrational entries fall back to float cumulative weights.
    """
    entries = [(name, prob) for name, prob in table.items()]
    if all(prob.y == 0 for _, prob in entries):
        denom = lcm(*(prob.x.denominator for _, prob in entries)) if entries else 1
        ticket = rng.randrange(denom)
        acc = 0
        for name, prob in entries:
            acc += int(prob.x * denom)
            if ticket < acc:
                return name
        raise ValueError("outcome table does not sum to 1")
    ticket_f = rng.random()
    acc_f = 0.0
    for name, prob in entries:
        acc_f += float(prob)
        if ticket_f < acc_f:
            return name
    return entries[-1][0]


# Built-in scenarios.


def _hardy() -> Scenario:
    events = (
        Event("bs1+", "bs1", "positron"),
        Event("bs1-", "bs1", "electron"),
        Event("m+", "mirror", "positron", frozenset({"bs1+"})),
        Event("m-", "mirror", "electron", frozenset({"bs1-"})),
        Event("P", "annihilate", "pair", frozenset({"m+", "m-"})),
        Event("bs2+", "bs2", "positron", frozenset({"P"})),
        Event("bs2-", "bs2", "electron", frozenset({"P"})),
        Event("det+", "detect", "positron", frozenset({"bs2+"})),
        Event("det-", "detect", "electron", frozenset({"bs2-"})),
    )
    prelude = ("bs1+", "bs1-", "m+", "m-", "P")
    frames = (
        Frame("LAB", (*prelude, "bs2+", "bs2-", "det+", "det-")),
        Frame("S+", (*prelude, "bs2+", "det+", "bs2-", "det-")),
        Frame("S-", (*prelude, "bs2-", "det-", "bs2+", "det+")),
    )
    initial = Superposition.ket("e+").tensor(Superposition.ket("e-"))
    outcome_names = {
        "C+=0;D+=0,C-=0;D-=0": "γ",
        "C+=1;D+=0,C-=1;D-=0": "c+c-",
        "C+=1;D+=0,C-=0;D-=1": "c+d-",
        "C+=0;D+=1,C-=1;D-=0": "d+c-",
        "C+=0;D+=1,C-=0;D-=1": "d+d-",
    }
    return Scenario(
        name="hardy",
        events=events,
        frames=frames,
        initial_state=initial,
        vocab=HARDY_VOCAB,
        outcomes=("γ", "c+c-", "c+d-", "d+c-", "d+d-"),
        outcome_names=outcome_names,
        fact_stage="P",
    )


def _mzi() -> Scenario:
    events = (
        Event("bs1", "bs1", "photon"),
        Event("m1", "mirror", "photon", frozenset({"bs1"})),
        Event("m2", "mirror", "photon", frozenset({"m1"})),
        Event("bs2", "bs2", "photon", frozenset({"m1", "m2"})),
        Event("det", "detect", "photon", frozenset({"bs2"})),
    )
    frames = (Frame("LAB", ("bs1", "m1", "m2", "bs2", "det")),)
    return Scenario(
        name="mzi",
        events=events,
        frames=frames,
        initial_state=Superposition.ket("e"),
        vocab=PHOTON_VOCAB,
        outcomes=("D1", "D2"),
        outcome_names={"D1=1;D2=0": "D1", "D1=0;D2=1": "D2"},
        fact_stage="bs1",
    )


def _beamsplitter() -> Scenario:
    events = (
        Event("bs", "bs1", "photon"),
        Event("det", "detect", "photon", frozenset({"bs"})),
    )
    frames = (Frame("LAB", ("bs", "det")),)
    return Scenario(
        name="beamsplitter",
        events=events,
        frames=frames,
        initial_state=Superposition.ket("e"),
        vocab=PHOTON_VOCAB,
        outcomes=("D1", "D2"),
        outcome_names={"D1=1;D2=0": "D1", "D1=0;D2=1": "D2"},
        fact_stage="bs",
    )


def _epr() -> Scenario:
    inv = Amplitude.INV_SQRT2
    singlet = Superposition(
        {
            Label.of("up_A", "down_B"): inv,
            Label.of("down_A", "up_B"): -inv,
        }
    )
    events = (
        Event("measure-A", "detect", "A"),
        Event("measure-B", "detect", "B"),
    )
    frames = (
        Frame("A-first", ("measure-A", "measure-B")),
        Frame("B-first", ("measure-B", "measure-A")),
    )
    return Scenario(
        name="epr",
        events=events,
        frames=frames,
        initial_state=singlet,
        vocab=EPR_VOCAB,
        outcomes=("A=up,B=down", "A=down,B=up", "A=up,B=up", "A=down,B=down"),
        fact_stage=None,
    )


SCENARIOS: dict[str, Callable[[], Scenario]] = {
    "hardy": _hardy,
    "mzi": _mzi,
    "beamsplitter": _beamsplitter,
    "epr": _epr,
}


def load_scenario(name: str) -> Scenario:
    try:
        return SCENARIOS[name]()
    except KeyError:
        raise UnknownScenarioError(
            f"unknown scenario {name!r}; built-ins are {sorted(SCENARIOS)}"
        ) from None


# Scenario file format:
#   {"name": ..., "events": [{"id", "kind", "arm", "after": [...]}, ...],
#    "frames": [{"name": ..., "order": [...]}, ...]}

_FILE_KINDS = {"bs1", "bs2", "mirror", "annihilate", "detect"}
_FILE_ARMS = {"positron", "electron", "photon", "pair"}
_ARM_SOURCE = {"positron": "e+", "electron": "e-", "photon": "e"}


def _validate_worldline_chains(events: Sequence[Event]) -> None:
    """Events sharing an arm must be totally ordered by the causal edges."""
    children: dict[str, set[str]] = {e.id: set() for e in events}
    for event in events:
        for pred in event.after:
            if pred not in children:
                raise ValueError(
                    f"event {event.id!r} lists unknown predecessor {pred!r}"
                )
            children[pred].add(event.id)
    descendants: dict[str, set[str]] = {}

    def walk(eid: str) -> set[str]:
        if eid not in descendants:
            out: set[str] = set()
            for child in children[eid]:
                out.add(child)
                out |= walk(child)
            descendants[eid] = out
        return descendants[eid]

    by_arm: dict[str, list[str]] = {}
    for event in events:
        if event.arm != "pair":
            by_arm.setdefault(event.arm, []).append(event.id)
    for arm, ids in by_arm.items():
        for i, a in enumerate(ids):
            for b in ids[i + 1 :]:
                if b not in walk(a) and a not in walk(b):
                    raise ValueError(
                        f"events {a!r} and {b!r} share arm {arm!r} but are"
                        " causally unordered"
                    )


def scenario_from_json(obj: Mapping) -> Scenario:
    try:
        raw_events = obj["events"]
        raw_frames = obj["frames"]
    except KeyError as exc:
        raise ValueError(f"scenario file is missing key {exc}") from None
    events = []
    for raw in raw_events:
        kind, arm = raw["kind"], raw["arm"]
        if kind not in _FILE_KINDS:
            raise ValueError(f"event {raw['id']!r}: unknown kind {kind!r}")
        if arm not in _FILE_ARMS:
            raise ValueError(f"event {raw['id']!r}: unknown arm {arm!r}")
        events.append(Event(raw["id"], kind, arm, frozenset(raw.get("after", ()))))
    ids = [e.id for e in events]
    if len(set(ids)) != len(ids):
        raise ValueError("scenario file has duplicate event ids")
    _validate_worldline_chains(events)
    if not raw_frames:
        raise ValueError("scenario file declares no frames")
    frames = tuple(Frame(raw["name"], tuple(raw["order"])) for raw in raw_frames)
    arms = {e.arm for e in events}
    factors = [
        Superposition.ket(_ARM_SOURCE[arm]) for arm in sorted(arms) if arm != "pair"
    ]
    if not factors:
        raise ValueError("scenario file has no particle arms")
    initial = factors[0]
    for factor in factors[1:]:
        initial = initial.tensor(factor)
    if {"positron", "electron"} <= arms:
        vocab = HARDY_VOCAB
    elif "photon" in arms:
        vocab = PHOTON_VOCAB
    else:
        vocab = FactVocabulary()
    stage = next((e.id for e in events if e.kind == "annihilate"), None)
    scenario = Scenario(
        name=obj.get("name", "custom"),
        events=tuple(events),
        frames=frames,
        initial_state=initial,
        vocab=vocab,
        fact_stage=stage,
    )
    for frame in frames:
        validate_frame(frame, scenario.events)
    return scenario


def scenario_to_json(scenario: Scenario) -> dict:
    return {
        "name": scenario.name,
        "events": [
            {
                "id": e.id,
                "kind": e.kind,
                "arm": e.arm,
                "after": sorted(e.after),
            }
            for e in scenario.events
        ],
        "frames": [
            {"name": f.name, "order": list(f.order)} for f in scenario.frames
        ],
    }
