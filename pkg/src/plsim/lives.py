"""Parallel-lives bookkeeping over exact branch states.

Relative worlds are orthogonal branches of an observer+apparatus state; the
lives populating them are tracked at branch granularity as LiveSets with an
interaction memory.  Lives merge when they interact, worlds arising from one
split are mutually hidden, and each frame's world diagram tags that frame's
own observer as first person and every other observer as a third-person
copy.  The paradox verdict is operational: the per-frame certified path
facts are conjoined and checked for nonzero amplitude support in the
unitary state at the path stage.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

from .amplitude import Amplitude, RootTwo
from .scenario import (
    FactVocabulary,
    Frame,
    PathFact,
    Scenario,
    find_support,
    resolve_post_select,
    run_collapse,
    stage_state,
)
from .state import GAMMA, Label, SLOT_ORDER, Superposition


class MergeConflictError(ValueError):
    """Two live-sets hold contradictory memories and stay mutually hidden."""


@dataclass(frozen=True)
class LiveSet:
    """A set of lives sharing one interaction network and memory."""

    constituents: frozenset[str]
    memory: tuple[tuple[str, str], ...] = ()

    @classmethod
    def make(cls, name: str, memory: Mapping[str, str] | None = None) -> LiveSet:
        items = tuple(sorted((memory or {}).items()))
        return cls(frozenset({name}), items)

    def memory_map(self) -> dict[str, str]:
        return dict(self.memory)

    def __str__(self) -> str:
        names = "⊕".join(sorted(self.constituents))
        record = ";".join(f"{k}={v}" for k, v in self.memory)
        return f"{names}({record})" if record else names


def merge_lives(x: LiveSet, y: LiveSet) -> LiveSet:
    """Union of constituents and memories; contradictions reject the merge."""
    mx, my = x.memory_map(), y.memory_map()
    conflicts = sorted(k for k in mx.keys() & my.keys() if mx[k] != my[k])
    if conflicts:
        raise MergeConflictError(
            f"cannot merge {x} with {y}: contradictory memory for {conflicts}"
        )
    merged = dict(sorted((mx | my).items()))
    return LiveSet(x.constituents | y.constituents, tuple(merged.items()))


@dataclass(frozen=True)
class RelativeWorld:
    """One branch of a split, with its exact weight and path visibility."""

    id: str
    branch: Label
    amplitude: Amplitude
    weight: RootTwo
    config: str
    visible: frozenset[str] = frozenset()
    hidden: frozenset[str] = frozenset()
    lives: tuple[str, ...] = ()


def _visibility(
    vocab: FactVocabulary, facts: Iterable[PathFact], branch: Label | None
) -> tuple[frozenset[str], frozenset[str]]:
    """Visible/hidden path segments for one world.

    Priority per arm: a certainty certified by the world's history, then the
    segment pinned by the branch label itself, then the annihilation pair
    for a γ branch, then the arm's unconstrained default.
    """
    certain = {f.subject: f.value for f in facts if f.kind == "certain"}
    visible: set[str] = set()
    for arm in vocab.arms:
        if arm.slot in certain:
            visible.add(certain[arm.slot])
            continue
        mode = branch.get(arm.slot) if branch is not None else None
        if mode in arm.segments:
            visible.add(mode)
            continue
        if (
            branch is not None
            and branch.get("pair") == GAMMA
            and arm.annihilated_visible is not None
        ):
            visible.add(arm.annihilated_visible)
            continue
        visible |= set(arm.unconstrained_visible)
    hidden = set(vocab.all_segments()) - visible
    return frozenset(visible), frozenset(hidden)


def split_worlds(
    state: Superposition,
    apparatus_slots: Sequence[str] | None = None,
    vocab: FactVocabulary | None = None,
) -> tuple[RelativeWorld, ...]:
    """Materialize one relative world per orthogonal term of the state.

    The apparatus register slots name each world's recorded configuration;
    worlds from one split are mutually hidden by construction.
    """
    if apparatus_slots is None:
        apparatus_slots = [
            slot
            for slot in SLOT_ORDER
            if slot.startswith("meter") and slot in state.slots()
        ]
    if not apparatus_slots:
        raise ValueError("state carries no apparatus registers to split on")
    worlds = []
    for label, amp in state.items():
        values = []
        for slot in apparatus_slots:
            value = label.get(slot)
            if value is None:
                raise ValueError(
                    f"term |{label}⟩ is missing apparatus register {slot}"
                )
            values.append(value)
        config = ",".join(values)
        if vocab is not None:
            visible, hidden = _visibility(vocab, (), label)
        else:
            visible, hidden = frozenset(), frozenset()
        worlds.append(
            RelativeWorld(
                id=str(label),
                branch=label,
                amplitude=amp,
                weight=amp.abs2(),
                config=config,
                visible=visible,
                hidden=hidden,
            )
        )
    return tuple(worlds)


@dataclass(frozen=True, eq=False)
class WorldGraph:
    """A frame's first-person world plus the lives hidden from it."""

    scenario_name: str
    frame_name: str
    post_select: str
    weight: RootTwo
    world: RelativeWorld
    lives: tuple[LiveSet, ...]
    first_person: str
    perspective: Mapping[str, str]  # agent -> "first" | "third"
    facts: frozenset[PathFact]
    fact_origins: tuple[str, ...]
    detector_record: tuple[tuple[str, str], ...]
    vocab: FactVocabulary
    stage: Superposition = field(repr=False)

    @property
    def visible(self) -> frozenset[str]:
        return self.world.visible

    @property
    def hidden(self) -> frozenset[str]:
        return self.world.hidden

    def to_dot(self) -> str:
        """Deterministic DOT rendering: solid for lives of this world,
        dashed for lives living in parallel (hidden)."""
        record = ";".join(f"{k}={v}" for k, v in self.detector_record if v != "0")
        apparatus = f"A_{self.frame_name}"
        observers = sorted(a for a in self.perspective)
        fact_text = "; ".join(str(f) for f in sorted(self.facts)) or "none"

        def seg_lines(segments: Iterable[str], dashed: bool) -> list[str]:
            suffix = ', style=dashed' if dashed else ""
            out = []
            for arm, seg in segments:
                out.append(
                    f'    "life_{seg}" [label="{arm} lives on {seg}"{suffix}];'
                )
            return out

        visible_segs = [
            (arm.slot, seg)
            for arm in self.vocab.arms
            for seg in arm.segments
            if seg in self.world.visible
        ]
        hidden_segs = [
            (arm.slot, seg)
            for arm in self.vocab.arms
            for seg in arm.segments
            if seg in self.world.hidden
        ]

        lines = ["graph parallel_lives {"]
        lines.append(
            f'  label="scenario {self.scenario_name}, frame {self.frame_name}, '
            f'post-selection {self.post_select}, weight {self.weight}";'
        )
        lines.append("  node [shape=box];")
        lines.append("  subgraph cluster_world {")
        lines.append(
            f'    label="first-person world of {self.first_person}'
            f'\\nfacts: {fact_text}";'
        )
        for agent in observers:
            tag = "first person" if agent == self.first_person else "third person"
            lines.append(f'    "{agent}" [label="{agent}({record})\\n[{tag}]"];')
        lines.append(f'    "{apparatus}" [label="{apparatus}({record})"];')
        lines.extend(seg_lines(visible_segs, dashed=False))
        lines.append("  }")
        lines.append("  subgraph cluster_hidden {")
        lines.append('    label="hidden lives living in parallel";')
        lines.append("    style=dashed;")
        lines.extend(seg_lines(hidden_segs, dashed=True))
        lines.append("  }")
        for agent in observers:
            lines.append(f'  "{agent}" -- "{apparatus}";')
        for _, seg in visible_segs:
            lines.append(f'  "{apparatus}" -- "life_{seg}";')
        for arm in self.vocab.arms:
            arm_visible = [s for s in arm.segments if s in self.world.visible]
            arm_hidden = [s for s in arm.segments if s in self.world.hidden]
            if not arm_visible:
                continue
            for seg in arm_hidden:
                lines.append(
                    f'  "life_{seg}" -- "life_{arm_visible[0]}" [style=dashed];'
                )
        lines.append("}")
        return "\n".join(lines) + "\n"


def world_graph(scenario: Scenario, frame: Frame, post_select: str) -> WorldGraph:
    """Build the frame's first-person world under the given post-selection."""
    history = run_collapse(scenario, frame, post_select)
    facts = history.headline_facts()
    final = history.entries[-1].state
    branch = final.labels()[0]
    visible, hidden = _visibility(scenario.vocab, facts, branch)

    registers = resolve_post_select(scenario, post_select)
    record: dict[str, str] = {}
    for register in registers.values():
        for chunk in register.split(";"):
            key, value = chunk.split("=", 1)
            record[key] = value
    detector_record = tuple(sorted(record.items()))

    inferred = {f.subject: f.value for f in facts if f.kind == "certain"}
    own_name = f"O_{frame.name}"
    own = LiveSet(frozenset({own_name}), tuple(sorted((record | inferred).items())))
    apparatus = LiveSet(frozenset({f"A_{frame.name}"}), detector_record)
    lives = [own, apparatus]
    perspective = {own_name: "first"}
    for other in scenario.frames:
        if other.name == frame.name:
            continue
        agent = f"O_{other.name}"
        perspective[agent] = "third"
        lives.append(LiveSet(frozenset({agent}), detector_record))
    lives.sort(key=lambda ls: sorted(ls.constituents))

    origins = []
    seen: set[PathFact] = set()
    for entry in history.entries:
        for fact in sorted(entry.facts):
            if fact in facts and fact not in seen:
                seen.add(fact)
                origins.append(
                    f"{frame.name}: {fact}, established after {entry.event_id} "
                    f"in state {entry.state}"
                )

    world = RelativeWorld(
        id=str(branch),
        branch=branch,
        amplitude=final.amplitude(branch),
        weight=history.weight,
        config=",".join(
            registers[slot] for slot in scenario.meter_slots()
        ),
        visible=visible,
        hidden=hidden,
        lives=tuple(sorted(str(ls) for ls in lives)),
    )
    return WorldGraph(
        scenario_name=scenario.name,
        frame_name=frame.name,
        post_select=post_select,
        weight=history.weight,
        world=world,
        lives=tuple(lives),
        first_person=own_name,
        perspective=perspective,
        facts=facts,
        fact_origins=tuple(origins),
        detector_record=detector_record,
        vocab=scenario.vocab,
        stage=stage_state(scenario),
    )


@dataclass(frozen=True, eq=False)
class ParadoxReport:
    """Joint-consistency verdict over the frames' certified facts."""

    scenario_name: str
    post_select: str
    frame_facts: Mapping[str, frozenset[PathFact]]
    individual_supported: Mapping[str, bool]
    pairwise_supported: Mapping[tuple[str, str], bool]
    joint_supported: bool
    witness: Label | None
    paradox: bool
    conflicts: tuple[str, ...]
    narrative: tuple[str, ...]

    def verdict_text(self) -> str:
        return "PARADOX: joint facts unsupported" if self.paradox else "CONSISTENT"

    def to_text(self) -> str:
        lines = [
            f"scenario: {self.scenario_name}",
            f"post-selection: {self.post_select}",
            "frame facts:",
        ]
        for frame in sorted(self.frame_facts):
            facts = "; ".join(str(f) for f in sorted(self.frame_facts[frame]))
            lines.append(f"  {frame}: {facts or 'none'}")
        if self.pairwise_supported:
            lines.append("pairwise support:")
            for (fa, fb), ok in sorted(self.pairwise_supported.items()):
                lines.append(f"  {fa} & {fb}: {'supported' if ok else 'UNSUPPORTED'}")
        joint = "supported" if self.joint_supported else "UNSUPPORTED"
        lines.append(f"joint support: {joint}")
        if self.witness is not None:
            lines.append(f"  witness branch: |{self.witness}⟩")
        if self.conflicts:
            lines.append("conflicting perspectives:")
            for conflict in self.conflicts:
                lines.append(f"  {conflict}")
        if self.narrative:
            lines.append("supporting states:")
            for line in self.narrative:
                lines.append(f"  {line}")
        lines.append(
            "note: path facts are counterfactual inferences from detector records."
        )
        lines.append(f"verdict: {self.verdict_text()}")
        return "\n".join(lines)


def perspective_compare(graphs: Sequence[WorldGraph]) -> ParadoxReport:
    """Conjoin every frame's certified facts and test joint support.

    The verdict is "paradox" exactly when each frame's facts hold in its own
    history while their conjunction has no nonzero-amplitude branch at the
    path stage of the unitary evolution.
    """
    if not graphs:
        raise ValueError("perspective comparison needs at least one world graph")
    first = graphs[0]
    for graph in graphs[1:]:
        if (
            graph.scenario_name != first.scenario_name
            or graph.post_select != first.post_select
            or graph.stage != first.stage
        ):
            raise ValueError(
                "world graphs compare frames over different scenarios or"
                " post-selections"
            )
    names = [g.frame_name for g in graphs]
    if len(set(names)) != len(names):
        raise ValueError(f"duplicate frames in comparison: {names}")

    stage = first.stage
    frame_facts = {g.frame_name: g.facts for g in graphs}
    individual = {
        name: find_support(stage, sorted(facts)) is not None
        for name, facts in frame_facts.items()
    }
    pairwise: dict[tuple[str, str], bool] = {}
    ordered = sorted(frame_facts)
    for i, fa in enumerate(ordered):
        for fb in ordered[i + 1 :]:
            joint = sorted(frame_facts[fa] | frame_facts[fb])
            pairwise[(fa, fb)] = find_support(stage, joint) is not None

    all_facts = sorted(set().union(*frame_facts.values())) if frame_facts else []
    witness = find_support(stage, all_facts)
    joint_supported = witness is not None
    paradox = (
        len(graphs) >= 2 and all(individual.values()) and not joint_supported
    )
    conflicts = []
    for (fa, fb), ok in sorted(pairwise.items()):
        if not ok:
            conflicts.append(
                f"O_{fb} first-person vs O_{fb} third-person-in-{fa}'s-world"
            )
            conflicts.append(
                f"O_{fa} first-person vs O_{fa} third-person-in-{fb}'s-world"
            )
    narrative = tuple(
        line for g in sorted(graphs, key=lambda g: g.frame_name)
        for line in g.fact_origins
    )
    return ParadoxReport(
        scenario_name=first.scenario_name,
        post_select=first.post_select,
        frame_facts=frame_facts,
        individual_supported=individual,
        pairwise_supported=pairwise,
        joint_supported=joint_supported,
        witness=witness,
        paradox=paradox,
        conflicts=tuple(conflicts),
        narrative=narrative,
    )
