"""Region correctability and the correctable-set lemmas.

Verifiers return reports that keep the hypotheses apart from the
conclusion; ``holds`` is false only when every hypothesis is met and the
conclusion still fails.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass, field
from itertools import combinations
from typing import Dict, FrozenSet, Iterable, Mapping, Optional, Sequence, Tuple

from code_model import SubsystemCode, interaction_pairs, parameters, supports_logical
from pauli_algebra import PauliVector

logger = logging.getLogger(__name__)

SUBSYSTEM = "subsystem"
PROJECTOR = "projector"


@dataclass(frozen=True)
class Region:
    qubits: FrozenSet[int]

    @classmethod
    def of(cls, qubits: Iterable[int]) -> "Region":
        return cls(frozenset(int(q) for q in qubits))

    @classmethod
    def from_dict(cls, payload: Mapping, embedding=None) -> "Region":
        if "qubits" in payload:
            return cls.of(payload["qubits"])
        if "boxes" in payload:
            if embedding is None:
                raise ValueError("a region given by boxes needs an embedding")
            from geometry import Box

            boxes = [Box.from_dict(b) for b in payload["boxes"]]
            return cls.of(embedding.points_in_boxes(boxes))
        raise ValueError("region document needs 'qubits' or 'boxes'")

    def to_dict(self) -> Dict:
        return {"qubits": sorted(self.qubits)}

    def __len__(self):
        return len(self.qubits)

    def __iter__(self):
        return iter(sorted(self.qubits))

    def check_within(self, n: int) -> None:
        bad = [q for q in self.qubits if q < 0 or q >= n]
        if bad:
            error_msg = f"region qubits {sorted(bad)} outside 0..{n - 1}"
            logger.error(error_msg)
            raise ValueError(error_msg)


def as_region(u) -> Region:
    return u if isinstance(u, Region) else Region.of(u)


@dataclass(frozen=True)
class Partition:
    parts: Tuple[Region, ...]

    @classmethod
    def of(cls, parts: Sequence, n: int) -> "Partition":
        regions = tuple(as_region(p) for p in parts)
        seen = set()
        for region in regions:
            region.check_within(n)
            overlap = seen & region.qubits
            if overlap:
                error_msg = f"parts overlap on qubits {sorted(overlap)}"
                logger.error(error_msg)
                raise ValueError(error_msg)
            seen |= region.qubits
        missing = set(range(n)) - seen
        if missing:
            error_msg = f"parts do not cover qubits {sorted(missing)}"
            logger.error(error_msg)
            raise ValueError(error_msg)
        return cls(regions)

    def to_dict(self) -> Dict:
        return {"parts": [r.to_dict()["qubits"] for r in self.parts]}

    @classmethod
    def from_dict(cls, payload: Mapping, n: int) -> "Partition":
        return cls.of(payload["parts"], n)


@dataclass
class LemmaReport:
    name: str
    hypotheses: Dict[str, bool] = field(default_factory=dict)
    conclusion: Optional[bool] = None
    details: Dict = field(default_factory=dict)

    @property
    def hypotheses_met(self) -> bool:
        return all(self.hypotheses.values())

    @property
    def holds(self) -> bool:
        return not self.hypotheses_met or bool(self.conclusion)

    def to_dict(self) -> Dict:
        return {
            "name": self.name,
            "hypotheses": dict(self.hypotheses),
            "hypotheses_met": self.hypotheses_met,
            "conclusion": self.conclusion,
            "holds": self.holds,
            "details": dict(self.details),
        }


# ---------------------------------------------------------------------------
# Region tests
# ---------------------------------------------------------------------------

def is_correctable(code: SubsystemCode, u) -> bool:
    region = as_region(u)
    region.check_within(code.n)
    return not supports_logical(code, region.qubits)


def is_dressed_cleanable(code: SubsystemCode, u) -> bool:
    region = as_region(u)
    region.check_within(code.n)
    return not supports_logical(code, region.qubits, bare=True)


def _pairs_for(code: SubsystemCode, generators: Optional[Sequence[PauliVector]]):
    if generators is None:
        return code.interaction_multiplicity
    return interaction_pairs(generators)


def boundary(u, pairs: Mapping[Tuple[int, int], int]) -> Tuple[FrozenSet[int], FrozenSet[int]]:
    """Outer and inner boundary of ``u`` under the given interaction pairs."""
    inside = as_region(u).qubits
    outer, inner = set(), set()
    for i, j in pairs:
        if (i in inside) != (j in inside):
            if i in inside:
                inner.add(i)
                outer.add(j)
            else:
                inner.add(j)
                outer.add(i)
    return frozenset(outer), frozenset(inner)


def check_subset_closure(code: SubsystemCode, u, w) -> bool:
    u, w = as_region(u), as_region(w)
    if not w.qubits <= u.qubits:
        error_msg = f"qubits {sorted(w.qubits - u.qubits)} of w are not in u"
        logger.error(error_msg)
        raise ValueError(error_msg)
    return (not is_correctable(code, u)) or is_correctable(code, w)


def check_union_lemma(code: SubsystemCode, regions: Sequence, mode: str = SUBSYSTEM, generators=None) -> LemmaReport:
    regions = [as_region(r) for r in regions]
    for a, b in combinations(regions, 2):
        if a.qubits & b.qubits:
            error_msg = f"regions overlap on qubits {sorted(a.qubits & b.qubits)}"
            logger.error(error_msg)
            raise ValueError(error_msg)
    if mode not in (SUBSYSTEM, PROJECTOR):
        raise ValueError(f"unknown mode {mode!r}")
    if mode == PROJECTOR and not code.is_abelian:
        error_msg = "projector mode needs an abelian gauge group"
        logger.error(error_msg)
        raise ValueError(error_msg)

    owner = {q: index for index, region in enumerate(regions) for q in region.qubits}
    crossing = [
        (i, j)
        for i, j in _pairs_for(code, generators)
        if i in owner and j in owner and owner[i] != owner[j]
    ]
    union = Region(frozenset().union(*[r.qubits for r in regions]) if regions else frozenset())

    report = LemmaReport(name="union")
    report.hypotheses["decoupled"] = not crossing
    report.hypotheses["each_correctable"] = all(is_correctable(code, r) for r in regions)
    if mode == SUBSYSTEM:
        report.conclusion = is_dressed_cleanable(code, union)
    else:
        report.conclusion = is_correctable(code, union)
    report.details = {"mode": mode, "crossing_pairs": [list(p) for p in crossing[:10]], "union_size": len(union)}
    return report


def check_expansion_lemma(code: SubsystemCode, u, t, generators=None) -> LemmaReport:
    u, t = as_region(u), as_region(t)
    outer, inner = boundary(u, _pairs_for(code, generators))
    edge = outer | inner

    report = LemmaReport(name="expansion")
    report.hypotheses["u_correctable"] = is_correctable(code, u)
    report.hypotheses["t_correctable"] = is_correctable(code, t)
    report.hypotheses["t_contains_boundary"] = edge <= t.qubits
    report.conclusion = is_correctable(code, u.qubits | t.qubits)
    report.details = {
        "boundary": sorted(edge),
        "missing_boundary": sorted(edge - t.qubits),
    }
    return report


def _check_partition(code: SubsystemCode, parts) -> Partition:
    return Partition.of(parts, code.n)


def ab_bound_check(code: SubsystemCode, a, b) -> LemmaReport:
    partition = _check_partition(code, [a, b])
    a, b = partition.parts
    k = parameters(code).k

    report = LemmaReport(name="ab_bound")
    report.hypotheses["a_cleanable"] = is_dressed_cleanable(code, a)
    report.conclusion = k <= len(b)
    report.details = {"k": k, "a_size": len(a), "b_size": len(b)}
    return report


def abc_bound_check(code: SubsystemCode, a, b, c) -> LemmaReport:
    partition = _check_partition(code, [a, b, c])
    if not code.is_abelian:
        error_msg = "the ABC bound needs an abelian gauge group"
        logger.error(error_msg)
        raise ValueError(error_msg)
    a, b, c = partition.parts
    k = parameters(code).k

    report = LemmaReport(name="abc_bound")
    report.hypotheses["a_correctable"] = is_correctable(code, a)
    report.hypotheses["b_correctable"] = is_correctable(code, b)
    report.conclusion = k <= len(c)
    report.details = {"k": k, "a_size": len(a), "b_size": len(b), "c_size": len(c)}
    return report
