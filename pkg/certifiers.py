"""Executable replays of the geometric correctability arguments.

``strict`` mode decides every step by the counting argument alone;
``verified`` mode decides every step with the exact correctability test,
which is the ground truth on small codes.
"""
from __future__ import annotations

import json
import logging
import math
from dataclasses import asdict, dataclass, field
from enum import Enum
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from bounds import ball_volume, proof_constants
from code_model import SubsystemCode, distance, parameters
from config import get_settings
from correctability import (
    LemmaReport,
    Partition,
    ab_bound_check,
    abc_bound_check,
    is_correctable,
)
from geometry import (
    Box,
    Embedding,
    InteractionSet,
    extract_interactions,
    find_tiling,
    packing_bound,
    slab_masses,
    subdivide,
    subdivision_count_bound,
)

logger = logging.getLogger(__name__)

STRICT = "strict"
VERIFIED = "verified"

THM3_2 = "thm3_2"
THM5_1_CASE1 = "thm5_1_case1"
THM5_1_CASE2 = "thm5_1_case2"
VARIANTS = (THM3_2, THM5_1_CASE1, THM5_1_CASE2)


class Outcome(str, Enum):
    CERTIFIED = "certified-correctable"
    CONTRADICTION = "contradiction-reached"
    STUCK = "stuck-at"
    HYPOTHESIS_VIOLATED = "hypothesis-violated"


@dataclass
class CertificateStep:
    index: int
    rule: str
    region: str
    region_size: int
    boundary: str
    boundary_count: Optional[int]
    verdict: bool
    detail: Dict = field(default_factory=dict)


@dataclass
class Certificate:
    kind: str
    mode: str
    outcome: Outcome = Outcome.CERTIFIED
    steps: List[CertificateStep] = field(default_factory=list)
    stuck_step: Optional[int] = None
    reason: Optional[str] = None
    notes: List[str] = field(default_factory=list)

    def add(self, rule, region, region_size, boundary, boundary_count, verdict, **detail) -> CertificateStep:
        step = CertificateStep(len(self.steps) + 1, rule, region, int(region_size), boundary,
                               None if boundary_count is None else int(boundary_count), bool(verdict), detail)
        self.steps.append(step)
        return step

    def stuck(self, step: CertificateStep, reason: str) -> "Certificate":
        self.outcome = Outcome.STUCK
        self.stuck_step = step.index
        self.reason = reason
        logger.info(f"{self.kind} certificate stuck at step {step.index}: {reason}")
        return self

    def violated(self, reason: str) -> "Certificate":
        self.outcome = Outcome.HYPOTHESIS_VIOLATED
        self.reason = reason
        logger.info(f"{self.kind} hypotheses violated: {reason}")
        return self

    @property
    def succeeded(self) -> bool:
        return self.outcome in (Outcome.CERTIFIED, Outcome.CONTRADICTION)

    def header(self) -> Dict:
        return {
            "kind": self.kind,
            "mode": self.mode,
            "outcome": self.outcome.value,
            "stuck_step": self.stuck_step,
            "reason": self.reason,
            "notes": list(self.notes),
        }

    def to_dict(self) -> Dict:
        return {**self.header(), "steps": [asdict(s) for s in self.steps]}

    @classmethod
    def from_dict(cls, payload: Dict) -> "Certificate":
        steps = [CertificateStep(**s) for s in payload.get("steps", [])]
        return cls(
            kind=payload["kind"],
            mode=payload["mode"],
            outcome=Outcome(payload["outcome"]),
            steps=steps,
            stuck_step=payload.get("stuck_step"),
            reason=payload.get("reason"),
            notes=list(payload.get("notes", [])),
        )

    def to_json_lines(self) -> str:
        lines = [json.dumps(self.header(), sort_keys=True)]
        lines.extend(json.dumps(asdict(s), sort_keys=True) for s in self.steps)
        return "\n".join(lines) + "\n"

    @classmethod
    def from_json_lines(cls, text: str) -> "Certificate":
        records = [json.loads(line) for line in text.splitlines() if line.strip()]
        if not records:
            raise ValueError("empty certificate")
        return cls.from_dict({**records[0], "steps": records[1:]})

    def trace(self) -> str:
        out = [f"{self.kind} certificate ({self.mode}): {self.outcome.value}"]
        for s in self.steps:
            mark = "ok" if s.verdict else "FAIL"
            count = "-" if s.boundary_count is None else s.boundary_count
            out.append(f"  [{s.index:>4}] {s.rule:<16} {s.region} |region|={s.region_size} |boundary|={count} {mark}")
        if self.reason:
            out.append(f"  reason: {self.reason}")
        out.extend(f"  note: {note}" for note in self.notes)
        return "\n".join(out)


def _check_mode(mode: str, code) -> None:
    if mode not in (STRICT, VERIFIED):
        raise ValueError(f"unknown mode {mode!r}")
    if mode == VERIFIED and code is None:
        error_msg = "verified mode needs the code"
        logger.error(error_msg)
        raise ValueError(error_msg)


def _resolve_distance(code: Optional[SubsystemCode], d) -> float:
    """Supplied d, or the exact distance; k = 0 codes get n + 1 (every region correctable)."""
    if d is not None:
        if d <= 0:
            raise ValueError(f"distance must be positive, got {d}")
        return d
    if code is None:
        raise ValueError("strict mode without a code needs an explicit distance")
    if parameters(code).k == 0:
        return code.n + 1
    return distance(code).value


def _short(values) -> List[float]:
    return [round(float(v), 6) for v in values]


# ---------------------------------------------------------------------------
# Holographic cube induction
# ---------------------------------------------------------------------------

def _shell_cover(side: float, ell: float, D: int) -> float:
    """Packing bound for the 2D face slabs of thickness ℓ around a cube of ``side``."""
    slab = Box.of([0.0] * D, [ell] + [side] * (D - 1))
    return 2 * D * packing_bound(slab)


def holographic_certify(
    code: Optional[SubsystemCode],
    e: Embedding,
    b: Box,
    ell: float,
    mode: str = STRICT,
    d: Optional[float] = None,
    interactions: Optional[InteractionSet] = None,
) -> Certificate:
    """Certify that the qubits in ``b`` form a correctable region by growing cubes."""
    if ell <= 0:
        raise ValueError(f"ell must be positive, got {ell}")
    _check_mode(mode, code)
    if interactions is None:
        if code is None:
            raise ValueError("interactions or a code are required")
        interactions = extract_interactions(code, e)
    d = _resolve_distance(code, d)
    D = e.dimension
    points = e.coordinates
    _, f = interactions.count_long(ell)
    inside = e.points_in_box(b)
    cert = Certificate(kind="holographic", mode=mode)

    if len(inside) < d:
        verdict = is_correctable(code, inside) if mode == VERIFIED else True
        step = cert.add("base", "box", len(inside), "none", 0, verdict, reason="fewer qubits than d")
        if not verdict:
            return cert.stuck(step, "base region not correctable")
        return cert

    f_box = int(f[inside].sum())
    constants = proof_constants(d, ell, D)
    failures = []
    if ell > d ** (1 / D) / (8 * math.sqrt(D)):
        failures.append(f"ell={ell} exceeds d^(1/D)/(8 sqrt D)={d ** (1 / D) / (8 * math.sqrt(D)):.6g}")
    if float(b.sides.max()) > constants.w0:
        failures.append(f"box side {float(b.sides.max()):.6g} exceeds w0={constants.w0:.6g}")
    if f_box > d / 10:
        failures.append(f"f(V)={f_box} exceeds d/10={d / 10:.6g}")
    if failures:
        if mode == STRICT:
            return cert.violated("; ".join(failures))
        cert.notes.append("strict hypotheses unmet: " + "; ".join(failures))

    center = (np.asarray(b.lo) + np.asarray(b.hi)) / 2
    w = float(b.sides.max())
    beta = (ball_volume(D) / (2 * 4 ** D) * d) ** (1 / D)
    grow = 0 if w <= beta else math.ceil((w - beta) / (2 * ell))
    sides = [max(w - 2 * ell * (grow - j), 0.0) for j in range(grow + 1)]
    f_outer = int(f[Box.cube(center, w + 2 * ell).contains(points)].sum())

    base = Box.cube(center, sides[0])
    base_qubits = e.points_in_box(base)
    bound = packing_bound(base)
    verdict = is_correctable(code, base_qubits) if mode == VERIFIED else bound < d
    step = cert.add("base", f"cube side {sides[0]:.6g}", len(base_qubits), "none", 0, verdict,
                    packing_bound=bound)
    if not verdict:
        return cert.stuck(step, f"base cube packing bound {bound:.6g} is not below d={d}")

    long_pairs = interactions.pairs[interactions.long_mask(ell)]
    for previous, side in zip(sides, sides[1:]):
        inner = Box.cube(center, previous)
        grown = Box.cube(center, side)
        u_mask = inner.contains(points)
        shell_inner = u_mask & ~Box.cube(center, max(previous - 2 * ell, 0.0)).contains(points)
        shell_outer = grown.contains(points) & ~u_mask
        crossing = u_mask[long_pairs[:, 0]] != u_mask[long_pairs[:, 1]] if len(long_pairs) else np.zeros(0, bool)
        ends = long_pairs[crossing].ravel() if len(long_pairs) else np.zeros(0, dtype=np.int64)
        type_iii = {int(q) for q in ends if not u_mask[q]}
        type_iv = {int(q) for q in ends if u_mask[q]}
        counts = [int(shell_inner.sum()), int(shell_outer.sum()), len(type_iii), len(type_iv)]
        cover = _shell_cover(previous, ell, D) + _shell_cover(side, ell, D) + 2 * f_outer

        grown_qubits = e.points_in_box(grown)
        verdict = is_correctable(code, grown_qubits) if mode == VERIFIED else cover < d
        step = cert.add(
            "grow", f"cube side {side:.6g}", len(grown_qubits), "types i-iv", sum(counts), verdict,
            type_counts=counts, counting_bound=cover,
        )
        if not verdict:
            return cert.stuck(step, f"boundary bound {cover:.6g} is not below d={d}" if mode == STRICT
                              else "grown cube is not correctable")
    logger.info(f"Holographic certificate: {len(cert.steps)} steps, certified")
    return cert


# ---------------------------------------------------------------------------
# Expansion sweep
# ---------------------------------------------------------------------------

class _SweepGeometry:
    """Slab counts and run ends over translated coordinates."""

    def __init__(self, points: np.ndarray, ell: float, tau: float):
        self.points = points
        self.ell = ell
        self.tau = tau
        self.D = points.shape[1]
        self.gamma = self._gamma()
        self.events = [np.unique(np.concatenate([points[:, i] - ell, points[:, i] + ell])) for i in range(self.D)]

    def _gamma(self) -> float:
        smallest = math.inf
        n = self.points.shape[0]
        off_diagonal = ~np.eye(n, dtype=bool)
        for i in range(self.D):
            column = self.points[:, i]
            gaps = np.abs(column[:, None] - column[None, :])[off_diagonal]
            for values in (gaps, np.abs(gaps - 2 * self.ell)):
                positive = values[values > 0]
                if positive.size:
                    smallest = min(smallest, float(positive.min()))
        return smallest / 2 if math.isfinite(smallest) else self.ell / 2

    def slab_count(self, axis: int, x: float) -> int:
        return int(np.count_nonzero(np.abs(self.points[:, axis] - x) <= self.ell))

    def slab_mask(self, axis: int, x: float) -> np.ndarray:
        return np.abs(self.points[:, axis] - x) <= self.ell

    def good(self, axis: int, x: float) -> bool:
        return axis == self.D - 1 or self.slab_count(axis, x) <= self.tau

    def next_good(self, axis: int, x: float) -> float:
        """End of the bad run starting at ``x``, shifted by γ onto a good value."""
        for event in self.events[axis]:
            if event >= x and self.slab_count(axis, event + self.gamma / 2) <= self.tau:
                return float(event) + self.gamma
        return float(self.events[axis][-1]) + self.gamma

    def region(self, a: Sequence[float], nxt: Sequence[float]) -> np.ndarray:
        p = self.points
        mask = np.zeros(p.shape[0], dtype=bool)
        prefix = np.ones(p.shape[0], dtype=bool)
        for j, a_j in enumerate(a):
            mask |= prefix & (p[:, j] >= 0) & (p[:, j] <= a_j)
            if j < len(nxt):
                prefix &= (p[:, j] >= a_j) & (p[:, j] <= nxt[j])
        return mask


def expansion_sweep(
    code: Optional[SubsystemCode],
    e: Embedding,
    s: Optional[InteractionSet],
    ell: float,
    tau: Optional[float] = None,
    d: Optional[float] = None,
    mode: str = STRICT,
    k: Optional[int] = None,
) -> Certificate:
    """Grow legal staircase regions over the whole layout, one ℓ-step at a time."""
    if ell <= 0:
        raise ValueError(f"ell must be positive, got {ell}")
    if tau is not None and tau <= 0:
        raise ValueError(f"tau must be positive, got {tau}")
    _check_mode(mode, code)
    cert = Certificate(kind="sweep", mode=mode)
    n, D = e.n, e.dimension
    if code is not None:
        k = parameters(code).k
    if n == 0:
        cert.add("finish", "all qubits", 0, "none", 0, True)
        return cert
    if s is None:
        if code is None:
            raise ValueError("interactions or a code are required")
        s = extract_interactions(code, e)
    if mode == STRICT or d is not None:
        d = _resolve_distance(code, d)
    tau = ell * n ** ((D - 1) / D) if tau is None else tau

    coords = e.coordinates
    points = coords - coords.min(axis=0) + ell
    A = e.max_spread() + 2 * ell + 1
    geo = _SweepGeometry(points, ell, tau)
    bad = np.zeros(n, dtype=bool)
    bad[s.bad_qubits(ell)] = True
    gap_bound = 2 * ell * n / tau + 3 * ell + geo.gamma
    logger.info(f"Expansion sweep: n={n}, D={D}, ell={ell}, tau={tau:.6g}, A={A:.6g}, mode={mode}")

    a: List[float] = [0.0]
    nxt: List[float] = []
    max_steps = get_settings().sweep_max_steps
    flagged = False

    def describe(values):
        return "V" + json.dumps(_short(values))

    for _ in range(max_steps):
        i = len(a)
        before = tuple(a)
        if a[-1] >= A:
            if i == 1:
                break
            a = a[:-2] + [nxt[-1]]
            nxt = nxt[:-1]
            step = cert.add("finish-dimension", describe(a), int(geo.region(a, nxt).sum()), "none", None, True)
        elif i == D or geo.good(i - 1, a[-1] + ell):
            frontier = bad.copy()
            for j in range(i - 1):
                frontier |= geo.slab_mask(j, a[j]) | geo.slab_mask(j, nxt[j])
            if i == D:
                rule = "expand-last"
                thin = np.ones(n, dtype=bool)
                for j in range(i - 1):
                    thin &= (points[:, j] >= a[j]) & (points[:, j] <= nxt[j])
                thin &= np.abs(points[:, i - 1] - a[-1]) <= ell
                frontier |= thin
            else:
                rule = "expand"
                frontier |= geo.slab_mask(i - 1, a[-1])
            a = a[:-1] + [a[-1] + ell]
            grown = geo.region(a, nxt)
            count = int(frontier.sum())
            qubits = np.flatnonzero(grown).tolist()
            verdict = is_correctable(code, qubits) if mode == VERIFIED else count < d
            step = cert.add(rule, describe(a), len(qubits), "B + slabs", count, verdict, qubits=qubits)
            if mode == STRICT and not flagged and rule == "expand":
                alternative = int(bad.sum()) + (2 * i - 1) * ell * n ** (1 / D)
                if (alternative < d) != verdict:
                    cert.notes.append(
                        f"step {step.index}: slab threshold with exponent 1/D would give a different verdict"
                    )
                    flagged = True
            if not verdict:
                reason = (f"boundary count {count} is not below d={d}" if mode == STRICT
                          else "grown region is not correctable")
                return cert.stuck(step, reason)
        else:
            run_end = geo.next_good(i - 1, a[-1] + ell)
            if run_end - a[-1] > gap_bound:
                raise RuntimeError(f"run end gap {run_end - a[-1]} exceeds the packing bound {gap_bound}")
            nxt = nxt + [run_end]
            a = a + [0.0]
            step = cert.add("next-dimension", describe(a), int(geo.region(a, nxt).sum()), "none", None, True,
                            run_end=run_end)
        if tuple(a) <= before:
            raise RuntimeError(f"sweep index did not increase: {before} -> {tuple(a)}")
    else:
        raise RuntimeError(f"expansion sweep exceeded {max_steps} steps")

    cert.add("finish", "all qubits", n, "none", None, True)
    if k is None:
        cert.notes.append("k unknown; full set reported as certified")
    elif k >= 1:
        cert.outcome = Outcome.CONTRADICTION
        cert.reason = f"full qubit set certified although k={k}"
    logger.info(f"Expansion sweep finished: {cert.outcome.value} after {len(cert.steps)} steps")
    return cert


# ---------------------------------------------------------------------------
# Partition builder
# ---------------------------------------------------------------------------

@dataclass
class PartitionResult:
    variant: str
    partition: Partition
    labels: Tuple[str, ...]
    certificate: Certificate
    ledger: Dict
    report: Optional[LemmaReport] = None

    def to_dict(self) -> Dict:
        return {
            "variant": self.variant,
            "parts": dict(zip(self.labels, self.partition.to_dict()["parts"])),
            "ledger": self.ledger,
            "certificate": self.certificate.to_dict(),
            "report": self.report.to_dict() if self.report else None,
        }


class _Pieces:
    """Good cubes and bad-cube slabs of a tiling, with per-qubit piece bounds."""

    def __init__(self, tiling, points, f, d1, ell):
        self.tiling = tiling
        self.points = points
        n, D = points.shape
        self.cells = tiling.cell_indices(points)
        self.lo = np.zeros((n, D))
        self.hi = np.zeros((n, D))
        self.bad_cells = set()
        self.cell_mass: Dict[Tuple[int, ...], float] = {}
        self.cuts: Dict[Tuple[int, ...], List[float]] = {}
        self.pieces: List[Dict] = []

        members: Dict[Tuple[int, ...], List[int]] = {}
        for q, cell in enumerate(map(tuple, self.cells.tolist())):
            members.setdefault(cell, []).append(q)

        for cell, qubits in sorted(members.items()):
            box = tiling.cell_box(cell)
            mass = float(f[qubits].sum())
            self.cell_mass[cell] = mass
            if mass < d1:
                self.lo[qubits] = box.lo
                self.hi[qubits] = box.hi
                self.pieces.append({"cell": list(cell), "kind": "good-cube", "qubits": len(qubits), "mass": mass})
                continue
            self.bad_cells.add(cell)
            slabs = subdivide(box, points[qubits], f[qubits], ell, d1)
            self.cuts[cell] = [slab.lo[0] for slab in slabs[1:]]
            slot = np.searchsorted(np.array(self.cuts[cell]), points[qubits, 0], side="right")
            masses = slab_masses(slabs, points[qubits], f[qubits])
            for index, slab in enumerate(slabs):
                chosen = [q for q, sl in zip(qubits, slot) if sl == index]
                self.lo[chosen] = slab.lo
                self.hi[chosen] = slab.hi
                self.pieces.append({
                    "cell": list(cell),
                    "kind": "small-mass" if masses[index] <= d1 else "thin",
                    "qubits": len(chosen),
                    "mass": masses[index],
                    "height": slab.height(),
                    "packing_bound": packing_bound(slab),
                })

    def is_good_cell(self, cell) -> bool:
        return tuple(cell) not in self.bad_cells

    def near_own_boundary(self, radius: float) -> np.ndarray:
        gap = np.minimum(self.points - self.lo, self.hi - self.points)
        return (gap <= radius).any(axis=1)

    def near_codim2(self, radius: float) -> np.ndarray:
        near = self.tiling.near_codim2(self.points, radius)
        D = self.points.shape[1]
        for cell, cuts in self.cuts.items():
            box = self.tiling.cell_box(cell)
            for cut in cuts:
                for axis in range(1, D):
                    for side in (box.lo[axis], box.hi[axis]):
                        lo, hi = list(box.lo), list(box.hi)
                        lo[0] = hi[0] = cut
                        lo[axis] = hi[axis] = side
                        near |= Box.of(lo, hi).linf_distance(self.points) <= radius
        return near

    def near_good_facet(self, radius: float) -> np.ndarray:
        residues = self.tiling.residues(self.points)
        w = self.tiling.width
        D = self.points.shape[1]
        near = np.zeros(len(self.points), dtype=bool)
        for q, cell in enumerate(self.cells.tolist()):
            for axis in range(D):
                for close, step in ((residues[q, axis] <= radius, -1), (residues[q, axis] >= w - radius, 1)):
                    if not close:
                        continue
                    neighbour = list(cell)
                    neighbour[axis] += step
                    if self.is_good_cell(cell) or self.is_good_cell(neighbour):
                        near[q] = True
        return near


def theorem_partition_builder(
    code: SubsystemCode,
    e: Embedding,
    ell: float,
    variant: str = THM3_2,
    mode: str = STRICT,
    d: Optional[float] = None,
    width: Optional[float] = None,
    seed: int = 0,
    interactions: Optional[InteractionSet] = None,
) -> PartitionResult:
    """Tile, subdivide and split the qubits into the A/B(/C) regions of the counting arguments."""
    if variant not in VARIANTS:
        raise ValueError(f"unknown variant {variant!r}; expected one of {', '.join(VARIANTS)}")
    if ell <= 0:
        raise ValueError(f"ell must be positive, got {ell}")
    _check_mode(mode, code)
    if variant != THM3_2 and mode == VERIFIED and not code.is_abelian:
        error_msg = f"{variant} replay needs a stabilizer code"
        logger.error(error_msg)
        raise ValueError(error_msg)
    if interactions is None:
        interactions = extract_interactions(code, e)
    n, D = e.n, e.dimension
    params = parameters(code)
    d = _resolve_distance(code, d)
    M, f = interactions.count_long(ell)
    bad = f > 0
    points = e.coordinates

    w0 = proof_constants(d, ell, D).w0
    clamped = False
    if width is None:
        width = w0
        if width < 5 * ell:
            logger.warning(f"w0={w0:.6g} is below 5*ell; using cube width {5 * ell:.6g}")
            width, clamped = 5 * ell, True
    d1 = d / 10

    rng = np.random.default_rng(seed)
    if variant == THM3_2:
        x_points, y_points = np.zeros((0, D)), points
    else:
        x_points, y_points = points, np.repeat(points, f, axis=0)
    tiling_report = find_tiling(x_points, y_points, width, ell, D, rng=rng)
    pieces = _Pieces(tiling_report.tiling, points, f.astype(np.float64), d1, ell)

    good = ~bad
    if variant == THM3_2:
        region_b = pieces.near_own_boundary(2 * ell)
        part_a = good & ~region_b
        labels = ("A", "B")
        masks = [part_a, ~part_a]
    else:
        region_c = pieces.near_codim2(2 * ell)
        region_b = ~region_c & pieces.near_own_boundary(ell)
        if variant == THM5_1_CASE1:
            part_c = region_c | bad
            part_b = good & region_b
        else:
            region_b_prime = ~region_c & pieces.near_good_facet(2 * ell)
            part_c = region_c | (bad & region_b_prime)
            for i, j in interactions.long_pairs(ell):
                if region_b_prime[i] or region_b_prime[j]:
                    part_c[i] = part_c[j] = True
            part_b = (good & region_b & ~part_c) | (bad & ~part_c)
        part_a = ~part_c & ~part_b
        labels = ("A", "B", "C")
        masks = [part_a, part_b, part_c]

    partition = Partition.of([np.flatnonzero(m).tolist() for m in masks], n)
    sizes = {label: len(region) for label, region in zip(labels, partition.parts)}

    bad_boxes = sum(1 for p in pieces.pieces if p["kind"] != "good-cube")
    box_bound = sum(subdivision_count_bound(pieces.cell_mass[c], d1) for c in pieces.bad_cells)
    thin_claim = 11 * d / (16 * D)
    ledger = {
        "n": n,
        "k": params.k,
        "d": d,
        "ell": ell,
        "long_interactions": M,
        "sum_f": int(f.sum()),
        "bad_qubits": int(bad.sum()),
        "w0": w0,
        "width": width,
        "width_clamped": clamped,
        "tiling": tiling_report.to_dict(),
        "occupied_cells": len(pieces.cell_mass),
        "bad_cells": len(pieces.bad_cells),
        "bad_boxes": bad_boxes,
        "bad_box_bound": box_bound,
        "pieces": pieces.pieces,
        "thin_box_packing_claim": thin_claim,
        "sizes": sizes,
    }
    if variant == THM5_1_CASE2:
        ledger["no_bad_boxes"] = bad_boxes == 0

    cert = Certificate(kind="partition", mode=mode)
    step = cert.add("tiling", f"width {width:.6g}", n, "face-proximate", tiling_report.y_near,
                    tiling_report.ok, x_near=tiling_report.x_near)
    if not step.verdict:
        return PartitionResult(variant, partition, labels, cert.stuck(step, "tiling fractions exceeded"), ledger)
    step = cert.add("subdivide", f"{len(pieces.bad_cells)} bad cubes", bad_boxes, "none", None,
                    bad_boxes <= box_bound)
    if not step.verdict:
        return PartitionResult(variant, partition, labels, cert.stuck(step, "too many bad boxes"), ledger)
    for piece in pieces.pieces:
        if piece["kind"] == "thin":
            cert.add("thin-box", f"cell {piece['cell']}", piece["qubits"], "packing", None,
                     piece["packing_bound"] >= piece["qubits"], claim_below_d=piece["packing_bound"] <= thin_claim)

    report = None
    if mode == VERIFIED:
        if variant == THM3_2:
            report = ab_bound_check(code, *partition.parts)
            final = f"k={params.k} <= |B|={sizes['B']}"
        else:
            report = abc_bound_check(code, *partition.parts)
            final = f"k={params.k} <= |C|={sizes['C']}"
        step = cert.add("bound", final, n, "partition", None, report.holds,
                        hypotheses=report.hypotheses, conclusion=report.conclusion)
        if not step.verdict:
            cert.stuck(step, "dimension bound failed on the built partition")
    else:
        key = "B" if variant == THM3_2 else "C"
        cert.add("bound", f"k={params.k} vs |{key}|={sizes[key]}", n, "partition", None, True,
                 counted=params.k <= sizes[key])
    logger.info(f"Partition {variant}: sizes {sizes}, bad boxes {bad_boxes}")
    return PartitionResult(variant, partition, labels, cert, ledger, report)
