"""Embeddings in R^D, interaction lengths, point packing, grid tilings and box subdivision."""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from itertools import product
from typing import Dict, List, Mapping, Optional, Sequence, Tuple

import numpy as np

from bounds import ball_volume
from config import get_settings

logger = logging.getLogger(__name__)

DISTANCE_SLACK = 1e-12
HEIGHT_SLACK = 1e-12


class Embedding:
    """Qubit coordinates in R^D, one row per qubit."""

    def __init__(self, dimension: int, coordinates):
        if int(dimension) < 1:
            raise ValueError(f"dimension must be positive, got {dimension}")
        dimension = int(dimension)
        try:
            points = np.array(coordinates, dtype=np.float64)
        except ValueError:
            error_msg = "coordinates have mismatched dimensions"
            logger.error(error_msg)
            raise ValueError(error_msg) from None
        if points.size == 0:
            points = np.zeros((0, dimension))
        if points.ndim != 2 or points.shape[1] != dimension:
            error_msg = f"coordinates of shape {points.shape} do not match dimension {dimension}"
            logger.error(error_msg)
            raise ValueError(error_msg)
        points.setflags(write=False)
        self.dimension = dimension
        self.coordinates = points

    @property
    def n(self) -> int:
        return self.coordinates.shape[0]

    @classmethod
    def from_dict(cls, payload: Mapping) -> "Embedding":
        try:
            return cls(payload["dimension"], payload["coordinates"])
        except (KeyError, TypeError) as e:
            raise ValueError(f"Malformed embedding document: {e!r}") from None

    def to_dict(self) -> Dict:
        return {"dimension": self.dimension, "coordinates": self.coordinates.tolist()}

    def __eq__(self, other):
        if not isinstance(other, Embedding):
            return NotImplemented
        return self.dimension == other.dimension and np.array_equal(self.coordinates, other.coordinates)

    def __repr__(self):
        return f"Embedding(n={self.n}, D={self.dimension})"

    def translated(self, shift) -> "Embedding":
        return Embedding(self.dimension, self.coordinates + np.asarray(shift, dtype=np.float64))

    def points_in_box(self, box: "Box") -> List[int]:
        return np.flatnonzero(box.contains(self.coordinates)).tolist()

    def points_in_boxes(self, boxes: Sequence["Box"]) -> List[int]:
        mask = np.zeros(self.n, dtype=bool)
        for box in boxes:
            mask |= box.contains(self.coordinates)
        return np.flatnonzero(mask).tolist()

    def max_spread(self) -> float:
        if self.n == 0:
            return 0.0
        return float(np.max(self.coordinates.max(axis=0) - self.coordinates.min(axis=0)))


def validate_embedding(e: Embedding, chunk: int = 512) -> List[Tuple[int, int, float]]:
    """All pairs closer than 1; an empty list means the embedding is valid."""
    violations = []
    points = e.coordinates
    for start in range(0, e.n, chunk):
        block = points[start : start + chunk]
        dists = np.sqrt(((block[:, None, :] - points[None, :, :]) ** 2).sum(axis=2))
        rows, cols = np.nonzero(dists < 1.0 - DISTANCE_SLACK)
        for r, c in zip(rows, cols):
            i = start + int(r)
            if i < int(c):
                violations.append((i, int(c), float(dists[r, c])))
    if violations:
        logger.warning(f"Embedding has {len(violations)} pairs closer than 1")
    return violations


# ---------------------------------------------------------------------------
# Interactions
# ---------------------------------------------------------------------------

@dataclass
class InteractionSet:
    n: int
    pairs: np.ndarray  # (m, 2) with i < j
    lengths: np.ndarray
    multiplicity: np.ndarray

    def __len__(self):
        return self.pairs.shape[0]

    @property
    def max_length(self) -> float:
        return float(self.lengths.max()) if len(self) else 0.0

    def long_mask(self, ell: float) -> np.ndarray:
        return self.lengths >= ell

    def count_long(self, ell: float) -> Tuple[int, np.ndarray]:
        if ell <= 0:
            raise ValueError(f"length threshold must be positive, got {ell}")
        long_pairs = self.pairs[self.long_mask(ell)]
        f = np.bincount(long_pairs.ravel(), minlength=self.n).astype(np.int64)
        return int(long_pairs.shape[0]), f

    def bad_qubits(self, ell: float) -> List[int]:
        _, f = self.count_long(ell)
        return np.flatnonzero(f).tolist()

    def long_pairs(self, ell: float) -> List[Tuple[int, int]]:
        return [tuple(p) for p in self.pairs[self.long_mask(ell)].tolist()]

    def as_mapping(self) -> Dict[Tuple[int, int], float]:
        return {(int(i), int(j)): float(length) for (i, j), length in zip(self.pairs, self.lengths)}

    def to_dict(self) -> Dict:
        return {
            "n": self.n,
            "pairs": [
                {"i": int(i), "j": int(j), "length": float(length), "generators": int(m)}
                for (i, j), length, m in zip(self.pairs, self.lengths, self.multiplicity)
            ],
        }


def extract_interactions(code, e: Embedding) -> InteractionSet:
    if e.n != code.n:
        error_msg = f"embedding has {e.n} points, code has {code.n} qubits"
        logger.error(error_msg)
        raise ValueError(error_msg)
    multiplicity = code.interaction_multiplicity
    if not multiplicity:
        empty = np.zeros((0, 2), dtype=np.int64)
        return InteractionSet(code.n, empty, np.zeros(0), np.zeros(0, dtype=np.int64))
    keys = sorted(multiplicity)
    pairs = np.array(keys, dtype=np.int64)
    deltas = e.coordinates[pairs[:, 0]] - e.coordinates[pairs[:, 1]]
    lengths = np.sqrt((deltas ** 2).sum(axis=1))
    counts = np.array([multiplicity[key] for key in keys], dtype=np.int64)
    return InteractionSet(code.n, pairs, lengths, counts)


def count_long(e: Optional[Embedding], s: InteractionSet, ell: float) -> Tuple[int, np.ndarray]:
    return s.count_long(ell)


# ---------------------------------------------------------------------------
# Boxes and packing
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Box:
    lo: Tuple[float, ...]
    hi: Tuple[float, ...]

    def __post_init__(self):
        if len(self.lo) != len(self.hi):
            raise ValueError("box corners have different dimensions")
        if any(a > b for a, b in zip(self.lo, self.hi)):
            raise ValueError(f"box min {self.lo} exceeds max {self.hi}")

    @classmethod
    def of(cls, lo, hi) -> "Box":
        return cls(tuple(float(v) for v in lo), tuple(float(v) for v in hi))

    @classmethod
    def cube(cls, center, side: float) -> "Box":
        center = np.asarray(center, dtype=np.float64)
        return cls.of(center - side / 2, center + side / 2)

    @classmethod
    def from_dict(cls, payload: Mapping) -> "Box":
        try:
            return cls.of(payload["min"], payload["max"])
        except (KeyError, TypeError) as e:
            raise ValueError(f"Malformed box document: {e!r}") from None

    def to_dict(self) -> Dict:
        return {"min": list(self.lo), "max": list(self.hi)}

    @property
    def dimension(self) -> int:
        return len(self.lo)

    @property
    def sides(self) -> np.ndarray:
        return np.asarray(self.hi) - np.asarray(self.lo)

    def height(self, axis: int = 0) -> float:
        return self.hi[axis] - self.lo[axis]

    def with_bounds(self, axis: int, lo: float, hi: float) -> "Box":
        new_lo, new_hi = list(self.lo), list(self.hi)
        new_lo[axis], new_hi[axis] = lo, hi
        return Box.of(new_lo, new_hi)

    def contains(self, points) -> np.ndarray:
        points = np.atleast_2d(np.asarray(points, dtype=np.float64))
        if points.shape[0] == 0:
            return np.zeros(0, dtype=bool)
        return np.all((points >= np.asarray(self.lo)) & (points <= np.asarray(self.hi)), axis=1)

    def linf_distance(self, points) -> np.ndarray:
        """ℓ∞ distance from each point to this (possibly flat) box."""
        points = np.atleast_2d(np.asarray(points, dtype=np.float64))
        below = np.asarray(self.lo) - points
        above = points - np.asarray(self.hi)
        gap = np.maximum(np.maximum(below, above), 0.0)
        return gap.max(axis=1) if gap.shape[1] else np.zeros(points.shape[0])


def packing_bound(b: Box) -> float:
    D = b.dimension
    return 2 ** D / ball_volume(D) * float(np.prod(1.0 + b.sides))


def check_density(b: Box, e: Embedding) -> bool:
    return len(e.points_in_box(b)) <= packing_bound(b)


# ---------------------------------------------------------------------------
# Grid tilings
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class GridTiling:
    width: float
    offset: Tuple[float, ...]

    @property
    def dimension(self) -> int:
        return len(self.offset)

    def residues(self, points) -> np.ndarray:
        points = np.asarray(points, dtype=np.float64).reshape(-1, self.dimension)
        return np.mod(points - np.asarray(self.offset), self.width)

    def near_faces(self, points, radius: float) -> np.ndarray:
        """Per-point, per-axis flag: within ``radius`` of a grid hyperplane."""
        r = self.residues(points)
        return (r <= radius) | (r >= self.width - radius)

    def near_codim1(self, points, radius: float) -> np.ndarray:
        return self.near_faces(points, radius).any(axis=1)

    def near_codim2(self, points, radius: float) -> np.ndarray:
        return self.near_faces(points, radius).sum(axis=1) >= 2

    def cell_indices(self, points) -> np.ndarray:
        points = np.asarray(points, dtype=np.float64).reshape(-1, self.dimension)
        return np.floor((points - np.asarray(self.offset)) / self.width).astype(np.int64)

    def cell_box(self, index) -> Box:
        lo = np.asarray(self.offset) + np.asarray(index, dtype=np.float64) * self.width
        return Box.of(lo, lo + self.width)

    def to_dict(self) -> Dict:
        return {"width": self.width, "offset": list(self.offset)}


@dataclass
class TilingReport:
    tiling: GridTiling
    x_near: int
    y_near: int
    x_total: int
    y_total: int
    x_allowed: float
    y_allowed: float
    attempts: int
    method: str

    @property
    def ok(self) -> bool:
        return self.x_near <= self.x_allowed * self.x_total and self.y_near <= self.y_allowed * self.y_total

    def to_dict(self) -> Dict:
        return {
            **self.tiling.to_dict(),
            "x_near_codim2": self.x_near,
            "y_near_codim1": self.y_near,
            "x_fraction": self.x_near / self.x_total if self.x_total else 0.0,
            "y_fraction": self.y_near / self.y_total if self.y_total else 0.0,
            "x_allowed_fraction": self.x_allowed,
            "y_allowed_fraction": self.y_allowed,
            "attempts": self.attempts,
            "method": self.method,
            "ok": self.ok,
        }


def allowed_fractions(width: float, ell: float, dimension: int) -> Tuple[float, float]:
    return (4 * ell * dimension / width) ** 2, 8 * ell * dimension / width


def _as_points(points, dimension: int) -> np.ndarray:
    if points is None:
        return np.zeros((0, dimension))
    points = np.asarray(points, dtype=np.float64)
    if points.size == 0:
        return np.zeros((0, dimension))
    if points.ndim != 2 or points.shape[1] != dimension:
        raise ValueError(f"points of shape {points.shape} do not match dimension {dimension}")
    return points


def verify_tiling(x_points, y_points, tiling: GridTiling, ell: float) -> Tuple[int, int]:
    """Count face-proximate points by direct enumeration, one coordinate at a time."""
    w = tiling.width
    reach = 2 * ell

    def near_axes(point):
        hits = 0
        for value, shift in zip(point, tiling.offset):
            residue = math.fmod(value - shift, w)
            if residue < 0:
                residue += w
            if residue >= w:
                residue -= w
            if residue <= reach or residue >= w - reach:
                hits += 1
        return hits

    x_near = sum(1 for p in x_points if near_axes(p) >= 2)
    y_near = sum(1 for p in y_points if near_axes(p) >= 1)
    return x_near, y_near


def _critical_offsets(values: np.ndarray, width: float, ell: float) -> List[float]:
    candidates = {0.0}
    for v in values:
        for c in (v, v - 2 * ell, v + 2 * ell):
            candidates.add(float(np.mod(c, width)))
    ordered = sorted(candidates)
    midpoints = [(a + b) / 2 for a, b in zip(ordered, ordered[1:])]
    midpoints.append(float(np.mod((ordered[-1] + ordered[0] + width) / 2, width)))
    # interior points of each constant stretch first, then the breakpoints
    return midpoints + ordered


def find_tiling(
    x_points,
    y_points,
    width: float,
    ell: float,
    dimension: int,
    rng: Optional[np.random.Generator] = None,
    max_attempts: Optional[int] = None,
) -> TilingReport:
    """Offset a width-w grid so few X points sit near codim-2 faces and few Y points near codim-1 faces."""
    if ell <= 0:
        raise ValueError(f"ell must be positive, got {ell}")
    if width < 4 * ell:
        error_msg = f"tiling width {width} is below 4*ell = {4 * ell}"
        logger.error(error_msg)
        raise ValueError(error_msg)
    x_points = _as_points(x_points, dimension)
    y_points = _as_points(y_points, dimension)
    x_allowed, y_allowed = allowed_fractions(width, ell, dimension)
    max_attempts = max_attempts or get_settings().tiling_attempts
    rng = rng if rng is not None else np.random.default_rng(0)
    reach = 2 * ell

    def evaluate(offset):
        tiling = GridTiling(float(width), tuple(float(v) for v in offset))
        x_near = int(tiling.near_codim2(x_points, reach).sum()) if len(x_points) else 0
        y_near = int(tiling.near_codim1(y_points, reach).sum()) if len(y_points) else 0
        ok = x_near <= x_allowed * len(x_points) and y_near <= y_allowed * len(y_points)
        return tiling, x_near, y_near, ok

    def report(tiling, x_near, y_near, attempts, method):
        return TilingReport(tiling, x_near, y_near, len(x_points), len(y_points), x_allowed, y_allowed, attempts, method)

    if len(x_points) == 0 and len(y_points) == 0:
        return report(GridTiling(float(width), (0.0,) * dimension), 0, 0, 0, "trivial")

    for attempt in range(1, max_attempts + 1):
        tiling, x_near, y_near, ok = evaluate(rng.uniform(0.0, width, size=dimension))
        if ok:
            logger.debug(f"Tiling found after {attempt} sampled offsets")
            return report(tiling, x_near, y_near, attempt, "sampled")

    logger.warning(f"No tiling after {max_attempts} samples; searching critical offsets")
    everything = np.concatenate([x_points, y_points])
    axes = [_critical_offsets(everything[:, axis], width, ell) for axis in range(dimension)]
    tried = 0
    for offset in product(*axes):
        tried += 1
        tiling, x_near, y_near, ok = evaluate(offset)
        if ok:
            return report(tiling, x_near, y_near, max_attempts + tried, "exact")
    raise RuntimeError(f"no admissible tiling offset among {tried} critical offsets")


# ---------------------------------------------------------------------------
# Subdivision
# ---------------------------------------------------------------------------

def _masses_in(box: Box, positions, weights) -> Tuple[np.ndarray, np.ndarray]:
    positions = _as_points(positions, box.dimension)
    weights = np.ones(len(positions)) if weights is None else np.asarray(weights, dtype=np.float64)
    if len(weights) != len(positions):
        raise ValueError(f"{len(weights)} weights for {len(positions)} mass positions")
    inside = box.contains(positions) if len(positions) else np.zeros(0, dtype=bool)
    return positions[inside], weights[inside]


def box_mass(box: Box, positions, weights=None) -> float:
    _, w = _masses_in(box, positions, weights)
    return float(w.sum())


def subdivision_count_bound(mass: float, d1: float) -> int:
    """Box count the greedy sweep never exceeds: max(1, ceil(2f/d1)).

    Each piece but the last carries more than d1 together with its successor,
    which gives the ceiling. The floor form can fail: masses 2, 19, 2 spaced
    more than 10ℓ apart with d1 = 20 need three boxes while floor(46/20) = 2.
    """
    return max(1, math.ceil(2 * mass / d1))


def subdivide(box: Box, positions, weights, ell: float, d1: float, axis: int = 0) -> List[Box]:
    """Cut ``box`` by hyperplanes orthogonal to ``axis``.

    Every piece is at least 5ℓ high, and carries mass at most d1 or is at
    most 10ℓ high. Pieces are half-open along ``axis`` except the last.
    """
    if ell <= 0 or d1 <= 0:
        raise ValueError(f"ell and d1 must be positive, got {ell}, {d1}")
    lo, hi = box.lo[axis], box.hi[axis]
    if hi - lo < 5 * ell * (1 - HEIGHT_SLACK):
        error_msg = f"box height {hi - lo} is below 5*ell = {5 * ell}"
        logger.error(error_msg)
        raise ValueError(error_msg)

    points, masses = _masses_in(box, positions, weights)
    order = np.argsort(points[:, axis], kind="stable")
    xs, ws = points[order, axis], masses[order]
    if ws.sum() <= d1 or hi - lo <= 10 * ell:
        return [box]

    cuts = [lo]
    s = lo
    while True:
        start = int(np.searchsorted(xs, s, side="left"))
        rest = ws[start:]
        if rest.sum() <= d1 or hi - s <= 10 * ell:
            break
        first_over = int(np.argmax(np.cumsum(rest) > d1))
        t = float(xs[start + first_over])
        if t - s >= 5 * ell:
            c = min(t, hi - 5 * ell)
        else:
            # [s, t] already carries more than d1, so take a thin slab
            c = min(s + 10 * ell, hi - 5 * ell)
        cuts.append(c)
        s = c
    cuts.append(hi)

    pieces = [box.with_bounds(axis, a, b) for a, b in zip(cuts, cuts[1:])]
    logger.debug(f"Subdivided box of mass {ws.sum()} into {len(pieces)} slabs")
    return pieces


def slab_masses(pieces: Sequence[Box], positions, weights, axis: int = 0) -> List[float]:
    """Mass per piece under the half-open convention (last piece closed)."""
    if not pieces:
        return []
    outer = Box.of(pieces[0].lo, pieces[-1].hi)
    points, masses = _masses_in(outer, positions, weights)
    cuts = np.array([p.lo[axis] for p in pieces[1:]])
    slot = np.searchsorted(cuts, points[:, axis], side="right")
    totals = np.zeros(len(pieces))
    np.add.at(totals, slot, masses)
    return totals.tolist()
