"""Built-in code families with local embeddings, concatenation, and the dilated block embeddings."""
from __future__ import annotations

import logging
import math
import re
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence

import numpy as np

from bounds import ASYMPTOTIC, PROJECTOR, SUBSYSTEM, bounds_for
from code_model import SubsystemCode, distance, logical_representatives, parameters
from geometry import Embedding, InteractionSet, extract_interactions, validate_embedding
from pauli_algebra import BitMatrix, PauliVector

logger = logging.getLogger(__name__)


@dataclass
class EmbeddedCode:
    code: SubsystemCode
    embedding: Embedding
    family: str = "custom"
    params: Dict = field(default_factory=dict)

    def __post_init__(self):
        if self.embedding.n != self.code.n:
            error_msg = f"embedding has {self.embedding.n} points, code has {self.code.n} qubits"
            logger.error(error_msg)
            raise ValueError(error_msg)
        close = validate_embedding(self.embedding)
        if close:
            i, j, dist = close[0]
            error_msg = f"qubits {i} and {j} are {dist:.6g} apart; embeddings need distance >= 1"
            logger.error(error_msg)
            raise ValueError(error_msg)

    @property
    def n(self) -> int:
        return self.code.n

    def interactions(self) -> InteractionSet:
        return extract_interactions(self.code, self.embedding)

    def to_dict(self) -> Dict:
        return {
            "family": self.family,
            "params": dict(self.params),
            "code": self.code.to_dict(),
            "embedding": self.embedding.to_dict(),
        }

    @classmethod
    def from_dict(cls, payload: Dict) -> "EmbeddedCode":
        try:
            code = SubsystemCode.from_dict(payload["code"])
            embedding = Embedding.from_dict(payload["embedding"])
        except KeyError as e:
            raise ValueError(f"Malformed embedded code document: missing {e}") from None
        return cls(code, embedding, payload.get("family", "custom"), dict(payload.get("params", {})))


def _pauli(n: int, x_qubits: Sequence[int] = (), z_qubits: Sequence[int] = ()) -> PauliVector:
    x = np.zeros(n, dtype=np.uint8)
    z = np.zeros(n, dtype=np.uint8)
    x[list(x_qubits)] = 1
    z[list(z_qubits)] = 1
    return PauliVector.from_xz(x, z)


def _check_size(m: int, family: str) -> None:
    if m is None or int(m) != m or m < 2:
        error_msg = f"{family} needs an integer size >= 2, got {m}"
        logger.error(error_msg)
        raise ValueError(error_msg)


# ---------------------------------------------------------------------------
# Two-dimensional families
# ---------------------------------------------------------------------------

def bacon_shor(m: int) -> EmbeddedCode:
    """m×m Bacon-Shor code; qubit (r, c) is index r·m + c at coordinate (r, c)."""
    _check_size(m, "bacon_shor")
    n = m * m
    generators = []
    for r in range(m - 1):
        for c in range(m):
            generators.append(_pauli(n, x_qubits=[r * m + c, (r + 1) * m + c]))
    for r in range(m):
        for c in range(m - 1):
            generators.append(_pauli(n, z_qubits=[r * m + c, r * m + c + 1]))
    coordinates = [(r, c) for r in range(m) for c in range(m)]
    return EmbeddedCode(SubsystemCode(n, generators), Embedding(2, coordinates), "bacon_shor", {"m": m})


def surface_code(m: int) -> EmbeddedCode:
    """Rotated planar surface code of distance m on an m×m grid of data qubits."""
    _check_size(m, "surface_code")
    n = m * m
    generators = []
    for r in range(-1, m):
        for c in range(-1, m):
            row_edge = r in (-1, m - 1)
            col_edge = c in (-1, m - 1)
            if row_edge and col_edge:
                continue
            x_type = (r + c) % 2 == 0
            # boundary plaquettes: X along top/bottom rows, Z along left/right columns
            if row_edge and not x_type or col_edge and x_type:
                continue
            support = [
                rr * m + cc
                for rr in (r, r + 1)
                for cc in (c, c + 1)
                if 0 <= rr < m and 0 <= cc < m
            ]
            generators.append(_pauli(n, x_qubits=support) if x_type else _pauli(n, z_qubits=support))
    coordinates = [(r, c) for r in range(m) for c in range(m)]
    return EmbeddedCode(SubsystemCode(n, generators), Embedding(2, coordinates), "surface", {"m": m})


# ---------------------------------------------------------------------------
# Small inner codes
# ---------------------------------------------------------------------------

HAMMING_7_4 = np.array(
    [[0, 0, 0, 1, 1, 1, 1], [0, 1, 1, 0, 0, 1, 1], [1, 0, 1, 0, 1, 0, 1]],
    dtype=np.uint8,
)


def lattice_embedding(n: int, D: int) -> Embedding:
    """First n points of the smallest cubic lattice with at least n sites."""
    if D < 1:
        raise ValueError(f"dimension must be at least 1, got {D}")
    side = 1
    while side ** D < n:
        side += 1
    points = [index for _, index in zip(range(n), np.ndindex(*([side] * D)))]
    return Embedding(D, points if points else np.zeros((0, D)))


def _five_one_three() -> List[str]:
    base = "XZZXI"
    return [base[-shift:] + base[:-shift] if shift else base for shift in range(4)]


def _steane() -> List[PauliVector]:
    rows = [np.flatnonzero(row).tolist() for row in HAMMING_7_4]
    return [_pauli(7, x_qubits=row) for row in rows] + [_pauli(7, z_qubits=row) for row in rows]


def _repetition(r: int) -> List[PauliVector]:
    _check_size(r, "repetition")
    return [_pauli(r, z_qubits=[i, i + 1]) for i in range(r - 1)]


_NAME = re.compile(r"^\s*([a-z_]+)\s*(?:\(\s*(\d+)\s*\))?\s*$")
INNER_CODES = ("steane", "five_one_three", "repetition")


def small_inner_codes(name: str, D: int = 2, size: Optional[int] = None) -> EmbeddedCode:
    """A named small code on a cubic lattice; ``repetition(r)`` takes its length in the name or ``size``."""
    match = _NAME.match(name or "")
    if not match or match.group(1) not in INNER_CODES:
        error_msg = f"unknown inner code {name!r}; expected one of {', '.join(INNER_CODES)}"
        logger.error(error_msg)
        raise ValueError(error_msg)
    family = match.group(1)
    if family == "five_one_three":
        code = SubsystemCode.from_strings(_five_one_three())
        params = {}
    elif family == "steane":
        code = SubsystemCode(7, _steane())
        params = {}
    else:
        r = int(match.group(2)) if match.group(2) else (size if size is not None else 3)
        code = SubsystemCode(r, _repetition(r))
        params = {"r": r}
    return EmbeddedCode(code, lattice_embedding(code.n, D), family, {**params, "D": D})


# ---------------------------------------------------------------------------
# Concatenation
# ---------------------------------------------------------------------------

def _on_blocks(n1: int, n2: int, placements) -> PauliVector:
    x = np.zeros(n1 * n2, dtype=np.uint8)
    z = np.zeros(n1 * n2, dtype=np.uint8)
    for block, p in placements:
        x[block * n1:(block + 1) * n1] ^= p.x_bits
        z[block * n1:(block + 1) * n1] ^= p.z_bits
    return PauliVector.from_xz(x, z)


def _substitute(outer_op: PauliVector, pair, n1: int, n2: int) -> PauliVector:
    """Replace X/Z on outer qubit j by the inner logical pair acting on block j (Y takes both)."""
    placements = []
    for j in outer_op.support():
        if outer_op.x_bits[j]:
            placements.append((j, pair.x_bar))
        if outer_op.z_bits[j]:
            placements.append((j, pair.z_bar))
    return _on_blocks(n1, n2, placements)


def _inner_logicals(inner: SubsystemCode):
    if parameters(inner).k == 0:
        error_msg = "inner code encodes no logical qubits"
        logger.error(error_msg)
        raise ValueError(error_msg)
    return logical_representatives(inner)


def concatenate(inner: SubsystemCode, outer: SubsystemCode) -> SubsystemCode:
    """Outer code over n₂ inner blocks, one outer copy per inner logical qubit."""
    logicals = _inner_logicals(inner)
    n1, n2 = inner.n, outer.n
    generators = [
        _on_blocks(n1, n2, [(block, g)])
        for block in range(n2)
        for g in inner.gauge_generators
    ]
    generators.extend(
        _substitute(g, pair, n1, n2)
        for pair in logicals
        for g in outer.gauge_generators
    )
    code = SubsystemCode(n1 * n2, generators)

    p1, p2, p = parameters(inner), parameters(outer), parameters(code)
    expected = (n1 * n2, p1.k * p2.k, p1.k * p2.g + n2 * p1.g)
    if (p.n, p.k, p.g) != expected:
        raise RuntimeError(f"concatenated parameters (n, k, g) = {(p.n, p.k, p.g)}, expected {expected}")
    logger.info(f"Concatenated [[{n1},{p1.k}]] into [[{n2},{p2.k}]]: n={p.n}, k={p.k}, g={p.g}")
    return code


def concatenated_stabilizer_generators(inner: SubsystemCode, outer: SubsystemCode) -> BitMatrix:
    """Inner stabilizers on every block plus the substituted outer stabilizers."""
    logicals = _inner_logicals(inner)
    n1, n2 = inner.n, outer.n
    rows = [
        _on_blocks(n1, n2, [(block, s)])
        for block in range(n2)
        for s in inner.stabilizer_basis.paulis()
    ]
    rows.extend(
        _substitute(s, pair, n1, n2)
        for pair in logicals
        for s in outer.stabilizer_basis.paulis()
    )
    return BitMatrix.from_paulis(rows, n1 * n2)


# ---------------------------------------------------------------------------
# Dilated block embeddings
# ---------------------------------------------------------------------------

@dataclass
class ConcatPlan:
    inner: EmbeddedCode
    outer: EmbeddedCode
    ell_target: float
    outer_locality: Optional[float] = None

    def __post_init__(self):
        if self.inner.embedding.dimension != self.outer.embedding.dimension:
            raise ValueError("inner and outer embeddings have different dimensions")

    @property
    def D(self) -> int:
        return self.outer.embedding.dimension

    @property
    def ell2(self) -> float:
        if self.outer_locality is not None:
            return float(self.outer_locality)
        return self.outer.interactions().max_length

    @property
    def ell_prime(self) -> float:
        return 2 * (math.sqrt(self.D) + self.ell2)

    @property
    def dilation(self) -> float:
        return self.ell_target / self.ell_prime

    def to_dict(self) -> Dict:
        return {
            "D": self.D,
            "ell_target": self.ell_target,
            "ell2": self.ell2,
            "ell_prime": self.ell_prime,
            "dilation": self.dilation,
        }


def build_concat_embedding(plan: ConcatPlan) -> EmbeddedCode:
    """Place a copy of the inner lattice around each dilated outer qubit."""
    ell_prime = plan.ell_prime
    if plan.ell_target <= ell_prime:
        error_msg = f"target length {plan.ell_target} must exceed ell' = {ell_prime:.6g}"
        logger.error(error_msg)
        raise ValueError(error_msg)

    inner = plan.inner.embedding.coordinates
    if len(inner):
        lo, hi = inner.min(axis=0), inner.max(axis=0)
        inner = inner - (lo + hi) / 2
        diameter = float(np.linalg.norm(hi - lo))
    else:
        diameter = 0.0
    pitch = max(plan.dilation, diameter + 1.0)
    reach = pitch * plan.ell2 + diameter
    if reach >= plan.ell_target:
        error_msg = f"block pitch {pitch:.6g} gives interaction reach {reach:.6g} >= target {plan.ell_target}"
        logger.error(error_msg)
        raise ValueError(error_msg)

    outer = plan.outer.embedding.coordinates
    coordinates = np.concatenate([pitch * centre + inner for centre in outer]) if len(outer) else inner[:0]
    code = concatenate(plan.inner.code, plan.outer.code)
    params = {**plan.to_dict(), "pitch": pitch, "reach_bound": reach}
    result = EmbeddedCode(code, Embedding(plan.D, coordinates), "concatenated", params)

    measured = result.interactions().max_length
    if measured >= plan.ell_target:
        raise RuntimeError(f"measured interaction length {measured} reaches the target {plan.ell_target}")
    result.params["max_length"] = measured
    logger.info(f"Concatenated embedding: n={code.n}, pitch={pitch:.6g}, max length {measured:.6g}")
    return result


def disjoint_copies(ec: EmbeddedCode, copies: int) -> EmbeddedCode:
    """``copies`` side-by-side copies along the first axis, one unit apart."""
    if int(copies) != copies or copies < 1:
        raise ValueError(f"copies must be a positive integer, got {copies}")
    n = ec.n
    total = n * copies
    generators = []
    for c in range(copies):
        for g in ec.code.gauge_generators:
            x = np.zeros(total, dtype=np.uint8)
            z = np.zeros(total, dtype=np.uint8)
            x[c * n:(c + 1) * n] = g.x_bits
            z[c * n:(c + 1) * n] = g.z_bits
            generators.append(PauliVector.from_xz(x, z))
    coords = ec.embedding.coordinates
    D = ec.embedding.dimension
    extent = float(coords[:, 0].max() - coords[:, 0].min()) if n else 0.0
    shift = np.zeros(D)
    shift[0] = extent + 1.0
    placed = np.concatenate([coords + c * shift for c in range(copies)]) if n else np.zeros((0, D))
    return EmbeddedCode(
        SubsystemCode(total, generators),
        Embedding(D, placed),
        f"{ec.family}x{copies}",
        {**ec.params, "copies": copies},
    )


# ---------------------------------------------------------------------------
# Saturation
# ---------------------------------------------------------------------------

@dataclass
class SaturationRecipe:
    code_class: str
    n: float
    k: float
    d: float
    D: int
    k_effective: float
    ell2: float
    ell_prime: float
    ell: float
    n0: float
    n1: float
    n2: float
    copies: int
    feasible: bool

    def to_dict(self) -> Dict:
        return dict(self.__dict__)


def saturation_recipe(n, k, d, D: int, ell2: float, code_class: str = SUBSYSTEM) -> SaturationRecipe:
    """Block sizes of the inner/outer concatenation that meets the length bound."""
    if code_class not in (SUBSYSTEM, PROJECTOR):
        raise ValueError(f"unknown code class {code_class!r}")
    if D < 2 or not (0 < k <= n and 0 < d <= n) or ell2 < 0:
        error_msg = f"need D >= 2, 0 < k, d <= n and ell2 >= 0; got n={n}, k={k}, d={d}, D={D}, ell2={ell2}"
        logger.error(error_msg)
        raise ValueError(error_msg)
    ell_prime = 2 * (math.sqrt(D) + ell2)
    if code_class == SUBSYSTEM:
        k_eff = max(k, d)
        ell = (k_eff * d ** (1 / (D - 1)) / n) ** ((D - 1) / D)
        n0 = n * d / k_eff
    else:
        k_eff = d * d / n if d >= math.sqrt(k * n) else k
        ell = (k_eff * d ** (2 / (D - 1)) / n) ** ((D - 1) / (2 * D))
        n0 = (d / ell) ** (D / (D - 1))
    n1 = (ell / ell_prime) ** D
    return SaturationRecipe(
        code_class=code_class, n=n, k=k, d=d, D=D, k_effective=k_eff,
        ell2=ell2, ell_prime=ell_prime, ell=ell,
        n0=n0, n1=n1, n2=n0 / n1, copies=math.ceil(n / n0),
        feasible=ell >= ell_prime,
    )


def saturation_report(ec: EmbeddedCode, code_class: str = SUBSYSTEM, weight_cap: Optional[int] = None) -> Dict:
    """Measured longest interaction against the asymptotic ℓ* of the code's own parameters."""
    params = parameters(ec.code)
    result = distance(ec.code, weight_cap)
    d = result.lower_bound
    report = bounds_for(code_class, ec.n, params.k, min(d, ec.n), ec.embedding.dimension, ASYMPTOTIC)
    max_length = ec.interactions().max_length
    return {
        "family": ec.family,
        "n": ec.n,
        "k": params.k,
        "g": params.g,
        "d": result.value,
        "d_lower_bound": d,
        "d_exact": not result.exceeds_cap,
        "ell_star": report.ell_star,
        "distance_branch": report.distance_branch,
        "dimension_branch": report.dimension_branch,
        "max_length": max_length,
        "ratio": max_length / report.ell_star,
    }
