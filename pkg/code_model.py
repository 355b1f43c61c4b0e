"""Subsystem codes given by gauge generators.

The stabilizer group is the centre of the gauge group, bare logicals come
from the centraliser of the gauge group, and the distance is found by
enumerating qubit regions until one supports a dressed logical.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass, asdict
from functools import cached_property
from itertools import combinations
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

import numpy as np

from pauli_algebra import (
    BitMatrix,
    PauliVector,
    check_qubit_count,
    gf2_null_space,
    gf2_row_reduce,
    kernel_on_support,
    symplectic_gram,
    symplectic_product,
)

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class CodeParameters:
    n: int
    k: int
    g: int
    s: int
    d: Optional[int] = None

    def to_dict(self) -> Dict:
        return asdict(self)


@dataclass(frozen=True)
class LogicalPair:
    index: int
    x_bar: PauliVector
    z_bar: PauliVector


@dataclass(frozen=True)
class DistanceResult:
    """Outcome of a weight-capped distance search."""

    value: Optional[int]
    weight_cap: int

    @property
    def exceeds_cap(self) -> bool:
        return self.value is None

    @property
    def lower_bound(self) -> int:
        return self.value if self.value is not None else self.weight_cap + 1

    def to_dict(self) -> Dict:
        return {
            "distance": self.value,
            "weight_cap": self.weight_cap,
            "exceeds_cap": self.exceeds_cap,
            "lower_bound": self.lower_bound,
        }


class SubsystemCode:
    """A subsystem code defined by its list of gauge generators."""

    def __init__(self, n: int, gauge_generators: Sequence[PauliVector] = ()):
        check_qubit_count(n)
        generators = list(gauge_generators)
        for g in generators:
            if g.n != n:
                error_msg = f"gauge generator {g} acts on {g.n} qubits, code has {n}"
                logger.error(error_msg)
                raise ValueError(error_msg)
        self.n = n
        self.gauge_generators: Tuple[PauliVector, ...] = tuple(generators)

    @classmethod
    def from_strings(cls, strings: Sequence[str], n: Optional[int] = None) -> "SubsystemCode":
        paulis = [PauliVector.from_string(s) for s in strings]
        if n is None:
            if not paulis:
                raise ValueError("qubit count is required when no generators are given")
            n = paulis[0].n
        return cls(n, paulis)

    @classmethod
    def from_dict(cls, payload: Dict) -> "SubsystemCode":
        try:
            n = int(payload["n"])
            strings = list(payload.get("gauge_generators", []))
        except (KeyError, TypeError, AttributeError) as e:
            raise ValueError(f"Malformed code document: {e}") from None
        bad = [s for s in strings if not isinstance(s, str)]
        if bad:
            error_msg = f"gauge generators must be Pauli strings, got {bad[:3]}"
            logger.error(error_msg)
            raise ValueError(error_msg)
        return cls.from_strings(strings, n)

    def to_dict(self) -> Dict:
        return {"n": self.n, "gauge_generators": [str(g) for g in self.gauge_generators]}

    def __eq__(self, other):
        if not isinstance(other, SubsystemCode):
            return NotImplemented
        return self.n == other.n and self.gauge_generators == other.gauge_generators

    def __hash__(self):
        return hash((self.n, self.gauge_generators))

    def __repr__(self):
        return f"SubsystemCode(n={self.n}, generators={len(self.gauge_generators)})"

    # -- derived structure ---------------------------------------------------

    @cached_property
    def generator_matrix(self) -> BitMatrix:
        return BitMatrix.from_paulis(self.gauge_generators, self.n)

    @cached_property
    def gauge_span(self) -> BitMatrix:
        return self.generator_matrix.row_reduced()

    @cached_property
    def stabilizer_basis(self) -> BitMatrix:
        return derive_stabilizer(self)

    @cached_property
    def is_abelian(self) -> bool:
        rows = self.generator_matrix.rows
        return not symplectic_gram(rows, rows).any()

    @cached_property
    def interaction_multiplicity(self) -> Dict[Tuple[int, int], int]:
        return interaction_pairs(self.gauge_generators)


def interaction_pairs(generators: Iterable[PauliVector]) -> Dict[Tuple[int, int], int]:
    """Qubit pairs sharing a generator support, with generator multiplicity."""
    pairs: Dict[Tuple[int, int], int] = {}
    for g in generators:
        for pair in combinations(g.support(), 2):
            pairs[pair] = pairs.get(pair, 0) + 1
    return pairs


def derive_stabilizer(code: SubsystemCode) -> BitMatrix:
    span = code.gauge_span
    if len(span) == 0:
        return span
    # c·B lies in the centre iff (c·B) commutes with every generator
    gram = symplectic_gram(span.rows, code.generator_matrix.rows)
    coefficients = gf2_null_space(gram.T)
    if coefficients.shape[0] == 0:
        return BitMatrix(np.zeros((0, 2 * code.n), dtype=np.uint8), code.n)
    centre = (coefficients.astype(np.int64) @ span.rows.astype(np.int64)) & 1
    reduced, _ = gf2_row_reduce(centre)
    return BitMatrix(reduced, code.n)


def parameters(code: SubsystemCode) -> CodeParameters:
    r = code.gauge_span.rank()
    s = code.stabilizer_basis.rank()
    if (r - s) % 2:
        raise RuntimeError(f"gauge rank {r} and stabilizer rank {s} differ by an odd amount")
    g = (r - s) // 2
    return CodeParameters(n=code.n, k=code.n - s - g, g=g, s=s)


def supports_logical(code: SubsystemCode, region: Iterable[int], bare: bool = False) -> bool:
    """Whether some Pauli on ``region`` is a nontrivial dressed (or bare) logical."""
    constraints = code.generator_matrix if bare else code.stabilizer_basis
    kernel = kernel_on_support(region, constraints)
    if len(kernel) == 0:
        return False
    return not bool(code.gauge_span.contains(kernel.rows).all())


def distance(code: SubsystemCode, weight_cap: Optional[int] = None) -> DistanceResult:
    params = parameters(code)
    if params.k == 0:
        error_msg = "distance is undefined for a code with k = 0"
        logger.error(error_msg)
        raise ValueError(error_msg)
    cap = code.n if weight_cap is None else min(int(weight_cap), code.n)
    if cap < 0:
        raise ValueError(f"weight_cap must be nonnegative, got {weight_cap}")

    logger.info(f"Searching distance of {code!r} up to weight {cap}")
    for w in range(1, cap + 1):
        checked = 0
        for region in combinations(range(code.n), w):
            checked += 1
            if supports_logical(code, region):
                logger.info(f"Found dressed logical support of size {w}: {list(region)}")
                return DistanceResult(value=w, weight_cap=cap)
        logger.debug(f"All {checked} regions of size {w} are correctable")
    logger.info(f"No dressed logical of weight <= {cap}")
    return DistanceResult(value=None, weight_cap=cap)


def logical_representatives(code: SubsystemCode) -> List[LogicalPair]:
    """Canonical bare logical pairs by symplectic Gram-Schmidt on C(G) modulo G."""
    params = parameters(code)
    if params.k == 0:
        error_msg = "logical representatives are undefined for a code with k = 0"
        logger.error(error_msg)
        raise ValueError(error_msg)

    n = code.n
    centraliser = kernel_on_support(range(n), code.generator_matrix).row_reduced()
    pool = [row.copy() for row in centraliser.rows]
    chosen = [row for row in code.gauge_span.rows]
    pairs: List[LogicalPair] = []

    def commute(a, b):
        return symplectic_product(PauliVector(a), PauliVector(b))

    while len(pairs) < params.k:
        current = BitMatrix(np.array(chosen), n) if chosen else BitMatrix(np.zeros((0, 2 * n)), n)
        outside = [i for i, v in enumerate(pool) if not current.contains(v)[0]]
        if not outside:
            break
        a_index = outside[0]
        a = pool[a_index]
        partner = [i for i, v in enumerate(pool) if commute(a, v)]
        if not partner:
            raise RuntimeError(f"no symplectic partner for {PauliVector(a)} in the centraliser")
        b_index = partner[0]
        b = pool[b_index]
        pairs.append(LogicalPair(index=len(pairs), x_bar=PauliVector(a), z_bar=PauliVector(b)))
        chosen.extend([a, b])

        rest = []
        for i, v in enumerate(pool):
            if i in (a_index, b_index):
                continue
            v = v.copy()
            if commute(v, b):
                v ^= a
            if commute(v, a):
                v ^= b
            rest.append(v)
        pool = rest

    if len(pairs) != params.k:
        raise RuntimeError(f"found {len(pairs)} logical pairs, expected {params.k}")
    return pairs
