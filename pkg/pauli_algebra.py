"""Phase-free Pauli vectors and GF(2) linear algebra.

A Pauli on n qubits is a length-2n bit vector (x | z); Y sets both bits.
Matrices are numpy uint8 arrays with one bit per entry.
"""
from __future__ import annotations

import logging
from functools import cached_property
from typing import Iterable, List, Sequence, Tuple

import numpy as np

from config import get_settings

logger = logging.getLogger(__name__)

_SYMBOLS = {"I": (0, 0), "X": (1, 0), "Z": (0, 1), "Y": (1, 1)}
_LETTERS = {(0, 0): "I", (1, 0): "X", (0, 1): "Z", (1, 1): "Y"}


def check_qubit_count(n: int) -> None:
    limit = get_settings().max_qubits
    if n < 0 or n > limit:
        error_msg = f"qubit count {n} outside supported range [0, {limit}]"
        logger.error(error_msg)
        raise ValueError(error_msg)


def _frozen(array: np.ndarray) -> np.ndarray:
    array = np.ascontiguousarray(array, dtype=np.uint8) & 1
    array.setflags(write=False)
    return array


class PauliVector:
    """A Pauli operator modulo phase."""

    __slots__ = ("bits",)

    def __init__(self, bits):
        bits = np.asarray(bits, dtype=np.uint8)
        if bits.ndim != 1 or bits.size % 2:
            raise ValueError(f"Pauli bit vector must be 1-D of even length, got shape {bits.shape}")
        check_qubit_count(bits.size // 2)
        object.__setattr__(self, "bits", _frozen(bits))

    def __setattr__(self, name, value):
        raise AttributeError("PauliVector is immutable")

    @classmethod
    def from_xz(cls, x_bits, z_bits) -> "PauliVector":
        x_bits = np.asarray(x_bits, dtype=np.uint8)
        z_bits = np.asarray(z_bits, dtype=np.uint8)
        if x_bits.shape != z_bits.shape:
            raise ValueError("x and z parts must have the same length")
        return cls(np.concatenate([x_bits, z_bits]))

    @classmethod
    def from_string(cls, text: str) -> "PauliVector":
        if not isinstance(text, str):
            raise ValueError(f"Pauli must be given as a string, got {text!r}")
        try:
            pairs = [_SYMBOLS[c] for c in text.strip().upper()]
        except KeyError as e:
            raise ValueError(f"Invalid Pauli symbol {e.args[0]!r} in {text!r}") from None
        x = [p[0] for p in pairs]
        z = [p[1] for p in pairs]
        return cls.from_xz(x, z)

    @classmethod
    def identity(cls, n: int) -> "PauliVector":
        return cls(np.zeros(2 * n, dtype=np.uint8))

    @classmethod
    def single(cls, n: int, qubit: int, symbol: str) -> "PauliVector":
        bits = np.zeros(2 * n, dtype=np.uint8)
        x, z = _SYMBOLS[symbol]
        bits[qubit], bits[n + qubit] = x, z
        return cls(bits)

    @property
    def n(self) -> int:
        return self.bits.size // 2

    @property
    def x_bits(self) -> np.ndarray:
        return self.bits[: self.n]

    @property
    def z_bits(self) -> np.ndarray:
        return self.bits[self.n :]

    def support(self) -> List[int]:
        return np.flatnonzero(self.x_bits | self.z_bits).tolist()

    def __mul__(self, other: "PauliVector") -> "PauliVector":
        if self.n != other.n:
            raise ValueError(f"length mismatch: {self.n} vs {other.n} qubits")
        return PauliVector(self.bits ^ other.bits)

    def __eq__(self, other):
        if not isinstance(other, PauliVector):
            return NotImplemented
        return self.bits.size == other.bits.size and bool(np.array_equal(self.bits, other.bits))

    def __hash__(self):
        return hash(self.bits.tobytes())

    def __str__(self):
        return "".join(_LETTERS[(int(x), int(z))] for x, z in zip(self.x_bits, self.z_bits))

    def __repr__(self):
        return f"PauliVector({str(self)!r})"


def weight(p: PauliVector) -> int:
    return int(np.count_nonzero(p.x_bits | p.z_bits))


def symplectic_product(p: PauliVector, q: PauliVector) -> int:
    if p.n != q.n:
        error_msg = f"length mismatch: {p.n} vs {q.n} qubits"
        logger.error(error_msg)
        raise ValueError(error_msg)
    value = np.dot(p.x_bits.astype(np.int64), q.z_bits) + np.dot(p.z_bits.astype(np.int64), q.x_bits)
    return int(value) & 1


def symplectic_gram(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Commutation matrix a Λ bᵀ mod 2 for stacked bit rows."""
    n = a.shape[1] // 2
    a = a.astype(np.int64)
    b = b.astype(np.int64)
    return ((a[:, :n] @ b[:, n:].T + a[:, n:] @ b[:, :n].T) & 1).astype(np.uint8)


# ---------------------------------------------------------------------------
# GF(2) elimination
# ---------------------------------------------------------------------------

def gf2_row_reduce(matrix: np.ndarray) -> Tuple[np.ndarray, List[int]]:
    """Reduced row echelon form over GF(2), lowest pivot column first.

    Returns the nonzero reduced rows and their pivot columns.
    """
    a = np.array(matrix, dtype=np.uint8, copy=True) & 1
    if a.ndim != 2:
        raise ValueError("expected a 2-D bit matrix")
    rows, cols = a.shape
    pivots: List[int] = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        hits = np.flatnonzero(a[r:, c])
        if hits.size == 0:
            continue
        p = r + int(hits[0])
        if p != r:
            a[[r, p]] = a[[p, r]]
        mask = a[:, c].astype(bool)
        mask[r] = False
        a[mask] ^= a[r]
        pivots.append(c)
        r += 1
    return a[:r], pivots


def gf2_rank(matrix: np.ndarray) -> int:
    return len(gf2_row_reduce(matrix)[1])


def gf2_null_space(matrix: np.ndarray) -> np.ndarray:
    """Basis (as rows) of {v : matrix · v = 0}."""
    matrix = np.asarray(matrix, dtype=np.uint8)
    cols = matrix.shape[1]
    reduced, pivots = gf2_row_reduce(matrix)
    pivot_set = set(pivots)
    free = [c for c in range(cols) if c not in pivot_set]
    basis = np.zeros((len(free), cols), dtype=np.uint8)
    for i, f in enumerate(free):
        basis[i, f] = 1
        for row, p in enumerate(pivots):
            basis[i, p] = reduced[row, f]
    return basis


# ---------------------------------------------------------------------------
# BitMatrix
# ---------------------------------------------------------------------------

class BitMatrix:
    """Rows of Pauli bit vectors sharing one qubit count."""

    def __init__(self, rows, num_qubits: int):
        check_qubit_count(num_qubits)
        rows = np.asarray(rows, dtype=np.uint8)
        if rows.size == 0:
            rows = np.zeros((0, 2 * num_qubits), dtype=np.uint8)
        elif rows.ndim != 2 or rows.shape[1] != 2 * num_qubits:
            error_msg = f"rows of shape {rows.shape} do not match {num_qubits} qubits"
            logger.error(error_msg)
            raise ValueError(error_msg)
        self._rows = _frozen(rows)
        self.num_qubits = num_qubits

    @classmethod
    def from_paulis(cls, paulis: Iterable[PauliVector], num_qubits: int) -> "BitMatrix":
        paulis = list(paulis)
        for p in paulis:
            if p.n != num_qubits:
                error_msg = f"Pauli {p} has {p.n} qubits, expected {num_qubits}"
                logger.error(error_msg)
                raise ValueError(error_msg)
        if not paulis:
            return cls(np.zeros((0, 2 * num_qubits), dtype=np.uint8), num_qubits)
        return cls(np.stack([p.bits for p in paulis]), num_qubits)

    @classmethod
    def from_strings(cls, strings: Sequence[str], num_qubits: int) -> "BitMatrix":
        return cls.from_paulis([PauliVector.from_string(s) for s in strings], num_qubits)

    @property
    def rows(self) -> np.ndarray:
        return self._rows

    def __len__(self):
        return self._rows.shape[0]

    def __iter__(self):
        return (PauliVector(row) for row in self._rows)

    def __getitem__(self, index) -> PauliVector:
        return PauliVector(self._rows[index])

    def paulis(self) -> List[PauliVector]:
        return list(self)

    @cached_property
    def _echelon(self) -> Tuple[np.ndarray, List[int]]:
        return gf2_row_reduce(self._rows)

    def rank(self) -> int:
        return len(self._echelon[1])

    def row_reduced(self) -> "BitMatrix":
        return BitMatrix(self._echelon[0], self.num_qubits)

    def contains(self, vectors: np.ndarray) -> np.ndarray:
        """Row-wise span membership for a stack of bit vectors.

        In reduced echelon form every pivot column has a single one, so a
        vector is in the span iff it equals the combination picked out by
        its pivot entries.
        """
        vectors = np.atleast_2d(np.asarray(vectors, dtype=np.uint8))
        if vectors.shape[1] != 2 * self.num_qubits:
            error_msg = f"length mismatch: vectors of length {vectors.shape[1]} vs span of {2 * self.num_qubits}"
            logger.error(error_msg)
            raise ValueError(error_msg)
        reduced, pivots = self._echelon
        if not pivots:
            return ~vectors.any(axis=1)
        combo = (vectors[:, pivots].astype(np.int64) @ reduced.astype(np.int64)) & 1
        return np.all(combo == vectors, axis=1)

    def __eq__(self, other):
        if not isinstance(other, BitMatrix):
            return NotImplemented
        return self.num_qubits == other.num_qubits and np.array_equal(self._rows, other._rows)

    def __hash__(self):
        return hash((self.num_qubits, self._rows.tobytes()))

    def __repr__(self):
        return f"BitMatrix([{', '.join(str(p) for p in self)}], n={self.num_qubits})"


def in_span(v: PauliVector, m: BitMatrix) -> bool:
    if v.n != m.num_qubits:
        error_msg = f"length mismatch: {v.n} vs {m.num_qubits} qubits"
        logger.error(error_msg)
        raise ValueError(error_msg)
    return bool(m.contains(v.bits)[0])


def kernel_on_support(support: Iterable[int], constraints: BitMatrix) -> BitMatrix:
    """Basis of Paulis supported on ``support`` commuting with every constraint row."""
    n = constraints.num_qubits
    qubits = sorted(set(int(q) for q in support))
    if qubits and (qubits[0] < 0 or qubits[-1] >= n):
        error_msg = f"support {qubits} not within 0..{n - 1}"
        logger.error(error_msg)
        raise ValueError(error_msg)
    s = len(qubits)
    if s == 0:
        return BitMatrix(np.zeros((0, 2 * n), dtype=np.uint8), n)

    rows = constraints.rows
    # x_i pairs with the constraint's z bit, z_i with its x bit
    system = np.concatenate([rows[:, [n + q for q in qubits]], rows[:, qubits]], axis=1)
    local = gf2_null_space(system)

    basis = np.zeros((local.shape[0], 2 * n), dtype=np.uint8)
    basis[:, qubits] = local[:, :s]
    basis[:, [n + q for q in qubits]] = local[:, s:]
    return BitMatrix(basis, n)
