from itertools import combinations

import pytest

from code_model import (
    SubsystemCode,
    distance,
    interaction_pairs,
    logical_representatives,
    parameters,
    supports_logical,
)
from pauli_algebra import PauliVector, in_span, symplectic_product


@pytest.mark.parametrize("m", [2, 3, 4])
def test_bacon_shor_parameters(m):
    from constructions import bacon_shor

    code = bacon_shor(m).code
    p = parameters(code)
    assert (p.n, p.k, p.g, p.s) == (m * m, 1, (m - 1) ** 2, 2 * (m - 1))
    assert distance(code).value == m


@pytest.mark.parametrize(
    "name, expected",
    [("five_one_three", (5, 1, 0, 4, 3)), ("steane", (7, 1, 0, 6, 3)), ("repetition(3)", (3, 1, 0, 2, 1))],
)
def test_small_code_parameters(name, expected):
    from constructions import small_inner_codes

    code = small_inner_codes(name).code
    p = parameters(code)
    assert (p.n, p.k, p.g, p.s, distance(code).value) == expected


def test_commuting_pair_is_its_own_centre():
    code = SubsystemCode.from_strings(["XX", "ZZ"])
    assert code.is_abelian
    assert code.stabilizer_basis.rank() == 2
    assert in_span(PauliVector.from_string("YY"), code.stabilizer_basis)
    assert parameters(code).k == 0
    with pytest.raises(ValueError):
        distance(code)


def test_nonabelian_gauge(bs2):
    assert not bs2.code.is_abelian
    assert bs2.code.stabilizer_basis.rank() == 2
    stabilizers = [str(p) for p in bs2.code.stabilizer_basis]
    assert sorted(stabilizers) == ["XXXX", "ZZZZ"]


def test_weight_cap(bs3):
    result = distance(bs3.code, weight_cap=2)
    assert result.exceeds_cap
    assert result.lower_bound == 3
    assert distance(bs3.code, weight_cap=3).value == 3


def test_logical_representatives(bs3):
    code = bs3.code
    (pair,) = logical_representatives(code)
    assert symplectic_product(pair.x_bar, pair.z_bar) == 1
    for g in code.gauge_generators:
        assert symplectic_product(pair.x_bar, g) == 0
        assert symplectic_product(pair.z_bar, g) == 0
    assert not in_span(pair.x_bar, code.gauge_span)
    assert not in_span(pair.z_bar, code.gauge_span)


def test_correctable_regions_are_cleanable(bs3):
    code = bs3.code
    for size in range(code.n + 1):
        for region in combinations(range(code.n), size):
            if not supports_logical(code, region):
                assert not supports_logical(code, region, bare=True)


def test_interaction_pairs(bs2):
    assert interaction_pairs(bs2.code.gauge_generators) == {(0, 2): 1, (1, 3): 1, (0, 1): 1, (2, 3): 1}
    code = SubsystemCode.from_strings(["ZZI", "ZZZ"])
    assert code.interaction_multiplicity == {(0, 1): 2, (0, 2): 1, (1, 2): 1}


def test_generator_length_checked():
    with pytest.raises(ValueError):
        SubsystemCode(3, [PauliVector.from_string("XX")])


def test_dict_round_trip(bs3):
    payload = bs3.code.to_dict()
    assert SubsystemCode.from_dict(payload) == bs3.code
    with pytest.raises(ValueError):
        SubsystemCode.from_dict({"gauge_generators": ["XX"]})


def test_parameter_identities_on_random_codes():
    import numpy as np

    from pauli_algebra import symplectic_gram

    rng = np.random.default_rng(23)
    for _ in range(60):
        n = int(rng.integers(2, 7))
        rows = rng.integers(0, 2, size=(int(rng.integers(0, 2 * n + 1)), 2 * n))
        code = SubsystemCode(n, [PauliVector(row) for row in rows])
        p = parameters(code)
        assert p.n == p.k + p.g + p.s
        assert code.gauge_span.rank() == 2 * p.g + p.s
        assert p.k >= 0
        stabilizers = code.stabilizer_basis.rows
        assert not symplectic_gram(stabilizers, code.generator_matrix.rows).any()
        assert code.gauge_span.contains(stabilizers).all()
