import math

import numpy as np
import pytest

from code_model import SubsystemCode, distance, logical_representatives, parameters
from constructions import (
    ConcatPlan,
    EmbeddedCode,
    bacon_shor,
    build_concat_embedding,
    concatenate,
    concatenated_stabilizer_generators,
    disjoint_copies,
    lattice_embedding,
    saturation_recipe,
    saturation_report,
    small_inner_codes,
    surface_code,
)
from geometry import Embedding, validate_embedding
from pauli_algebra import PauliVector, symplectic_product


def test_bacon_shor_is_unit_local(bs3):
    assert np.allclose(bs3.interactions().lengths, 1.0)
    assert bs3.params == {"m": 3}


@pytest.mark.parametrize("m", [2, 3, 4])
def test_surface_code(m):
    ec = surface_code(m)
    p = parameters(ec.code)
    assert (p.n, p.k, p.g) == (m * m, 1, 0)
    assert len(ec.code.gauge_generators) == m * m - 1
    assert ec.code.is_abelian
    assert distance(ec.code).value == m
    assert ec.interactions().max_length <= math.sqrt(2) + 1e-12


def test_invalid_sizes():
    with pytest.raises(ValueError):
        bacon_shor(1)
    with pytest.raises(ValueError):
        surface_code(None)
    with pytest.raises(ValueError):
        small_inner_codes("golay")
    with pytest.raises(ValueError):
        small_inner_codes("repetition(1)")


def test_lattice_embedding():
    e = lattice_embedding(5, 2)
    assert e.coordinates.tolist() == [[0, 0], [0, 1], [0, 2], [1, 0], [1, 1]]
    assert lattice_embedding(8, 3).max_spread() == 1.0
    assert validate_embedding(lattice_embedding(10, 3)) == []


def test_embedded_code_checks(bs2):
    with pytest.raises(ValueError):
        EmbeddedCode(bs2.code, Embedding(2, [[0, 0], [0, 1], [1, 0]]))
    with pytest.raises(ValueError):
        EmbeddedCode(bs2.code, Embedding(2, [[0, 0], [0, 0.5], [1, 0], [1, 1]]))
    restored = EmbeddedCode.from_dict(bs2.to_dict())
    assert restored.code == bs2.code
    assert restored.embedding == bs2.embedding
    assert restored.family == "bacon_shor"


def test_concatenate_five_qubit_into_bacon_shor(five_qubit, bs2):
    code = concatenate(five_qubit.code, bs2.code)
    p = parameters(code)
    assert (p.n, p.k, p.g) == (20, 1, 1)

    type_a = code.gauge_generators[: 4 * len(five_qubit.code.gauge_generators)]
    type_b = code.gauge_generators[len(type_a):]
    assert len(type_b) == len(bs2.code.gauge_generators)
    for a in type_a:
        for b in type_b:
            assert symplectic_product(a, b) == 0

    result = distance(code, weight_cap=5)
    assert result.exceeds_cap
    assert result.lower_bound == 6


def test_concatenated_stabilizers_span_the_centre(five_qubit, bs2):
    code = concatenate(five_qubit.code, bs2.code)
    generators = concatenated_stabilizer_generators(five_qubit.code, bs2.code)
    assert generators.rank() == code.stabilizer_basis.rank() == 18
    assert code.stabilizer_basis.contains(generators.rows).all()


def test_concatenate_repetition_codes():
    rep = small_inner_codes("repetition(3)").code
    p = parameters(concatenate(rep, rep))
    assert (p.n, p.k, p.g) == (9, 1, 0)


def test_y_substitutes_both_logicals(five_qubit):
    outer = SubsystemCode.from_strings(["Y"])
    code = concatenate(five_qubit.code, outer)
    (pair,) = logical_representatives(five_qubit.code)
    assert code.gauge_generators[-1] == pair.x_bar * pair.z_bar


def test_concatenate_needs_logical_qubits(five_qubit):
    with pytest.raises(ValueError):
        concatenate(SubsystemCode.from_strings(["XX", "ZZ"]), five_qubit.code)


def test_concat_embedding_stays_below_target(five_qubit, bs2):
    sizing = ConcatPlan(five_qubit, bs2, 1.0)
    assert sizing.ell_prime == pytest.approx(2 * (math.sqrt(2) + 1))
    plan = ConcatPlan(five_qubit, bs2, 2 * sizing.ell_prime)
    assert plan.dilation == pytest.approx(2.0)
    ec = build_concat_embedding(plan)
    assert ec.n == 20
    assert validate_embedding(ec.embedding) == []
    assert ec.interactions().max_length < plan.ell_target
    assert ec.params["reach_bound"] < plan.ell_target


def test_concat_embedding_rejects_short_target(five_qubit, bs2):
    sizing = ConcatPlan(five_qubit, bs2, 1.0)
    with pytest.raises(ValueError):
        build_concat_embedding(ConcatPlan(five_qubit, bs2, sizing.ell_prime))


def test_single_qubit_outer_keeps_inner_layout(five_qubit):
    outer = EmbeddedCode(SubsystemCode(1, []), Embedding(2, [[0, 0]]))
    ec = build_concat_embedding(ConcatPlan(five_qubit, outer, 10.0))
    inner = five_qubit.embedding.coordinates
    placed = ec.embedding.coordinates
    assert np.allclose(placed - placed[0], inner - inner[0])
    assert parameters(ec.code).k == 1


def test_disjoint_copies(bs2):
    ec = disjoint_copies(bs2, 3)
    p = parameters(ec.code)
    assert (p.n, p.k, p.g) == (12, 3, 3)
    assert distance(ec.code).value == 2
    assert ec.embedding.coordinates[:, 0].max() == 5.0
    with pytest.raises(ValueError):
        disjoint_copies(bs2, 0)


def test_saturation_recipe():
    recipe = saturation_recipe(1e6, 1e4, 1e3, 2, 1.0)
    assert recipe.ell == pytest.approx(math.sqrt(10))
    assert recipe.n0 == pytest.approx(1e5)
    assert recipe.copies == 10
    assert recipe.n2 == pytest.approx(recipe.n0 / recipe.n1)
    assert not recipe.feasible
    assert saturation_recipe(1e6, 10, 1e3, 2, 1.0).k_effective == 1e3
    projector = saturation_recipe(1e6, 1, 1e5, 2, 1.0, "projector")
    assert projector.k_effective == pytest.approx(1e4)
    with pytest.raises(ValueError):
        saturation_recipe(10, 0, 3, 2, 1.0)


def test_saturation_report(bs3, surface3):
    report = saturation_report(bs3)
    assert report["d"] == 3 and report["d_exact"]
    assert report["distance_branch"] == pytest.approx(1.0)
    assert report["dimension_branch"] == pytest.approx(math.sqrt(1 / 3))
    assert report["ratio"] == pytest.approx(1.0)
    surface = saturation_report(surface3)
    assert 0 < surface["ratio"] <= 2
