import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import element_strategy
from spectral_gamma import groups
from spectral_gamma.errors import DomainError, ResourceCapError, StructuralError

Z = groups.integer_lattice(1)
Z2 = groups.integer_lattice(2)
F2 = groups.free_group(2)
H = groups.heisenberg()
SPECS = [Z, Z2, F2, H, groups.cyclic(7),
         groups.direct_product(groups.integer_lattice(1), groups.cyclic(4))]


# -- Heisenberg oracle: upper-triangular 3x3 integer matrices ----------------

def heis_to_matrix(g):
    x, y, z = g
    return np.array([[1, x, z], [0, 1, y], [0, 0, 1]], dtype=object)


def test_multiply_lattice():
    assert groups.multiply((1, 0), (0, 1), Z2) == (1, 1)


def test_multiply_free_cancellation():
    assert groups.multiply((1,), (-1,), F2) == ()
    assert groups.multiply((1, 2), (-2, -1), F2) == ()


def test_heisenberg_commutator_matches_matrix_model():
    X, Y = (1, 0, 0), (0, 1, 0)
    XY = groups.multiply(X, Y, H)
    YX = groups.multiply(Y, X, H)
    assert np.array_equal(heis_to_matrix(XY), heis_to_matrix(X) @ heis_to_matrix(Y))
    assert np.array_equal(heis_to_matrix(YX), heis_to_matrix(Y) @ heis_to_matrix(X))
    comm = groups.multiply(groups.multiply(XY, groups.inverse(X, H), H),
                           groups.inverse(Y, H), H)
    assert comm == (0, 0, 1)  # [X, Y] = Z


@given(st.data())
def test_heisenberg_multiplication_vs_matrices(data):
    g = data.draw(element_strategy(H, 8))
    h = data.draw(element_strategy(H, 8))
    prod = groups.multiply(g, h, H)
    assert np.array_equal(heis_to_matrix(prod), heis_to_matrix(g) @ heis_to_matrix(h))


def test_word_length_examples():
    assert groups.word_length((3, -2), Z2) == 5
    assert groups.word_length((1, 2, -1), F2) == 3  # x y x^-1
    assert groups.word_length((0, 0, 1), H) == 4    # central z needs a commutator


def test_heisenberg_length_against_fresh_bfs():
    # independent BFS oracle over the matrix model
    gens = [(1, 0, 0), (-1, 0, 0), (0, 1, 0), (0, -1, 0)]
    dist = {(0, 0, 0): 0}
    frontier = [(0, 0, 0)]
    for r in range(1, 5):
        new = []
        for g in frontier:
            for s in gens:
                h = groups.multiply(g, s, H)
                if h not in dist:
                    dist[h] = r
                    new.append(h)
        frontier = new
    for g, d in dist.items():
        assert groups.word_length(g, H) == d


def test_ball_examples():
    assert groups.ball(1, Z2).volume == 5
    assert groups.ball(2, F2).volume == 17
    for spec in SPECS:
        assert groups.ball(0, spec).volume == 1


def test_free_ball_shells():
    # shell sizes 2k (2k-1)^(n-1): oracle for the closed-form volume
    for rank in (2, 3):
        spec = groups.free_group(rank)
        for r in range(0, 4):
            shells = 1 + sum(2 * rank * (2 * rank - 1) ** (n - 1) for n in range(1, r + 1))
            assert groups.ball(r, spec).volume == shells
            assert groups.free_ball_volume(rank, r) == shells


def test_lattice_ball_closed_form_vs_bfs():
    for d in (1, 2, 3):
        spec = groups.integer_lattice(d)
        for r in range(0, 5):
            assert groups.ball(r, spec).volume == groups.lattice_ball_volume(d, r)


def test_ball_volumes_strictly_increase():
    for spec in (Z, Z2, F2, H):
        vols = [groups.ball(r, spec).volume for r in range(4)]
        assert all(a < b for a, b in zip(vols, vols[1:]))


def test_ball_cap():
    with pytest.raises(ResourceCapError):
        groups.ball(10, F2, cap=100)


def test_circumscribing_radius():
    assert groups.circumscribing_radius([(1,), (-1,)], Z) == 1
    assert groups.circumscribing_radius([(), (1,), (-1,)], F2) == 1
    assert groups.circumscribing_radius([(2, 0), (0, -3)], Z2) == 3
    with pytest.raises(DomainError):
        groups.circumscribing_radius([], Z)


@pytest.mark.parametrize("spec", SPECS)
@given(data=st.data())
def test_inverse_and_identity_laws(spec, data):
    g = data.draw(element_strategy(spec))
    e = groups.identity(spec)
    assert groups.multiply(g, groups.inverse(g, spec), spec) == e
    assert groups.inverse(groups.inverse(g, spec), spec) == g
    assert groups.multiply(g, e, spec) == g
    assert groups.multiply(e, g, spec) == g


@pytest.mark.parametrize("spec", SPECS)
@given(data=st.data())
def test_associativity_and_triangle_inequality(spec, data):
    g = data.draw(element_strategy(spec))
    h = data.draw(element_strategy(spec))
    k = data.draw(element_strategy(spec))
    lhs = groups.multiply(groups.multiply(g, h, spec), k, spec)
    rhs = groups.multiply(g, groups.multiply(h, k, spec), spec)
    assert lhs == rhs
    gh = groups.multiply(g, h, spec)
    assert groups.word_length(gh, spec) <= (groups.word_length(g, spec)
                                            + groups.word_length(h, spec))


def test_structural_errors():
    with pytest.raises(StructuralError):
        groups.multiply((1,), (1, 2), Z2)
    with pytest.raises(StructuralError):
        groups.validate_element((1, -1), F2)  # not freely reduced
    with pytest.raises(StructuralError):
        groups.validate_element(7, groups.cyclic(7))


def test_spec_serialization_roundtrip():
    for spec in SPECS:
        assert groups.spec_from_json(groups.spec_to_json(spec)) == spec
    assert groups.spec_from_json({"kind": "free", "rank": 2}) == F2
    assert groups.spec_from_shorthand("free:2") == F2
    assert groups.spec_from_shorthand("heisenberg") == H


def test_word_parsing():
    assert groups.parse_element("x y^-1 x", F2) == (1, -2, 1)
    assert groups.parse_element("x^3 y^-2", Z2) == (3, -2)
    assert groups.parse_element([3, -2], Z2) == (3, -2)
    assert groups.parse_element("z", H) == (0, 0, 1)
    assert groups.parse_element("x^2", groups.cyclic(7)) == 2
    with pytest.raises(StructuralError):
        groups.parse_element("w", F2)


def test_word_rendering_roundtrip():
    for word in [(), (1,), (1, -2, 1), (2, 2, 2)]:
        text = groups.element_to_word(word, F2)
        assert groups.parse_element(text, F2) == word
    for g in [(0, 0, 1), (1, 2, 3), (-1, 0, 5)]:
        assert groups.parse_element(groups.element_to_word(g, H), H) == g


def test_growth_classification():
    assert groups.is_subexponential(Z2)
    assert groups.is_subexponential(H)
    assert groups.is_subexponential(groups.free_group(1))
    assert not groups.is_subexponential(F2)
    assert not groups.is_subexponential(groups.direct_product(Z, F2))
