import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

import oracles
from fqzeros.bounds import BoundParams
from fqzeros.constructions import fermat_family, tb_maximal_family
from fqzeros.errors import DegreeTooLarge, MixedParameters, PointOnL, RankDeficient
from fqzeros.gf import field_make
from fqzeros.polyspace import HomPoly, Poly, PolyFamily, hom_from_vector, linear_form, monomials_desc_lex, variable
from fqzeros.projgeom import (
    count_affine_zeros,
    count_proj_zeros,
    dehomogenize,
    homogenize,
    hyperplane_codim_census,
    hyperplane_masks,
    pk,
    proj_points,
    restrict_hyperplane,
    veronese_section_count,
)


def test_pk():
    assert pk(-1, 7) == 0
    assert pk(2, 2) == 7
    assert pk(3, 3) == 40


@pytest.mark.parametrize("m,q", [(1, 2), (2, 3), (2, 4), (3, 2), (2, 5), (1, 9), (3, 3)])
def test_points_match_oracle(m, q):
    pts = proj_points(m, field_make(q))
    assert [tuple(p) for p in pts.tolist()] == oracles.proj_points(m, q)
    assert len(pts) == pk(m, q)


def test_points_examples():
    assert proj_points(1, field_make(2)).tolist() == [[1, 0], [1, 1], [0, 1]]
    assert len(proj_points(2, field_make(4))) == 21
    assert len(proj_points(2, field_make(3))) == 13


def test_count_examples():
    for q in (2, 3, 4, 5):
        F = field_make(q)
        assert count_proj_zeros([variable(F, 2, 0)]).projective == q + 1
    assert count_proj_zeros(fermat_family(2, 2, 3)).projective == 7
    zc = count_proj_zeros(tb_maximal_family(BoundParams(5, 3, 2, 2)))
    assert zc.projective == 12
    assert zc.projective == zc.hyperplane + zc.affine


def _oracle_count(fam):
    q, m = fam.field.q, fam.m
    pts = oracles.proj_points(m, q)
    return sum(all(oracles.evaluate(q, f.terms, P) == 0 for f in fam) for P in pts)


@settings(max_examples=60, deadline=None)
@given(st.sampled_from([2, 3, 4, 5, 8, 9]), st.integers(1, 2), st.integers(1, 3), st.integers(1, 3), st.data())
def test_count_matches_pointwise_oracle(q, m, d, r, data):
    F = field_make(q)
    mons = monomials_desc_lex(m, d)
    fam = PolyFamily([hom_from_vector(F, m, d, [data.draw(st.integers(0, q - 1)) for _ in mons], mons)
                      for _ in range(r)])
    zc = count_proj_zeros(fam)
    assert zc.projective == _oracle_count(fam)
    # hyperplane part is the count of the restriction to x_0 = 0 in P^{m-1}
    restricted = PolyFamily([restrict_hyperplane(f) for f in fam])
    assert zc.hyperplane == count_proj_zeros(restricted).projective
    if d < q:
        assert zc.affine == count_affine_zeros([dehomogenize(f) for f in fam], m)


def test_sparse_path_agrees_with_dense(monkeypatch):
    import fqzeros.projgeom as pg

    fam = tb_maximal_family(BoundParams(4, 3, 3, 2))
    dense = count_proj_zeros(fam)
    monkeypatch.setattr(pg, "DENSE_TABLE_LIMIT", 0)
    assert count_proj_zeros(fam) == dense


def test_affine_examples():
    F3, F5 = field_make(3), field_make(5)
    assert count_affine_zeros([Poly(F3, 2, {(1, 0): 1})]) == 3
    for q in (3, 4, 5):
        F = field_make(q)
        assert count_affine_zeros([Poly(F, 2, {(1, 1): 1})]) == 2 * q - 1
    with pytest.raises(DegreeTooLarge):
        count_affine_zeros([Poly(field_make(2), 2, {(1, 1): 1})])
    f = Poly(F5, 2, {(2, 0): 1, (1, 0): 4})
    assert count_affine_zeros([f]) == 10
    with pytest.raises(MixedParameters):
        count_affine_zeros([Poly(F5, 2, {(1, 0): 1}), Poly(F5, 3, {(1, 0, 0): 1})])


def test_homogenize_round_trip():
    F = field_make(5)
    x0, x1 = variable(F, 1, 0), variable(F, 1, 1)
    assert dehomogenize(x0 ** 2 + x0 * x1) == Poly(F, 1, {(0,): 1, (1,): 1})
    assert dehomogenize(x1 ** 3) == Poly(F, 1, {(3,): 1})
    G = tb_maximal_family(BoundParams(5, 3, 2, 1)).meta["gstar"]
    g = dehomogenize(G)
    # (x_2 - 0)(x_2 - 1) in the variables x_1, x_2
    assert g == Poly(F, 2, {(0, 2): 1, (0, 1): 4})
    assert homogenize(g, 2) == G


def test_veronese_count_agrees():
    for fam in (tb_maximal_family(BoundParams(5, 3, 2, 2)), fermat_family(3, 2, 2),
                tb_maximal_family(BoundParams(4, 2, 2, 3))):
        assert veronese_section_count(fam) == count_proj_zeros(fam).projective
    F = field_make(3)
    x0 = variable(F, 1, 0)
    with pytest.raises(RankDeficient):
        veronese_section_count(PolyFamily([x0, x0 * 2]))


def test_census_examples():
    F5 = field_make(5)
    assert hyperplane_codim_census([variable(F5, 2, 0), variable(F5, 2, 1)], (1, 0, 0)) == (1, 5)
    F3 = field_make(3)
    low, _ = hyperplane_codim_census([linear_form(F3, [1, 1, 0, 0])], (1, 0, 0, 0))
    assert low == 0
    F2 = field_make(2)
    forms = [variable(F2, 3, i) for i in range(3)]
    assert hyperplane_codim_census(forms, (1, 0, 0, 0)) == (3, 4)
    with pytest.raises(PointOnL):
        hyperplane_codim_census(forms, (0, 0, 0, 1))
    with pytest.raises(RankDeficient):
        hyperplane_codim_census([forms[0], forms[0]], (1, 0, 0, 0))


def test_hyperplane_masks_row_counts():
    F = field_make(3)
    masks = hyperplane_masks(2, F)
    assert masks.shape == (13, 13)
    assert (masks.sum(axis=1) == pk(1, 3)).all()
    # each point lies on p_{m-1} hyperplanes
    assert (masks.sum(axis=0) == pk(1, 3)).all()
