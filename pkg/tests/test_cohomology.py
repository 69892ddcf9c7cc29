"""Tropical cohomology: cochain complexes, Cech oracle, relative pairs."""

import pytest

from trophodge import cohomology, fans, tropspace
from trophodge.cohomology import (
    betti_table,
    build_cochain_complex,
    cech_oracle,
    relative_cohomology,
)


def small_complexes():
    return [
        tropspace.tropical_line(),
        tropspace.tautological_complex(fans.builtin("p1")),
        tropspace.tautological_complex(fans.builtin("p2")),
        tropspace.tautological_complex(fans.builtin("p1xp1")),
        tropspace.torus_complex(2),
        tropspace.affine_complex(2),
    ]


def diag_table(n, values):
    table = [[0] * (n + 1) for _ in range(n + 1)]
    for k, v in enumerate(values):
        table[k][k] = v
    return table


def test_delta_squared_everywhere():
    for cx in small_complexes():
        n = cx.base_fan.ambient_rank
        for p in range(n + 1):
            assert build_cochain_complex(cx, p).verify_d_squared()


def test_p1_block_layout():
    cx = tropspace.tautological_complex(fans.builtin("p1"))
    cc = build_cochain_complex(cx, 1)
    assert cc.space_dim(0) == 1
    assert cc.space_dim(1) == 2
    assert cc.delta(0).rows == 2 and cc.delta(0).cols == 1


def test_tropical_line_block_dims():
    cc = build_cochain_complex(tropspace.tropical_line(), 1)
    assert cc.space_dim(0) == 2
    assert cc.space_dim(1) == 3


def test_p0_matches_constant_sheaf():
    for cx in small_complexes():
        cc = build_cochain_complex(cx, 0)
        for q in range(cx.base_fan.ambient_rank + 1):
            assert cc.space_dim(q) == sum(1 for c in cx.cells if c.dim == q)


def test_known_betti_tables():
    p1 = tropspace.tautological_complex(fans.builtin("p1"))
    assert betti_table(p1) == diag_table(1, [1, 1])
    p2 = tropspace.tautological_complex(fans.builtin("p2"))
    assert betti_table(p2) == diag_table(2, [1, 1, 1])
    p1xp1 = tropspace.tautological_complex(fans.builtin("p1xp1"))
    assert betti_table(p1xp1) == diag_table(2, [1, 2, 1])


def test_torus_betti_row():
    assert betti_table(tropspace.torus_complex(2)) == [
        [1, 0, 0],
        [2, 0, 0],
        [1, 0, 0],
    ]


def test_affine_space_betti():
    table = betti_table(tropspace.affine_complex(2))
    assert table[0][0] == 1
    assert sum(sum(row) for row in table) == 1


def test_representatives_are_cocycles():
    cx = tropspace.tautological_complex(fans.builtin("p1xp1"))
    for p in range(3):
        cc = build_cochain_complex(cx, p)
        for q in range(3):
            res = cohomology.cohomology(cx, p, q)
            assert res.dim == len(res.representatives)
            for rep in res.representatives:
                assert all(x == 0 for x in cc.delta(q).apply(list(rep)))


def test_vanishing_above_diagonal_and_h_p0():
    for name in ["blowup_p2", "hirzebruch(2)", "p3"]:
        cx = tropspace.tautological_complex(fans.builtin(name))
        table = betti_table(cx)
        n = len(table) - 1
        for p in range(n + 1):
            for q in range(p + 1, n + 1):
                assert table[p][q] == 0, (name, p, q)
        for p in range(1, n + 1):
            assert table[p][0] == 0, (name, p)


def test_cech_matches_cellular():
    for cx in small_complexes():
        n = cx.base_fan.ambient_rank
        for p in range(n + 1):
            for q in range(n + 1):
                assert cech_oracle(cx, p, q) == cohomology.cohomology(cx, p, q).dim


def test_cech_rejects_oversized():
    cx = tropspace.tautological_complex(fans.builtin("p3"))
    assert len(cx.cells) > 50
    with pytest.raises(ValueError):
        cech_oracle(cx, 0, 0)


def test_relative_full_and_empty():
    cx = tropspace.tautological_complex(fans.builtin("p1"))
    for p in range(2):
        for q in range(2):
            assert relative_cohomology(cx, cx, p, q).dim == 0
            assert (
                relative_cohomology(cx, [], p, q).dim
                == cohomology.cohomology(cx, p, q).dim
            )


def test_relative_p1_mod_boundary():
    cx = tropspace.tautological_complex(fans.builtin("p1"))
    boundary = cx.subcomplex(lambda c: c.sedentarity.dim > 0)
    assert relative_cohomology(cx, boundary, 1, 1).dim == 1
    assert relative_cohomology(cx, boundary, 0, 0).dim == 0


def test_relative_rejects_non_closed():
    cx = tropspace.tautological_complex(fans.builtin("p1"))
    open_part = [c for c in cx.cells if c.dim == 1]
    with pytest.raises(ValueError):
        relative_cohomology(cx, open_part, 0, 0)


def les_alternating_sum(cx, sub, p, n):
    total = 0
    for q in range(n + 2):
        total += (-1) ** q * (
            relative_cohomology(cx, sub, p, q).dim
            - cohomology.cohomology(cx, p, q).dim
            + cohomology.cohomology(sub, p, q).dim
        )
    return total


def test_les_p1_boundary_points():
    cx = tropspace.tautological_complex(fans.builtin("p1"))
    sub = cx.subcomplex(lambda c: c.sedentarity.dim > 0)
    for p in range(2):
        assert les_alternating_sum(cx, sub, p, 1) == 0


def test_les_p2_boundary_divisor():
    cx = tropspace.tautological_complex(fans.builtin("p2"))
    rho = fans.builtin("p2").cones_of_dim(1)[0]
    sub = cx.subcomplex(lambda c: rho in fans.faces(c.sedentarity))
    assert cx.is_closed_subcomplex(sub)
    for p in range(3):
        assert les_alternating_sum(cx, sub, p, 2) == 0


def test_fan_structure_independence_complete():
    for name in ["p2", "hirzebruch(1)"]:
        fan = fans.builtin(name)
        n = fan.ambient_rank
        torus = fans.torus(n)
        top = fan.cones_of_dim(n)[0]
        ray = tuple(sum(col) for col in zip(*top.rays))
        refined = fans.star_subdivision(fan, ray)
        before = betti_table(tropspace.tautological_complex(torus, fan))
        after = betti_table(tropspace.tautological_complex(torus, refined))
        assert before == after, name
        assert before == betti_table(tropspace.torus_complex(n)), name


def test_fan_structure_independence_open():
    torus2 = fans.torus(2)
    sub = fans.star_subdivision(fans.orthant_fan(2), (1, 1))
    assert betti_table(tropspace.refined_complex(torus2, sub)) == betti_table(
        tropspace.torus_complex(2)
    )
    a2 = fans.affine_space(2)
    sub = fans.star_subdivision(fans.completion(a2), (-1, -1))
    assert betti_table(tropspace.refined_complex(a2, sub)) == betti_table(
        tropspace.affine_complex(2)
    )


def test_betti_serializers():
    table = [[1, 0], [0, 1]]
    tsv = cohomology.betti_to_tsv(table)
    assert tsv.splitlines()[1] == "0\t1\t0"
    assert '"dim": 1' in cohomology.betti_to_json(table)
