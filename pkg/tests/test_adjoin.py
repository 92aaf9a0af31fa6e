import itertools

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from orderunit.adjoin import (
    CANOPY_NOTE,
    adjoin_base,
    adjoin_order_unit,
    base_additivity_check,
    canopy_periphery_membership,
    iterate_adjoin_l1,
    lemma33_equivalence,
    linf_peripheral_elements,
    order_norm_equals_l1_check,
    periphery_equivalence_check,
    periphery_samples,
    semi_peripheral_check,
    semi_peripheral_generate,
    single_shot_l1,
    spin_factor,
)
from orderunit.norms import EPS, INF, Lp, norm
from orderunit.order import (
    archimedean_probe,
    cone_axioms_check,
    cone_margins,
    cone_membership,
    l1_ice,
    linf_natural,
    lorentz,
    order_leq,
    order_unit_norm,
    reals,
)

V_FAMILIES = {"linf2": lambda: linf_natural(2), "l1ice3": lambda: l1_ice(3, 0)}
X_FAMILIES = {"l1_2": Lp(2, 1.0), "l2_3": Lp(3, 2.0), "linf2": Lp(2, INF)}
COMBOS = list(itertools.product(V_FAMILIES, X_FAMILIES))


def composite(vk, xk):
    return adjoin_order_unit(V_FAMILIES[vk](), X_FAMILIES[xk])


# --- constructions ---------------------------------------------------------


def test_adjoin_reals_gives_l1_square_cone():
    A = adjoin_order_unit(reals(), Lp(1, 2.0))
    assert norm(A.composite.space, A.composite.unit) == 1.0
    grid = np.linspace(-1, 1, 101)
    P = np.array(list(itertools.product(grid, grid)))
    inside = cone_margins(A.composite, P) >= -EPS
    assert np.array_equal(inside, P[:, 0] - np.abs(P[:, 1]) >= -EPS)


def test_spin_factor_is_lorentz(rng):
    A = spin_factor(3)
    L = lorentz(3)
    Z = rng.standard_normal((10_000, 4))
    Z[:, 0] = np.abs(Z[:, 0]) * 2
    a = cone_margins(A.composite, Z) >= -EPS
    b = cone_margins(L, Z) >= -EPS
    c = Z[:, 0] >= np.linalg.norm(Z[:, 1:], axis=1)
    assert np.array_equal(a, b) and np.array_equal(a, c)
    assert 0 < a.sum() < len(a)


def test_zero_dimensional_x_is_identity():
    V = linf_natural(2)
    A = adjoin_order_unit(V, Lp(0, 2.0))
    assert A.composite is V


def test_membership_routes_through_v(rng):
    for vk, xk in COMBOS:
        A = composite(vk, xk)
        for _ in range(200):
            z = rng.standard_normal(A.dim)
            u, x = A.split(z)
            direct = cone_membership(A.composite, z).inside
            via = order_leq(A.V, norm(A.X, x) * A.V.unit, u).inside
            assert direct == via


@pytest.mark.parametrize("vk,xk", COMBOS)
def test_composite_cone_axioms(vk, xk):
    A = composite(vk, xk)
    assert cone_axioms_check(A.composite, 0, 1000).passed


@pytest.mark.parametrize("vk,xk", COMBOS)
def test_composite_archimedean(vk, xk, rng):
    A = composite(vk, xk)
    lams = np.geomspace(1.0, 1e-8, 12)
    for _ in range(1000):
        x = rng.standard_normal(A.dim)
        assert archimedean_probe(A.composite, x, lams).passed


@pytest.mark.parametrize("vk,xk", COMBOS)
def test_order_norm_is_sum_norm(vk, xk):
    rep = order_norm_equals_l1_check(composite(vk, xk), 1, 1000)
    assert rep.passed, rep.failures[:3]


def test_order_norm_examples():
    A = adjoin_order_unit(reals(), Lp(1, 1.0))
    assert order_unit_norm(A.composite, [0.3, -0.4]) == pytest.approx(0.7, abs=1e-9)
    assert order_unit_norm(A.composite, A.composite.unit) == pytest.approx(1.0, abs=1e-9)
    assert order_unit_norm(A.composite, [0.0, 0.0]) == 0.0


# --- iterated adjoining ----------------------------------------------------


def test_iterate_examples():
    A1 = iterate_adjoin_l1(1)
    assert cone_membership(A1.composite, [1.0, -1.0]).inside
    assert not cone_membership(A1.composite, [1.0, -1.1]).inside
    A2 = iterate_adjoin_l1(2)
    v = cone_membership(A2.composite, [1.0, 0.4, -0.5])
    assert v.inside and v.margin == pytest.approx(0.1, abs=1e-12)
    assert not cone_membership(A2.composite, [1.0, 0.6, -0.5]).inside
    with pytest.raises(ValueError):
        iterate_adjoin_l1(0)


@pytest.mark.parametrize("n", range(1, 7))
def test_iterated_matches_single_shot_and_ice(n, rng):
    it, one, ice = iterate_adjoin_l1(n), single_shot_l1(n), l1_ice(n + 1, 0)
    Z = rng.standard_normal((10_000, n + 1))
    Z[:, 0] = np.abs(Z[:, 0]) * np.sqrt(n) * 1.2
    a = cone_margins(it.composite, Z) >= -EPS
    b = cone_margins(one.composite, Z) >= -EPS
    c = cone_margins(ice, Z) >= -EPS
    assert np.array_equal(a, b) and np.array_equal(a, c)
    assert 0 < a.sum() < len(a)


# --- base-normed construction ---------------------------------------------


def test_adjoin_base_half_line():
    B = adjoin_base(Lp(1, 1.0), Lp(1, 1.0))
    assert B.in_cone([1.0, -1.0]) and B.in_cone([2.0, 0.5])
    assert not B.in_cone([1.0, 1.5]) and not B.in_cone([-0.1, 0.0])
    assert B.in_base([1.0, 0.7]) and not B.in_base([1.0, 1.2]) and not B.in_base([2.0, 0.0])


def test_adjoin_base_rejects_other_models():
    with pytest.raises(TypeError):
        adjoin_base(Lp(2, 2.0), Lp(1, 1.0))
    with pytest.raises(TypeError):
        adjoin_base(Lp(2, INF), Lp(1, 1.0))


def test_adjoin_base_cone_shape():
    B = adjoin_base(Lp(3, 1.0), Lp(2, 2.0))
    assert B.in_cone([0.2, 0.3, 0.5, 0.6, 0.8])
    assert not B.in_cone([0.2, 0.3, 0.5, 0.61, 0.8])
    assert not B.in_cone([1.2, -0.1, 0.0, 0.0, 0.0])


@pytest.mark.parametrize("n,X", [(1, Lp(1, 1.0)), (3, Lp(2, 2.0)), (2, Lp(3, INF))], ids=str)
def test_base_additivity(n, X):
    rep = base_additivity_check(adjoin_base(Lp(n, 1.0), X), 0, 1000)
    assert rep.passed and rep.data["max_error"] <= EPS


def test_base_additivity_fails_off_cone():
    B = adjoin_base(Lp(1, 1.0), Lp(1, 1.0))
    s, t = np.array([1.0, 0.0]), np.array([-1.0, 0.0])
    assert B.norm(s + t) < B.norm(s) + B.norm(t)


# --- reformulation of k e <= u --------------------------------------------


def test_unit_multiple_reformulation_examples():
    V = linf_natural(2)
    r = lemma33_equivalence(V, [1.0, 0.3], 0.3)
    assert r.passed and r.data["a"] and r.data["b"]
    assert r.data["gap"] == pytest.approx(0.3, abs=1e-15)
    r = lemma33_equivalence(V, [0.5, 0.8], 0.0)
    assert r.passed and r.data["a"] and r.data["b"]
    r = lemma33_equivalence(V, [0.5, 0.8], 0.8 + 1)
    assert r.passed and not r.data["a"] and not r.data["b"]


@given(
    st.lists(st.floats(-2, 2), min_size=3, max_size=3),
    st.floats(0, 3),
    st.sampled_from(["linf3", "l1ice3", "sign3"]),
)
def test_unit_multiple_reformulation_holds(u, k, fam):
    V = {"linf3": linf_natural(3), "l1ice3": l1_ice(3, 1), "sign3": linf_natural(3, [1, -1, 1])}[fam]
    assert lemma33_equivalence(V, u, k).passed


# --- semi-peripheral elements ---------------------------------------------


def test_semi_peripheral_examples():
    for V in (linf_natural(2), linf_natural(3), l1_ice(3, 0), reals()):
        assert semi_peripheral_check(V, V.unit / 2)
        assert not semi_peripheral_check(V, V.unit)
    V = linf_natural(2)
    assert semi_peripheral_check(V, [0.7, 0.3])
    assert not semi_peripheral_check(V, [0.7, 0.2])


def test_semi_peripheral_generate_examples():
    V = linf_natural(2)
    u = semi_peripheral_generate(V, [0.0, 1.0], 0.7)
    assert np.allclose(u, [0.7, 0.3]) and semi_peripheral_check(V, u)
    assert np.allclose(semi_peripheral_generate(V, [1.0, 0.0], 0.5), V.unit / 2)
    assert np.array_equal(semi_peripheral_generate(V, [1.0, 0.0], 0.0), [1.0, 0.0])
    with pytest.raises(ValueError):
        semi_peripheral_generate(V, [0.5, 0.5], 0.3)
    with pytest.raises(ValueError):
        semi_peripheral_generate(V, [1.0, 0.0], 1.5)


@given(st.integers(2, 5), st.data())
def test_generated_elements_are_semi_peripheral(n, data):
    V = linf_natural(n)
    W = linf_peripheral_elements(n)
    w = W[data.draw(st.integers(0, len(W) - 1))]
    alpha = data.draw(st.floats(0, 1))
    assert semi_peripheral_check(V, semi_peripheral_generate(V, w, alpha))


def test_parametrization_covers_linf2(rng):
    # in l_inf^2 the semi-peripheral elements are (a, 1-a) and (1-a, a) with a >= 1/2
    V = linf_natural(2)
    W = linf_peripheral_elements(2)
    for _ in range(500):
        u = rng.uniform(0, 1, 2)
        if not semi_peripheral_check(V, u):
            u = np.array([u[0], 1 - u[0]])
        assert semi_peripheral_check(V, u)
        hit = False
        for w in W:
            # u = alpha (e - w) + (1 - alpha) w is affine in alpha; solve on one coordinate
            d = V.unit - 2 * w
            j = int(np.argmax(np.abs(d)))
            alpha = (u[j] - w[j]) / d[j]
            if 0 <= alpha <= 1 and np.allclose(semi_peripheral_generate(V, w, alpha), u):
                hit = True
        assert hit


def test_parametrization_misses_points_of_linf3():
    V = linf_natural(3)
    u = np.array([0.7, 0.5, 0.3])
    assert semi_peripheral_check(V, u)
    for w in linf_peripheral_elements(3):
        # every generated point has coordinates in {alpha, 1 - alpha}
        for alpha in np.linspace(0, 1, 1001):
            assert not np.allclose(semi_peripheral_generate(V, w, alpha), u, atol=1e-6)


# --- canopy and periphery --------------------------------------------------


def test_periphery_examples():
    A = adjoin_order_unit(linf_natural(2), Lp(1, 1.0))
    for s in (0.3, -0.3):
        v = canopy_periphery_membership(A, [0.7, 0.3], [s])
        assert v.in_canopy and v.in_periphery and v.in_periphery_characterized
        assert v.semi_peripheral_u
        assert v.norms == pytest.approx((0.7, 0.3, 0.7))
    v = canopy_periphery_membership(A, [1.0, 1.0], [0.0])
    assert v.in_canopy and not v.in_periphery and not v.in_periphery_characterized
    v = canopy_periphery_membership(A, [0.35, 0.15], [0.15])
    assert not v.in_canopy and not v.in_periphery and not v.in_periphery_characterized


def test_periphery_equivalence():
    A = adjoin_order_unit(linf_natural(2), Lp(1, 1.0))
    biased = periphery_samples(A, 0, 1000)
    uniform = np.random.default_rng(1).uniform(-0.2, 1.2, size=(1000, 3))
    rep = periphery_equivalence_check(A, np.vstack([biased, uniform]))
    assert rep.passed, rep.failures[:3]
    assert CANOPY_NOTE in rep.notes
    assert rep.data["in_periphery"] >= 400


@pytest.mark.parametrize("X", [Lp(2, 2.0), Lp(2, 1.0)], ids=str)
def test_periphery_equivalence_linf3(X):
    A = adjoin_order_unit(linf_natural(3), X)
    rep = periphery_equivalence_check(A, periphery_samples(A, 2, 500))
    assert rep.passed


def test_periphery_samples_need_natural_linf():
    with pytest.raises(TypeError):
        periphery_samples(adjoin_order_unit(l1_ice(2, 0), Lp(1, 1.0)), 0, 10)
    with pytest.raises(TypeError):
        periphery_samples(adjoin_order_unit(linf_natural(2, [1, -1]), Lp(1, 1.0)), 0, 10)
