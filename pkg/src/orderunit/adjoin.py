"""Adjoining a normed space to an order unit space, and the dual
base-normed construction.

``adjoin_order_unit(V, X)`` builds ``V (+)_1 X`` with cone
``{(u, x) : ||x|| e <= u}`` and unit ``(e, 0)``.  ``adjoin_base`` builds
``V (+)_inf X`` with cone ``{(u, x) : u >= 0, ||u|| >= ||x||}`` for the
l_1 / simplex model of ``V``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .norms import EPS, INF, AdjoinL1, AdjoinLinf, Lp, SpaceDesc, norm, norms, vec
from .order import (
    Adjoined,
    NaturalLinfSign,
    OrderUnitSpace,
    cone_margins,
    cone_membership,
    order_leq,
    order_unit_norm,
    reals,
)
from .report import Report

CANOPY_NOTE = (
    "canopy and periphery are operational definitions: canopy = positive norm-one "
    "elements, periphery = z with z and e - z positive of norm one"
)


@dataclass(frozen=True, eq=False)
class AdjoinedOUS:
    V: OrderUnitSpace
    X: SpaceDesc
    composite: OrderUnitSpace

    @property
    def dim(self) -> int:
        return self.composite.dim

    def split(self, z) -> tuple[np.ndarray, np.ndarray]:
        z = vec(z, self.dim)
        return z[: self.V.dim], z[self.V.dim :]

    def join(self, u, x) -> np.ndarray:
        return np.concatenate([vec(u, self.V.dim), vec(x, self.X.dim)])


def adjoin_order_unit(V: OrderUnitSpace, X: SpaceDesc, provenance: str = "") -> AdjoinedOUS:
    """``V (+)_1 X``; a zero-dimensional ``X`` leaves ``V`` unchanged."""
    if X.dim == 0:
        return AdjoinedOUS(V, X, V)
    space = AdjoinL1(V, X)
    unit = np.concatenate([V.unit, np.zeros(X.dim)])
    label = provenance or f"({V.provenance}) (+)_1 {X}"
    return AdjoinedOUS(V, X, OrderUnitSpace(space, unit, Adjoined(V, X), label))


def spin_factor(n: int) -> AdjoinedOUS:
    """``(R, 1) (+)_1 l_2^n``, whose cone is the Lorentz cone."""
    return adjoin_order_unit(reals(), Lp(n, 2.0), f"spin factor (R,1) (+)_1 l2^{n}")


def iterate_adjoin_l1(n: int) -> AdjoinedOUS:
    """Adjoin ``R`` to ``(R, 1)`` ``n`` times in succession."""
    if n < 1:
        raise ValueError("n must be >= 1")
    A = adjoin_order_unit(reals(), Lp(1, 1.0))
    for _ in range(n - 1):
        A = adjoin_order_unit(A.composite, Lp(1, 1.0))
    return A


def single_shot_l1(n: int) -> AdjoinedOUS:
    """``(R, 1) (+)_1 l_1^n`` in one step."""
    return adjoin_order_unit(reals(), Lp(n, 1.0))


# ---------------------------------------------------------------------------
# base-normed adjoin
# ---------------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class BaseNormedSpace:
    """``l_1^n`` with the positive orthant and simplex base, with ``X``
    adjoined by the max-norm when ``X`` is non-trivial."""

    V: Lp
    X: SpaceDesc

    @property
    def space(self) -> AdjoinLinf:
        return AdjoinLinf(self.V, self.X)

    @property
    def dim(self) -> int:
        return self.V.dim + self.X.dim

    def split(self, Z):
        Z = np.asarray(Z, dtype=float)
        return Z[..., : self.V.dim], Z[..., self.V.dim :]

    def norm(self, z) -> float:
        return norm(self.space, z)

    def cone_margins(self, Z) -> np.ndarray:
        """``min(min_i u_i, sum u - ||x||)``: both constraints at once."""
        u, x = self.split(Z)
        return np.minimum(u.min(axis=-1), u.sum(axis=-1) - norms(self.X, x))

    def in_cone(self, z) -> bool:
        return bool(self.cone_margins(vec(z, self.dim)) >= -EPS)

    def in_base(self, z) -> bool:
        """Base ``B x X_1``: ``u`` in the simplex and ``||x|| <= 1``."""
        u, x = self.split(vec(z, self.dim))
        return bool(
            np.all(u >= -EPS) and abs(u.sum() - 1.0) <= EPS and norm(self.X, x) <= 1.0 + EPS
        )


def adjoin_base(Vb: Lp, X: SpaceDesc) -> BaseNormedSpace:
    if not (isinstance(Vb, Lp) and Vb.p == 1.0):
        raise TypeError("only the l_1 / simplex base-normed model is supported")
    return BaseNormedSpace(Vb, X)


def base_additivity_check(B: BaseNormedSpace, seed, count: int) -> Report:
    """The max-sum norm is additive on the cone."""
    rng = np.random.default_rng(seed)
    rep = Report("base_additivity", "max-sum norm is additive on the adjoined cone", sampled=True)

    def draw(m):
        u = rng.exponential(size=(m, B.V.dim))
        x = rng.standard_normal((m, B.X.dim))
        nx = norms(B.X, x)
        scale = rng.uniform(0.0, 1.0, size=m) * u.sum(axis=1) / np.where(nx > 0, nx, 1.0)
        return np.hstack([u, x * scale[:, None]])

    S, T = draw(count), draw(count)
    ns, nt, nst = norms(B.space, S), norms(B.space, T), norms(B.space, S + T)
    err = np.abs(nst - ns - nt)
    rep.data.update(count=count, max_error=float(err.max(initial=0.0)))
    for i in np.flatnonzero(err > EPS):
        rep.fail(s=S[i], t=T[i], error=float(err[i]))
    return rep


# ---------------------------------------------------------------------------
# checks on order unit spaces
# ---------------------------------------------------------------------------


def lemma33_equivalence(V: OrderUnitSpace, u, k: float) -> Report:
    """``u >= 0 and k <= ||u|| - || ||u|| e - u ||``  iff  ``k e <= u``."""
    u = vec(u, V.dim)
    nu = norm(V.space, u)
    gap = nu - norm(V.space, nu * V.unit - u)
    pos = cone_membership(V, u)
    a_margin = min(pos.margin, gap - k)
    b = order_leq(V, k * V.unit, u)
    a = a_margin >= -EPS
    rep = Report(
        "unit_multiple_below",
        "k e <= u reformulated through the norm",
        data={"a": a, "b": b.inside, "a_margin": a_margin, "b_margin": b.margin, "gap": gap},
    )
    if a != b.inside:
        rep.fail(reason="conditions disagree", a_margin=a_margin, b_margin=b.margin)
    return rep


def order_norm_equals_l1_check(A: AdjoinedOUS, seed, count: int, tol: float = 1e-6) -> Report:
    """The order-unit norm of ``V (+)_1 X`` equals ``||v|| + ||x||``."""
    rng = np.random.default_rng(seed)
    rep = Report(
        "order_norm_equals_l1", "order-unit norm of the adjoined space is the 1-sum", sampled=True
    )
    Z = rng.standard_normal((count, A.dim)) * rng.uniform(0.0, 3.0, size=(count, 1))
    worst = 0.0
    for z in Z:
        o = order_unit_norm(A.composite, z, tol=min(tol, 1e-10))
        ref = norm(A.composite.space, z)
        err = abs(o - ref)
        worst = max(worst, err)
        if err > tol:
            rep.fail(z=z, order_norm=o, sum_norm=ref)
    rep.data.update(count=count, tol=tol, max_error=worst)
    return rep


# ---------------------------------------------------------------------------
# semi-peripheral elements, canopy, periphery
# ---------------------------------------------------------------------------


def in_interval(V: OrderUnitSpace, u) -> bool:
    """``0 <= u <= e``."""
    u = vec(u, V.dim)
    return order_leq(V, np.zeros(V.dim), u).inside and order_leq(V, u, V.unit).inside


def is_peripheral(V: OrderUnitSpace, w) -> bool:
    """``w`` in ``R_V``: ``0 <= w <= e`` and ``||w|| = ||e - w|| = 1``."""
    w = vec(w, V.dim)
    return (
        in_interval(V, w)
        and abs(norm(V.space, w) - 1.0) <= EPS
        and abs(norm(V.space, V.unit - w) - 1.0) <= EPS
    )


def semi_peripheral_check(V: OrderUnitSpace, u) -> bool:
    u = vec(u, V.dim)
    return in_interval(V, u) and abs(norm(V.space, u) - norm(V.space, V.unit - u)) <= EPS


def semi_peripheral_generate(V: OrderUnitSpace, w, alpha: float) -> np.ndarray:
    """``alpha (e - w) + (1 - alpha) w`` for a peripheral ``w``."""
    w = vec(w, V.dim)
    if not 0.0 <= alpha <= 1.0:
        raise ValueError("alpha must lie in [0, 1]")
    if not is_peripheral(V, w):
        raise ValueError("w is not a peripheral element of V")
    return alpha * (V.unit - w) + (1.0 - alpha) * w


@dataclass(frozen=True)
class PeripheryVerdict:
    in_canopy: bool
    in_periphery: bool
    in_periphery_direct: bool
    in_periphery_characterized: bool
    semi_peripheral_u: bool
    norms: tuple[float, float, float]


def canopy_periphery_membership(A: AdjoinedOUS, u, x) -> PeripheryVerdict:
    """Canopy and periphery of ``V (+)_1 X`` at ``(u, x)``.

    Periphery is decided twice: directly (``z`` and ``e_X - z`` positive of
    norm one) and by the characterisation (``u`` semi-peripheral with
    ``||u|| + ||x|| = 1``).  ``in_periphery`` is the direct answer.
    """
    V = A.V
    u = vec(u, V.dim)
    x = vec(x, A.X.dim)
    z = np.concatenate([u, x])
    nz = norm(A.composite.space, z)
    nu, nx = norm(V.space, u), norm(A.X, x)
    neu = norm(V.space, V.unit - u)
    in_canopy = cone_membership(A.composite, z).inside and abs(nz - 1.0) <= EPS
    rest = A.composite.unit - z
    direct = (
        in_canopy
        and cone_membership(A.composite, rest).inside
        and abs(norm(A.composite.space, rest) - 1.0) <= EPS
    )
    semi = semi_peripheral_check(V, u)
    characterized = semi and abs(nu + nx - 1.0) <= EPS
    return PeripheryVerdict(in_canopy, direct, direct, characterized, semi, (nu, nx, neu))


def periphery_equivalence_check(A: AdjoinedOUS, points) -> Report:
    rep = Report(
        "periphery_equivalence",
        "periphery of the adjoined space via semi-peripheral elements",
        sampled=True,
    )
    rep.notes.append(CANOPY_NOTE)
    hits = 0
    for z in points:
        u, x = A.split(z)
        v = canopy_periphery_membership(A, u, x)
        hits += v.in_periphery_direct
        if v.in_periphery_direct != v.in_periphery_characterized:
            rep.fail(z=z, direct=v.in_periphery_direct, characterized=v.in_periphery_characterized)
        if v.in_periphery and not v.in_canopy:
            rep.fail(z=z, reason="periphery point outside the canopy")
    rep.data.update(count=len(points), in_periphery=hits)
    return rep


def linf_peripheral_elements(n: int) -> list[np.ndarray]:
    """``R_V`` for natural ``l_inf^n``: 0/1 vectors other than ``0`` and ``e``."""
    out = []
    for mask in range(1, 2**n - 1):
        out.append(np.array([(mask >> i) & 1 for i in range(n)], dtype=float))
    return out


def periphery_samples(A: AdjoinedOUS, seed, count: int) -> np.ndarray:
    """Boundary-biased points: generated semi-peripheral ``u`` with ``x`` at
    the complementary norm, plus jittered copies that usually miss."""
    V = A.V
    natural = isinstance(V.cone_rule, NaturalLinfSign) and all(t > 0 for t in V.cone_rule.signs)
    if not natural:
        raise TypeError("boundary sampling is implemented for natural l_inf^n")
    rng = np.random.default_rng(seed)
    W = linf_peripheral_elements(V.dim)
    rows = []
    for i in range(count):
        if W:
            u = semi_peripheral_generate(V, W[rng.integers(len(W))], rng.uniform())
        else:
            # R_V is empty for (R, 1); e/2 is the only semi-peripheral element
            u = V.unit / 2
        nx = 1.0 - norm(V.space, u)
        x = rng.standard_normal(A.X.dim)
        x = x * (nx / norm(A.X, x)) if norm(A.X, x) > 0 else x * 0
        z = np.concatenate([u, x])
        if i % 2 == 1:
            z = z + rng.choice([1e-3, 1e-2, 1e-1]) * rng.standard_normal(A.dim)
        rows.append(z)
    return np.array(rows)
