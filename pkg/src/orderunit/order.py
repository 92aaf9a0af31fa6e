"""Cones, order units and the order-unit norm.

An :class:`OrderUnitSpace` couples a normed space with a distinguished unit
vector and a rule deciding cone membership.  Membership is reported with a
signed margin: positive means strictly inside, and anything down to
``-EPS`` still counts as inside.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence, Union

import numpy as np

from .norms import (
    DELTA,
    EPS,
    INF,
    AdjoinL1,
    Lp,
    SpaceDesc,
    basis,
    norm,
    norms,
    sphere_batch,
    vec,
)
from .report import Report


# ---------------------------------------------------------------------------
# cone rules
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class FromNormingUnit:
    """``{x : ||2x - ||x|| e|| <= ||x||}`` for the space's unit ``e``."""


@dataclass(frozen=True)
class NaturalLinfSign:
    """``{x : s_i x_i >= 0}`` for a sign vector ``s``."""

    signs: tuple[float, ...]


@dataclass(frozen=True)
class L1Ice:
    """``{x : sign * x_k >= sum_{i != k} |x_i|}``."""

    k: int
    sign: float = 1.0


@dataclass(frozen=True, eq=False)
class Adjoined:
    """``{(u, x) : ||x||_X e_V <= u}`` inside ``V (+)_1 X``."""

    V: "OrderUnitSpace"
    X: SpaceDesc


@dataclass(frozen=True)
class Lorentz:
    """``{(t, x) : t >= ||x||_2}``."""


ConeRule = Union[FromNormingUnit, NaturalLinfSign, L1Ice, Adjoined, Lorentz]


@dataclass(frozen=True, eq=False)
class OrderUnitSpace:
    space: SpaceDesc
    unit: np.ndarray
    cone_rule: ConeRule
    provenance: str = ""

    def __post_init__(self):
        u = vec(self.unit, self.space.dim)
        u.setflags(write=False)
        object.__setattr__(self, "unit", u)
        nu = norm(self.space, u)
        if abs(nu - 1.0) > 1e-12:
            raise ValueError(f"unit must have norm one, got {nu!r}")
        if float(cone_margins(self, u)) < -EPS:
            raise ValueError("unit must lie in the cone")

    @property
    def dim(self) -> int:
        return self.space.dim

    def __repr__(self) -> str:
        return f"OrderUnitSpace({self.provenance or type(self.cone_rule).__name__}, dim={self.dim})"


@dataclass(frozen=True)
class MembershipVerdict:
    inside: bool
    margin: float

    def __bool__(self) -> bool:
        return self.inside


# ---------------------------------------------------------------------------
# named constructions
# ---------------------------------------------------------------------------


def linf_natural(n: int, signs: Sequence[float] | None = None) -> OrderUnitSpace:
    s = np.ones(n) if signs is None else np.sign(vec(signs, n))
    if np.any(s == 0):
        raise ValueError("sign vector entries must be +1 or -1")
    return OrderUnitSpace(
        Lp(n, INF), s, NaturalLinfSign(tuple(float(t) for t in s)), f"linf^{n} natural"
    )


def reals() -> OrderUnitSpace:
    """The one-dimensional order unit space ``(R, 1)``."""
    return OrderUnitSpace(Lp(1, INF), np.ones(1), NaturalLinfSign((1.0,)), "(R, 1)")


def l1_ice(n: int, k: int = 0, sign: float = 1.0) -> OrderUnitSpace:
    return OrderUnitSpace(
        Lp(n, 1.0), basis(n, k, sign), L1Ice(k, float(sign)), f"l1^{n} ice at e{k + 1}"
    )


def from_norming_unit(space: SpaceDesc, e, provenance: str = "") -> OrderUnitSpace:
    return OrderUnitSpace(space, vec(e, space.dim), FromNormingUnit(), provenance or "X_e^+")


def lorentz(n: int) -> OrderUnitSpace:
    """Lorentz cone in ``R (+)_1 l_2^n`` with unit ``(1, 0)``."""
    space = AdjoinL1(reals(), Lp(n, 2.0))
    return OrderUnitSpace(space, basis(n + 1, 0), Lorentz(), f"Lorentz^{n + 1}")


# ---------------------------------------------------------------------------
# membership
# ---------------------------------------------------------------------------


def cone_margins(ous: OrderUnitSpace, X: np.ndarray) -> np.ndarray:
    """Signed slack of the defining inequality, row-wise."""
    X = np.asarray(X, dtype=float)
    if X.shape[-1] != ous.dim:
        raise ValueError(f"dimension mismatch: expected {ous.dim}, got {X.shape[-1]}")
    rule = ous.cone_rule
    if isinstance(rule, FromNormingUnit):
        nx = norms(ous.space, X)
        return nx - norms(ous.space, 2.0 * X - nx[..., None] * ous.unit)
    if isinstance(rule, NaturalLinfSign):
        return (X * np.asarray(rule.signs)).min(axis=-1)
    if isinstance(rule, L1Ice):
        A = np.abs(X)
        rest = A.sum(axis=-1) - A[..., rule.k]
        return rule.sign * X[..., rule.k] - rest
    if isinstance(rule, Adjoined):
        k = rule.V.dim
        u, x = X[..., :k], X[..., k:]
        nx = norms(rule.X, x)
        return cone_margins(rule.V, u - nx[..., None] * rule.V.unit)
    if isinstance(rule, Lorentz):
        return X[..., 0] - np.sqrt(np.einsum("...i,...i->...", X[..., 1:], X[..., 1:]))
    raise TypeError(f"unknown cone rule {rule!r}")


def cone_membership(ous: OrderUnitSpace, x) -> MembershipVerdict:
    m = float(cone_margins(ous, vec(x, ous.dim)))
    return MembershipVerdict(m >= -EPS, m)


def order_leq(ous: OrderUnitSpace, a, b) -> MembershipVerdict:
    """``a <= b``, i.e. ``b - a`` lies in the cone."""
    return cone_membership(ous, vec(b, ous.dim) - vec(a, ous.dim))


def sample_cone(ous: OrderUnitSpace, seed, count: int) -> np.ndarray:
    """Cone points of norm one, mixing rejection samples with shifted points.

    Sphere samples already in the cone are kept; the rest are pushed in as
    ``x + t ||x|| e`` with ``t`` in ``[1, 2]``, which is positive for any
    order unit space with norm equal to the order-unit norm.
    """
    rng = np.random.default_rng(seed)
    S = sphere_batch(ous.space, rng, count)
    if count == 0:
        return S
    inside = cone_margins(ous, S) >= -EPS
    t = rng.uniform(1.0, 2.0, size=count)
    shifted = S + (t * norms(ous.space, S))[:, None] * ous.unit
    P = np.where(inside[:, None], S, shifted)
    return P / norms(ous.space, P)[:, None]


# ---------------------------------------------------------------------------
# positivity and the order-unit norm
# ---------------------------------------------------------------------------


def positivity_conditions(ous: OrderUnitSpace, u, lambda_grid: Sequence[float]) -> dict[str, bool]:
    u = vec(u, ous.dim)
    if len(lambda_grid) == 0:
        raise ValueError("lambda grid must be non-empty")
    nu = norm(ous.space, u)
    lams = np.asarray(lambda_grid, dtype=float)
    if np.any(lams < nu - EPS):
        raise ValueError("every grid lambda must be >= ||u||")
    slack = lams - norms(ous.space, 2.0 * u[None, :] - lams[:, None] * ous.unit)
    return {
        "member": cone_membership(ous, u).inside,
        "all_lambda": bool(np.all(slack >= -EPS)),
        "some_lambda": bool(np.any(slack >= -EPS)),
        "norm_equality": abs(norm(ous.space, 2.0 * u - nu * ous.unit) - nu) <= EPS,
    }


def positivity_equivalence(ous: OrderUnitSpace, u, lambda_grid: Sequence[float]) -> Report:
    """Evaluate the four equivalent descriptions of positivity of ``u``."""
    c = positivity_conditions(ous, u, lambda_grid)
    rep = Report("positivity_equivalence", "four equivalent positivity conditions", data=dict(c))
    if not (c["member"] == c["all_lambda"] == c["some_lambda"]):
        rep.fail(reason="membership and lambda conditions disagree", **c)
    if c["member"] != c["norm_equality"]:
        rep.fail(reason="norm-equality condition disagrees with membership", **c)
    return rep


def order_unit_norm(ous: OrderUnitSpace, x, tol: float = 1e-10) -> float:
    """``inf {lam >= 0 : lam e +- x in cone}`` by bisection.

    The feasible set is an up-ray since adding a multiple of ``e`` keeps
    cone membership, so bisection on the two-sided predicate is valid.
    """
    if tol <= 0:
        raise ValueError("tol must be positive")
    x = vec(x, ous.dim)
    e = ous.unit

    def feasible(lam: float) -> bool:
        M = cone_margins(ous, np.stack([lam * e + x, lam * e - x]))
        return bool(np.all(M >= -EPS))

    hi = 2.0 * norm(ous.space, x) + 1.0
    for _ in range(5):
        if feasible(hi):
            break
        hi *= 2.0
    else:
        raise ValueError("unit does not dominate x: not an order unit for this cone")
    lo = 0.0
    if feasible(lo):
        return 0.0
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if feasible(mid):
            hi = mid
        else:
            lo = mid
    return hi


# ---------------------------------------------------------------------------
# probes
# ---------------------------------------------------------------------------


def _deterministic_probes(ous: OrderUnitSpace) -> np.ndarray:
    n = ous.dim
    rows = [ous.unit, -ous.unit]
    for k in range(n):
        rows.append(basis(n, k))
        rows.append(basis(n, k, -1.0))
    return np.array(rows)


def properness_probe(ous: OrderUnitSpace, seed, count: int) -> Report:
    """Sampled check that the cone contains no line."""
    rep = Report("properness_probe", "the induced cone is proper", sampled=True)
    P = sample_cone(ous, seed, count)
    D = _deterministic_probes(ous)
    D = D[cone_margins(ous, D) >= -EPS]
    pts = np.vstack([P, D]) if len(D) else P
    pts = pts[norms(ous.space, pts) >= DELTA]
    neg = cone_margins(ous, -pts)
    bad = neg >= -DELTA
    for row, m in zip(pts[bad], neg[bad]):
        rep.fail(x=row, margin_of_minus_x=float(m))
    rep.data.update(checked=int(len(pts)), violations=int(bad.sum()))
    return rep


def archimedean_probe(ous: OrderUnitSpace, x, lambda_sequence: Sequence[float]) -> Report:
    """If ``x + lam e`` is positive along a sequence ``lam -> 0``, so is ``x``."""
    x = vec(x, ous.dim)
    lams = np.asarray(lambda_sequence, dtype=float)
    if len(lams) == 0 or np.any(lams <= 0) or np.any(np.diff(lams) >= 0):
        raise ValueError("lambda_sequence must be strictly decreasing positive reals")
    rep = Report("archimedean_probe", "the induced cone is Archimedean", sampled=True)
    margins = cone_margins(ous, x[None, :] + lams[:, None] * ous.unit)
    m_x = float(cone_margins(ous, x))
    rep.data.update(margins=margins, limit_margin=m_x, smallest_lambda=float(lams[-1]))
    if np.all(margins >= -EPS):
        rep.data["hypothesis"] = "holds"
        if m_x < -EPS:
            rep.fail(reason="x + lam e positive for every lam but x is not", margin=m_x)
    else:
        rep.data["hypothesis"] = "broken"
        rep.notes.append("x + lam e leaves the cone for some lam; nothing to conclude")
    return rep


def cone_axioms_check(ous: OrderUnitSpace, seed, count: int) -> Report:
    """Closure of sampled cone points under sums and non-negative scaling."""
    rng = np.random.default_rng(seed)
    rep = Report("cone_axioms", "cone closed under addition and scaling", sampled=True)
    P = sample_cone(ous, rng, count) * rng.uniform(0.1, 3.0, size=(count, 1))
    Q = sample_cone(ous, rng, count) * rng.uniform(0.1, 3.0, size=(count, 1))
    m = cone_margins(ous, P + Q)
    for i in np.flatnonzero(m < -EPS):
        rep.fail(kind="sum", x=P[i], y=Q[i], margin=float(m[i]))
    for alpha in (0.0, 0.5, 1.0, 2.0, 10.0):
        ma = cone_margins(ous, alpha * P)
        for i in np.flatnonzero(ma < -EPS):
            rep.fail(kind="scale", alpha=alpha, x=P[i], margin=float(ma[i]))
    rep.data.update(count=count)
    return rep
