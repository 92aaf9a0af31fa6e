"""State spaces, pure states and dual descriptions of adjoined cones.

Everything is finite-dimensional, so state spaces are handled through
finite vertex lists (polyhedral cases) or closed-form minimisers; weak*
compactness arguments become "the minimum over finitely many extreme
points".
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Optional, Union

import numpy as np

from .adjoin import AdjoinedOUS
from .norms import EPS, INF, Lp, SpaceDesc, basis, norm, norming_functional, norms, sphere_batch, vec, conjugate
from .order import (
    Adjoined,
    FromNormingUnit,
    L1Ice,
    Lorentz,
    NaturalLinfSign,
    OrderUnitSpace,
    cone_margins,
    cone_membership,
    sample_cone,
)
from .report import Report


class InconsistencyError(AssertionError):
    """Two independent routes to the same quantity disagree."""


@dataclass(frozen=True)
class Functional:
    coeffs: np.ndarray

    def __call__(self, x) -> float:
        return float(np.dot(self.coeffs, vec(x, len(self.coeffs))))


# ---------------------------------------------------------------------------
# state space descriptions
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Simplex:
    """States of ``l_inf^n`` with cone ``{s_i x_i >= 0}``: ``conv{s_i e_i}``."""

    signs: tuple[float, ...]

    @property
    def dim(self) -> int:
        return len(self.signs)


@dataclass(frozen=True)
class L1IceDual:
    """States of the l_1 ice cone at ``sign * e_k``: ``phi_k = sign``,
    ``|phi_i| <= 1`` otherwise."""

    n: int
    k: int
    sign: float = 1.0

    @property
    def dim(self) -> int:
        return self.n


@dataclass(frozen=True)
class DualBall:
    """The closed unit ball of the dual of an l_p space."""

    space: Lp

    @property
    def dim(self) -> int:
        return self.space.dim


@dataclass(frozen=True, eq=False)
class ExposedFace:
    """``{phi : ||phi||_* <= 1, phi(e) = 1}`` for a norming unit ``e`` of l_p."""

    space: Lp
    unit: np.ndarray

    @property
    def dim(self) -> int:
        return self.space.dim


@dataclass(frozen=True, eq=False)
class Product:
    first: "StateSpaceDesc"
    second: "StateSpaceDesc"

    @property
    def dim(self) -> int:
        return self.first.dim + self.second.dim


StateSpaceDesc = Union[Simplex, L1IceDual, DualBall, ExposedFace, Product]


def state_space(ous: OrderUnitSpace) -> StateSpaceDesc:
    rule = ous.cone_rule
    if isinstance(rule, NaturalLinfSign):
        return Simplex(rule.signs)
    if isinstance(rule, L1Ice):
        return L1IceDual(ous.dim, rule.k, rule.sign)
    if isinstance(rule, Adjoined):
        if not isinstance(rule.X, Lp):
            raise TypeError("adjoined space must be l_p")
        return Product(state_space(rule.V), DualBall(rule.X))
    if isinstance(rule, Lorentz):
        return Product(Simplex((1.0,)), DualBall(Lp(ous.dim - 1, 2.0)))
    if isinstance(rule, FromNormingUnit):
        if not isinstance(ous.space, Lp):
            raise TypeError("norming-unit cones are supported over l_p")
        e = ous.unit
        sgn = np.where(e >= 0, 1.0, -1.0)
        if ous.space.p is INF and np.all(np.abs(np.abs(e) - 1.0) <= 1e-12):
            return Simplex(tuple(sgn))
        if ous.space.p == 1.0:
            k = int(np.argmax(np.abs(e)))
            if abs(abs(e[k]) - 1.0) <= 1e-12:
                return L1IceDual(ous.dim, k, float(sgn[k]))
        return ExposedFace(ous.space, e)
    raise TypeError(f"no state space description for {rule!r}")


def _sign_vectors(m: int) -> list[np.ndarray]:
    return [np.array(t, dtype=float) for t in itertools.product((1.0, -1.0), repeat=m)]


def ball_vertices(space: Lp) -> Optional[list[np.ndarray]]:
    """Vertices of the closed unit ball of ``space`` (polyhedral cases only)."""
    m = space.dim
    if space.p == 1.0 or (m == 1 and space.p is not INF):
        return [basis(m, j, s) for j in range(m) for s in (1.0, -1.0)]
    if space.p is INF:
        return _sign_vectors(m)
    return None


def vertices(desc: StateSpaceDesc) -> Optional[list[np.ndarray]]:
    """Extreme points, or ``None`` if the set is not a polytope."""
    if isinstance(desc, Simplex):
        return [basis(desc.dim, i, s) for i, s in enumerate(desc.signs)]
    if isinstance(desc, L1IceDual):
        out = []
        for t in _sign_vectors(desc.n - 1):
            phi = np.insert(t, desc.k, desc.sign)
            out.append(phi)
        return out
    if isinstance(desc, DualBall):
        return ball_vertices(Lp(desc.space.dim, conjugate(desc.space.p)))
    if isinstance(desc, ExposedFace):
        e = desc.unit
        n = desc.dim
        if desc.space.p is INF:
            return [basis(n, i, np.sign(e[i])) for i in range(n) if abs(abs(e[i]) - 1.0) <= 1e-12]
        if desc.space.p == 1.0:
            free = [i for i in range(n) if e[i] == 0.0]
            base = np.sign(e)
            out = []
            for t in _sign_vectors(len(free)):
                phi = base.copy()
                phi[free] = t
                out.append(phi)
            return out
        return [norming_functional(desc.space, e)]
    if isinstance(desc, Product):
        a, b = vertices(desc.first), vertices(desc.second)
        if a is None or b is None:
            return None
        return [np.concatenate([p, q]) for p in a for q in b]
    raise TypeError(f"unknown description {desc!r}")


def min_over(desc: StateSpaceDesc, u) -> float:
    """``min {phi(u) : phi in desc}`` in closed form."""
    u = vec(u, desc.dim)
    if isinstance(desc, Simplex):
        return float(np.min(np.asarray(desc.signs) * u))
    if isinstance(desc, L1IceDual):
        rest = np.abs(np.delete(u, desc.k)).sum()
        return float(desc.sign * u[desc.k] - rest)
    if isinstance(desc, DualBall):
        return -norm(desc.space, u)
    if isinstance(desc, ExposedFace):
        V = vertices(desc)
        return float(min(np.dot(v, u) for v in V))
    if isinstance(desc, Product):
        k = desc.first.dim
        return min_over(desc.first, u[:k]) + min_over(desc.second, u[k:])
    raise TypeError(f"unknown description {desc!r}")


def contains(desc: StateSpaceDesc, phi, tol: float = EPS) -> bool:
    phi = vec(phi, desc.dim)
    if isinstance(desc, Simplex):
        s = np.asarray(desc.signs)
        return bool(np.all(s * phi >= -tol) and abs(np.dot(s, phi) - 1.0) <= tol)
    if isinstance(desc, L1IceDual):
        rest = np.delete(phi, desc.k)
        return bool(abs(phi[desc.k] - desc.sign) <= tol and np.all(np.abs(rest) <= 1.0 + tol))
    if isinstance(desc, DualBall):
        return norm(Lp(desc.dim, conjugate(desc.space.p)), phi) <= 1.0 + tol
    if isinstance(desc, ExposedFace):
        q = Lp(desc.dim, conjugate(desc.space.p))
        return norm(q, phi) <= 1.0 + tol and abs(np.dot(phi, desc.unit) - 1.0) <= tol
    if isinstance(desc, Product):
        k = desc.first.dim
        return contains(desc.first, phi[:k], tol) and contains(desc.second, phi[k:], tol)
    raise TypeError(f"unknown description {desc!r}")


# ---------------------------------------------------------------------------
# cone generators
# ---------------------------------------------------------------------------


def extreme_rays(ous: OrderUnitSpace) -> Optional[list[np.ndarray]]:
    """A finite generating set of the cone, when it is polyhedral.

    For an adjoined cone ``{(u, x) : ||x|| e <= u}`` the generators are
    ``(r, 0)`` for generators ``r`` of ``V^+`` and ``(e, x_j)`` for the
    vertices ``x_j`` of the unit ball of ``X``.
    """
    rule = ous.cone_rule
    n = ous.dim
    if isinstance(rule, NaturalLinfSign):
        return [basis(n, i, s) for i, s in enumerate(rule.signs)]
    if isinstance(rule, L1Ice):
        if n == 1:
            return [basis(1, 0, rule.sign)]
        rays = []
        for i in range(n):
            if i == rule.k:
                continue
            for s in (1.0, -1.0):
                r = basis(n, rule.k, rule.sign)
                r[i] = s
                rays.append(r)
        return rays
    if isinstance(rule, FromNormingUnit):
        desc = state_space(ous)
        if isinstance(desc, Simplex):
            return extreme_rays(OrderUnitSpace(ous.space, ous.unit, NaturalLinfSign(desc.signs)))
        if isinstance(desc, L1IceDual):
            return extreme_rays(OrderUnitSpace(ous.space, ous.unit, L1Ice(desc.k, desc.sign)))
        return None
    if isinstance(rule, Adjoined):
        rv = extreme_rays(rule.V)
        bx = ball_vertices(rule.X) if isinstance(rule.X, Lp) else None
        if rv is None or bx is None:
            return None
        m = rule.X.dim
        rays = [np.concatenate([r, np.zeros(m)]) for r in rv]
        rays += [np.concatenate([rule.V.unit, x]) for x in bx]
        return rays
    return None


# ---------------------------------------------------------------------------
# operations
# ---------------------------------------------------------------------------


def is_state(ous: OrderUnitSpace, phi, seed=0, count: int = 1000) -> bool:
    """``phi(e) = 1`` and ``phi >= 0`` on sampled cone points and on the
    cone generators when they are known."""
    phi = vec(phi, ous.dim)
    if abs(float(np.dot(phi, ous.unit)) - 1.0) > EPS:
        return False
    P = sample_cone(ous, seed, count)
    rays = extreme_rays(ous)
    if rays:
        P = np.vstack([P, np.array(rays)])
    return bool(np.all(P @ phi >= -EPS))


def inf_ball_functionals(space: Lp, x, seed=0, count: int = 256) -> float:
    """``inf {f(x) : ||f||_* <= 1}``, which is ``-||x||``.

    Cross-checked against the norming functional and a random sweep over
    the dual sphere.
    """
    x = vec(x, space.dim)
    a = -norm(space, x)
    if a == 0.0:
        return 0.0
    b = -float(np.dot(norming_functional(space, x), x))
    if abs(a - b) > EPS:
        raise InconsistencyError(f"formula {a!r} vs norming functional {b!r}")
    F = sphere_batch(Lp(space.dim, conjugate(space.p)), seed, count)
    sampled = float((F @ x).min())
    if sampled < a - EPS:
        raise InconsistencyError(f"dual-ball sample {sampled!r} beats the infimum {a!r}")
    return a


def inf_states(ous: OrderUnitSpace, u) -> float:
    """``inf {phi(u) : phi state} = ||u|| - || ||u|| e - u ||`` for positive ``u``.

    The closed-form minimum over the state space description must match.
    """
    u = vec(u, ous.dim)
    if not cone_membership(ous, u).inside:
        raise ValueError("u must lie in the cone")
    nu = norm(ous.space, u)
    a = nu - norm(ous.space, nu * ous.unit - u)
    b = min_over(state_space(ous), u)
    if abs(a - b) > EPS:
        raise InconsistencyError(f"formula {a!r} vs state minimum {b!r}")
    return a


def _dual_min_f(X: Lp, x, extra: np.ndarray) -> float:
    cands = [f for f in (ball_vertices(Lp(X.dim, conjugate(X.p))) or [])]
    if norm(X, x) > 0:
        cands.append(-norming_functional(X, x))
    F = np.vstack([np.array(cands).reshape(-1, X.dim), extra]) if len(cands) else extra
    return float((F @ x).min()) if len(F) else 0.0


def dual_cone_check(A: AdjoinedOUS, seed, count: int) -> Report:
    """``(u, x)`` is in the adjoined cone iff ``phi(u) + f(x) >= 0`` for every
    state ``phi`` of ``V`` and every ``f`` in the dual unit ball of ``X``.

    Three routes per point: the cone rule, a minimum over extreme and
    sampled functional pairs, and the closed formula
    ``u >= 0 and ||u|| - || ||u|| e - u || >= ||x||``.
    """
    V, X = A.V, A.X
    if not isinstance(X, Lp):
        raise TypeError("X must be an l_p space")
    SV = state_space(V)
    PV = vertices(SV)
    if PV is None:
        raise TypeError("V needs a polyhedral state space")
    rng = np.random.default_rng(seed)
    rep = Report(
        "dual_cone_check",
        "adjoined cone as the dual of states times dual unit ball",
        sampled=True,
    )
    U = V.unit[None, :] * rng.uniform(0.0, 2.0, size=(count, 1)) + rng.uniform(
        -0.6, 0.6, size=(count, V.dim)
    )
    Xs = rng.standard_normal((count, X.dim)) * rng.uniform(0.0, 1.0, size=(count, 1))
    extra = sphere_batch(Lp(X.dim, conjugate(X.p)), rng, 64)
    PVa = np.array(PV)
    agree = 0
    inside_count = 0
    for u, x in zip(U, Xs):
        z = np.concatenate([u, x])
        r1 = bool(cone_margins(A.composite, z) >= -EPS)
        r2 = float((PVa @ u).min()) + _dual_min_f(X, x, extra) >= -EPS
        pos = cone_membership(V, u).inside
        nu = norm(V.space, u)
        r3 = pos and (nu - norm(V.space, nu * V.unit - u) - norm(X, x) >= -EPS)
        inside_count += r1
        if r1 == r2 == r3:
            agree += 1
        else:
            rep.fail(z=z, rule=r1, dual=r2, formula=r3)
    rep.data.update(count=count, inside=inside_count, agree=agree)
    return rep


# ---------------------------------------------------------------------------
# polytope vertices
# ---------------------------------------------------------------------------


def state_polytope(A: AdjoinedOUS) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """H-description ``{psi : E psi = b, G psi >= 0}`` of ``S(V_X)``."""
    rays = extreme_rays(A.composite)
    if rays is None:
        raise TypeError("adjoined cone is not polyhedral")
    E = A.composite.unit[None, :]
    return E, np.ones(1), np.array(rays)


def enumerate_vertices(E: np.ndarray, b: np.ndarray, G: np.ndarray, tol: float = 1e-9) -> list[np.ndarray]:
    """Brute-force vertex enumeration: every choice of ``d - rank(E)`` active
    inequalities, solved together with the equalities, kept if feasible."""
    d = G.shape[1]
    need = d - np.linalg.matrix_rank(E)
    out: list[np.ndarray] = []
    for S in itertools.combinations(range(G.shape[0]), need):
        M = np.vstack([E, G[list(S)]])
        if np.linalg.matrix_rank(M) < d:
            continue
        rhs = np.concatenate([b, np.zeros(need)])
        psi = np.linalg.lstsq(M, rhs, rcond=None)[0]
        if np.max(np.abs(M @ psi - rhs)) > tol:
            continue
        if np.all(G @ psi >= -tol) and not any(np.allclose(psi, q, atol=1e-9) for q in out):
            out.append(psi)
    return out


def is_vertex(E: np.ndarray, b: np.ndarray, G: np.ndarray, psi, tol: float = 1e-9) -> bool:
    """A feasible point is extreme iff its active constraints have full rank,
    i.e. it is not the midpoint of two distinct feasible points."""
    psi = np.asarray(psi, dtype=float)
    if np.max(np.abs(E @ psi - b)) > tol or np.any(G @ psi < -tol):
        return False
    active = G[np.abs(G @ psi) <= tol]
    M = np.vstack([E, active]) if len(active) else E
    return int(np.linalg.matrix_rank(M)) == G.shape[1]


def _same_set(P: list[np.ndarray], Q: list[np.ndarray], atol: float = 1e-9) -> bool:
    if len(P) != len(Q):
        return False
    return all(any(np.allclose(p, q, atol=atol) for q in Q) for p in P) and all(
        any(np.allclose(p, q, atol=atol) for p in P) for q in Q
    )


def pure_states_product_check(A: AdjoinedOUS) -> Report:
    """Pure states of ``V (+)_1 X`` are exactly ``P(V) x ext(X_1')``."""
    if not isinstance(A.X, Lp) or not (A.X.p == 1.0 or A.X.p is INF or A.X.dim == 1):
        raise TypeError("X must be l_1^m or l_inf^m")
    SV = state_space(A.V)
    PV = vertices(SV)
    EX = vertices(DualBall(A.X))
    if PV is None or EX is None:
        raise TypeError("unsupported family")
    rep = Report("pure_states_product", "pure states of the adjoined space factor as a product")
    product = [np.concatenate([p, f]) for p in PV for f in EX]
    E, b, G = state_polytope(A)
    for psi in product:
        if not is_vertex(E, b, G, psi):
            rep.fail(reason="product element is not a pure state", psi=psi)
    enumerated = enumerate_vertices(E, b, G)
    same = _same_set(product, enumerated)
    if not same:
        rep.fail(reason="vertex enumeration differs from the product", enumerated=enumerated)
    rep.data.update(
        pure_states_V=len(PV),
        ext_dual_ball_X=len(EX),
        product_size=len(product),
        enumerated=len(enumerated),
        pure_states=enumerated,
    )
    return rep


def state_product_containment(A: AdjoinedOUS, seed, count: int) -> Report:
    """``S(V_X) = S(V) x X_1'`` checked by sampling in both directions."""
    rng = np.random.default_rng(seed)
    rep = Report(
        "state_product_containment",
        "state space of the adjoined space is a product",
        sampled=True,
    )
    SV = state_space(A.V)
    PV = np.array(vertices(SV))
    k = A.V.dim
    q = Lp(A.X.dim, conjugate(A.X.p))
    # product -> states
    W = rng.dirichlet(np.ones(len(PV)), size=count) @ PV
    F = sphere_batch(q, rng, count) * rng.uniform(0.0, 1.0, size=(count, 1))
    fwd_bad = 0
    for phi, f in zip(W, F):
        psi = np.concatenate([phi, f])
        if not is_state(A.composite, psi, seed=rng.integers(2**32), count=64):
            fwd_bad += 1
            rep.fail(direction="product->state", psi=psi)
    # states -> product: normalised random functionals that are states
    rays = extreme_rays(A.composite)
    back_checked = back_bad = 0
    if rays is not None:
        R = np.array(rays)
        for _ in range(count):
            psi = rng.standard_normal(A.dim)
            psi[:k] = PV[rng.integers(len(PV))] + 0.3 * rng.standard_normal(k)
            val = float(np.dot(psi, A.composite.unit))
            if val <= 0:
                continue
            psi /= val
            if np.all(R @ psi >= -EPS):
                back_checked += 1
                if not (contains(SV, psi[:k]) and norm(q, psi[k:]) <= 1.0 + EPS):
                    back_bad += 1
                    rep.fail(direction="state->product", psi=psi)
    else:
        rep.notes.append("cone not polyhedral: state->product direction skipped")
    rep.data.update(forward=count, forward_bad=fwd_bad, backward=back_checked, backward_bad=back_bad)
    return rep
