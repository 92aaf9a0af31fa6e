"""Dense vectors, l_p norms and their duals, and 1-D convex minimisation.

Everything else in the package sits on top of this module.  Vectors are
plain 1-D ``float64`` numpy arrays; batches of vectors are 2-D arrays with
one vector per row.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import TYPE_CHECKING, Callable, Union

import numpy as np

if TYPE_CHECKING:
    from .order import OrderUnitSpace

# Feasibility tolerance and witness-strictness margin.
EPS = 1e-9
DELTA = 1e-6


class Infinity(enum.Enum):
    """Symbolic exponent for the sup norm."""

    INF = "inf"

    def __repr__(self) -> str:
        return "INF"

    def __str__(self) -> str:
        return "inf"


INF = Infinity.INF
Exponent = Union[float, Infinity]


def parse_exponent(text: str | float | Infinity) -> Exponent:
    if isinstance(text, Infinity):
        return text
    if isinstance(text, str) and text.strip().lower() in {"inf", "infinity", "oo"}:
        return INF
    p = float(text)
    if math.isinf(p):
        return INF
    if not p >= 1.0:
        raise ValueError(f"exponent p must be >= 1 or inf, got {text!r}")
    return p


def conjugate(p: Exponent) -> Exponent:
    """Hoelder conjugate exponent q with 1/p + 1/q = 1."""
    if p is INF:
        return 1.0
    if p == 1.0:
        return INF
    return p / (p - 1.0)


@dataclass(frozen=True)
class Lp:
    dim: int
    p: Exponent

    def __post_init__(self):
        if self.dim < 0:
            raise ValueError("dimension must be non-negative")
        if not isinstance(self.p, Infinity):
            if not (isinstance(self.p, (int, float)) and math.isfinite(self.p) and self.p >= 1):
                raise ValueError(f"p out of range: {self.p!r}")
            object.__setattr__(self, "p", float(self.p))

    def __str__(self) -> str:
        return f"l{self.p:g}^{self.dim}" if self.p is not INF else f"linf^{self.dim}"


@dataclass(frozen=True, eq=False)
class OrderUnitNormOf:
    """The order-unit norm induced by an order unit space."""

    ous: "OrderUnitSpace"

    @property
    def dim(self) -> int:
        return self.ous.dim


@dataclass(frozen=True, eq=False)
class AdjoinL1:
    """``V (+)_1 X``: norm ``||v||_V + ||x||_X``."""

    V: "OrderUnitSpace"
    X: "SpaceDesc"

    @property
    def dim(self) -> int:
        return self.V.dim + self.X.dim

    def split(self, z: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        k = self.V.dim
        return z[..., :k], z[..., k:]


@dataclass(frozen=True, eq=False)
class AdjoinLinf:
    """``V (+)_inf X``: norm ``max(||v||_V, ||x||_X)``."""

    V: "SpaceDesc"
    X: "SpaceDesc"

    @property
    def dim(self) -> int:
        return self.V.dim + self.X.dim

    def split(self, z: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        k = self.V.dim
        return z[..., :k], z[..., k:]


SpaceDesc = Union[Lp, OrderUnitNormOf, AdjoinL1, AdjoinLinf]


def vec(x, dim: int | None = None) -> np.ndarray:
    """Coerce ``x`` to a finite 1-D float vector, optionally checking its length."""
    v = np.array(x, dtype=float).reshape(-1)
    if dim is not None and v.shape[0] != dim:
        raise ValueError(f"dimension mismatch: expected {dim}, got {v.shape[0]}")
    if not np.all(np.isfinite(v)):
        raise ValueError("vector entries must be finite")
    return v


def basis(dim: int, k: int, sign: float = 1.0) -> np.ndarray:
    v = np.zeros(dim)
    v[k] = sign
    return v


def _lp_rows(p: Exponent, X: np.ndarray) -> np.ndarray:
    A = np.abs(X)
    if A.shape[-1] == 0:
        return np.zeros(A.shape[:-1])
    if p is INF:
        return A.max(axis=-1)
    if p == 1.0:
        return A.sum(axis=-1)
    if p == 2.0:
        return np.sqrt(np.einsum("...i,...i->...", A, A))
    # scale by the max entry to avoid overflow/underflow in A**p
    m = A.max(axis=-1)
    safe = np.where(m > 0, m, 1.0)
    return m * (((A / safe[..., None]) ** p).sum(axis=-1)) ** (1.0 / p)


def norms(space: SpaceDesc, X: np.ndarray) -> np.ndarray:
    """Row-wise norms of a 2-D batch (or the norm of a 1-D vector as a 0-d array)."""
    X = np.asarray(X, dtype=float)
    if X.shape[-1] != space.dim:
        raise ValueError(f"dimension mismatch: expected {space.dim}, got {X.shape[-1]}")
    if isinstance(space, Lp):
        return _lp_rows(space.p, X)
    if isinstance(space, AdjoinL1):
        v, x = space.split(X)
        return norms(space.V.space, v) + norms(space.X, x)
    if isinstance(space, AdjoinLinf):
        v, x = space.split(X)
        return np.maximum(norms(space.V, v), norms(space.X, x))
    if isinstance(space, OrderUnitNormOf):
        from .order import order_unit_norm

        if X.ndim == 1:
            return np.asarray(order_unit_norm(space.ous, X))
        return np.array([order_unit_norm(space.ous, row) for row in X])
    raise TypeError(f"unsupported space description {space!r}")


def norm(space: SpaceDesc, x) -> float:
    return float(norms(space, vec(x, space.dim)))


def dual_norm(space: SpaceDesc, f) -> float:
    """Norm of the functional ``f`` (acting by the dot product) on ``space``."""
    if not isinstance(space, Lp):
        raise TypeError("dual_norm is only available for l_p spaces")
    return float(_lp_rows(conjugate(space.p), vec(f, space.dim)))


def norming_functional(space: SpaceDesc, x) -> np.ndarray:
    """Unit functional ``f`` with ``<f, x> = ||x||``.

    Ties are broken towards the lowest index, and ``sign(0) := +1``.
    """
    if not isinstance(space, Lp):
        raise TypeError("norming_functional is only available for l_p spaces")
    x = vec(x, space.dim)
    nx = norm(space, x)
    if nx == 0.0:
        raise ValueError("the zero vector has no unique norming functional")
    sgn = np.where(x >= 0, 1.0, -1.0)
    p = space.p
    if p == 1.0:
        return sgn
    if p is INF:
        k = int(np.argmax(np.abs(x)))
        return basis(space.dim, k, sgn[k])
    # l_p duality map: f_i = sgn(x_i) |x_i|^(p-1) / ||x||^(p-1)
    return sgn * (np.abs(x) / nx) ** (p - 1.0)


def sample_unit_sphere(space: SpaceDesc, seed: int | np.random.Generator, count: int) -> list[np.ndarray]:
    """``count`` unit vectors from normalised Gaussian directions."""
    return list(sphere_batch(space, seed, count))


def sphere_batch(space: SpaceDesc, seed: int | np.random.Generator, count: int) -> np.ndarray:
    rng = np.random.default_rng(seed)
    if count <= 0:
        return np.zeros((0, space.dim))
    G = rng.standard_normal((count, space.dim))
    n = norms(space, G)
    # a Gaussian draw is nonzero with probability one; guard anyway
    bad = n == 0
    if np.any(bad):
        G[bad, 0] = 1.0
        n = norms(space, G)
    return G / n[:, None]


_INV_PHI = (math.sqrt(5.0) - 1.0) / 2.0


def minimize_convex_1d(
    g: Callable[[float], float], lo: float, hi: float, tol: float = 1e-10
) -> tuple[float, float]:
    """Golden-section search for the minimiser of a convex ``g`` on ``[lo, hi]``.

    If ``g`` is monotone on the interval the search collapses onto the
    relevant endpoint, which is then compared against the interior
    estimate explicitly.
    """
    if not lo < hi:
        raise ValueError("need lo < hi")
    if tol <= 0:
        raise ValueError("tol must be positive")

    def ev(t: float) -> float:
        val = float(g(t))
        if not math.isfinite(val):
            raise ValueError(f"non-finite objective value at {t!r}")
        return val

    a, b = lo, hi
    c = b - _INV_PHI * (b - a)
    d = a + _INV_PHI * (b - a)
    fc, fd = ev(c), ev(d)
    while b - a > tol:
        if fc <= fd:
            b, d, fd = d, c, fc
            c = b - _INV_PHI * (b - a)
            fc = ev(c)
        else:
            a, c, fc = c, d, fd
            d = a + _INV_PHI * (b - a)
            fd = ev(d)
    best = [(fc, c), (fd, d), (ev(lo), lo), (ev(hi), hi)]
    fmin, tmin = min(best, key=lambda pair: (pair[0], pair[1]))
    return tmin, fmin


def minimize_convex_1d_batch(
    g: Callable[[np.ndarray], np.ndarray], lo: np.ndarray, hi: np.ndarray, tol: float = 1e-10
) -> tuple[np.ndarray, np.ndarray]:
    """Vectorised golden-section search: ``g`` maps a vector of abscissae to
    a vector of values, one independent convex problem per entry."""
    a = np.array(lo, dtype=float)
    b = np.array(hi, dtype=float)
    c = b - _INV_PHI * (b - a)
    d = a + _INV_PHI * (b - a)
    fc, fd = g(c), g(d)
    n_iter = int(math.ceil(math.log(max(np.max(b - a), tol) / tol) / -math.log(_INV_PHI))) + 1
    for _ in range(n_iter):
        left = fc <= fd
        # left: keep [a, d]; right: keep [c, b]
        b = np.where(left, d, b)
        a = np.where(left, a, c)
        new_c = b - _INV_PHI * (b - a)
        new_d = a + _INV_PHI * (b - a)
        c_next = np.where(left, new_c, d)
        d_next = np.where(left, c, new_d)
        probe = np.where(left, new_c, new_d)
        fp = g(probe)
        fc_next = np.where(left, fp, fd)
        fd_next = np.where(left, fc, fp)
        c, d, fc, fd = c_next, d_next, fc_next, fd_next
    flo, fhi = g(np.asarray(lo, dtype=float)), g(np.asarray(hi, dtype=float))
    cand_t = np.stack([c, d, np.broadcast_to(lo, c.shape), np.broadcast_to(hi, c.shape)])
    cand_f = np.stack([fc, fd, flo, fhi])
    k = np.argmin(cand_f, axis=0)
    idx = np.arange(c.shape[0])
    return cand_t[k, idx], cand_f[k, idx]
