"""Deciding and falsifying the norming-order-unit property in l_p^n.

A unit vector ``e`` is a norming order unit when every ``x`` admitting some
``lam`` with ``||2x - lam e|| <= lam`` also satisfies
``||2x - ||x|| e|| <= ||x||``.  A :class:`Witness` is an ``x`` for which the
first inequality is feasible and the second fails by more than ``DELTA``.
"""

from __future__ import annotations

import enum
import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .norms import (
    DELTA,
    EPS,
    INF,
    Lp,
    basis,
    minimize_convex_1d,
    minimize_convex_1d_batch,
    norm,
    norms,
    sphere_batch,
    vec,
)
from .report import Report

GSS_TOL = 1e-10
TAIL_DOUBLINGS = 3
CHUNK = 2048
MAX_REFINEMENTS = 16


class WitnessSource(enum.Enum):
    PAPER_CONSTRUCTION = "PaperConstruction"
    RANDOM_SEARCH = "RandomSearch"
    REFINED = "Refined"


class Status(enum.Enum):
    VERIFIED_EXACT = "VerifiedExact"
    VERIFIED_STATISTICAL = "VerifiedStatistical"
    FALSIFIED = "Falsified"


@dataclass(frozen=True, eq=False)
class Witness:
    x: np.ndarray
    lambda_star: float
    antecedent_value: float
    consequent_value: float
    source: WitnessSource

    def to_dict(self) -> dict:
        return {
            "x": self.x,
            "lambda_star": self.lambda_star,
            "antecedent_value": self.antecedent_value,
            "consequent_value": self.consequent_value,
            "source": self.source,
        }


@dataclass(frozen=True, eq=False)
class NouVerdict:
    status: Status
    candidate: np.ndarray
    samples: int = 0
    witness: Optional[Witness] = None

    def to_dict(self) -> dict:
        d = {"status": self.status, "candidate": self.candidate}
        if self.status is Status.VERIFIED_STATISTICAL:
            d["samples"] = self.samples
        if self.witness is not None:
            d["witness"] = self.witness
        return d


def _require_unit(space, e) -> np.ndarray:
    e = vec(e, space.dim)
    if abs(norm(space, e) - 1.0) > 1e-12:
        raise ValueError("candidate unit must have norm one")
    return e


def _sign(v: np.ndarray) -> np.ndarray:
    return np.where(v >= 0, 1.0, -1.0)


# ---------------------------------------------------------------------------
# the two halves of the defining implication
# ---------------------------------------------------------------------------


def antecedent_holds(space, e, x) -> tuple[bool, float]:
    """Is ``||2x - lam e|| <= lam`` feasible?  Returns ``(holds, lam*)``.

    ``lam -> ||2x - lam e|| - lam`` is convex, so golden-section search on
    ``[0, max(10, 10||x||)]`` finds its infimum; the right end is doubled
    a few times when the minimiser sits on it (the infimum can be
    approached only as ``lam -> inf``).  No separate ``lam >= ||x||``
    constraint is needed: ``2||x|| <= ||2x - lam e|| + lam`` forces it.
    """
    e = vec(e, space.dim)
    x = vec(x, space.dim)
    nx = norm(space, x)
    hi = max(10.0, 10.0 * nx)

    def g(lam: float) -> float:
        return norm(space, 2.0 * x - lam * e) - lam

    lam, val = minimize_convex_1d(g, 0.0, hi, GSS_TOL)
    for _ in range(TAIL_DOUBLINGS):
        if lam < hi * (1.0 - 1e-9):
            break
        hi *= 2.0
        lam2, val2 = minimize_convex_1d(g, 0.0, hi, GSS_TOL)
        if val2 <= val:
            lam, val = lam2, val2
    holds = val <= EPS
    if holds and lam < nx:
        lam = nx
    return holds, float(lam)


def antecedent_batch(space, e, X: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Row-wise ``min_lam ||2x - lam e|| - lam`` and the minimising ``lam``."""
    X = np.asarray(X, dtype=float)
    m = X.shape[0]
    if m == 0:
        return np.zeros(0), np.zeros(0)
    hi = np.maximum(10.0, 10.0 * norms(space, X))
    best_val = np.full(m, np.inf)
    best_lam = np.zeros(m)
    active = np.arange(m)
    for _ in range(TAIL_DOUBLINGS + 1):
        Xa = 2.0 * X[active]
        lam, val = minimize_convex_1d_batch(
            lambda t: norms(space, Xa - t[:, None] * e) - t,
            np.zeros(len(active)),
            hi[active],
            GSS_TOL,
        )
        better = val <= best_val[active]
        best_val[active[better]] = val[better]
        best_lam[active[better]] = lam[better]
        at_end = lam >= hi[active] * (1.0 - 1e-9)
        active = active[at_end]
        if len(active) == 0:
            break
        hi[active] *= 2.0
    return best_val, best_lam


def consequent_holds(space, e, x) -> tuple[bool, float]:
    """Does ``||2x - ||x|| e|| <= ||x||`` hold?  Returns ``(holds, slack)``
    where ``slack = ||2x - ||x|| e|| - ||x||``."""
    e = vec(e, space.dim)
    x = vec(x, space.dim)
    nx = norm(space, x)
    val = norm(space, 2.0 * x - nx * e) - nx
    return val <= EPS, float(val)


def consequent_batch(space, e, X: np.ndarray) -> np.ndarray:
    nx = norms(space, X)
    return norms(space, 2.0 * X - nx[:, None] * e) - nx


def _fsum_lp(p, v) -> float:
    a = [abs(float(t)) for t in v]
    if not a:
        return 0.0
    if p is INF:
        return max(a)
    return math.fsum(t**p for t in a) ** (1.0 / p)


def revalidate(space: Lp, e, w: Witness) -> tuple[float, float]:
    """Recompute ``(antecedent, consequent)`` for a witness from scratch with
    compensated summation, independently of :func:`norms`."""
    p = space.p
    x = [float(t) for t in w.x]
    ee = [float(t) for t in e]
    lam = float(w.lambda_star)
    ante = _fsum_lp(p, [2 * a - lam * b for a, b in zip(x, ee)]) - lam
    nx = _fsum_lp(p, x)
    cons = _fsum_lp(p, [2 * a - nx * b for a, b in zip(x, ee)]) - nx
    return ante, cons


def _make_witness(space, e, x, lam, source) -> Optional[Witness]:
    x = vec(x, space.dim)
    nx = norm(space, x)
    lam = max(float(lam), nx)
    ante = norm(space, 2.0 * x - lam * e) - lam
    _, cons = consequent_holds(space, e, x)
    if ante <= EPS and cons > DELTA:
        return Witness(x, lam, float(ante), float(cons), source)
    return None


# ---------------------------------------------------------------------------
# closed forms
# ---------------------------------------------------------------------------


def paper_witness(space: Lp, e) -> Optional[Witness]:
    """Constructive counterexamples for non-units in l_inf, l_1 and l_p.

    After flipping signs so that ``e >= 0`` (a surjective isometry, which
    maps witnesses to witnesses):

    * ``l_inf``: a coordinate ``a < 1`` gives ``x = e_k``, ``lam = 2/(1+a)``.
    * ``l_1``: a coordinate ``0 < a < 1`` gives ``x = e_k``, ``lam = 2/a``.
    * ``1 < p < inf``: if ``e = e_k``, take ``x = 0.6 e_k + 0.8 e_j``; on
      ``l_2`` the boundary multiplier is ``lam = 1/0.6``, elsewhere ``lam``
      comes from the numerical search.  Otherwise probe ``x = e_k`` with
      ``lam = 2/a`` and fall back to the numerical ``lam``.

    Returns ``None`` when no construction yields a valid witness.
    """
    if not isinstance(space, Lp):
        raise TypeError("paper_witness needs an l_p space")
    e = _require_unit(space, e)
    n = space.dim
    s = _sign(e)
    a = s * e
    p = space.p
    src = WitnessSource.PAPER_CONSTRUCTION

    def emit(x, lam) -> Optional[Witness]:
        w = _make_witness(space, e, s * x, lam, src)
        return w

    if p is INF:
        for k in np.flatnonzero(a < 1.0 - DELTA):
            w = emit(basis(n, k), 2.0 / (1.0 + a[k]))
            if w is not None:
                return w
        return None
    if p == 1.0:
        for k in np.flatnonzero((a > 0) & (a < 1.0 - DELTA)):
            w = emit(basis(n, k), 2.0 / a[k])
            if w is not None:
                return w
        return None

    k = int(np.argmax(a))
    if a[k] >= 1.0 - 1e-12 and n >= 2:
        j = 1 if k == 0 else 0
        u = 0.6 * basis(n, k) + 0.8 * basis(n, j)
        if p == 2.0:
            lam = 1.0 / 0.6
        else:
            holds, lam = antecedent_holds(space, e, s * u)
            if not holds:
                return None
        return emit(u, lam)
    for k in np.flatnonzero((a > 0) & (a < 1.0 - DELTA)):
        w = emit(basis(n, k), 2.0 / a[k])
        if w is None:
            holds, lam = antecedent_holds(space, e, s * basis(n, k))
            if holds:
                w = emit(basis(n, k), lam)
        if w is not None:
            return w
    return None


def verify_exact(space: Lp, e) -> Optional[NouVerdict]:
    """Closed-form classification for l_inf (sign vectors) and l_1 (signed
    coordinate vectors).  ``None`` means "not decided here"."""
    if not isinstance(space, Lp) or not (space.p is INF or space.p == 1.0):
        return None
    e = _require_unit(space, e)
    a = np.abs(e)
    if space.p is INF:
        ok = bool(np.all(np.abs(a - 1.0) <= 1e-12))
    else:
        k = int(np.argmax(a))
        rest = np.delete(a, k)
        ok = abs(a[k] - 1.0) <= 1e-12 and bool(np.all(rest <= 1e-12))
    return NouVerdict(Status.VERIFIED_EXACT, e) if ok else None


# ---------------------------------------------------------------------------
# search
# ---------------------------------------------------------------------------


def refine(space, e, x, max_iter: int = 200) -> Optional[Witness]:
    """Coordinate hill-climbing on the consequent slack, keeping the
    antecedent feasible and ``x`` on the unit sphere."""
    e = vec(e, space.dim)
    x = vec(x, space.dim)
    x = x / norm(space, x)
    n = space.dim
    cur = float(consequent_batch(space, e, x[None, :])[0])
    step = 0.1
    for _ in range(max_iter):
        if step < 1e-7:
            break
        moves = np.vstack([x + step * np.eye(n), x - step * np.eye(n)])
        nm = norms(space, moves)
        keep = nm > 0
        moves = moves[keep] / nm[keep, None]
        vals = consequent_batch(space, e, moves)
        order = np.argsort(-vals, kind="stable")
        moved = False
        for i in order:
            if vals[i] <= cur:
                break
            ante, _ = antecedent_batch(space, e, moves[i : i + 1])
            if ante[0] <= EPS:
                x, cur, moved = moves[i], float(vals[i]), True
                break
        if cur > DELTA:
            holds, lam = antecedent_holds(space, e, x)
            if holds:
                return _make_witness(space, e, x, lam, WitnessSource.REFINED)
        if not moved:
            step *= 0.5
    return None


def falsify(space: Lp, e, seed, budget: int) -> Optional[Witness]:
    """Look for a witness: closed-form constructions first, then ``budget``
    random unit vectors, refining near misses.  Deterministic in ``seed``."""
    e = _require_unit(space, e)
    w = paper_witness(space, e)
    if w is not None:
        return w
    rng = np.random.default_rng(seed)
    refinements = 0
    done = 0
    while done < budget:
        m = min(CHUNK, budget - done)
        X = sphere_batch(space, rng, m)
        done += m
        cons = consequent_batch(space, e, X)
        cand = np.flatnonzero(cons > 0)
        if len(cand) == 0:
            continue
        ante, lams = antecedent_batch(space, e, X[cand])
        for i, c in enumerate(cand):
            if ante[i] > EPS:
                continue
            if cons[c] > DELTA:
                w = _make_witness(space, e, X[c], lams[i], WitnessSource.RANDOM_SEARCH)
                if w is not None:
                    return w
            elif refinements < MAX_REFINEMENTS:
                refinements += 1
                w = refine(space, e, X[c])
                if w is not None:
                    return w
    return None


def check_nou(space: Lp, e, seed: int = 0, budget: int = 10_000) -> NouVerdict:
    e = _require_unit(space, e)
    v = verify_exact(space, e)
    if v is not None:
        return v
    w = falsify(space, e, seed, budget)
    if w is not None:
        return NouVerdict(Status.FALSIFIED, e, witness=w)
    return NouVerdict(Status.VERIFIED_STATISTICAL, e, samples=budget)


# ---------------------------------------------------------------------------
# l_p sweep
# ---------------------------------------------------------------------------


def _sweep_task(args) -> dict:
    p, dim, e, seed, budget = args
    space = Lp(dim, p)
    w = falsify(space, e, seed, budget)
    return {"candidate": e, "witness": w, "survived": w is None}


def default_workers() -> int:
    env = os.environ.get("OUL_THREADS")
    if env:
        return max(1, int(env))
    return os.cpu_count() or 1


def p_sweep(
    p_grid: Sequence[float],
    dim: int,
    candidates_per_p: int,
    budget: int,
    seed: int,
    workers: int | None = None,
) -> Report:
    """Try to falsify every coordinate vector and ``candidates_per_p`` random
    unit candidates in each ``l_p^dim``.

    Survivors are listed for inspection.  Zero survivors is evidence that
    ``l_p`` has no norming order unit, not a proof.
    """
    rep = Report(
        "p_sweep",
        "computational support for: l_p (1 < p < inf) has no norming order unit",
        sampled=True,
    )
    rep.notes.append("conjecture evidence: sampled search, not a theorem")
    ps = [float(p) for p in p_grid]
    for p in ps:
        if not (1.0 < p < math.inf):
            raise ValueError(f"sweep exponents must lie in (1, inf), got {p!r}")
    root = np.random.default_rng(seed).bit_generator.seed_seq
    tasks, owners = [], []
    for p, ss in zip(ps, root.spawn(len(ps))):
        space = Lp(dim, p)
        cand_ss, *trial_ss = ss.spawn(dim + candidates_per_p + 1)
        cands = [basis(dim, k) for k in range(dim)]
        cands += list(sphere_batch(space, np.random.default_rng(cand_ss), candidates_per_p))
        for e, tss in zip(cands, trial_ss):
            tasks.append((p, dim, e, np.random.default_rng(tss), budget))
            owners.append(p)
    workers = default_workers() if workers is None else workers
    if workers > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_sweep_task, tasks, chunksize=1))
    else:
        results = [_sweep_task(t) for t in tasks]

    rows = []
    for p in ps:
        mine = [r for r, o in zip(results, owners) if o == p]
        survivors = [r["candidate"] for r in mine if r["survived"]]
        rows.append(
            {
                "p": p,
                "dim": dim,
                "candidates": len(mine),
                "witnesses": len(mine) - len(survivors),
                "survivors": len(survivors),
                "survivor_vectors": survivors,
                "verdict": "no candidate survived" if not survivors else "survivors need inspection",
                "results": mine,
            }
        )
    rep.data.update(budget=budget, seed=seed, per_p=rows)
    rep.passed = all(r["survivors"] == 0 for r in rows)
    return rep
