"""Projective homotopy continuation for square quadratic systems.

Paths of ``H(X, t) = (1 - t) * gamma * G(X) + t * F(X)`` are tracked from
``t = 0`` to ``t = 1`` in projective coordinates: every variable group gets
a homogenizing coordinate and a random affine patch, so paths heading to
infinity stay bounded.  Tracking is batched over all live paths.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass, field
from itertools import product

import numpy as np
from scipy.spatial import cKDTree

from .polysys import QuadraticSystem, _mono

log = logging.getLogger(__name__)

ACTIVE, DONE, STALLED, DIVERGED = 0, 1, 2, 3


class HomotopyError(RuntimeError):
    pass


@dataclass
class TrackerOptions:
    tol: float = 1e-10  # endpoint refinement
    track_tol: float = 1e-7  # estimated corrector error while tracking
    initial_step: float = 0.02
    max_step: float = 0.1
    min_step: float = 1e-14
    max_steps: int = 10_000
    max_corrector: int = 3
    batch_size: int = 4096
    endgame_eps: float = 1e-8  # paths stop at t = 1 - endgame_eps
    cut_t: float = 0.99  # beyond this, paths with a vanishing homogenizer are dropped
    cut_ratio: float = 1e-12
    infinity_tol: float = 1e-3
    cond_max: float = 1e10
    max_drift: float = 1e-3  # relative distance Newton may move an endgame point
    dedup_tol: float = 1e-6
    path_retries: int = 2


@dataclass
class Homotopy:
    target: QuadraticSystem  # homogenized, n_eqs rows in n_vars + n_groups variables
    start: QuadraticSystem
    patch: QuadraticSystem
    gamma: complex
    groups: list[list[int]]
    n_affine: int

    def __post_init__(self):
        self._merge()

    @property
    def dim(self) -> int:
        return self.target.n_vars

    def _merge(self):
        """Dense symmetric coefficient tensors for start and target rows.

        Row ``i`` of either system is ``Xa^T Q_i Xa`` with ``Xa = (X, 1)``, so
        one matrix product yields values and Jacobians of both systems for a
        whole batch.  Patch rows carry the same coefficients in both, which
        only rescales them by ``(1 - t) * gamma + t``.
        """
        V = self.dim
        neq = self.target.n_eqs + self.patch.n_eqs
        Q = np.zeros((2, neq, V + 1, V + 1), dtype=complex)
        rows = [(self.start, (0,), 0), (self.target, (1,), 0), (self.patch, (0, 1), self.target.n_eqs)]
        for sys_, slots, off in rows:
            for i, eq in enumerate(sys_.equations):
                for (x, y), c in eq.items():
                    x, y = (V if x < 0 else x), (V if y < 0 else y)
                    for k in slots:
                        Q[k, off + i, x, y] += c / 2
                        Q[k, off + i, y, x] += c / 2
        self._neq = neq
        self._Q = Q.reshape(2 * neq, V + 1, V + 1).transpose(1, 0, 2).reshape(V + 1, -1)

    def _aug(self, X):
        return np.concatenate([X, np.ones((X.shape[0], 1), dtype=complex)], axis=1)

    def _parts(self, X):
        Xa = self._aug(X)
        Y = (Xa @ self._Q).reshape(X.shape[0], 2, self._neq, self.dim + 1)
        H = np.einsum("pkij,pj->pki", Y, Xa)
        return H, Y[..., :-1]

    def _mix(self, t):
        return (1 - t) * self.gamma, t.astype(complex)

    def evaluate(self, X, t):
        H, _ = self._parts(X)
        g, f = self._mix(t)
        return g[:, None] * H[:, 0] + f[:, None] * H[:, 1]

    def evaluate_jacobian(self, X, t):
        H, Y = self._parts(X)
        g, f = self._mix(t)
        Hv = g[:, None] * H[:, 0] + f[:, None] * H[:, 1]
        J = 2 * (g[:, None, None] * Y[:, 0] + f[:, None, None] * Y[:, 1])
        return Hv, J

    def jacobian(self, X, t):
        return self.evaluate_jacobian(X, t)[1]

    def dt(self, X):
        H, _ = self._parts(X)
        return H[:, 1] - self.gamma * H[:, 0]

    def dehomogenize(self, X):
        x = np.empty((X.shape[0], self.n_affine), dtype=complex)
        for k, grp in enumerate(self.groups):
            x[:, grp] = X[:, grp] / X[:, [self.n_affine + k]]
        return x

    def infinity_ratio(self, X):
        """Smallest ``|h_k| / |X_k|`` over the groups of each row."""
        ratios = []
        for k, grp in enumerate(self.groups):
            h = np.abs(X[:, self.n_affine + k])
            ratios.append(h / np.linalg.norm(X[:, grp + [self.n_affine + k]], axis=1))
        return np.min(ratios, axis=0)


# -- start systems ------------------------------------------------------------


def _homogenize(system: QuadraticSystem, groups, degs) -> QuadraticSystem:
    N = system.n_vars
    owner = np.empty(N, dtype=int)
    for k, grp in enumerate(groups):
        owner[grp] = k
    eqs = []
    for i, eq in enumerate(system.equations):
        out: dict = {}
        for (a, b), c in eq.items():
            have = np.zeros(len(groups), dtype=int)
            factors = [x for x in (a, b) if x >= 0]
            for x in factors:
                have[owner[x]] += 1
            for k in range(len(groups)):
                factors += [N + k] * int(degs[i, k] - have[k])
            if len(factors) > 2:
                raise HomotopyError("homogenized system leaves degree two; use coarser groups")
            factors += [-1] * (2 - len(factors))
            m = _mono(*factors)
            out[m] = out.get(m, 0) + c
        eqs.append(out)
    names = system.names + [f"h{k}" for k in range(len(groups))]
    return QuadraticSystem(N + len(groups), eqs, names)


def _product(forms: list[dict[int, complex]]) -> dict:
    if len(forms) == 1:
        return {(-1, v): c for v, c in forms[0].items()}
    f, g = forms
    out: dict = {}
    for a, ca in f.items():
        for b, cb in g.items():
            m = _mono(a, b)
            out[m] = out.get(m, 0) + ca * cb
    return out


def _random_complex(rng, size):
    z = rng.standard_normal(size) + 1j * rng.standard_normal(size)
    return z / np.abs(z)


def build_homotopy(system: QuadraticSystem, groups: list[list[int]] | None, rng,
                   gamma: complex | None = None):
    """Create the projective homotopy and a generator of start-solution chunks.

    ``groups=None`` selects the total-degree start system
    ``prod_r (x_i - w^r h)``; otherwise a linear-product start system
    respecting the multi-homogeneous structure of ``groups`` is used.
    """
    if not system.is_square():
        raise HomotopyError(f"system is not square: {system.n_eqs} equations, {system.n_vars} unknowns")
    N = system.n_vars
    total = groups is None
    if total:
        groups = [list(range(N))]
    groups = [list(map(int, g)) for g in groups]
    m = len(groups)
    degs = system.group_degrees(groups)
    if (degs.sum(axis=1) > 2).any():
        raise HomotopyError("each equation may have total multi-degree at most two")
    if (degs.sum(axis=1) == 0).any():
        raise HomotopyError("system contains a constant equation")
    target = _homogenize(system, groups, degs)

    patch_vecs = [_random_complex(rng, len(g) + 1) for g in groups]
    patch_eqs = []
    for k, grp in enumerate(groups):
        eq = {(-1, v): c for v, c in zip(grp + [N + k], patch_vecs[k])}
        eq[(-1, -1)] = -1
        patch_eqs.append(eq)
    patch = QuadraticSystem(N + m, patch_eqs)

    # factors[i] = list of (group, linear form)
    factors: list[list[tuple[int, dict]]] = []
    for i in range(N):
        fi = []
        if total:
            d = int(degs[i, 0])
            for r in range(d):
                fi.append((0, {i: 1.0, N: -np.exp(2j * np.pi * r / d)}))
        else:
            for k, grp in enumerate(groups):
                for _ in range(int(degs[i, k])):
                    fi.append((k, dict(zip(grp + [N + k], _random_complex(rng, len(grp) + 1)))))
        factors.append(fi)
    start = QuadraticSystem(N + m, [_product([f for _, f in fi]) for fi in factors])
    if gamma is None:
        gamma = complex(_random_complex(rng, 1)[0])
    hom = Homotopy(target, start, patch, gamma, groups, N)
    if total:
        count = int(np.prod(degs[:, 0], dtype=object))
        chunks = lambda size: _total_degree_starts(degs[:, 0], patch_vecs[0], size)  # noqa: E731
    else:
        count = multihom_count(degs, [len(g) for g in groups])
        chunks = lambda size: _linear_product_starts(factors, groups, patch_vecs, N, size)  # noqa: E731
    return hom, count, chunks


def _total_degree_starts(d, a, size):
    N = len(d)
    roots = [np.exp(2j * np.pi * np.arange(k) / k) for k in d]
    batch = []
    for combo in product(*roots):
        batch.append(combo)
        if len(batch) == size:
            yield _td_chunk(np.array(batch), a, N)
            batch = []
    if batch:
        yield _td_chunk(np.array(batch), a, N)


def _td_chunk(x, a, N):
    h = 1.0 / (x @ a[:N] + a[N])
    return np.concatenate([x * h[:, None], h[:, None]], axis=1)


def multihom_count(degs: np.ndarray, dims: list[int]) -> int:
    """Multi-homogeneous Bezout number: coefficient extraction by recursion."""
    N = degs.shape[0]
    memo: dict = {}

    def rec(i, cap):
        if i == N:
            return 1
        key = (i, cap)
        if key in memo:
            return memo[key]
        tot = 0
        for k, d in enumerate(degs[i]):
            if d and cap[k]:
                c = list(cap)
                c[k] -= 1
                tot += int(d) * rec(i + 1, tuple(c))
        memo[key] = tot
        return tot

    return rec(0, tuple(dims))


def _linear_product_starts(factors, groups, patch_vecs, N, size):
    m = len(groups)
    dims = [len(g) for g in groups]
    cache: dict = {}

    def group_solution(k, chosen):
        key = (k, chosen)
        if key not in cache:
            cols = groups[k] + [N + k]
            A = np.zeros((len(cols), len(cols)), dtype=complex)
            rhs = np.zeros(len(cols), dtype=complex)
            for row, (i, r) in enumerate(chosen):
                form = factors[i][r][1]
                A[row] = [form.get(c, 0) for c in cols]
            A[-1] = patch_vecs[k]
            rhs[-1] = 1
            cache[key] = np.linalg.solve(A, rhs)
        return cache[key]

    batch = []

    def emit(assign):
        X = np.empty(N + m, dtype=complex)
        per_group = [[] for _ in range(m)]
        for i, r in enumerate(assign):
            per_group[factors[i][r][0]].append((i, r))
        for k in range(m):
            sol = group_solution(k, tuple(per_group[k]))
            X[groups[k]] = sol[:-1]
            X[N + k] = sol[-1]
        return X

    def assignments(i, cap, assign):
        if i == N:
            yield assign
            return
        for r, (k, _) in enumerate(factors[i]):
            if cap[k]:
                cap[k] -= 1
                assign.append(r)
                yield from assignments(i + 1, cap, assign)
                assign.pop()
                cap[k] += 1

    for assign in assignments(0, list(dims), []):
        batch.append(emit(assign))
        if len(batch) == size:
            yield np.array(batch)
            batch = []
    if batch:
        yield np.array(batch)


# -- tracking -----------------------------------------------------------------


def _solve(J, rhs):
    try:
        return np.linalg.solve(J, rhs[..., None])[..., 0]
    except np.linalg.LinAlgError:
        out = np.full(rhs.shape, np.nan, dtype=complex)
        for p in range(J.shape[0]):
            try:
                out[p] = np.linalg.solve(J[p], rhs[p])
            except np.linalg.LinAlgError:
                pass
        return out


def _rel(d, x):
    return np.linalg.norm(d, axis=1) / (1 + np.linalg.norm(x, axis=1))


@dataclass
class TrackResult:
    X: np.ndarray
    t: np.ndarray
    status: np.ndarray
    steps: np.ndarray


def track(hom: Homotopy, X0: np.ndarray, opts: TrackerOptions, max_step: float | None = None) -> TrackResult:
    """Euler predictor, Newton corrector, adaptive step; all paths at once.

    Paths run to ``t = 1 - endgame_eps``.  A step is accepted when the
    corrections contract and the Newton error estimate ``r_k**2 / r_{k-1}``
    drops below ``track_tol``.
    """
    P = X0.shape[0]
    max_step = opts.max_step if max_step is None else max_step
    t_end = 1.0 - opts.endgame_eps
    X = X0.astype(complex).copy()
    t = np.zeros(P)
    dt = np.full(P, min(opts.initial_step, max_step))
    streak = np.zeros(P, dtype=int)
    steps = np.zeros(P, dtype=int)
    status = np.full(P, ACTIVE)
    while True:
        idx = np.flatnonzero(status == ACTIVE)
        if not len(idx):
            break
        x, tt = X[idx], t[idx]
        last = dt[idx] >= t_end - tt
        h = np.where(last, t_end - tt, dt[idx])
        t1 = np.where(last, t_end, tt + h)
        xp = x + h[:, None] * _solve(hom.jacobian(x, tt), -hom.dt(x))
        ok = np.isfinite(xp).all(axis=1)
        prev = np.full(len(idx), np.inf)
        conv = np.zeros(len(idx), dtype=bool)
        for k in range(opts.max_corrector):
            Hv, Jv = hom.evaluate_jacobian(xp, t1)
            d = _solve(Jv, -Hv)
            ok &= np.isfinite(d).all(axis=1)
            d = np.where(ok[:, None], d, 0)
            xp = xp + d
            r = _rel(d, xp)
            est = r * r / np.where(np.isfinite(prev), np.maximum(prev, 1e-300), 1.0)
            # contraction guards against jumping to a neighbouring path
            ok &= conv | (r <= 0.5 * prev) | (r < opts.track_tol)
            conv |= (r < opts.track_tol) | ((k > 0) & (est < opts.track_tol))
            prev = np.where(conv, prev, r)
        acc = ok & conv
        steps[idx] += 1
        a, rj = idx[acc], idx[~acc]
        X[a] = xp[acc]
        t[a] = t1[acc]
        streak[a] += 1
        grow = a[streak[a] >= 2]
        dt[grow] = np.minimum(2 * dt[grow], max_step)
        streak[grow] = 0
        streak[rj] = 0
        dt[rj] *= 0.5
        status[a[last[acc]]] = DONE
        late = a[(t[a] > opts.cut_t) & (status[a] == ACTIVE)]
        if len(late):
            status[late[hom.infinity_ratio(X[late]) < opts.cut_ratio]] = DIVERGED
        live = idx[status[idx] == ACTIVE]
        status[live[(dt[live] < opts.min_step) | (steps[live] >= opts.max_steps)]] = STALLED
    return TrackResult(X, t, status, steps)


# -- endpoint classification ---------------------------------------------------

FINITE, SINGULAR, INFINITE, UNCLASSIFIED = "finite", "singular", "infinite", "failed"


def _newton_refine(system: QuadraticSystem, x, iters=6):
    x0 = x
    for _ in range(iters):
        d = _solve(system.jacobian(x), -system.evaluate(x))
        x = np.where(np.isfinite(d), x + d, x)
    last = _rel(_solve(system.jacobian(x), -system.evaluate(x)), x)
    return x, _rel(x - x0, x), last


def classify(system: QuadraticSystem, hom: Homotopy, res: TrackResult, opts: TrackerOptions):
    """Label each endpoint finite / singular / infinite / failed.

    Finite means Newton on the affine target converges from the endgame
    point to a nearby well-conditioned solution.  Paths that stalled before
    the endgame are "failed", unless they are already numerically at
    infinity close to ``t = 1``.  Returns labels and refined affine points.
    """
    P = res.X.shape[0]
    labels = np.full(P, UNCLASSIFIED, dtype=object)
    ratio = hom.infinity_ratio(res.X)
    done = res.status == DONE
    with np.errstate(all="ignore"):
        x = hom.dehomogenize(res.X)
        xr = x.copy()
        cand = np.flatnonzero(done & np.isfinite(x).all(axis=1) & (ratio > opts.infinity_tol))
        if len(cand):
            xr_c, moved, last = _newton_refine(system, x[cand])
            cond = np.linalg.cond(system.jacobian(xr_c))
            good = (moved < opts.max_drift) & (last < opts.tol) & (cond < opts.cond_max)
            xr[cand] = xr_c
            labels[cand] = np.where(good, FINITE, SINGULAR)
    labels[done & (labels == UNCLASSIFIED)] = INFINITE
    labels[res.status == DIVERGED] = INFINITE
    # steps collapse close to t = 1 on paths already numerically at infinity
    stalled_far = (res.status == STALLED) & (1 - res.t < 1e-4) & (ratio < 1e-8)
    labels[stalled_far] = INFINITE
    return labels, xr


def cluster(points: np.ndarray, tol: float) -> np.ndarray:
    """Cluster id for each row; rows within ``tol * (1 + |x|)`` share an id."""
    n = points.shape[0]
    if n == 0:
        return np.zeros(0, dtype=int)
    emb = np.concatenate([points.real, points.imag], axis=1)
    scale = 1 + np.median(np.linalg.norm(points, axis=1))
    parent = np.arange(n)

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for i, j in cKDTree(emb).query_pairs(tol * scale):
        ri, rj = find(i), find(j)
        if ri != rj:
            parent[max(ri, rj)] = min(ri, rj)
    roots = np.array([find(i) for i in range(n)])
    _, ids = np.unique(roots, return_inverse=True)
    return ids


@dataclass
class SolveResult:
    solutions: np.ndarray  # distinct finite nonsingular solutions (affine)
    paths: int
    labels: np.ndarray
    steps: int
    retracked: int = 0
    duplicates: int = 0
    gamma: complex = 0j
    notes: list[str] = field(default_factory=list)

    def count(self, label) -> int:
        return int(np.sum(self.labels == label))


def solve(system: QuadraticSystem, groups=None, rng=None, opts: TrackerOptions | None = None,
          gamma: complex | None = None) -> SolveResult:
    """Track every start path and return the distinct nonsingular finite solutions.

    Paths that fail, end at a singular point, or land on an already-found
    solution are tracked again with smaller maximal steps (up to ``opts.path_retries`` times).
    """
    opts = opts or TrackerOptions()
    rng = np.random.default_rng(rng)
    hom, count, chunks = build_homotopy(system, groups, rng, gamma)
    log.debug("tracking %d paths in %d variables", count, hom.dim)
    starts, results = [], []
    for X0 in chunks(opts.batch_size):
        starts.append(X0)
        results.append(track(hom, X0, opts))
    X0 = np.concatenate(starts)
    res = TrackResult(*(np.concatenate([getattr(r, f) for r in results])
                        for f in ("X", "t", "status", "steps")))
    labels, pts = classify(system, hom, res, opts)
    total_steps = int(res.steps.sum())
    retracked = 0
    dup_paths = np.zeros(0, dtype=int)
    for attempt in range(opts.path_retries + 1):
        fin = np.flatnonzero(labels == FINITE)
        ids = cluster(pts[fin], opts.dedup_tol)
        counts = np.bincount(ids) if len(ids) else np.zeros(0, int)
        dup_paths = fin[counts[ids] > 1] if len(ids) else np.zeros(0, int)
        bad = np.union1d(np.flatnonzero((labels == UNCLASSIFIED) | (labels == SINGULAR)), dup_paths)
        if not len(bad) or attempt == opts.path_retries:
            break
        retracked += len(bad)
        scale = 0.25 ** (attempt + 1)
        sub = track(hom, X0[bad], opts, max_step=opts.max_step * scale)
        total_steps += int(sub.steps.sum())
        sub_labels, sub_pts = classify(system, hom, sub, opts)
        labels[bad] = sub_labels
        pts[bad] = sub_pts
    fin = np.flatnonzero(labels == FINITE)
    ids = cluster(pts[fin], opts.dedup_tol)
    sols = np.array([pts[fin][ids == c][0] for c in range(ids.max() + 1)]) if len(ids) else \
        np.zeros((0, system.n_vars), dtype=complex)
    return SolveResult(sols, count, labels, total_steps, retracked, len(dup_paths), hom.gamma)
