"""Sparse polynomial systems of degree at most two, evaluated in batches.

A term is ``coef * X[a] * X[b]`` where an index of ``-1`` stands for the
constant 1, so ``(-1, -1)`` is a constant, ``(-1, j)`` linear and ``(i, j)``
quadratic.  All evaluation routines take a batch ``X`` of shape
``(P, n_vars)`` and work row-wise.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np


def _mono(a: int, b: int) -> tuple[int, int]:
    return (a, b) if a <= b else (b, a)


@dataclass
class QuadraticSystem:
    n_vars: int
    equations: list[dict[tuple[int, int], complex]]
    names: list[str] = field(default_factory=list)

    def __post_init__(self):
        eqs = []
        for eq in self.equations:
            clean: dict[tuple[int, int], complex] = {}
            for (a, b), c in eq.items():
                if not (-1 <= a < self.n_vars and -1 <= b < self.n_vars):
                    raise ValueError(f"variable index out of range in term {(a, b)}")
                m = _mono(a, b)
                clean[m] = clean.get(m, 0) + complex(c)
            eqs.append({m: c for m, c in clean.items() if c != 0})
        self.equations = eqs
        if not self.names:
            self.names = [f"x{i}" for i in range(self.n_vars)]
        self._compiled = None

    @property
    def n_eqs(self) -> int:
        return len(self.equations)

    def is_square(self) -> bool:
        return self.n_eqs == self.n_vars

    def degrees(self) -> list[int]:
        return [max((int(a >= 0) + int(b >= 0) for a, b in eq), default=0) for eq in self.equations]

    def total_degree(self) -> int:
        return int(np.prod(self.degrees(), dtype=object))

    def group_degrees(self, groups: list[list[int]]) -> np.ndarray:
        """Matrix ``d[i, k]``: degree of equation ``i`` in the variables of group ``k``."""
        owner = np.full(self.n_vars, -1)
        for k, grp in enumerate(groups):
            owner[grp] = k
        if (owner < 0).any():
            raise ValueError("variable groups must cover every variable")
        d = np.zeros((self.n_eqs, len(groups)), dtype=int)
        for i, eq in enumerate(self.equations):
            for a, b in eq:
                cnt = np.zeros(len(groups), dtype=int)
                for x in (a, b):
                    if x >= 0:
                        cnt[owner[x]] += 1
                d[i] = np.maximum(d[i], cnt)
        return d

    # -- evaluation -----------------------------------------------------------

    def _compile(self):
        if self._compiled is None:
            self._compiled = _Compiled(self)
        return self._compiled

    def evaluate(self, X: np.ndarray) -> np.ndarray:
        return self._compile().evaluate(np.asarray(X, dtype=complex))

    def jacobian(self, X: np.ndarray) -> np.ndarray:
        return self._compile().jacobian(np.asarray(X, dtype=complex))

    # -- transformations ------------------------------------------------------

    def substitute(self, values: dict[int, complex]) -> tuple["QuadraticSystem", list[int]]:
        """Replace variables by constants; returns the system in the kept variables."""
        keep = [i for i in range(self.n_vars) if i not in values]
        new_index = {old: k for k, old in enumerate(keep)}
        new_index[-1] = -1
        eqs = []
        for eq in self.equations:
            out: dict[tuple[int, int], complex] = {}
            for (a, b), c in eq.items():
                factors = []
                for x in (a, b):
                    if x in values:
                        c = c * values[x]
                        factors.append(-1)
                    else:
                        factors.append(new_index[x])
                m = _mono(*factors)
                out[m] = out.get(m, 0) + c
            eqs.append(out)
        return QuadraticSystem(len(keep), eqs, [self.names[i] for i in keep]), keep


def eliminate_pinned(system: QuadraticSystem) -> tuple[QuadraticSystem, np.ndarray, dict[int, complex]]:
    """Solve away equations of the form ``c1 * x + c0 = 0`` one variable at a time.

    Returns the reduced system, the kept variable indices and the eliminated
    values.  Those equations are dropped, so a square system stays square.
    """
    values: dict[int, complex] = {}
    sys_ = system
    kept = np.arange(system.n_vars)
    while True:
        hit = None
        for i, eq in enumerate(sys_.equations):
            lin = [m for m in eq if m != (-1, -1)]
            if len(lin) == 1 and lin[0][0] == -1:
                hit = i, lin[0][1], eq[lin[0]], eq.get((-1, -1), 0)
                break
        if hit is None:
            return sys_, kept, values
        i, var, c1, c0 = hit
        values[int(kept[var])] = -c0 / c1
        eqs = [e for k, e in enumerate(sys_.equations) if k != i]
        sys_, keep = QuadraticSystem(sys_.n_vars, eqs, sys_.names).substitute({var: -c0 / c1})
        kept = kept[keep]


class _Compiled:
    """Index arrays for batched evaluation of a :class:`QuadraticSystem`."""

    def __init__(self, s: QuadraticSystem):
        eq, a, b, coef = [], [], [], []
        for i, terms in enumerate(s.equations):
            if not terms:
                raise ValueError(f"equation {i} is identically zero")
            for (x, y), c in sorted(terms.items()):
                eq.append(i)
                a.append(x)
                b.append(y)
                coef.append(c)
        V = s.n_vars
        self.n_vars, self.n_eqs = V, s.n_eqs
        one = V
        self.a = np.where(np.array(a) < 0, one, a)
        self.b = np.where(np.array(b) < 0, one, b)
        self.coef = np.array(coef, dtype=complex)
        eq = np.array(eq)
        self.starts = np.flatnonzero(np.r_[True, eq[1:] != eq[:-1]])

        # Jacobian contributions: d/dX[var] of coef*X[a]*X[b]
        pos, other, cc = [], [], []
        for t in range(len(eq)):
            if self.a[t] != one:
                pos.append(eq[t] * V + self.a[t])
                other.append(self.b[t])
                cc.append(self.coef[t])
            if self.b[t] != one:
                pos.append(eq[t] * V + self.b[t])
                other.append(self.a[t])
                cc.append(self.coef[t])
        order = np.argsort(pos, kind="stable")
        pos = np.array(pos, dtype=int)[order]
        self.j_other = np.array(other, dtype=int)[order]
        self.j_coef = np.array(cc, dtype=complex)[order]
        self.j_starts = np.flatnonzero(np.r_[True, pos[1:] != pos[:-1]]) if len(pos) else np.array([], int)
        self.j_pos = pos[self.j_starts] if len(pos) else np.array([], int)

    def _aug(self, X):
        return np.concatenate([X, np.ones((X.shape[0], 1), dtype=complex)], axis=1)

    def evaluate(self, X):
        Xa = self._aug(X)
        vals = self.coef * Xa[:, self.a] * Xa[:, self.b]
        return np.add.reduceat(vals, self.starts, axis=1)

    def jacobian(self, X):
        P = X.shape[0]
        J = np.zeros((P, self.n_eqs * self.n_vars), dtype=complex)
        if len(self.j_pos):
            Xa = self._aug(X)
            contrib = self.j_coef * Xa[:, self.j_other]
            J[:, self.j_pos] = np.add.reduceat(contrib, self.j_starts, axis=1)
        return J.reshape(P, self.n_eqs, self.n_vars)
