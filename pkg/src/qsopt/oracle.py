"""Value-oracle contract for set functions, marginal gains, and call accounting.

An oracle exposes F through ``value`` plus optional fast marginal paths and an
optional cursor factory. A cursor is an incremental view anchored at a working
set: it answers add/drop marginal queries against that set and can be moved one
element at a time, which is what the reduction algorithms need to stay cheap at
n in the thousands.
"""

from __future__ import annotations

from typing import Callable, Optional

import numpy as np

from .sets import GroundSet, SubsetBits

EvalFn = Callable[[SubsetBits], float]
MarginalFn = Callable[[int, SubsetBits], float]

#: Relative tolerance for comparing two computations of the same quantity,
#: with an absolute floor for values near zero.
REL_TOL = 1e-9
ABS_TOL = 1e-12


def values_close(a: float, b: float, rel: float = REL_TOL, abs_floor: float = ABS_TOL) -> bool:
    return abs(a - b) <= max(rel * max(abs(a), abs(b)), abs_floor)


class Cursor:
    """Incremental view of F anchored at a working set.

    The default implementation answers every query with fresh evaluations;
    benchmark families install O(1)-update replacements.
    """

    def __init__(self, oracle: "SetFunctionOracle", start: SubsetBits):
        self._oracle = oracle
        self._current = start
        self._value = oracle.value(start)

    def members(self) -> SubsetBits:
        return self._current

    def value(self) -> float:
        return self._value

    def add_marginal(self, u: int) -> float:
        """F(u | X) for u outside the anchored set X."""
        return self._oracle.value(self._current.add(u)) - self._value

    def drop_marginal(self, d: int) -> float:
        """F(d | X - d) = F(X) - F(X - d) for d inside the anchored set X."""
        return self._value - self._oracle.value(self._current.remove(d))

    def add(self, u: int) -> None:
        self._current = self._current.add(u)
        self._value = self._oracle.value(self._current)

    def remove(self, d: int) -> None:
        self._current = self._current.remove(d)
        self._value = self._oracle.value(self._current)


class SetFunctionOracle:
    """Evaluation access to F: 2^N -> R.

    ``fast_marginal(i, X)`` must equal ``value(X + i) - value(X)`` and
    ``fast_drop_marginal(d, X)`` must equal ``value(X) - value(X - d)``,
    both within relative 1e-9; evaluation must be deterministic.
    """

    def __init__(
        self,
        ground: GroundSet,
        eval_fn: EvalFn,
        *,
        fast_marginal: Optional[MarginalFn] = None,
        fast_drop_marginal: Optional[MarginalFn] = None,
        cursor_factory: Optional[Callable[["SetFunctionOracle", SubsetBits], Cursor]] = None,
        dense_table: Optional[np.ndarray] = None,
        params: Optional[dict] = None,
        name: str = "",
    ):
        self.ground = ground
        self._eval = eval_fn
        self._fast_marginal = fast_marginal
        self._fast_drop = fast_drop_marginal
        self._cursor_factory = cursor_factory
        self.dense_table = dense_table
        self.params = params or {}
        self.name = name

    @property
    def n(self) -> int:
        return self.ground.n

    def value(self, x: SubsetBits) -> float:
        return float(self._eval(x))

    @property
    def has_fast_marginal(self) -> bool:
        return self._fast_marginal is not None

    def marginal(self, i: int, x: SubsetBits) -> float:
        """Marginal gain F(i | X) = F(X + i) - F(X); requires i not in X."""
        if x.contains(i):
            raise ValueError(f"element {i} already in the set")
        if self._fast_marginal is not None:
            return float(self._fast_marginal(i, x))
        return self.value(x.add(i)) - self.value(x)

    def drop_marginal(self, d: int, x: SubsetBits) -> float:
        """F(d | X - d) = F(X) - F(X - d); requires d in X."""
        if not x.contains(d):
            raise ValueError(f"element {d} not in the set")
        if self._fast_drop is not None:
            return float(self._fast_drop(d, x))
        return self.value(x) - self.value(x.remove(d))

    def cursor(self, start: SubsetBits) -> Cursor:
        if self._cursor_factory is not None:
            return self._cursor_factory(self, start)
        return Cursor(self, start)


def marginal_gain(oracle, i: int, x: SubsetBits) -> float:
    return oracle.marginal(i, x)


def drop_marginal(oracle, d: int, x: SubsetBits) -> float:
    return oracle.drop_marginal(d, x)


class _CountingCursor(Cursor):
    """Counts marginal queries against a wrapped family cursor."""

    def __init__(self, counter: "CountingOracle", inner: Cursor):
        # no super().__init__: the inner cursor owns the state
        self._counter = counter
        self._inner = inner
        counter.eval_calls += 1  # anchor evaluation

    def members(self) -> SubsetBits:
        return self._inner.members()

    def value(self) -> float:
        return self._inner.value()

    def add_marginal(self, u: int) -> float:
        self._counter.marginal_calls += 1
        return self._inner.add_marginal(u)

    def drop_marginal(self, d: int) -> float:
        self._counter.marginal_calls += 1
        return self._inner.drop_marginal(d)

    def add(self, u: int) -> None:
        self._inner.add(u)

    def remove(self, d: int) -> None:
        self._inner.remove(d)


class CountingOracle:
    """Transparent wrapper that counts oracle traffic.

    ``eval_calls`` counts full evaluations, ``marginal_calls`` counts fast
    marginal queries (each worth at most two evaluations). Returned values are
    identical to the wrapped oracle's.
    """

    def __init__(self, inner):
        self.inner = inner
        self.eval_calls = 0
        self.marginal_calls = 0

    @property
    def ground(self) -> GroundSet:
        return self.inner.ground

    @property
    def n(self) -> int:
        return self.inner.n

    @property
    def total_calls(self) -> int:
        return self.eval_calls + self.marginal_calls

    @property
    def has_fast_marginal(self) -> bool:
        return self.inner.has_fast_marginal

    def value(self, x: SubsetBits) -> float:
        self.eval_calls += 1
        return self.inner.value(x)

    def marginal(self, i: int, x: SubsetBits) -> float:
        if x.contains(i):
            raise ValueError(f"element {i} already in the set")
        if getattr(self.inner, "_fast_marginal", None) is not None:
            self.marginal_calls += 1
            return self.inner.marginal(i, x)
        return self.value(x.add(i)) - self.value(x)

    def drop_marginal(self, d: int, x: SubsetBits) -> float:
        if not x.contains(d):
            raise ValueError(f"element {d} not in the set")
        if getattr(self.inner, "_fast_drop", None) is not None:
            self.marginal_calls += 1
            return self.inner.drop_marginal(d, x)
        return self.value(x) - self.value(x.remove(d))

    def cursor(self, start: SubsetBits) -> Cursor:
        factory = getattr(self.inner, "_cursor_factory", None)
        if factory is not None:
            return _CountingCursor(self, factory(self.inner, start))
        return Cursor(self, start)  # generic cursor; its evals route through us


def eval_table(oracle, n: int) -> np.ndarray:
    """Evaluate F on every subset; entry m holds F of the set with mask m.

    Uses a family's dense table when one is attached; otherwise 2**n plain
    evaluations. Callers are responsible for keeping n small.
    """
    dense = getattr(oracle, "dense_table", None)
    if dense is None:
        dense = getattr(getattr(oracle, "inner", None), "dense_table", None)
    if dense is not None and len(dense) == (1 << n):
        return np.array(dense, dtype=float)
    out = np.empty(1 << n, dtype=float)
    for mask in range(1 << n):
        out[mask] = oracle.value(SubsetBits(n, mask))
    return out
