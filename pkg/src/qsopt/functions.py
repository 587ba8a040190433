"""Benchmark set-function families with seeded generation and fast marginals.

Families: iwata, com (concave-over-modular), half_products (served as the
negated maximization objective), perturbed_facility, determinant,
cobb_douglas, and small tabular functions. Instances are reproducible:
parameter array k of a family is drawn from the PCG64 stream seeded with
``SeedSequence(seed, spawn_key=(k,))``, so (family, n, seed) pins every bit.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
from scipy.linalg import cho_solve, cholesky, solve_triangular

from .errors import ConfigError, InternalInvariantError
from .oracle import Cursor, SetFunctionOracle
from .sets import GroundSet, SubsetBits

TABULAR_MAX_N = 20

FAMILIES = (
    "iwata",
    "com",
    "half_products",
    "perturbed_facility",
    "determinant",
    "cobb_douglas",
    "tabular",
)


def _stream(seed: int, index: int) -> np.random.Generator:
    """Named generator for parameter array ``index`` of an instance."""
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(seed, spawn_key=(index,))))


@dataclass
class FunctionSpec:
    """Serializable description of a benchmark instance."""

    family: str
    n: int
    seed: int = 0
    params: dict = field(default_factory=dict)

    def __post_init__(self) -> None:
        if self.family not in FAMILIES:
            raise ConfigError(f"unsupported family {self.family!r}")
        if self.n < 1:
            raise ConfigError(f"n must be >= 1, got {self.n}")
        if self.family == "tabular":
            values = self.params.get("values")
            if values is None:
                raise ConfigError("tabular spec needs params.values")
            if self.n > TABULAR_MAX_N:
                raise ConfigError(f"tabular capped at n <= {TABULAR_MAX_N}")
            if len(values) != (1 << self.n):
                raise ConfigError("tabular values length must be 2**n")


def _json_render(value, indent: int = 0) -> str:
    """JSON text with floats at 17 significant digits (exact double round trip)."""
    pad = "  " * indent
    inner = "  " * (indent + 1)
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return format(value, ".17g")
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, str):
        return json.dumps(value)
    if isinstance(value, dict):
        if not value:
            return "{}"
        items = [
            f"{inner}{json.dumps(str(k))}: {_json_render(v, indent + 1)}"
            for k, v in sorted(value.items())
        ]
        return "{\n" + ",\n".join(items) + f"\n{pad}}}"
    if isinstance(value, (list, tuple, np.ndarray)):
        seq = [_json_render(v, indent + 1) for v in value]
        if not seq:
            return "[]"
        return "[\n" + ",\n".join(inner + s for s in seq) + f"\n{pad}]"
    raise TypeError(f"cannot serialize {type(value).__name__}")


def save_spec(spec: FunctionSpec, path: str | Path) -> None:
    payload = {
        "family": spec.family,
        "n": spec.n,
        "seed": spec.seed,
        "params": spec.params,
    }
    Path(path).write_text(_json_render(payload) + "\n")


def load_spec(path: str | Path) -> FunctionSpec:
    try:
        payload = json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise ConfigError(f"cannot read instance file {path}: {exc}") from exc
    if not isinstance(payload, dict):
        raise ConfigError(f"instance file {path} is not a JSON object")
    try:
        return FunctionSpec(
            family=payload["family"],
            n=int(payload["n"]),
            seed=int(payload.get("seed", 0)),
            params=payload.get("params", {}) or {},
        )
    except KeyError as exc:
        raise ConfigError(f"instance file {path} missing field {exc}") from exc


def instantiate(spec: FunctionSpec) -> SetFunctionOracle:
    p = spec.params
    if spec.family == "iwata":
        return make_iwata(spec.n)
    if spec.family == "com":
        return make_com(spec.n, spec.seed)
    if spec.family == "half_products":
        if "c_scale" in p:
            return make_half_products(spec.n, spec.seed, c_scale=p["c_scale"])
        return make_half_products(spec.n, spec.seed)
    if spec.family == "perturbed_facility":
        return make_perturbed_facility(spec.n, p.get("d", 400), spec.seed)
    if spec.family == "determinant":
        return make_determinant(spec.n, spec.seed, **{k: v for k, v in p.items()})
    if spec.family == "cobb_douglas":
        return make_cobb_douglas(spec.n, spec.seed)
    if spec.family == "tabular":
        return make_tabular(p["values"])
    raise ConfigError(f"unsupported family {spec.family!r}")


# ---------------------------------------------------------------------------
# Iwata's function: F(X) = |X| * |N \ X| - sum_{i in X} (5 i - 2 n)


class _IwataCursor(Cursor):
    def __init__(self, oracle: SetFunctionOracle, start: SubsetBits, n: int):
        self._oracle = oracle
        self._n = n
        self._current = start
        self._k = len(start)
        self._wsum = float(sum(5 * i - 2 * n for i in start))
        self._value = self._k * (n - self._k) - self._wsum

    def members(self) -> SubsetBits:
        return self._current

    def value(self) -> float:
        return self._value

    def add_marginal(self, u: int) -> float:
        return float(3 * self._n - 2 * self._k - 1 - 5 * u)

    def drop_marginal(self, d: int) -> float:
        return float(3 * self._n - 2 * self._k + 1 - 5 * d)

    def add(self, u: int) -> None:
        self._value += self.add_marginal(u)
        self._current = self._current.add(u)
        self._k += 1
        self._wsum += 5 * u - 2 * self._n

    def remove(self, d: int) -> None:
        self._value -= self.drop_marginal(d)
        self._current = self._current.remove(d)
        self._k -= 1
        self._wsum -= 5 * d - 2 * self._n


def iwata_value(n: int, members: np.ndarray) -> float:
    """F(X) = |X| |N\\X| - sum over X of (5 i - 2 n)."""
    weights = 5.0 * np.arange(1, n + 1) - 2.0 * n
    k = int(members.sum())
    return k * (n - k) - float(weights @ members)


def make_iwata(n: int) -> SetFunctionOracle:
    """Deterministic size-versus-rank benchmark; no seed."""
    ground = GroundSet(n)
    weights = 5.0 * np.arange(1, n + 1) - 2.0 * n

    def evaluate(x: SubsetBits) -> float:
        k = len(x)
        return k * (n - k) - float(weights @ x.to_bool_array())

    def fast_marginal(u: int, x: SubsetBits) -> float:
        return float(3 * n - 2 * len(x) - 1 - 5 * u)

    def fast_drop(d: int, x: SubsetBits) -> float:
        return float(3 * n - 2 * len(x) + 1 - 5 * d)

    return SetFunctionOracle(
        ground,
        evaluate,
        fast_marginal=fast_marginal,
        fast_drop_marginal=fast_drop,
        cursor_factory=lambda o, s: _IwataCursor(o, s, n),
        params={"weights": weights},
        name=f"iwata(n={n})",
    )


# ---------------------------------------------------------------------------
# COM: F(X) = sqrt(w1(X)) + w2(N \ X), w1 and w2 uniform in [0,1]^n


class _ComCursor(Cursor):
    def __init__(self, oracle, start: SubsetBits, w1: np.ndarray, w2: np.ndarray):
        self._w1 = w1
        self._w2 = w2
        self._current = start
        m = start.to_bool_array()
        self._s1 = float(w1 @ m)
        self._s2 = float(w2.sum() - w2 @ m)

    def members(self) -> SubsetBits:
        return self._current

    def value(self) -> float:
        return math.sqrt(max(self._s1, 0.0)) + self._s2

    def add_marginal(self, u: int) -> float:
        s = max(self._s1, 0.0)
        return math.sqrt(s + self._w1[u - 1]) - math.sqrt(s) - self._w2[u - 1]

    def drop_marginal(self, d: int) -> float:
        s = max(self._s1, 0.0)
        return math.sqrt(s) - math.sqrt(max(s - self._w1[d - 1], 0.0)) - self._w2[d - 1]

    def add(self, u: int) -> None:
        self._current = self._current.add(u)
        self._s1 += self._w1[u - 1]
        self._s2 -= self._w2[u - 1]

    def remove(self, d: int) -> None:
        self._current = self._current.remove(d)
        self._s1 -= self._w1[d - 1]
        self._s2 += self._w2[d - 1]


def com_value(w1: np.ndarray, w2: np.ndarray, members: np.ndarray) -> float:
    """sqrt(w1(X)) + w2 over the complement of X."""
    return math.sqrt(float(w1 @ members)) + float(w2 @ ~members)


def make_com(n: int, seed: int) -> SetFunctionOracle:
    """Concave-over-modular: sqrt of one modular weight plus the complement of another."""
    ground = GroundSet(n)
    w1 = _stream(seed, 0).uniform(0.0, 1.0, n)
    w2 = _stream(seed, 1).uniform(0.0, 1.0, n)
    w2_total = float(w2.sum())

    def evaluate(x: SubsetBits) -> float:
        m = x.to_bool_array()
        return math.sqrt(float(w1 @ m)) + (w2_total - float(w2 @ m))

    def fast_marginal(u: int, x: SubsetBits) -> float:
        s = float(w1 @ x.to_bool_array())
        return math.sqrt(s + w1[u - 1]) - math.sqrt(s) - w2[u - 1]

    def fast_drop(d: int, x: SubsetBits) -> float:
        s = float(w1 @ x.to_bool_array())
        return math.sqrt(s) - math.sqrt(max(s - w1[d - 1], 0.0)) - w2[d - 1]

    return SetFunctionOracle(
        ground,
        evaluate,
        fast_marginal=fast_marginal,
        fast_drop_marginal=fast_drop,
        cursor_factory=lambda o, s: _ComCursor(o, s, w1, w2),
        params={"w1": w1, "w2": w2},
        name=f"com(n={n}, seed={seed})",
    )


# ---------------------------------------------------------------------------
# Half-products, served negated: the oracle evaluates
#   -F(X) = c(X) - sum_{i,j in X, i <= j} a(i) b(j)
# so maximizing the oracle minimizes the original half-products objective.


class _HalfProductsCursor(Cursor):
    """Epoch cursor: prefix/suffix sums over the member mask, rebuilt lazily."""

    def __init__(self, oracle, start: SubsetBits, a, b, c):
        self._a = a
        self._b = b
        self._c = c
        self._current = start
        self._dirty = True
        self._prefix_a = None
        self._suffix_b = None
        self._value = 0.0

    def _refresh(self) -> None:
        if not self._dirty:
            return
        m = self._current.to_bool_array()
        am = self._a * m
        bm = self._b * m
        # prefix_a[k] = sum of a over members with id <= k (1-based, index 0 = 0)
        self._prefix_a = np.concatenate(([0.0], np.cumsum(am)))
        self._suffix_b = np.concatenate((np.cumsum(bm[::-1])[::-1], [0.0]))
        t = float(bm @ self._prefix_a[1:])
        self._value = float(self._c @ m) - t
        self._dirty = False

    def members(self) -> SubsetBits:
        return self._current

    def value(self) -> float:
        self._refresh()
        return self._value

    def _pair_term(self, u: int) -> float:
        # a(u) b(u) + b(u) * sum_{i in X, i < u} a(i) + a(u) * sum_{j in X, j > u} b(j)
        self._refresh()
        j = u - 1
        return float(
            self._a[j] * self._b[j]
            + self._b[j] * self._prefix_a[u - 1]
            + self._a[j] * self._suffix_b[u]
        )

    def add_marginal(self, u: int) -> float:
        return float(self._c[u - 1]) - self._pair_term(u)

    def drop_marginal(self, d: int) -> float:
        # d is a member; prefix/suffix exclude d itself by index choice
        return float(self._c[d - 1]) - self._pair_term(d)

    def add(self, u: int) -> None:
        self._current = self._current.add(u)
        self._dirty = True

    def remove(self, d: int) -> None:
        self._current = self._current.remove(d)
        self._dirty = True


def half_products_value(a: np.ndarray, b: np.ndarray, c: np.ndarray, members: np.ndarray) -> float:
    """Negated half-products: c(X) minus the a(i)b(j) sum over member pairs i <= j."""
    am = a * members
    t = float((b * members) @ np.cumsum(am))
    return float(c @ members) - t


def make_half_products(n: int, seed: int, c_scale: float = 0.25) -> SetFunctionOracle:
    """Negated half-products; c is uniform in [0, c_scale * n] (default n/4)."""
    ground = GroundSet(n)
    a = _stream(seed, 0).uniform(0.0, 1.0, n)
    b = _stream(seed, 1).uniform(0.0, 1.0, n)
    c = _stream(seed, 2).uniform(0.0, c_scale * n, n)

    def evaluate(x: SubsetBits) -> float:
        return half_products_value(a, b, c, x.to_bool_array())

    def _pair_term(u: int, m: np.ndarray) -> float:
        j = u - 1
        before = float(a[:j] @ m[:j])
        after = float(b[j + 1 :] @ m[j + 1 :])
        return a[j] * b[j] + b[j] * before + a[j] * after

    def fast_marginal(u: int, x: SubsetBits) -> float:
        return float(c[u - 1]) - _pair_term(u, x.to_bool_array())

    def fast_drop(d: int, x: SubsetBits) -> float:
        return float(c[d - 1]) - _pair_term(d, x.to_bool_array())

    return SetFunctionOracle(
        ground,
        evaluate,
        fast_marginal=fast_marginal,
        fast_drop_marginal=fast_drop,
        cursor_factory=lambda o, s: _HalfProductsCursor(o, s, a, b, c),
        params={"a": a, "b": b, "c": c, "c_scale": c_scale},
        name=f"half_products(n={n}, seed={seed})",
    )


# ---------------------------------------------------------------------------
# Perturbed facility location: F(X) = sum_j max_{i in X} M[i,j] + sigma(X),
# with the max over an empty X taken as 0.


class _FacilityCursor(Cursor):
    """Epoch cursor holding per-column top-two statistics over the members."""

    def __init__(self, oracle, start: SubsetBits, mat: np.ndarray, sigma: np.ndarray):
        self._mat = mat
        self._sigma = sigma
        self._current = start
        self._dirty = True
        self._max1 = None
        self._max2 = None
        self._counts = None
        self._value = 0.0

    def _refresh(self) -> None:
        if not self._dirty:
            return
        m = self._current.to_bool_array()
        k = int(m.sum())
        d = self._mat.shape[1]
        if k == 0:
            self._max1 = np.zeros(d)
            self._max2 = np.zeros(d)
            self._counts = np.zeros(d, dtype=int)
            self._value = 0.0
        else:
            sub = self._mat[m]
            self._max1 = sub.max(axis=0)
            if k >= 2:
                self._max2 = np.partition(sub, k - 2, axis=0)[k - 2]
            else:
                self._max2 = np.zeros(d)
            self._counts = (sub == self._max1).sum(axis=0)
            self._value = float(self._max1.sum() + self._sigma @ m)
        self._dirty = False

    def members(self) -> SubsetBits:
        return self._current

    def value(self) -> float:
        self._refresh()
        return self._value

    def add_marginal(self, u: int) -> float:
        self._refresh()
        row = self._mat[u - 1]
        return float(np.maximum(row - self._max1, 0.0).sum() + self._sigma[u - 1])

    def drop_marginal(self, d: int) -> float:
        self._refresh()
        row = self._mat[d - 1]
        loses = (row == self._max1) & (self._counts == 1)
        return float(((self._max1 - self._max2) * loses).sum() + self._sigma[d - 1])

    def add(self, u: int) -> None:
        self._current = self._current.add(u)
        self._dirty = True

    def remove(self, d: int) -> None:
        self._current = self._current.remove(d)
        self._dirty = True


def facility_value(mat: np.ndarray, sigma: np.ndarray, members: np.ndarray) -> float:
    """Column-wise best facility among the members plus modular noise; empty gives 0."""
    if not members.any():
        return 0.0
    return float(mat[members].max(axis=0).sum() + sigma @ members)


def make_perturbed_facility(n: int, d: int, seed: int) -> SetFunctionOracle:
    """Facility location over a random [0.5,1] matrix plus modular noise in [-0.01,0.01]."""
    if d < 1:
        raise ValueError(f"d must be >= 1, got {d}")
    ground = GroundSet(n)
    mat = _stream(seed, 0).uniform(0.5, 1.0, (n, d))
    sigma = _stream(seed, 1).uniform(-0.01, 0.01, n)

    def evaluate(x: SubsetBits) -> float:
        return facility_value(mat, sigma, x.to_bool_array())

    def fast_marginal(u: int, x: SubsetBits) -> float:
        m = x.to_bool_array()
        colmax = mat[m].max(axis=0) if m.any() else 0.0
        return float(np.maximum(mat[u - 1] - colmax, 0.0).sum() + sigma[u - 1])

    def fast_drop(dd: int, x: SubsetBits) -> float:
        m = x.to_bool_array()
        m2 = m.copy()
        m2[dd - 1] = False
        colmax = mat[m2].max(axis=0) if m2.any() else 0.0
        return float(np.maximum(mat[dd - 1] - colmax, 0.0).sum() + sigma[dd - 1])

    return SetFunctionOracle(
        ground,
        evaluate,
        fast_marginal=fast_marginal,
        fast_drop_marginal=fast_drop,
        cursor_factory=lambda o, s: _FacilityCursor(o, s, mat, sigma),
        params={"M": mat, "sigma": sigma, "d": d},
        name=f"perturbed_facility(n={n}, d={d}, seed={seed})",
    )


# ---------------------------------------------------------------------------
# Determinant of the principal submatrix of a positive definite kernel.
# The kernel is a quality-diversity Gaussian similarity over clustered random
# points: K[i,j] = q_i q_j exp(-|x_i - x_j|^2 / (2 l^2)) plus a tiny jitter
# ridge. Clusters mix singletons, tight pairs/triples, and "anchored pairs"
# (a tight high-quality pair next to a stronger moderately-correlated anchor);
# the mix shapes how much of the ground set the reductions leave undecided.
# det over the empty index set is 1.

DETERMINANT_DEFAULTS = {
    "dim": 8,
    "length_scale": 0.35,
    "q_lo": 0.82,
    "q_hi": 1.25,
    "rho_lo": 0.57,
    "rho_hi": 0.98,
    "p_pair": 0.30,
    "p_triple": 0.15,
    "p_anchor": 0.12,
    "jitter": 1e-8,
}


class _DeterminantCursor(Cursor):
    """Epoch cursor around a Cholesky factor of K restricted to the members."""

    def __init__(self, oracle, start: SubsetBits, kernel: np.ndarray):
        self._kernel = kernel
        self._current = start
        self._dirty = True
        self._idx = None
        self._chol = None
        self._det = 1.0
        self._inv_diag = None

    def _refresh(self) -> None:
        if not self._dirty:
            return
        idx = np.flatnonzero(self._current.to_bool_array())
        self._idx = idx
        if len(idx) == 0:
            self._chol = None
            self._det = 1.0
            self._inv_diag = None
        else:
            sub = self._kernel[np.ix_(idx, idx)]
            self._chol = cholesky(sub, lower=True)
            self._det = float(np.prod(np.diag(self._chol)) ** 2)
            inv = cho_solve((self._chol, True), np.eye(len(idx)))
            self._inv_diag = np.diag(inv).copy()
        self._dirty = False

    def members(self) -> SubsetBits:
        return self._current

    def value(self) -> float:
        self._refresh()
        return self._det

    def add_marginal(self, u: int) -> float:
        self._refresh()
        kuu = self._kernel[u - 1, u - 1]
        if self._chol is None:
            return float(kuu - 1.0)
        v = self._kernel[self._idx, u - 1]
        y = solve_triangular(self._chol, v, lower=True)
        schur = float(kuu - y @ y)
        return self._det * (schur - 1.0)

    def drop_marginal(self, d: int) -> float:
        self._refresh()
        pos = int(np.searchsorted(self._idx, d - 1))
        # det(K_{X-d}) = det(K_X) * (K_X^{-1})_{dd}
        return self._det * float(1.0 - self._inv_diag[pos])

    def add(self, u: int) -> None:
        self._current = self._current.add(u)
        self._dirty = True

    def remove(self, d: int) -> None:
        self._current = self._current.remove(d)
        self._dirty = True


def _determinant_kernel(n: int, seed: int, p: dict) -> np.ndarray:
    rng = _stream(seed, 0)
    qrng = _stream(seed, 1)
    dim = int(p["dim"])
    ell = float(p["length_scale"])
    points = np.zeros((n, dim))
    quality = np.zeros(n)

    def offset(center: np.ndarray, rho: float) -> np.ndarray:
        delta = math.sqrt(-2.0 * math.log(rho)) * ell
        direction = rng.normal(size=dim)
        direction /= np.linalg.norm(direction)
        return center + delta * direction

    placed = 0
    while placed < n:
        draw = rng.random()
        left = n - placed
        if draw < p["p_anchor"] and left >= 3:
            center = rng.uniform(0.0, 1.0, dim)
            points[placed] = center
            quality[placed] = qrng.uniform(1.02, 1.2)
            points[placed + 1] = offset(center, rng.uniform(0.88, 0.97))
            quality[placed + 1] = qrng.uniform(1.02, 1.2)
            points[placed + 2] = offset(center, rng.uniform(0.45, 0.65))
            quality[placed + 2] = qrng.uniform(1.3, 1.5)
            placed += 3
            continue
        if draw < p["p_anchor"] + (1.0 - p["p_anchor"] - p["p_pair"] - p["p_triple"]):
            size = 1
        elif draw < 1.0 - p["p_triple"]:
            size = 2
        else:
            size = 3
        size = int(min(size, left))
        center = rng.uniform(0.0, 1.0, dim)
        points[placed] = center
        quality[placed] = qrng.uniform(p["q_lo"], p["q_hi"])
        for j in range(1, size):
            points[placed + j] = offset(center, rng.uniform(p["rho_lo"], p["rho_hi"]))
            quality[placed + j] = qrng.uniform(p["q_lo"], p["q_hi"])
        placed += size

    sq_dist = ((points[:, None, :] - points[None, :, :]) ** 2).sum(axis=-1)
    kernel = np.outer(quality, quality) * np.exp(-sq_dist / (2.0 * ell * ell))
    kernel += float(p["jitter"]) * np.eye(n)
    return (kernel + kernel.T) / 2.0


def principal_determinant(kernel: np.ndarray, members: np.ndarray) -> float:
    """det of the kernel restricted to the members; the empty restriction gives 1."""
    idx = np.flatnonzero(members)
    if len(idx) == 0:
        return 1.0
    chol = cholesky(kernel[np.ix_(idx, idx)], lower=True)
    return float(np.prod(np.diag(chol)) ** 2)


def make_determinant(n: int, seed: int, **knobs) -> SetFunctionOracle:
    """det of the principal submatrix of a clustered quality-diversity kernel."""
    params = dict(DETERMINANT_DEFAULTS)
    unknown = set(knobs) - set(params)
    if unknown:
        raise ValueError(f"unknown determinant knobs: {sorted(unknown)}")
    params.update(knobs)
    ground = GroundSet(n)
    kernel = _determinant_kernel(n, seed, params)

    def evaluate(x: SubsetBits) -> float:
        return principal_determinant(kernel, x.to_bool_array())

    return SetFunctionOracle(
        ground,
        evaluate,
        cursor_factory=lambda o, s: _DeterminantCursor(o, s, kernel),
        params={"kernel": kernel, **params},
        name=f"determinant(n={n}, seed={seed})",
    )


# ---------------------------------------------------------------------------
# Cobb-Douglas production over the members: F(X) = prod_{i in X} w(i)**alpha_i,
# evaluated through the maintained log-sum so n in the thousands stays stable.


class _CobbCursor(Cursor):
    def __init__(self, oracle, start: SubsetBits, delta: np.ndarray):
        self._delta = delta
        self._current = start
        self._logsum = float(delta @ start.to_bool_array())

    def members(self) -> SubsetBits:
        return self._current

    def value(self) -> float:
        return math.exp(self._logsum)

    def add_marginal(self, u: int) -> float:
        return math.exp(self._logsum) * math.expm1(self._delta[u - 1])

    def drop_marginal(self, d: int) -> float:
        return -math.exp(self._logsum) * math.expm1(-self._delta[d - 1])

    def add(self, u: int) -> None:
        self._current = self._current.add(u)
        self._logsum += self._delta[u - 1]

    def remove(self, d: int) -> None:
        self._current = self._current.remove(d)
        self._logsum -= self._delta[d - 1]


def _cobb_delta(w: np.ndarray, alpha: np.ndarray) -> np.ndarray:
    """Per-element log factors alpha * ln(w); w == 0 with positive alpha gives -inf."""
    with np.errstate(divide="ignore", invalid="ignore"):
        delta = alpha * np.log(w)
    # 0 * log(0) is the w**0 == 1 convention, not a real indeterminate
    return np.where((w == 0.0) & (alpha == 0.0), 0.0, delta)


def cobb_value(w: np.ndarray, alpha: np.ndarray, members: np.ndarray) -> float:
    """Product over members of w(i)**alpha_i, computed through the log-sum."""
    return math.exp(float(_cobb_delta(w, alpha) @ members))


def make_cobb_douglas(n: int, seed: int) -> SetFunctionOracle:
    """Product over members of w(i)**alpha_i with w in [0.5,2], alpha in [0,1]."""
    ground = GroundSet(n)
    w = _stream(seed, 0).uniform(0.5, 2.0, n)
    alpha = _stream(seed, 1).uniform(0.0, 1.0, n)
    delta = _cobb_delta(w, alpha)

    def evaluate(x: SubsetBits) -> float:
        return math.exp(float(delta @ x.to_bool_array()))

    def fast_marginal(u: int, x: SubsetBits) -> float:
        s = float(delta @ x.to_bool_array())
        return math.exp(s) * math.expm1(delta[u - 1])

    def fast_drop(d: int, x: SubsetBits) -> float:
        s = float(delta @ x.to_bool_array())
        return -math.exp(s) * math.expm1(-delta[d - 1])

    return SetFunctionOracle(
        ground,
        evaluate,
        fast_marginal=fast_marginal,
        fast_drop_marginal=fast_drop,
        cursor_factory=lambda o, s: _CobbCursor(o, s, delta),
        params={"w": w, "alpha": alpha, "product_over": "members"},
        name=f"cobb_douglas(n={n}, seed={seed})",
    )


# ---------------------------------------------------------------------------
# Tabular functions (n <= 20): explicit value for every subset bitmask.


class _TabularCursor(Cursor):
    def __init__(self, oracle, start: SubsetBits, values: np.ndarray):
        self._values = values
        self._current = start
        self._mask = start.mask

    def members(self) -> SubsetBits:
        return self._current

    def value(self) -> float:
        return float(self._values[self._mask])

    def add_marginal(self, u: int) -> float:
        return float(self._values[self._mask | (1 << (u - 1))] - self._values[self._mask])

    def drop_marginal(self, d: int) -> float:
        return float(self._values[self._mask] - self._values[self._mask & ~(1 << (d - 1))])

    def add(self, u: int) -> None:
        self._current = self._current.add(u)
        self._mask = self._current.mask

    def remove(self, d: int) -> None:
        self._current = self._current.remove(d)
        self._mask = self._current.mask


def make_tabular(values) -> SetFunctionOracle:
    """Oracle backed by an explicit table indexed by subset bitmask."""
    arr = np.asarray(values, dtype=float)
    size = len(arr)
    n = size.bit_length() - 1
    if size < 2 or (1 << n) != size:
        raise ValueError(f"table length {size} is not a power of two >= 2")
    if n > TABULAR_MAX_N:
        raise ValueError(f"tabular capped at n <= {TABULAR_MAX_N}, got {n}")
    ground = GroundSet(n)

    def evaluate(x: SubsetBits) -> float:
        return float(arr[x.mask])

    def fast_marginal(u: int, x: SubsetBits) -> float:
        return float(arr[x.mask | (1 << (u - 1))] - arr[x.mask])

    def fast_drop(d: int, x: SubsetBits) -> float:
        return float(arr[x.mask] - arr[x.mask & ~(1 << (d - 1))])

    return SetFunctionOracle(
        ground,
        evaluate,
        fast_marginal=fast_marginal,
        fast_drop_marginal=fast_drop,
        cursor_factory=lambda o, s: _TabularCursor(o, s, arr),
        dense_table=arr,
        params={"values": arr},
        name=f"tabular(n={n})",
    )


def tabular_spec(values, seed: int = 0) -> FunctionSpec:
    arr = [float(v) for v in values]
    n = len(arr).bit_length() - 1
    return FunctionSpec("tabular", n, seed, {"values": arr})


# ---------------------------------------------------------------------------
# Random quasi-submodular test instances: a random submodular base composed
# with a random strictly increasing cubic. The reordering-free transform keeps
# every ordinal property of the base, so the result stays quasi-submodular;
# satisfies_ssbc double-checks each instance before it is released (the
# exhaustive check is skipped above n=14 where it stops being affordable).


def _random_submodular_table(n: int, rng: np.random.Generator) -> np.ndarray:
    size = 1 << n
    kind = rng.integers(0, 2)
    if kind == 0:
        # concave over modular plus a signed modular part
        w1 = rng.uniform(0.1, 1.0, n)
        w2 = rng.uniform(0.0, 1.0, n)
        m = rng.uniform(-0.5, 0.5, n)
        beta = rng.uniform(0.5, 2.0)
        table = np.empty(size)
        for mask in range(size):
            sel = SubsetBits(n, mask).to_bool_array()
            table[mask] = beta * math.sqrt(float(w1 @ sel)) + float(w2 @ ~sel) + float(m @ sel)
    else:
        # weighted coverage minus a modular cost
        m_items = 2 * n
        covers = rng.random((n, m_items)) < 0.3
        v = rng.uniform(0.0, 1.0, m_items)
        cost = rng.uniform(0.0, 0.6, n)
        table = np.empty(size)
        for mask in range(size):
            sel = SubsetBits(n, mask).to_bool_array()
            covered = covers[sel].any(axis=0) if sel.any() else np.zeros(m_items, dtype=bool)
            table[mask] = float(v @ covered) - float(cost @ sel)
    # tiny modular jitter keeps subset values generically distinct
    jitter = rng.uniform(0.0, 1.0, n) * 1e-4
    for mask in range(size):
        table[mask] += float(jitter @ SubsetBits(n, mask).to_bool_array())
    return table


def _increasing_transform(table: np.ndarray, rng: np.random.Generator) -> np.ndarray:
    lo, hi = float(table.min()), float(table.max())
    mid = (lo + hi) / 2.0
    scale = (hi - lo) / 2.0 or 1.0
    y = (table - mid) / scale
    a = rng.uniform(0.5, 2.0)
    b = rng.uniform(0.5, 2.0)
    shift = rng.uniform(-1.0, 1.0)
    return a * y**3 + b * y + shift


def make_random_qsb(n: int, seed: int) -> SetFunctionOracle:
    """Seeded random quasi-submodular tabular instance (n <= 20)."""
    if n > TABULAR_MAX_N:
        raise ValueError(f"random tabular instances capped at n <= {TABULAR_MAX_N}")
    rng = _stream(seed, 0)
    table = _increasing_transform(_random_submodular_table(n, rng), rng)
    oracle = make_tabular(table)
    if n <= 14:
        from .checkers import satisfies_ssbc

        verdict = satisfies_ssbc(oracle, n)
        if not verdict.holds:
            raise InternalInvariantError(
                f"random instance (n={n}, seed={seed}) failed verification"
            )
    return oracle
