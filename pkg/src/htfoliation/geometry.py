"""Exact polynomial vector-field calculus on flat charts and round spheres.

Everything downstream (connections, torsion, curvature) is built from
polynomial maps R^N -> R^N treated as vector fields on an ambient chart,
so that every derivative is computed symbolically and is exact up to
floating-point rounding of the coefficients.  On the unit-sphere chart the
convention is: projector formulas replace ||p||^2 by the constant 1, which
keeps all field transformers polynomial; the resulting expressions agree
with the true geometric objects at points with ||p|| = 1 and for tangent
directions, which is the only place they are ever evaluated.

Monomials are packed into single int64 keys (a fixed number of bits per
variable) so that sums, products and derivatives stay vectorized numpy
operations.  All structure constants in this package are dyadic rationals,
hence cancellation to exact zero actually occurs.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Sequence

import numpy as np

from .errors import DegenerateFrameError, DimensionMismatchError

EUCLIDEAN = "euclidean"
UNIT_SPHERE = "unit-sphere"

#: largest ambient dimension representable by the packed-exponent engine
MAX_AMBIENT_DIM = 16


def _packing_bits(n_vars: int) -> int:
    if not 1 <= n_vars <= MAX_AMBIENT_DIM:
        raise ValueError(f"ambient dimension must be in 1..{MAX_AMBIENT_DIM}, got {n_vars}")
    return min(15, 63 // n_vars)


def _dedup(keys: np.ndarray, coeffs: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Sort by key, merge duplicates, drop exact-zero coefficients."""
    if keys.size == 0:
        return keys, coeffs
    if keys.size == 1:
        if coeffs[0] == 0.0:
            return keys[:0], coeffs[:0]
        return keys, coeffs
    order = np.argsort(keys, kind="stable")
    k = keys[order]
    c = coeffs[order]
    starts = np.empty(k.size, dtype=bool)
    starts[0] = True
    np.not_equal(k[1:], k[:-1], out=starts[1:])
    idx = np.flatnonzero(starts)
    uniq = k[idx]
    acc = np.add.reduceat(c, idx)
    mask = acc != 0.0
    return uniq[mask], acc[mask]


class Polynomial:
    """A real polynomial in ``n_vars`` variables, stored in canonical form.

    Terms are kept as parallel arrays ``keys`` (packed exponents, strictly
    increasing) and ``coeffs`` (nonzero floats).  The empty term list is the
    zero polynomial.
    """

    __slots__ = ("n_vars", "_bits", "keys", "coeffs", "_degbound", "_partials")

    def __init__(self, n_vars: int, keys: np.ndarray | None = None,
                 coeffs: np.ndarray | None = None,
                 _degbound: int | None = None):
        self.n_vars = int(n_vars)
        self._bits = _packing_bits(self.n_vars)
        if keys is None:
            keys = np.empty(0, dtype=np.int64)
            coeffs = np.empty(0, dtype=np.float64)
        self.keys = keys
        self.coeffs = coeffs
        # upper bound on per-variable degrees, propagated through arithmetic
        # so the packing-overflow guard does not need to decode exponents
        self._degbound = _degbound
        self._partials = None

    # -- constructors ------------------------------------------------------

    @classmethod
    def zero(cls, n_vars: int) -> "Polynomial":
        return cls(n_vars)

    @classmethod
    def constant(cls, n_vars: int, value: float) -> "Polynomial":
        if value == 0.0:
            return cls(n_vars)
        return cls(n_vars, np.array([0], dtype=np.int64),
                   np.array([float(value)]))

    @classmethod
    def variable(cls, n_vars: int, index: int) -> "Polynomial":
        if not 0 <= index < n_vars:
            raise IndexError(f"variable index {index} out of range")
        bits = _packing_bits(n_vars)
        return cls(n_vars, np.array([1 << (bits * index)], dtype=np.int64),
                   np.array([1.0]))

    @classmethod
    def from_dict(cls, n_vars: int, terms: dict[tuple[int, ...], float]) -> "Polynomial":
        bits = _packing_bits(n_vars)
        cap = (1 << bits) - 1
        keys = []
        coeffs = []
        for exps, c in terms.items():
            if len(exps) != n_vars:
                raise DimensionMismatchError("multi-index length does not match n_vars")
            if any(e < 0 or e > cap for e in exps):
                raise ValueError(f"exponent out of packable range 0..{cap}")
            keys.append(sum(int(e) << (bits * i) for i, e in enumerate(exps)))
            coeffs.append(float(c))
        k, c = _dedup(np.asarray(keys, dtype=np.int64), np.asarray(coeffs))
        return cls(n_vars, k, c)

    # -- inspection --------------------------------------------------------

    @property
    def is_zero(self) -> bool:
        return self.keys.size == 0

    @property
    def n_terms(self) -> int:
        return self.keys.size

    def exponents(self) -> np.ndarray:
        """Decode packed keys into an (n_terms, n_vars) exponent array."""
        shifts = self._bits * np.arange(self.n_vars, dtype=np.int64)
        mask = (1 << self._bits) - 1
        return ((self.keys[:, None] >> shifts[None, :]) & mask).astype(np.int64)

    def max_var_degrees(self) -> np.ndarray:
        if self.is_zero:
            return np.zeros(self.n_vars, dtype=np.int64)
        return self.exponents().max(axis=0)

    def _bound(self) -> int:
        if self._degbound is None:
            self._degbound = 0 if self.is_zero else int(self.max_var_degrees().max())
        return self._degbound

    def degree(self) -> int:
        """Total degree; -1 for the zero polynomial."""
        if self.is_zero:
            return -1
        return int(self.exponents().sum(axis=1).max())

    def max_abs_coeff(self) -> float:
        if self.is_zero:
            return 0.0
        return float(np.abs(self.coeffs).max())

    def terms_dict(self) -> dict[tuple[int, ...], float]:
        exps = self.exponents()
        return {tuple(int(e) for e in exps[t]): float(self.coeffs[t])
                for t in range(self.n_terms)}

    def homogeneous_parts(self) -> dict[int, "Polynomial"]:
        """Split into homogeneous components keyed by total degree."""
        if self.is_zero:
            return {}
        degs = self.exponents().sum(axis=1)
        return {int(d): Polynomial(self.n_vars, self.keys[degs == d],
                                   self.coeffs[degs == d])
                for d in np.unique(degs)}

    # -- arithmetic --------------------------------------------------------

    def _check(self, other: "Polynomial") -> None:
        if self.n_vars != other.n_vars:
            raise DimensionMismatchError(
                f"polynomials in {self.n_vars} and {other.n_vars} variables")

    def __add__(self, other):
        if isinstance(other, (int, float)):
            other = Polynomial.constant(self.n_vars, other)
        self._check(other)
        if self.is_zero:
            return other
        if other.is_zero:
            return self
        k, c = _dedup(np.concatenate([self.keys, other.keys]),
                      np.concatenate([self.coeffs, other.coeffs]))
        return Polynomial(self.n_vars, k, c,
                          max(self._bound(), other._bound()))

    __radd__ = __add__

    @classmethod
    def sum_of(cls, n_vars: int, polys) -> "Polynomial":
        """Sum of many polynomials with a single merge pass."""
        polys = [p for p in polys if not p.is_zero]
        if not polys:
            return cls(n_vars)
        if len(polys) == 1:
            return polys[0]
        k, c = _dedup(np.concatenate([p.keys for p in polys]),
                      np.concatenate([p.coeffs for p in polys]))
        return cls(n_vars, k, c, max(p._bound() for p in polys))

    def __neg__(self):
        return Polynomial(self.n_vars, self.keys, -self.coeffs, self._degbound)

    def __sub__(self, other):
        if isinstance(other, (int, float)):
            other = Polynomial.constant(self.n_vars, other)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, float)):
            if other == 0.0:
                return Polynomial(self.n_vars)
            return Polynomial(self.n_vars, self.keys, self.coeffs * float(other),
                              self._degbound)
        self._check(other)
        if self.is_zero or other.is_zero:
            return Polynomial(self.n_vars)
        cap = (1 << self._bits) - 1
        md = self._bound() + other._bound()
        if md > cap:
            raise OverflowError("product exceeds packable per-variable degree")
        # single-term factors keep the key order strictly increasing
        if other.n_terms == 1:
            return Polynomial(self.n_vars, self.keys + other.keys[0],
                              self.coeffs * other.coeffs[0], md)
        if self.n_terms == 1:
            return Polynomial(self.n_vars, other.keys + self.keys[0],
                              other.coeffs * self.coeffs[0], md)
        keys = (self.keys[:, None] + other.keys[None, :]).ravel()
        coeffs = (self.coeffs[:, None] * other.coeffs[None, :]).ravel()
        k, c = _dedup(keys, coeffs)
        return Polynomial(self.n_vars, k, c, md)

    __rmul__ = __mul__

    def __pow__(self, power: int):
        if power < 0:
            raise ValueError("negative powers not supported")
        out = Polynomial.constant(self.n_vars, 1.0)
        for _ in range(power):
            out = out * self
        return out

    def partial(self, index: int) -> "Polynomial":
        """Exact partial derivative with respect to variable ``index``;
        memoized per instance (long-lived fields are differentiated often)."""
        if not 0 <= index < self.n_vars:
            raise IndexError(index)
        if self._partials is None:
            self._partials = [None] * self.n_vars
        cached = self._partials[index]
        if cached is not None:
            return cached
        if self.is_zero:
            out = Polynomial(self.n_vars)
        else:
            shift = self._bits * index
            mask = (1 << self._bits) - 1
            exp = (self.keys >> shift) & mask
            sel = exp > 0
            keys = self.keys[sel] - (np.int64(1) << shift)
            coeffs = self.coeffs[sel] * exp[sel]
            out = Polynomial(self.n_vars, keys, coeffs, self._degbound)
        self._partials[index] = out
        return out

    # -- evaluation --------------------------------------------------------

    def evaluate(self, points, cache: "MonomialCache | None" = None):
        """Evaluate at ``points`` of shape (P, n_vars) or a single (n_vars,).

        Passing a :class:`MonomialCache` built on the same point batch lets
        many polynomials share monomial columns.
        """
        pts = np.asarray(points, dtype=np.float64)
        single = pts.ndim == 1
        if single:
            pts = pts[None, :]
        if pts.shape[1] != self.n_vars:
            raise DimensionMismatchError("point dimension mismatch")
        if self.is_zero:
            vals = np.zeros(pts.shape[0])
        else:
            if cache is None:
                cache = MonomialCache(pts)
            cols = cache.columns(self.keys, self.n_vars, self._bits)
            vals = cols @ self.coeffs
        return float(vals[0]) if single else vals

    # -- presentation ------------------------------------------------------

    def to_string(self, names: Sequence[str] | None = None) -> str:
        """Canonical rendering in increasing packed-key order."""
        if self.is_zero:
            return "0"
        if names is None:
            names = [f"x{i}" for i in range(self.n_vars)]
        exps = self.exponents()
        pieces = []
        for t in range(self.n_terms):
            factors = [f"{names[i]}^{e}" if e > 1 else names[i]
                       for i, e in enumerate(exps[t]) if e > 0]
            mono = "*".join(factors) if factors else "1"
            pieces.append(f"{self.coeffs[t]:g}*{mono}")
        return " + ".join(pieces)

    def __repr__(self):
        s = self.to_string()
        if len(s) > 60:
            s = s[:57] + "..."
        return f"Polynomial({self.n_vars} vars, {self.n_terms} terms: {s})"


class MonomialCache:
    """Memoized monomial columns over a fixed point batch.

    Evaluating thousands of polynomials at the same sample points shares the
    per-monomial work: all seen monomial values live in one growable matrix
    indexed by packed key, and per-variable power tables are grown lazily.
    """

    def __init__(self, points):
        pts = np.atleast_2d(np.asarray(points, dtype=np.float64))
        self.points = pts
        self._powers: list[np.ndarray] = [
            np.ones((pts.shape[0], 1)) for _ in range(pts.shape[1])]
        self._registry = np.empty(0, dtype=np.int64)   # sorted seen keys
        self._registry_col = np.empty(0, dtype=np.int64)
        self._matrix = np.empty((pts.shape[0], 64))
        self._used = 0

    def _grow(self, var: int, degree: int) -> None:
        table = self._powers[var]
        have = table.shape[1] - 1
        if degree <= have:
            return
        cols = [table]
        last = table[:, -1]
        for _ in range(degree - have):
            last = last * self.points[:, var]
            cols.append(last[:, None])
        self._powers[var] = np.concatenate(cols, axis=1)

    def _lookup(self, keys: np.ndarray) -> np.ndarray:
        """Column indices for (sorted) keys; -1 where unseen."""
        pos = np.searchsorted(self._registry, keys)
        idx = np.full(keys.size, -1, dtype=np.int64)
        inside = pos < self._registry.size
        hit = inside.copy()
        hit[inside] = self._registry[pos[inside]] == keys[inside]
        idx[hit] = self._registry_col[pos[hit]]
        return idx

    def columns(self, keys: np.ndarray, n_vars: int, bits: int) -> np.ndarray:
        idx = self._lookup(keys)
        missing = idx < 0
        if missing.any():
            marr = keys[missing]
            shifts = bits * np.arange(n_vars, dtype=np.int64)
            mask = (1 << bits) - 1
            exps = ((marr[:, None] >> shifts[None, :]) & mask).astype(np.int64)
            fresh = np.ones((self.points.shape[0], marr.size))
            for v in range(n_vars):
                ev = exps[:, v]
                top = int(ev.max())
                if top == 0:
                    continue
                self._grow(v, top)
                fresh *= self._powers[v][:, ev]
            base = self._used
            needed = base + marr.size
            if needed > self._matrix.shape[1]:
                grown = np.empty((self.points.shape[0],
                                  max(needed, 2 * self._matrix.shape[1])))
                grown[:, :base] = self._matrix[:, :base]
                self._matrix = grown
            self._matrix[:, base:needed] = fresh
            self._used = needed
            new_idx = np.arange(base, needed, dtype=np.int64)
            order = np.argsort(np.concatenate([self._registry, marr]),
                               kind="stable")
            self._registry = np.concatenate([self._registry, marr])[order]
            self._registry_col = np.concatenate(
                [self._registry_col, new_idx])[order]
            idx[missing] = new_idx
        return self._matrix[:, idx]


class PolyField:
    """A polynomial map R^N -> R^N used as a vector field on an ambient chart."""

    __slots__ = ("n_vars", "components")

    def __init__(self, components: Sequence[Polynomial]):
        components = tuple(components)
        if not components:
            raise ValueError("a field needs at least one component")
        n = components[0].n_vars
        for c in components:
            if c.n_vars != n:
                raise DimensionMismatchError("mixed-dimension components")
        if len(components) != n:
            raise DimensionMismatchError(
                f"{len(components)} components for {n} ambient variables")
        self.n_vars = n
        self.components = components

    # -- constructors ------------------------------------------------------

    @classmethod
    def zero(cls, n_vars: int) -> "PolyField":
        return cls([Polynomial.zero(n_vars)] * n_vars)

    @classmethod
    def constant(cls, vector) -> "PolyField":
        vec = np.asarray(vector, dtype=np.float64)
        n = vec.size
        return cls([Polynomial.constant(n, v) for v in vec])

    @classmethod
    def basis(cls, n_vars: int, index: int) -> "PolyField":
        comps = [Polynomial.zero(n_vars) for _ in range(n_vars)]
        comps[index] = Polynomial.constant(n_vars, 1.0)
        return cls(comps)

    @classmethod
    def position(cls, n_vars: int) -> "PolyField":
        """The identity map p -> p (the radial field)."""
        return cls([Polynomial.variable(n_vars, i) for i in range(n_vars)])

    @classmethod
    def linear(cls, matrix) -> "PolyField":
        """The field p -> A p for a square matrix A."""
        A = np.asarray(matrix, dtype=np.float64)
        n = A.shape[0]
        comps = []
        for i in range(n):
            poly = Polynomial.zero(n)
            for j in range(n):
                if A[i, j] != 0.0:
                    poly = poly + A[i, j] * Polynomial.variable(n, j)
            comps.append(poly)
        return cls(comps)

    # -- algebra -----------------------------------------------------------

    def __add__(self, other: "PolyField") -> "PolyField":
        return PolyField([a + b for a, b in zip(self.components, other.components)])

    def __sub__(self, other: "PolyField") -> "PolyField":
        return PolyField([a - b for a, b in zip(self.components, other.components)])

    def __neg__(self) -> "PolyField":
        return PolyField([-a for a in self.components])

    def scale(self, s) -> "PolyField":
        """Multiply every component by a scalar or a Polynomial."""
        return PolyField([c * s for c in self.components])

    @classmethod
    def sum_of(cls, n_vars: int, fields) -> "PolyField":
        fields = list(fields)
        if not fields:
            return cls.zero(n_vars)
        return cls([Polynomial.sum_of(n_vars, [f.components[i] for f in fields])
                    for i in range(n_vars)])

    def dot(self, other: "PolyField") -> Polynomial:
        """Euclidean pairing of components (ambient inner product)."""
        return Polynomial.sum_of(self.n_vars,
                                 [a * b for a, b in
                                  zip(self.components, other.components)])

    def apply_matrix(self, matrix) -> "PolyField":
        """Componentwise linear map F -> A F."""
        A = np.asarray(matrix, dtype=np.float64)
        return PolyField([
            Polynomial.sum_of(self.n_vars,
                              [A[i, j] * self.components[j]
                               for j in range(self.n_vars) if A[i, j] != 0.0])
            for i in range(self.n_vars)])

    def is_zero(self) -> bool:
        return all(c.is_zero for c in self.components)

    def max_abs_coeff(self) -> float:
        return max(c.max_abs_coeff() for c in self.components)

    def evaluate(self, points, cache: MonomialCache | None = None) -> np.ndarray:
        pts = np.asarray(points, dtype=np.float64)
        single = pts.ndim == 1
        if single:
            pts = pts[None, :]
        if cache is None:
            cache = MonomialCache(pts)
        out = np.stack([c.evaluate(pts, cache) for c in self.components], axis=1)
        return out[0] if single else out

    def __repr__(self):
        return f"PolyField({self.n_vars} vars)"


@dataclass(frozen=True)
class AmbientChart:
    """Either flat R^N or the unit sphere S^{N-1} inside R^N."""

    kind: str
    n_vars: int

    def __post_init__(self):
        if self.kind not in (EUCLIDEAN, UNIT_SPHERE):
            raise ValueError(f"unknown chart kind {self.kind!r}")
        _packing_bits(self.n_vars)
        if self.kind == UNIT_SPHERE and self.n_vars < 2:
            raise ValueError("unit-sphere chart needs ambient dimension >= 2")


# ---------------------------------------------------------------------------
# differential operators


def directional_derivative(X: PolyField, f):
    """Exact derivative D_X f = sum_i X^i d_i f for f a Polynomial or PolyField."""
    if isinstance(f, PolyField):
        if f.n_vars != X.n_vars:
            raise DimensionMismatchError("field dimensions differ")
        return PolyField([directional_derivative(X, c) for c in f.components])
    if f.n_vars != X.n_vars:
        raise DimensionMismatchError("field and function dimensions differ")
    return Polynomial.sum_of(f.n_vars,
                             [xi * f.partial(i)
                              for i, xi in enumerate(X.components)
                              if not xi.is_zero])


def bracket(X: PolyField, Y: PolyField) -> PolyField:
    """Lie bracket [X, Y] = D_X Y - D_Y X, exact."""
    return directional_derivative(X, Y) - directional_derivative(Y, X)


def euclidean_gradient(f: Polynomial) -> PolyField:
    return PolyField([f.partial(i) for i in range(f.n_vars)])


def tangential_projection(F: PolyField) -> PolyField:
    """Tangential part F - <F, p> p, exact at points with ||p|| = 1."""
    p = PolyField.position(F.n_vars)
    return F - p.scale(F.dot(p))


def levi_civita(chart: AmbientChart, X: PolyField, Y: PolyField) -> PolyField:
    """Levi-Civita derivative of the chart's canonical metric.

    Flat chart: the plain directional derivative.  Unit sphere: tangential
    projection of the ambient derivative; valid at on-sphere points for
    tangent X.
    """
    if X.n_vars != chart.n_vars or Y.n_vars != chart.n_vars:
        raise DimensionMismatchError("field does not live on this chart")
    D = directional_derivative(X, Y)
    if chart.kind == EUCLIDEAN:
        return D
    return tangential_projection(D)


def sphere_laplacian(f: Polynomial, n_vars: int | None = None) -> Polynomial:
    """Laplace-Beltrami operator of the round S^{N-1} on a polynomial restriction.

    Uses the homogeneous decomposition: for f_k homogeneous of degree k,
    Delta_S f_k = (Delta_ambient f_k) - k (k + N - 2) f_k on the sphere.
    """
    n = f.n_vars if n_vars is None else n_vars
    out = Polynomial.zero(f.n_vars)
    for k, part in f.homogeneous_parts().items():
        flat = Polynomial.zero(f.n_vars)
        for i in range(f.n_vars):
            flat = flat + part.partial(i).partial(i)
        out = out + flat - (k * (k + n - 2)) * part
    return out


# ---------------------------------------------------------------------------
# pointwise linear algebra


def gram_schmidt_at(vectors, metric=None, tol: float = 1e-10,
                    allow_dependent: bool = False,
                    return_coefficients: bool = False):
    """Orthonormalize ``vectors`` against a bilinear form, deterministically.

    ``metric`` may be None (Euclidean), an (N, N) matrix, or a callable
    (u, v) -> float.  Near-dependent input raises DegenerateFrameError unless
    ``allow_dependent`` is set, in which case dependent vectors are skipped.
    With ``return_coefficients`` also returns the expansion matrix W and the
    kept input indices, such that basis[i] = sum_j W[i, j] * vectors[j].
    """
    vecs = [np.asarray(v, dtype=np.float64) for v in vectors]
    if metric is None:
        inner = lambda u, v: float(u @ v)
    elif callable(metric):
        inner = metric
    else:
        G = np.asarray(metric, dtype=np.float64)
        inner = lambda u, v: float(u @ G @ v)

    basis: list[np.ndarray] = []
    coeff_rows: list[np.ndarray] = []
    kept: list[int] = []
    for j, v in enumerate(vecs):
        w = v.copy()
        row = np.zeros(len(vecs))
        row[j] = 1.0
        for b, brow in zip(basis, coeff_rows):
            proj = inner(b, w)
            w = w - proj * b
            row = row - proj * brow
        norm2 = inner(w, w)
        scale2 = max(inner(v, v), 1.0)
        if norm2 <= (tol ** 2) * scale2:
            if allow_dependent:
                continue
            raise DegenerateFrameError(
                f"vector {j} is dependent on its predecessors (residual^2 ={norm2:.3e})")
        nrm = math.sqrt(norm2)
        basis.append(w / nrm)
        coeff_rows.append(row / nrm)
        kept.append(j)
    if return_coefficients:
        return basis, np.array(coeff_rows), kept
    return basis


# ---------------------------------------------------------------------------
# exact sphere quadrature


@lru_cache(maxsize=None)
def _double_factorial(k: int) -> int:
    if k <= 0:
        return 1
    return k * _double_factorial(k - 2)


@lru_cache(maxsize=None)
def _sphere_moment_fraction(n_vars: int, alpha: tuple[int, ...]) -> Fraction:
    if any(a % 2 == 1 for a in alpha):
        return Fraction(0)
    total = sum(alpha)
    num = 1
    for a in alpha:
        num *= _double_factorial(a - 1)
    den = 1
    for k in range(total // 2):
        den *= n_vars + 2 * k
    return Fraction(num, den)


def sphere_moment(n_vars: int, alpha: Iterable[int]) -> float:
    """Normalized moment (1/|S^{N-1}|) * integral of x^alpha over S^{N-1}.

    Exact via the double-factorial product formula; zero whenever any
    exponent is odd.
    """
    alpha = tuple(int(a) for a in alpha)
    if len(alpha) != n_vars:
        raise DimensionMismatchError("multi-index length does not match n_vars")
    return float(_sphere_moment_fraction(n_vars, alpha))


def integrate_sphere(poly: Polynomial) -> float:
    """Exact normalized integral of a polynomial over the unit sphere."""
    if poly.is_zero:
        return 0.0
    exps = poly.exponents()
    total = Fraction(0)
    for t in range(poly.n_terms):
        mom = _sphere_moment_fraction(poly.n_vars, tuple(int(e) for e in exps[t]))
        if mom:
            total += Fraction(poly.coeffs[t]) * mom
    return float(total)


# ---------------------------------------------------------------------------
# reproducible sampling


def sample_points(chart: AmbientChart, count: int, seed: int) -> np.ndarray:
    """Deterministic pseudo-random points on the chart.

    Uses the counter-based Philox generator so reports are reproducible
    bit-for-bit from the seed.  Sphere points are normalized to within
    1e-15 of unit length; Euclidean points are uniform in [-1, 1]^N.
    """
    if count < 1:
        raise ValueError("count must be >= 1")
    rng = np.random.Generator(np.random.Philox(key=seed))
    if chart.kind == EUCLIDEAN:
        return rng.uniform(-1.0, 1.0, size=(count, chart.n_vars))
    pts = rng.standard_normal(size=(count, chart.n_vars))
    pts /= np.linalg.norm(pts, axis=1, keepdims=True)
    return pts
