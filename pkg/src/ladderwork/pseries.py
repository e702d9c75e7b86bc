"""Truncated bivariate power series over F_p.

A :class:`TruncatedSeries` is an element of k[[x, y]] known exactly on every
monomial of total degree below its ``precision``.  Coefficients are stored
densely in an ``(N, N)`` integer array ``c`` with ``c[i, j]`` the coefficient
of ``x**i * y**j``; entries with ``i + j >= N`` are always zero.

Every operation derives the precision of its result from the precisions of
its inputs, so truncation can never silently leak into a claimed-exact
coefficient:

* sums and products: the minimum of the operand precisions;
* ``monomial_divide_exact(f, a, b)``: ``N - a - b``;
* ``shift(a, b)`` (multiplication by a monomial): ``N + a + b``;
* order-increasing substitution: preserved;
* ``frobenius()`` (the p-th power): ``p * N``, since ``(f + e)**p = f**p + e**p``
  in characteristic p;
* Weierstrass division/preparation: derived from a weighted filtration, see
  :func:`weierstrass_divide`.

Univariate series (in ``y`` or in ``x``) are bivariate series that happen not
to involve the other variable.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import NamedTuple

import numpy as np

from .field import ModulusMismatch, PrimeFieldElement, check_prime, inv_mod

__all__ = [
    "PrecisionError", "ZeroSeriesError", "NonUnitError", "InexactDivisionError",
    "NotRegularError", "TruncatedSeries", "LeadingForm", "Substitution",
    "DistinguishedPolynomial", "WeierstrassForm", "series_mul",
    "series_invert_unit", "substitute", "ord_and_leading_form",
    "monomial_divide_exact", "weierstrass_divide", "weierstrass_prepare",
    "distinguished_root", "solve_coordinate", "divides_prepared",
    "divide_exact", "gens",
]


class PrecisionError(ArithmeticError):
    """The requested answer depends on coefficients beyond known precision."""


class ZeroSeriesError(PrecisionError):
    """The series vanishes below its precision, so its order is unknown."""


class NonUnitError(ArithmeticError):
    """Inversion of a series with zero constant term."""


class InexactDivisionError(ArithmeticError):
    """A division that was required to be exact left a remainder."""


class NotRegularError(ValueError):
    """An element is not regular (order 1) in the requested variable."""


@lru_cache(maxsize=None)
def _diag_index(d: int):
    rows = np.arange(d + 1)
    return rows, d - rows


@lru_cache(maxsize=None)
def _mask(n: int) -> np.ndarray:
    return np.add.outer(np.arange(n), np.arange(n)) < n


def _as_int(value, p: int) -> int:
    if isinstance(value, PrimeFieldElement):
        if value.modulus != p:
            raise ModulusMismatch(f"F_{value.modulus} scalar used with F_{p} series")
        return value.residue
    return int(value) % p


class TruncatedSeries:
    """Element of F_p[[x, y]] known below total degree ``precision``."""

    __slots__ = ("p", "precision", "c")
    __hash__ = None

    def __init__(self, coeffs, p: int, precision: int, *, _trusted: bool = False):
        if _trusted:
            self.p = p
            self.precision = precision
            self.c = coeffs
            return
        p = check_prime(p)
        precision = int(precision)
        if precision < 1:
            raise ValueError(f"precision must be positive, got {precision}")
        arr = np.zeros((precision, precision), dtype=np.int64)
        if isinstance(coeffs, dict):
            for (i, j), v in coeffs.items():
                if i < 0 or j < 0:
                    raise ValueError(f"negative exponent ({i}, {j})")
                if i + j < precision:
                    arr[i, j] = _as_int(v, p)
        else:
            src = np.asarray(coeffs, dtype=np.int64)
            if src.ndim != 2:
                raise ValueError("coefficient array must be 2-dimensional")
            n0 = min(src.shape[0], precision)
            n1 = min(src.shape[1], precision)
            arr[:n0, :n1] = src[:n0, :n1]
            arr %= p
        arr[~_mask(precision)] = 0
        self.p = p
        self.precision = precision
        self.c = arr

    # construction ---------------------------------------------------------
    @classmethod
    def _raw(cls, arr: np.ndarray, p: int, precision: int) -> TruncatedSeries:
        arr = arr % p
        arr[~_mask(precision)] = 0
        return cls(arr, p, precision, _trusted=True)

    @classmethod
    def zero(cls, p: int, precision: int) -> TruncatedSeries:
        return cls({}, p, precision)

    @classmethod
    def constant(cls, value, p: int, precision: int) -> TruncatedSeries:
        return cls({(0, 0): value}, p, precision)

    @classmethod
    def monomial(cls, i: int, j: int, p: int, precision: int, coeff=1) -> TruncatedSeries:
        return cls({(i, j): coeff}, p, precision)

    @classmethod
    def univariate(cls, coeffs, p: int, precision: int, var: str = "y") -> TruncatedSeries:
        """Series in a single variable from its coefficient list."""
        if var == "y":
            terms = {(0, k): v for k, v in enumerate(coeffs)}
        elif var == "x":
            terms = {(k, 0): v for k, v in enumerate(coeffs)}
        else:
            raise ValueError(f"unknown variable {var!r}")
        return cls(terms, p, precision)

    # basic accessors --------------------------------------------------------
    def __getitem__(self, key) -> int:
        i, j = key
        if i < 0 or j < 0:
            return 0
        if i + j >= self.precision:
            raise PrecisionError(
                f"coefficient of x^{i}y^{j} is beyond precision {self.precision}")
        return int(self.c[i, j])

    def coefficient(self, i: int, j: int) -> PrimeFieldElement:
        return PrimeFieldElement(self[i, j], self.p)

    @property
    def constant_term(self) -> int:
        return int(self.c[0, 0])

    def terms(self):
        """Nonzero terms as ``(i, j, c)`` sorted by ``(i + j, i)``."""
        ii, jj = np.nonzero(self.c)
        out = [(int(i), int(j), int(self.c[i, j])) for i, j in zip(ii, jj)]
        out.sort(key=lambda t: (t[0] + t[1], t[0]))
        return out

    def is_zero(self) -> bool:
        return not self.c.any()

    def is_unit(self) -> bool:
        return self.c[0, 0] != 0

    def homogeneous(self, d: int) -> np.ndarray:
        """Degree-``d`` part as an array indexed by the x-exponent."""
        if d >= self.precision:
            raise PrecisionError(f"degree {d} part is beyond precision {self.precision}")
        rows, cols = _diag_index(d)
        return self.c[rows, cols].copy()

    def _check(self, other: TruncatedSeries):
        if self.p != other.p:
            raise ModulusMismatch(f"F_{self.p} series combined with F_{other.p} series")

    def _coerce(self, other):
        if isinstance(other, TruncatedSeries):
            self._check(other)
            return other
        if isinstance(other, (int, np.integer, PrimeFieldElement)) and not isinstance(other, bool):
            return TruncatedSeries.constant(_as_int(other, self.p), self.p, self.precision)
        return NotImplemented

    # precision management ---------------------------------------------------
    def truncate(self, precision: int) -> TruncatedSeries:
        """Forget coefficients of degree >= ``precision`` (never raises precision)."""
        if precision > self.precision:
            raise PrecisionError(
                f"cannot raise precision from {self.precision} to {precision}")
        if precision == self.precision:
            return self
        return TruncatedSeries._raw(self.c[:precision, :precision].copy(), self.p, precision)

    # ring operations ------------------------------------------------------
    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        n = min(self.precision, o.precision)
        return TruncatedSeries._raw(self.c[:n, :n] + o.c[:n, :n], self.p, n)

    __radd__ = __add__

    def __neg__(self):
        return TruncatedSeries._raw(-self.c, self.p, self.precision)

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        n = min(self.precision, o.precision)
        return TruncatedSeries._raw(self.c[:n, :n] - o.c[:n, :n], self.p, n)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return o - self

    def __mul__(self, other):
        if isinstance(other, (int, np.integer, PrimeFieldElement)) and not isinstance(other, bool):
            return TruncatedSeries._raw(self.c * _as_int(other, self.p), self.p, self.precision)
        if not isinstance(other, TruncatedSeries):
            return NotImplemented
        return series_mul(self, other)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            return series_invert_unit(self) ** (-n)
        result = TruncatedSeries.constant(1, self.p, self.precision)
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def __eq__(self, other):
        """Agreement of all coefficients below the common precision."""
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        n = min(self.precision, o.precision)
        m = _mask(n)
        return bool(np.array_equal(self.c[:n, :n][m], o.c[:n, :n][m]))

    def shift(self, a: int, b: int) -> TruncatedSeries:
        """Multiply by ``x**a * y**b``; precision grows by ``a + b``."""
        n = self.precision + a + b
        arr = np.zeros((n, n), dtype=np.int64)
        arr[a : a + self.precision, b : b + self.precision] = self.c
        return TruncatedSeries(arr, self.p, n, _trusted=True)

    def frobenius(self) -> TruncatedSeries:
        """The p-th power, computed by spreading exponents (valid over F_p)."""
        p = self.p
        n = p * self.precision
        arr = np.zeros((n, n), dtype=np.int64)
        arr[::p, ::p] = self.c
        return TruncatedSeries(arr, p, n, _trusted=True)

    def swap(self) -> TruncatedSeries:
        """Exchange the roles of x and y."""
        return TruncatedSeries(self.c.T.copy(), self.p, self.precision, _trusted=True)

    def at_x0(self) -> TruncatedSeries:
        """Restriction to x = 0 (a series in y)."""
        arr = np.zeros_like(self.c)
        arr[0, :] = self.c[0, :]
        return TruncatedSeries(arr, self.p, self.precision, _trusted=True)

    def at_y0(self) -> TruncatedSeries:
        arr = np.zeros_like(self.c)
        arr[:, 0] = self.c[:, 0]
        return TruncatedSeries(arr, self.p, self.precision, _trusted=True)

    def y_coeffs(self) -> list[int]:
        """Coefficients of the restriction to x = 0."""
        return [int(v) for v in self.c[0, :]]

    def depends_on_x(self) -> bool:
        return bool(self.c[1:, :].any())

    # structure ----------------------------------------------------------------
    def order(self) -> int:
        return ord_and_leading_form(self).order

    def leading_form(self) -> LeadingForm:
        return ord_and_leading_form(self)

    def monomial_factor(self) -> tuple[int, int]:
        """Largest ``(a, b)`` with every known nonzero term divisible by x^a y^b."""
        ii, jj = np.nonzero(self.c)
        if ii.size == 0:
            raise ZeroSeriesError(f"series vanishes below precision {self.precision}")
        return int(ii.min()), int(jj.min())

    def order_in(self, var: str) -> int:
        """Order of the restriction to the ``var`` axis (f(0, y) for ``var='y'``)."""
        line = self.c[0, :] if var == "y" else self.c[:, 0]
        nz = np.nonzero(line)[0]
        if nz.size == 0:
            raise ZeroSeriesError(
                f"series vanishes on the {var}-axis below precision {self.precision}")
        return int(nz[0])

    # serialization ------------------------------------------------------------
    def to_json(self) -> dict:
        return {"p": self.p, "precision": self.precision,
                "terms": [[i, j, c] for i, j, c in self.terms()]}

    @classmethod
    def from_json(cls, data: dict) -> TruncatedSeries:
        terms = {(int(i), int(j)): int(c) for i, j, c in data["terms"]}
        return cls(terms, int(data["p"]), int(data["precision"]))

    def __repr__(self):
        return f"TruncatedSeries({self}, p={self.p}, N={self.precision})"

    def __str__(self):
        parts = []
        for i, j, c in self.terms():
            mono = "*".join(
                s for s in ((f"x^{i}" if i > 1 else "x" if i == 1 else ""),
                            (f"y^{j}" if j > 1 else "y" if j == 1 else "")) if s)
            if not mono:
                parts.append(str(c))
            elif c == 1:
                parts.append(mono)
            else:
                parts.append(f"{c}*{mono}")
        return " + ".join(parts) if parts else "0"


def gens(p: int, precision: int) -> tuple[TruncatedSeries, TruncatedSeries]:
    """The coordinate series ``x`` and ``y``."""
    return (TruncatedSeries.monomial(1, 0, p, precision),
            TruncatedSeries.monomial(0, 1, p, precision))


# --------------------------------------------------------------------------- #
# leading forms
# --------------------------------------------------------------------------- #

def _normalized_linear_forms(p: int):
    """The p + 1 points of P^1(F_p) as (a, b) meaning a*x + b*y."""
    return [(1, t) for t in range(p)] + [(0, 1)]


def _binary_power(ell: tuple[int, int], r: int, p: int) -> np.ndarray:
    """Coefficients of (a x + b y)^r indexed by x-exponent."""
    a, b = ell
    return np.array([math.comb(r, i) * pow(a, i, p) * pow(b, r - i, p) % p
                     for i in range(r + 1)], dtype=np.int64)


@dataclass(frozen=True)
class LeadingForm:
    """Lowest-degree homogeneous part of a nonzero series.

    ``coeffs[i]`` is the coefficient of ``x**i * y**(order - i)``.
    """

    order: int
    coeffs: tuple[int, ...]
    p: int

    def __post_init__(self):
        if not any(self.coeffs):
            raise ValueError("a leading form has at least one nonzero coefficient")

    def monomials(self) -> list[tuple[int, int, int]]:
        return [(i, self.order - i, c) for i, c in enumerate(self.coeffs) if c]

    def evaluate(self, x: int, y: int) -> int:
        return sum(c * pow(x, i, self.p) * pow(y, self.order - i, self.p)
                   for i, c in enumerate(self.coeffs)) % self.p

    def divisible_by(self, ell: tuple[int, int]) -> bool:
        """Whether the linear form a*x + b*y divides this form."""
        a, b = ell
        return self.evaluate(b % self.p, -a % self.p) == 0

    def is_pure_power(self, var: str) -> bool:
        """Whether the form is a scalar times x^r (``var='x'``) or y^r."""
        idx = self.order if var == "x" else 0
        return all(c == 0 for i, c in enumerate(self.coeffs) if i != idx)

    def linear_power(self) -> tuple[int, int] | None:
        """If the form is a scalar times ell^r for a linear ell over F_p, return ell.

        ``ell`` is normalized as ``(1, t)`` for x + t*y or ``(0, 1)`` for y.
        For ``order == 0`` there is no linear form and ``None`` is returned.
        """
        if self.order == 0:
            return None
        f = np.array(self.coeffs, dtype=np.int64)
        for ell in _normalized_linear_forms(self.p):
            g = _binary_power(ell, self.order, self.p)
            k = int(np.nonzero(g)[0][0])
            if f[k] == 0:
                continue
            lam = f[k] * inv_mod(int(g[k]), self.p) % self.p
            if np.array_equal(f % self.p, lam * g % self.p):
                return ell
        return None

    def scalar_multiple_of(self, other: LeadingForm) -> int | None:
        """lambda with self == lambda * other, or None."""
        if self.order != other.order or self.p != other.p:
            return None
        f = np.array(self.coeffs)
        g = np.array(other.coeffs)
        k = int(np.nonzero(g)[0][0])
        lam = int(f[k]) * inv_mod(int(g[k]), self.p) % self.p
        if np.array_equal(f % self.p, lam * g % self.p):
            return lam
        return None

    def __str__(self):
        return str(TruncatedSeries({(i, j): c for i, j, c in self.monomials()},
                                   self.p, self.order + 1))


def ord_and_leading_form(f: TruncatedSeries) -> LeadingForm:
    for d in range(f.precision):
        h = f.homogeneous(d)
        if h.any():
            return LeadingForm(d, tuple(int(v) for v in h), f.p)
    raise ZeroSeriesError(f"series vanishes below precision {f.precision}; order unknown")


# --------------------------------------------------------------------------- #
# multiplication and inversion
# --------------------------------------------------------------------------- #

def _homogeneous_parts(c: np.ndarray, n: int):
    parts = []
    for d in range(n):
        rows, cols = _diag_index(d)
        parts.append(c[rows, cols])
    return parts


def series_mul(f: TruncatedSeries, g: TruncatedSeries) -> TruncatedSeries:
    """Product, exact below ``min(N_f, N_g)``."""
    f._check(g)
    n = min(f.precision, g.precision)
    hf = _homogeneous_parts(f.c, n)
    hg = _homogeneous_parts(g.c, n)
    nzf = [k for k in range(n) if hf[k].any()]
    nzg = {k for k in range(n) if hg[k].any()}
    out = np.zeros((n, n), dtype=np.int64)
    for d in range(n):
        acc = None
        for k in nzf:
            if k > d:
                break
            if d - k in nzg:
                term = np.convolve(hf[k], hg[d - k])
                acc = term if acc is None else acc + term
        if acc is not None:
            rows, cols = _diag_index(d)
            out[rows, cols] = acc % f.p
    return TruncatedSeries(out, f.p, n, _trusted=True)


def series_invert_unit(f: TruncatedSeries) -> TruncatedSeries:
    """Inverse of a unit by degree-by-degree back-substitution."""
    p, n = f.p, f.precision
    c0 = int(f.c[0, 0])
    if c0 == 0:
        raise NonUnitError("series with zero constant term is not a unit")
    inv0 = inv_mod(c0, p)
    hf = _homogeneous_parts(f.c, n)
    nzf = [k for k in range(1, n) if hf[k].any()]
    hg = [np.array([inv0], dtype=np.int64)]
    for d in range(1, n):
        acc = np.zeros(d + 1, dtype=np.int64)
        for k in nzf:
            if k > d:
                break
            acc += np.convolve(hf[k], hg[d - k])
        hg.append((-inv0 * (acc % p)) % p)
    out = np.zeros((n, n), dtype=np.int64)
    for d in range(n):
        rows, cols = _diag_index(d)
        out[rows, cols] = hg[d]
    return TruncatedSeries(out, p, n, _trusted=True)


# --------------------------------------------------------------------------- #
# substitution
# --------------------------------------------------------------------------- #

@dataclass(frozen=True)
class Substitution:
    """Ring map k[[x, y]] -> k[[x', y']] given by x -> X(x', y'), y -> Y(x', y')."""

    X: TruncatedSeries
    Y: TruncatedSeries

    def __post_init__(self):
        self.X._check(self.Y)
        if self.X.constant_term or self.Y.constant_term:
            raise ValueError("substituents must have zero constant term")

    def pullback(self, f: TruncatedSeries) -> TruncatedSeries:
        f._check(self.X)
        n = min(f.precision, self.X.precision, self.Y.precision)
        X = self.X.truncate(n)
        Y = self.Y.truncate(n)
        f = f.truncate(n)
        ypow = [TruncatedSeries.constant(1, f.p, n)]
        for _ in range(1, n):
            ypow.append(ypow[-1] * Y)
        rows = []
        for a in range(n):
            acc = np.zeros((n, n), dtype=np.int64)
            for b in range(n - a):
                if f.c[a, b]:
                    acc += f.c[a, b] * ypow[b].c
            rows.append(TruncatedSeries._raw(acc, f.p, n))
        result = rows[-1]
        for a in range(n - 2, -1, -1):
            result = result * X + rows[a]
        return result


def substitute(f: TruncatedSeries, chart) -> TruncatedSeries:
    """Pull ``f`` back along a chart map or a general :class:`Substitution`.

    Any object with a ``pullback(series)`` method is accepted; chart maps from
    :mod:`ladderwork.frames` provide exact fast paths.
    """
    return chart.pullback(f)


# --------------------------------------------------------------------------- #
# monomial division
# --------------------------------------------------------------------------- #

def monomial_divide_exact(f: TruncatedSeries, a: int, b: int) -> TruncatedSeries:
    """``f / (x**a y**b)``; raises if some known term is not divisible."""
    if a < 0 or b < 0:
        raise ValueError("monomial exponents must be nonnegative")
    n = f.precision - a - b
    if n < 1:
        raise PrecisionError(
            f"dividing by x^{a}y^{b} exhausts precision {f.precision}")
    bad = f.c.copy()
    bad[a:, b:] = 0
    if bad.any():
        ii, jj = np.nonzero(bad)
        k = int(np.argmin(ii + jj))
        i, j = int(ii[k]), int(jj[k])
        raise InexactDivisionError(
            f"term {int(f.c[i, j])}*x^{i}y^{j} is not divisible by x^{a}y^{b}")
    arr = f.c[a : a + n, b : b + n].copy()
    return TruncatedSeries._raw(arr, f.p, n)


# --------------------------------------------------------------------------- #
# Weierstrass division and preparation
# --------------------------------------------------------------------------- #

def _split(g: TruncatedSeries, d: int) -> tuple[TruncatedSeries, TruncatedSeries]:
    """``g = low + y**d * high`` with ``low`` of y-degree < d (no precision loss in low)."""
    low = g.c.copy()
    low[:, d:] = 0
    low_s = TruncatedSeries(low, g.p, g.precision, _trusted=True)
    high_arr = g.c.copy()
    high_arr[:, :d] = 0
    high = np.zeros_like(g.c)
    high[:, : g.precision - d] = high_arr[:, d:]
    return low_s, TruncatedSeries(high, g.p, g.precision, _trusted=True)


def _weight(f: TruncatedSeries, d: int) -> Fraction:
    """Weight for x (y has weight 1) making ``f`` weighted-regular of order d."""
    w = Fraction(1)
    ii, jj = np.nonzero(f.c[:, :d])
    for i, j in zip(ii, jj):
        if i > 0:
            w = max(w, Fraction(d - int(j), int(i)))
    return w


def _weighted_to_total(bound: Fraction, w: Fraction) -> int:
    """Largest M such that every monomial of total degree < M has weighted degree < bound."""
    if bound <= 0:
        return 0
    # worst monomial of total degree M-1 is x^(M-1) because w >= 1
    return math.ceil(bound / w)


def _x_univariate_precisions(bound: Fraction, w: Fraction, d: int) -> list[int]:
    """Per y-exponent k < d, number of known x-coefficients when weighted degree < bound."""
    return [max(0, math.ceil((bound - k) / w)) for k in range(d)]


def _wdivide_y(g: TruncatedSeries, f: TruncatedSeries):
    """Divide by f distinguished in y. Returns (q, r, d, w, n) before final truncation."""
    g._check(f)
    n = min(g.precision, f.precision)
    f = f.truncate(n)
    g = g.truncate(n)
    d = f.order_in("y")
    if d >= n:
        raise PrecisionError(f"distinguished order {d} not below precision {n}")
    w = _weight(f, d)
    f_low, f_high = _split(f, d)
    inv_high = series_invert_unit(f_high)
    q = TruncatedSeries.zero(f.p, n)
    r = TruncatedSeries.zero(f.p, n)
    G = g
    for _ in range(n + 1):
        if G.is_zero():
            break
        g_low, g_high = _split(G, d)
        qk = g_high * inv_high
        q = q + qk
        r = r + g_low
        G = -(qk * f_low)
    else:  # pragma: no cover - x-adic order grows each round
        raise RuntimeError("Weierstrass division did not stabilise")
    return q, r, d, w, n


def weierstrass_divide(g: TruncatedSeries, f: TruncatedSeries, axis: str = "y"):
    """Weierstrass division ``g = q*f + r`` with ``r`` of ``axis``-degree < d.

    ``d`` is the order of ``f`` restricted to the ``axis`` line.  The division
    is continuous for the weighted degree giving ``axis`` weight 1 and the
    other variable the smallest weight ``w >= 1`` under which ``f`` is
    weighted-regular of order ``d``.  Inputs known below total degree N are
    known below weighted degree N, so ``r`` is exact below weighted degree N
    and ``q`` below N - d; results are truncated to the total-degree
    precision that this guarantees.

    Returns ``(q, r)``.
    """
    if axis not in ("x", "y"):
        raise ValueError(f"axis must be 'x' or 'y', got {axis!r}")
    if axis == "x":
        q, r = weierstrass_divide(g.swap(), f.swap(), "y")
        return q.swap(), r.swap()
    q, r, d, w, n = _wdivide_y(g, f)
    nq = _weighted_to_total(Fraction(n - d), w)
    nr = _weighted_to_total(Fraction(n), w)
    if nq < 1 or nr < 1:
        raise PrecisionError("precision exhausted by Weierstrass division")
    return q.truncate(min(nq, n)), r.truncate(min(nr, n))


@dataclass(frozen=True)
class DistinguishedPolynomial:
    """``z**d + sum_{k<d} coeffs[k](t) * z**k`` in the distinguished variable z.

    ``coeffs[k]`` is a univariate series in the other variable t (stored as a
    1-D integer array) known below ``precisions[k]``; each has zero constant
    term.  ``axis`` names z.
    """

    axis: str
    degree: int
    coeffs: tuple[tuple[int, ...], ...]
    precisions: tuple[int, ...]
    p: int

    def series(self, precision: int | None = None) -> TruncatedSeries:
        """As a bivariate series, at the largest precision the coefficients allow."""
        # degree 0 is the exact polynomial 1, known at every precision
        limit = min((k + pk for k, pk in enumerate(self.precisions)), default=None)
        if precision is None:
            precision = limit if limit is not None else 1
        elif limit is not None and precision > limit:
            raise PrecisionError(f"coefficients only support precision {limit}")
        if precision < 1:
            raise PrecisionError("distinguished polynomial has no known terms")
        terms = {}
        for k, cs in enumerate(self.coeffs):
            for a, v in enumerate(cs):
                if v:
                    terms[(a, k)] = v
        terms[(0, self.degree)] = 1
        s = TruncatedSeries(terms, self.p, precision)
        return s.swap() if self.axis == "x" else s

    def __str__(self):
        z = self.axis
        t = "y" if z == "x" else "x"
        parts = [_mono(z, self.degree) or "1"]
        for k in range(self.degree - 1, -1, -1):
            cs = [(a, v) for a, v in enumerate(self.coeffs[k]) if v]
            if cs:
                poly = " + ".join(f"{v}*{_mono(t, a)}" for a, v in cs)
                parts.append(f"({poly})*{_mono(z, k)}" if k else f"({poly})")
        return " + ".join(parts)


def _mono(var: str, k: int) -> str:
    return "" if k == 0 else var if k == 1 else f"{var}^{k}"


class WeierstrassForm(NamedTuple):
    unit: TruncatedSeries
    poly: DistinguishedPolynomial


def weierstrass_prepare(f: TruncatedSeries, distinguished_variable: str = "y") -> WeierstrassForm:
    """``f = unit * poly`` with ``poly`` a distinguished polynomial.

    Computed by iterated Weierstrass division of ``z**d`` by ``f``:
    ``z**d = q*f + r`` gives ``poly = z**d - r`` and ``unit = q**-1``.
    """
    axis = distinguished_variable
    if axis not in ("x", "y"):
        raise ValueError(f"axis must be 'x' or 'y', got {axis!r}")
    g = f.swap() if axis == "x" else f
    d = g.order_in("y")
    n = g.precision
    zd = TruncatedSeries.monomial(0, d, g.p, n) if d < n else None
    if zd is None:
        raise PrecisionError(f"distinguished order {d} not below precision {n}")
    q, r, d, w, n = _wdivide_y(zd, g)
    nq = min(_weighted_to_total(Fraction(n - d), w), n)
    if nq < 1:
        raise PrecisionError("precision exhausted by Weierstrass preparation")
    unit = series_invert_unit(q.truncate(nq))
    precs = _x_univariate_precisions(Fraction(n), w, d)
    coeffs = []
    for k in range(d):
        col = [int(-r.c[a, k]) % g.p for a in range(min(precs[k], n - k))]
        coeffs.append(tuple(col))
    precs = tuple(min(pk, n - k) for k, pk in enumerate(precs))
    poly = DistinguishedPolynomial(axis, d, tuple(coeffs), precs, g.p)
    if axis == "x":
        unit = unit.swap()
    return WeierstrassForm(unit, poly)


def distinguished_root(poly: DistinguishedPolynomial) -> tuple[int, ...] | None:
    """Return h (coefficients in t) with ``poly == (z - h)**d`` at known precision.

    Uses the characteristic-p criterion: write d = q*m with q a power of p and
    p not dividing m.  Then (z - h)^d = (z^q - h^q)^m, so every coefficient of
    z^k with q not dividing k must vanish, and h^q is read off the z^(d-q)
    coefficient.  Returns ``None`` when ``poly`` is not a perfect d-th power.
    """
    p, d = poly.p, poly.degree
    if d == 0:
        return ()
    q = 1
    while d % (q * p) == 0:
        q *= p
    m = d // q
    # -h^q * m = coefficient of z^(d-q)
    top = poly.coeffs[d - q]
    m_inv = inv_mod(m, p)
    hq = [(-v * m_inv) % p for v in top]
    if any(v for a, v in enumerate(hq) if a % q):
        return None
    h = [hq[a] for a in range(0, len(hq), q)]
    # verify every coefficient against the binomial expansion
    n_h = len(h)
    for k in range(d):
        pk = poly.precisions[k]
        target = _univariate_power([(-v) % p for v in h], d - k, p, pk, n_h * q)
        expect = [math.comb(d, k) * v % p for v in target]
        got = list(poly.coeffs[k]) + [0] * (pk - len(poly.coeffs[k]))
        if expect[:pk] != got[:pk]:
            return None
    return tuple(h)


def _univariate_power(coeffs, e: int, p: int, n: int, known: int) -> list[int]:
    """(sum coeffs[a] t^a)^e truncated at t^n, assuming ``coeffs`` exact below ``known``."""
    base = np.array(coeffs[:n] if coeffs else [0], dtype=np.int64)
    out = np.zeros(max(n, 1), dtype=np.int64)
    out[0] = 1
    for _ in range(e):
        out = np.convolve(out, base)[: max(n, 1)] % p
    res = [int(v) for v in out[:n]]
    return res + [0] * (n - len(res))


# --------------------------------------------------------------------------- #
# regular elements: implicit function, divisibility, exact division
# --------------------------------------------------------------------------- #

def _compose_line(f: TruncatedSeries, g: np.ndarray) -> np.ndarray:
    """f(g(y), y) as a 1-D array of length N (g is a 1-D array with g[0] = 0)."""
    n, p = f.precision, f.p
    out = np.zeros(n, dtype=np.int64)
    gpow = np.zeros(n, dtype=np.int64)
    gpow[0] = 1
    for a in range(n):
        row = f.c[a, :]
        if row.any():
            out = (out + np.convolve(gpow, row)[:n]) % p
        gpow = np.convolve(gpow, g)[:n] % p
        if not gpow.any():
            break
    return out


def solve_coordinate(w: TruncatedSeries, var: str = "x") -> TruncatedSeries:
    """Solve ``w = 0`` for ``var`` as a series in the other variable.

    ``w`` must have order 1 with a nonzero ``var`` coefficient in its leading
    form.  Returns ``g`` with ``w(g(y), y) == 0`` below precision (for
    ``var='x'``; symmetric for ``var='y'``), ``g(0) = 0``.
    """
    if var == "y":
        return solve_coordinate(w.swap(), "x").swap()
    if var != "x":
        raise ValueError(f"var must be 'x' or 'y', got {var!r}")
    n, p = w.precision, w.p
    if n < 2:
        raise PrecisionError("precision too small to read the linear part")
    if w.c[0, 0] != 0 or w.c[1, 0] == 0:
        raise NotRegularError(f"{w} is not regular in x")
    a_inv = inv_mod(int(w.c[1, 0]), p)
    g = np.zeros(n, dtype=np.int64)
    for _ in range(n):
        res = _compose_line(w, g)
        if not res.any():
            break
        g = (g - a_inv * res) % p
    else:
        if _compose_line(w, g).any():  # pragma: no cover - linear convergence
            raise RuntimeError("implicit function iteration did not converge")
    arr = np.zeros((n, n), dtype=np.int64)
    arr[0, :] = g
    # stored as a series in y whose value is the x-coordinate
    return TruncatedSeries(arr, p, n, _trusted=True)


def _regular_axis(w: TruncatedSeries) -> str:
    lf = ord_and_leading_form(w)
    if lf.order != 1:
        raise NotRegularError(f"{w} has order {lf.order}, not 1")
    # coeffs[1] is the x coefficient, coeffs[0] the y coefficient
    return "x" if lf.coeffs[1] else "y"


def divides_prepared(w: TruncatedSeries, f: TruncatedSeries) -> bool:
    """Whether the regular element ``w`` divides ``f`` at working precision.

    ``False`` is definitive.  ``True`` means ``f`` vanishes on ``w = 0`` below
    the common precision.
    """
    w._check(f)
    axis = _regular_axis(w)
    n = min(w.precision, f.precision)
    g = solve_coordinate(w.truncate(n), axis)
    if axis == "x":
        line = _compose_line(f.truncate(n), g.c[0, :].copy())
    else:
        line = _compose_line(f.truncate(n).swap(), g.c[:, 0].copy())
    return not line.any()


def divide_exact(f: TruncatedSeries, w: TruncatedSeries) -> TruncatedSeries:
    """``f / w`` for a regular element ``w``; raises when ``w`` does not divide ``f``."""
    axis = _regular_axis(w)
    q, r = weierstrass_divide(f, w, axis)
    if not r.is_zero():
        raise InexactDivisionError(f"{w} does not divide the series (remainder {r})")
    return q
