"""Blowup charts between parameter frames, and domination detection.

Two chart shapes occur:

``monomial_chart(j)``
    old = (new1 * new2**j, new2)
``translation_chart(e, t)``
    old = (new1**e * (new2 + t), new1), with t != 0

Both are applied with exact fast paths that never lose precision.  Chains of
charts are kept as :class:`ChartSequence`; adjacent charts are merged when a
single chart describes their composite.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .field import PrimeFieldElement
from .pseries import (
    PrecisionError,
    Substitution,
    TruncatedSeries,
    ZeroSeriesError,
    divides_prepared,
    divide_exact,
    monomial_divide_exact,
    ord_and_leading_form,
    series_invert_unit,
    weierstrass_divide,
)


@dataclass(frozen=True)
class ChartMap:
    kind: str
    exponent: int
    t: int | None = None

    def __post_init__(self):
        if self.kind == "monomial":
            if self.exponent < 1 or self.t is not None:
                raise ValueError("monomial chart needs j >= 1 and no translation")
        elif self.kind == "translation":
            if self.exponent < 1:
                raise ValueError("translation chart needs e >= 1")
            if self.t is None or self.t == 0:
                raise ValueError("translation chart needs a nonzero translation")
        else:
            raise ValueError(f"unknown chart kind {self.kind!r}")

    @property
    def j(self) -> int:
        return self.exponent

    @property
    def e(self) -> int:
        return self.exponent

    def _t(self, p: int) -> int:
        t = self.t % p
        if t == 0:
            raise ValueError(f"translation {self.t} vanishes in F_{p}")
        return t

    def pullback(self, f: TruncatedSeries) -> TruncatedSeries:
        """Express ``f`` (in old coordinates) in the new coordinates."""
        n, p = f.precision, f.p
        out = np.zeros((n, n), dtype=np.int64)
        if self.kind == "monomial":
            j = self.exponent
            for a in range(n):
                shift = j * a
                width = n - a - shift
                if width <= 0:
                    break
                out[a, shift:shift + width] = f.c[a, :width]
        else:
            e, t = self.exponent, self._t(p)
            for a in range(n):
                if e * a >= n:
                    break
                row = f.c[a, : n - a]
                if not row.any():
                    continue
                # x^a y^b -> x^(e*a + b) (y + t)^a
                binom = np.array([math.comb(a, k) * pow(t, a - k, p) % p
                                  for k in range(a + 1)], dtype=np.int64)
                rows = min(n - e * a, row.size)
                block = np.outer(row[:rows], binom)
                cols = min(a + 1, n)
                out[e * a : e * a + rows, :cols] += block[:, :cols]
        return TruncatedSeries._raw(out, p, n)

    def substituents(self, p: int, precision: int):
        """``(X, Y)``: the old coordinates as series in the new ones."""
        x = TruncatedSeries.monomial(1, 0, p, precision)
        y = TruncatedSeries.monomial(0, 1, p, precision)
        return self.pullback(x), self.pullback(y)

    def substitution(self, p: int, precision: int) -> Substitution:
        return Substitution(*self.substituents(p, precision))

    def push(self, new1: TruncatedSeries, new2: TruncatedSeries):
        """Old pair from a new pair: the chart's defining formulas evaluated on series."""
        if self.kind == "monomial":
            return new1 * new2 ** self.exponent, new2
        return new1 ** self.exponent * (new2 + self.t), new1

    def to_json(self) -> dict:
        key = "j" if self.kind == "monomial" else "e"
        return {"kind": self.kind, key: self.exponent, "t": self.t}

    @classmethod
    def from_json(cls, data: dict) -> ChartMap:
        if data["kind"] == "monomial":
            return cls("monomial", int(data["j"]))
        return cls("translation", int(data["e"]), int(data["t"]))

    def __str__(self):
        if self.kind == "monomial":
            return f"monomial_chart({self.exponent})"
        return f"translation_chart({self.exponent}, {self.t})"


def monomial_chart(j: int) -> ChartMap:
    return ChartMap("monomial", int(j))


def translation_chart(e: int, t) -> ChartMap:
    if isinstance(t, PrimeFieldElement):
        t = t.residue
    return ChartMap("translation", int(e), int(t))


def _merge(first: ChartMap, then: ChartMap) -> ChartMap | None:
    """Single chart equal to applying ``first`` and then ``then``, if one exists."""
    if first.kind == "monomial" and then.kind == "monomial":
        return monomial_chart(first.exponent + then.exponent)
    if first.kind == "monomial" and then.kind == "translation":
        return translation_chart(first.exponent + then.exponent, then.t)
    return None


@dataclass(frozen=True)
class ChartSequence:
    """Charts applied left to right; the empty sequence is the identity."""

    charts: tuple[ChartMap, ...] = ()

    def pullback(self, f: TruncatedSeries) -> TruncatedSeries:
        for ch in self.charts:
            f = ch.pullback(f)
        return f

    def substituents(self, p: int, precision: int):
        x = TruncatedSeries.monomial(1, 0, p, precision)
        y = TruncatedSeries.monomial(0, 1, p, precision)
        return self.pullback(x), self.pullback(y)

    def substitution(self, p: int, precision: int) -> Substitution:
        return Substitution(*self.substituents(p, precision))

    def as_chart(self) -> ChartMap | None:
        return self.charts[0] if len(self.charts) == 1 else None

    def to_json(self) -> list:
        return [ch.to_json() for ch in self.charts]

    def __len__(self):
        return len(self.charts)


IDENTITY = ChartSequence()


def compose_charts(outer, inner) -> ChartMap | ChartSequence:
    """Apply ``outer`` then ``inner``; returns a single chart whenever one exists."""
    seq = []
    for part in (outer, inner):
        if isinstance(part, ChartSequence):
            seq.extend(part.charts)
        elif isinstance(part, ChartMap):
            seq.append(part)
        else:
            raise TypeError(f"not a chart: {part!r}")
    merged: list[ChartMap] = []
    for ch in seq:
        if merged:
            m = _merge(merged[-1], ch)
            if m is not None:
                merged[-1] = m
                continue
        merged.append(ch)
    if len(merged) == 1:
        return merged[0]
    return ChartSequence(tuple(merged))


def block_chart(alpha, p: int) -> ChartMap:
    """The p steps of one upstairs block: (p - 1) monomial steps then the translation."""
    chart = IDENTITY
    for _ in range(p - 1):
        chart = compose_charts(chart, monomial_chart(1))
    return compose_charts(chart, translation_chart(1, alpha))


# --------------------------------------------------------------------------- #
# frames and domination
# --------------------------------------------------------------------------- #

@dataclass(frozen=True)
class Frame:
    """Pullbacks of the downstairs parameters u, v to an upstairs frame."""

    level: tuple[int, int]
    u: TruncatedSeries
    v: TruncatedSeries

    def __post_init__(self):
        for name, s in (("u", self.u), ("v", self.v)):
            if s.constant_term:
                raise ValueError(f"{name} has a nonzero constant term")
            if s.is_zero():
                raise ZeroSeriesError(f"{name} vanishes below precision")


@dataclass(frozen=True)
class DominationResult:
    """``chart is None`` when no quadratic transform downstairs is dominated.

    Otherwise ``chart`` relates the downstairs parameters to the next pair
    ``(u_next, v_next)``: (u, v) = chart(u_next, v_next), or (v, u) when
    ``swapped``.
    """

    chart: ChartMap | None = None
    beta: int | None = None
    swapped: bool = False
    u_next: TruncatedSeries | None = None
    v_next: TruncatedSeries | None = None

    def __bool__(self):
        return self.chart is not None

    def reconstruct(self):
        """(u, v) recomputed from the next pair through the chart."""
        if self.chart is None:
            raise ValueError("no chart to apply")
        a, b = self.chart.push(self.u_next, self.v_next)
        return (b, a) if self.swapped else (a, b)

    def to_json(self):
        if self.chart is None:
            return None
        out = self.chart.to_json()
        if self.swapped:
            out["swapped"] = True
        return out


class _Factored:
    """x^a y^b * cofactor, with the cofactor free of monomial factors."""

    def __init__(self, s: TruncatedSeries):
        self.a, self.b = s.monomial_factor()
        self.cof = monomial_divide_exact(s, self.a, self.b)
        self.unit = self.cof.is_unit()
        self.order = None if self.unit else ord_and_leading_form(self.cof).order


def _divides(w: _Factored, target: TruncatedSeries) -> TruncatedSeries | None:
    """``target / w.cof`` if the (non-unit) cofactor divides, else None."""
    if w.order == 1:
        if not divides_prepared(w.cof, target):
            return None
        return divide_exact(target, w.cof)
    q, r = weierstrass_divide(target, w.cof, "y")
    return q if r.is_zero() else None


def _power_quotient(num: TruncatedSeries, den: TruncatedSeries):
    """Largest j >= 1 with den**j | num, and num / den**j; (0, None) if den does not divide."""
    fn, fd = _Factored(num), _Factored(den)
    bounds = []
    if fd.a:
        bounds.append(fn.a // fd.a)
    if fd.b:
        bounds.append(fn.b // fd.b)
    jmax = min(bounds) if bounds else None
    cof = fn.cof
    j = 0
    while jmax is None or j < jmax:
        if fd.unit:
            cof = cof * series_invert_unit(fd.cof)
        else:
            nxt = _divides(fd, cof)
            if nxt is None:
                break
            cof = nxt
        j += 1
        if jmax is None and j > num.precision:
            raise PrecisionError("divisibility undecided at this precision")
    if j == 0:
        return 0, None
    quotient = cof.shift(fn.a - j * fd.a, fn.b - j * fd.b)
    n = min(quotient.precision, num.precision - j * (fd.a + fd.b))
    return j, quotient.truncate(max(n, 1))


def detect_dominated_chart(frame: Frame) -> DominationResult:
    """First quadratic-transform chart downstairs dominated by the frame.

    Decides ``v | u`` (or ``u | v``) by comparing monomial factors and testing
    the non-monomial cofactors for divisibility.  With j maximal such that
    v^j divides u: a unit quotient gives ``translation_chart(j, beta)`` with
    beta its constant term, otherwise ``monomial_chart(j)``.
    """
    for swapped, (num, den) in ((False, (frame.u, frame.v)), (True, (frame.v, frame.u))):
        j, q = _power_quotient(num, den)
        if j == 0:
            continue
        if q.is_unit():
            beta = q.constant_term
            return DominationResult(translation_chart(j, beta), beta, swapped,
                                    den, q - beta)
        return DominationResult(monomial_chart(j), None, swapped, q, den)
    return DominationResult()
