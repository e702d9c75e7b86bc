"""Values of the limit valuation, read off the ladder transcript.

An element f of k[[x, y]] is pulled through the block charts until, at some
level d, it is a unit times a power of x_d.  Its value is then a * nu(x_d).
The value of x_d is itself computed from the charts: x_(d-1) pulls back to
a unit times x_d^m, so nu(x_d) = nu(x_(d-1)) / m.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import total_ordering

from .frames import translation_chart
from .ladder import Transcript, choose_alpha
from .pseries import PrecisionError, TruncatedSeries, monomial_divide_exact


class DepthInsufficient(LookupError):
    """The element is not yet a unit times a power of x at the deepest level."""

    def __init__(self, message, level=None, series=None):
        super().__init__(message)
        self.level = level
        self.series = series


@total_ordering
class DyadicValue:
    """m / p^k with k >= 0 and p not dividing m unless k == 0."""

    __slots__ = ("numerator", "p_exponent", "p")

    def __init__(self, numerator: int, p_exponent: int, p: int):
        numerator, p_exponent = int(numerator), int(p_exponent)
        if p_exponent < 0:
            numerator *= p ** (-p_exponent)
            p_exponent = 0
        while p_exponent and numerator % p == 0:
            numerator //= p
            p_exponent -= 1
        if numerator == 0:
            p_exponent = 0
        self.numerator, self.p_exponent, self.p = numerator, p_exponent, p

    @classmethod
    def from_fraction(cls, q, p: int) -> DyadicValue:
        q = Fraction(q)
        den, k = q.denominator, 0
        while den % p == 0:
            den //= p
            k += 1
        if den != 1:
            raise ValueError(f"{q} is not in Z[1/{p}]")
        return cls(q.numerator, k, p)

    def as_fraction(self) -> Fraction:
        return Fraction(self.numerator, self.p ** self.p_exponent)

    def _other(self, other):
        if isinstance(other, DyadicValue):
            if other.p != self.p:
                raise ValueError("values for different primes")
            return other.as_fraction()
        if isinstance(other, (int, Fraction)):
            return Fraction(other)
        return NotImplemented

    def __add__(self, other):
        o = self._other(other)
        if o is NotImplemented:
            return NotImplemented
        return DyadicValue.from_fraction(self.as_fraction() + o, self.p)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._other(other)
        if o is NotImplemented:
            return NotImplemented
        return DyadicValue.from_fraction(self.as_fraction() - o, self.p)

    def __neg__(self):
        return DyadicValue(-self.numerator, self.p_exponent, self.p)

    def __mul__(self, n):
        if not isinstance(n, int):
            return NotImplemented
        return DyadicValue(self.numerator * n, self.p_exponent, self.p)

    __rmul__ = __mul__

    def __eq__(self, other):
        o = self._other(other)
        if o is NotImplemented:
            return NotImplemented
        return self.as_fraction() == o

    def __lt__(self, other):
        o = self._other(other)
        if o is NotImplemented:
            return NotImplemented
        return self.as_fraction() < o

    def __hash__(self):
        return hash(self.as_fraction())

    def __str__(self):
        if self.p_exponent == 0:
            return str(self.numerator)
        return f"{self.numerator}/{self.p ** self.p_exponent}"

    def __repr__(self):
        return f"DyadicValue({self})"


def dyadic_gcd(values) -> DyadicValue:
    """Positive generator of the subgroup of Z[1/p] generated by ``values``."""
    values = list(values)
    p = values[0].p
    k = max(v.p_exponent for v in values)
    g = 0
    for v in values:
        g = math.gcd(g, v.numerator * p ** (k - v.p_exponent))
    return DyadicValue(g, k, p)


# --------------------------------------------------------------------------- #
# pulling through the transcript
# --------------------------------------------------------------------------- #

def _charts(transcript: Transcript):
    return [translation_chart(transcript.p, int(b.alpha)) for b in transcript.blocks]


def _x_values(transcript: Transcript, charts) -> tuple[list[DyadicValue], list[int]]:
    """nu(x_d) for every level, from the x-exponent of each pulled-back coordinate."""
    p = transcript.p
    vals = [DyadicValue(1, 0, p)]
    consts = []
    for ch in charts:
        x = TruncatedSeries.monomial(1, 0, p, p + 2)
        xd = ch.pullback(x)
        a, b = xd.monomial_factor()
        cof = monomial_divide_exact(xd, a, b)
        if b or not cof.is_unit():
            raise ValueError("coordinate does not pull back to a unit times a power of x")
        consts.append(cof.constant_term)
        prev = vals[-1]
        vals.append(DyadicValue.from_fraction(prev.as_fraction() / a, p))
    return vals, consts


def _resolve(f: TruncatedSeries, level: int, xval: DyadicValue, p: int):
    """(value, unit constant) if f is a unit times x^a at this level, else None."""
    if f.is_zero():
        raise PrecisionError(f"series vanishes below precision {f.precision} at level {level}")
    a, b = f.monomial_factor()
    if b:
        return None
    cof = monomial_divide_exact(f, a, 0)
    if not cof.is_unit():
        return None
    value = xval * a
    # unknown terms x^i y^j (i + j >= N) have value >= N * nu(y_d) = N * nu(x_d) / p
    floor = DyadicValue.from_fraction(xval.as_fraction() * f.precision / p, p)
    if not value < floor:
        raise PrecisionError(f"value {value} not certified at precision {f.precision}")
    return value, cof.constant_term


def value_of(f: TruncatedSeries, transcript: Transcript) -> DyadicValue:
    """Value of f (given in the coordinates of the first frame)."""
    if f.p != transcript.p:
        raise ValueError("series and transcript use different primes")
    charts = _charts(transcript)
    xvals, _ = _x_values(transcript, charts)
    g = f
    for d in range(len(charts) + 1):
        if d:
            g = charts[d - 1].pullback(g)
        hit = _resolve(g, d, xvals[d], f.p)
        if hit is not None:
            return hit[0]
    raise DepthInsufficient(
        f"not a unit times a power of x after {len(charts)} blocks", len(charts), g)


# --------------------------------------------------------------------------- #
# reports
# --------------------------------------------------------------------------- #

@dataclass
class ValuationReport:
    p: int
    depth: int
    levels: list[dict]
    generators_up: list[DyadicValue]
    generators_down: list[DyadicValue]
    unit_constants: list[int]
    metadata: dict

    @property
    def groups_agree(self) -> bool:
        return self.generators_up == self.generators_down

    @property
    def residue_constants_in_prime_field(self) -> bool:
        return all(0 < c < self.p for c in self.unit_constants)

    def to_json(self) -> dict:
        return {
            "p": self.p,
            "depth": self.depth,
            "levels": [{k: (str(v) if isinstance(v, DyadicValue) else v) for k, v in lv.items()}
                       for lv in self.levels],
            "generators": {"upstairs": [str(g) for g in self.generators_up],
                           "downstairs": [str(g) for g in self.generators_down]},
            "finite_stage": {"e": 1 if self.groups_agree else None,
                             "f": 1 if self.residue_constants_in_prime_field else None,
                             "unit_constants": sorted(set(self.unit_constants))},
            "metadata": self.metadata,
        }


def value_group_report(transcript: Transcript) -> ValuationReport:
    """Generators of the value groups level by level, upstairs and downstairs.

    Upstairs, level d contributes nu(x_d).  Downstairs it contributes
    nu(u_d) and nu(v_d), where u_d, v_d are the parameters of the d-th
    downstairs ring pulled back to level d.  v_d only becomes a unit times a
    power of x one chart later, so the last level is resolved through the
    next block chart chosen by the transcript's own policy.
    """
    p = transcript.p
    charts = _charts(transcript)
    states = transcript.states()
    nxt = choose_alpha(states[-1], transcript.policy)
    ext = charts + [translation_chart(p, int(nxt))]
    xvals, consts = _x_values(transcript, ext)
    unit_constants = list(consts)
    levels = []
    gens_up, gens_down = [], []
    seen_up, seen_down = [], []
    for d, st in enumerate(states):
        uv = []
        for s in (st.u, st.v):
            hit = _resolve(s, d, xvals[d], p)
            if hit is None:
                hit = _resolve(ext[d].pullback(s), d + 1, xvals[d + 1], p)
            if hit is None:
                raise DepthInsufficient(f"parameter at level {d} does not resolve", d, s)
            uv.append(hit[0])
            unit_constants.append(hit[1])
        unit_constants += [int(st.c), int(st.f), int(st.e), int(st.tau_bar)]
        seen_up.append(xvals[d])
        seen_down.extend(uv)
        gens_up.append(dyadic_gcd(seen_up))
        gens_down.append(dyadic_gcd(seen_down))
        levels.append({"level": d, "x": xvals[d], "u": uv[0], "v": uv[1],
                       "upstairs_generator": gens_up[-1],
                       "downstairs_generator": gens_down[-1]})
    metadata = {
        "defect": {"value": 2, "status": "literature claim, not machine-verified"},
        "e_limit": {"value": 1, "status": "limit claim; only finite-stage equality is checked"},
        "f_limit": {"value": 1, "status": "limit claim; only finite-stage residue constants are checked"},
        "next_alpha_for_last_level": int(nxt),
    }
    return ValuationReport(p, transcript.depth, levels, gens_up, gens_down,
                           unit_constants, metadata)
