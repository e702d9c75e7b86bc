"""Non-monomiality evidence at each stage of a block.

Two independent routes:

* :func:`certify_nonmonomial` forces the coefficients of phi in
  ``u - phi(v)`` order by order (:func:`forced_phi`) until no choice of
  coefficient can give an admissible leading form, and records the monomial
  that blocks it.
* :func:`search_monomial` enumerates every phi of bounded degree and tests
  necessary conditions for ``(u - phi(v), v)`` to be in monomial form.

A stage ``(block, i)`` is the frame reached from the start of ``block`` by
``monomial_chart(i)`` (the block start itself for i = 0).
"""

from __future__ import annotations

import itertools
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field as dc_field

import numpy as np

from .field import fp
from .frames import Frame, detect_dominated_chart, monomial_chart
from .pseries import (
    LeadingForm,
    PrecisionError,
    TruncatedSeries,
    ZeroSeriesError,
    _compose_line,
    distinguished_root,
    divide_exact,
    divides_prepared,
    monomial_divide_exact,
    ord_and_leading_form,
    solve_coordinate,
    weierstrass_prepare,
)


class CertificationError(AssertionError):
    """A forced value or structural fact did not come out as required."""


class DegreeBoundTooSmall(ValueError):
    pass


def stage_pair(state, i: int, precision: int | None = None):
    """(u, v) pulled back to stage i of the block starting at ``state``."""
    if not 0 <= i < state.p:
        raise ValueError(f"stage i must lie in [0, {state.p}), got {i}")
    u, v = state.u, state.v
    if precision is not None:
        u, v = u.truncate(min(precision, u.precision)), v.truncate(min(precision, v.precision))
    if i:
        ch = monomial_chart(i)
        u, v = ch.pullback(u), ch.pullback(v)
    return u, v


def _linear_of(lf: LeadingForm) -> tuple[int, int]:
    """(a, b) for the order-1 form a*x + b*y."""
    if lf.order != 1:
        raise ValueError("not a linear form")
    return lf.coeffs[1], lf.coeffs[0]


def _monomial_name(i: int, j: int) -> str:
    parts = [s for s in ((f"x^{i}" if i > 1 else "x" if i == 1 else ""),
                         (f"y^{j}" if j > 1 else "y" if j == 1 else "")) if s]
    return "*".join(parts) or "1"


# --------------------------------------------------------------------------- #
# forcing
# --------------------------------------------------------------------------- #

@dataclass
class ForcedPhi:
    status: str                       # "obstructed" | "monomial-compatible"
    coefficients: dict[int, int]      # forced a_k (nonzero ones)
    residual: TruncatedSeries         # u - phi(v) with the forced coefficients
    order: int                        # order at which the decision was made
    obstruction: tuple[tuple[int, int], int] | None = None
    kind: str | None = None           # "leading-form" | "divisibility"
    leading_exponent: int | None = None
    trace: list[str] = dc_field(default_factory=list)

    @property
    def obstructed(self) -> bool:
        return self.status == "obstructed"


def _admissible(part: np.ndarray, r: int, mode: str, ell, p: int) -> bool:
    lf = LeadingForm(r, tuple(int(v) for v in part), p)
    if mode == "independent":
        return not lf.divisible_by(ell)
    return lf.is_pure_power("y")


def forced_phi(u: TruncatedSeries, v: TruncatedSeries, degree_bound: int, *,
               mode: str = "independent", check_normal_form: bool = False) -> ForcedPhi:
    """Force phi = sum a_k v^k greedily so that L(u - phi(v)) could be admissible.

    ``mode="independent"``: admissible means L(v) does not divide the leading
    form (v has order 1).  ``mode="pure_y"``: admissible means the leading
    form is a scalar times a power of y; once such a form y^r appears, every
    completion of phi must leave u - phi(v) divisible by y^r, which is checked
    on all monomials below the first degree later terms of phi can reach.

    At each order every a in F_p is tried.  Exactly one a making the part
    vanish forces it; none making it vanish or admissible is an obstruction.
    """
    p = u.p
    u._check(v)
    if mode not in ("independent", "pure_y"):
        raise ValueError(f"unknown mode {mode!r}")
    if check_normal_form:
        from .ladder import extract_state
        extract_state(u, v, 0)
    n = min(u.precision, v.precision)
    u, v = u.truncate(n), v.truncate(n)
    lv = ord_and_leading_form(v)
    ov = lv.order
    ell = None
    if mode == "independent":
        if ov != 1:
            raise ValueError("independent mode needs v of order 1")
        ell = _linear_of(lv)
    powers = {0: TruncatedSeries.constant(1, p, n)}
    R = u
    coeffs: dict[int, int] = {}
    trace: list[str] = []
    for r in range(1, n):
        part = R.homogeneous(r)
        k = r // ov if r % ov == 0 else None
        if k is None:
            options = {0: part}
            lk = None
        else:
            if k not in powers:
                powers[k] = powers[max(powers)] * v ** (k - max(powers))
            lk = powers[k].homogeneous(r)
            options = {a: (part - a * lk) % p for a in range(p)}
        zero = [a for a, q in options.items() if not q.any()]
        adm = [a for a, q in options.items() if q.any() and _admissible(q, r, mode, ell, p)]
        if adm and (0 in adm or k is None or k <= degree_bound):
            a = 0 if 0 in adm else adm[0]
            if mode == "independent" or zero or len(adm) > 1:
                if a:
                    coeffs[k] = a
                    R = R - a * powers[k]
                trace.append(f"order {r}: admissible leading form, no contradiction")
                return ForcedPhi("monomial-compatible", coeffs, R, r, trace=trace)
            if a:
                coeffs[k] = a
                R = R - a * powers[k]
                trace.append(f"order {r}: a_{k} = {a} forced (only choice with admissible leading form)")
            return _divisibility_check(R, r, k, ov, coeffs, trace)
        if k is not None and k > degree_bound and not (zero == [0]):
            raise DegreeBoundTooSmall(f"order {r} needs a_{k} but the degree bound is {degree_bound}")
        if len(zero) == 1 and not adm:
            a = zero[0]
            if a:
                coeffs[k] = a
                R = R - a * powers[k]
                trace.append(f"order {r}: a_{k} = {a} forced to cancel the order-{r} part")
            continue
        if not zero and not adm:
            mono, coef = _blocking_monomial(part, lk, r)
            trace.append(f"order {r}: no coefficient gives a zero or admissible part; "
                         f"{coef}*{_monomial_name(*mono)} is unaffected by every choice")
            return ForcedPhi("obstructed", coeffs, R, r, (mono, coef), "leading-form", trace=trace)
        trace.append(f"order {r}: several choices remain, forcing stops")
        return ForcedPhi("monomial-compatible", coeffs, R, r, trace=trace)
    raise PrecisionError(f"no decision below precision {n}")


def _blocking_monomial(part: np.ndarray, lk, r: int):
    nz = [i for i in range(r + 1) if part[i]]
    fixed = [i for i in nz if lk is None or not lk[i]]
    i = (fixed or nz)[0]
    return (i, r - i), int(part[i])


def _divisibility_check(R, r, k, ov, coeffs, trace):
    """After L(R) = lambda*y^r: later terms of phi reach only degrees >= bound."""
    bound = ((r // ov) + 1) * ov
    if R.precision < bound:
        raise PrecisionError(f"divisibility check needs precision {bound}, have {R.precision}")
    for d in range(r + 1, bound):
        h = R.homogeneous(d)
        for i in range(d + 1):
            j = d - i
            if j < r and h[i]:
                trace.append(
                    f"y^{r} must divide u - phi(v), but {int(h[i])}*{_monomial_name(i, j)} "
                    f"(degree {d} < {bound}, out of reach of later terms) is not divisible by y^{r}")
                return ForcedPhi("obstructed", coeffs, R, r, ((i, j), int(h[i])),
                                 "divisibility", leading_exponent=r, trace=trace)
    trace.append(f"no monomial below degree {bound} blocks y^{r}")
    return ForcedPhi("monomial-compatible", coeffs, R, r, leading_exponent=r, trace=trace)


# --------------------------------------------------------------------------- #
# certificates
# --------------------------------------------------------------------------- #

@dataclass
class ObstructionCertificate:
    p: int
    block: int
    i: int
    case: str
    forced: list[tuple[int, int]]
    forced_exponent: int | None
    obstruction_monomial: tuple[int, int]
    obstruction_coefficient: int
    residual: TruncatedSeries
    u: TruncatedSeries
    v: TruncatedSeries
    c: int
    e: int
    trace: list[str]

    @property
    def a_p(self) -> int:
        return dict(self.forced)[self.p]

    def sign_report(self) -> dict:
        """a_p compared with both signs of c/e^p."""
        plus = int(fp(self.c, self.p) / fp(self.e, self.p) ** self.p)
        return {"computed": self.a_p, "c/e^p": plus, "-c/e^p": (-plus) % self.p,
                "matches": "+c/e^p" if self.a_p == plus else "-c/e^p"}

    def verify(self) -> bool:
        """Recompute the residual and the blocking coefficient from the recorded data."""
        R = self.u
        for k, a in self.forced:
            R = R - a * self.v ** k
        if R != self.residual:
            return False
        i, j = self.obstruction_monomial
        return R[i, j] == self.obstruction_coefficient != 0

    def to_json(self) -> dict:
        forced = [{"degree": k, "value": a, "equation": "a*e^p=c"} for k, a in self.forced]
        out = {
            "stage": {"block": self.block, "i": self.i},
            "case": self.case,
            "forced": forced,
            "obstruction": {"monomial": list(self.obstruction_monomial),
                            "coefficient": self.obstruction_coefficient},
            "residual": self.residual.to_json(),
            "sign": self.sign_report(),
            "trace": list(self.trace),
        }
        if self.forced_exponent is not None:
            out["forced_exponent"] = self.forced_exponent
        return out


def case_tag(p: int, i: int) -> str:
    if i == 0:
        return "i=0"
    return "i=p-1" if i == p - 1 else "1<=i<p-1"


def certify_nonmonomial(transcript, block: int, i: int) -> ObstructionCertificate:
    """Certificate that stage ``(block, i)`` admits no monomial form."""
    p = transcript.p
    if not 0 <= i < p:
        raise ValueError(f"stage i must lie in [0, {p}), got {i}")
    state = transcript.state_before(block)
    c, f, e, tb = state.c, state.f, state.e, state.tau_bar
    u, v = stage_pair(state, i)
    case = case_tag(p, i)
    trace = []

    def need(ok, msg):
        if not ok:
            raise CertificationError(f"block {block}, i={i}: {msg}")
        trace.append(msg)

    dom = detect_dominated_chart(Frame((block, i), u, v))
    need(not dom, "no quadratic transform downstairs is dominated (neither u/v nor v/u is a series)")
    a, b = v.monomial_factor()
    need((a, b) == (0, i), f"v = y^{i} * w with w free of monomial factors")
    w = monomial_divide_exact(v, 0, i)
    lw = ord_and_leading_form(w)
    want = {1: int(e)} | ({0: int(tb)} if i == p - 1 else {0: 0})
    need(lw.order == 1 and lw.coeffs[1] == want[1] and lw.coeffs[0] == want[0],
         f"w is regular with L(w) = {lw}")
    need(not divides_prepared(w, u), "w does not divide u, so w does not divide u - phi(v)")

    res = forced_phi(u, v, p + 1, mode="independent" if i == 0 else "pure_y")
    trace.extend(res.trace)
    need(res.obstructed, f"forcing ends in an obstruction ({res.kind})")
    forced = sorted(res.coefficients.items())
    need([k for k, _ in forced] == [p], f"the only nonzero forced coefficient is a_{p}")
    a_p = res.coefficients[p]
    need(fp(a_p, p) * e ** p == c, f"a_{p} = {a_p} satisfies a*e^p = c")
    forced_exponent = None
    if i == p - 1:
        need(res.kind == "divisibility" and res.leading_exponent == p * p,
             f"L(u - phi(v)) = lambda*y^{p * p}, forcing the exponent a = {p * p}")
        forced_exponent = res.leading_exponent
        prep = weierstrass_prepare(res.residual, "y")
        need(distinguished_root(prep.poly) is None,
             f"distinguished polynomial of degree {prep.poly.degree} is not a perfect power")
        want_mono = (p, p * p - p + 1)
    else:
        want_mono = (p, p * i + 1)
    (mono, coef) = res.obstruction
    need(coef != 0, "obstruction coefficient is nonzero")
    need(mono == want_mono and coef == int(f),
         f"blocking term {coef}*{_monomial_name(*mono)} has coefficient f = {int(f)}")
    cert = ObstructionCertificate(p, block, i, case, forced, forced_exponent, mono, coef,
                                  res.residual, u, v, int(c), int(e), trace)
    if not cert.verify():
        raise CertificationError("recorded residual does not reproduce")
    return cert


# --------------------------------------------------------------------------- #
# bounded search
# --------------------------------------------------------------------------- #

REASONS = {
    "zero": "candidate vanishes below precision",
    "not-unit": "cofactor outside the parameter system is not a unit",
    "not-power": "leading form is not a power of one linear form",
    "dependent": "leading linear form depends on the parameter system",
    "not-perfect": "distinguished polynomial is not a perfect power",
    "singular": "exponent matrix is singular",
}


@dataclass
class _System:
    """Primes of v that any monomial system containing v must use."""

    axes: list[str]
    cofactor: TruncatedSeries | None
    root: np.ndarray | None
    root_axis: str | None
    forms: list[tuple[int, int]]
    v_exponents: list[int]
    free: bool
    trivial_fail: str | None = None


def _normalize(ell, p):
    a, b = ell[0] % p, ell[1] % p
    if a:
        inv = pow(a, -1, p)
        return (1, b * inv % p)
    return (0, 1)


def _parameter_system(v: TruncatedSeries) -> _System:
    p = v.p
    a, b = v.monomial_factor()
    cof = monomial_divide_exact(v, a, b)
    axes, forms, exps = [], [], []
    if a:
        axes.append("x"); forms.append((1, 0)); exps.append(a)
    if b:
        axes.append("y"); forms.append((0, 1)); exps.append(b)
    W = root = root_axis = None
    fail = None
    if not cof.is_unit():
        lw = ord_and_leading_form(cof)
        if lw.order != 1:
            fail = "not-unit"
        else:
            W = cof
            ell = _linear_of(lw)
            forms.append(_normalize(ell, p))
            exps.append(1)
            root_axis = "x" if ell[0] else "y"
            g = solve_coordinate(W, root_axis)
            root = g.c[0, :].copy() if root_axis == "x" else g.c[:, 0].copy()
    if len(forms) > 2 or len(set(forms)) < len(forms):
        fail = "singular"
    free = len(forms) < 2
    if free:
        exps.append(0)
    return _System(axes, W, root, root_axis, forms, exps, free, fail)


def _divisible_by_cofactor(C: TruncatedSeries, sys: _System) -> bool:
    n = min(C.precision, sys.cofactor.precision)
    if sys.root_axis == "x":
        line = _compose_line(C.truncate(n), sys.root[:n])
    else:
        line = _compose_line(C.truncate(n).swap(), sys.root[:n])
    return not line.any()


def _evaluate(U: TruncatedSeries, sys: _System):
    """None for a witness, else a reason code."""
    if sys.trivial_fail:
        return sys.trivial_fail
    if U.is_zero():
        raise ZeroSeriesError("candidate vanishes below precision")
    ma, mb = U.monomial_factor()
    ea = ma if "x" in sys.axes else 0
    eb = mb if "y" in sys.axes else 0
    C = monomial_divide_exact(U, ea, eb)
    exps = []
    for ax in sys.axes:
        exps.append(ea if ax == "x" else eb)
    if sys.cofactor is not None:
        m = 0
        while not C.is_unit() and _divisible_by_cofactor(C, sys):
            C = divide_exact(C, sys.cofactor)
            m += 1
        exps.append(m)
    if sys.free:
        if C.is_unit():
            exps.append(0)
        else:
            lf = ord_and_leading_form(C)
            ell = lf.linear_power()
            if ell is None:
                return "not-power"
            if _normalize(ell, U.p) in sys.forms:
                return "dependent"
            axis = "y" if ell[1] else "x"
            prep = weierstrass_prepare(C, axis)
            if prep.poly.degree != lf.order or distinguished_root(prep.poly) is None:
                return "not-perfect"
            exps.append(lf.order)
    elif not C.is_unit():
        return "not-unit"
    det = sys.v_exponents[0] * exps[1] - sys.v_exponents[1] * exps[0]
    return None if det else "singular"


def phi_vectors(p: int, D: int):
    """Coefficient vectors (a_1..a_D) by ascending degree, lexicographic within a degree."""
    yield (0,) * D
    for deg in range(1, D + 1):
        for head in itertools.product(range(p), repeat=deg - 1):
            for top in range(1, p):
                yield head + (top,) + (0,) * (D - deg)


def _psi_note(u: TruncatedSeries, v: TruncatedSeries) -> str:
    """Check that v - psi(u) has the shape class of v for every psi with psi(0) = 0."""
    if ord_and_leading_form(v).order == 1 and ord_and_leading_form(u).order > 1:
        return ("psi reduced to 0: v has order 1 and u has order > 1, so every v - psi(u) "
                "is regular with the leading form of v")
    va, vb = v.monomial_factor()
    ua, ub = u.monomial_factor()
    if ua < va or ub < vb:
        raise ValueError("u is not divisible by the monomial part of v; psi cannot be reduced")
    w = monomial_divide_exact(v, va, vb)
    u1 = monomial_divide_exact(u, va, vb)
    ow = ord_and_leading_form(w).order
    if ow > 1:
        raise ValueError("cofactor of v has order > 1; psi cannot be reduced")
    ou = ord_and_leading_form(u1).order
    ok = ou > ow
    for var in ("x", "y"):
        if w.is_unit():
            break
        try:
            dw = w.order_in(var)
        except ZeroSeriesError:
            ok = False
            break
        try:
            ok = ok and u1.order_in(var) > dw
        except ZeroSeriesError:
            pass
    if not ok:
        raise ValueError("v - psi(u) may change shape; psi cannot be reduced")
    return ("psi reduced to 0: for every psi, v - psi(u) keeps the monomial factor of v "
            "and the order and leading form of its cofactor")


@dataclass
class SearchResult:
    status: str                              # "exhausted" | "witness"
    candidates: int
    failures: dict[str, int]
    witness: tuple[tuple[int, ...], tuple[int, ...]] | None = None
    notes: list[str] = dc_field(default_factory=list)
    degree_bound: int = 0
    precision: int = 0

    def to_json(self) -> dict:
        out = {"status": self.status, "degree_bound": self.degree_bound,
               "precision": self.precision, "candidates": self.candidates,
               "failures": {REASONS[k]: n for k, n in sorted(self.failures.items())},
               "notes": list(self.notes)}
        if self.witness is not None:
            out["witness"] = {"phi": list(self.witness[0]), "psi": list(self.witness[1])}
        return out


def _search_chunk(args):
    u_arr, v_arrs, p, n, sys, vectors, offset = args
    fails = Counter()
    for idx, vec in enumerate(vectors):
        acc = u_arr - np.tensordot(np.array(vec, dtype=np.int64), v_arrs, axes=1)
        U = TruncatedSeries._raw(acc, p, n)
        reason = _evaluate(U, sys)
        if reason is None:
            return offset + idx, fails
        fails[reason] += 1
    return None, fails


def search_monomial(u: TruncatedSeries, v: TruncatedSeries, degree_bound: int,
                    precision: int | None = None, *, workers: int = 1,
                    chunk_size: int = 2048) -> SearchResult:
    """Every phi of degree <= D with zero constant term, tested on (u - phi(v), v).

    A returned witness only passes necessary conditions; it is evidence to
    inspect, never a proof of monomial form.
    """
    p = u.p
    u._check(v)
    if min(ord_and_leading_form(u).order, ord_and_leading_form(v).order) < 1:
        raise ValueError("u and v must have positive order")
    n = min(u.precision, v.precision) if precision is None else precision
    if n > min(u.precision, v.precision):
        raise PrecisionError(f"inputs only known below {min(u.precision, v.precision)}")
    u, v = u.truncate(n), v.truncate(n)
    notes = [_psi_note(u, v)]
    sys = _parameter_system(v)
    notes.append("parameter system from v: " + ", ".join(
        sys.axes + (["regular cofactor"] if sys.cofactor is not None else [])
        + (["free slot"] if sys.free else [])))
    D = degree_bound
    v_arrs = np.zeros((D, n, n), dtype=np.int64)
    vk = TruncatedSeries.constant(1, p, n)
    for k in range(D):
        vk = vk * v
        v_arrs[k] = vk.c
    vectors = list(phi_vectors(p, D))
    chunks = [(u.c, v_arrs, p, n, sys, vectors[s:s + chunk_size], s)
              for s in range(0, len(vectors), chunk_size)]
    if workers > 1 and len(chunks) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_search_chunk, chunks))
    else:
        results = []
        for ch in chunks:
            results.append(_search_chunk(ch))
            if results[-1][0] is not None:
                break
    fails = Counter()
    for hit, fc in results:
        fails.update(fc)
        if hit is not None:
            # chunks are in enumeration order, so the first hit is the earliest witness
            counted = sum(fails.values())
            return SearchResult("witness", counted + 1, dict(fails),
                                (vectors[hit], (0,) * D), notes, D, n)
    return SearchResult("exhausted", len(vectors), dict(fails), None, notes, D, n)


def default_search_precision(p: int) -> int:
    return p * p + 2 * p + 2
