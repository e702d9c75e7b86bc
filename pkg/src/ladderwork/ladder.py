"""Blocks of quadratic transforms, computed two independent ways.

A state at the start of a block is

    u = x^p (c + f y + x Lambda),   v = tau(y) y^p + e x + x Omega

with c, f, e nonzero constants, tau a unit series in y and ord(Omega) >= 1.
One block pulls back along ``x = X^p (Y + alpha), y = X`` upstairs and
along ``u = u'^p (v' + beta), v = u'`` downstairs.

``step_block_closed`` uses the next-state formulas.  ``step_block_direct``
substitutes, detects the downstairs chart and re-reads the normal form from
the series.  ``run_ladder`` runs both chains side by side and refuses to
continue when they disagree.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field as dc_field

from .field import PrimeFieldElement, check_prime, fp
from .frames import (
    DominationResult,
    Frame,
    block_chart,
    detect_dominated_chart,
    monomial_chart,
    translation_chart,
)
from .pseries import (
    PrecisionError,
    TruncatedSeries,
    gens,
    monomial_divide_exact,
    series_invert_unit,
)


class PrecisionExhausted(PrecisionError):
    pass


class NormalFormError(ArithmeticError):
    """A series failed to have the expected normal form."""


class LadderInconsistency(AssertionError):
    """The two step methods disagree, or a structural invariant fails."""

    def __init__(self, message, diff=None):
        super().__init__(message)
        self.diff = diff or {}


# --------------------------------------------------------------------------- #
# states
# --------------------------------------------------------------------------- #

@dataclass(frozen=True)
class LadderState:
    block: int
    p: int
    c: PrimeFieldElement
    f: PrimeFieldElement
    e: PrimeFieldElement
    tau: TruncatedSeries
    Lambda: TruncatedSeries
    Omega: TruncatedSeries
    u: TruncatedSeries
    v: TruncatedSeries
    alpha_history: tuple = ()
    beta_history: tuple = ()

    @property
    def tau_bar(self) -> PrimeFieldElement:
        return fp(self.tau.constant_term, self.p)

    @property
    def precision(self) -> int:
        """Precision at which every stored series is known."""
        return min(s.precision for s in (self.tau, self.Lambda, self.Omega, self.u, self.v))

    def validate(self):
        """Check the normal-form invariants; raises NormalFormError."""
        for name in ("c", "f", "e"):
            if not getattr(self, name):
                raise NormalFormError(f"{name} vanishes at block {self.block}")
        if not self.tau_bar:
            raise NormalFormError(f"tau has zero constant term at block {self.block}")
        if self.tau.depends_on_x():
            raise NormalFormError("tau depends on x")
        if self.Omega.constant_term:
            raise NormalFormError("Omega has nonzero constant term")
        u, v = normal_form_series(self.p, self.c, self.f, self.e, self.tau,
                                  self.Lambda, self.Omega)
        if u != self.u or v != self.v:
            raise NormalFormError(f"u, v do not match the constants at block {self.block}")
        return self

    def to_json(self, tau_terms: int | None = None) -> dict:
        tau = self.tau.y_coeffs()[: self.tau.precision]
        if tau_terms is not None:
            tau = tau[:tau_terms]
        return {"c": int(self.c), "f": int(self.f), "e": int(self.e),
                "tau_prefix": tau, "u": self.u.to_json(), "v": self.v.to_json()}


def normal_form_series(p, c, f, e, tau, Lambda, Omega):
    """u and v assembled from the normal-form data."""
    x, y = gens(p, max(tau.precision, Lambda.precision, Omega.precision) + p + 1)
    u = (c + f * y + Lambda.shift(1, 0)).shift(p, 0)
    v = tau.shift(0, p) + x * e + Omega.shift(1, 0)
    return u, v


def extract_state(u: TruncatedSeries, v: TruncatedSeries, block: int,
                  alpha_history=(), beta_history=()) -> LadderState:
    """Read (c, f, e, tau, Lambda, Omega) off u and v; NormalFormError if impossible."""
    p = u.p
    try:
        u0 = monomial_divide_exact(u, p, 0)
    except ArithmeticError as exc:
        raise NormalFormError(f"u is not divisible by x^{p}: {exc}") from exc
    if u0.precision < 2 or v.precision < 2 + p:
        raise PrecisionExhausted(f"not enough precision to read the normal form at block {block}")
    line = u0.y_coeffs()
    c, f = line[0], line[1]
    if any(line[2 : u0.precision]):
        raise NormalFormError("u/x^p restricted to x = 0 is not linear in y")
    Lambda = monomial_divide_exact(u0 - (c + f * TruncatedSeries.monomial(0, 1, p, u0.precision)), 1, 0)
    vline = v.at_x0()
    try:
        tau = monomial_divide_exact(vline, 0, p)
    except ArithmeticError as exc:
        raise NormalFormError(f"v(0, y) is not divisible by y^{p}") from exc
    e = v[1, 0]
    rest = v - tau.shift(0, p) - TruncatedSeries.monomial(1, 0, p, v.precision, e)
    Omega = monomial_divide_exact(rest, 1, 0)
    state = LadderState(block, p, fp(c, p), fp(f, p), fp(e, p), tau, Lambda, Omega,
                        u, v, tuple(alpha_history), tuple(beta_history))
    return state.validate()


def init_state(p: int, precision: int) -> LadderState:
    """``u = x^p (1 + y)``, ``v = y^p + x`` at the given precision."""
    p = check_prime(p)
    if precision < p * p + 2:
        raise PrecisionError(f"precision must be at least p^2 + 2 = {p * p + 2}")
    x, y = gens(p, precision)
    u = x ** p * (1 + y)
    v = y ** p + x
    return extract_state(u, v, 0)


def state_diff(a: LadderState, b: LadderState) -> dict:
    """Fields on which two states disagree (series compared at common precision)."""
    diff = {}
    for name in ("block", "c", "f", "e", "alpha_history", "beta_history"):
        va, vb = getattr(a, name), getattr(b, name)
        if isinstance(va, tuple):
            va, vb = tuple(map(int, va)), tuple(map(int, vb))
        if va != vb:
            diff[name] = (str(va), str(vb))
    for name in ("tau", "Lambda", "Omega", "u", "v"):
        sa, sb = getattr(a, name), getattr(b, name)
        if sa != sb:
            n = min(sa.precision, sb.precision)
            diff[name] = (str(sa.truncate(n)), str(sb.truncate(n)))
    return diff


# --------------------------------------------------------------------------- #
# alpha
# --------------------------------------------------------------------------- #

@dataclass(frozen=True)
class AlphaPolicy:
    kind: str = "smallest"
    seed: int | None = None

    def __post_init__(self):
        if self.kind not in ("smallest", "seeded"):
            raise ValueError(f"unknown alpha policy {self.kind!r}")
        if self.kind == "seeded" and self.seed is None:
            raise ValueError("seeded policy needs a seed")

    def to_json(self):
        return {"kind": self.kind, "seed": self.seed}


def allowed_alphas(state: LadderState) -> list[int]:
    forbidden = {0, int(-state.tau_bar / state.e)}
    return [a for a in range(state.p) if a not in forbidden]


def choose_alpha(state: LadderState, policy: AlphaPolicy | str = "smallest") -> PrimeFieldElement:
    """A valid translation: nonzero and different from -tau_bar/e."""
    if isinstance(policy, str):
        policy = AlphaPolicy(policy)
    allowed = allowed_alphas(state)
    if policy.kind == "smallest":
        return fp(allowed[0], state.p)
    rng = random.Random(f"{policy.seed}/{state.block}")
    return fp(rng.choice(allowed), state.p)


def _check_alpha(state: LadderState, alpha) -> PrimeFieldElement:
    a = fp(int(alpha), state.p)
    if int(a) not in allowed_alphas(state):
        raise ValueError(f"alpha = {a} is not allowed (zero or -tau_bar/e)")
    return a


# --------------------------------------------------------------------------- #
# the two step methods
# --------------------------------------------------------------------------- #

@dataclass(frozen=True)
class BlockDerivation:
    theta: PrimeFieldElement
    sigma: TruncatedSeries
    beta: PrimeFieldElement
    omega_hat: TruncatedSeries
    lambda_tilde: TruncatedSeries
    omega_tilde: TruncatedSeries
    omega_1: TruncatedSeries


def step_block_closed(state: LadderState, alpha):
    """Next state from the closed formulas; returns ``(state, derivation)``."""
    p = state.p
    a = _check_alpha(state, alpha)
    tb, c, f, e = state.tau_bar, state.c, state.f, state.e
    c1 = tb + a * e
    theta = a / c1
    tp = theta ** p
    beta = tp * c
    n = min(state.tau.precision, state.Lambda.precision, state.Omega.precision)
    if n < 3:
        raise PrecisionExhausted(f"closed step needs precision >= 3, have {n}")
    chart = translation_chart(p, a)
    _, Y = gens(p, n)
    tau_sub = chart.pullback(state.tau.truncate(n))
    om_sub = chart.pullback(state.Omega.truncate(n))
    la_sub = chart.pullback(state.Lambda.truncate(n))
    ya = Y + a

    # v = X^p (c1 + e Y + X omega_hat)
    omega_hat = monomial_divide_exact((tau_sub - tb) + ya * om_sub, 1, 0)
    # u = X^(p^2) (Y + alpha)^p (c + f X + X^2 lambda_tilde)
    lambda_tilde = (ya * la_sub).shift(p - 2, 0)

    # (Y + alpha) / (c1 + e Y + X omega_hat) = theta + sigma(Y) Y + X omega_tilde
    quot = ya * series_invert_unit(c1 + e * Y + omega_hat.shift(1, 0))
    sigma = monomial_divide_exact(quot.at_x0() - theta, 0, 1)
    omega_tilde = monomial_divide_exact(quot - theta - sigma.shift(0, 1), 1, 0)

    sig_p = sigma.frobenius()
    xl = lambda_tilde.shift(1, 0)
    omega_1 = (xl * tp
               + sig_p.shift(0, p) * (f + xl)
               + omega_tilde.frobenius().shift(p - 1, 0) * (c + f * TruncatedSeries.monomial(1, 0, p, n) + xl.shift(1, 0)))

    tau1 = sig_p * c
    m = min(omega_hat.precision, omega_1.precision)
    new_tau = tau1.truncate(min(tau1.precision, m))
    u1, v1 = normal_form_series(p, c1, e, tp * f, new_tau, omega_hat.truncate(m), omega_1.truncate(m))
    nxt = LadderState(state.block + 1, p, c1, e, tp * f, new_tau, omega_hat.truncate(m),
                      omega_1.truncate(m), u1, v1,
                      state.alpha_history + (a,), state.beta_history + (beta,))
    deriv = BlockDerivation(theta, sigma, beta, omega_hat, lambda_tilde, omega_tilde, omega_1)
    return nxt.validate(), deriv


def block_frames(state: LadderState, alpha) -> list[Frame]:
    """Frames B_1 .. B_p of the block starting at ``state``."""
    p = state.p
    frames = []
    for s in range(1, p):
        ch = monomial_chart(s)
        frames.append(Frame((state.block + 1, s), ch.pullback(state.u), ch.pullback(state.v)))
    ch = block_chart(alpha, p)
    frames.append(Frame((state.block + 1, p), ch.pullback(state.u), ch.pullback(state.v)))
    return frames


def _direct(state: LadderState, alpha):
    p = state.p
    a = _check_alpha(state, alpha)
    n = min(state.u.precision, state.v.precision)
    if n < p * p + p + 1:
        raise PrecisionExhausted(
            f"precision exhausted at block {state.block + 1}: a block needs input "
            f"precision >= p^2 + p + 1 = {p * p + p + 1}, have {n}")
    frames = block_frames(state, a)
    doms = [detect_dominated_chart(fr) for fr in frames]
    last = doms[-1]
    if last.chart is None or last.chart.kind != "translation" or last.chart.e != p or last.swapped:
        raise LadderInconsistency(
            f"step {p} of block {state.block + 1} detected {last.chart}, expected translation_chart({p}, beta)")
    beta = fp(last.beta, p)
    nxt = extract_state(last.u_next, last.v_next, state.block + 1,
                        state.alpha_history + (a,), state.beta_history + (beta,))
    return nxt, doms


def step_block_direct(state: LadderState, alpha) -> LadderState:
    """Next state by substitution, chart detection and normal-form extraction."""
    return _direct(state, alpha)[0]


# --------------------------------------------------------------------------- #
# runs
# --------------------------------------------------------------------------- #

@dataclass(frozen=True)
class BlockRecord:
    index: int
    alpha: PrimeFieldElement
    beta: PrimeFieldElement
    state: LadderState
    direct_state: LadderState
    derivation: BlockDerivation
    domination: tuple[DominationResult, ...]
    precision_in: tuple[int, int]
    precision_out: tuple[int, int]
    lambda_is_omega_hat: bool

    def to_json(self, tau_terms=None) -> dict:
        dom = []
        for d in self.domination:
            j = d.to_json()
            if j is not None and d.beta is not None:
                j["beta"] = d.beta
            dom.append(j)
        return {
            "index": self.index,
            "alpha": int(self.alpha),
            "beta": int(self.beta),
            "theta": int(self.derivation.theta),
            "state": self.state.to_json(tau_terms),
            "domination": dom,
            "precision": {"closed": [self.precision_in[0], self.precision_out[0]],
                          "direct": [self.precision_in[1], self.precision_out[1]]},
            "lambda_equals_omega_hat": self.lambda_is_omega_hat,
        }


@dataclass(frozen=True)
class Transcript:
    p: int
    policy: AlphaPolicy
    initial_precision: int
    target_precision: int
    initial: LadderState
    blocks: tuple[BlockRecord, ...] = dc_field(default_factory=tuple)

    @property
    def depth(self) -> int:
        return len(self.blocks)

    def states(self) -> list[LadderState]:
        return [self.initial] + [b.state for b in self.blocks]

    def direct_states(self) -> list[LadderState]:
        return [self.initial] + [b.direct_state for b in self.blocks]

    def state_before(self, block: int) -> LadderState:
        """Canonical state at the start of ``block`` (1-indexed)."""
        if not 1 <= block <= self.depth + 1:
            raise IndexError(f"block {block} outside 1..{self.depth + 1}")
        return self.states()[block - 1]

    @property
    def alphas(self) -> list[int]:
        return [int(b.alpha) for b in self.blocks]

    def to_json(self, tau_terms=None) -> dict:
        return {"p": self.p, "policy": self.policy.to_json(),
                "initial_precision": self.initial_precision,
                "target_precision": self.target_precision,
                "initial": self.initial.to_json(tau_terms),
                "blocks": [b.to_json(tau_terms) for b in self.blocks]}


def block_cost(p: int) -> int:
    return p * p + p


def run_ladder(p: int, depth: int, policy: AlphaPolicy | str = "smallest",
               target_final_precision: int | None = None,
               initial_precision: int | None = None) -> Transcript:
    """Run ``depth`` blocks with both step methods and cross-check every field."""
    p = check_prime(p)
    if depth < 0:
        raise ValueError("depth must be nonnegative")
    if isinstance(policy, str):
        policy = AlphaPolicy(policy)
    if target_final_precision is None:
        target_final_precision = p * p + 3
    if initial_precision is None:
        initial_precision = max(target_final_precision + depth * block_cost(p), p * p + 2)
    closed = direct = init_state(p, initial_precision)
    records = []
    for b in range(1, depth + 1):
        alpha = choose_alpha(closed, policy)
        nc, deriv = step_block_closed(closed, alpha)
        nd, doms = _direct(direct, alpha)
        diff = state_diff(nc, nd)
        if diff:
            raise LadderInconsistency(f"closed and direct states differ at block {b}", diff)
        for k, d in enumerate(doms[:-1], start=1):
            if d:
                raise LadderInconsistency(f"step {k} of block {b} dominates {d.chart}")
        if int(doms[-1].beta) != int(deriv.beta):
            raise LadderInconsistency(
                f"detected beta {doms[-1].beta} differs from closed value {deriv.beta} at block {b}")
        for s in (nc, nd):
            if not all((s.c, s.f, s.e, s.tau_bar)) or not deriv.beta:
                raise LadderInconsistency(f"vanishing constant at block {b}")
        lam_ok = nd.Lambda == deriv.omega_hat
        records.append(BlockRecord(b, alpha, deriv.beta, nc, nd, deriv, tuple(doms),
                                   (closed.precision, direct.precision),
                                   (nc.precision, nd.precision), lam_ok))
        closed, direct = nc, nd
    init = init_state(p, initial_precision)
    return Transcript(p, policy, initial_precision, target_final_precision, init, tuple(records))
