"""Command-line entry point.

Exit codes: 0 success, 2 mathematical inconsistency, 3 search witness
(needs a human), 64 usage error.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import asdict, dataclass

from . import __version__
from .field import is_prime
from .ladder import AlphaPolicy, LadderInconsistency, NormalFormError, run_ladder
from .obstruction import (
    CertificationError,
    certify_nonmonomial,
    default_search_precision,
    search_monomial,
    stage_pair,
)
from .pseries import PrecisionError, gens
from .valwork import value_group_report

EXIT_OK, EXIT_INCONSISTENT, EXIT_WITNESS, EXIT_USAGE = 0, 2, 3, 64


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


@dataclass(frozen=True)
class RunConfig:
    command: str
    p: int
    depth: int = 0
    precision: int | None = None
    policy: str = "smallest"
    seed: int | None = None
    block: int | None = None
    i: int | None = None
    degree: int | None = None
    workers: int = 1

    def validate(self):
        if self.p < 3 or not is_prime(self.p):
            raise UsageError(f"--p must be an odd prime >= 3, got {self.p}")
        if self.depth < 0:
            raise UsageError("--depth must be nonnegative")
        if self.precision is not None and self.precision < self.p ** 2 + 2:
            raise UsageError(f"--precision must be at least p^2 + 2 = {self.p ** 2 + 2}")
        if self.policy == "seeded" and self.seed is None:
            raise UsageError("--policy seeded needs --seed")
        if self.block is not None and self.block < 1:
            raise UsageError("--block must be >= 1")
        if self.i is not None and not 0 <= self.i < self.p:
            raise UsageError(f"--i must lie in [0, {self.p}), got {self.i}")
        if self.degree is not None and self.degree < 1:
            raise UsageError("--degree must be >= 1")
        return self

    def alpha_policy(self) -> AlphaPolicy:
        return AlphaPolicy(self.policy, self.seed if self.policy == "seeded" else None)


def _envelope(cfg: RunConfig, status: str, **payload) -> dict:
    return {"command": cfg.command, "config": asdict(cfg), "version": __version__,
            "status": status, **payload}


# --------------------------------------------------------------------------- #
# commands
# --------------------------------------------------------------------------- #

def cmd_verify_relation(cfg: RunConfig):
    p = cfg.p
    n = cfg.precision or p * p + 2
    x, y = gens(p, n)
    u = x ** p * (1 + y)
    v = y ** p + x
    vp = v ** p
    terms = {"y^(p^2+1)": y ** (p * p + 1), "y^(p^2)": y ** (p * p),
             "-y*v^p": -(y * vp), "u-v^p": u - vp}
    residual = terms["y^(p^2+1)"] + terms["y^(p^2)"] + terms["-y*v^p"] + terms["u-v^p"]
    ok = residual.is_zero()
    out = {"residual": residual.to_json(), "zero": ok}
    if not ok:
        out["terms"] = {k: s.to_json() for k, s in terms.items()}
    return (EXIT_OK if ok else EXIT_INCONSISTENT), _envelope(cfg, "zero" if ok else "nonzero", **out)


def cmd_run(cfg: RunConfig):
    tr = run_ladder(cfg.p, cfg.depth, cfg.alpha_policy(), cfg.precision)
    report = value_group_report(tr)
    return EXIT_OK, _envelope(cfg, "consistent", transcript=tr.to_json(),
                              valuation=report.to_json())


def _transcript_for_block(cfg: RunConfig, min_precision: int):
    target = max(cfg.precision or 0, min_precision)
    return run_ladder(cfg.p, cfg.block - 1, cfg.alpha_policy(), target)


def cmd_certify(cfg: RunConfig):
    tr = _transcript_for_block(cfg, 2 * cfg.p ** 2 + 2)
    cert = certify_nonmonomial(tr, cfg.block, cfg.i)
    return EXIT_OK, _envelope(cfg, "certified", certificate=cert.to_json())


def cmd_search(cfg: RunConfig):
    n = cfg.precision or default_search_precision(cfg.p)
    tr = _transcript_for_block(cfg, n)
    u, v = stage_pair(tr.state_before(cfg.block), cfg.i, n)
    res = search_monomial(u, v, cfg.degree, n, workers=cfg.workers)
    code = EXIT_OK if res.status == "exhausted" else EXIT_WITNESS
    return code, _envelope(cfg, res.status, search=res.to_json())


COMMANDS = {
    "verify-relation": cmd_verify_relation,
    "run": cmd_run,
    "certify": cmd_certify,
    "search": cmd_search,
}


# --------------------------------------------------------------------------- #
# parsing and output
# --------------------------------------------------------------------------- #

def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="ladderwork", description="Quadratic-transform ladders over F_p.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(sp, depth=False):
        sp.add_argument("--p", type=int, required=True)
        sp.add_argument("--precision", type=int)
        sp.add_argument("--out")
        sp.add_argument("--format", choices=["json"], default="json")
        if depth:
            sp.add_argument("--depth", type=int, default=0)
        sp.add_argument("--policy", choices=["smallest", "seeded"])
        sp.add_argument("--seed", type=int)

    common(sub.add_parser("verify-relation", help="check the degree p^2+1 relation"))
    common(sub.add_parser("run", help="run the ladder and write a transcript"), depth=True)
    cert = sub.add_parser("certify", help="certificate for one stage")
    common(cert)
    cert.add_argument("--block", type=int, required=True)
    cert.add_argument("--i", type=int, required=True)
    search = sub.add_parser("search", help="bounded falsifier search at one stage")
    common(search)
    search.add_argument("--block", type=int, required=True)
    search.add_argument("--i", type=int, required=True)
    search.add_argument("--degree", type=int, required=True)
    search.add_argument("--workers", type=int, default=1)
    return parser


def config_from_args(ns) -> RunConfig:
    policy = ns.policy or ("seeded" if ns.seed is not None else "smallest")
    return RunConfig(
        command=ns.command, p=ns.p, depth=getattr(ns, "depth", 0), precision=ns.precision,
        policy=policy, seed=ns.seed, block=getattr(ns, "block", None),
        i=getattr(ns, "i", None), degree=getattr(ns, "degree", None),
        workers=getattr(ns, "workers", 1),
    ).validate()


def _emit(payload: dict, out: str | None):
    text = json.dumps(payload, sort_keys=True, indent=2) + "\n"
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def main(argv=None) -> int:
    parser = build_parser()
    ns = parser.parse_args(argv)
    try:
        cfg = config_from_args(ns)
    except UsageError as exc:
        parser.print_usage(sys.stderr)
        print(f"ladderwork: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    try:
        code, payload = COMMANDS[cfg.command](cfg)
    except (LadderInconsistency, CertificationError, NormalFormError, PrecisionError) as exc:
        code = EXIT_INCONSISTENT
        payload = _envelope(cfg, "inconsistent", error=f"{type(exc).__name__}: {exc}",
                            diff={k: list(v) for k, v in getattr(exc, "diff", {}).items()})
    _emit(payload, ns.out)
    return code


if __name__ == "__main__":
    sys.exit(main())
