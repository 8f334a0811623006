"""Command-line front end.

Exit codes: 0 success, 1 input or schema error, 2 model axiom violation,
3 obstruction (including a missing first-order deformation).
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import dataclass
from math import comb
from typing import Sequence

from . import __version__
from .core import format_scalar
from .cup import ModelDescriptor, ModelFormatError, build_ample_divisor_canonical, build_koszul, validate_cup_square_zero
from .fixtures import LIFT_FIXTURES
from .ledger import (
    BadRange,
    HodgeVector,
    chi_and_gap,
    complete_intersection_invariants,
    double_cover_invariants,
    ledger_verdict,
    product_with_genus2_curve,
    sweep_parity,
)
from .lifting import (
    ModelAxiomError,
    NoFirstOrderDeformation,
    ObstructionError,
    SectionAlgebraModel,
    lift_full,
    validate_model,
    verify_lift,
)
from .lifting import ModelFormatError as LiftFormatError
from .strata import CriterionMismatch, FamilyFormatError, SkewFamily, sigma_polynomial, smooth_point_test
from .transversality import incidence_report, isolated_point_test

SCHEMA_VERSION = 1
EXIT_OK, EXIT_INPUT, EXIT_AXIOM, EXIT_OBSTRUCTION = 0, 1, 2, 3
SUBCOMMANDS = ("ledger", "transversality", "pfaffian", "lift", "examples", "sweep")


class InputError(Exception):
    pass


class AxiomFinding(Exception):
    def __init__(self, report: dict) -> None:
        super().__init__(report.get("violation"))
        self.report = report


class ObstructionFinding(Exception):
    def __init__(self, report: dict) -> None:
        super().__init__(report.get("obstruction"))
        self.report = report


@dataclass(frozen=True)
class RunConfig:
    subcommand: str
    input_path: str | None = None
    builtin: str | None = None
    seed: int = 0
    sample_count: int = 64
    truncation: int = 6
    output: str = "text"
    q: int | None = None
    chi: int | None = None
    shift: int = 0
    n: int | None = None
    pg_y: int | None = None
    max_n: int = 5
    max_h: int = 6

    def echo(self) -> dict:
        return {
            "subcommand": self.subcommand,
            "input": self.input_path,
            "builtin": self.builtin,
            "seed": self.seed,
            "samples": self.sample_count,
            "order": self.truncation,
            "output": self.output,
            "version": __version__,
        }


def _load_json(path: str):
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from exc
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}: malformed JSON at line {exc.lineno}, column {exc.colno}: {exc.msg}") from exc


def _fmt(vec) -> list[str]:
    return [format_scalar(x) for x in vec]


# ledger


def _ledger_builtin(cfg: RunConfig) -> tuple[HodgeVector | None, dict]:
    name = cfg.builtin
    if name == "chen-hacon-cover":
        inv = double_cover_invariants(0, 3, 1, cfg.pg_y if cfg.pg_y is not None else 4, 0)
        return None, {"family": "double cover of the q = 3 threefold", "chi": inv.chi, "q": inv.q, "p_g": inv.p_g, "gap": inv.gap}
    if name == "chen-hacon-general":
        n = cfg.n or 4
        inv = double_cover_invariants(0, n, 1, cfg.pg_y if cfg.pg_y is not None else 4, 0)
        return None, {"family": f"double cover, dim {n}", "chi": inv.chi, "q": inv.q, "p_g": inv.p_g, "gap": inv.gap}
    if name == "genus2-product":
        inv = product_with_genus2_curve(cfg.n or 3)
        return None, {"family": "product with a genus 2 curve", "dim": inv.dim, "chi": inv.chi, "q": inv.q, "p_g": inv.p_g, "gap": inv.gap}
    if name == "complete-intersection":
        n, pg_y = cfg.n or 3, cfg.pg_y or 0
        q, gap = complete_intersection_invariants(n, pg_y)
        return None, {"family": "complete intersection in D x Y", "n": n, "q": q, "pgY": pg_y, "gap": gap}
    raise InputError(f"unknown ledger builtin {name!r}")


def run_ledger(cfg: RunConfig) -> dict:
    if cfg.builtin:
        _, result = _ledger_builtin(cfg)
        return {"result": result, "flags": {}}
    if not cfg.input_path:
        raise InputError("ledger needs --input or --builtin")
    doc = _load_json(cfg.input_path)
    try:
        hv = HodgeVector(int(doc["n"]), tuple(doc["h"]))
        flags = doc.get("flags", {}) or {}
        no_agt = bool(flags.get("no_agt_fibration", False))
        isolated = bool(flags.get("isolated_zero", False))
    except (KeyError, TypeError, ValueError) as exc:
        raise InputError(f"ledger input does not match the schema: {exc}") from exc
    verdict = ledger_verdict(hv, no_agt_fibration=no_agt, isolated_zero=isolated)
    return {"result": verdict.to_dict(), "flags": verdict.flags, "hodge": {"n": hv.n, "h": list(hv.h)}}


# transversality


def _cup_model(cfg: RunConfig):
    if cfg.builtin == "ample-divisor":
        return build_ample_divisor_canonical(cfg.q or 3, cfg.chi or 1)
    if cfg.builtin == "koszul":
        return build_koszul(cfg.q or 3, cfg.shift)
    if cfg.builtin:
        raise InputError(f"unknown model builtin {cfg.builtin!r}")
    if not cfg.input_path:
        raise InputError("transversality needs --input or --builtin")
    try:
        return ModelDescriptor.from_dict(_load_json(cfg.input_path)).build()
    except (ModelFormatError, ValueError) as exc:
        raise InputError(str(exc)) from exc


def run_transversality(cfg: RunConfig) -> dict:
    m = _cup_model(cfg)
    model = {"label": m.label, "q": m.v_dim, "graded_dims": list(m.graded_dims)}
    violation = validate_cup_square_zero(m)
    if violation is not None:
        raise AxiomFinding(
            {
                "model": model,
                "violation": "(v cup)^2 != 0",
                "witness": {"v": _fmt(violation.v), "k": violation.k, "x": _fmt(violation.x), "value": _fmt(violation.value)},
            }
        )
    cert = isolated_point_test(m, cfg.sample_count, cfg.seed)
    report = incidence_report(m, cfg.sample_count, cfg.seed)
    return {
        "model": model,
        "isolated_point": cert.wording,
        "isolated_point_certified": cert.certified,
        "incidence": report.to_dict(),
    }


# pfaffian


def _family(cfg: RunConfig) -> SkewFamily:
    if cfg.builtin == "ample-surface":
        return SkewFamily.from_model(build_ample_divisor_canonical(3, cfg.chi or 2))
    if cfg.builtin:
        raise InputError(f"unknown family builtin {cfg.builtin!r}")
    if not cfg.input_path:
        raise InputError("pfaffian needs --input or --builtin")
    try:
        return SkewFamily.from_dict(_load_json(cfg.input_path))
    except (FamilyFormatError, ValueError) as exc:
        raise InputError(str(exc)) from exc


def run_pfaffian(cfg: RunConfig) -> dict:
    f = _family(cfg)
    desc = sigma_polynomial(f, min(cfg.sample_count, 16), cfg.seed)
    out = {"family": {"q": f.q, "p_g": f.p_g, "source": f.source}, "sigma": desc.to_dict()}
    if f.q % 2 == 0 and not f.pf_poly.is_zero():
        try:
            out["sample_points"] = [
                {"s": _fmt(s), "rank": r, "type": smooth_point_test(f, s).value} for s, r in desc.rank_strata
            ]
        except CriterionMismatch as exc:
            raise AxiomFinding({**out, "violation": "gradient and rank criteria disagree", "witness": str(exc)})
    return out


# lift


def _lift_model(cfg: RunConfig) -> SectionAlgebraModel:
    if cfg.builtin:
        if cfg.builtin not in LIFT_FIXTURES:
            raise InputError(f"unknown lift fixture {cfg.builtin!r}; choose from {sorted(LIFT_FIXTURES)}")
        return LIFT_FIXTURES[cfg.builtin]()
    if not cfg.input_path:
        raise InputError("lift needs --input or --builtin")
    try:
        return SectionAlgebraModel.from_dict(_load_json(cfg.input_path))
    except LiftFormatError as exc:
        raise InputError(str(exc)) from exc


def run_lift(cfg: RunConfig) -> dict:
    m = _lift_model(cfg)
    N = min(cfg.truncation, m.N)
    model = {"name": m.name, "N_max": m.N, "order_requested": cfg.truncation}
    structural = validate_model(m, require_transversality=False)
    if structural is not None:
        raise AxiomFinding({"model": model, "violation": structural.which, "witness": repr(structural.witness)})
    transversal = validate_model(m) is None
    try:
        result = lift_full(m, N)
    except ObstructionError as exc:
        raise ObstructionFinding({"model": model, "obstruction": str(exc), "order": exc.order, "transversality_axiom": transversal})
    except NoFirstOrderDeformation as exc:
        raise ObstructionFinding({"model": model, "obstruction": f"no first-order deformation: {exc}", "order": 1})
    except ModelAxiomError as exc:
        raise AxiomFinding({"model": model, "violation": exc.which, "witness": repr(exc.witness)})
    mismatch = verify_lift(m, result)
    return {
        "model": model,
        "transversality_axiom": transversal,
        "lift": result.to_dict(),
        "tails": {str(n): _fmt(result.tail(m, n)) for n in range(1, N + 1)},
        "verify": "pass" if mismatch is None else f"mismatch at order {mismatch.order}: {mismatch.detail}",
    }


# examples


def run_examples(cfg: RunConfig) -> dict:
    if cfg.builtin != "ample-divisor":
        if cfg.builtin in ("chen-hacon-cover", "chen-hacon-general", "genus2-product", "complete-intersection"):
            return run_ledger(cfg)
        raise InputError(f"unknown example {cfg.builtin!r}")
    q, chi = cfg.q or 4, cfg.chi or 1
    if q < 3:
        raise InputError("the ample-divisor example needs q >= 3")
    n = q - 1
    m = build_ample_divisor_canonical(q, chi)
    p_g = m.dim(0)
    hodge = HodgeVector(n, tuple(comb(q, i) for i in range(n)) + (p_g,))
    chi_k, gap = chi_and_gap(hodge)
    verdict = ledger_verdict(hodge, no_agt_fibration=True, isolated_zero=True)
    cert = isolated_point_test(m, cfg.sample_count, cfg.seed)
    report = incidence_report(m, cfg.sample_count, cfg.seed)
    ok = gap == 0 and chi_k == chi and cert.certified and report.dim_I_main == chi + q - 2
    line = "p_g = χ+q−1; verdict: |K| ⊂ P_main candidates satisfied" if ok else "p_g ≠ χ+q−1 or transversality failed on sample"
    return {
        "summary": line,
        "q": q,
        "n": n,
        "chi": chi_k,
        "p_g": p_g,
        "gap": gap,
        "h_of_X": verdict.h_of_X,
        "s_n": verdict.s_n,
        "verdict": verdict.exorbitant_verdict.value,
        "isolated_point": cert.wording,
        "dim_I_main": report.dim_I_main,
        "flags": verdict.flags,
    }


def run_sweep(cfg: RunConfig) -> dict:
    try:
        report = sweep_parity(cfg.max_n, cfg.max_h)
    except BadRange as exc:
        raise InputError(str(exc)) from exc
    return {"sweep": report.to_dict(), "counterexample_count": len(report.counterexamples)}


RUNNERS = {
    "ledger": run_ledger,
    "transversality": run_transversality,
    "pfaffian": run_pfaffian,
    "lift": run_lift,
    "examples": run_examples,
    "sweep": run_sweep,
}


def _render_text(report: dict, indent: int = 0) -> list[str]:
    lines = []
    pad = "  " * indent
    for key in sorted(report):
        value = report[key]
        if isinstance(value, dict):
            lines.append(f"{pad}{key}:")
            lines.extend(_render_text(value, indent + 1))
        elif isinstance(value, list) and value and isinstance(value[0], dict):
            lines.append(f"{pad}{key}:")
            for item in value:
                lines.append(f"{pad}  -")
                lines.extend(_render_text(item, indent + 2))
        else:
            lines.append(f"{pad}{key}: {value}")
    return lines


def render(report: dict, output: str) -> str:
    if output == "json":
        return json.dumps(report, sort_keys=True, indent=2, ensure_ascii=False)
    head = [report["summary"]] if "summary" in report else []
    rest = {k: v for k, v in report.items() if k != "summary"}
    return "\n".join(head + _render_text(rest))


def run(cfg: RunConfig) -> tuple[int, dict]:
    base = {"schema_version": SCHEMA_VERSION, "config": cfg.echo()}
    try:
        body = RUNNERS[cfg.subcommand](cfg)
        code = EXIT_OK
    except AxiomFinding as exc:
        body, code = {"status": "axiom_violation", **exc.report}, EXIT_AXIOM
    except ObstructionFinding as exc:
        body, code = {"status": "obstruction", **exc.report}, EXIT_OBSTRUCTION
    except (InputError, ValueError) as exc:
        body, code = {"status": "error", "error": str(exc)}, EXIT_INPUT
    else:
        body = {"status": "ok", **body}
    return code, {**base, **body}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="paracanonical", description="Exact checks on paracanonical-system models.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="subcommand", required=True)
    for name in SUBCOMMANDS:
        p = sub.add_parser(name)
        p.add_argument("--input", dest="input_path")
        p.add_argument("--builtin")
        p.add_argument("--seed", type=int, default=None)
        p.add_argument("--samples", type=int, default=64)
        p.add_argument("--order", type=int, default=6)
        p.add_argument("--output", choices=("text", "json"), default="text")
        p.add_argument("--q", type=int)
        p.add_argument("--chi", type=int)
        p.add_argument("--shift", type=int, default=0)
        p.add_argument("--n", type=int)
        p.add_argument("--pg-y", dest="pg_y", type=int)
        p.add_argument("--max-n", dest="max_n", type=int, default=5)
        p.add_argument("--max-h", dest="max_h", type=int, default=6)
    return parser


def config_from_args(args: argparse.Namespace, environ=os.environ) -> RunConfig:
    seed = args.seed
    if seed is None:
        env = environ.get("PARACANONICAL_SEED")
        seed = int(env) if env not in (None, "") else 0
    return RunConfig(
        subcommand=args.subcommand,
        input_path=args.input_path,
        builtin=args.builtin,
        seed=seed,
        sample_count=args.samples,
        truncation=args.order,
        output=args.output,
        q=args.q,
        chi=args.chi,
        shift=args.shift,
        n=args.n,
        pg_y=args.pg_y,
        max_n=args.max_n,
        max_h=args.max_h,
    )


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = config_from_args(args)
    except ValueError:
        print("error: PARACANONICAL_SEED must be an integer", file=sys.stderr)
        return EXIT_INPUT
    code, report = run(cfg)
    text = render(report, cfg.output)
    print(text, file=sys.stderr if code == EXIT_INPUT and cfg.output == "text" else sys.stdout)
    return code


if __name__ == "__main__":
    sys.exit(main())
