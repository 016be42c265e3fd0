"""Command-line front end: invariants, geometry, asymptotics, Fourier data, verification.

Exit codes: 0 ok, 1 verification failure, 2 usage error, 3 domain or budget error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import re
import sys
from dataclasses import dataclass, field

from . import rt_exact, verify
from .arith import SurgerySlope
from .geometry import DomainError, SolverError, fkp_lower_bound, solve_critical, yoshida_check
from .rt_exact import BudgetExceeded

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_DOMAIN = 0, 1, 2, 3

DEFAULT_TOLERANCES = {"fourier": 1e-8, "cross": 1e-9}
DEFAULT_BUDGETS = {"terms": rt_exact.DEFAULT_TERM_BUDGET, "nodes": 2048}


class UsageError(ValueError):
    pass


@dataclass
class RunConfig:
    slope: SurgerySlope | None
    r_list: list[int]
    tolerances: dict = field(default_factory=lambda: dict(DEFAULT_TOLERANCES))
    budgets: dict = field(default_factory=lambda: dict(DEFAULT_BUDGETS))
    fmt: str = "csv"
    out: str | None = None
    pretty: bool = False
    quick: bool = False

    def as_dict(self) -> dict:
        return {"slope": None if self.slope is None else [self.slope.p, self.slope.q],
                "r_list": self.r_list, "tolerances": self.tolerances, "budgets": self.budgets,
                "format": self.fmt, "quick": self.quick}


def parse_r_list(text: str) -> list[int]:
    """'51', '5,7,9', '5..31' (odd values) or '51..301:50'."""
    out = []
    for part in text.split(","):
        part = part.strip()
        m = re.fullmatch(r"(\d+)\.\.(\d+)(?::(\d+))?", part)
        if m:
            lo, hi = int(m[1]), int(m[2])
            step = int(m[3]) if m[3] else 2
            if step <= 0:
                raise UsageError(f"bad step in {part!r}")
            start = lo if m[3] else lo | 1
            out.extend(range(start, hi + 1, step))
        elif re.fullmatch(r"\d+", part):
            out.append(int(part))
        else:
            raise UsageError(f"cannot parse r value {part!r}")
    for r in out:
        if r < 3 or r % 2 == 0:
            raise UsageError(f"r must be odd and >= 3, got {r}")
    return out


def read_config_file(path: str) -> dict:
    """Flat key=value lines; '#' starts a comment."""
    items = {}
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, 1):
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise UsageError(f"{path}:{lineno}: expected key=value")
            key, val = (s.strip() for s in line.split("=", 1))
            items[key] = val
    return items


def _named_overrides(extra: list[str]) -> dict:
    """Collect --tol.NAME VALUE / --budget.NAME=VALUE pairs."""
    items, i = {}, 0
    while i < len(extra):
        tok = extra[i]
        m = re.fullmatch(r"--((?:tol|budget)\.\w+)(?:=(.*))?", tok)
        if not m:
            raise UsageError(f"unrecognized argument {tok!r}")
        if m[2] is not None:
            items[m[1]] = m[2]
            i += 1
        elif i + 1 < len(extra):
            items[m[1]] = extra[i + 1]
            i += 2
        else:
            raise UsageError(f"{tok} needs a value")
    return items


def build_config(args, extra) -> RunConfig:
    items = read_config_file(args.config) if args.config else {}
    items.update(_named_overrides(extra))
    for key in ("p", "q", "r", "format", "out"):
        val = getattr(args, key if key != "format" else "fmt")
        if val is not None:
            items[key] = str(val)
    if args.pretty:
        items["pretty"] = "true"
    if args.quick:
        items["quick"] = "true"

    def flag(name):
        return items.get(name, "false").lower() in ("1", "true", "yes")

    slope = None
    if "p" in items or "q" in items:
        try:
            slope = SurgerySlope(int(items.get("p", "1")), int(items.get("q", "1")))
        except ValueError as exc:
            raise UsageError(str(exc)) from exc
    cfg = RunConfig(slope, parse_r_list(items["r"]) if "r" in items else [],
                    fmt=items.get("format", "csv"), out=items.get("out"),
                    pretty=flag("pretty"), quick=flag("quick"))
    if cfg.fmt not in ("csv", "json"):
        raise UsageError(f"format must be csv or json, got {cfg.fmt!r}")
    for key, val in items.items():
        kind, _, name = key.partition(".")
        if kind == "tol":
            tol = float(val)
            if not tol > 0:
                raise UsageError(f"tolerance {name} must be positive")
            cfg.tolerances[name] = tol
        elif kind == "budget":
            cfg.budgets[name] = int(val)
    return cfg


# ---------------------------------------------------------------------------
# output


def _cell(v):
    if isinstance(v, float):
        return "%.17g" % v
    return str(v)


def write_csv(rows: list[dict], stream) -> None:
    if not rows:
        return
    w = csv.writer(stream, lineterminator="\n")
    w.writerow(rows[0].keys())
    for row in rows:
        w.writerow(_cell(v) for v in row.values())


def _jsonable(v):
    if isinstance(v, float) and not math.isfinite(v):
        return repr(v)
    return v


def write_json(cfg: RunConfig, rows, summary, stream) -> None:
    doc = {"config": cfg.as_dict(),
           "rows": [{k: _jsonable(v) for k, v in row.items()} for row in rows],
           "summary": summary}
    json.dump(doc, stream, indent=2)
    stream.write("\n")


def write_pretty(rows: list[dict], stream) -> None:
    if not rows:
        return
    cols = list(rows[0].keys())
    text = [[f"{v:.6g}" if isinstance(v, float) else str(v) for v in row.values()] for row in rows]
    widths = [max(len(c), *(len(t[i]) for t in text)) for i, c in enumerate(cols)]
    stream.write("  ".join(c.rjust(w) for c, w in zip(cols, widths)) + "\n")
    for t in text:
        stream.write("  ".join(v.rjust(w) for v, w in zip(t, widths)) + "\n")


def emit(cfg: RunConfig, rows, summary) -> None:
    buf = io.StringIO()
    if cfg.pretty:
        write_pretty(rows, buf)
    elif cfg.fmt == "json":
        write_json(cfg, rows, summary, buf)
    else:
        write_csv(rows, buf)
    if cfg.out:
        with open(cfg.out, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(buf.getvalue())
    else:
        sys.stdout.write(buf.getvalue())


# ---------------------------------------------------------------------------
# subcommands


def _need_slope(cfg):
    if cfg.slope is None:
        raise UsageError("this command needs -p and -q")
    return cfg.slope


def _need_r(cfg):
    if not cfg.r_list:
        raise UsageError("this command needs -r")
    return cfg.r_list


def _need_hyperbolic(slope):
    if not slope.hyperbolic:
        raise DomainError(f"slope {slope} gives a non-hyperbolic filling")


def cmd_invariant(cfg: RunConfig) -> int:
    slope = _need_slope(cfg)
    if not slope.hyperbolic:
        print(f"warning: slope {slope} is non-hyperbolic; computing RT_r anyway", file=sys.stderr)
    rows = []
    budget = cfg.budgets["terms"]
    for r in _need_r(cfg):
        rd = rt_exact.build_root_data(r)
        sym = rt_exact.rt_symmetrized(slope, rd, budget=budget)
        direct = rt_exact.rt_direct(slope, rd, budget=budget)
        cross = abs(sym.value - direct.value) / max(abs(direct.value), 1e-300)
        rows.append({"r": r, "re": sym.value.real, "im": sym.value.imag, "log_abs": sym.log_abs,
                     "formula": sym.formula, "cross_check": cross})
    worst = max(row["cross_check"] for row in rows)
    emit(cfg, rows, {"max_cross_check": worst, "tolerance": cfg.tolerances["cross"]})
    return EXIT_OK if worst < cfg.tolerances["cross"] else EXIT_FAIL


def cmd_geometry(cfg: RunConfig) -> int:
    slope = _need_slope(cfg)
    _need_hyperbolic(slope)
    c = solve_critical(slope)
    bound, vacuous = fkp_lower_bound(slope)
    row = {"p": slope.p, "q": slope.q,
           "x0_re": c.x0.real, "x0_im": c.x0.imag, "y0_re": c.y0.real, "y0_im": c.y0.imag,
           "A_re": c.A.real, "A_im": c.A.imag, "B_re": c.B.real, "B_im": c.B.imag,
           "volume": c.volume, "cs": c.cs,
           "hess_det_re": c.hess_det.real, "hess_det_im": c.hess_det.imag,
           "hol_m_re": c.holonomy_m.real, "hol_m_im": c.holonomy_m.imag,
           "hol_l_re": c.holonomy_l.real, "hol_l_im": c.holonomy_l.imag,
           "hol_core_re": c.holonomy_core.real, "hol_core_im": c.holonomy_core.imag,
           "fkp_bound": bound, "fkp_vacuous": vacuous,
           "residual_c": c.residual_c, "residual_hg": c.residual_hg,
           "yoshida": yoshida_check(slope, c)}
    emit(cfg, [row], {"newton_steps": c.newton_steps})
    return EXIT_OK


def cmd_asymptotics(cfg: RunConfig) -> int:
    from .asymptotics.saddle import convergence_table, fit_residuals, smoothed_decreasing

    slope = _need_slope(cfg)
    _need_hyperbolic(slope)
    rs = _need_r(cfg)
    table = convergence_table(slope, rs, budget=cfg.budgets["terms"])
    rows = [{"r": t.r, "re_scaled": t.rt_log_scaled.real, "im_scaled": t.rt_log_scaled.imag,
             "target_re": t.target.real, "target_im": t.target.imag, "residual": t.residual,
             "ratio_re": t.saddle_ratio.real, "ratio_im": t.saddle_ratio.imag,
             "tv_scaled": t.tv_scaled, "tv_residual": t.tv_residual} for t in table]
    summary = {"decreasing": smoothed_decreasing([t.residual for t in table])}
    if len(rs) >= 3:
        fit = fit_residuals(rs, [t.residual for t in table])
        summary.update(fit_a=fit.a, fit_b=fit.b, fit_relative_residual=fit.relative_residual)
    emit(cfg, rows, summary)
    return EXIT_OK


def cmd_fourier(cfg: RunConfig) -> int:
    from .asymptotics.fourier import fourier_leading

    slope = _need_slope(cfg)
    _need_hyperbolic(slope)
    rows = []
    for r in _need_r(cfg):
        lead = fourier_leading(slope, r, tol=cfg.tolerances["fourier"], nmax=cfg.budgets["nodes"])
        inv = rt_exact.rt_symmetrized(slope, rt_exact.build_root_data(r),
                                      budget=cfg.budgets["terms"]).value
        approx = lead.approx_invariant
        rows.append({"r": r, "f0_re": lead.f0.real, "f0_im": lead.f0.imag,
                     "f1_re": lead.f1.real, "f1_im": lead.f1.imag,
                     "approx_re": approx.real, "approx_im": approx.imag,
                     "rel_error": abs(approx / inv - 1), "nodes": lead.nodes})
    emit(cfg, rows, {"delta": lead.delta})
    return EXIT_OK


def cmd_verify(cfg: RunConfig) -> int:
    checks = verify.run_all(quick=cfg.quick)
    for chk in checks:
        print(chk.line(), file=sys.stderr)
    rows = [{"criterion": c.criterion, "title": c.title, "passed": c.passed,
             "seconds": c.seconds, "measured": verify._fmt(list(c.measured.items()))}
            for c in checks]
    failed = [c.criterion for c in checks if not c.passed]
    emit(cfg, rows, {"passed": not failed, "failed": failed})
    return EXIT_OK if not failed else EXIT_FAIL


COMMANDS = {"invariant": cmd_invariant, "geometry": cmd_geometry, "asymptotics": cmd_asymptotics,
            "fourier": cmd_fourier, "verify": cmd_verify}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="fig8rt", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        sp = sub.add_parser(name)
        sp.add_argument("-p", type=int)
        sp.add_argument("-q", type=int)
        sp.add_argument("-r", help="r values: 51 | 5,7,9 | 5..31 (odd) | 51..301:50")
        sp.add_argument("--config", help="flat key=value file; flags override it")
        sp.add_argument("--format", dest="fmt", choices=("csv", "json"))
        sp.add_argument("--out")
        sp.add_argument("--pretty", action="store_true")
        sp.add_argument("--quick", action="store_true")
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args, extra = parser.parse_known_args(argv)
    try:
        cfg = build_config(args, extra)
        return COMMANDS[args.command](cfg)
    except (UsageError, OSError) as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (DomainError, SolverError, BudgetExceeded) as exc:
        print(f"{type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_DOMAIN


if __name__ == "__main__":
    sys.exit(main())
