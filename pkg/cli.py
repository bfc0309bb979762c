"""Command-line interface for affine Weyl group and ADLV computations."""
from __future__ import annotations

import argparse
import json
import logging
import sys
from multiprocessing.pool import ThreadPool
from pathlib import Path
from typing import Any, Callable, Dict, List, Optional, Sequence, Tuple

from adlvlab.adlv import (
    pipeline_nonempty,
    rational_json,
    report_to_dict,
    top_components,
    verify_theorem_a,
)
from adlvlab.affineweyl import AffineWeylGroup, FrobeniusAction, affine_weyl
from adlvlab.classpoly import class_polynomials, class_polynomials_by_conjclass, engine_for
from adlvlab.elements import format_class_text, format_element, format_explicit, parse_element, split_class_key
from adlvlab.errors import AdlvLabError, MalformedElement, SearchBudgetExceeded
from adlvlab.models import LOG_LEVELS, RunConfig
from adlvlab.parahoric import verify_prop36
from adlvlab.repcalc import chen_zhu_count
from adlvlab.rootdata import dominant_coweights, preset_names, resolve_group
from adlvlab.sigmaconj import DEFAULT_BUDGET, b_class_of, enumerate_b_g_mu, newton_kottwitz

_logger = logging.getLogger(__name__)

GRID_PRESETS: Sequence[str] = ("A1", "A2", "C2", "2A3")
GRID_MAX_LENGTH = 6

# exit status, JSON payload, human-readable lines
Outcome = Tuple[int, Dict[str, Any], List[str]]


def render_table(headers: Sequence[str], rows: Sequence[Sequence[Any]]) -> List[str]:
    """Render rows as a box-drawn table."""
    cells = [[str(h) for h in headers]] + [[str(c) for c in row] for row in rows]
    widths = [max(len(r[i]) for r in cells) for i in range(len(headers))]

    def line(left: str, mid: str, right: str) -> str:
        return left + mid.join("─" * (w + 2) for w in widths) + right

    def row_str(row: Sequence[str]) -> str:
        return "│" + "│".join(f" {c:<{w}} " for c, w in zip(row, widths)) + "│"

    out = [line("┌", "┬", "┐"), row_str(cells[0]), line("├", "┼", "┤")]
    out.extend(row_str(r) for r in cells[1:])
    out.append(line("└", "┴", "┘"))
    return out


def parse_mu(text: str, rank: int) -> Tuple[int, ...]:
    cleaned = text.strip().strip("[]()")
    try:
        mu = tuple(int(x) for x in cleaned.split(",") if x.strip())
    except ValueError as exc:
        raise MalformedElement(f"cannot read coweight {text!r}") from exc
    if len(mu) != rank:
        raise MalformedElement(f"coweight {text!r} needs {rank} coordinates")
    return mu


def _fractions(vec: Sequence) -> List[Any]:
    return [rational_json(x) for x in vec]


def _text(vec: Sequence) -> str:
    return "(" + ", ".join(str(x) for x in vec) + ")"


def _load(config: RunConfig) -> AffineWeylGroup:
    group = affine_weyl(resolve_group(config.group))
    engine_for(group, group.frobenius, config.budget, config.cache_dir)
    return group


def _b_class(group: AffineWeylGroup, text: str, budget: int):
    try:
        _, elt_text = split_class_key(text)
    except MalformedElement:
        elt_text = text
    return b_class_of(group, parse_element(group, elt_text), group.frobenius, budget)


def cmd_validate(config: RunConfig) -> Outcome:
    """Load a group datum and summarise it."""
    group = _load(config)
    datum = group.datum
    payload = {
        "success": True,
        "group": datum.name,
        "components": [c.label for c in datum.components],
        "rank": datum.rank,
        "weyl_order": len(datum.weyl),
        "omega_order": len(group.omega_elements),
        "frobenius_order": datum.frobenius_order,
        "diagram_perm": list(datum.diagram_perm),
        "omega_twist": datum.omega_twist,
        "split": datum.is_split,
    }
    rows = [[k, v] for k, v in payload.items() if k != "success"]
    return 0, payload, render_table(["field", "value"], rows)


def cmd_length(config: RunConfig) -> Outcome:
    """Print the length of an element."""
    group = _load(config)
    w = parse_element(group, config.args[0])
    payload = {
        "success": True,
        "element": format_element(group, w),
        "explicit": format_explicit(group, w),
        "length": group.length(w),
    }
    return 0, payload, [f"{payload['element']}  ({payload['explicit']})  length {payload['length']}"]


def cmd_classpoly(config: RunConfig) -> Outcome:
    """Class polynomials of an element in the (q-1) basis."""
    group = _load(config)
    frob = group.frobenius
    w = parse_element(group, config.args[0])
    level = config.options.get("level") or "tilde_class"
    if level == "conjclass":
        table = class_polynomials_by_conjclass(group, w, frob, config.budget)
    else:
        table = class_polynomials(group, w, frob, config.budget)
    classes = []
    for key, poly in table.items():
        nk = newton_kottwitz(group, key.rep, frob)
        classes.append(
            {
                "key": format_class_text(group, key.level, key.rep),
                "coeffs": list(poly.coeffs),
                "newton": _fractions(nk.newton),
                "kappa": list(nk.kappa),
            }
        )
    classes.sort(key=lambda c: c["key"])
    payload = {"success": True, "element": format_element(group, w), "level": level, "classes": classes}
    rows = [[c["key"], c["coeffs"], _text(c["newton"]), _text(c["kappa"])] for c in classes]
    return 0, payload, render_table(["class", "(q-1) coeffs", "newton", "kappa"], rows)


def cmd_bgmu(config: RunConfig) -> Outcome:
    """List the classes of B(G, mu)."""
    group = _load(config)
    mu = parse_mu(config.args[0], group.datum.rank)
    classes = []
    for b in enumerate_b_g_mu(group, mu, group.frobenius, config.budget):
        classes.append(
            {
                "key": format_class_text(group, "conjclass", b.rep),
                "newton": _fractions(b.newton),
                "kappa": list(b.kappa),
                "basic": b.basic,
            }
        )
    payload = {"success": True, "mu": list(mu), "classes": classes}
    rows = [[c["key"], _text(c["newton"]), _text(c["kappa"]), c["basic"]] for c in classes]
    return 0, payload, render_table(["class", "newton", "kappa", "basic"], rows)


def cmd_adlv(config: RunConfig) -> Outcome:
    """Dimension and top components of X_mu(b)."""
    group = _load(config)
    mu = parse_mu(config.args[0], group.datum.rank)
    b = _b_class(group, config.args[1], config.budget)
    report = top_components(group, mu, b, group.frobenius, config.budget, config.q_values)
    payload = {"success": True, **report_to_dict(group, report)}
    rows = [[k, payload[k]] for k in ("b", "nonempty", "dim", "defect", "orbit_count", "all_very_special")]
    lines = render_table(["field", "value"], rows)
    if report.stabilizers:
        lines += render_table(
            ["levi", "K", "very special"],
            [[list(s.levi), list(s.K), s.very_special] for s in report.stabilizers],
        )
    if report.q_check:
        lines += render_table(
            ["q", "Q", "vol", "Q * vol"],
            [[c.q, c.Q, c.vol_very_special, c.product] for c in report.q_check],
        )
    return (0 if report.q_holds else 1), payload, lines


def cmd_check_theorem_a(config: RunConfig) -> Outcome:
    """Check very-speciality of stabilizers over B(G, mu)."""
    group = _load(config)
    mu = parse_mu(config.args[0], group.datum.rank)
    result = verify_theorem_a(group, mu, group.frobenius, config.budget)
    reports = [report_to_dict(group, r) for r in result.reports]
    payload = {"success": True, "mu": list(mu), "ok": result.ok, "reports": reports}
    rows = [[r["b"], r["dim"], r["orbit_count"], r["all_very_special"]] for r in reports]
    return (0 if result.ok else 1), payload, render_table(["class", "dim", "orbits", "very special"], rows)


def cmd_check_prop36(config: RunConfig) -> Outcome:
    """Compare very special parahorics with volume maximisers."""
    group = _load(config)
    report = verify_prop36(group, group.frobenius, config.q_values)
    payload = {
        "success": True,
        "ok": report.ok,
        "violations": report.violations,
        "entries": [e.as_dict() for e in report.entries],
    }
    rows = [[list(e.K), list(e.vol_coeffs), e.logvol, e.very_special] for e in report.entries]
    lines = render_table(["K", "vol coeffs", "logvol", "very special"], rows) + report.violations
    return (0 if report.ok else 1), payload, lines


def cmd_check_chenzhu(config: RunConfig) -> Outcome:
    """Compare component orbit counts with weight multiplicities."""
    group = _load(config)
    frob = group.frobenius
    mu = parse_mu(config.args[0], group.datum.rank)
    entries = []
    for b in enumerate_b_g_mu(group, mu, frob, config.budget):
        report = top_components(group, mu, b, frob, config.budget)
        expected = chen_zhu_count(group, mu, b, frob)
        entries.append(
            {
                "b": format_class_text(group, "conjclass", b.rep),
                "chen_zhu": expected,
                "orbit_count": report.orbit_count,
                "match": expected == report.orbit_count,
            }
        )
    ok = all(e["match"] for e in entries)
    payload = {"success": True, "mu": list(mu), "ok": ok, "classes": entries}
    rows = [[e["b"], e["chen_zhu"], e["orbit_count"], e["match"]] for e in entries]
    return (0 if ok else 1), payload, render_table(["class", "dim V_mu(lambda_b)", "orbits", "match"], rows)


def grid_point(preset: str, mu: Tuple[int, ...], config: RunConfig) -> Dict[str, Any]:
    """Every end-to-end check for one coweight of one preset."""
    group = affine_weyl(resolve_group(preset))
    frob = group.frobenius
    record: Dict[str, Any] = {"group": preset, "mu": list(mu), "ok": True, "failures": []}
    failures: List[str] = record["failures"]
    try:
        result = verify_theorem_a(group, mu, frob, config.budget, config.q_values)
        record["classes"] = len(result.reports)
        if not result.ok:
            failures.append("stabilizer not very special")
        frames: List[Tuple[AffineWeylGroup, FrobeniusAction]] = []
        for report in result.reports:
            name = format_class_text(group, "conjclass", report.b.rep)
            if not pipeline_nonempty(group, mu, report.b, frob, config.budget):
                failures.append(f"{name}: class polynomials miss a class of B(G, mu)")
            failures.extend(
                f"{name}: Q * vol = {c.product} at q = {c.q}" for c in report.q_check if not c.holds
            )
            frames.extend(pair for pair in report.frames() if pair not in frames)
        for frame_group, frame in frames:
            check = verify_prop36(frame_group, frame, config.q_values)
            failures.extend(f"{frame_group.datum.name}: {v}" for v in check.violations)
        record["frames"] = len(frames)
    except AdlvLabError as exc:
        _logger.warning("%s mu=%s: %s", preset, list(mu), exc)
        failures.append(f"{type(exc).__name__}: {exc}")
    record["ok"] = not failures
    return record


def cmd_grid(config: RunConfig) -> Outcome:
    """Run the acceptance grid over the chosen presets."""
    presets = config.options.get("presets") or list(GRID_PRESETS)
    max_length = config.options.get("max_length") or GRID_MAX_LENGTH
    jobs = []
    for preset in presets:
        group = affine_weyl(resolve_group(preset))
        engine_for(group, group.frobenius, config.budget, config.cache_dir)
        jobs.extend((preset, mu) for mu in dominant_coweights(group.datum, max_length))
    with ThreadPool(config.jobs) as pool:
        records = pool.starmap(grid_point, [(p, mu, config) for p, mu in jobs])
    ok = all(r["ok"] for r in records)
    payload = {"success": True, "ok": ok, "points": records}
    rows = [[r["group"], _text(r["mu"]), r.get("classes", "-"), "ok" if r["ok"] else "; ".join(r["failures"])] for r in records]
    return (0 if ok else 1), payload, render_table(["group", "mu", "classes", "result"], rows)


def build_parser() -> argparse.ArgumentParser:
    """Create the CLI argument parser."""
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--group", default="A1", help="Preset name or group-datum JSON file (default: %(default)s)")
    common.add_argument("--budget", type=int, default=DEFAULT_BUDGET, help="Search budget (default: %(default)s)")
    common.add_argument("--q", type=int, nargs="+", help="Residue field sizes for volume checks (default: 2 3 5)")
    common.add_argument("--cache", help="Class-polynomial cache directory")
    common.add_argument("--jobs", type=int, default=1, help="Worker threads for the grid (default: %(default)s)")
    common.add_argument("--json", action="store_true", help="Write JSON instead of tables")
    common.add_argument("--output", help="Write to this file instead of stdout")
    common.add_argument("--log-level", default="WARNING", type=str.upper, choices=LOG_LEVELS)

    parser = argparse.ArgumentParser(description=__doc__)
    subparsers = parser.add_subparsers(dest="command", required=True)

    def add(name: str, func: Callable, help_text: str, metavars: Tuple[str, ...] = ()) -> argparse.ArgumentParser:
        sub = subparsers.add_parser(name, parents=[common], help=help_text)
        if metavars:
            sub.add_argument("params", nargs=len(metavars), metavar=metavars)
        sub.set_defaults(func=func)
        return sub

    add("validate", cmd_validate, "Validate a group datum")
    add("length", cmd_length, "Length of an element", ("ELEMENT",))
    classpoly = add("classpoly", cmd_classpoly, "Class polynomials of an element", ("ELEMENT",))
    classpoly.add_argument("--level", choices=("tilde_class", "conjclass"), default="tilde_class")
    add("bgmu", cmd_bgmu, "Enumerate B(G, mu)", ("MU",))
    add("adlv", cmd_adlv, "Report on X_mu(b)", ("MU", "B"))
    add("check-theorem-a", cmd_check_theorem_a, "Check stabilizers over B(G, mu)", ("MU",))
    add("check-prop36", cmd_check_prop36, "Check very special parahorics against volumes")
    add("check-chenzhu", cmd_check_chenzhu, "Check orbit counts against weight multiplicities", ("MU",))
    grid = add("grid", cmd_grid, "Run the acceptance grid")
    grid.add_argument("--presets", nargs="+", choices=preset_names())
    grid.add_argument("--max-length", type=int, default=GRID_MAX_LENGTH)
    return parser


def _write(config: Optional[RunConfig], text: str) -> None:
    if config is not None and config.output is not None:
        Path(config.output).write_text(text + "\n", encoding="utf-8")
    else:
        print(text)


def _error(exc: Exception) -> str:
    return json.dumps({"success": False, "error": str(exc), "type": type(exc).__name__}, indent=2)


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    handler = getattr(args, "func", None)
    if handler is None:
        parser.print_help()
        return 2
    config: Optional[RunConfig] = None
    try:
        config = RunConfig.from_namespace(args).validate()
        logging.basicConfig(level=config.log_level, stream=sys.stderr, format="%(levelname)s %(name)s: %(message)s")
        status, payload, lines = handler(config)
    except (ValueError, SearchBudgetExceeded) as exc:
        _write(config, _error(exc))
        return 2
    except AdlvLabError as exc:
        _write(config, _error(exc))
        return 1
    if config.json_output:
        _write(config, json.dumps(payload, indent=2))
    else:
        _write(config, "\n".join(lines))
    return status


if __name__ == "__main__":
    raise SystemExit(main())
