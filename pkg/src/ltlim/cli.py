"""Command-line front end.

Subcommands:

* ``measure``       load a ``.ltlkb`` base and evaluate measures.
* ``declare``       compile a ``.decl`` constraint model, emit the
                    translated ``.ltlkb``, and measure the result.
* ``explain``       locate a conflict: witness, affected states, and
                    the distinct minimal conflict bases.
* ``postulates``    compliance matrix, curated counterexamples, and
                    seeded random sweeps.
* ``oracle-check``  recompute every measure by exhaustive enumeration
                    and compare against the search backend.

Exit codes: 0 success, 1 oracle-check disagreement, 2 input or parse
error, 3 node budget exceeded.  JSON reports contain no timestamps or
environment echoes, so identical inputs give identical bytes.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path
from typing import Sequence

from .declare import DeclareParseError, load_declare, translate_model, translation_pairs
from .formula import (
    DEFAULT_TRACE_LENGTH,
    FormulaParseError,
    GMode,
    KBParseError,
    KnowledgeBase,
    format_kb_text,
    load_kb,
    render_formula,
)
from .measures import MEASURE_IDS, MeasureRun, run_measures
from .oracle import DEFAULT_CELL_CAP, oracle_minimal_conflict_bases
from .postulates import (
    EXPECTED_MATRIX,
    Postulate,
    Verdict,
    curated_violation,
    run_curated,
    sweep,
)
from .semantics import Interpretation3, affected_states, conflict_base
from .solver import (
    DEFAULT_NODE_BUDGET,
    BudgetExceededError,
    count_min_conflict_signatures,
)

__all__ = ["main"]

_MEASURE_CHOICES = MEASURE_IDS + ("all",)
_POSTULATE_ORDER = tuple(Postulate)


def _json_value(value: int | float) -> int | str:
    return "inf" if value == float("inf") else int(value)


def _witness_dict(nu: Interpretation3 | None) -> dict | None:
    if nu is None:
        return None
    payload = nu.to_json_dict()
    payload["affected_states"] = sorted(affected_states(nu))
    payload["conflict_base"] = [[s, a] for s, a in sorted(conflict_base(nu))]
    return payload


def _witness_lines(label: str, nu: Interpretation3 | None) -> list[str]:
    if nu is None:
        return [f"{label}: none (no admissible model)"]
    lines = [f"{label}:"]
    for state in range(nu.m + 1):
        cells = " ".join(f"{a}={nu.value(state, a).token}" for a in nu.atoms)
        lines.append(f"  t{state}: {cells}" if cells else f"  t{state}: (no atoms)")
    affected = ", ".join(f"t{s}" for s in sorted(affected_states(nu))) or "none"
    base = ", ".join(f"(t{s}, {a})" for s, a in sorted(conflict_base(nu))) or "empty"
    lines.append(f"  affected states: {affected}")
    lines.append(f"  conflict base: {base}")
    return lines


def _kb_echo(command: str, source: str | None, kb: KnowledgeBase) -> dict:
    return {
        "command": command,
        "input": source,
        "m": kb.trace_length_m,
        "g_mode": kb.g_mode.value,
        "formulas": [render_formula(f) for f in kb.formulas],
        "ground_cells": [[s, a] for s, a in sorted(kb.ground_cells)],
    }


def _stats_dict(run: MeasureRun, budget: int, oracle: bool) -> dict:
    return {
        "nodes": run.nodes,
        "probes": run.probes,
        "budget": budget,
        "oracle": oracle,
    }


def _emit(payload: dict, text_lines: list[str], fmt: str) -> None:
    if fmt == "json":
        print(json.dumps(payload, indent=2))
    else:
        print("\n".join(text_lines))


def _measure_ids(selection: str) -> tuple[str, ...]:
    return MEASURE_IDS if selection == "all" else (selection,)


def _resolve_g_mode(value: str | None, default: GMode) -> GMode:
    if value is None:
        return default
    return GMode(value)


def _measure_text(source: str, kb: KnowledgeBase, run: MeasureRun, args) -> list[str]:
    lines = [
        f"knowledge base: {source} (m={kb.trace_length_m}, {kb.g_mode.value} G)"
    ]
    if kb.ground_cells:
        ground = ", ".join(f"(t{s}, {a})" for s, a in sorted(kb.ground_cells))
        lines.append(f"ground cells (pinned two-valued): {ground}")
    for i, f in enumerate(kb.formulas, start=1):
        lines.append(f"  {i}. {render_formula(f)}")
    if not kb.formulas:
        lines.append("  (empty base)")
    lines.append("measures:")
    width = max(len(i) for i in run.values)
    for mid, value in run.values.items():
        lines.append(f"  {mid:<{width}} = {_json_value(value)}")
    if "LTL_d" in run.values:
        lines += _witness_lines(
            "witness (minimal affected states)", run.witness_affected
        )
    if "LTL_c" in run.values:
        lines += _witness_lines(
            "witness (minimal conflict base)", run.witness_conflict
        )
    for warning in run.warnings:
        lines.append(f"warning: {warning}")
    lines.append(
        f"stats: nodes={run.nodes} probes={run.probes} budget={args.budget}"
        f" oracle={'yes' if args.oracle else 'no'}"
    )
    return lines


def _cmd_measure(args) -> int:
    kb = load_kb(
        args.input,
        m=args.m,
        g_mode=_resolve_g_mode(args.g_semantics, GMode.STRICT),
        allow_short_trace=args.allow_short_trace,
    )
    ids = _measure_ids(args.measure)
    run = run_measures(kb, ids, budget=args.budget, use_oracle=args.oracle)
    payload = _kb_echo("measure", args.input, kb)
    payload["measures"] = {mid: _json_value(v) for mid, v in run.values.items()}
    payload["witness_min_states"] = _witness_dict(run.witness_affected)
    payload["witness_min_conflict"] = _witness_dict(run.witness_conflict)
    payload["warnings"] = list(run.warnings)
    payload["solver_stats"] = _stats_dict(run, args.budget, args.oracle)
    _emit(payload, _measure_text(args.input, kb, run, args), args.format)
    return 0


def _cmd_declare(args) -> int:
    model = load_declare(args.input)
    if args.m is None:
        raise ValueError(
            "--m is required for declare: constraint files carry no"
            " trace length directive"
        )
    kb = translate_model(
        model,
        m=args.m,
        g_mode=_resolve_g_mode(args.g_semantics, GMode.REFLEXIVE),
        ground_init=not args.no_ground_init,
        allow_short_trace=args.allow_short_trace,
    )
    emit_path = Path(args.emit) if args.emit else Path(args.input).with_suffix(".ltlkb")
    emit_path.write_text(format_kb_text(kb), encoding="utf-8")
    ids = _measure_ids(args.measure)
    run = run_measures(kb, ids, budget=args.budget, use_oracle=args.oracle)

    payload = _kb_echo("declare", args.input, kb)
    payload["constraints"] = [str(c) for c in model.constraints]
    payload["translation"] = [
        {"constraint": str(c), "formula": render_formula(f)}
        for c, f in translation_pairs(model)
    ]
    payload["emitted"] = str(emit_path)
    payload["measures"] = {mid: _json_value(v) for mid, v in run.values.items()}
    payload["witness_min_states"] = _witness_dict(run.witness_affected)
    payload["witness_min_conflict"] = _witness_dict(run.witness_conflict)
    payload["warnings"] = list(run.warnings)
    payload["solver_stats"] = _stats_dict(run, args.budget, args.oracle)

    lines = [f"constraint model: {args.input} ({len(model.constraints)} constraints)"]
    for c, f in translation_pairs(model):
        lines.append(f"  {str(c):<28} -> {render_formula(f)}")
    lines.append(f"translated base written to {emit_path}")
    if kb.ground_cells:
        lines.append(
            "note: Init pinning is applied in this run but has no file syntax;"
            " reloading the emitted base drops it"
        )
    lines += _measure_text(str(emit_path), kb, run, args)[1:]
    _emit(payload, lines, args.format)
    return 0


def _cmd_explain(args) -> int:
    kb = load_kb(
        args.input,
        m=args.m,
        g_mode=_resolve_g_mode(args.g_semantics, GMode.STRICT),
        allow_short_trace=args.allow_short_trace,
    )
    if args.oracle:
        min_affected, bases, raw_models = oracle_minimal_conflict_bases(
            kb, cell_cap=args.oracle_cap
        )
        run = run_measures(kb, ("LTL_d",), budget=args.budget, use_oracle=True)
        nodes = probes = 0
    else:
        summary = count_min_conflict_signatures(kb, budget=args.budget)
        min_affected, bases, raw_models = (
            summary.min_affected,
            summary.bases,
            None,
        )
        run = run_measures(kb, ("LTL_d",), budget=args.budget)
        nodes, probes = run.nodes, run.probes

    shown = list(bases[: args.max_bases])
    payload = _kb_echo("explain", args.input, kb)
    payload["min_affected_states"] = min_affected
    payload["signature_count"] = len(bases)
    payload["conflict_bases"] = [
        [[s, a] for s, a in base] for base in shown
    ]
    payload["conflict_bases_shown"] = len(shown)
    payload["raw_model_count"] = raw_models
    payload["witness"] = _witness_dict(run.witness_affected)
    payload["warnings"] = list(run.warnings)
    payload["solver_stats"] = {
        "nodes": nodes,
        "probes": probes,
        "budget": args.budget,
        "oracle": args.oracle,
    }

    lines = [
        f"knowledge base: {args.input} (m={kb.trace_length_m}, {kb.g_mode.value} G)",
        f"minimal affected states: {min_affected}",
        f"distinct minimal conflict bases: {len(bases)}"
        + (f" (showing {len(shown)})" if len(shown) < len(bases) else ""),
    ]
    for i, base in enumerate(shown, start=1):
        cells = ", ".join(f"(t{s}, {a})" for s, a in base)
        lines.append(f"  {i}. {{{cells}}}")
    if raw_models is not None:
        lines.append(f"minimal-cost models before deduplication: {raw_models}")
    lines += _witness_lines("witness (minimal affected states)", run.witness_affected)
    for warning in run.warnings:
        lines.append(f"warning: {warning}")
    _emit(payload, lines, args.format)
    return 0


def _verdict_dict(verdict: Verdict) -> dict:
    return {
        "measure": verdict.measure_id,
        "postulate": verdict.postulate.value,
        "outcome": verdict.outcome.value,
        "details": verdict.details,
    }


def _cmd_postulates(args) -> int:
    measures = _measure_ids(args.measure)
    postulates = (
        _POSTULATE_ORDER
        if args.postulate == "all"
        else tuple(p for p in _POSTULATE_ORDER if p.value == args.postulate)
    )
    cells = []
    for mid in measures:
        for postulate in postulates:
            expected = EXPECTED_MATRIX[mid][postulate]
            cell: dict = {
                "measure": mid,
                "postulate": postulate.value,
                "expected": "holds" if expected else "fails",
            }
            if args.sweep:
                result = sweep(
                    mid,
                    postulate,
                    instances=args.sweep,
                    seed=args.seed,
                    m=args.m if args.m is not None else DEFAULT_TRACE_LENGTH,
                    budget=args.budget,
                )
                cell["instances"] = result.instances
                cell["holds"] = result.holds
                cell["not_applicable"] = result.not_applicable
                cell["violations"] = [_verdict_dict(v) for v in result.violations]
            elif not expected:
                recipe = curated_violation(mid, postulate)
                if recipe is None:
                    cell["certificate"] = None
                    cell["note"] = (
                        "no counterexample exists: the unnormalized atom count"
                        " is monotone and ignores free formulas by construction"
                    )
                else:
                    cell["certificate"] = _verdict_dict(
                        run_curated(mid, postulate, budget=args.budget)
                    )
            cells.append(cell)

    payload = {
        "command": "postulates",
        "m": args.m if args.m is not None else DEFAULT_TRACE_LENGTH,
        "seed": args.seed,
        "sweep": args.sweep,
        "cells": cells,
    }

    lines = []
    if args.sweep:
        lines.append(
            f"sweeps: {args.sweep} instances per cell, seed {args.seed}"
        )
        for cell in cells:
            status = "clean" if not cell["violations"] else "VIOLATIONS FOUND"
            lines.append(
                f"  {cell['measure']:<6} {cell['postulate']}: expected"
                f" {cell['expected']:<6} holds={cell['holds']}"
                f" n/a={cell['not_applicable']}"
                f" violations={len(cell['violations'])} [{status}]"
            )
    else:
        lines.append("expected compliance matrix (curated certificates for fails):")
        header = "  measure " + "".join(f"{p.value:>8}" for p in _POSTULATE_ORDER)
        lines.append(header)
        by_measure: dict[str, dict[str, dict]] = {}
        for cell in cells:
            by_measure.setdefault(cell["measure"], {})[cell["postulate"]] = cell
        for mid in measures:
            row = f"  {mid:<8}"
            for postulate in _POSTULATE_ORDER:
                cell = by_measure.get(mid, {}).get(postulate.value)
                row += f"{(cell['expected'] if cell else '-'):>8}"
            lines.append(row)
        for cell in cells:
            if cell["expected"] == "fails":
                cert = cell.get("certificate")
                if cert is None and "note" in cell:
                    lines.append(
                        f"  ({cell['measure']}, {cell['postulate']}):"
                        f" {cell['note']}"
                    )
                elif cert is not None:
                    lines.append(
                        f"  ({cell['measure']}, {cell['postulate']}):"
                        f" certificate outcome {cert['outcome']}"
                    )
    _emit(payload, lines, args.format)
    return 0


def _cmd_oracle_check(args) -> int:
    results = []
    all_agree = True
    for source in args.inputs:
        kb = load_kb(
            source,
            m=args.m,
            g_mode=_resolve_g_mode(args.g_semantics, GMode.STRICT),
            allow_short_trace=args.allow_short_trace,
        )
        solver_run = run_measures(kb, budget=args.budget)
        oracle_run = run_measures(kb, use_oracle=True, oracle_cell_cap=args.oracle_cap)
        comparison = {
            mid: {
                "solver": _json_value(solver_run.values[mid]),
                "oracle": _json_value(oracle_run.values[mid]),
            }
            for mid in MEASURE_IDS
        }
        agree = all(
            solver_run.values[mid] == oracle_run.values[mid] for mid in MEASURE_IDS
        )
        all_agree &= agree
        results.append(
            {"input": source, "m": kb.trace_length_m, "agree": agree, "measures": comparison}
        )

    payload = {"command": "oracle-check", "results": results, "all_agree": all_agree}
    lines = []
    for entry in results:
        status = "agree" if entry["agree"] else "MISMATCH"
        lines.append(f"{entry['input']} (m={entry['m']}): {status}")
        for mid in MEASURE_IDS:
            pair = entry["measures"][mid]
            marker = "" if pair["solver"] == pair["oracle"] else "   <-- differs"
            lines.append(
                f"  {mid:<6} solver={pair['solver']} oracle={pair['oracle']}{marker}"
            )
    lines.append("all inputs agree" if all_agree else "DISAGREEMENT FOUND")
    _emit(payload, lines, args.format)
    return 0 if all_agree else 1


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ltlim",
        description=(
            "Inconsistency measurement for linear temporal logic over"
            " fixed-length traces"
        ),
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p: argparse.ArgumentParser, *, seed: bool = False) -> None:
        p.add_argument(
            "--m",
            "--trace-length",
            dest="m",
            type=int,
            default=None,
            help="number of future states in the trace (t_0..t_m)",
        )
        p.add_argument(
            "--g-semantics",
            choices=("strict", "reflexive"),
            default=None,
            help="reading of the always operator (default: strict;"
            " declare defaults to reflexive)",
        )
        p.add_argument("--format", choices=("text", "json"), default="text")
        p.add_argument("--budget", type=int, default=DEFAULT_NODE_BUDGET)
        p.add_argument("--allow-short-trace", action="store_true")
        p.add_argument(
            "--oracle",
            action="store_true",
            help="recompute by exhaustive enumeration (small bases only)",
        )
        p.add_argument("--oracle-cap", type=int, default=DEFAULT_CELL_CAP)
        if seed:
            p.add_argument("--seed", type=int, default=0)

    p_measure = sub.add_parser("measure", help="evaluate measures on a .ltlkb base")
    p_measure.add_argument("input")
    p_measure.add_argument("--measure", choices=_MEASURE_CHOICES, default="all")
    common(p_measure)
    p_measure.set_defaults(func=_cmd_measure)

    p_declare = sub.add_parser(
        "declare", help="translate a .decl constraint model and measure it"
    )
    p_declare.add_argument("input")
    p_declare.add_argument("--measure", choices=_MEASURE_CHOICES, default="all")
    p_declare.add_argument(
        "--emit", default=None, help="path for the translated .ltlkb (default: input stem)"
    )
    p_declare.add_argument(
        "--no-ground-init",
        action="store_true",
        help="skip pinning Init activities two-valued at t_0",
    )
    common(p_declare)
    p_declare.set_defaults(func=_cmd_declare)

    p_explain = sub.add_parser(
        "explain", help="show where a conflict can occur and in how many ways"
    )
    p_explain.add_argument("input")
    p_explain.add_argument("--max-bases", type=int, default=10)
    common(p_explain)
    p_explain.set_defaults(func=_cmd_explain)

    p_post = sub.add_parser(
        "postulates", help="compliance matrix, certificates, and sweeps"
    )
    p_post.add_argument("--measure", choices=_MEASURE_CHOICES, default="all")
    p_post.add_argument(
        "--postulate",
        choices=tuple(p.value for p in _POSTULATE_ORDER) + ("all",),
        default="all",
    )
    p_post.add_argument(
        "--sweep",
        type=int,
        default=0,
        metavar="N",
        help="run N seeded random instances per cell instead of the matrix",
    )
    common(p_post, seed=True)
    p_post.set_defaults(func=_cmd_postulates)

    p_oracle = sub.add_parser(
        "oracle-check", help="compare search backend against exhaustive enumeration"
    )
    p_oracle.add_argument("inputs", nargs="+")
    common(p_oracle)
    p_oracle.set_defaults(func=_cmd_oracle_check)

    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except BudgetExceededError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except (
        KBParseError,
        FormulaParseError,
        DeclareParseError,
        FileNotFoundError,
        IsADirectoryError,
        ValueError,
    ) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    raise SystemExit(main())
