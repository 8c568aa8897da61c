"""Batch command-line interface.

Subcommands: validate, parse, query, select, force. All reports are
deterministic byte-for-byte for fixed inputs. Exit codes: 0 success
(including "no interpretations"), 1 validation failure, 2 I/O or parse
errors.
"""

from __future__ import annotations

import argparse
import sys
from typing import List, Optional, Sequence

from .activity import Plan, ProcessFlow, compile_constraints
from .errors import ParseError, SomaKitError, ValidationFailed, VersionMismatch
from .formats import load_episode, load_library
from .grounding import (
    ForceExpression,
    StrongerEntity,
    Tendency,
    force_outcome,
    select_objects,
)
from .parsing import parse as parse_episode


def _build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="soma-kit",
        description="Knowledge-based activity interpretation toolkit.",
    )
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", help="validate a plan-library document")
    p.add_argument("library")

    p = sub.add_parser("parse", help="parse an episode against a plan library")
    p.add_argument("library")
    p.add_argument("episode")
    p.add_argument("--eps", type=float, default=0.01)
    p.add_argument("--top", type=int, default=None)
    p.add_argument("--format", choices=("text", "machine"), default="text")

    p = sub.add_parser("query", help="propagated relation between two plan phases")
    p.add_argument("library")
    p.add_argument("plan")
    p.add_argument("phase_a")
    p.add_argument("phase_b")

    p = sub.add_parser("select", help="scene objects admissible for a task's roles")
    p.add_argument("library")
    p.add_argument("episode")
    p.add_argument("task")
    p.add_argument("--eps", type=float, default=0.01)
    p.add_argument("--format", choices=("text", "machine"), default="text")

    p = sub.add_parser("force", help="force-dynamics outcome classification")
    p.add_argument("--tendency", choices=("motion", "rest"), required=True)
    p.add_argument("--stronger", choices=("agonist", "antagonist"), required=True)
    return ap


def _cmd_validate(args) -> int:
    try:
        load_library(args.library)
    except ValidationFailed as exc:
        for issue in exc.issues:
            print(f"issue: {issue}")
        print(f"invalid: {len(exc.issues)} issue(s)")
        return 1
    print("ok: library is valid")
    return 0


def _cmd_parse(args) -> int:
    store, library = load_library(args.library)
    episode = load_episode(args.episode, eps=args.eps)
    interps = parse_episode(episode, library, store)
    if args.top is not None:
        interps = interps[: args.top]
    machine = args.format == "machine"
    if not machine:
        print(f"interpretations: {len(interps)}")
    else:
        print(f"count={len(interps)}")
    for idx, i in enumerate(interps):
        phases = " ".join(f"{p}->{t}" for p, t in i.phase_grounding)
        roles = " ".join(f"{slot}.{role}->{e}" for (slot, role), e in i.role_grounding)
        if machine:
            print(f"interpretation={idx} plan={i.plan} coverage={i.coverage:.4f}")
            for p, t in i.phase_grounding:
                print(f"phase={p} token={t}")
            for (slot, role), e in i.role_grounding:
                print(f"slot={slot} role={role} entity={e}")
        else:
            print(f"[{idx}] plan={i.plan} coverage={i.coverage:.4f}")
            print(f"    phases: {phases}")
            if roles:
                print(f"    roles: {roles}")
    return 0


def _cmd_query(args) -> int:
    store, library = load_library(args.library)
    target = None
    for d in library:
        if d.id == args.plan and isinstance(d, (Plan, ProcessFlow)):
            target = d
            break
    if target is None:
        print(f"error: no plan or process flow named {args.plan!r}", file=sys.stderr)
        return 2

    def resolve(name: str) -> Optional[str]:
        refs = [target.defines_task] if isinstance(target, Plan) else []
        if isinstance(target, ProcessFlow) and target.defines_process:
            refs = [target.defines_process]
        refs += list(target.phases)
        for ref in refs:
            if ref.id == name:
                return ref.id
            if store.has_concept(ref.concept) and store.concept(ref.concept).name == name:
                return ref.id
        return None

    a, b = resolve(args.phase_a), resolve(args.phase_b)
    if a is None or b is None:
        missing = args.phase_a if a is None else args.phase_b
        print(f"error: unknown phase {missing!r}", file=sys.stderr)
        return 2
    net = compile_constraints(target)
    print(net.query_relation(a, b).codes())
    return 0


def _cmd_select(args) -> int:
    store, library = load_library(args.library)
    episode = load_episode(args.episode, eps=args.eps)
    task_ref = None
    for d in library:
        if isinstance(d, Plan):
            candidates = [d.defines_task] + list(d.phases)
        elif isinstance(d, ProcessFlow):
            candidates = ([d.defines_process] if d.defines_process else []) + list(d.phases)
        else:
            continue
        for ref in candidates:
            if ref.id == args.task or (
                store.has_concept(ref.concept) and store.concept(ref.concept).name == args.task
            ):
                task_ref = ref
                break
        if task_ref:
            break
    if task_ref is None:
        print(f"error: unknown task {args.task!r}", file=sys.stderr)
        return 2
    selection = select_objects(task_ref, episode.scene, store)
    for role in sorted(selection):
        members = " ".join(sorted(selection[role]))
        if args.format == "machine":
            print(f"role={role} candidates={members}")
        else:
            print(f"{role}: {{{members}}}")
    return 0


def _cmd_force(args) -> int:
    expr = ForceExpression(
        agonist="agonist",
        antagonist="antagonist",
        agonist_tendency=Tendency(args.tendency),
        stronger=StrongerEntity(args.stronger),
    )
    print(force_outcome(expr).value)
    return 0


_HANDLERS = {
    "validate": _cmd_validate,
    "parse": _cmd_parse,
    "query": _cmd_query,
    "select": _cmd_select,
    "force": _cmd_force,
}


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        return _HANDLERS[args.command](args)
    except ValidationFailed as exc:
        for issue in exc.issues:
            print(f"issue: {issue}", file=sys.stderr)
        return 1
    except (OSError, ParseError, VersionMismatch) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except SomaKitError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    raise SystemExit(main())
