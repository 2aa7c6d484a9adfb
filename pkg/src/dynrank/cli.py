"""Command line interface: rank profiles, check axioms, generate elections,
run the experiment pipeline, serve the moderation API."""

from __future__ import annotations

import argparse
import json
import os
import sys
from fractions import Fraction
from pathlib import Path

from dynrank import axioms, experiments
from dynrank.errors import DynrankError
from dynrank.generators import MODEL_IDS, GenConfig, generate
from dynrank.model import dump_profile, load_profile
from dynrank.rules import RULE_IDS, compute_debts, rank
from dynrank.session import load_trajectory


def _fraction(text: str) -> Fraction:
    return Fraction(text)


def _frac_str(value) -> str:
    f = Fraction(value)
    return f"{f.numerator}/{f.denominator}"


def _cmd_rank(args) -> int:
    profile = load_profile(args.profile)
    implemented = tuple(c for c in (args.implemented or "").split(",") if c)
    ranking = rank(args.rule, profile, implemented)
    for name in ranking:
        print(name)
    if args.debts:
        for voter, debt in enumerate(compute_debts(profile, implemented)):
            print(f"{voter} {_frac_str(debt)}")
    return 0


def _violation_doc(v) -> dict:
    return {
        "t": v.t,
        "group": sorted(v.group),
        "h": v.h,
        "alpha": _frac_str(v.alpha),
        "before": _frac_str(v.before),
        "after": _frac_str(v.after),
    }


def _cmd_check(args) -> int:
    traj = load_trajectory(args.trajectory)
    profile = traj.profile
    report = {"axiom": args.axiom, "rule": traj.rule}
    groups = axioms.enumerate_groups(profile, max_common=args.max_common)
    if args.axiom in ("mono", "weak-mono"):
        h = args.h if args.h is not None else (traj.h or 3)
        alpha = args.alpha if args.alpha is not None else Fraction(1, profile.n or 1)
        checker = (
            axioms.check_h_alpha_monotonicity
            if args.axiom == "mono"
            else axioms.check_weak_monotonicity
        )
        violations = checker(traj, h, alpha, groups)
        report.update(h=h, alpha=_frac_str(alpha), violations=[_violation_doc(v) for v in violations])
        report["holds"] = not violations
    elif args.axiom == "gr":
        violations = []
        for t in range(1, len(traj.steps) + 1):
            implemented = traj.implemented_before(t)
            ranking = traj.ranking_at(t)
            for group in groups:
                query = axioms.build_representation_query(profile, implemented, group)
                for lam in range(1, query.cohesiveness + 1):
                    query_l = axioms.build_representation_query(
                        profile, implemented, group, lam=lam
                    )
                    if args.kappa is not None:
                        kappa = args.kappa
                    elif traj.rule == "dyn-phragmen":
                        if query_l.debt_variance is None:
                            continue
                        kappa = axioms.kappa_dyn_phragmen(
                            query_l.alpha, lam, query_l.m_overlap,
                            query_l.debt_variance, len(group),
                        )
                    elif traj.rule == "dyn-seqpav":
                        kappa = axioms.kappa_dyn_seqpav(query_l.alpha, lam, query_l.avg_implemented)
                    else:
                        raise SystemExit(
                            "no representation formula for this rule; pass --kappa"
                        )
                    result = axioms.check_group_representation(profile, ranking, query_l, kappa)
                    if not result.holds:
                        violations.append(
                            {
                                "t": t,
                                "group": sorted(group),
                                "lambda": lam,
                                "kappa": kappa,
                                "satisfaction": _frac_str(result.satisfaction),
                            }
                        )
        report.update(violations=violations, holds=not violations)
    elif args.axiom in ("js", "pjs"):
        ell = 1 if args.axiom == "js" else (args.ell or 1)
        steps = len(traj.implemented)
        ts = [args.t] if args.t is not None else list(range(1, steps + 1))
        violations = []
        for t in ts:
            result = axioms.check_pjs(profile, traj, t, ell)
            if not result.holds:
                violations.append(
                    {
                        "t": t,
                        "ell": ell,
                        "group": sorted(result.witness_group),
                        "common": list(result.witness_common),
                    }
                )
        report.update(ell=ell, violations=violations, holds=not violations)
    else:  # pragma: no cover - argparse restricts choices
        raise SystemExit(f"unknown axiom {args.axiom!r}")
    json.dump(report, sys.stdout, indent=1)
    print()
    return 0 if report["holds"] else 1


def _cmd_gen(args) -> int:
    cfg = GenConfig(
        model=args.model,
        group_size=args.group_size,
        seed=args.seed,
        voters=args.voters,
        candidates=args.candidates,
    )
    profile = generate(cfg)
    dump_profile(profile, args.output)
    return 0


def _cmd_experiment(args) -> int:
    out_dir = Path(args.output)
    out_dir.mkdir(parents=True, exist_ok=True)
    rules = args.rules.split(",") if args.rules else list(RULE_IDS)
    results = []
    for rule in rules:
        if args.figure == "row1":
            results.append(
                experiments.run_satisfaction_vs_alpha(
                    args.model, rule, seed_base=args.seed_base, runs=args.runs
                )
            )
        else:
            results.append(
                experiments.run_satisfaction_over_time(
                    args.model, rule, seed_base=args.seed_base, runs=args.runs
                )
            )
    csv_path = out_dir / f"{args.figure}_{args.model}.csv"
    experiments.write_csv(results, csv_path)
    experiments.plot_csv(csv_path, out_dir / f"{args.figure}_{args.model}.png")
    print(csv_path)
    return 0


def _cmd_serve(args) -> int:
    import uvicorn

    from dynrank.service import create_app

    app = create_app(args.data_dir, default_rule=args.default_rule)
    uvicorn.run(app, host=args.host, port=args.port, log_level="info")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="dynrank")
    sub = parser.add_subparsers(dest="command", required=True)

    p_rank = sub.add_parser("rank", help="rank a profile under a rule")
    p_rank.add_argument("--rule", required=True, choices=RULE_IDS)
    p_rank.add_argument("--profile", required=True)
    p_rank.add_argument("--implemented", default="", help="comma-separated candidate names")
    p_rank.add_argument("--debts", action="store_true", help="also print the debt ledger")
    p_rank.set_defaults(fn=_cmd_rank)

    p_check = sub.add_parser("check", help="check an axiom on a trajectory")
    p_check.add_argument("--axiom", required=True, choices=("mono", "weak-mono", "gr", "js", "pjs"))
    p_check.add_argument("--trajectory", required=True)
    p_check.add_argument("--h", type=int, default=None)
    p_check.add_argument("--alpha", type=_fraction, default=None, help="rational, e.g. 1/4")
    p_check.add_argument("--ell", type=int, default=None)
    p_check.add_argument("--t", type=int, default=None)
    p_check.add_argument("--kappa", type=int, default=None)
    p_check.add_argument("--max-common", type=int, default=2, dest="max_common")
    p_check.set_defaults(fn=_cmd_check)

    p_gen = sub.add_parser("gen", help="generate a random profile")
    p_gen.add_argument("--model", required=True, choices=MODEL_IDS)
    p_gen.add_argument("--group-size", type=int, required=True, dest="group_size")
    p_gen.add_argument("--seed", type=int, required=True)
    p_gen.add_argument("--voters", type=int, default=60)
    p_gen.add_argument("--candidates", type=int, default=20)
    p_gen.add_argument("-o", "--output", required=True)
    p_gen.set_defaults(fn=_cmd_gen)

    p_exp = sub.add_parser("experiment", help="run an experiment family")
    p_exp.add_argument("--figure", required=True, choices=("row1", "row2"))
    p_exp.add_argument("--model", required=True, choices=MODEL_IDS)
    p_exp.add_argument("--rules", default=None, help="comma-separated rule ids (default: all)")
    p_exp.add_argument("--runs", type=int, default=100)
    p_exp.add_argument("--seed-base", type=int, default=20210120, dest="seed_base")
    p_exp.add_argument("-o", "--output", required=True)
    p_exp.set_defaults(fn=_cmd_experiment)

    p_serve = sub.add_parser("serve", help="run the moderation HTTP service")
    p_serve.add_argument("--host", default=os.environ.get("DYNRANK_HOST", "127.0.0.1"))
    p_serve.add_argument("--port", type=int, default=int(os.environ.get("DYNRANK_PORT", "8008")))
    p_serve.add_argument(
        "--data-dir",
        default=os.environ.get("DYNRANK_DATA_DIR", "./dynrank-data"),
        dest="data_dir",
    )
    p_serve.add_argument(
        "--default-rule",
        default=os.environ.get("DYNRANK_DEFAULT_RULE", "dyn-phragmen"),
        choices=RULE_IDS,
        dest="default_rule",
    )
    p_serve.set_defaults(fn=_cmd_serve)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.fn(args)
    except (DynrankError, OSError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
