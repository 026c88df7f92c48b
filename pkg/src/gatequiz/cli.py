"""Command-line surface.

One subcommand per deliverable: word enumeration, machine solve-checks,
minimality search, the classical two-state floor, canonical-machine checks,
the two-state classifier, noise curves, slope fits, channel surveys, the
entanglement-breaking demo, external-channel evaluation, and the claims
table.  Randomized commands require an explicit --seed; every output file
gets a manifest sidecar recording how it was produced.

Exit codes: 0 success, 1 negative verdict, 2 input error.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import os
import sys
import time

import numpy as np

from . import __version__, automata, minsearch, problems, qmodel, robust
from .qcore import KrausChannel, validate_cptp

EXIT_OK = 0
EXIT_NEGATIVE = 1
EXIT_INPUT = 2


def _write_manifest(out_path: str, args, started: float, seed=None):
    manifest = {
        "command": " ".join(sys.argv[1:]) if sys.argv else "",
        "problem": getattr(args, "problem", None),
        "seed": seed if seed is not None else getattr(args, "seed", None),
        "threads": getattr(args, "threads", None),
        "version": __version__,
        "wall_time_s": round(time.monotonic() - started, 3),
    }
    with open(out_path + ".manifest.json", "w") as fh:
        json.dump(manifest, fh, indent=2)
        fh.write("\n")


def _emit(payload: str, args, started: float):
    out = getattr(args, "out", None)
    if out:
        with open(out, "w") as fh:
            fh.write(payload)
        _write_manifest(out, args, started)
    else:
        sys.stdout.write(payload)


def _problem(args) -> problems.PromiseProblem:
    return problems.make_problem(args.problem)


def cmd_words(args, started):
    p = _problem(args)
    max_len = args.max_len if args.max_len is not None else p.max_len
    if max_len is None:
        raise ValueError("unrestricted problem: give --max-len or a :len= suffix")
    lines = ["word,label"]
    for word, label in problems.enumerate_promised(p, max_len):
        lines.append(f"{word},{label}")
    _emit("\n".join(lines) + "\n", args, started)
    return EXIT_OK


def cmd_dfa_check(args, started):
    p = _problem(args)
    with open(args.dfa) as fh:
        dfa = automata.dfa_from_json(json.load(fh))
    verdict = automata.dfa_solves(dfa, p, budget=args.budget)
    payload = {
        "solves": verdict.solves,
        "exact": verdict.exact,
        "checked": verdict.checked,
        "counterexample": verdict.counterexample,
    }
    _emit(json.dumps(payload, indent=2) + "\n", args, started)
    return EXIT_OK if verdict.solves else EXIT_NEGATIVE


def cmd_search(args, started):
    p = _problem(args)
    if p.is_unary:
        report = minsearch.unary_min_search(
            p, minsearch.SearchBudget(args.max_states, time_limit=args.time_limit)
        )
    else:
        budget = args.budget if args.budget is not None else p.max_len
        if budget is None:
            raise ValueError("multi-symbol search needs --budget or a restricted problem")
        sample = problems.enumerate_promised(p, budget)
        report = minsearch.min_dfa_identify(
            sample, args.max_states, alphabet=p.alphabet, time_limit=args.time_limit,
            collect_failure_witnesses=not args.no_failure_witnesses,
        )
    payload = {
        "problem": p.descriptor(),
        "min_states": report.min_states,
        "equivalence_classes": report.equivalence_classes,
        "lower_bound": report.lower_bound,
        "exact": report.exact,
        "failure_witnesses": report.failure_witnesses,
        "wall_time_s": round(report.wall_time_s, 3),
        "witnesses": [automata.dfa_to_json(w) for w in report.witnesses],
    }
    _emit(json.dumps(payload, indent=2) + "\n", args, started)
    return EXIT_OK if report.satisfiable else EXIT_NEGATIVE


def cmd_pfa_opt(args, started):
    opt = automata.optimal_two_state_pfa(args.imax)
    payload = {
        "i_max": args.imax,
        "x": opt.x,
        "y": opt.y,
        "accept_vector": list(opt.accept_vector),
        "p_fail": opt.p_fail,
        "closed_form": opt.closed_form,
        "soundness_alpha": 1.0 / (2.0 * opt.p_fail),
        "notes": list(opt.notes),
    }
    _emit(json.dumps(payload, indent=2) + "\n", args, started)
    return EXIT_OK


def cmd_qfa_check(args, started):
    p = _problem(args)
    q = qmodel.make_canonical_qfa(p)
    verdict = qmodel.solves_with_error(q, p, eps=args.eps, budget=args.budget)
    payload = {
        "problem": p.descriptor(),
        "eps": args.eps,
        "solves": verdict.solves,
        "checked": verdict.checked,
        "counterexample": verdict.counterexample,
    }
    _emit(json.dumps(payload, indent=2) + "\n", args, started)
    return EXIT_OK if verdict.solves else EXIT_NEGATIVE


NAMED_UNITARIES = {
    "sqrt-z": lambda: qmodel.root_z(1),
    "sqrt-z-dag": lambda: qmodel.root_z(1).conj().T,
    "z": lambda: np.diag([1.0, -1.0]).astype(complex),
    "fourth-root-z": lambda: qmodel.root_z(2),
    "fourth-root-z-dag": lambda: qmodel.root_z(2).conj().T,
    "z-fourth-root-z": lambda: np.diag([1.0, -1.0]) @ qmodel.root_z(2),
    "fourth-root-z-dag-z": lambda: qmodel.root_z(2).conj().T @ np.diag([1.0, -1.0]),
}


def _load_unitary(spec: str) -> np.ndarray:
    if spec in NAMED_UNITARIES:
        return NAMED_UNITARIES[spec]()
    with open(spec) as fh:
        return qmodel.matrix_from_json(json.load(fh))


def cmd_classify_eo(args, started):
    u = _load_unitary(args.unitary)
    from .qcore import KET_MINUS, KET_PLUS

    q = qmodel.Qfa(
        (KET_PLUS, KET_MINUS), ("s",), {"s": u}, KET_PLUS, {"y": (0,), "n": (1,)}
    )
    result = qmodel.classify_eo_qfa(q, args.k, budget=args.budget)
    payload = {
        "valid": result.valid,
        "j": result.j,
        "conjugated": result.conjugated,
        "reason": result.reason,
        "phase0": result.phase0,
        "basis_change": None
        if result.basis_change is None
        else qmodel.matrix_to_json(result.basis_change),
    }
    _emit(json.dumps(payload, indent=2) + "\n", args, started)
    return EXIT_OK if result.valid else EXIT_NEGATIVE


def cmd_noise_curve(args, started):
    kinds = robust.NOISE_KINDS if args.families == ["all"] else args.families
    for kind in kinds:
        if kind not in robust.NOISE_KINDS:
            raise ValueError(f"unknown noise family {kind!r}")
    t_grid = np.linspace(0.0, 1.0, args.points)
    rows = robust.noise_curve(args.imax, args.seed, kinds=tuple(kinds), t_grid=t_grid)
    robust.write_noise_curve_csv(rows, args.out)
    _write_manifest(args.out, args, started)
    return EXIT_OK


def cmd_slope(args, started):
    est = robust.slope_estimate(args.family, args.imax, args.seed)
    payload = {
        "family": est.family,
        "i_max": est.i_max,
        "alpha_hat": est.alpha_hat,
        "t_grid": list(est.t_grid),
        "points": [list(pt) for pt in est.points],
    }
    _emit(json.dumps(payload, indent=2) + "\n", args, started)
    return EXIT_OK


def cmd_survey(args, started):
    p = _problem(args)
    points = robust.survey(p, args.n, args.seed, threads=args.threads)
    robust.write_survey_csv(points, args.out)
    _write_manifest(args.out, args, started)
    return EXIT_OK


def cmd_eb_demo(args, started):
    result = robust.eb_demo()
    payload = dataclasses.asdict(result)
    _emit(json.dumps(payload, indent=2) + "\n", args, started)
    ok = result.beats_classical and result.entanglement_breaking and (
        result.trace_defect <= 1e-10 and result.cp_defect <= 1e-10
    )
    return EXIT_OK if ok else EXIT_NEGATIVE


def ingest_channels(path: str):
    """Load channels from JSON and validate each one.

    Accepted layouts: {"channels": {id: [matrix, ...]}} or a bare
    {id: [matrix, ...]} map; matrices are row-major with [re, im] entries.
    Returns (accepted, skipped) where accepted is a list of
    (id, KrausChannel) and skipped maps id -> defect report.
    """
    with open(path) as fh:
        obj = json.load(fh)
    table = obj.get("channels", obj) if isinstance(obj, dict) else None
    if not isinstance(table, dict):
        raise ValueError("channel file must be a JSON object of id -> Kraus list")
    accepted, skipped = [], {}
    for ident, ops in table.items():
        try:
            ch = KrausChannel(tuple(qmodel.matrix_from_json(K) for K in ops))
        except (ValueError, TypeError, IndexError) as exc:
            skipped[ident] = {"error": str(exc)}
            continue
        if ch.dim_in != 2 or ch.dim_out != 2:
            skipped[ident] = {"error": f"need a qubit channel, got {ch.dim_out}x{ch.dim_in}"}
            continue
        report = validate_cptp(ch)
        if not report.valid:
            skipped[ident] = {
                "trace_defect": report.trace_defect,
                "cp_defect": report.cp_defect,
            }
            continue
        accepted.append((ident, ch))
    return accepted, skipped


def evaluate_external(channels, p: problems.PromiseProblem, seed: int):
    """(ids, SurveyPoints) for user-supplied channels on a restricted problem."""
    target = robust.target_model()
    ids, points = [], []
    for idx, (ident, ch) in enumerate(channels):
        model = robust.channel_model(ch, target)
        pf = automata.failure_probability(model, p)
        rng = np.random.default_rng(robust.child_seed(seed, idx))
        fid, _ = robust.infidelity(model, target, rng=rng)
        ids.append(ident)
        points.append(robust.SurveyPoint(idx, None, pf, fid, ch.rank))
    return ids, points


def cmd_ingest_eval(args, started):
    accepted, skipped = ingest_channels(args.channels)
    for ident, info in skipped.items():
        sys.stderr.write(f"skipped channel {ident!r}: {info}\n")
    p = _problem(args)
    ids, points = evaluate_external(accepted, p, args.seed)
    robust.write_survey_csv(points, args.out, extra_id=ids)
    _write_manifest(args.out, args, started)
    return EXIT_OK


def cmd_verify_claims(args, started):
    rows = minsearch.verify_claims(include_sample_engines=args.sample_engines)
    payload = json.dumps(rows, indent=2) + "\n"
    _emit(payload, args, started)
    bad = [r for r in rows if r["match"] is False]
    return EXIT_NEGATIVE if bad else EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="gatequiz",
        description="Promise-problem tests of quantum gates",
    )
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, fn, **kwargs):
        sp = sub.add_parser(name, **kwargs)
        sp.set_defaults(fn=fn)
        return sp

    sp = add("words", cmd_words, help="enumerate promised words")
    sp.add_argument("--problem", required=True)
    sp.add_argument("--max-len", type=int, default=None)
    sp.add_argument("--out")

    sp = add("dfa-check", cmd_dfa_check, help="check a machine against a problem")
    sp.add_argument("--problem", required=True)
    sp.add_argument("--dfa", required=True, help="machine JSON file")
    sp.add_argument("--budget", type=int, default=None)
    sp.add_argument("--out")

    sp = add("search", cmd_search, help="exact minimality search")
    sp.add_argument("--problem", required=True)
    sp.add_argument("--max-states", type=int, required=True)
    sp.add_argument("--budget", type=int, default=None, help="word-length budget")
    sp.add_argument("--time-limit", type=float, default=None)
    sp.add_argument("--no-failure-witnesses", action="store_true")
    sp.add_argument("--out")

    sp = add("pfa-opt", cmd_pfa_opt, help="optimal two-state probabilistic machine")
    sp.add_argument("--imax", type=int, required=True)
    sp.add_argument("--out")

    sp = add("qfa-check", cmd_qfa_check, help="check the canonical quantum machine")
    sp.add_argument("--problem", required=True)
    sp.add_argument("--eps", type=float, default=0.0)
    sp.add_argument("--budget", type=int, default=None)
    sp.add_argument("--out")

    sp = add("classify-eo", cmd_classify_eo, help="classify a 2-state machine")
    sp.add_argument("--unitary", required=True,
                    help=f"matrix JSON file or one of {sorted(NAMED_UNITARIES)}")
    sp.add_argument("--k", type=int, required=True)
    sp.add_argument("--budget", type=int, default=None)
    sp.add_argument("--out")

    sp = add("noise-curve", cmd_noise_curve, help="(p_fail, infid) noise curves")
    sp.add_argument("--imax", type=int, required=True)
    sp.add_argument("--seed", type=int, required=True)
    sp.add_argument("--families", nargs="+", default=["all"])
    sp.add_argument("--points", type=int, default=21)
    sp.add_argument("--out", required=True)

    sp = add("slope", cmd_slope, help="low-noise slope estimate")
    sp.add_argument("--family", required=True, choices=robust.NOISE_KINDS)
    sp.add_argument("--imax", type=int, required=True)
    sp.add_argument("--seed", type=int, required=True)
    sp.add_argument("--out")

    sp = add("survey", cmd_survey, help="random-channel survey")
    sp.add_argument("--problem", required=True)
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--seed", type=int, required=True)
    sp.add_argument("--threads", type=int, default=os.cpu_count())
    sp.add_argument("--out", required=True)

    sp = add("eb-demo", cmd_eb_demo, help="entanglement-breaking channel demo")
    sp.add_argument("--out")

    sp = add("ingest-eval", cmd_ingest_eval, help="evaluate external channels")
    sp.add_argument("--channels", required=True, help="channel JSON file")
    sp.add_argument("--problem", required=True)
    sp.add_argument("--seed", type=int, required=True)
    sp.add_argument("--out", required=True)

    sp = add("verify-claims", cmd_verify_claims, help="re-check minimal-size claims")
    sp.add_argument("--sample-engines", action="store_true",
                    help="include the slower sample-based searches")
    sp.add_argument("--out")

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    started = time.monotonic()
    try:
        return args.fn(args, started)
    except (ValueError, OSError, json.JSONDecodeError, KeyError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
