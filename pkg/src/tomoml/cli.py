"""Command-line entry point: ``tomoml {estimate,simulate,sweep,verify}``.

Exit codes: 0 converged (or all checks passed), 1 runtime failure or failed
checks, 2 iteration limit reached, 3 cycle detected, 4 bad input.
"""

import argparse
import json
import logging
import os
import sys

from . import io
from .benchmark import RULES, parse_t_values, run_sweep
from .errors import NumericalError, TomographyError
from .likelihood import ObjectiveContext, log_likelihood
from .quantum import DensityMatrix, maximally_mixed
from .simulate import RNG_ALGORITHM, counterexample_spec, w_state_spec
from .solver import Armijo, ExactReference, FixedT, PureRrhoR, SolverConfig, Termination, solve
from .verify import run_verification

EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_MAX_ITER = 2
EXIT_CYCLE = 3
EXIT_INPUT = 4

_TERMINATION_EXIT = {
    Termination.CONVERGED: EXIT_OK,
    Termination.MAX_ITERATIONS: EXIT_MAX_ITER,
    Termination.CYCLE_DETECTED: EXIT_CYCLE,
    Termination.BOUNDARY_ERROR: EXIT_FAILURE,
}

SEED_ENV = "TOMOML_SEED"


class InputError(Exception):
    pass


def _seed(args):
    if args.seed is not None:
        return args.seed
    env = os.environ.get(SEED_ENV)
    if env is None:
        return 0
    try:
        return int(env)
    except ValueError:
        raise InputError(f"{SEED_ENV}={env!r} is not an integer") from None


def _build_rule(args):
    if args.rule == "rrhor":
        return PureRrhoR()
    if args.rule == "fixed":
        if args.t is None:
            raise InputError("--rule fixed needs --t")
        return FixedT(args.t)
    if args.rule == "exact":
        return ExactReference(t_max=args.t_max)
    return Armijo(t_max=args.t_max, gamma=args.gamma, alpha0=args.alpha0, alpha1=args.alpha1)


def _rule_echo(rule):
    echo = {"rule": rule.name}
    echo.update(vars(rule))
    return echo


def cmd_estimate(args):
    povm = io.read_povm(args.povm)
    data = io.read_dataset(args.data)
    ctx = ObjectiveContext(povm, data)
    rule = _build_rule(args)
    if args.init == "mixed":
        rho0 = maximally_mixed(povm.dim)
    else:
        rho0 = DensityMatrix(io.read_matrix(args.init))
    config = SolverConfig(rule=rule, tol_iterate=args.tol, max_iterations=args.max_iter)
    try:
        rho, log = solve(ctx, rho0, config)
    except NumericalError as exc:
        print(f"error: {exc}", file=sys.stderr)
        if args.log and exc.log is not None:
            io.write_iteration_log(args.log, exc.log)
        return EXIT_FAILURE

    echo = _rule_echo(rule)
    echo.update(
        tol_iterate=config.tol_iterate,
        tol_stationarity=config.tol_stationarity,
        max_iterations=config.max_iterations,
        init=args.init,
    )
    result = io.result_to_dict(rho, log_likelihood(ctx, rho), log, echo)
    if args.out:
        io._write_json(args.out, result)
    else:
        json.dump(result, sys.stdout, indent=1)
        sys.stdout.write("\n")
    if args.log:
        io.write_iteration_log(args.log, log)
    print(
        f"{log.termination_reason.value} after {log.iterations} iterations, "
        f"loglik={result['loglik']:.12g}",
        file=sys.stderr,
    )
    return _TERMINATION_EXIT[log.termination_reason]


def cmd_simulate(args):
    if args.experiment == "counterexample":
        spec = counterexample_spec()
        if args.shots is not None:
            raise InputError("the counterexample has fixed data; --shots does not apply")
    elif args.experiment == "w-state":
        spec = w_state_spec(args.qubits, shots=args.shots, seed=_seed(args))
    else:
        raise InputError(f"unknown experiment {args.experiment!r}")
    meta = {"experiment": spec.name}
    if args.shots is not None:
        meta.update(shots=args.shots, seed=_seed(args), rng=RNG_ALGORITHM)
    io.write_povm(args.out_povm, spec.povm)
    io.write_dataset(args.out_data, spec.dataset, metadata=meta)
    return EXIT_OK


def cmd_sweep(args):
    povm = io.read_povm(args.povm)
    data = io.read_dataset(args.data)
    ctx = ObjectiveContext(povm, data)
    try:
        t_values = parse_t_values(args.t_values)
    except ValueError as exc:
        raise InputError(f"--t-values: {exc}") from None
    rules = [r.strip() for r in args.rules.split(",") if r.strip()]
    bad = [r for r in rules if r not in RULES]
    if bad or not rules:
        raise InputError(f"--rules must be a comma list drawn from {RULES}")
    rows = run_sweep(ctx, t_values, rules, tol_iterate=args.tol, max_iterations=args.max_iter)
    if args.out:
        io.write_sweep(args.out, rows)
    else:
        io.write_sweep(sys.stdout, rows)
    return EXIT_OK


def cmd_verify(args):
    results = run_verification(trials=args.trials, seed=_seed(args), dim_max=args.dim_max)
    for r in results:
        print(r.line())
    failed = [r.name for r in results if not r.passed]
    print(f"{len(results) - len(failed)}/{len(results)} checks passed")
    return EXIT_FAILURE if failed else EXIT_OK


def build_parser():
    parser = argparse.ArgumentParser(
        prog="tomoml", description="Maximum-likelihood state tomography with diluted RrhoR iterations."
    )
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    est = sub.add_parser("estimate", help="estimate a density matrix from data files")
    est.add_argument("povm", help="POVM JSON file")
    est.add_argument("data", help="dataset JSON file")
    est.add_argument("--rule", choices=("armijo", "fixed", "rrhor", "exact"), default="armijo")
    est.add_argument("--t", type=float, help="step size for --rule fixed")
    est.add_argument("--t-max", type=float, default=1.0)
    est.add_argument("--gamma", type=float, default=1e-4)
    est.add_argument("--alpha0", type=float, default=0.5)
    est.add_argument("--alpha1", type=float, default=0.5)
    est.add_argument("--tol", type=float, default=1e-7, help="stop when consecutive iterates are closer than this")
    est.add_argument("--max-iter", type=int, default=100_000)
    est.add_argument("--init", default="mixed", help="'mixed' or a JSON matrix file")
    est.add_argument("--out", help="result JSON path (default: stdout)")
    est.add_argument("--log", help="per-iteration CSV path")
    est.set_defaults(func=cmd_estimate)

    sim = sub.add_parser("simulate", help="write POVM and dataset files for an experiment")
    sim.add_argument("--experiment", required=True)
    sim.add_argument("--qubits", type=int, default=3)
    sim.add_argument("--shots", type=int, help="sample this many outcomes (default: exact probabilities)")
    sim.add_argument("--seed", type=int, help=f"sampling seed (else ${SEED_ENV}, else 0)")
    sim.add_argument("--out-povm", required=True)
    sim.add_argument("--out-data", required=True)
    sim.set_defaults(func=cmd_simulate)

    sw = sub.add_parser("sweep", help="iteration counts as a function of t")
    sw.add_argument("--povm", required=True)
    sw.add_argument("--data", required=True)
    sw.add_argument("--t-values", default="logspace:-3:3:13", help="comma list or logspace:START:STOP:NUM")
    sw.add_argument("--rules", default="fixed,armijo")
    sw.add_argument("--tol", type=float, default=1e-7)
    sw.add_argument("--max-iter", type=int, default=100_000)
    sw.add_argument("--out", help="CSV path (default: stdout)")
    sw.set_defaults(func=cmd_sweep)

    ver = sub.add_parser("verify", help="randomized invariant checks")
    ver.add_argument("--trials", type=int, default=200)
    ver.add_argument("--seed", type=int)
    ver.add_argument("--dim-max", type=int, default=4)
    ver.set_defaults(func=cmd_verify)
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    try:
        return args.func(args)
    except (InputError, OSError) as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except (TomographyError, ValueError) as exc:
        # constraint violations on load (non-PSD effects, bad frequencies, ...)
        print(f"input error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
