"""Command-line driver: `run` a scenario or `check` the invariant suites."""
import argparse
import logging
import sys

from .runner import CASES, ScenarioConfig, run_scenario


def _int_list(text: str):
    return tuple(int(x) for x in text.split(",") if x.strip()) if text else ()


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="coupled-cats",
                                     description="Separability entropies of coupled perturbed cat maps")
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="run one scenario and write CSV outputs")
    run.add_argument("--case", choices=sorted(CASES), default="hh")
    run.add_argument("--dim", type=int, default=64, help="Hilbert space dimension N per map")
    run.add_argument("--k", type=float, default=0.25, help="kick strength K")
    run.add_argument("--kc", type=float, default=0.5, help="coupling strength K_c")
    for name in ("q1", "p1", "q2", "p2"):
        run.add_argument(f"--{name}", type=float, default=0.5)
    run.add_argument("--steps", type=int, default=20)
    run.add_argument("--cse-stride", type=int, default=1)
    run.add_argument("--cse-dense-until", type=int, default=0,
                     help="also evaluate the classical entropy at every step up to this time")
    run.add_argument("--classical-steps", type=int, default=None,
                     help="stop the Liouville evolution here (0 disables it)")
    run.add_argument("--subsample", type=int, default=2)
    run.add_argument("--nc", type=int, default=None, help="Liouville cells per axis (default N)")
    run.add_argument("--order", choices=("kick_last", "kick_first"), default="kick_last",
                     help="classical step ordering; kick_last matches the quantum propagator")
    run.add_argument("--snapshots", type=_int_list, default=())
    run.add_argument("--out", required=True)
    run.add_argument("--png", action="store_true")
    run.add_argument("--serial", action="store_true")

    check = sub.add_parser("check", help="self-test: invariant suites (fast) plus acceptance runs (full)")
    check.add_argument("--level", choices=("fast", "full"), default="fast")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO, format="%(asctime)s %(name)s %(message)s")
    if args.command == "check":
        from .checks import run_checks
        return 0 if run_checks(args.level) else 1
    try:
        config = ScenarioConfig(
            case=args.case, dim=args.dim, k=args.k, kc=args.kc,
            center1=(args.q1, args.p1), center2=(args.q2, args.p2),
            steps=args.steps, cse_stride=args.cse_stride, cse_dense_until=args.cse_dense_until,
            classical_steps=args.classical_steps, subsample=args.subsample, nc=args.nc,
            order=args.order, snapshot_times=args.snapshots, out_dir=args.out,
            png=args.png, serial=args.serial,
        )
    except ValueError as exc:
        print(f"coupled-cats: error: {exc}", file=sys.stderr)
        return 2
    run_scenario(config)
    return 0


if __name__ == "__main__":
    sys.exit(main())
