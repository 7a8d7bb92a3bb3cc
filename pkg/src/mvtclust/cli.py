"""Command-line front end.

Three subcommands: ``cluster`` runs the pipeline a manifest describes,
``synth`` writes a synthetic dataset with its manifest, and ``selftest``
executes the built-in oracle suites.  Config precedence for ``cluster``
is flag over manifest field over built-in default.
"""

import argparse
import sys

from . import __version__
from .io import DatasetFormatError, run_cluster, run_synth
from .selftest import run_selftest


def _build_parser():
    parser = argparse.ArgumentParser(
        prog="mvtclust",
        description="Multi-view clustering through a sparse and low-rank "
        "representation tensor.",
    )
    parser.add_argument(
        "--version", action="version", version="mvtclust %s" % __version__
    )
    sub = parser.add_subparsers(dest="command", required=True)

    c = sub.add_parser("cluster", help="run the pipeline described by a manifest")
    c.add_argument("--manifest", required=True, help="path to the manifest JSON")
    c.add_argument("--alpha", type=float, help="tube sparsity weight")
    c.add_argument("--lambda", dest="lam", type=float, help="nuclear norm weight")
    c.add_argument("--beta", type=float, help="inter-view consensus weight")
    c.add_argument("--clusters", type=int, help="number of clusters")
    c.add_argument("--seed", type=int, help="seed for the k-means stage")
    c.add_argument("--eps", type=float, help="solver stopping tolerance")
    c.add_argument("--max-outer", type=int, help="outer iteration cap")
    c.add_argument(
        "--normalize",
        choices=("on", "off"),
        help="unit-normalize samples per view before stacking",
    )
    c.add_argument("--out", help="report path (default: report.json beside the manifest)")

    s = sub.add_parser("synth", help="emit a synthetic dataset plus manifest")
    s.add_argument("--clusters", type=int, default=3)
    s.add_argument("--per-cluster", type=int, default=20)
    s.add_argument(
        "--views",
        default="30,25",
        help="comma-separated feature counts, one per view",
    )
    s.add_argument("--subspace-dim", type=int, default=3)
    s.add_argument("--noise", type=float, default=0.01)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--out", required=True, help="output directory")

    sub.add_parser("selftest", help="run the built-in oracle suites")
    return parser


def _cmd_cluster(args):
    overrides = {
        "alpha": args.alpha,
        "lam": args.lam,
        "beta": args.beta,
        "clusters": args.clusters,
        "seed": args.seed,
        "eps": args.eps,
        "max_outer": args.max_outer,
        "normalize": None if args.normalize is None else args.normalize == "on",
    }
    report = run_cluster(args.manifest, overrides=overrides, out_path=args.out)
    solver = report["solver"]
    print(
        "status %s after %d iterations" % (report["status"], solver["iterations"])
    )
    if "metrics" in report:
        m = report["metrics"]
        print(
            "acc %.4f +- %.4f  nmi %.4f +- %.4f  ari %.4f +- %.4f"
            % (
                m["acc"]["mean"],
                m["acc"]["std"],
                m["nmi"]["mean"],
                m["nmi"]["std"],
                m["ari"]["mean"],
                m["ari"]["std"],
            )
        )
    print("labels written to %s" % report["labels_file"])
    return 0 if report["status"] == "ok" else 3


def _cmd_synth(args):
    try:
        view_dims = tuple(int(d) for d in args.views.split(","))
    except ValueError:
        print("error: --views must be comma-separated integers", file=sys.stderr)
        return 2
    manifest = run_synth(
        clusters=args.clusters,
        per_cluster=args.per_cluster,
        view_dims=view_dims,
        subspace_dim=args.subspace_dim,
        noise=args.noise,
        seed=args.seed,
        out_dir=args.out,
    )
    print(str(manifest))
    return 0


def _cmd_selftest(_args):
    summary = run_selftest()
    for suite in summary["suites"]:
        state = "ok" if suite["ok"] else "FAIL"
        print(
            "%-4s %-10s %6.2fs  %s"
            % (state, suite["name"], suite["seconds"], suite["detail"])
        )
    return 0 if summary["ok"] else 1


def main(argv=None):
    args = _build_parser().parse_args(argv)
    handlers = {
        "cluster": _cmd_cluster,
        "synth": _cmd_synth,
        "selftest": _cmd_selftest,
    }
    try:
        return handlers[args.command](args)
    except DatasetFormatError as exc:
        print("error: %s" % exc, file=sys.stderr)
        return 2
    except ValueError as exc:
        print("error: %s" % exc, file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
