"""Command-line interface: ``cpkit detect | test | generate | fit``.

Every command writes one JSON document (sorted keys) containing a run
manifest, so fixed-seed runs are byte-identical.  Exit codes: 0 success,
2 usage error, 3 data error, 4 numerical error.
"""
import argparse
import hashlib
import json
import math
import os
import sys
import time
import warnings

import numpy as np

from . import __version__, _rng
from .errors import DataError, NumericalError
from .generators import (
    BlockParams,
    HybridParams,
    LayeredParams,
    generate_chung_lu,
    generate_dcsbm,
    generate_er,
    generate_gnm,
    generate_hybrid,
    generate_layered,
    generate_logistic,
    generate_sbm2,
    generate_sociability,
)
from .infer import dcsbm_greedy_fit, gibbs_sampler, newman_em
from .io import read_edge_list, write_edge_list
from .metrics import (
    CoreAssignment,
    CucuringuConfig,
    borgatti_rho,
    brusco_misfit,
    brusco_Z,
    cp_profile,
    cucuringu_objective,
    path_core_scores,
)
from .optimize import (
    BORGATTI,
    BRUSCO_MISFIT,
    AnnealSchedule,
    anneal_restarts,
    cucuringu,
    degree_gap_estimator,
    greedy_restarts,
    lip_solver,
    node_order_sweep,
)
from .significance import NullSpec, permutation_test, rossa_zscore, surprise_pvalue

EXIT_USAGE, EXIT_DATA, EXIT_NUMERICAL = 2, 3, 4

DETECT_METHODS = ("borgatti", "brusco", "lip", "degree-gap", "path-core", "rossa", "em", "gibbs")


class UsageError(Exception):
    pass


def _sha256(path):
    h = hashlib.sha256()
    with open(path, "rb") as fh:
        for chunk in iter(lambda: fh.read(1 << 20), b""):
            h.update(chunk)
    return h.hexdigest()


def _manifest(args, input_path=None):
    params = {k: v for k, v in sorted(vars(args).items()) if k not in ("func", "command", "record_timing")}
    m = {"subcommand": args.command, "version": __version__, "seed": args.seed, "params": params}
    if input_path is not None:
        m["input"] = {"path": os.fspath(input_path), "sha256": _sha256(input_path)}
    return m


def _clean(x):
    """Make ``x`` JSON-safe: numpy scalars to Python, non-finite floats to strings."""
    if isinstance(x, dict):
        return {str(k): _clean(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_clean(v) for v in x]
    if isinstance(x, np.ndarray):
        return _clean(x.tolist())
    if isinstance(x, (np.integer,)):
        return int(x)
    if isinstance(x, (float, np.floating)):
        x = float(x)
        if math.isnan(x):
            return "nan"
        if math.isinf(x):
            return "inf" if x > 0 else "-inf"
        return x
    return x


def _emit(doc, out):
    text = json.dumps(_clean(doc), sort_keys=True, indent=2) + "\n"
    if out:
        with open(out, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _floats(text, what):
    try:
        return [float(t) for t in text.replace(";", ",").split(",") if t.strip()]
    except ValueError:
        raise UsageError(f"{what} must be a comma-separated list of numbers") from None


def _vector(text, what):
    """Comma-separated numbers, or ``@path`` to a whitespace/comma-separated file."""
    if text is None:
        raise UsageError(f"{what} is required")
    if text.startswith("@"):
        with open(text[1:], encoding="utf-8") as fh:
            text = fh.read().replace("\n", ",").replace(" ", ",")
    return np.asarray(_floats(text, what))


def _scores(g, c):
    out = {"brusco_Z": brusco_Z(g, c), "brusco_misfit": brusco_misfit(g, c)}
    try:
        out["borgatti_rho"] = borgatti_rho(g, c)
    except NumericalError as exc:
        out["borgatti_rho"] = f"undefined: {exc}"
    return out


# ---------------------------------------------------------------------------
# detect
# ---------------------------------------------------------------------------


def run_detector(g, method, args, seed):
    """Labels and method-specific extras for one detection method."""
    extra = {}
    if method == "borgatti":
        c = greedy_restarts(g, BORGATTI, restarts=args.restarts, seed=seed)
    elif method == "brusco":
        sched = AnnealSchedule(t0=args.t0, cooling=args.cooling, t_stop=args.t_stop)
        c = anneal_restarts(g, BRUSCO_MISFIT, restarts=args.restarts, schedule=sched, seed=seed)
    elif method == "lip":
        c = lip_solver(g)
    elif method == "degree-gap":
        c = degree_gap_estimator(g, high_degree_core=not args.low_degree_core)
    elif method == "path-core":
        scores = path_core_scores(g)
        cfg = CucuringuConfig(args.beta, args.gamma)
        c = node_order_sweep(g, np.argsort(-scores, kind="stable"), cucuringu(cfg))
        extra["path_core"] = scores
        try:
            extra["cucuringu_objective"] = cucuringu_objective(g, c, cfg)
        except NumericalError as exc:
            extra["cucuringu_objective"] = f"undefined: {exc}"
    elif method == "rossa":
        prof = cp_profile(g)
        c = prof.core_assignment(args.alpha)
        extra["profile"] = {"order": prof.order, "alphas": prof.alphas, "centralization": prof.centralization}
    elif method == "em":
        res = newman_em(g, tol=args.tol, max_iter=args.max_iter, seed=seed)
        c = res.labels
        extra["em"] = {"params": vars(res.params), "iterations": res.iterations, "converged": res.converged}
    elif method == "gibbs":
        chain = gibbs_sampler(g, prior=args.prior, n_samples=args.samples, burn_in=args.burn_in, seed=seed)
        c = chain.core_assignment()
        extra["gibbs"] = {"core_frequency": chain.core_frequencies(), "acceptance_rate": chain.acceptance_rate}
    else:  # pragma: no cover - argparse restricts choices
        raise UsageError(f"unknown method {method}")
    return c, extra


def _names(g):
    return list(g.node_names) if g.node_names is not None else [str(i) for i in range(g.n)]


def cmd_detect(args):
    g = read_edge_list(args.input)
    seed = _rng.named_child(args.seed, "detect")
    c, extra = run_detector(g, args.method, args, seed)
    names = _names(g)
    doc = {
        "method": args.method,
        "nodes": names,
        "labels": c.labels.tolist(),
        "core": [names[i] for i in c.core],
        "K": c.K,
        "scores": _scores(g, c),
        "extra": extra,
        "manifest": _manifest(args, args.input),
    }
    if args.labels_csv:
        with open(args.labels_csv, "w", encoding="utf-8", newline="\n") as fh:
            fh.write("node,core\n")
            for name, lab in zip(names, c.labels):
                fh.write(f"{name},{int(lab)}\n")
    return doc


# ---------------------------------------------------------------------------
# test
# ---------------------------------------------------------------------------


def _read_labels(path, g):
    """Core labels from a ``node,core`` CSV (header optional) or a detect JSON."""
    index = {name: i for i, name in enumerate(_names(g))}
    lab = np.zeros(g.n, dtype=np.int8)
    with open(path, encoding="utf-8") as fh:
        text = fh.read()
    if text.lstrip().startswith("{"):
        doc = json.loads(text)
        pairs = zip(doc["nodes"], doc["labels"])
    else:
        rows = [r.split(",") for r in text.splitlines() if r.strip() and not r.startswith("#")]
        if rows and rows[0][0].strip() == "node":
            rows = rows[1:]
        pairs = ((r[0].strip(), int(r[1])) for r in rows)
    for name, v in pairs:
        if name not in index:
            raise DataError(f"label file names unknown node {name!r}")
        lab[index[name]] = int(v)
    return CoreAssignment(lab)


def cmd_test(args):
    if args.B is not None and args.B < 1:
        raise UsageError("--B must be >= 1")
    g = read_edge_list(args.input)
    doc = {"manifest": _manifest(args, args.input)}
    labels = _read_labels(args.labels, g) if args.labels else None
    if args.null == "surprise":
        if labels is None:
            if not args.detector:
                raise UsageError("--null surprise needs --labels or --detector")
            labels, _ = run_detector(g, args.detector, args, _rng.named_child(args.seed, "detect"))
        doc.update({"metric": "surprise", "p_value": surprise_pvalue(g, labels), "K": labels.K})
        return doc
    B = 199 if args.B is None else args.B
    if args.zscore:
        if args.null != "preserve-degrees":
            raise UsageError("--zscore uses the preserve-degrees null")
        res = rossa_zscore(g, B=B, n_swaps=args.swaps, seed=_rng.named_child(args.seed, "zscore"))
        d = res.to_dict()
        d["seed"] = args.seed
        if res.zero_variance:
            warnings.warn(res.explanation)
        doc.update({"metric": "centralization-zscore", "result": d})
        return doc
    null = NullSpec(args.null, B, args.seed, args.swaps)
    if labels is not None and args.metric == "centralization":
        raise UsageError("the centralization statistic takes no labels")
    res = permutation_test(g, args.metric, null, labels=labels, frozen=args.frozen)
    d = res.to_dict()
    d["null"] = null.to_dict(g)
    doc.update(d)
    return doc


# ---------------------------------------------------------------------------
# generate
# ---------------------------------------------------------------------------


def cmd_generate(args):
    seed = _rng.named_child(args.seed, "generate")
    model = args.model
    planted = None
    if model == "er":
        g = generate_er(_req(args.n, "--n"), _req(args.p, "--p"), seed)
        params = {"n": args.n, "p": args.p}
    elif model == "gnm":
        g = generate_gnm(_req(args.n, "--n"), _req(args.m, "--m"), seed)
        params = {"n": args.n, "m": args.m}
    elif model == "sbm2":
        bp = BlockParams(0.5, _req(args.p11, "--p11"), _req(args.p12, "--p12"), _req(args.p22, "--p22"))
        g, c = generate_sbm2(_req(args.n1, "--n1"), _req(args.n2, "--n2"), bp, seed, require_cp=args.require_cp)
        planted = c.labels
        params = {"n1": args.n1, "n2": args.n2, "p11": bp.p11, "p12": bp.p12, "p22": bp.p22}
    elif model == "layered":
        sizes = [int(x) for x in _vector(args.sizes, "--sizes")]
        rates = LayeredParams(tuple(_vector(args.rates, "--rates")))
        g, planted = generate_layered(sizes, rates, seed)
        params = {"sizes": sizes, "rates": list(rates.p)}
    elif model in ("chung-lu", "sociability", "logistic"):
        theta = _vector(args.theta, "--theta")
        fn = {"chung-lu": generate_chung_lu, "sociability": generate_sociability, "logistic": generate_logistic}[model]
        g = fn(theta, seed=seed)
        params = {"theta": theta}
    elif model == "dcsbm":
        theta = _vector(args.theta, "--theta")
        labels = _vector(args.labels, "--labels").astype(np.int64)
        flat = _vector(args.omega, "--omega")
        k = int(round(math.sqrt(flat.size)))
        if k * k != flat.size:
            raise UsageError("--omega must list a square matrix row by row")
        g = generate_dcsbm(theta, labels, flat.reshape(k, k), seed)
        planted = labels
        params = {"theta": theta, "labels": labels, "omega": flat.reshape(k, k)}
    elif model == "hybrid":
        hp = HybridParams(
            _vector(args.communities, "--communities").astype(np.int64),
            _vector(args.coreness, "--coreness"),
            _req(args.a, "--a"),
            _req(args.b, "--b"),
        )
        g = generate_hybrid(hp, seed)
        planted = hp.communities
        params = {"communities": hp.communities, "coreness": hp.coreness, "a": hp.a, "b": hp.b}
    else:  # pragma: no cover
        raise UsageError(f"unknown model {model}")
    write_edge_list(g, args.out)
    side = {
        "model": model,
        "params": params,
        "n": g.n,
        "m": g.m,
        "fingerprint": g.fingerprint(),
        "planted_labels": planted,
        "manifest": _manifest(args),
    }
    _emit(side, args.out + ".json")
    return {"edge_list": args.out, "sidecar": args.out + ".json", "n": g.n, "m": g.m, "fingerprint": g.fingerprint()}


def _req(v, flag):
    if v is None:
        raise UsageError(f"{flag} is required for this model")
    return v


# ---------------------------------------------------------------------------
# fit
# ---------------------------------------------------------------------------


def cmd_fit(args):
    g = read_edge_list(args.input)
    seed = _rng.named_child(args.seed, "fit")
    names = _names(g)
    doc = {"method": args.method, "nodes": names, "manifest": _manifest(args, args.input)}
    if args.method == "em":
        init = BlockParams(*_floats(args.init, "--init")) if args.init else BlockParams(0.5, 0.7, 0.5, 0.3)
        res = newman_em(g, init=init, tol=args.tol, max_iter=args.max_iter, seed=seed)
        doc.update(
            {
                "params": vars(res.params),
                "responsibilities": res.responsibilities,
                "loglik_trace": res.loglik,
                "iterations": res.iterations,
                "converged": res.converged,
                "labels": res.labels.labels.tolist(),
            }
        )
    elif args.method == "gibbs":
        chain = gibbs_sampler(
            g, prior=args.prior, layers=args.layers, n_samples=args.samples, burn_in=args.burn_in, seed=seed
        )
        doc.update(
            {
                "prior": chain.prior.describe(),
                "n_samples": chain.n_samples,
                "burn_in": chain.burn_in,
                "acceptance_rate": chain.acceptance_rate,
                "fallback_draws": chain.fallbacks,
                "rate_mean": chain.rates.mean(axis=0),
                "rate_sd": chain.rates.std(axis=0, ddof=1) if chain.n_samples > 1 else None,
                "gamma_mean": chain.gamma.mean(axis=0),
                "layer_frequencies": chain.layer_frequencies(),
                "ordered_violations": int(np.count_nonzero(np.any(np.diff(chain.rates, axis=1) > 0, axis=1)))
                if chain.prior.ordered
                else None,
            }
        )
        if args.chain_out:
            with open(args.chain_out, "w", encoding="utf-8", newline="\n") as fh:
                chain.to_jsonl(fh)
            doc["chain_out"] = args.chain_out
    elif args.method == "dcsbm":
        c, model = dcsbm_greedy_fit(g, seed=seed, restarts=args.restarts)
        from .infer import dcsbm_loglik

        doc.update(
            {
                "labels": c.labels.tolist(),
                "core": [names[i] for i in c.core],
                "K": c.K,
                "pc": model.pc,
                "pp": model.pp,
                "theta": model.theta,
                "loglik": dcsbm_loglik(g, model),
            }
        )
    return doc


# ---------------------------------------------------------------------------
# parser
# ---------------------------------------------------------------------------


def _positive_int(text):
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"{text!r} is not an integer") from None
    if v < 1:
        raise argparse.ArgumentTypeError(f"{text!r} must be >= 1")
    return v


def _detector_flags(p):
    p.add_argument("--restarts", type=_positive_int, default=10, help="greedy / annealing restarts")
    p.add_argument("--t0", type=float, default=1.0, help="annealing start temperature")
    p.add_argument("--cooling", type=float, default=0.95, help="annealing cooling factor")
    p.add_argument("--t-stop", type=float, default=1e-3, help="annealing stop temperature")
    p.add_argument("--low-degree-core", action="store_true", help="degree-gap: low-degree side is the core")
    p.add_argument("--beta", type=float, default=0.5, help="path-core: target core fraction")
    p.add_argument("--gamma", type=float, default=0.0, help="path-core: core-size penalty weight")
    p.add_argument("--alpha", type=float, default=0.5, help="rossa: persistence threshold of the periphery")
    p.add_argument("--tol", type=float, default=1e-8, help="em: convergence tolerance")
    p.add_argument("--max-iter", type=_positive_int, default=500, help="em: iteration cap")
    p.add_argument("--prior", choices=("flat", "ordered", "layered"), default="ordered", help="gibbs prior")
    p.add_argument("--samples", type=_positive_int, default=1000, help="gibbs: retained samples")
    p.add_argument("--burn-in", type=int, default=200, help="gibbs: discarded iterations")


def build_parser():
    parser = argparse.ArgumentParser(prog="cpkit", description="Core-periphery detection, testing and simulation.")
    parser.add_argument("--version", action="version", version=f"cpkit {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, with_input=True):
        if with_input:
            p.add_argument("input", help="edge-list file")
        p.add_argument("--seed", type=int, default=0, help="master seed (default 0)")
        p.add_argument("--record-timing", action="store_true", help="add wall-clock seconds to the manifest")
        return p

    p = common(sub.add_parser("detect", help="find a core-periphery split"))
    p.add_argument("--method", choices=DETECT_METHODS, required=True)
    p.add_argument("--out", help="write JSON here instead of stdout")
    p.add_argument("--labels-csv", help="also write node,core CSV")
    _detector_flags(p)
    p.set_defaults(func=cmd_detect)

    p = common(sub.add_parser("test", help="significance test"))
    p.add_argument("--metric", choices=("borgatti", "brusco", "cucuringu", "centralization"), default="borgatti")
    p.add_argument("--null", choices=("preserve-m", "preserve-degrees", "er", "surprise"), required=True)
    p.add_argument("--B", type=int, default=None, help="replicates (default 199)")
    p.add_argument("--swaps", type=_positive_int, default=None, help="attempted swaps per replicate (default 10 m)")
    p.add_argument("--frozen", action="store_true", help="score replicates with the observed labels")
    p.add_argument("--labels", help="observed labels (node,core CSV or detect JSON)")
    p.add_argument("--detector", choices=DETECT_METHODS, help="surprise test: detector for the labels")
    p.add_argument("--zscore", action="store_true", help="centralization z-score instead of a p-value")
    p.add_argument("--out", help="write JSON here instead of stdout")
    _detector_flags(p)
    p.set_defaults(func=cmd_test)

    p = common(sub.add_parser("generate", help="sample a random graph"), with_input=False)
    p.add_argument(
        "--model",
        choices=("er", "gnm", "sbm2", "layered", "chung-lu", "dcsbm", "sociability", "logistic", "hybrid"),
        required=True,
    )
    p.add_argument("--out", required=True, help="edge-list path; the sidecar is OUT.json")
    p.add_argument("--n", type=int)
    p.add_argument("--p", type=float)
    p.add_argument("--m", type=int)
    p.add_argument("--n1", type=int)
    p.add_argument("--n2", type=int)
    p.add_argument("--p11", type=float)
    p.add_argument("--p12", type=float)
    p.add_argument("--p22", type=float)
    p.add_argument("--require-cp", action="store_true", help="sbm2: insist on p11 >= p12 >= p22")
    p.add_argument("--sizes", help="layered: layer sizes, core first")
    p.add_argument("--rates", help="layered: non-increasing layer rates")
    p.add_argument("--theta", help="node weights (comma list or @file)")
    p.add_argument("--labels", help="dcsbm: block labels")
    p.add_argument("--omega", help="dcsbm: block rate matrix, row by row")
    p.add_argument("--communities", help="hybrid: community labels")
    p.add_argument("--coreness", help="hybrid: coreness values")
    p.add_argument("--a", type=float)
    p.add_argument("--b", type=float)
    p.set_defaults(func=cmd_generate)

    p = common(sub.add_parser("fit", help="fit a block model"))
    p.add_argument("--method", choices=("em", "gibbs", "dcsbm"), required=True)
    p.add_argument("--init", help="em: gamma1,p11,p12,p22 start")
    p.add_argument("--tol", type=float, default=1e-8)
    p.add_argument("--max-iter", type=_positive_int, default=500)
    p.add_argument("--prior", choices=("flat", "ordered", "layered"), default="ordered")
    p.add_argument("--layers", type=int, default=None, help="gibbs: layer count for the layered prior")
    p.add_argument("--samples", type=_positive_int, default=1000)
    p.add_argument("--burn-in", type=int, default=200)
    p.add_argument("--chain-out", help="gibbs: JSON-lines file with one sample per line")
    p.add_argument("--restarts", type=_positive_int, default=10, help="dcsbm: random restarts")
    p.add_argument("--out", help="write JSON here instead of stdout")
    p.set_defaults(func=cmd_fit)
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    start = time.perf_counter()
    try:
        with warnings.catch_warnings(record=True) as caught:
            warnings.simplefilter("always")
            doc = args.func(args)
    except UsageError as exc:
        parser.print_usage(sys.stderr)
        print(f"cpkit {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except DataError as exc:
        print(f"cpkit {args.command}: data error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except NumericalError as exc:
        print(f"cpkit {args.command}: numerical error: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except OSError as exc:
        print(f"cpkit {args.command}: {exc}", file=sys.stderr)
        return EXIT_DATA
    messages = list(dict.fromkeys(str(w.message) for w in caught))
    for msg in messages:
        print(f"cpkit {args.command}: warning: {msg}", file=sys.stderr)
    if messages:
        doc["warnings"] = messages
    if args.record_timing:
        doc.setdefault("manifest", {})["wall_clock_s"] = time.perf_counter() - start
    _emit(doc, getattr(args, "out", None) if args.command != "generate" else None)
    return 0


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
