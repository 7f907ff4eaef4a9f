"""Command-line entry point.

Subcommands: sample, adv, hidden, xi, dual-check, bounds-audit, reduce,
otter, verify.  Outputs are deterministic given (arguments, seed): JSON
carries a schema_version field, CSV uses stable documented columns with a
'.' decimal separator, and probabilities are accepted as exact fractions
"a/b" in --exact mode.  --threads controls trial-level parallelism; the
derived-seed scheme makes results identical for any thread count, and
--threads 1 additionally fixes the execution order.
"""

from __future__ import annotations

import argparse
import csv
import json
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from fractions import Fraction
from pathlib import Path

from . import __version__
from . import advantage as adv
from . import basis as bs
from . import bounds as bd
from . import certificate as ct
from . import graph_core as gc
from . import measures as ms
from . import models as md
from . import reduction as rd
from .exactnum import Rad

SCHEMA_VERSION = 1


def _parse_number(text: str, exact: bool):
    if text is None:
        return None
    if "/" in text:
        num, den = text.split("/", 1)
        return Fraction(int(num), int(den))
    if exact:
        return Fraction(text)
    return float(text)


def _jsonable(x):
    if isinstance(x, Rad):
        return {"value": float(x), "exact_repr": repr(x)}
    if isinstance(x, Fraction):
        return {"numerator": x.numerator, "denominator": x.denominator, "value": float(x)}
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if isinstance(x, frozenset):
        return sorted(x)
    return x


def _emit(payload: dict, out: str | None):
    payload = {"schema_version": SCHEMA_VERSION, **payload}
    text = json.dumps(_jsonable(payload), indent=2, sort_keys=True)
    if out:
        Path(out).write_text(text + "\n", encoding="utf-8")
    else:
        print(text)


def _params_from_args(args, exact: bool) -> md.ModelParams:
    kw = dict(n=args.n)
    for name in ("p", "q", "s", "rho", "eps", "delta"):
        val = getattr(args, name, None)
        if val is not None:
            kw[name] = _parse_number(val, exact)
    lam = getattr(args, "lam", None)
    if lam is not None:
        kw["lam"] = _parse_number(lam, exact)
    for name in ("k", "D", "N"):
        val = getattr(args, name, None)
        if val is not None:
            kw[name] = int(val)
    return md.ModelParams(**kw)


def _add_model_args(p: argparse.ArgumentParser):
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--p")
    p.add_argument("--q")
    p.add_argument("--s")
    p.add_argument("--rho")
    p.add_argument("--lambda", dest="lam")
    p.add_argument("--k", type=int)
    p.add_argument("--eps")
    p.add_argument("--delta")
    p.add_argument("--D", type=int)
    p.add_argument("--N", type=int)
    p.add_argument("--exact", action="store_true", help="parse probabilities as exact fractions")


# -- subcommands ------------------------------------------------------------------


def cmd_sample(args) -> int:
    params = _params_from_args(args, args.exact)
    out_dir = Path(args.out) if args.out else Path(".")
    out_dir.mkdir(parents=True, exist_ok=True)
    threads = args.threads or 1

    def one(trial: int):
        seed = args.seed + trial
        if args.model == "er":
            rng = md.derived_rng(seed)
            g = md._mask_to_graph(params.n, md._rand_sym_mask(rng, params.n, float(params.q)))
            return trial, {"graph": g}, {}
        if args.model == "sbm":
            sigma, g = md.sample_sbm(params, seed)
            return trial, {"graph": g}, {"sigma_star": list(sigma)}
        if args.model == "corr-er":
            s = md.sample_correlated_er(params, seed)
        elif args.model == "corr-sbm":
            s = md.sample_correlated_sbm(params, seed)
        elif args.model == "mod-sbm":
            s = md.sample_modified_sbm(params, seed)
        else:
            raise ValueError(f"unknown model {args.model}")
        graphs = {"G": s.parent, "A": s.left, "B": s.right}
        if s.parent_pruned is not None:
            graphs["Gprime"] = s.parent_pruned
        side = {"pi_star": list(s.pi_star)}
        if s.sigma_star is not None:
            side["sigma_star"] = list(s.sigma_star)
        return trial, graphs, side

    trial_ids = list(range(args.trials))
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            results = list(pool.map(one, trial_ids))
    else:
        results = [one(t) for t in trial_ids]
    results.sort(key=lambda r: r[0])
    for trial, graphs, side in results:
        for name, g in graphs.items():
            path = out_dir / f"trial{trial:04d}_{name}.edges"
            path.write_text(gc.write_edge_list(g), encoding="utf-8")
        sidecar = {"schema_version": SCHEMA_VERSION, "model": args.model,
                   "seed": args.seed + trial, "trial": trial, **side}
        (out_dir / f"trial{trial:04d}_meta.json").write_text(
            json.dumps(_jsonable(sidecar), indent=2, sort_keys=True) + "\n", encoding="utf-8")
    print(f"wrote {args.trials} trial(s) to {out_dir}")
    return 0


def _build_alt_measure(model: str, params: md.ModelParams):
    if model == "corr-er":
        return ms.correlated_er_joint_measure(params.n, params.p, params.s)
    if model == "corr-sbm":
        return ms.correlated_sbm_joint_measure(params.n, params.k, params.lam, params.eps, params.s)
    raise ValueError(f"advantage needs an enumerable pair model, not {model!r}")


def cmd_adv(args) -> int:
    params = _params_from_args(args, args.exact)
    D = args.D if args.D is not None else 2
    if args.condition:
        cond = args.condition.replace(" ", "")
        if not (cond.startswith("pi(") and "=" in cond):
            raise SystemExit("--condition must look like 'pi(1)=1'")
        i = int(cond[3 : cond.index(")")])
        j = int(cond.split("=")[1])
        joint = _build_alt_measure(args.model, params)
        if args.method == "product-basis":
            rep = adv.conditional_advantage(joint, params, D, i - 1, j - 1)
        else:
            pair = adv.condition_on_match(joint, i - 1, j - 1)
            qm = ms.er_pair_measure(params.n, bs.pair_edge_prob(params))
            fn = adv.advantage_gram_schmidt if args.method == "gram-schmidt" else adv.advantage_rayleigh
            rep = fn(pair, qm, D=D)
    else:
        joint = _build_alt_measure(args.model, params)
        pair = joint.map(lambda x: (x[1], x[2]))
        if args.method == "product-basis":
            rep = adv.advantage_product_basis(pair, params, D, kind="pair")
        else:
            qm = ms.er_pair_measure(params.n, bs.pair_edge_prob(params))
            fn = adv.advantage_gram_schmidt if args.method == "gram-schmidt" else adv.advantage_rayleigh
            rep = fn(pair, qm, D=D)
    _emit({
        "command": "adv", "model": args.model, "degree": rep.degree,
        "method": rep.method, "value": rep.value, "value_squared": rep.value_squared,
        "per_class_contributions": rep.per_index, "condition": args.condition,
    }, args.out)
    return 0


def cmd_hidden(args) -> int:
    payload = json.loads(Path(args.base_spec).read_text(encoding="utf-8"))
    outcomes = payload["outcomes"]
    null_w = [Fraction(w) if isinstance(w, str) else w for w in payload["null"]]
    alt_w = [Fraction(w) if isinstance(w, str) else w for w in payload["alt"]]
    base_null = ms.DiscreteMeasure(outcomes, null_w)
    base_alt = ms.DiscreteMeasure(outcomes, alt_w)
    problem = adv.build_hidden_sample(base_null, base_alt, args.M)
    base = adv.advantage_gram_schmidt(base_alt, base_null, D=1)
    rep = adv.hidden_sample_advantage(problem, args.D)
    _emit({
        "command": "hidden", "M": args.M, "degree": args.D,
        "base_value_squared": base.value_squared,
        "composite_value_squared": rep.value_squared,
        "identity_residual": float((rep.value_squared - 1) * args.M - (base.value_squared - 1)),
    }, args.out)
    return 0


def cmd_xi(args) -> int:
    params = _params_from_args(args, args.exact)
    kernel = ct.EXACT_KERNEL if args.kernel == "exact" else ct.FIRST_ORDER_KERNEL
    dual = ct.build_dual(params, args.D, kernel=kernel)
    table = {
        key: {"value": float(val), "n_vertices": nv, "n_edges": ne, "labeled_copies": count}
        for key, (val, nv, ne, count) in sorted(dual.entries.items())
    }
    _emit({
        "command": "xi", "degree": args.D, "kernel": kernel,
        "table": table, "norm": dual.norm, "norm_squared": dual.norm_squared,
    }, args.out)
    return 0


def cmd_dual_check(args) -> int:
    params = _params_from_args(args, args.exact)
    residual, rows = ct.verify_linear_system(params, args.D)
    payload = {
        "command": "dual-check", "degree": args.D, "rows": rows,
        "max_residual": float(residual),
        "residual_exactly_zero": isinstance(residual, Fraction) and residual == 0,
    }
    if params.n <= 4 and args.D <= 3 and params.k == 2:
        exact, dual_norm = ct.duality_gap(params, args.D)
        payload["reversed_advantage"] = exact
        payload["dual_norm"] = dual_norm
        payload["duality_holds"] = exact <= dual_norm + 1e-9
    _emit(payload, args.out)
    return 0


def cmd_bounds_audit(args) -> int:
    params = None
    if args.params:
        raw = json.loads(Path(args.params).read_text(encoding="utf-8"))
        raw = {k: (Fraction(v) if isinstance(v, str) and "/" in v else v) for k, v in raw.items()}
        params = md.ModelParams(**raw)
    audits = bd.run_suite(args.suite, params, slack=args.slack)
    rows = [a.row() for a in audits]
    if args.out:
        with open(args.out, "w", newline="", encoding="utf-8") as fh:
            writer = csv.writer(fh)
            writer.writerow(["instance", "lhs", "rhs", "slack", "holds", "regime"])
            writer.writerows(rows)
        print(f"wrote {len(rows)} audits to {args.out}")
    else:
        for row in rows:
            print(",".join(str(x) for x in row))
    failures = [a for a in audits if not a.holds]
    print(f"suite {args.suite}: {len(audits)} audits, {len(failures)} failures")
    return 0 if not failures else 3


def cmd_reduce(args) -> int:
    params = _params_from_args(args, args.exact)
    estimator = rd.ESTIMATORS[args.estimator](args.seed)
    fam = rd.truncate_family(rd.estimator_to_indicators(estimator, params.n))
    lam_mix = _parse_number(args.lambda_mix, args.exact) if args.lambda_mix else Fraction(1, 2)

    overlaps = []
    g_alt = []
    for t in range(args.trials):
        samp = md.sample_correlated_er(params, args.seed + t)
        pi_hat = estimator(samp.left, samp.right)
        overlaps.append(float(rd.overlap(pi_hat, samp.pi_star)))
        h = fam.evaluate(samp.left, samp.right)
        rows = [rd.mix_statistic([int(x) for x in row], lam_mix) for row in h]
        g_alt.append(rd.aggregate_statistic(
            float(rows[i][samp.pi_star[i]]) for i in range(params.n)))
    p_sampler, q_sampler = rd.correlated_er_samplers(params)

    def statistic(a, b):
        h = fam.evaluate(a, b)
        return float(h.trace())

    g_under_p = [statistic(*p_sampler(args.seed * 2, t)) for t in range(args.trials)]
    g_under_q = [statistic(*q_sampler(args.seed * 2 + 1, t)) for t in range(args.trials)]
    report = rd.one_sided_test(statistic, args.threshold, p_sampler, q_sampler, args.trials, args.seed)
    _emit({
        "command": "reduce", "estimator": args.estimator, "trials": args.trials,
        "overlap_mean": sum(overlaps) / len(overlaps), "overlaps": overlaps,
        "planted_statistic_mean": sum(g_alt) / len(g_alt),
        "statistic_under_alternative": g_under_p,
        "statistic_under_null": g_under_q,
        "q_accept_rate": report.q_accept_rate, "p_reject_rate": report.p_reject_rate,
        "classification": report.classify(),
    }, args.out)
    return 0


def cmd_otter(args) -> int:
    counts = gc.rooted_tree_counts(args.max_n)
    est = gc.otter_constant_estimate(args.max_n)
    _emit({
        "command": "otter", "max_n": args.max_n, "counts": counts,
        "estimate": est.value, "converged": est.converged, "raw_ratio": est.raw_ratio,
    }, args.out)
    return 0


def cmd_verify(args) -> int:
    """Run a quick suite of the package's exact invariants."""
    checks: list[tuple[str, bool]] = []

    def check(name: str, ok: bool):
        checks.append((name, bool(ok)))
        print(f"[{'PASS' if ok else 'FAIL'}] {name}")

    F = Fraction
    pr3 = md.ModelParams(n=3, lam=F(1), k=2, eps=F(2, 5))
    q0 = bs.null_edge_prob(pr3)
    m3 = ms.er_graph_measure(3, q0)
    idxs = bs.single_indices(3, 3)
    ok = all(
        (m3.expectation(lambda x: bs.evaluate_basis(a, x, pr3) * bs.evaluate_basis(b, x, pr3))
         == Rad.of(1 if a == b else 0))
        for a in idxs for b in idxs
    )
    check("single-basis orthonormality (n=3, exact)", ok)

    tri = gc.graph(6, [(0, 1), (1, 2), (0, 2)])
    pr6 = md.ModelParams(n=6, lam=F(1), k=2, eps=F(3, 10), delta=F(1, 100))
    a, b = bs.h_decomposition(2, pr6.eps, pr6.lam, pr6.n)
    t = ct.transfer_weight(pr6, ct.FIRST_ORDER_KERNEL)
    closed = -(2 - 1) * t ** 3 / (a ** 3 + b ** 3)
    check("recursion closed form on the 3-cycle", ct.xi(tri, pr6) == closed)

    pr4 = md.ModelParams(n=4, lam=F(1), k=2, eps=F(3, 10), delta=F(1, 100))
    residual, rows = ct.verify_linear_system(pr4, 3)
    check(f"linear system rows exactly zero (n=4, {rows} rows)",
          isinstance(residual, Fraction) and residual == 0)

    deco_ok = True
    import random as _random
    _random.seed(7)
    for _ in range(50):
        n = _random.randint(3, 7)
        pairs = [(i, j) for i in range(n) for j in range(i + 1, n)]
        edges = _random.sample(pairs, _random.randint(0, len(pairs)))
        s = gc.graph(n, edges)
        h_edges = _random.sample(edges, _random.randint(0, len(edges))) if edges else []
        h = gc.graph(n, h_edges)
        d = gc.decompose_difference(s, h, "A2")
        if d.reassembled_edges() != sorted(s.edges - h.edges):
            deco_ok = False
        if d.t != len(gc.leaves(s) - h.vertices) + gc.excess(s) - gc.excess(h):
            deco_ok = False
    check("difference decomposition count identity (50 random)", deco_ok)

    counts = gc.rooted_tree_counts(9)
    check("rooted tree counts", counts == [1, 1, 2, 4, 9, 20, 48, 115, 286])

    failures = [name for name, ok in checks if not ok]
    print(f"{len(checks) - len(failures)}/{len(checks)} invariant checks passed")
    return 0 if not failures else 4


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="lowdeg", description=__doc__)
    parser.add_argument("--version", action="version", version=f"lowdeg {__version__}")
    parser.add_argument("--threads", type=int,
                        default=int(os.environ.get("LOWDEG_THREADS", os.cpu_count() or 1)),
                        help="worker threads for trial-level parallelism "
                             "(default from LOWDEG_THREADS or the core count)")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("sample", help="draw model samples to edge-list files")
    _add_model_args(p)
    p.add_argument("--model", required=True, choices=["er", "sbm", "corr-er", "corr-sbm", "mod-sbm"])
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--trials", type=int, default=1)
    p.add_argument("--out")
    p.set_defaults(fn=cmd_sample)

    p = sub.add_parser("adv", help="low-degree advantage on an enumerable instance")
    _add_model_args(p)
    p.add_argument("--model", required=True, choices=["corr-er", "corr-sbm"])
    p.add_argument("--condition", help="e.g. 'pi(1)=1' (1-based)")
    p.add_argument("--method", default="product-basis",
                   choices=["product-basis", "gram-schmidt", "rayleigh"])
    p.add_argument("--out")
    p.set_defaults(fn=cmd_adv)

    p = sub.add_parser("hidden", help="hidden-informative-sample advantage")
    p.add_argument("--M", type=int, required=True)
    p.add_argument("--D", type=int, default=1)
    p.add_argument("--base-spec", required=True, help="JSON {outcomes, null, alt}")
    p.add_argument("--out")
    p.set_defaults(fn=cmd_hidden)

    p = sub.add_parser("xi", help="dual recursion table and norm")
    _add_model_args(p)
    p.add_argument("--kernel", default="first-order", choices=["first-order", "exact"])
    p.add_argument("--out")
    p.set_defaults(fn=cmd_xi)

    p = sub.add_parser("dual-check", help="linear-system residuals and duality gap")
    _add_model_args(p)
    p.add_argument("--out")
    p.set_defaults(fn=cmd_dual_check)

    p = sub.add_parser("bounds-audit", help="run a bound audit suite to CSV")
    p.add_argument("--suite", required=True, choices=list(bd.SUITES))
    p.add_argument("--params", help="JSON file of model parameters")
    p.add_argument("--slack", type=float, default=bd.DESK_SLACK)
    p.add_argument("--out")
    p.set_defaults(fn=cmd_bounds_audit)

    p = sub.add_parser("reduce", help="estimator-to-detection reduction harness")
    _add_model_args(p)
    p.add_argument("--model", default="corr-er", choices=["corr-er"])
    p.add_argument("--estimator", default="identity", choices=list(rd.ESTIMATORS))
    p.add_argument("--lambda-mix", dest="lambda_mix")
    p.add_argument("--threshold", type=float, default=0.5)
    p.add_argument("--trials", type=int, default=100)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out")
    p.set_defaults(fn=cmd_reduce)

    p = sub.add_parser("otter", help="rooted-tree counts and growth constant")
    p.add_argument("--max-n", dest="max_n", type=int, default=50)
    p.add_argument("--out")
    p.set_defaults(fn=cmd_otter)

    p = sub.add_parser("verify", help="run the quick invariant suite")
    p.set_defaults(fn=cmd_verify)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.fn(args)
    except (ValueError, gc.EnumerationBudgetError) as exc:
        print(json.dumps({"error": str(exc), "schema_version": SCHEMA_VERSION}), file=sys.stderr)
        return 2


if __name__ == "__main__":
    raise SystemExit(main())
