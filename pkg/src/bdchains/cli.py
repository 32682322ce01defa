"""Command-line front end.

Exit codes: 0 success, 1 input error, 2 violated theorem-backed check
(verify only), 3 horizon exhausted.  All numeric output carries 17
significant digits and is byte-deterministic for a fixed manifest.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import sys

import numpy as np

from . import __version__
from .chain import ChainValidationError, detailed_balance_residual
from .config import MAX_STATES, structural_tol
from .cutoff_analysis import family_scan, lemma_suite, window_bound_check
from .evolve import Evolution, HorizonExceededError
from .families import (InfeasibleFamilyError, biased_walk, ehrenfest_like,
                       lazy_srw, realize_eigenvalues, tightness_family)
from .hitting import hitting_pmf, spectral_hitting
from .io import (chain_to_dict, csv_lines, dumps_json, format_float,
                 load_chain)
from .montecarlo import (SimConfig, delta_lazy_coupling, empirical_hitting,
                         no_crossing_coupling, sample_path)
from .separation import worst_separation
from .spectral import eigenvalues


class _Parser(argparse.ArgumentParser):
    # argparse exits with status 2 on bad flags; our taxonomy reserves 2
    # for violated theorem checks, so remap usage errors to 1
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def _sha256_file(path: str) -> str:
    h = hashlib.sha256()
    with open(path, "rb") as fh:
        for block in iter(lambda: fh.read(1 << 16), b""):
            h.update(block)
    return h.hexdigest()


def _manifest(command: str, digest: str, seed=None, outputs=()) -> dict:
    return {
        "command": command,
        "input_digest": digest,
        "version": __version__,
        "tolerance": format_float(structural_tol()),
        "seed": seed,
        "outputs": list(outputs),
    }


def _emit(text: str, out: str = None) -> None:
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _emit_json(payload: dict, manifest: dict, out: str = None) -> None:
    payload = dict(payload)
    payload["manifest"] = manifest
    _emit(dumps_json(payload), out)


def _emit_csv(header, rows, manifest: dict, out: str = None) -> None:
    digest = hashlib.sha256(dumps_json(manifest).encode()).hexdigest()
    text = csv_lines(header, rows)
    head, rest = text.split("\n", 1)
    _emit(f"{head}\n# manifest {digest}\n{rest}", out)


def _add_chain_args(p):
    p.add_argument("--chain", required=True, help="chain JSON file")
    p.add_argument("--out", help="output file (default stdout)")
    p.add_argument("--max-states", type=int, default=MAX_STATES)


def build_parser() -> argparse.ArgumentParser:
    top = _Parser(prog="bdchains")
    top.add_argument("--version", action="version", version=__version__)
    sub = top.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("validate", help="validate a chain file, print flags")
    _add_chain_args(p)

    p = sub.add_parser("spectrum", help="eigenvalues, gap, relaxation time")
    _add_chain_args(p)

    p = sub.add_parser("profile", help="worst-case distance profile CSV")
    _add_chain_args(p)
    p.add_argument("--times", help="comma-separated times (default: grid to t_mix(0.01))")
    p.add_argument("--sep", action="store_true", help="include separation column")
    p.add_argument("--dbar", action="store_true", help="include pairwise-TV column")

    p = sub.add_parser("mixing", help="mixing times at given thresholds")
    _add_chain_args(p)
    p.add_argument("--eps", default="0.25", help="comma-separated thresholds")
    p.add_argument("--horizon", type=int)

    p = sub.add_parser("hitting", help="hitting-time law and moments")
    _add_chain_args(p)
    p.add_argument("--start", type=int, required=True)
    p.add_argument("--target", type=int, required=True)
    p.add_argument("--tol", type=float, default=1e-12, help="tail mass cutoff")
    p.add_argument("--pmf-out", default="hitting_pmf.csv")
    p.add_argument("--method", choices=["dp", "spectral"], default="dp")

    p = sub.add_parser("separation", help="separation distance CSV")
    _add_chain_args(p)
    p.add_argument("--times", required=True, help="comma-separated times")

    p = sub.add_parser("family-scan", help="cutoff statistics across sizes")
    p.add_argument("--family", required=True,
                   help="lazy_srw | biased:<beta> | ehrenfest")
    p.add_argument("--sizes", required=True, help="comma-separated sizes")
    p.add_argument("--eps", required=True, help="comma-separated thresholds")
    p.add_argument("--out", help="CSV output file (default stdout)")
    p.add_argument("--summary-out", help="JSON summary file (default stdout)")

    p = sub.add_parser("construct", help="build a chain and emit its JSON")
    p.add_argument("--realize", help="JSON file with a list of eigenvalues")
    p.add_argument("--tightness", nargs=4, metavar=("H_M", "T_R", "N", "PERTURB"))
    p.add_argument("--out", help="output file (default stdout)")

    p = sub.add_parser("verify", help="run the inequality suite; exit 2 on violation")
    _add_chain_args(p)
    p.add_argument("--eps", type=float, required=True)

    p = sub.add_parser("simulate", help="Monte Carlo cross-checks")
    _add_chain_args(p)
    p.add_argument("--mode", required=True,
                   choices=["path", "coupling", "delta-coupling", "hitting"])
    p.add_argument("--trials", type=int, default=1000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--horizon", type=int)
    p.add_argument("--start", type=int, default=0)
    p.add_argument("--target", type=int)
    p.add_argument("--delta", type=float)
    p.add_argument("--hist-out", help="optional CSV histogram output")
    return top


def _parse_floats(text: str):
    return [float(x) for x in text.split(",") if x]


def _parse_ints(text: str):
    return [int(x) for x in text.split(",") if x]


def _load(args):
    chain = load_chain(args.chain, max_states=args.max_states)
    return chain, _sha256_file(args.chain)


def _cmd_validate(args) -> int:
    chain, digest = _load(args)
    f = chain.flags
    payload = {
        "n": chain.n,
        "irreducible": f.irreducible,
        "lazy": f.lazy,
        "delta_lazy": f.delta_lazy,
        "monotone": f.monotone,
        "absorbing_states": list(f.absorbing_states),
        "detailed_balance_residual": (
            detailed_balance_residual(chain) if f.irreducible else None
        ),
    }
    _emit_json(payload, _manifest("validate", digest, outputs=[args.out] if args.out else []),
               args.out)
    return 0


def _cmd_spectrum(args) -> int:
    chain, digest = _load(args)
    rep = eigenvalues(chain)
    payload = {
        "eigenvalues": rep.eigenvalues,
        "gap": rep.gap,
        "t_rel": rep.t_rel,
        "lambda2": rep.lambda2,
        "ergodic": rep.ergodic,
    }
    _emit_json(payload, _manifest("spectrum", digest, outputs=[args.out] if args.out else []),
               args.out)
    return 0


def _profile_times(chain, args):
    if args.times:
        return _parse_ints(args.times)
    evo = Evolution(chain)
    tmax = evo.mixing_time(0.01)
    ts = np.unique(np.linspace(0, max(tmax, 1), min(max(tmax, 1) + 1, 200), dtype=int))
    return [int(t) for t in ts]


def _cmd_profile(args) -> int:
    chain, digest = _load(args)
    ts = _profile_times(chain, args)
    evo = Evolution(chain)
    header = ["t", "d_tv"]
    if args.sep:
        header.append("d_sep")
    if args.dbar:
        header.append("d_bar")
    rows = []
    for t in ts:
        row = [t, evo.worst_tv(t)[0]]
        if args.sep:
            row.append(worst_separation(chain, t, evo=evo).worst)
        if args.dbar:
            row.append(evo.pairwise_tv(t))
        rows.append(row)
    _emit_csv(header, rows,
              _manifest("profile", digest, outputs=[args.out] if args.out else []),
              args.out)
    return 0


def _cmd_mixing(args) -> int:
    chain, digest = _load(args)
    evo = Evolution(chain)
    payload = {"t_mix": {format_float(e): evo.mixing_time(e, args.horizon)
                         for e in _parse_floats(args.eps)}}
    _emit_json(payload, _manifest("mixing", digest, outputs=[args.out] if args.out else []),
               args.out)
    return 0


def _cmd_hitting(args) -> int:
    chain, digest = _load(args)
    if args.method == "spectral":
        if args.start != 0:
            raise ChainValidationError("spectral method supports start 0 only")
        law = spectral_hitting(chain, args.target, tail_tol=args.tol)
    else:
        law = hitting_pmf(chain, args.start, args.target, tail_tol=args.tol)
    manifest = _manifest("hitting", digest,
                         outputs=[x for x in (args.out, args.pmf_out) if x])
    if law.pmf is not None:
        _emit_csv(["t", "pmf"], list(enumerate(law.pmf)), manifest, args.pmf_out)
    payload = {
        "expectation": law.expectation,
        "variance": law.variance,
        "expectation_err": law.expectation_err,
        "variance_err": law.variance_err,
        "tail": law.tail,
        "pmf_csv_path": args.pmf_out if law.pmf is not None else None,
        "diagnostic": law.diagnostic,
    }
    if law.thetas is not None:
        payload["thetas"] = law.thetas
    _emit_json(payload, manifest, args.out)
    return 0


def _cmd_separation(args) -> int:
    chain, digest = _load(args)
    evo = Evolution(chain)
    rows = []
    for t in _parse_ints(args.times):
        rep = worst_separation(chain, t, evo=evo)
        rows.append([t, rep.worst, rep.argmax_pair[0], rep.argmax_pair[1]])
    _emit_csv(["t", "d_sep", "worst_x", "worst_y"], rows,
              _manifest("separation", digest, outputs=[args.out] if args.out else []),
              args.out)
    return 0


def _family_generator(spec: str):
    if spec == "lazy_srw":
        return lazy_srw
    if spec == "ehrenfest":
        return ehrenfest_like
    if spec.startswith("biased:"):
        beta = float(spec.split(":", 1)[1])
        return lambda n: biased_walk(n, beta)
    raise ChainValidationError(f"unknown family {spec!r}")


def _cmd_family_scan(args) -> int:
    gen = _family_generator(args.family)
    sizes = _parse_ints(args.sizes)
    eps_grid = _parse_floats(args.eps)
    report = family_scan(gen, sizes, eps_grid)
    digest = hashlib.sha256(
        f"{args.family}|{args.sizes}|{args.eps}".encode()
    ).hexdigest()
    manifest = _manifest("family-scan", digest,
                         outputs=[x for x in (args.out, args.summary_out) if x])
    header = ["n", "gap", "t_rel", "t_mix_quarter", "product"]
    for e in eps_grid:
        tag = format_float(e)
        header += [f"window_{tag}", f"ratio_{tag}", f"normalized_window_{tag}"]
    rows = []
    for row in report.rows:
        cells = [row.n, row.gap, row.t_rel, row.t_mix[0.25], row.product]
        for e in eps_grid:
            cells += [row.window[e], row.ratio[e], row.normalized_window[e]]
        rows.append(cells)
    _emit_csv(header, rows, manifest, args.out)
    summary = {
        "family": args.family,
        "sizes": sizes,
        "eps": eps_grid,
        "failures": report.failures,
        "products": [row.product for row in report.rows],
        "ratios": {format_float(e): [row.ratio[e] for row in report.rows]
                   for e in eps_grid},
    }
    _emit_json(summary, manifest, args.summary_out)
    return 0


def _cmd_construct(args) -> int:
    if bool(args.realize) == bool(args.tightness):
        raise ChainValidationError("give exactly one of --realize or --tightness")
    if args.realize:
        with open(args.realize, encoding="utf-8") as fh:
            try:
                thetas = json.load(fh)
            except json.JSONDecodeError as exc:
                raise ChainValidationError(
                    f"{args.realize}: malformed JSON at line {exc.lineno} "
                    f"column {exc.colno}: {exc.msg}"
                )
        chain = realize_eigenvalues([float(t) for t in thetas])
        digest = _sha256_file(args.realize)
        extra = {}
    else:
        h_m, t_r, n, perturb = args.tightness
        rep = tightness_family(float(h_m), float(t_r), int(n), float(perturb))
        chain = rep.chain
        digest = hashlib.sha256("|".join(args.tightness).encode()).hexdigest()
        extra = {
            "k_repeated": rep.k_repeated,
            "lam": rep.lam,
            "lam_prime": rep.lam_prime,
            "expected_hit_top": rep.expected_hit_top,
            "t_rel": rep.t_rel,
            "variance_lower_bound": rep.variance_lower_bound,
        }
    payload = dict(chain_to_dict(chain))
    payload.update(extra)
    _emit_json(payload, _manifest("construct", digest,
                                  outputs=[args.out] if args.out else []), args.out)
    return 0


def _cmd_verify(args) -> int:
    chain, digest = _load(args)
    evo = Evolution(chain)
    suite = lemma_suite(chain, args.eps, evo=evo)
    window = window_bound_check(chain, args.eps, evo=evo)
    payload = {
        "eps": args.eps,
        "checks": [
            {"name": c.name, "applicable": c.applicable,
             "holds": c.holds, "slack": c.slack}
            for c in suite.checks
        ],
        "window": {
            "lhs": window.lhs, "rhs": window.rhs, "c_eps": window.c_eps_used,
            "holds": window.holds, "effective_regime": window.effective_regime,
            "sharp_lhs": window.sharp_lhs, "sharp_rhs": window.sharp_rhs,
            "sharp_holds": window.sharp_holds,
        },
    }
    violated = bool(suite.violated()) or not window.holds or window.sharp_holds is False
    payload["violated"] = violated
    _emit_json(payload, _manifest("verify", digest,
                                  outputs=[args.out] if args.out else []), args.out)
    return 2 if violated else 0


def _cmd_simulate(args) -> int:
    chain, digest = _load(args)
    config = SimConfig(trials=args.trials, seed=args.seed, horizon=args.horizon)
    manifest = _manifest("simulate", digest, seed=args.seed,
                         outputs=[x for x in (args.out, args.hist_out) if x])
    hist = None
    if args.mode == "path":
        steps = args.horizon if args.horizon else 100
        path = sample_path(chain, args.start, steps, config.rng())
        payload = {"mode": "path", "start": args.start,
                   "path": [int(x) for x in path]}
    elif args.mode == "hitting":
        if args.target is None:
            raise ChainValidationError("--target is required for hitting mode")
        res = empirical_hitting(chain, args.start, args.target, config)
        payload = {"mode": "hitting", "mean": res.mean, "variance": res.variance,
                   "mean_stderr": res.mean_stderr, "censored": res.censored}
        hist = res.histogram()
    else:
        if args.mode == "delta-coupling":
            if args.delta is None:
                raise ChainValidationError("--delta is required for delta-coupling")
            res = delta_lazy_coupling(chain, args.start, args.delta, config)
            payload = {"mode": "delta-coupling", "delta": args.delta,
                       "mean_steps_per_move": res.mean_steps_per_move}
        else:
            res = no_crossing_coupling(chain, args.start, config)
            payload = {"mode": "coupling"}
        times = res.coupling_times[res.coupling_times >= 0]
        payload.update({
            "order_violations": res.order_violations,
            "censored": res.censored,
            "mean_coupling_time": float(times.mean()) if times.size else None,
        })
        hist = np.bincount(times) if times.size else None
    if args.hist_out and hist is not None:
        _emit_csv(["t", "count"], list(enumerate(hist)), manifest, args.hist_out)
    _emit_json(payload, manifest, args.out)
    return 0


_COMMANDS = {
    "validate": _cmd_validate,
    "spectrum": _cmd_spectrum,
    "profile": _cmd_profile,
    "mixing": _cmd_mixing,
    "hitting": _cmd_hitting,
    "separation": _cmd_separation,
    "family-scan": _cmd_family_scan,
    "construct": _cmd_construct,
    "verify": _cmd_verify,
    "simulate": _cmd_simulate,
}


def run(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return _COMMANDS[args.command](args)
    except HorizonExceededError as exc:
        print(f"bdchains: horizon exhausted: {exc}", file=sys.stderr)
        return 3
    except (ChainValidationError, InfeasibleFamilyError, ValueError,
            OSError) as exc:
        print(f"bdchains: error: {exc}", file=sys.stderr)
        return 1


def main() -> None:
    sys.exit(run())
