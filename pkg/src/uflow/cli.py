"""Command line front end.

Exit codes: 0 success (or converged), 1 input error, 2 not converged,
3 internal invariant violation.
"""
from __future__ import annotations

import argparse
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

import numpy as np

from .errors import IntegrityError
from .flows import (AnalyticLocal, ArmijoHalving, Fixed, PenaltySchedule, QualityFunction,
                    format_float, restart_seeds, run_flow)
from .io import (FormatError, load_matrix, matrix_from_json, matrix_to_json, read_json,
                 tensor_from_json, write_json)
from .liealg import lie_closure, subalgebra_from_config

EXIT_OK, EXIT_INPUT, EXIT_NOT_CONVERGED, EXIT_INTEGRITY = 0, 1, 2, 3

FLOW_KINDS = ("U1", "U2", "U3", "U1C", "U2C", "U3C", "U1K", "U2K", "U3K")
ORBIT_KINDS = ("U1P", "U1KP")
CONFIG_KEYS = {"kind", "A", "C", "D", "E", "lambda0", "restriction", "rule", "grad_tol",
               "max_iter", "restarts", "seed", "init", "penalty"}


class ConfigError(ValueError):
    """Bad input; the message names the offending field."""

    def __init__(self, field: str, msg: str):
        super().__init__(f"field {field!r}: {msg}")


# ---------------------------------------------------------------------------
# config parsing


def _number(cfg, key, kind, default, positive=False):
    if key not in cfg:
        return default
    v = cfg[key]
    if isinstance(v, bool) or not isinstance(v, (int, float)) or (kind is int and not isinstance(v, int)):
        raise ConfigError(key, f"expected {kind.__name__}, got {v!r}")
    if positive and v <= 0:
        raise ConfigError(key, "must be positive")
    if v < 0:
        raise ConfigError(key, "must be nonnegative")
    return kind(v)


def _matrix(cfg, key, base, required=True):
    if key not in cfg:
        if required:
            raise ConfigError(key, "missing")
        return None
    try:
        return load_matrix(cfg[key], base, where=key)
    except FormatError as exc:
        raise ConfigError(key, str(exc)) from None


def parse_rule(spec):
    if spec is None:
        return ArmijoHalving()
    if isinstance(spec, str):
        spec = {spec: {}}
    if not isinstance(spec, dict) or len(spec) != 1:
        raise ConfigError("rule", "expected one of 'armijo', 'fixed', 'analytic'")
    (name, opts), = spec.items()
    opts = opts or {}
    try:
        if name == "armijo":
            return ArmijoHalving(**opts)
        if name == "fixed":
            return Fixed(float(opts["alpha"]))
        if name == "analytic":
            return AnalyticLocal()
    except (TypeError, KeyError, ValueError) as exc:
        raise ConfigError("rule", f"bad options for {name!r}: {exc}") from None
    raise ConfigError("rule", f"unknown rule {name!r}")


def parse_penalty(spec):
    if spec is None:
        return None
    if not isinstance(spec, dict):
        raise ConfigError("penalty", "expected an object")
    try:
        return PenaltySchedule(**spec)
    except TypeError as exc:
        raise ConfigError("penalty", str(exc)) from None


def _restriction(cfg, N, base):
    if "restriction" not in cfg:
        return None
    r = cfg["restriction"]
    if not isinstance(r, dict):
        raise ConfigError("restriction", "expected an object with a 'kind'")
    try:
        P = subalgebra_from_config(r, N, lambda ref: load_matrix(ref, base, where="restriction.E"))
    except (KeyError, TypeError) as exc:
        raise ConfigError("restriction", f"missing or bad entry {exc}") from None
    except (ValueError, FormatError) as exc:
        raise ConfigError("restriction", str(exc)) from None
    if P.N != N:
        raise ConfigError("restriction", f"acts on dimension {P.N}, but A is {N}x{N}")
    return P


def parse_flow_config(cfg: dict, base: Path, orbit: bool = False) -> dict:
    if not isinstance(cfg, dict):
        raise ConfigError("<root>", "expected a JSON object")
    unknown = sorted(set(cfg) - CONFIG_KEYS)
    if unknown:
        raise ConfigError(unknown[0], "unknown field")
    kind = cfg.get("kind")
    kinds = ORBIT_KINDS if orbit else FLOW_KINDS
    if kind not in kinds:
        raise ConfigError("kind", f"expected one of {', '.join(kinds)}, got {kind!r}")
    A = _matrix(cfg, "A", base)
    C = _matrix(cfg, "C", base)
    N = A.shape[0]
    for key, M in (("A", A), ("C", C)):
        if M.shape != (N, N):
            raise ConfigError(key, f"expected a square {N}x{N} matrix, got {M.shape}")
    P = _restriction(cfg, N, base)
    if kind.endswith("K") or kind == "U1KP":
        if P is None:
            raise ConfigError("restriction", f"kind {kind} needs a restriction")
    elif P is not None:
        raise ConfigError("restriction", f"kind {kind} does not take a restriction")
    out = {
        "kind": kind, "A": A, "C": C, "restriction": P,
        "rule": parse_rule(cfg.get("rule")),
        "grad_tol": _number(cfg, "grad_tol", float, None, positive=True),
        "max_iter": _number(cfg, "max_iter", int, 100_000),
        "restarts": _number(cfg, "restarts", int, 1, positive=True),
        "seed": _number(cfg, "seed", int, 0),
        "penalty": parse_penalty(cfg.get("penalty")),
    }
    if not orbit:
        D = _matrix(cfg, "D", base, required=kind == "U3C")
        E = _matrix(cfg, "E", base, required=kind == "U2C")
        for key, M in (("D", D), ("E", E)):
            if M is not None and M.shape != (N, N):
                raise ConfigError(key, f"expected {N}x{N}, got {M.shape}")
        try:
            out["qf"] = QualityFunction(kind, A, C, D=D, E=E, restriction=P,
                                        lambda0=_number(cfg, "lambda0", float, 1.0))
        except ValueError as exc:
            raise ConfigError("kind", str(exc)) from None
        if isinstance(out["rule"], AnalyticLocal) and out["qf"].kind != "U1":
            raise ConfigError("rule", "the analytic step applies to U1/U1K only")
    elif isinstance(out["rule"], AnalyticLocal):
        raise ConfigError("rule", "orbit flows support 'armijo' and 'fixed' only")
    out["init"] = _parse_init(cfg, kind, N, base)
    return out


def _parse_init(cfg, kind, N, base):
    if "init" not in cfg:
        return None
    two = kind in ("U3", "U3K")
    raw = cfg["init"]
    if two:
        if not isinstance(raw, list) or len(raw) != 2:
            raise ConfigError("init", f"kind {kind} needs a list of two unitaries")
        refs = raw
    else:
        refs = [raw]
    mats = []
    for i, ref in enumerate(refs):
        where = f"init[{i}]" if two else "init"
        try:
            M = load_matrix(ref, base, where=where)
        except FormatError as exc:
            raise ConfigError("init", str(exc)) from None
        if M.shape != (N, N):
            raise ConfigError("init", f"{where} must be {N}x{N}")
        if np.linalg.norm(M.conj().T @ M - np.eye(N)) > 1e-9 * N:
            raise ConfigError("init", f"{where} is not unitary")
        mats.append(M)
    return tuple(mats)


# ---------------------------------------------------------------------------
# helpers


def jobs_from(args) -> int:
    env = os.environ.get("UFLOW_JOBS")
    if env:
        try:
            n = int(env)
        except ValueError:
            raise ConfigError("UFLOW_JOBS", f"not an integer: {env!r}") from None
    else:
        n = args.jobs
    if n < 1:
        raise ConfigError("jobs", "must be at least 1")
    return n


def _pmap(fn, items, jobs):
    if jobs <= 1 or len(items) <= 1:
        return [fn(*it) for it in items]
    with ProcessPoolExecutor(max_workers=jobs) as ex:
        return list(ex.map(fn, *zip(*items)))


def _complex_json(z) -> dict:
    return {"re": float(np.real(z)), "im": float(np.imag(z))}


def _write_text(path, text: str) -> None:
    if path is None or str(path) == "-":
        sys.stdout.write(text)
    else:
        Path(path).write_text(text)


def _flow_job(cfg, init, seed):
    qf = cfg["qf"]
    return run_flow(qf, cfg["rule"], init=init, grad_tol=cfg["grad_tol"],
                    max_iter=cfg["max_iter"], penalty_schedule=cfg["penalty"], seed=seed)


def _orbit_job(cfg, init, seed):
    from .orbits import run_double_bracket
    return run_double_bracket(cfg["A"], cfg["C"], cfg["rule"], tol=cfg["grad_tol"],
                              max_iter=cfg["max_iter"], restriction=cfg["restriction"],
                              init=None if init is None else init[0], seed=seed)


def _run_configured(cfg, job, jobs):
    items = []
    if cfg["init"] is not None:
        items.append((cfg, cfg["init"], None))
    items += [(cfg, None, s) for s in restart_seeds(cfg["seed"], cfg["restarts"])]
    runs = _pmap(job, items, jobs)
    best = max(range(len(runs)), key=lambda i: runs[i].f)
    return runs, runs[best]


def _flow_output(cfg, runs, best) -> dict:
    res = {
        "kind": cfg["kind"],
        "final_f": best.f,
        "converged": best.converged,
        "status": best.status,
        "iterations": best.iterations,
        "grad_norm": best.grad_norm,
        "best_restart_seed": best.seed,
        "restarts": cfg["restarts"],
        "restart_values": [r.f for r in runs],
        "U": matrix_to_json(best.U),
    }
    if best.V is not None:
        res["V"] = matrix_to_json(best.V)
    if best.X is not None:
        res["X"] = matrix_to_json(best.X)
    if best.lam is not None:
        res["lambda"] = best.lam
    if best.constraint_residual is not None:
        res["constraint_residual"] = best.constraint_residual
    return res


# ---------------------------------------------------------------------------
# commands


def _load_config(path):
    try:
        return read_json(path), Path(path).resolve().parent
    except FormatError as exc:
        raise ConfigError("config", str(exc)) from None


def cmd_flow(args) -> int:
    raw, base = _load_config(args.config)
    cfg = parse_flow_config(raw, base)
    runs, best = _run_configured(cfg, _flow_job, jobs_from(args))
    write_json(args.out, _flow_output(cfg, runs, best))
    if args.trace:
        _write_text(args.trace, best.trace.to_csv())
    return EXIT_OK if best.converged else EXIT_NOT_CONVERGED


def cmd_dbflow(args) -> int:
    raw, base = _load_config(args.config)
    cfg = parse_flow_config(raw, base, orbit=True)
    runs, best = _run_configured(cfg, _orbit_job, jobs_from(args))
    write_json(args.out, _flow_output(cfg, runs, best))
    if args.trace:
        _write_text(args.trace, best.trace.to_csv())
    return EXIT_OK if best.converged else EXIT_NOT_CONVERGED


SWEEP_COLUMNS = ["s", "overlap", "delta", "measureI_value", "restarts_used", "converged"]


def _sweep_point(family, s, restarts, seed):
    from .apps.tensors import entanglement_point
    return entanglement_point(family, s, restarts, seed)


def cmd_sweep(args) -> int:
    if not 0.0 <= args.s_min <= args.s_max <= 1.0:
        raise ConfigError("s-range", f"need 0 <= s_min <= s_max <= 1, got [{args.s_min}, {args.s_max}]")
    if args.steps < 1:
        raise ConfigError("steps", "must be at least 1")
    if args.restarts < 1:
        raise ConfigError("restarts", "must be at least 1")
    grid = (np.array([args.s_min]) if args.steps == 1
            else np.linspace(args.s_min, args.s_max, args.steps))
    items = [(args.family, float(s), args.restarts, args.seed ^ i) for i, s in enumerate(grid)]
    rows = _pmap(_sweep_point, items, jobs_from(args))
    lines = [",".join(SWEEP_COLUMNS)]
    for r in rows:
        lines.append(",".join([format_float(r["s"]), format_float(r["overlap"]),
                               format_float(r["delta"]), format_float(r["measureI_value"]),
                               str(r["restarts_used"]), str(r["converged"]).lower()]))
    _write_text(args.out, "\n".join(lines) + "\n")
    return EXIT_OK if all(r["converged"] for r in rows) else EXIT_NOT_CONVERGED


def _load_hamiltonian(path):
    from .apps.states import HamiltonianSpec, build_hamiltonian
    raw = read_json(path)
    if isinstance(raw, dict) and "rows" in raw:
        return matrix_from_json(raw, "hamiltonian")
    try:
        return build_hamiltonian(HamiltonianSpec.from_dict(raw))
    except (KeyError, TypeError) as exc:
        raise ConfigError("hamiltonian", f"missing or bad entry {exc}") from None
    except ValueError as exc:
        raise ConfigError("hamiltonian", str(exc)) from None


def cmd_reversibility(args) -> int:
    from .apps.reversibility import joint_reversibility, pointwise_reversibility
    H = _load_hamiltonian(args.hamiltonian)
    try:
        if args.mode == "joint":
            r = joint_reversibility(H, restarts=args.restarts, seed=args.seed)
            out = {"mode": "joint", "min_value": r.min_value, "reversible": bool(r.reversible),
                   "K": matrix_to_json(r.K)}
        else:
            if args.tau is None:
                raise ConfigError("tau", "pointwise mode needs --tau")
            r = pointwise_reversibility(H, args.tau, restarts=args.restarts, seed=args.seed)
            out = {"mode": "pointwise", "tau": r.tau, "min_value": r.min_value,
                   "reversible": bool(r.reversible), "K1": matrix_to_json(r.K1),
                   "K2": matrix_to_json(r.K2)}
    except ConfigError:
        raise
    except ValueError as exc:
        raise ConfigError("hamiltonian", str(exc)) from None
    write_json(args.out, out)
    return EXIT_OK


def cmd_rank1(args) -> int:
    from .apps.tensors import Tensor, best_rank1
    from .errors import DimensionError
    try:
        data = tensor_from_json(read_json(args.tensor))
        res = best_rank1(Tensor.from_array(data), restarts=args.restarts, seed=args.seed)
    except (FormatError, DimensionError) as exc:
        raise ConfigError("tensor", str(exc)) from None
    out = {
        "dims": list(data.shape),
        "coefficient": _complex_json(res.coefficient),
        "factors": [{"re": f.real.tolist(), "im": f.imag.tolist()} for f in res.factors],
        "overlap": res.overlap,
        "residual_sq": res.residual_sq,
        "delta": res.delta,
        "converged": res.converged,
        "restarts": args.restarts,
    }
    if args.oracle:
        from .oracles import hopm
        h = hopm(data)
        out["hopm"] = {"overlap": h.overlap, "residual_sq": h.residual_sq,
                       "sweeps": len(h.history)}
    write_json(args.out, out)
    return EXIT_OK if res.converged else EXIT_NOT_CONVERGED


def cmd_controllability(args) -> int:
    raw = read_json(args.generators)
    if isinstance(raw, dict):
        raw = raw.get("generators")
    if not isinstance(raw, list):
        raise ConfigError("generators", "expected a list of matrices")
    if not raw:
        raise ConfigError("generators", "empty generator list")
    gens = []
    for i, obj in enumerate(raw):
        try:
            G = matrix_from_json(obj, f"generators[{i}]")
        except FormatError as exc:
            raise ConfigError("generators", str(exc)) from None
        if G.shape != (G.shape[0], G.shape[0]) or (gens and G.shape != gens[0].shape):
            raise ConfigError("generators", f"generators[{i}] has shape {G.shape}")
        scale = max(1.0, np.linalg.norm(G))
        if np.linalg.norm(G + G.conj().T) <= 1e-10 * scale:
            gens.append(G)
        elif np.linalg.norm(G - G.conj().T) <= 1e-10 * scale:
            gens.append(1j * G)  # Hermitian Hamiltonian term
        else:
            raise ConfigError("generators", f"generators[{i}] is neither skew-Hermitian nor Hermitian")
    res = lie_closure(np.array(gens))
    write_json(args.out, {"N": int(gens[0].shape[0]), "dimension": res.dimension,
                          "full": bool(res.full)})
    return EXIT_OK


# ---------------------------------------------------------------------------
# entry point


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="uflow", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, seed=True):
        sp.add_argument("-o", "--out", default="-", help="output file ('-' for stdout)")
        sp.add_argument("--jobs", type=int, default=1, help="worker processes (UFLOW_JOBS overrides)")
        if seed:
            sp.add_argument("--seed", type=int, default=0)

    for name, fn, text in (("flow", cmd_flow, "run a gradient flow from a JSON config"),
                           ("dbflow", cmd_dbflow, "run a double-bracket flow (kind U1P or U1KP)")):
        sp = sub.add_parser(name, help=text)
        sp.add_argument("config")
        sp.add_argument("--trace", help="write the best run's trace CSV here")
        common(sp, seed=False)
        sp.set_defaults(func=fn)

    sp = sub.add_parser("sweep", help="entanglement distance along a state family")
    sp.add_argument("--family", choices=("3q", "4q"), required=True)
    sp.add_argument("--s-min", type=float, default=0.0)
    sp.add_argument("--s-max", type=float, default=1.0)
    sp.add_argument("--steps", type=int, default=21)
    sp.add_argument("--restarts", type=int, default=20)
    common(sp)
    sp.set_defaults(func=cmd_sweep)

    sp = sub.add_parser("reversibility", help="local time reversal of a Hamiltonian")
    sp.add_argument("hamiltonian")
    sp.add_argument("--mode", choices=("joint", "pointwise"), default="joint")
    sp.add_argument("--tau", type=float)
    sp.add_argument("--restarts", type=int, default=20)
    common(sp)
    sp.set_defaults(func=cmd_reversibility)

    sp = sub.add_parser("rank1", help="best rank-1 approximation of a tensor")
    sp.add_argument("tensor")
    sp.add_argument("--restarts", type=int, default=20)
    sp.add_argument("--oracle", action="store_true", help="also run the power method")
    common(sp)
    sp.set_defaults(func=cmd_rank1)

    sp = sub.add_parser("controllability", help="dimension of the Lie closure of generators")
    sp.add_argument("generators")
    common(sp, seed=False)
    sp.set_defaults(func=cmd_controllability)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ConfigError, FormatError) as exc:
        print(f"uflow {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except IntegrityError as exc:
        print(f"uflow {args.command}: invariant violated: {exc}", file=sys.stderr)
        return EXIT_INTEGRITY


if __name__ == "__main__":
    sys.exit(main())
