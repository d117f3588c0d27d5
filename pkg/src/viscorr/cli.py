"""Command-line front end.

Exit codes: 0 success (and every check passed), 1 a check failed, 2 bad
input.  Every report echoes its inputs so re-running them reproduces it.

Builtin states (``--state``)::

    bell:I                 Bell state I in 0..3 (Φ+, Φ-, Ψ+, Ψ-)
    werner:P               P |Φ+><Φ+| + (1-P) I/4
    cc-uniform:DA,DB       uniform classical-classical state
    mixed:DA,DB            maximally mixed state
    product:DA,DB          |00>
    schmidt:L1,L2,...      sum_i sqrt(L_i) |ii>
    random:DA,DB[,rank=R][,seed=S]   induced-measure mixed state
    random-pure:DA,DB[,seed=S]

Anything else is read as a path to a state JSON file.
"""

import argparse
import csv
import io
import json
import sys
from pathlib import Path

import numpy as np

from . import _jsonio
from .channels import MeasurementBasis, dephase_full, load_basis
from .estimators import (
    DEFAULT_SAMPLES,
    DEFAULT_SIGMA,
    TheoremCheck,
    entanglement_from_visibility,
    mc_avg_sq_visibility,
    mc_avg_sq_visibility_local,
    verify_ef_bound,
    verify_noisy_theorem,
    verify_theorem1,
)
from .haar import HaarSampler, m_operator_error
from .linalg import DensityValidationError, density_violations, purity
from .measures import (
    UndefinedPhaseError,
    complementarity_report,
    concurrence,
    ef_visibility_bound,
    linear_entanglement,
    purity_ratio_check,
    q_disturbance,
    q_disturbance_noisy,
    relative_phase,
    schmidt,
    visibility,
)
from .states import (
    PureState,
    StateFileError,
    as_bipartite,
    bell_state,
    classical_classical,
    maximally_mixed,
    product_state,
    random_density,
    random_pure,
    schmidt_state,
    state_from_dict,
    state_to_dict,
    werner,
)

PAULI = {
    "I": np.eye(2),
    "X": np.array([[0, 1], [1, 0]]),
    "Y": np.array([[0, -1j], [1j, 0]]),
    "Z": np.diag([1, -1]),
}

# tolerance on lhs <= 1 for the squared-Q complementarity chain
_COMPLEMENTARITY_SLACK = 1e-10


class UsageError(Exception):
    """Bad command-line input; maps to exit code 2."""


# --- input parsing ------------------------------------------------------------

def _split_params(text):
    pos, kw = [], {}
    for tok in filter(None, (t.strip() for t in text.split(","))):
        if "=" in tok:
            k, v = tok.split("=", 1)
            kw[k.strip()] = v.strip()
        else:
            pos.append(tok)
    return pos, kw


def _dims(pos, name):
    if len(pos) != 2:
        raise UsageError(f"{name} needs two dimensions, e.g. {name}:2,2")
    return int(pos[0]), int(pos[1])


def parse_state(spec):
    """Resolve a ``--state`` value to a :class:`PureState` or
    :class:`BipartiteState`."""
    name, _, params = spec.partition(":")
    try:
        pos, kw = _split_params(params)
        if name == "bell":
            return bell_state(int(pos[0]) if pos else 0)
        if name == "werner":
            return werner(float(pos[0]))
        if name == "cc-uniform":
            d_a, d_b = _dims(pos, name)
            return classical_classical(np.full((d_a, d_b), 1.0 / (d_a * d_b)))
        if name == "mixed":
            return maximally_mixed(_dims(pos, name))
        if name == "product":
            d_a, d_b = _dims(pos, name)
            return product_state(np.eye(d_a)[0], np.eye(d_b)[0])
        if name == "schmidt":
            return schmidt_state([float(x) for x in pos])
        if name == "random":
            dims = _dims(pos, name)
            return random_density(dims, int(kw.get("rank", dims[0] * dims[1])),
                                  int(kw.get("seed", 0)))
        if name == "random-pure":
            return random_pure(_dims(pos, name), int(kw.get("seed", 0)))
    except (IndexError, ValueError) as exc:
        if isinstance(exc, DensityValidationError):
            raise
        raise UsageError(f"bad state spec {spec!r}: {exc}") from None
    path = Path(spec)
    if not path.is_file():
        raise UsageError(f"unknown builtin state or missing file: {spec!r}")
    try:
        obj = json.loads(path.read_text())
    except json.JSONDecodeError as exc:
        raise StateFileError(f"{spec}: not valid JSON ({exc})") from None
    return state_from_dict(obj)


def parse_unitary(spec, dim, seed):
    """``identity``, ``haar[:INDEX]``, ``pauli:XZ..`` or a JSON file with
    ``re``/``im`` arrays."""
    if spec in (None, "haar") or spec.startswith("haar:"):
        index = int(spec.split(":", 1)[1]) if spec and ":" in spec else 0
        return HaarSampler(dim, seed, stream=7).sample(index)
    if spec == "identity":
        return np.eye(dim, dtype=complex)
    if spec.startswith("pauli:"):
        u = np.ones((1, 1))
        for letter in spec.split(":", 1)[1].upper():
            if letter not in PAULI:
                raise UsageError(f"unknown Pauli letter {letter!r}")
            u = np.kron(u, PAULI[letter])
        if u.shape[0] != dim:
            raise UsageError(f"{spec} has dimension {u.shape[0]}, state has {dim}")
        return u.astype(complex)
    path = Path(spec)
    if not path.is_file():
        raise UsageError(f"unknown unitary spec or missing file: {spec!r}")
    obj = json.loads(path.read_text())
    u = np.asarray(obj["re"], dtype=float) + 1j * np.asarray(obj["im"], dtype=float)
    return MeasurementBasis(dim, u).matrix()


def _need_pure(state, command):
    if not isinstance(state, PureState):
        raise UsageError(f"{command} needs a pure state")
    return state


# --- commands -----------------------------------------------------------------

def _bases(args, state):
    d_a, d_b = state.dims
    return load_basis(args.basis_a, d_a), load_basis(args.basis_b, d_b)


def _epsilon(args):
    if args.epsilon is None:
        raise UsageError("--epsilon is required")
    return args.epsilon


def cmd_validate(args):
    state = parse_state(args.state)
    rho = as_bipartite(state).rho
    bad = density_violations(rho)
    return {"valid": not bad, "violations": bad, "dims": list(state.dims),
            "purity": purity(rho)}, (None if not bad else False)


def cmd_visibility(args):
    state = as_bipartite(parse_state(args.state))
    u = parse_unitary(args.unitary, state.dim, args.seed)
    v = visibility(state.rho, u)
    return {"visibility": v, "squared_visibility": v**2}, None


def cmd_phase(args):
    state = as_bipartite(parse_state(args.state))
    u = parse_unitary(args.unitary, state.dim, args.seed)
    return {"phase": relative_phase(state.rho, u), "visibility": visibility(state.rho, u)}, None


def cmd_q(args):
    state = parse_state(args.state)
    ba, bb = _bases(args, state)
    q = q_disturbance(state, ba, bb)
    return {"q": q, "q_squared": q**2}, None


def cmd_q_noisy(args):
    state = parse_state(args.state)
    ba, bb = _bases(args, state)
    eps = _epsilon(args)
    q = q_disturbance(state, ba, bb)
    return {"q_noisy": q_disturbance_noisy(state, eps, ba, bb), "q": q,
            "epsilon_times_q": eps * q}, None


def cmd_dephase(args):
    state = parse_state(args.state)
    ba, bb = _bases(args, state)
    return {"state": state_to_dict(dephase_full(state, ba, bb))}, None


def cmd_schmidt(args):
    psi = _need_pure(parse_state(args.state), "schmidt")
    return schmidt(psi).to_dict(), None


def cmd_entanglement(args):
    psi = _need_pure(parse_state(args.state), "entanglement")
    return {"linear_entanglement": linear_entanglement(psi)}, None


def cmd_concurrence(args):
    psi = _need_pure(parse_state(args.state), "concurrence")
    return {"concurrence": concurrence(psi)}, None


def cmd_ef_bound(args):
    state = as_bipartite(parse_state(args.state))
    avg = mc_avg_sq_visibility(state.reduced("A"), args.samples, args.seed, args.workers)
    rep = verify_ef_bound(state, args.decompositions, args.seed)
    out = rep.to_dict()
    out.update({
        "bound_closed_form": ef_visibility_bound(state),
        "bound_monte_carlo": ef_visibility_bound(state, avg.mean),
        "bound_monte_carlo_std_error": state.dims[0] * avg.std_error,
    })
    return out, rep.satisfied


def cmd_complementarity(args):
    state = parse_state(args.state)
    rep = complementarity_report(state, load_basis(args.basis_a, state.dims[0]))
    out = rep.to_dict()
    return out, rep.lhs_q_squared <= 1.0 + _COMPLEMENTARITY_SLACK


def cmd_purity_ratio(args):
    ratio, ok = purity_ratio_check(parse_state(args.state))
    return {"ratio": ratio, "within_bounds": ok}, ok


def _estimate_check(est, args):
    chk = TheoremCheck.compare(est, est.exact_value, args.sigma)
    return chk.to_dict(), chk.passed


def cmd_avg_visibility(args):
    state = as_bipartite(parse_state(args.state))
    return _estimate_check(mc_avg_sq_visibility(state.rho, args.samples, args.seed,
                                                args.workers), args)


def cmd_avg_visibility_local(args):
    state = parse_state(args.state)
    return _estimate_check(mc_avg_sq_visibility_local(state, args.samples, args.seed,
                                                      args.workers), args)


def cmd_theorem1(args):
    state = parse_state(args.state)
    ba, bb = _bases(args, state)
    chk = verify_theorem1(state, ba, bb, args.samples, args.seed, args.sigma,
                          args.paired, args.workers)
    return chk.to_dict(), chk.passed


def cmd_noisy_theorem(args):
    state = parse_state(args.state)
    ba, bb = _bases(args, state)
    chk = verify_noisy_theorem(state, _epsilon(args), ba, bb, args.samples, args.seed,
                               args.sigma, args.paired, args.workers)
    return chk.to_dict(), chk.passed


def cmd_entanglement_from_visibility(args):
    psi = _need_pure(parse_state(args.state), "entanglement-from-visibility")
    res = entanglement_from_visibility(psi, args.samples, args.seed, args.sigma, args.workers)
    out = {"entanglement": res.entanglement.to_dict(),
           "concurrence": res.concurrence.to_dict(),
           "avg_sq_visibility": res.avg_sq_visibility.to_dict()}
    return out, res.entanglement.passed and res.concurrence.passed


def cmd_verify_swap(args):
    dim = args.dim
    if dim is None:
        dim = as_bipartite(parse_state(args.state)).dim if args.state else 2
    err = m_operator_error(HaarSampler(dim, args.seed), args.samples)
    ok = err <= args.tolerance
    return {"dim": dim, "hs_error": err, "tolerance": args.tolerance, "pass": ok}, ok


def _parse_grid(text):
    if text is None:
        raise UsageError("--values is required")
    try:
        grid = [float(x) for x in text.split(",") if x.strip()]
    except ValueError as exc:
        raise UsageError(f"bad --values: {exc}") from None
    if not grid:
        raise UsageError("empty parameter grid")
    return grid


def cmd_sweep(args):
    grid = _parse_grid(args.values)
    rows = []
    for x in grid:
        if args.over == "epsilon":
            state = parse_state(args.state)
            ba, bb = _bases(args, state)
            chk = verify_noisy_theorem(state, x, ba, bb, args.samples, args.seed,
                                       args.sigma, args.paired, args.workers)
            q_val = q_disturbance_noisy(state, x, ba, bb)
        else:
            state = werner(x)
            ba, bb = _bases(args, state)
            chk = verify_theorem1(state, ba, bb, args.samples, args.seed, args.sigma,
                                  args.paired, args.workers)
            q_val = q_disturbance(state, ba, bb)
        rows.append({
            args.over: x,
            "estimate": chk.estimated.mean,
            "std_error": chk.estimated.std_error,
            "predicted": chk.predicted,
            "sigma_distance": chk.sigma_distance,
            "q": q_val,
            "pass": chk.passed,
        })
    return {"rows": rows}, all(r["pass"] for r in rows)


COMMANDS = {
    "validate": cmd_validate,
    "visibility": cmd_visibility,
    "phase": cmd_phase,
    "q": cmd_q,
    "q-noisy": cmd_q_noisy,
    "dephase": cmd_dephase,
    "schmidt": cmd_schmidt,
    "entanglement": cmd_entanglement,
    "concurrence": cmd_concurrence,
    "ef-bound": cmd_ef_bound,
    "complementarity": cmd_complementarity,
    "purity-ratio": cmd_purity_ratio,
    "avg-visibility": cmd_avg_visibility,
    "avg-visibility-local": cmd_avg_visibility_local,
    "theorem1": cmd_theorem1,
    "noisy-theorem": cmd_noisy_theorem,
    "entanglement-from-visibility": cmd_entanglement_from_visibility,
    "verify-swap": cmd_verify_swap,
    "sweep": cmd_sweep,
}

# commands that run without --state
_STATELESS = {"verify-swap"}


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--state", help="builtin state spec or state JSON file")
    common.add_argument("--basis-a", default="computational")
    common.add_argument("--basis-b", default="computational")
    common.add_argument("--epsilon", type=float)
    common.add_argument("--samples", type=int, default=DEFAULT_SAMPLES)
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--sigma", type=float, default=DEFAULT_SIGMA)
    common.add_argument("--output", choices=["json", "csv"], default="json")
    common.add_argument("--paired", dest="paired", action="store_true", default=True)
    common.add_argument("--unpaired", dest="paired", action="store_false")
    common.add_argument("--workers", type=int, default=1)
    common.add_argument("--unitary", help="identity, haar[:INDEX], pauli:XZ.. or JSON file")
    common.add_argument("--dim", type=int, help="dimension for verify-swap")
    common.add_argument("--tolerance", type=float, default=0.05)
    common.add_argument("--decompositions", type=int, default=50)
    common.add_argument("--over", choices=["epsilon", "werner"], default="epsilon")
    common.add_argument("--values", help="comma-separated sweep grid")

    parser = argparse.ArgumentParser(
        prog="viscorr",
        description="Interference visibility, measurement disturbance and entanglement.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        sub.add_parser(name, parents=[common])
    return parser


def _check_config(args):
    if args.samples < 2:
        raise UsageError("--samples must be >= 2")
    if args.sigma <= 0:
        raise UsageError("--sigma must be > 0")
    if args.epsilon is not None and not 0.0 <= args.epsilon <= 1.0:
        raise UsageError("--epsilon must lie in [0, 1]")
    if args.state is None and args.command not in _STATELESS and not (
            args.command == "sweep" and args.over == "werner"):
        raise UsageError(f"{args.command} needs --state")


def _inputs(args):
    keys = ["state", "basis_a", "basis_b", "epsilon", "samples", "seed", "sigma",
            "paired", "workers", "unitary", "dim", "tolerance", "decompositions",
            "over", "values"]
    return {k: getattr(args, k) for k in keys}


def _flatten(obj, out, prefix=""):
    for k, v in obj.items():
        key = prefix + k
        if isinstance(v, dict):
            _flatten(v, out, key + ".")
        elif isinstance(v, (list, tuple)):
            out[key] = _jsonio.dumps(v)
        else:
            out[key] = v


def _csv_cell(v):
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float):
        return _jsonio.fmt_float(v)
    return "" if v is None else str(v)


def to_csv(report):
    result = report["result"]
    base = {"command": report["command"]}
    base.update(report["inputs"])
    if "rows" in result:
        rows = [dict(base, **r) for r in result["rows"]]
    else:
        flat = {}
        _flatten(result, flat)
        rows = [dict(base, **flat)]
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=list(rows[0]), lineterminator="\n")
    writer.writeheader()
    for r in rows:
        writer.writerow({k: _csv_cell(v) for k, v in r.items()})
    return buf.getvalue()


def run(args):
    """Execute parsed ``args``; return ``(exit_code, report)``."""
    try:
        _check_config(args)
        result, passed = COMMANDS[args.command](args)
    except DensityValidationError as exc:
        return 2, {"command": args.command, "inputs": _inputs(args),
                   "error": str(exc), "violations": exc.violations}
    except (UsageError, StateFileError, UndefinedPhaseError, ValueError, OSError) as exc:
        return 2, {"command": args.command, "inputs": _inputs(args), "error": str(exc)}
    report = {"command": args.command, "inputs": _inputs(args), "result": result,
              "pass": passed}
    if args.command == "validate" and passed is False:
        return 2, report
    return (1 if passed is False else 0), report


def main(argv=None, stdout=None):
    stdout = sys.stdout if stdout is None else stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code else 0
    code, report = run(args)
    if args.output == "csv" and "result" in report:
        stdout.write(to_csv(report))
    else:
        stdout.write(_jsonio.dumps(report, indent=2) + "\n")
    return code


if __name__ == "__main__":
    sys.exit(main())
