"""Batch driver: one JSON job spec, one pipeline, deterministic artifacts.

Usage::

    mixedspec <subcommand> [--spec job.json] [--out DIR] [--seed N] [--threads N]

Exit status is 0 on success, 2 when the job spec is invalid and 3 when the
numerics fail (a diagnostic ``error.json`` is written in that case).
"""
from __future__ import annotations

import argparse
import ast
import copy
import json
import sys
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

import jsonschema
import numpy as np

from . import io
from .bmdensity import (IndexSet, IntervalSystem, UncertaintyModel, admissible_subsequence_search,
                        borg_uncertainty_verdict, completeness_radius, density_complement_check,
                        dprime_interior_density, exterior_density, interior_density, uncertainty_size)
from .errors import SpectralError
from .evenchar import even_masses
from .glinverse import reconstruct_from_measure, reconstruct_from_two_spectra, refill_spectrum
from .herglotz import (SpectralMeasure, gap_from_decay, kernel, krein_shift_of_measure,
                       krein_shift_of_operator, masses_from_two_spectra, verify_exponential_identity)
from .pairs import (IndeterminatePair, PWComplementFunction, condition_free_demo, indeterminate_pair,
                    pw_complement_pair, symmetric_pair, uniqueness_probe, verify_pair)
from .sturm import BoundaryPair, Potential, SpectralSequence, eigenvalues, norming_masses, shoot

EXIT_OK, EXIT_SCHEMA, EXIT_NUMERIC = 0, 2, 3


class SchemaError(Exception):
    """The job spec is malformed or refers to missing inputs."""


# ------------------------------------------------------------------ schema

_NUM = {"type": "number"}
_POS = {"type": "number", "exclusiveMinimum": 0}
_INT = {"type": "integer", "minimum": 1}
_FRACTION = {"type": "number", "exclusiveMinimum": 0, "exclusiveMaximum": 0.5}

POTENTIAL_SCHEMA = {
    "type": "object",
    "properties": {
        "expr": {"type": "string"},
        "samples": {"type": "array", "items": _NUM, "minItems": 5},
        "file": {"type": "string"},
        "grid": {"type": "integer", "minimum": 17},
    },
    "additionalProperties": False,
    "oneOf": [{"required": ["expr"]}, {"required": ["samples"]}, {"required": ["file"]}],
}
SEQUENCE_SCHEMA = {
    "type": "object",
    "properties": {"values": {"type": "array", "items": _POS, "minItems": 2},
                   "bc": {"enum": [b.value for b in BoundaryPair]}},
    "required": ["values", "bc"],
    "additionalProperties": False,
}
MEASURE_SCHEMA = {
    "type": "object",
    "properties": {"lam": {"type": "array", "items": _POS, "minItems": 2},
                   "alpha": {"type": "array", "items": _POS, "minItems": 3},
                   "side": {"enum": ["left", "right"]}},
    "required": ["lam", "alpha"],
    "additionalProperties": False,
}
INDEX_SET_SCHEMA = {
    "type": "object",
    "properties": {"period": _INT, "residues": {"type": "array", "items": {"type": "integer"}},
                   "members": {"type": "array", "items": {"type": "integer"}}, "N": _INT},
    "additionalProperties": False,
    "oneOf": [{"required": ["period", "residues"]}, {"required": ["members"]}],
}
RULE_SCHEMA = {"type": "object", "properties": {"kind": {"enum": ["constant", "power", "exponential",
                                                                  "stretched", "residue"]}},
               "required": ["kind"]}

# parameters and their defaults for every subcommand
DEFAULTS = {
    "solve": {"z": [1.0, 5.0, 10.0]},
    "spectra": {"bc": "DD", "count": 20},
    "measure": {"count": 40, "side": "right"},
    "krein": {"count": 40},
    "two-spectra": {"count": 40},
    "reconstruct": {"count": 60, "modes": 40, "grid": 256, "side": "left"},
    "gap": {"count": 200, "side": "left", "y_min": 0.25, "y_max": 40.0, "y_points": 160},
    "density": {"N": 4096},
    "uncertainty": {"N": 4096, "method": "analytic"},
    "pair-make": {"a": 0.3, "b": 0.3, "window": 200, "amplitude": 0.5, "g_strength": 0.05},
    "pair-verify": {"tol": 1e-2, "reconstruct": False, "modes": 120, "grid": 512},
    "probe-unique": {"a": 0.2, "window": 200, "starts": 4},
    "demo-borg": {"count": 60, "modes": 40, "grid": 256, "refill": 1},
    "demo-symmetric": {"eps": 0.1, "amplitude": 1.0, "count": 20},
    "demo-condition-free": {"eps": 0.2, "count": 30},
}
PARAM_TYPES = {
    "z": {"type": "array", "items": {"oneOf": [_NUM, {"type": "array", "items": _NUM,
                                                       "minItems": 2, "maxItems": 2}]}},
    "bc": {"enum": [b.value for b in BoundaryPair]},
    "count": {"type": "integer", "minimum": 2},
    "side": {"enum": ["left", "right"]},
    "modes": {"type": "integer", "minimum": 4},
    "grid": {"type": "integer", "minimum": 16},
    "y_min": _POS, "y_max": _POS, "y_points": {"type": "integer", "minimum": 5},
    "N": _INT, "method": {"enum": ["analytic", "window"]},
    "a": _FRACTION, "b": _FRACTION, "eps": _FRACTION,
    "window": {"type": "integer", "minimum": 10},
    "amplitude": _POS, "g_strength": {"type": "number", "exclusiveMinimum": 0, "exclusiveMaximum": 1},
    "tol": _POS, "reconstruct": {"type": "boolean"}, "starts": _INT, "refill": _INT,
}
INPUTS = {
    "potential": POTENTIAL_SCHEMA, "potential_tilde": POTENTIAL_SCHEMA, "dd": SEQUENCE_SCHEMA,
    "dn": SEQUENCE_SCHEMA, "measure": MEASURE_SCHEMA, "index_set": INDEX_SET_SCHEMA,
    "model": RULE_SCHEMA, "intervals": {"type": "object"}, "pair": {"type": ["string", "object"]},
}


def job_schema(sub: str) -> dict:
    params = {"type": "object", "additionalProperties": False,
              "properties": {k: PARAM_TYPES[k] for k in DEFAULTS[sub]}}
    return {
        "type": "object",
        "additionalProperties": False,
        "properties": {"subcommand": {"const": sub}, "params": params,
                       "sweep": {"type": "array", "items": params, "minItems": 1}, **INPUTS},
    }


# ------------------------------------------------------------ descriptors

_ALLOWED_CALLS = {"sin", "cos", "tan", "exp", "log", "sqrt", "abs", "where", "sinh", "cosh", "tanh",
                  "minimum", "maximum", "heaviside"}
_ALLOWED_NAMES = _ALLOWED_CALLS | {"x", "pi", "e"}


def _check_expression(expr: str):
    try:
        tree = ast.parse(expr, mode="eval")
    except SyntaxError as exc:
        raise SchemaError(f"potential expression does not parse: {exc}") from None
    allowed = (ast.Expression, ast.BinOp, ast.UnaryOp, ast.Call, ast.Name, ast.Load, ast.Constant,
               ast.Compare, ast.operator, ast.unaryop, ast.cmpop)
    for node in ast.walk(tree):
        if not isinstance(node, allowed):
            raise SchemaError(f"disallowed syntax in potential expression: {type(node).__name__}")
        if isinstance(node, ast.Name) and node.id not in _ALLOWED_NAMES:
            raise SchemaError(f"unknown name {node.id!r} in potential expression")
        if isinstance(node, ast.Call) and not (isinstance(node.func, ast.Name) and node.func.id in _ALLOWED_CALLS):
            raise SchemaError("only elementary functions may be called in potential expressions")
    return compile(tree, "<potential>", "eval")


def load_potential(desc: dict, base: Path) -> Potential:
    grid = desc.get("grid", 1025)
    if "expr" in desc:
        code = _check_expression(desc["expr"])
        x = np.linspace(0.0, 1.0, grid)
        env = {name: getattr(np, name) for name in _ALLOWED_CALLS if name != "abs"}
        env.update({"abs": np.abs, "x": x, "pi": np.pi, "e": np.e})
        values = eval(code, {"__builtins__": {}}, env)  # names and calls vetted above
        return Potential(np.broadcast_to(np.asarray(values, dtype=float), x.shape).copy(), desc["expr"])
    if "samples" in desc:
        return Potential(np.asarray(desc["samples"], dtype=float))
    data = _read_input(base, desc["file"])
    if isinstance(data, dict) and "samples" in data:
        data = data["samples"]
    return Potential(np.asarray(data, dtype=float))


def _read_input(base: Path, name: str):
    path = (base / name) if not Path(name).is_absolute() else Path(name)
    if not path.exists():
        raise SchemaError(f"referenced file not found: {path}")
    try:
        return io.read_json(path)
    except json.JSONDecodeError as exc:
        raise SchemaError(f"{path} is not valid JSON: {exc}") from None


def load_sequence(desc: dict) -> SpectralSequence:
    bc = BoundaryPair(desc["bc"])
    return SpectralSequence(np.asarray(desc["values"], dtype=float), bc == BoundaryPair.DD, bc)


def load_measure(desc: dict) -> SpectralMeasure:
    lam, alpha = np.asarray(desc["lam"], float), np.asarray(desc["alpha"], float)
    if alpha.size != lam.size + 1:
        raise SchemaError("measure needs one mass per eigenvalue plus the mass at 0")
    return SpectralMeasure.from_positive(lam, alpha, {"side": desc.get("side", "left"), "source": "input"})


def _require(job: dict, *keys):
    missing = [k for k in keys if k not in job]
    if missing:
        raise SchemaError(f"missing input(s): {', '.join(missing)}")


# --------------------------------------------------------------- pipelines

def _sequence_rows(seq: SpectralSequence):
    return [(n, v, r) for n, v, r in zip(range(1, len(seq) + 1), seq.positive, seq.residuals())]


def run_solve(job, p, ctx):
    _require(job, "potential")
    q = ctx.potential("potential")
    zs = np.array([complex(*z) if isinstance(z, list) else complex(z) for z in p["z"]])
    vals, _ = shoot(q, zs)
    det = vals[:, 0] * vals[:, 3] - vals[:, 1] * vals[:, 2]
    rows = [(z.real, z.imag, *(v.real for v in row[:4])) for z, row in zip(zs, vals)]
    result = {"z": zs, "u": vals[:, 0], "u_prime": vals[:, 1], "c": vals[:, 2], "c_prime": vals[:, 3],
              "det_defect": float(np.max(np.abs(det + 1.0)))}
    return result, {"solutions": (["re_z", "im_z", "u", "u_prime", "c", "c_prime"], rows)}


def run_spectra(job, p, ctx):
    _require(job, "potential")
    seq = eigenvalues(ctx.potential("potential"), p["bc"], p["count"])
    return ({"bc": p["bc"], "eigenvalues": seq.positive, "has_zero": seq.has_zero},
            {"spectrum": (["n", "lambda", "residual"], _sequence_rows(seq))})


def _measure_from_potential(q, count, side):
    seq = eigenvalues(q, BoundaryPair.DD, count)
    return norming_masses(q, seq, side)


def run_measure(job, p, ctx):
    _require(job, "potential")
    mu = _measure_from_potential(ctx.potential("potential"), p["count"], p["side"])
    rows = [(n, lam, a) for n, lam, a in zip(range(len(mu.lam) + 1), np.r_[0.0, mu.lam], mu.alpha)]
    return ({"side": p["side"], "lam": mu.lam, "alpha": mu.alpha},
            {"masses": (["n", "lambda", "alpha"], rows)})


def run_krein(job, p, ctx):
    _require(job, "potential")
    q = ctx.potential("potential")
    dd = eigenvalues(q, BoundaryPair.DD, p["count"])
    dn = eigenvalues(q, BoundaryPair.DN, p["count"])
    k = krein_shift_of_operator(dd, dn)
    mu = norming_masses(q, dd, "right")
    identity = verify_exponential_identity(mu, k)
    k_meas = krein_shift_of_measure(mu)
    inner = np.asarray(k.intervals)
    rows = [(a, b) for a, b in inner]
    return ({"intervals": inner, "identity": identity,
             "measure_route_max_deviation": _interval_deviation(k_meas, k, p["count"] // 2)},
            {"krein_intervals": (["start", "end"], rows)})


def _interval_deviation(k1, k2, count):
    a = np.asarray(k1.intervals)
    b = np.asarray(k2.intervals)
    ends_a = a[(a[:, 0] >= 0)][:count, 1]
    ends_b = b[(b[:, 0] >= 0)][:count, 1]
    m = min(ends_a.size, ends_b.size)
    return float(np.max(np.abs(ends_a[:m] - ends_b[:m]))) if m else float("nan")


def run_two_spectra(job, p, ctx):
    if "dd" in job and "dn" in job:
        dd, dn = load_sequence(job["dd"]), load_sequence(job["dn"])
        q = None
    else:
        _require(job, "potential")
        q = ctx.potential("potential")
        dd = eigenvalues(q, BoundaryPair.DD, p["count"] + 1)
        dn = eigenvalues(q, BoundaryPair.DN, p["count"])
    mu = masses_from_two_spectra(dd, dn)
    result = {"lam": mu.lam, "alpha": mu.alpha}
    if q is not None:
        direct = norming_masses(q, SpectralSequence(mu.lam, True, BoundaryPair.DD), "right")
        result["max_rel_error_vs_direct"] = float(np.max(np.abs(mu.alpha[1:] / direct.alpha[1:] - 1)))
    rows = [(n, lam, a) for n, lam, a in zip(range(len(mu.lam) + 1), np.r_[0.0, mu.lam], mu.alpha)]
    return result, {"masses": (["n", "lambda", "alpha"], rows)}


def _reconstruction_tables(rep, q_true=None):
    x = rep.potential.x
    header = ["x", "q"]
    cols = [x, rep.potential.samples]
    if q_true is not None:
        header.append("q_true")
        cols.append(q_true(x))
    return {"potential": (header, list(zip(*cols)))}


def run_reconstruct(job, p, ctx):
    q = None
    if "measure" in job:
        mu = load_measure(job["measure"])
    else:
        _require(job, "potential")
        q = ctx.potential("potential")
        mu = _measure_from_potential(q, p["count"], p["side"])
    rep = reconstruct_from_measure(mu, p["grid"], p["modes"], side=p["side"])
    result = rep.to_dict()
    if q is not None:
        x = rep.potential.x
        result["l2_error"] = float(np.sqrt(np.trapezoid((rep.potential.samples - q(x)) ** 2, x)))
    return result, _reconstruction_tables(rep, q)


def run_gap(job, p, ctx):
    _require(job, "potential", "potential_tilde")
    q1, q2 = ctx.potential("potential"), ctx.potential("potential_tilde")
    m1 = _measure_from_potential(q1, p["count"], p["side"]).truncated(p["count"])
    m2 = _measure_from_potential(q2, p["count"], p["side"]).truncated(p["count"])
    d = m1 - m2
    ys = np.linspace(p["y_min"], p["y_max"], p["y_points"])
    rep = gap_from_decay(d, ys)
    h = (kernel(d.support[None, :], 1j * ys[:, None]) * d.masses[None, :]).sum(axis=1) / np.pi
    rows = list(zip(ys, np.log(np.abs(h) + 1e-300)))
    return {"gap": rep.to_dict(), "atoms": len(d)}, {"decay": (["y", "log_abs_H"], rows)}


def _index_set(desc, N):
    if "period" in desc:
        return IndexSet.periodic(desc["period"], desc["residues"], desc.get("N", N))
    return IndexSet(np.unique(np.asarray(desc["members"], dtype=np.int64)), desc.get("N", N))


def run_density(job, p, ctx):
    _require(job, "index_set")
    s = _index_set(job["index_set"], p["N"])
    inner, outer, dprime = interior_density(s), exterior_density(s), dprime_interior_density(s)
    result = {"interior": inner.to_dict(), "exterior": outer.to_dict(), "dprime_interior": dprime.to_dict(),
              "completeness_radius": completeness_radius(s), "complement": density_complement_check(s)}
    rows = [(k, v) for k, v in (inner.sweep or [])] if inner.sweep else []
    return result, {"density_sweep": (["length", "estimate"], rows)}


def run_uncertainty(job, p, ctx):
    if "intervals" in job:
        iv = job["intervals"]
        try:
            system = IntervalSystem(np.asarray(iv["starts"]), np.asarray(iv["ends"]), iv.get("tail", {"kind": "none"}))
        except (KeyError, ValueError) as exc:
            raise SchemaError(f"invalid interval system: {exc}") from None
        verdict, info = borg_uncertainty_verdict(system, p["N"])
        return {"unique": verdict, **info}, {}
    _require(job, "model")
    model = UncertaintyModel(job["model"], p["N"])
    sigma, est = admissible_subsequence_search(model, p["method"])
    u = uncertainty_size(model, p["method"])
    n = np.arange(1, 65)
    rows = list(zip(n, model.log_eps(n)))
    return ({"U": u, "admissible_density": est.to_dict(), "admissible_period": sigma.period,
             "admissible_residues": list(sigma.residues or [])},
            {"log_eps": (["n", "log_eps"], rows)})


def _pair_lams(job, ctx, window):
    if "potential" in job:
        return eigenvalues(ctx.potential("potential"), BoundaryPair.DD, 2 * window).positive
    return np.pi * np.arange(1, 2 * window + 1)


def run_pair_make(job, p, ctx):
    lams = _pair_lams(job, ctx, p["window"])
    gam = even_masses(lams)
    f, g = pw_complement_pair(lams, p["a"], p["b"], ctx.seed, p["window"], p["amplitude"], p["g_strength"])
    pair = indeterminate_pair(lams, gam, f, g)
    report = verify_pair(pair)
    rows = [(n, lam, a, at) for n, lam, a, at in zip(range(len(pair.mu.lam) + 1), np.r_[0.0, pair.mu.lam],
                                                     pair.mu.alpha, pair.mu_tilde.alpha)]
    body = pair.to_dict()
    body.update({"gamma": pair.gamma, "f_meta": f.meta, "g_meta": g.meta, "verification": report})
    return body, {"pair_masses": (["n", "lambda", "alpha", "alpha_tilde"], rows)}


def _load_pair(job, ctx) -> IndeterminatePair:
    _require(job, "pair")
    data = job["pair"]
    if isinstance(data, str):
        data = _read_input(ctx.base, data)
        data = data.get("result", data)
    try:
        lam = np.asarray(data["lams"], float)
        W = len(data["f"])
        f = PWComplementFunction(lam[:W], np.asarray(data["f"], float), data["a"])
        g = PWComplementFunction(lam[:W], np.asarray(data["g"], float), data["b"])
        gamma = np.asarray(data["gamma"], float)
        alpha, alpha_t = np.asarray(data["masses"], float), np.asarray(data["masses_tilde"], float)
    except (KeyError, TypeError) as exc:
        raise SchemaError(f"pair input lacks field {exc}") from None
    mu = SpectralMeasure.from_positive(lam, alpha, {"side": "left"})
    mut = SpectralMeasure.from_positive(lam, alpha_t, {"side": "left"})
    return IndeterminatePair(mu, mut, f, g, f.a, g.a, gamma)


def run_pair_verify(job, p, ctx):
    pair = _load_pair(job, ctx)
    report = verify_pair(pair, tol=p["tol"], reconstruct=p["reconstruct"], grid=p["grid"], modes=p["modes"])
    return report, {}


def run_probe_unique(job, p, ctx):
    model = UncertaintyModel(job["model"]) if "model" in job else None
    if "pair" in job:
        pair = _load_pair(job, ctx)
        mu, lams = pair.mu, pair.mu.lam
    else:
        lams = _pair_lams(job, ctx, p["window"])
        mu = None
    gam = even_masses(lams)
    if mu is None:
        # the even measure of the sequence: masses equal to gamma
        mu = SpectralMeasure.from_positive(lams, gam.gamma[: lams.size + 1], {"side": "left", "source": "even"})
    info = uniqueness_probe(mu, gam, model, p["a"], window=p["window"], starts=p["starts"], seed=ctx.seed)
    return info, {}


def run_demo_borg(job, p, ctx):
    _require(job, "potential")
    q = ctx.potential("potential")
    dd = eigenvalues(q, BoundaryPair.DD, p["count"] + 1)
    dn = eigenvalues(q, BoundaryPair.DN, p["count"])
    rep = reconstruct_from_two_spectra(dd, dn, p["grid"], p["modes"])
    x = rep.potential.x
    l2 = float(np.sqrt(np.trapezoid((rep.potential.samples - q(x)) ** 2, x)))
    # drop one Dirichlet-Neumann eigenvalue, filling its slot from the asymptotics
    refilled = refill_spectrum(dn, p["refill"])
    rep_k = reconstruct_from_two_spectra(dd, refilled, p["grid"], p["modes"])
    change = float(np.sqrt(np.trapezoid((rep_k.potential.samples - rep.potential.samples) ** 2, x)))
    result = {"l2_error": l2, "dn_roundtrip_error": rep.diagnostics.get("dn_roundtrip_error"),
              "refilled_index": p["refill"], "refill_l2_change": change,
              "refill_detectable": bool(change > l2), "reconstruction": rep.to_dict()}
    return result, _reconstruction_tables(rep, q)


def run_demo_symmetric(job, p, ctx):
    _require(job, "potential")
    q, qt, report = symmetric_pair(ctx.potential("potential"), p["eps"], p["amplitude"], p["count"])
    rows = list(zip(q.x, q.samples, qt.samples))
    return report, {"pair": (["x", "q", "q_tilde"], rows)}


def run_demo_condition_free(job, p, ctx):
    _require(job, "potential")
    report = condition_free_demo(ctx.potential("potential"), p["eps"], p["count"])
    rows = list(enumerate(report["points"], start=1))
    return report, {"points": (["n", "z"], rows)}


PIPELINES = {
    "solve": run_solve, "spectra": run_spectra, "measure": run_measure, "krein": run_krein,
    "two-spectra": run_two_spectra, "reconstruct": run_reconstruct, "gap": run_gap,
    "density": run_density, "uncertainty": run_uncertainty, "pair-make": run_pair_make,
    "pair-verify": run_pair_verify, "probe-unique": run_probe_unique, "demo-borg": run_demo_borg,
    "demo-symmetric": run_demo_symmetric, "demo-condition-free": run_demo_condition_free,
}
DEFAULT_INPUTS = {
    "demo-borg": {"potential": {"expr": "cos(2*pi*x)"}},
    "demo-symmetric": {"potential": {"expr": "cos(2*pi*x) + 2*x"}},
    "demo-condition-free": {"potential": {"expr": "cos(2*pi*x) + 2*x"}},
    "density": {"index_set": {"period": 1, "residues": [0]}},
    "uncertainty": {"model": {"kind": "exponential", "c": 1.0}},
}


class Context:
    def __init__(self, job: dict, base: Path, seed: int):
        self.job, self.base, self.seed = job, base, seed
        self._cache = {}

    def potential(self, key: str) -> Potential:
        if key not in self._cache:
            self._cache[key] = load_potential(self.job[key], self.base)
        return self._cache[key]


def load_job(sub: str, spec_path: str | None) -> tuple[dict, Path]:
    if spec_path is None:
        job, base = {}, Path.cwd()
    else:
        path = Path(spec_path)
        if not path.exists():
            raise SchemaError(f"spec file not found: {path}")
        try:
            job = json.loads(path.read_text())
        except json.JSONDecodeError as exc:
            raise SchemaError(f"spec is not valid JSON: {exc}") from None
        base = path.parent
    if not isinstance(job, dict):
        raise SchemaError("spec must be a JSON object")
    try:
        jsonschema.validate(job, job_schema(sub))
    except jsonschema.ValidationError as exc:
        where = "/".join(str(s) for s in exc.absolute_path) or "<root>"
        raise SchemaError(f"spec invalid at {where}: {exc.message}") from None
    job = {**copy.deepcopy(DEFAULT_INPUTS.get(sub, {})), **job}
    if "potential" not in job and sub in ("solve", "spectra", "measure", "krein", "two-spectra",
                                          "reconstruct"):
        job["potential"] = {"expr": "0*x"}
    return job, base


def run(sub: str, job: dict, base: Path, out: Path, seed: int = 0, threads: int = 1) -> dict:
    """Execute one pipeline, possibly over a sweep, and write its artifacts."""
    points = [{**DEFAULTS[sub], **job.get("params", {}), **over} for over in job.get("sweep", [{}])]
    ctx = Context(job, base, seed)
    func = PIPELINES[sub]
    with ThreadPoolExecutor(max_workers=max(1, threads)) as pool:
        outcomes = list(pool.map(lambda prm: func(job, prm, ctx), points))
    out.mkdir(parents=True, exist_ok=True)
    results = []
    for i, (prm, (result, tables)) in enumerate(zip(points, outcomes)):
        suffix = "" if len(points) == 1 else f"_{i}"
        for name, (header, rows) in tables.items():
            io.write_csv(out / f"{name}{suffix}.csv", header, rows)
        results.append({"parameters": prm, "result": result})
    body = {"subcommand": sub, "seed": seed}
    body.update(results[0] if len(results) == 1 else {"sweep": results})
    io.write_json(out / "result.json", body)
    io.write_stamp(out / "stamp.json", job, seed, {"points": points, "threads": threads})
    return body


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="mixedspec", description=__doc__.splitlines()[0])
    parser.add_argument("subcommand", choices=sorted(PIPELINES))
    parser.add_argument("--spec", help="JSON job spec (inputs, params, optional sweep)")
    parser.add_argument("--out", default="out", help="output directory")
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--threads", type=int, default=1, help="workers for sweep points")
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_SCHEMA if exc.code else EXIT_OK
    if not 0 <= args.seed < 2**64:
        print("error: seed must be an unsigned 64-bit integer", file=sys.stderr)
        return EXIT_SCHEMA
    out = Path(args.out)
    try:
        job, base = load_job(args.subcommand, args.spec)
        run(args.subcommand, job, base, out, args.seed, args.threads)
    except SchemaError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_SCHEMA
    except (SpectralError, ArithmeticError, np.linalg.LinAlgError, ValueError) as exc:
        out.mkdir(parents=True, exist_ok=True)
        io.write_json(out / "error.json", {"subcommand": args.subcommand, "error": type(exc).__name__,
                                           "message": str(exc)})
        print(f"numeric failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
