"""Batch driver: ``qlevy <command> --scenario file.yaml --out dir``.

Each run writes ``<prefix>.json`` (the report) and ``<prefix>.csv`` (the
table behind it: psi values per battery element for the functional
commands, residual/level/trace tables for the others).  On failure a
structured ``<prefix>.error.json`` is written and the process exits with
2 (precondition), 3 (convergence) or 4 (internal error).
"""

from __future__ import annotations

import argparse
import csv
import json
import logging
import math
import sys
from fractions import Fraction
from importlib import resources
from pathlib import Path
from typing import Dict, List, Optional, Sequence, Tuple

import jsonschema
import numpy as np
import yaml

from . import __version__
from .algebra.core import AlgebraCtx, AlgElt
from .algebra.syntax import format_element
from .gauss import (GaussCocycle, GaussParams, gaussian_functional, is_hermitian_gaussian, k_battery_offdiagonal,
                    random_psd, recover_params)
from .hopf.battery import K1Battery, gram_matrix, min_hermitian_eig
from .hopf.coalgebra import CapExceeded, ConvergenceError, conv_exp_functional, semigroup_defect
from .hopf.functionals import Functional, chart_labels
from .repkit.decomp import decompose, maximal_gaussian_subspace, subspace_distance
from .repkit.reps import (MatRep, block_embed, contraction_report, conv_product, corner_defect, direct_sum,
                          relation_residuals, suq2_irrep, torus_char_rep, trivial_rep)
from .schurmann.cocycle import p_schedule
from .schurmann.counterexample import counterexample_n3, default_schedule
from .schurmann.hunt import hunt_decompose, pullback_functional
from .uqn import gc_witness, lift_rep, push_functional, uq_hunt, uq_twist, uq_from_suq

log = logging.getLogger("qlevy")

EXIT_OK, EXIT_PRECONDITION, EXIT_CONVERGENCE, EXIT_INTERNAL = 0, 2, 3, 4
COMMANDS = ("check-relations", "gauss", "decompose", "hunt", "counterexample", "semigroup")


class ScenarioError(ValueError):
    pass


# ---------------------------------------------------------------------------
# scenario handling


def load_schema() -> dict:
    return json.loads(resources.files("qlevy").joinpath("scenario.schema.json").read_text(encoding="utf-8"))


def load_scenario(path) -> dict:
    text = Path(path).read_text(encoding="utf-8")
    try:
        data = yaml.safe_load(text)
    except yaml.YAMLError as exc:
        raise ScenarioError(f"cannot parse scenario: {exc}") from None
    if not isinstance(data, dict):
        raise ScenarioError("scenario must be a mapping")
    validate_scenario(data)
    return data


def validate_scenario(data: dict) -> None:
    try:
        jsonschema.validate(data, load_schema())
    except jsonschema.ValidationError as exc:
        where = "/".join(str(p) for p in exc.absolute_path) or "<root>"
        raise ScenarioError(f"scenario invalid at {where}: {exc.message}") from None
    q = parse_q(data.get("q", "1/2"))
    if not 0 < q < 1:
        raise ScenarioError("q must lie in (0, 1)")


def parse_q(text: str) -> Fraction:
    try:
        return Fraction(str(text).replace(" ", ""))
    except (ValueError, ZeroDivisionError):
        raise ScenarioError(f"q={text!r} is not a rational number") from None


class Setup:
    """Resolved scenario: contexts, representation, eta data, battery, tolerances."""

    def __init__(self, data: dict, seed: Optional[int] = None, tol: Optional[float] = None,
                 dim: Optional[int] = None):
        self.data = data
        self.variant = data.get("variant", "suq")
        self.N = int(data["N"])
        self.q0 = parse_q(data.get("q", "1/2"))
        self.seed = int(seed if seed is not None else data.get("seed", 0))
        tols = data.get("tolerances", {})
        self.tol = float(tol if tol is not None else tols.get("tol", 1e-8))
        self.route_tol = float(tols.get("route", 1e-6))
        self.residual_tol = float(tols.get("residual", 1e-12))
        self.dim = dim
        self.rng = np.random.default_rng(self.seed)
        sched = data.get("p_schedule", {})
        self.schedule = p_schedule(sched.get("m_min", 4), sched.get("m_max", 20))
        self.method = data.get("method", "closed_form")
        # psi lives on ``ctx``; cocycles and decompositions on ``suq_ctx``
        self.ctx = AlgebraCtx(self.N, "Uq" if self.variant == "uq" else "SUq", self.q0)
        self.suq_ctx = AlgebraCtx(self.N + 1 if self.variant == "uq" else self.N, "SUq", self.q0)

    # -- representation --------------------------------------------------
    def _suq_rep(self, spec: dict, N: int) -> MatRep:
        kind = spec["kind"]
        if kind == "suq2":
            M = int(self.dim if self.dim is not None else spec.get("M", 16))
            rho = suq2_irrep(M, self.q0)
            if N == 2 and spec.get("block", 0) == 0:
                return rho
            if N < 2:
                raise ScenarioError("suq2 components need N >= 2")
            return block_embed(rho, N, int(spec.get("block", 0)))
        if kind == "torus":
            theta = spec["theta"]
            if len(theta) != N - 1:
                raise ScenarioError(f"an SU_q({N}) torus character takes {N - 1} angles")
            return torus_char_rep(theta, "SUq", self.q0)
        if kind == "trivial":
            return trivial_rep(N, int(spec.get("dim", 1)), "SUq", self.q0)
        if kind == "conv":
            out = self._suq_rep(spec["factors"][0], N)
            for f in spec["factors"][1:]:
                out = conv_product(out, self._suq_rep(f, N))
            return out
        raise ScenarioError(f"component kind {kind!r} needs variant 'uq'")

    def component(self, spec: dict) -> MatRep:
        if self.variant == "suq":
            return self._suq_rep(spec, self.N)
        kind = spec["kind"]
        if kind == "torus":
            if len(spec["theta"]) != self.N:
                raise ScenarioError(f"a U_q({self.N}) torus character takes {self.N} angles")
            return torus_char_rep(spec["theta"], "Uq", self.q0)
        if kind == "twist":
            return uq_twist(self._suq_rep(spec["inner"], self.N), float(spec.get("phase", 0.0)))
        return uq_from_suq(self._suq_rep(spec, self.N))

    def representation(self) -> Tuple[Optional[MatRep], List[MatRep]]:
        levels = self.data.get("levels") or []
        if not levels:
            return None, []
        comps = [self.component(lv["rep"]) for lv in levels]
        return (comps[0] if len(comps) == 1 else direct_sum(comps)), comps

    def eta_spec(self, pi: Optional[MatRep], comps: Sequence[MatRep]) -> Dict[int, np.ndarray]:
        """Ambient ``eta(u[n,n])`` per level, in SU_q coordinates (lifted for U_q)."""
        out: Dict[int, np.ndarray] = {}
        if pi is None:
            return out
        offset = 0
        Ns = self.suq_ctx.N
        for lv, comp in zip(self.data.get("levels") or [], comps):
            spec = lv.get("eta")
            if spec is not None:
                if "n" not in lv:
                    raise ScenarioError("a level with eta data needs its level index n")
                n = int(lv["n"])
                if not 2 <= n <= Ns:
                    raise ScenarioError(f"level n={n} outside 2..{Ns}")
                v = self._eta_vector(spec, comp, n)
                full = out.setdefault(n, np.zeros(pi.dim, dtype=complex))
                full[offset:offset + comp.dim] += v
            offset += comp.dim
        return out

    def _eta_vector(self, spec: dict, comp: MatRep, n: int) -> np.ndarray:
        d = comp.dim
        if "basis" in spec or "coboundary" in spec:
            i = int(spec.get("basis", spec.get("coboundary")))
            if i >= d:
                raise ScenarioError(f"basis index {i} outside a component of dimension {d}")
            e = np.zeros(d, dtype=complex)
            e[i] = 1.0
            if "basis" in spec:
                return e
            rep = lift_rep(comp) if comp.ctx.variant == "Uq" else comp
            Ns = rep.ctx.N
            A = rep.letter_matrix((n - 1) * Ns + (n - 1))
            return A @ e - e
        if "vector" in spec:
            vec = np.array([complex(a, b) for a, b in spec["vector"]])
            if vec.shape[0] != d:
                raise ScenarioError(f"eta vector has length {vec.shape[0]}, component dimension is {d}")
            return vec
        v = self.rng.standard_normal(d) + 1j * self.rng.standard_normal(d)
        return v / np.linalg.norm(v)

    # -- gaussian data, battery -------------------------------------------
    def gauss(self) -> GaussParams:
        labels = chart_labels(self.ctx)
        g = self.data.get("gaussian") or {}
        if "r" not in g and "R" not in g:
            return GaussParams.zero(self.ctx)
        n = len(labels)
        r = np.asarray(g.get("r", [0.0] * n), dtype=float)
        R = np.asarray(g.get("R", np.zeros((n, n))), dtype=float)
        if r.shape != (n,) or R.shape != (n, n):
            raise ScenarioError(f"gaussian data for {self.variant}({self.N}) needs r of length {n} and R {n}x{n}")
        p = GaussParams(r, R, labels)
        p.validate()
        return p

    def battery(self, default_degree: int = 2) -> List[AlgElt]:
        b = self.data.get("battery", {})
        gens = b.get("generators")
        syms = [self.ctx.sym(c) for c in gens] if gens is not None else None
        if gens is not None and any(c >= self.ctx.n_letters or (self.variant == "suq" and c >= 2 * self.N ** 2)
                                    for c in gens):
            raise ScenarioError("battery generator code out of range")
        return K1Battery(int(b.get("degree", default_degree)), syms, b.get("count"), self.seed).elements(self.ctx)

    def summary(self) -> dict:
        return {"variant": self.variant, "N": self.N, "q": str(self.q0), "seed": self.seed, "tol": self.tol,
                "dim_override": self.dim}


# ---------------------------------------------------------------------------
# serialization


def jsonable(x):
    if isinstance(x, dict):
        return {str(k): jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [jsonable(v) for v in x]
    if isinstance(x, np.ndarray):
        return jsonable(x.tolist())
    if isinstance(x, (bool, np.bool_)):
        return bool(x)
    if isinstance(x, (int, np.integer)):
        return int(x)
    if isinstance(x, (complex, np.complexfloating)):
        return [jsonable(float(x.real)), jsonable(float(x.imag))]
    if isinstance(x, (float, np.floating)):
        x = float(x)
        if math.isnan(x):
            return "nan"
        if math.isinf(x):
            return "inf" if x > 0 else "-inf"
        return x
    if isinstance(x, Fraction):
        return str(x)
    if x is None or isinstance(x, str):
        return x
    return str(x)


def write_report(out: Path, prefix: str, report: dict, header: Sequence[str], rows: Sequence[Sequence]) -> None:
    out.mkdir(parents=True, exist_ok=True)
    text = json.dumps(jsonable(report), sort_keys=True, indent=2, ensure_ascii=False)
    (out / f"{prefix}.json").write_text(text + "\n", encoding="utf-8")
    with open(out / f"{prefix}.csv", "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        for row in rows:
            w.writerow([repr(float(v)) if isinstance(v, (float, np.floating)) else v for v in row])


def _psi_rows(elts: Sequence[AlgElt], columns: Sequence[Tuple[str, Functional]]):
    header = ["index", "element"]
    for name, _ in columns:
        header += [f"{name}_re", f"{name}_im"]
    rows = []
    for i, a in enumerate(elts):
        row: list = [i, format_element(a)]
        for _, f in columns:
            z = f(a)
            row += [float(z.real), float(z.imag)]
        rows.append(row)
    return header, rows


# ---------------------------------------------------------------------------
# commands


def cmd_check_relations(s: Setup):
    pi, _ = s.representation()
    if pi is None:
        if s.variant != "suq" or s.N != 2:
            raise ScenarioError("check-relations needs levels unless N=2 (default suq2_irrep)")
        pi = suq2_irrep(int(s.dim or 64), s.q0)
    rep = relation_residuals(pi)
    report = {"representation": pi.tag, "dim": pi.dim, "interior_dim": pi.interior_dim,
              "residuals": rep.as_dict(), "contraction": contraction_report(pi),
              "ok": rep.max_residual <= s.residual_tol, "residual_tol": s.residual_tol}
    rows = [[fam, val] for fam, val in sorted(rep.per_family.items())]
    if pi.ctx.variant == "Uq":
        lifted = relation_residuals(lift_rep(pi))
        report["lifted_residuals"] = lifted.as_dict()
        report["ok"] = report["ok"] and lifted.max_residual <= s.residual_tol
    if pi.ctx.N == 2 and pi.ctx.variant == "SUq" and pi.tag.startswith("suq2"):
        report["corner_defect"] = corner_defect(pi)
        report["corner_defect_expected"] = -(1.0 - float(s.q0) ** (2 * pi.dim))
    return report, ["family", "residual"], rows


def cmd_gauss(s: Setup):
    ctx = s.ctx
    labels = chart_labels(ctx)
    n = len(labels)
    g = s.data.get("gaussian") or {}
    instances: List[GaussParams] = []
    if "r" in g or "R" in g:
        instances.append(s.gauss())
    for _ in range(int(g.get("random_instances", 0 if instances else 1))):
        r = s.rng.standard_normal(n)
        instances.append(GaussParams(r, random_psd(n, s.rng) if n else np.zeros((0, 0)), labels))
    errors = []
    for p in instances:
        back = recover_params(gaussian_functional(ctx, p))
        err = max(float(np.abs(back.r - p.r).max(initial=0.0)), float(np.abs(back.R - p.R).max(initial=0.0)))
        errors.append(err)
    psi = gaussian_functional(ctx, instances[0])
    off_words = k_battery_offdiagonal(ctx, 3 if 2 * s.N * s.N <= 18 else 2)
    off = max((abs(psi.word(w)) for w in off_words), default=0.0)
    report = {"labels": [str(l) for l in labels], "n_parameters": instances[0].n_parameters,
              "instances": len(instances), "roundtrip_max_error": max(errors), "roundtrip_errors": errors,
              "params": instances[0].as_dict(), "offdiagonal_max": off, "offdiagonal_words": len(off_words)}
    if s.N >= 2 and n >= 2:
        if ctx.variant == "Uq":
            witness = gc_witness(s.N, s.q0)
        else:
            vec = np.zeros((n, 1), dtype=complex)
            vec[0, 0], vec[1, 0] = 1.0, 1j
            witness = is_hermitian_gaussian(GaussCocycle(ctx, vec))
        report["no_gc_witness"] = witness.as_dict()
    header, rows = _psi_rows(s.battery(), [("psi", psi)])
    return report, header, rows


def cmd_decompose(s: Setup):
    pi, comps = s.representation()
    if pi is None:
        raise ScenarioError("decompose needs at least one level")
    target = lift_rep(pi) if pi.ctx.variant == "Uq" else pi
    dec = decompose(target, s.tol)
    gsub = maximal_gaussian_subspace(target, s.tol)
    lvl1 = dec.level(1)
    dist = subspace_distance(gsub, lvl1.basis) if lvl1 is not None else float(gsub.shape[1])
    report = {"representation": target.tag, "dim": target.dim, "components": [c.tag for c in comps],
              "decomposition": dec.as_dict(), "gaussian_subspace_dim": int(gsub.shape[1]),
              "gaussian_vs_level1": dist, "relation_residual": relation_residuals(target).max_residual}
    rows = [[lv.n, lv.dim, lv.injectivity] for lv in dec.levels]
    return report, ["level", "dim", "injectivity"], rows


def _hunt(s: Setup):
    pi, comps = s.representation()
    gauss = s.gauss()
    eta = s.eta_spec(pi, comps)
    if s.variant == "uq":
        dec = uq_hunt(pi, eta, gauss, N=s.N, tol=s.tol, method=s.method, schedule=s.schedule)
        suq = dec.suq
        psi, psi_g = dec.psi, dec.psi_gauss
        levels = {lv.n: dec.level_psi[lv.n] for lv in suq.levels}
        info = dec.as_dict()
    else:
        suq = hunt_decompose(pi, eta, gauss, ctx=s.ctx, tol=s.tol, method=s.method, schedule=s.schedule)
        psi, psi_g = suq.psi, suq.psi_gauss
        levels = {lv.n: lv.psi for lv in suq.levels}
        info = suq.as_dict()
    # the p-limit route for each level, pulled back to the scenario's algebra
    Ns = s.suq_ctx.N
    plimit: Dict[int, Functional] = {}
    for lv in suq.levels:
        pl = lv.plimit.functional()
        f = pl if lv.n == Ns else pullback_functional(pl, lv.n, Ns, s.suq_ctx)
        plimit[lv.n] = push_functional(f, s.N) if s.variant == "uq" else f
    return psi, psi_g, levels, plimit, info


def cmd_hunt(s: Setup):
    psi, psi_g, levels, plimit, info = _hunt(s)
    elts = s.battery()
    cols = [("psi", psi), ("gauss", psi_g)]
    for n in sorted(levels):
        cols += [(f"level{n}", levels[n]), (f"plimit{n}", plimit[n])]
    header, rows = _psi_rows(elts, cols)
    route = {}
    for n in sorted(levels):
        diff = max((abs(levels[n](a) - plimit[n](a)) for a in elts), default=0.0)
        route[str(n)] = {"max_abs_diff": diff, "ok": diff <= s.route_tol}
    G = gram_matrix(psi, elts[: min(len(elts), 100)])
    report = {"decomposition": info, "battery_size": len(elts), "route_agreement": route,
              "route_tol": s.route_tol, "conditional_positivity_min_eig": min_hermitian_eig(G)}
    return report, header, rows


def cmd_counterexample(s: Setup):
    if s.variant != "suq" or s.N != 3:
        raise ScenarioError("the counterexample is defined on SU_q(3)")
    c = s.data.get("counterexample", {})
    M = int(s.dim if s.dim is not None else c.get("M", 48))
    lo, hi = c.get("m_pair", [6, 12])
    rep = counterexample_n3(M, s.q0, default_schedule(int(c.get("m_max", 12))),
                            (1.0 - 2.0 ** -lo, 1.0 - 2.0 ** -hi))
    rows = [[p, a, b] for p, a, b in zip(rep.p, rep.norms, rep.oracle_norms)]
    return rep.as_dict(), ["p", "norm", "oracle_norm"], rows


def cmd_semigroup(s: Setup):
    psi, _, _, _, info = _hunt(s)
    ctx = s.ctx
    ts = [float(t) for t in (s.data.get("semigroup", {}).get("t") or [0.05, 0.1])]
    deg = int(s.data.get("battery", {}).get("degree", 2))
    gens = s.data.get("battery", {}).get("generators")
    codes = list(gens) if gens is not None else list(range(ctx.n_letters if ctx.variant == "Uq" else 2 * s.N ** 2))
    words = [()]
    for d in range(1, deg + 1):
        words += [w for w in np.ndindex(*([len(codes)] * d))]
    words = [tuple(codes[i] for i in w) for w in words]
    gram_elts = [ctx.word(())] + [ctx.word((c,)) for c in codes]
    table, rows = [], []
    for t in ts:
        phi = conv_exp_functional(psi, t)
        G = gram_matrix(phi, gram_elts)
        entry = {"t": t, "normalization": abs(phi.word(()) - 1.0),
                 "semigroup_defect": semigroup_defect(psi, t, t, words),
                 "gram_min_eig": min_hermitian_eig(G)}
        table.append(entry)
        for w in words:
            z = phi.word(w)
            rows.append([t, format_element(ctx.word(w)), float(z.real), float(z.imag)])
    report = {"decomposition": info, "words": len(words), "table": table}
    return report, ["t", "word", "re", "im"], rows


HANDLERS = {
    "check-relations": cmd_check_relations,
    "gauss": cmd_gauss,
    "decompose": cmd_decompose,
    "hunt": cmd_hunt,
    "counterexample": cmd_counterexample,
    "semigroup": cmd_semigroup,
}


# ---------------------------------------------------------------------------
# entry point


def _exit_code(exc: BaseException) -> int:
    if isinstance(exc, ConvergenceError):
        return EXIT_CONVERGENCE
    if isinstance(exc, (ValueError, CapExceeded, FileNotFoundError, jsonschema.ValidationError)):
        return EXIT_PRECONDITION
    return EXIT_INTERNAL


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="qlevy", description="Generating functionals on SU_q(N) and U_q(N).")
    ap.add_argument("--version", action="version", version=f"qlevy {__version__}")
    sub = ap.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        p = sub.add_parser(name)
        p.add_argument("--scenario", required=True, help="YAML or JSON scenario file")
        p.add_argument("--out", default=None, help="output directory")
        p.add_argument("--seed", type=int, default=None)
        p.add_argument("--tol", type=float, default=None)
        p.add_argument("--dim", type=int, default=None, help="truncation size of suq2 components")
        p.add_argument("--verbose", action="store_true")
    sub.add_parser("schema", help="print the scenario JSON schema")
    return ap


def run(command: str, scenario_path, out=None, seed=None, tol=None, dim=None) -> int:
    prefix = command
    out_dir = Path(out) if out is not None else Path(".")
    try:
        data = load_scenario(scenario_path)
        outcfg = data.get("output", {})
        prefix = outcfg.get("prefix", command)
        if out is None and "dir" in outcfg:
            out_dir = Path(outcfg["dir"])
        if seed is not None and seed < 0:
            raise ScenarioError("--seed must be non-negative")
        if dim is not None and dim < 2:
            raise ScenarioError("--dim must be at least 2")
        setup = Setup(data, seed, tol, dim)
        report, header, rows = HANDLERS[command](setup)
        full = {"command": command, "version": __version__, "scenario": setup.summary(), "report": report}
        write_report(out_dir, prefix, full, header, rows)
        return EXIT_OK
    except Exception as exc:  # every failure becomes a structured error report
        code = _exit_code(exc)
        err = {"command": command, "error": {"type": type(exc).__name__, "message": str(exc), "exit_code": code}}
        text = json.dumps(err, sort_keys=True, indent=2)
        try:
            out_dir.mkdir(parents=True, exist_ok=True)
            (out_dir / f"{prefix}.error.json").write_text(text + "\n", encoding="utf-8")
        except OSError:
            pass
        print(text, file=sys.stderr)
        if code == EXIT_INTERNAL:
            log.exception("internal error")
        return code


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    if args.command == "schema":
        print(json.dumps(load_schema(), indent=2))
        return EXIT_OK
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    return run(args.command, args.scenario, args.out, args.seed, args.tol, args.dim)


if __name__ == "__main__":
    sys.exit(main())
