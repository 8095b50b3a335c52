"""Command-line surface: parse element/region/space files, dispatch
computations, emit machine-readable reports.

Exit codes: 0 success, 2 domain/precondition/parse error, 3 resource cap,
4 inconclusive verdict under --strict.  Output is deterministic for a fixed
(inputs, seed, parameters) tuple: keys are sorted and floats use repr.
"""

from __future__ import annotations

import argparse
import hashlib
import io
import json
import os
import sys
from dataclasses import dataclass, field

import numpy as np

from . import __version__, algebra, groups, holocalc, ktheory, ranks, spectra, weights
from .errors import ResourceCapError, SpectralGammaError

EXIT_OK = 0
EXIT_DOMAIN = 2
EXIT_RESOURCE = 3
EXIT_INCONCLUSIVE = 4


@dataclass
class RunConfig:
    command: str
    group: str = ""
    element: str = ""
    region: str = ""
    space: str = ""
    matrix: str = ""
    function: str = "id"
    support_words: str = ""
    weight: str = "growth_sqrt"
    k_range: str = "0..4"
    bbox: str = "-4,4,-4,4"
    resolution: float = 0.05
    n_max: int = 1024
    tol: float = 0.05
    nodes: int = 256
    grid: int = 1024
    seed: int = 0
    fmt: str = "json"
    strict: bool = False
    cap_ball: int = groups.DEFAULT_BALL_CAP
    cap_support: int = spectra.DEFAULT_SUPPORT_CAP
    out: str = ""
    threads: int = field(default=0)

    def __post_init__(self):
        if self.n_max < 2 or self.n_max & (self.n_max - 1):
            raise SpectralGammaError(f"--n-max must be a power of two >= 2, got {self.n_max}")
        if self.tol <= 0:
            raise SpectralGammaError("--tol must be positive")
        if self.fmt not in ("json", "csv"):
            raise SpectralGammaError("--format must be json or csv")
        if not self.threads:
            self.threads = int(os.environ.get("SPECTRAL_GAMMA_THREADS", "1") or 1)

    def params_json(self) -> dict:
        return {"n_max": self.n_max, "tol": self.tol, "nodes": self.nodes,
                "grid": self.grid, "seed": self.seed,
                "cap_ball": self.cap_ball, "cap_support": self.cap_support,
                "threads": self.threads}


def _load_json(path: str):
    try:
        with open(path) as fh:
            return json.load(fh)
    except json.JSONDecodeError as exc:
        raise SpectralGammaError(
            f"{path}: parse error at line {exc.lineno} column {exc.colno}: {exc.msg}")
    except OSError as exc:
        raise SpectralGammaError(f"{path}: {exc.strerror or exc}")


def _load_element(cfg: RunConfig) -> algebra.AlgElement:
    if not cfg.element:
        raise SpectralGammaError("--element FILE is required for this command")
    try:
        return algebra.load_element_file(cfg.element)
    except json.JSONDecodeError as exc:
        raise SpectralGammaError(
            f"{cfg.element}: parse error at line {exc.lineno} column {exc.colno}: {exc.msg}")


def _load_region(cfg: RunConfig) -> holocalc.Region:
    if not cfg.region:
        return holocalc.full_plane()
    return holocalc.region_from_json(_load_json(cfg.region))


def _load_matrix(cfg: RunConfig) -> np.ndarray:
    if not cfg.matrix:
        raise SpectralGammaError("--matrix FILE is required for this command")
    return holocalc.matrix_from_json(_load_json(cfg.matrix))


def _group_spec(cfg: RunConfig) -> groups.GroupSpec:
    if not cfg.group:
        raise SpectralGammaError("--group KIND:PARAM is required for this command")
    return groups.spec_from_shorthand(cfg.group)


def _support_set(cfg: RunConfig, spec: groups.GroupSpec):
    if cfg.support_words:
        return {groups.parse_element(w.strip(), spec)
                for w in cfg.support_words.split(",")}
    gens = set(groups.generators(spec))
    if not gens:
        raise SpectralGammaError(f"group {spec} has an empty standard generating set")
    return gens


def _parse_k_range(text: str):
    text = text.strip()
    if ".." in text:
        lo, hi = text.split("..", 1)
        return list(range(int(lo), int(hi) + 1))
    return [int(x) for x in text.split(",")]


# ---------------------------------------------------------------------------
# subcommands

def _cmd_radius(cfg: RunConfig) -> dict:
    a = _load_element(cfg)
    est = spectra.l1_spectral_radius(a, cfg.n_max, cap_support=cfg.cap_support)
    out = {"l1_radius": est.to_json(), "method": est.method}
    if groups.is_subexponential(a.spec):
        sw = spectra.subexp_sandwich_radius(a, cfg.n_max, cap_support=cfg.cap_support)
        out["sandwich"] = sw.to_json()
    return out


def _cmd_norm(cfg: RunConfig) -> dict:
    a = _load_element(cfg)
    est = spectra.operator_norm_estimate(a, n_max=cfg.n_max, grid=cfg.grid,
                                         cap_support=cfg.cap_support)
    return {"opnorm": est.to_json(), "method": est.method}


def _cmd_sigma1(cfg: RunConfig) -> dict:
    a = _load_element(cfg)
    verdict = spectra.sigma1_verdict(a, n_max=cfg.n_max, tol=cfg.tol, grid=cfg.grid,
                                     cap_support=cfg.cap_support, label=cfg.element)
    return {"sigma1": verdict.to_json()}


def _cmd_kesten(cfg: RunConfig) -> dict:
    spec = _group_spec(cfg)
    S = _support_set(cfg, spec)
    report = spectra.kesten_check(S, spec, n_max=cfg.n_max, grid=cfg.grid,
                                  cap_support=cfg.cap_support)
    return {"kesten": report.to_json()}


def _cmd_calc(cfg: RunConfig) -> dict:
    m = _load_matrix(cfg)
    region = _load_region(cfg)
    f = holocalc.function_from_name(cfg.function)
    contour = holocalc.build_contour(holocalc.eigenvalues(m), region, nodes=cfg.nodes)
    result = holocalc.holo_calc(f, m, contour)
    return {"function": cfg.function,
            "circles": [[c.center.real, c.center.imag, c.radius] for c in contour.circles],
            "result": holocalc.matrix_to_json(result)}


def _cmd_kcount(cfg: RunConfig) -> dict:
    m = _load_matrix(cfg)
    if not cfg.region:
        raise SpectralGammaError("--region FILE is required for kcount")
    region = _load_region(cfg)
    bbox = tuple(float(x) for x in cfg.bbox.split(","))
    if len(bbox) != 4:
        raise SpectralGammaError("--bbox needs four comma-separated numbers")
    oc = ktheory.analyze_components(region, bbox=bbox, resolution=cfg.resolution)
    counts = ktheory.component_counts(m, oc)
    return {"k": oc.k, "base_component_representative":
            [oc.representatives[oc.base_index].real, oc.representatives[oc.base_index].imag],
            "counts": counts.to_json(), "resolution": oc.resolution}


def _cmd_ranks(cfg: RunConfig) -> dict:
    if not cfg.space:
        raise SpectralGammaError("--space KIND:PARAM is required for ranks")
    spaces = [ranks.space_from_shorthand(s.strip()) for s in cfg.space.split(";")]
    ks = _parse_k_range(cfg.k_range)
    return {"table": ranks.rank_table(spaces, ks)}


def _cmd_weights(cfg: RunConfig) -> dict:
    spec = _group_spec(cfg)
    S = _support_set(cfg, spec)
    w = _parse_weight(cfg.weight, spec)
    probe = weights.subexponentiality_probe(w, S, n_max=cfg.n_max,
                                            ball_cap=cfg.cap_ball)
    return {"probe": probe.to_json()}


def _parse_weight(text: str, spec: groups.GroupSpec) -> weights.Weight:
    head, _, arg = text.partition(":")
    if head in ("growth_sqrt", "growth"):
        return weights.growth_sqrt(spec)
    if head in ("poly", "polynomial"):
        return weights.polynomial(spec, float(arg))
    if head in ("const", "constant"):
        return weights.constant(spec, float(arg))
    raise SpectralGammaError(f"unknown weight {text!r}")


def _cmd_report(cfg: RunConfig, paths) -> dict:
    bundle = []
    seeds = set()
    versions = set()
    for path in paths:
        doc = _load_json(path)
        if not isinstance(doc, dict) or "command" not in doc:
            raise SpectralGammaError(f"{path}: not a spectral-gamma output document")
        seeds.add(doc.get("params", {}).get("seed"))
        versions.add(doc.get("version"))
        with open(path, "rb") as fh:
            digest = hashlib.sha256(fh.read()).hexdigest()
        bundle.append({"path": os.path.basename(path), "sha256": digest, "document": doc})
    if len(versions) > 1:
        raise SpectralGammaError(f"version mismatch in bundle: {sorted(map(str, versions))}")
    if len(seeds) > 1:
        raise SpectralGammaError(f"seed mismatch in bundle: {sorted(map(str, seeds))}")
    verdicts = []
    for item in bundle:
        res = item["document"].get("results", {})
        if "sigma1" in res:
            verdicts.append({"path": item["path"],
                             "verdict": res["sigma1"]["verdict"],
                             "margin": res["sigma1"]["margin"]})
    out = {"bundle": bundle, "n_inputs": len(bundle)}
    if verdicts:
        out["sigma1_verdicts"] = verdicts
    return out


# ---------------------------------------------------------------------------
# output shaping

def _document(cfg: RunConfig, results: dict) -> dict:
    return {"command": cfg.command, "version": __version__,
            "params": cfg.params_json(), "results": results}


def _to_csv(results: dict) -> str:
    import csv as _csv
    rows = None
    if "table" in results:
        rows = results["table"]
    elif "probe" in results:
        rows = [{"n": n, "value": v, "mode": mode}
                for n, v, mode in results["probe"]["entries"]]
    if rows is None:
        raise SpectralGammaError("csv format is only available for tabular results")
    buf = io.StringIO()
    writer = _csv.DictWriter(buf, fieldnames=list(rows[0].keys()))
    writer.writeheader()
    for row in rows:
        writer.writerow(row)
    return buf.getvalue()


def _contains_inconclusive(results: dict) -> bool:
    if isinstance(results, dict):
        if results.get("verdict") == "inconclusive":
            return True
        return any(_contains_inconclusive(v) for v in results.values())
    if isinstance(results, list):
        return any(_contains_inconclusive(v) for v in results)
    return False


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="spectral-gamma",
        description="Certified spectral radii in group algebras, holomorphic "
                    "matrix calculus, eigenvalue-counting K-invariants, and "
                    "closed-form stable ranks.")
    parser.add_argument("command",
                        choices=["radius", "norm", "sigma1", "kesten", "calc",
                                 "kcount", "ranks", "weights", "report"])
    parser.add_argument("inputs", nargs="*", help="input documents (report)")
    parser.add_argument("--group", default="", help="group shorthand, e.g. free:2")
    parser.add_argument("--element", default="", help="element file (JSON/TOML)")
    parser.add_argument("--region", default="", help="region DSL file (JSON)")
    parser.add_argument("--space", default="", help="space shorthand, e.g. torus:3")
    parser.add_argument("--matrix", default="", help="matrix file (JSON)")
    parser.add_argument("--function", default="id", help="calc function selector")
    parser.add_argument("--support-words", default="", help="comma list of words")
    parser.add_argument("--weight", default="growth_sqrt", help="weight selector")
    parser.add_argument("--k", dest="k_range", default="0..4", help="k range, e.g. 0..4")
    parser.add_argument("--bbox", default="-4,4,-4,4", help="kcount bounding box")
    parser.add_argument("--resolution", type=float, default=0.05)
    parser.add_argument("--n-max", dest="n_max", type=int, default=1024)
    parser.add_argument("--tol", type=float, default=0.05)
    parser.add_argument("--nodes", type=int, default=256)
    parser.add_argument("--grid", type=int, default=1024)
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--format", dest="fmt", default="json", choices=["json", "csv"])
    parser.add_argument("--strict", action="store_true")
    parser.add_argument("--cap-ball", dest="cap_ball", type=int,
                        default=groups.DEFAULT_BALL_CAP)
    parser.add_argument("--cap-support", dest="cap_support", type=int,
                        default=spectra.DEFAULT_SUPPORT_CAP)
    parser.add_argument("--out", default="", help="write the document here instead of stdout")
    return parser


_HANDLERS = {
    "radius": _cmd_radius, "norm": _cmd_norm, "sigma1": _cmd_sigma1,
    "kesten": _cmd_kesten, "calc": _cmd_calc, "kcount": _cmd_kcount,
    "ranks": _cmd_ranks, "weights": _cmd_weights,
}


def run(cfg: RunConfig, inputs=()) -> tuple:
    """Execute one command; returns (exit_code, document)."""
    np.random.seed(cfg.seed)
    if cfg.command == "report":
        if not inputs:
            results = {"bundle": [], "n_inputs": 0}
        else:
            results = _cmd_report(cfg, inputs)
    else:
        results = _HANDLERS[cfg.command](cfg)
    code = EXIT_OK
    if cfg.strict and _contains_inconclusive(results):
        code = EXIT_INCONCLUSIVE
    return code, _document(cfg, results)


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = RunConfig(command=args.command, group=args.group, element=args.element,
                        region=args.region, space=args.space, matrix=args.matrix,
                        function=args.function, support_words=args.support_words,
                        weight=args.weight, k_range=args.k_range, bbox=args.bbox,
                        resolution=args.resolution, n_max=args.n_max, tol=args.tol,
                        nodes=args.nodes, grid=args.grid, seed=args.seed,
                        fmt=args.fmt, strict=args.strict, cap_ball=args.cap_ball,
                        cap_support=args.cap_support, out=args.out)
        code, document = run(cfg, args.inputs)
        if cfg.fmt == "csv":
            text = _to_csv(document["results"])
        else:
            text = json.dumps(document, sort_keys=True, indent=2) + "\n"
        if cfg.out:
            with open(cfg.out, "w") as fh:
                fh.write(text)
        else:
            sys.stdout.write(text)
        return code
    except ResourceCapError as exc:
        print(f"resource cap: {exc}", file=sys.stderr)
        return EXIT_RESOURCE
    except SpectralGammaError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN


if __name__ == "__main__":
    sys.exit(main())
