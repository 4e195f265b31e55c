"""Command-line front end.

Every command prints (or writes with ``--report``) a JSON report carrying a
schema version, a hash of the effective configuration, the list of
invariants checked and the result.  Exit codes: 0 when every invariant
passed, 1 when one failed, 2 for bad input or configuration.

Producer commands (``gen``, ``tile``) write their artifact to stdout so
they can be piped; their report goes to ``--report`` if given.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field
from fractions import Fraction

import numpy as np

from . import __version__
from . import complexes as cx
from . import generators as gen
from . import hyperbolic as hyp
from . import isoperimetry as iso
from . import planar, render, subforest
from .errors import (BadParams, MalformedComplex, NotHyperbolic, TooLarge, TwoEndedObstruction,
                     TreeforgeError, WindowError)
from .graph import Window, classify_ends, components, is_forest

SCHEMA = "treeforge.report/1"

# errors that mean the input or configuration itself is unusable
INPUT_ERRORS = (WindowError, MalformedComplex, BadParams, NotHyperbolic, TooLarge)


class ConfigError(Exception):
    """Bad configuration or unreadable input; carries diagnostic fields."""

    def __init__(self, message: str, **info):
        super().__init__(message)
        self.info = {"error": message, **info}


# helpers ----------------------------------------------------------------------


def _canon(obj) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":"), default=_default)


def _default(o):
    if isinstance(o, Fraction):
        return f"{o.numerator}/{o.denominator}"
    if isinstance(o, (np.integer,)):
        return int(o)
    if isinstance(o, (np.floating,)):
        return float(o)
    if isinstance(o, (set, frozenset, tuple)):
        return sorted(o) if isinstance(o, (set, frozenset)) else list(o)
    raise TypeError(f"cannot serialize {type(o).__name__}")


def config_hash(config: dict) -> str:
    return hashlib.sha256(_canon(config).encode()).hexdigest()


def parse_json(text: str, source: str = "<input>"):
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError("malformed JSON", source=source, line=exc.lineno,
                          column=exc.colno, position=exc.pos, detail=exc.msg) from None


def read_text(path: str | None) -> tuple:
    if path in (None, "-"):
        return sys.stdin.read(), "<stdin>"
    try:
        with open(path, encoding="utf-8") as fh:
            return fh.read(), path
    except OSError as exc:
        raise ConfigError("cannot read input", source=path, detail=str(exc)) from None


def load_window(path: str | None) -> tuple:
    """Window and raw JSON from a file or stdin; also returns the text digest."""
    text, source = read_text(path)
    data = parse_json(text, source)
    if isinstance(data, dict) and "window" in data and "vertices" not in data:
        data = {**data["window"], **{k: v for k, v in data.items() if k != "window"}}
    if not isinstance(data, dict):
        raise ConfigError("expected a JSON object", source=source)
    return Window.from_json(data), data, hashlib.sha256(text.encode()).hexdigest()


def basis_for(w: Window, data: dict) -> planar.TwoBasis:
    if "basis" in data:
        return planar.TwoBasis.from_json(data["basis"])
    return planar.facial_cycles(w)


def inv(name: str, ok: bool, detail=None) -> dict:
    d = {"name": name, "pass": bool(ok)}
    if detail is not None:
        d["detail"] = detail
    return d


def threads() -> int:
    try:
        return max(1, int(os.environ.get("TREEFORGE_THREADS", "1")))
    except ValueError:
        raise ConfigError("TREEFORGE_THREADS must be an integer",
                          value=os.environ.get("TREEFORGE_THREADS")) from None


def build_report(command: str, config: dict, invariants: list, result) -> dict:
    return {
        "schema": SCHEMA,
        "version": __version__,
        "command": command,
        "config": config,
        "config_hash": config_hash(config),
        "invariants": invariants,
        "ok": all(i["pass"] for i in invariants),
        "result": result,
    }


def dumps(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=1, default=_default) + "\n"


def _write(path: str | None, text: str):
    if path in (None, "-"):
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)


# generators ---------------------------------------------------------------------


def make_window(kind: str, p: dict) -> Window:
    g = p.get
    table = {
        "path": lambda: gen.path(g("m", 7), not g("no_boundary", False)),
        "cycle": lambda: gen.cycle(g("m", 6)),
        "complete": lambda: gen.complete(g("m", 5)),
        "k4": gen.planar_k4,
        "cube": gen.cube,
        "grid": lambda: gen.grid(g("rows", 8), g("cols"), not g("no_boundary", False)),
        "grid3": lambda: gen.grid3(g("rows", 5), not g("no_boundary", False)),
        "torus": lambda: gen.torus(g("rows", 8), g("cols")),
        "tree": lambda: gen.tree_ball(g("d", 3), g("radius", 4)),
        "star": lambda: gen.star(g("m", 4)),
        "ladder": lambda: gen.ladder(g("m", 8)),
        "regular": lambda: gen.random_regular(g("d", 3), g("n", 100), g("seed", 0)),
        "planar": lambda: gen.random_planar(g("n", 8), g("seed", 0), g("keep", 0.7)),
        "pq": lambda: hyp.gen_pq_tiling(g("p", 4), g("q", 5), g("layers", 4)),
    }
    if kind not in table:
        raise ConfigError("unknown generator", kind=kind, known=sorted(table))
    return table[kind]()


def make_complex(text: str) -> cx.CellComplex:
    """``name`` or ``name:k`` for the built-in complexes."""
    name, _, arg = text.partition(":")
    if name not in cx.GENERATORS:
        raise ConfigError("unknown complex generator", kind=name, known=sorted(cx.GENERATORS))
    try:
        return cx.GENERATORS[name](int(arg)) if arg else cx.GENERATORS[name]()
    except (TypeError, ValueError) as exc:
        raise ConfigError("bad complex generator argument", kind=text, detail=str(exc)) from None


# command handlers: each returns (config, invariants, result, artifact_text) ------


def _gen_params(a) -> dict:
    keys = ("m", "n", "rows", "cols", "d", "radius", "seed", "keep", "p", "q", "layers", "no_boundary")
    return {k: getattr(a, k) for k in keys if getattr(a, k, None) not in (None, False)}


def cmd_gen(a):
    params = _gen_params(a)
    w = make_window(a.kind, params)
    config = {"kind": a.kind, "params": params}
    invs = [inv("vertex ids dense", True), inv("edge endpoints valid", True)]
    return config, invs, {"n": w.n, "m": w.m, "boundary": sum(w.boundary)}, w.dumps() + "\n"


def _tiling_window(t: hyp.HTiling) -> tuple:
    sub, old, b = hyp.interior_part(t)
    k = hyp.to_klein(t.sites[old]) if old else np.zeros(0, dtype=complex)
    pos = [(float(z.real), float(z.imag)) for z in np.atleast_1d(k)]
    w = Window(sub.n, sub.edges, sub.boundary, pos)
    data = w.to_json()
    data["basis"] = b.to_json()
    return w, b, data


def cmd_tile(a):
    if a.pq:
        p, q = a.pq
        w = hyp.gen_pq_tiling(p, q, a.layers)
        config = {"pq": [p, q], "layers": a.layers}
        invs = [inv("degree q in the interior", all(w.degree(v) == q for v in w.interior()))]
        return config, invs, {"n": w.n, "m": w.m}, w.dumps() + "\n"
    sites = hyp.sample_sites(a.R, a.sample, a.r0, a.lam, a.seed, a.wordlen)
    t = hyp.dirichlet_cells(sites, a.R)
    w, b, data = _tiling_window(t)
    bad = hyp.tiling_violations(t, a.r0)
    rep = planar.validate_two_basis(w, b)
    config = {"sample": a.sample, "R": a.R, "r0": a.r0, "lam": a.lam, "seed": a.seed, "wordlen": a.wordlen}
    invs = [inv("tessellation geometry", not bad, bad[:5] or None),
            inv("B_z is a 2-basis", rep.valid, rep.to_json())]
    if a.svg:
        tr = hyp.tiling_treeing(t) if rep.valid else None
        _write(a.svg, render.tiling_svg(t, tr.tree if tr else None, tr.interior if tr else None))
    result = {"sites": len(t.sites), "interior": w.n, "basis": len(b.cycles), "stats": t.stats}
    return config, invs, result, json.dumps(data, sort_keys=True) + "\n"


def _treeing_invariants(w: Window, tree: Window) -> tuple:
    ncomp = len(components(w))
    acyclic = is_forest(tree)
    spanning = len(components(tree)) == ncomp
    invs = [inv("acyclic", acyclic), inv("spanning", spanning),
            inv("edges = vertices - components", tree.m == w.n - ncomp,
                {"edges": tree.m, "vertices": w.n, "components": ncomp})]
    return invs, {"vertices": w.n, "edges": tree.m, "components": ncomp}


def cmd_treeing(a, w=None, data=None, digest=None):
    if w is None:
        w, data, digest = load_window(a.input)
    b = basis_for(w, data)
    rep = planar.validate_two_basis(w, b)
    invs = [inv("2-basis valid", rep.valid, rep.to_json())]
    result = {"basis": len(b.cycles)}
    art = None
    if rep.valid:
        tree = planar.treeing_from_basis(w, b)
        more, res = _treeing_invariants(w, tree)
        invs += more
        result.update(res)
        result["cost"] = Fraction(tree.m, w.n) if w.n else Fraction(0)
        art = tree.dumps() + "\n"
    if not a.verify:
        invs = invs[:1]
    return {"input_sha256": digest, "verify": a.verify}, invs, result, art


def cmd_dual(a):
    w, data, digest = load_window(a.input)
    b = basis_for(w, data)
    d = planar.build_dual(w, b, not a.no_virtual)
    degree_ok = all(d.window.degree(i) == len(c) for i, c in enumerate(b.cycles))
    invs = [inv("dual degree = cycle length", degree_ok),
            inv("dual edge ids = primal edge ids", set(d.window.edges) <= set(w.edges))]
    result = {"vertices": d.window.n, "edges": d.window.m, "virtual": d.virtual}
    if a.double:
        # the double dual needs every edge on two faces, so the recorded
        # outer faces join the basis here
        dd = planar.double_dual(w, b.with_outer() if b.outer else b)
        invs.append(inv("double dual isomorphic", dd.isomorphic, dd.reason or None))
    return {"input_sha256": digest, "no_virtual": a.no_virtual, "double": a.double}, invs, result, \
        json.dumps(d.to_json(), sort_keys=True) + "\n"


def make_forest(w: Window, method: str, seed: int):
    if method == "layered":
        return subforest.layered_subforest(w, subforest.layered_nets(w))
    if method == "bfs":
        return subforest.bfs_forest(w, [v for v in range(w.n) if w.boundary[v]])
    if method == "random":
        return subforest.random_weight_forest(w, seed)
    if method == "one-ended":
        return subforest.one_ended_subforest(w)
    raise ConfigError("unknown forest method", method=method)


def cmd_forest(a):
    w, data, digest = load_window(a.input)
    config = {"input_sha256": digest, "method": a.method, "seed": a.seed}
    try:
        f = make_forest(w, a.method, a.seed)
    except TwoEndedObstruction as exc:
        obs = subforest.detect_obstruction(w)
        return config, [inv("one-ended forest exists", False, str(exc))], {"obstruction": obs.to_json()}, None
    bad = subforest.forest_violations(w, f)
    invs = [inv("forest invariant suite", not bad, bad[:5] or None)]
    result = {"edges": len(f.parent), "roots": len(f.roots)}
    if a.method == "layered":
        lens, bound = f.stats.get("path_len", []), f.stats.get("bound", [])
        ok = all(b is None or l <= b for l, b in zip(lens, bound))
        invs.append(inv("per-layer path length <= 2 r_(n+1)", ok, {"path_len": lens, "bound": bound}))
    return config, invs, result, json.dumps(f.to_json(), sort_keys=True) + "\n"


def _parse_ids(text: str) -> list:
    text = text.strip()
    if not text:
        return []
    if text.startswith("["):
        return [int(x) for x in parse_json(text, "--sub")]
    try:
        return [int(x) for x in text.split(",")]
    except ValueError:
        raise ConfigError("expected comma separated edge ids", value=text) from None


def cmd_ominus(a):
    w, data, digest = load_window(a.input)
    b = basis_for(w, data)
    d = planar.build_dual(w, b)
    sub = _parse_ids(a.sub)
    h = planar.ominus_star(w, d, sub)
    rep = planar.duality_check(w, b, d, sub)
    invs = [inv("acyclic iff dual aperiodic", rep.agree_acyclic),
            inv("tree iff dual tree", rep.agree_tree)]
    return {"input_sha256": digest, "sub": sub}, invs, asdict(rep), h.dumps() + "\n"


def cmd_verify(a):
    w, data, digest = load_window(a.input)
    config = {"input_sha256": digest}
    invs = []
    result = {}
    if a.forest:
        text, source = read_text(a.forest)
        f = subforest.ParentForest.from_json(w, parse_json(text, source))
        bad = subforest.forest_violations(w, f)
        invs.append(inv("forest invariant suite", not bad, bad[:5] or None))
        config["forest_sha256"] = hashlib.sha256(text.encode()).hexdigest()
    if "basis" in data or a.basis:
        b = basis_for(w, data)
        rep = planar.validate_two_basis(w, b)
        invs.append(inv("2-basis valid", rep.valid, rep.to_json()))
    if a.center is not None:
        ends = classify_ends(w, a.center)
        result["ends"] = ends.to_json()
        config["center"] = a.center
    if not invs:
        invs.append(inv("window parses", True))
    return config, invs, result, None


def cmd_iso(a):
    w, data, digest = load_window(a.input)
    config = {"input_sha256": digest, "mode": a.mode, "finite_mode": a.finite_mode,
              "edge": a.edge, "eps": a.eps, "seed": a.seed}
    invs = []
    if a.mode == "exact":
        c = iso.iso_constant_exact(w, a.finite_mode, edge_variant=a.edge)
        bd = iso.edge_boundary(w, c.witness) if a.edge else iso.vertex_boundary(w, c.witness)
        ok = Fraction(len(bd), len(c.witness)) == c.ratio
        invs.append(inv("witness ratio recomputed", ok))
        result = {**c.to_json(), "ratio_float": float(c.ratio)}
    elif a.mode == "greedy":
        c = iso.iso_constant_greedy(w, seed=a.seed, finite_mode=a.finite_mode, edge_variant=a.edge)
        invs.append(inv("witness finite", c.finite))
        result = {**c.to_json(), "ratio_float": float(c.ratio)}
    else:
        if a.eps is None:
            raise ConfigError("--eps is required for the cover mode")
        res = iso.hyperfinite_cover(w, a.eps, finite_mode=a.finite_mode)
        bad = iso.cover_violations(w, res, a.eps, a.finite_mode)
        invs.append(inv("cover properties", not bad, bad[:5] or None))
        invs.append(inv("cover reaches 1 - eps", res.success, res.certificate or None))
        result = res.to_json()
        bound = iso.spectral_lower_bound(w, 0.5)
        if bound is not None:
            result["spectral_lower_bound"] = bound
    return config, invs, result, None


def _load_complex(a) -> tuple:
    if a.gen:
        return make_complex(a.gen), {"gen": a.gen}
    text, source = read_text(a.input)
    digest = hashlib.sha256(text.encode()).hexdigest()
    if a.off:
        return cx.read_off(text, a.dim), {"off_sha256": digest, "dim": a.dim}
    return cx.CellComplex.from_json(parse_json(text, source)), {"input_sha256": digest}


def cmd_complex(a):
    c, config = _load_complex(a)
    config.update({"action": a.action, "seed": a.seed})
    invs = []
    art = None
    if a.action == "homology":
        return config, [inv("homology computed", True)], {"counts": c.counts(), "betti": cx.homology_gf2(c)}, None
    d = cx.build_complex_dual(c)
    deg_ok = all(d.window.degree(j) == len(c.faces[c.dim][cell]) for j, cell in enumerate(d.top_ids))
    invs.append(inv("dual degree = face count", deg_ok))
    result = {"counts": c.counts(), "dual_vertices": d.window.n, "dual_edges": d.window.m,
              "virtual": d.virtual}
    if a.action == "dual":
        return config, invs, result, d.window.dumps() + "\n"
    f = cx.dual_forest(d, a.seed)
    fw = subforest.ParentForest({k: f.head[k] for k in f.head}, dict(f.out),
                                tuple(v for v in range(d.window.n) if v not in f.head))
    bad = subforest.forest_violations(d.window, fw) + f.violations(d)
    invs.append(inv("dual forest invariant suite", not bad, bad[:5] or None))
    r = cx.ominus_star_complex(c, f, d)
    before, after = cx.homology_gf2(c), cx.homology_gf2(r)
    skel = all(r.faces[k] == c.faces[k] for k in range(c.dim - 1))
    invs.append(inv("skeleton below d-1 unchanged", skel))
    invs.append(inv("homology preserved", before[:c.dim] == after and before[c.dim] == 0,
                    {"before": before, "after": after}))
    result.update({"removed_counts": r.counts(), "betti": after})
    if a.action == "collapse":
        seed_cells = [(c.dim, d.top_ids[0])] if a.cell is None else [tuple(int(x) for x in a.cell.split(":"))]
        k = cx.back_orbit_saturate(c, f, seed_cells, dual=d)
        cr = cx.collapse_retract(c, f, k, d)
        invs.append(inv("collapse reaches k minus removed cells", cr.remainder == cr.target))
        same = cx.homology_gf2(c, k) == cx.homology_gf2(c, cr.remainder)
        invs.append(inv("collapse preserves homology", same))
        result["collapse"] = cr.to_json()
    art = json.dumps(r.to_json(), sort_keys=True) + "\n"
    return config, invs, result, art


def cmd_render(a):
    w, data, digest = load_window(a.input)
    hi = []
    parent = {}
    if a.forest:
        text, source = read_text(a.forest)
        f = subforest.ParentForest.from_json(w, parse_json(text, source))
        hi, parent = f.edge_ids(), f.parent
    if a.format == "dot":
        out = render.forest_dot(w, parent) if parent else w.to_dot()
    else:
        out = render.window_svg(w, hi, klein=not a.plain)
    return {"input_sha256": digest, "format": a.format}, [inv("rendered", True)], {"bytes": len(out)}, out


# experiment runner ------------------------------------------------------------


@dataclass
class ExperimentConfig:
    """Everything a ``run`` needs; all randomness comes from ``seeds``."""

    command: str
    params: dict = field(default_factory=dict)
    seeds: list = field(default_factory=lambda: [0])
    tolerances: dict = field(default_factory=dict)
    outputs: dict = field(default_factory=dict)
    formats: list = field(default_factory=lambda: ["json"])

    def to_json(self) -> dict:
        return asdict(self)

    @classmethod
    def from_json(cls, data) -> "ExperimentConfig":
        if not isinstance(data, dict):
            raise ConfigError("config must be a JSON object")
        known = {"command", "params", "seeds", "tolerances", "outputs", "formats"}
        extra = sorted(set(data) - known)
        if extra:
            raise ConfigError("unknown config keys", keys=extra)
        if "command" not in data:
            raise ConfigError("config needs a command")
        cfg = cls(**data)
        if cfg.command not in PIPELINES:
            raise ConfigError("unknown pipeline", command=cfg.command, known=sorted(PIPELINES))
        if not all(isinstance(s, int) for s in cfg.seeds):
            raise ConfigError("seeds must be integers", seeds=cfg.seeds)
        return cfg


def _pipe_planar(p: dict, seed: int, tol: dict) -> tuple:
    w = gen.random_planar(p.get("n", 8), seed, p.get("keep", 0.7))
    b = planar.facial_cycles(w)
    d = planar.build_dual(w, b)
    f = subforest.random_weight_forest(d.window, seed)
    sub = f.edge_ids()
    h = planar.ominus_star(w, d, sub)
    rep = planar.duality_check(w, b, d, sub)
    invs = [inv("forest invariant suite", not subforest.forest_violations(d.window, f)),
            inv("acyclic iff dual aperiodic", rep.agree_acyclic),
            inv("tree iff dual tree", rep.agree_tree),
            inv("primal result is a spanning tree", rep.spanning_tree or len(components(w)) > 1)]
    return invs, {"n": w.n, "m": w.m, "kept": h.m}


def _pipe_tile(p: dict, seed: int, tol: dict) -> tuple:
    if "pq" in p:
        w = hyp.gen_pq_tiling(p["pq"][0], p["pq"][1], p.get("layers", 5))
        tree = planar.planar_treeing(w)
        invs, res = _treeing_invariants(w, tree)
        return invs, res
    sites = hyp.sample_sites(p.get("R", 5.5), p.get("sample", "poisson"), p.get("r0", 0.2),
                             p.get("lam", 2.0), seed)
    t = hyp.dirichlet_cells(sites, p.get("R", 5.5))
    bad = hyp.tiling_violations(t, p.get("r0", 0.2))
    tr = hyp.tiling_treeing(t)
    invs = [inv("tessellation geometry", not bad, bad[:5] or None),
            inv("acyclic", tr.report["acyclic"]), inv("spanning", tr.report["spanning"])]
    return invs, {"sites": len(t.sites), **tr.report}


def _pipe_iso(p: dict, seed: int, tol: dict) -> tuple:
    w = make_window(p.get("kind", "torus"), {**p.get("gen", {}), "seed": seed})
    eps = p.get("eps", 0.1)
    res = iso.hyperfinite_cover(w, eps)
    bad = iso.cover_violations(w, res, eps)
    return [inv("cover properties", not bad), inv("cover reaches 1 - eps", res.success)], \
        {"covered": len(res.a), "n": w.n, "chunks": len(res.chunks)}


def _pipe_complex(p: dict, seed: int, tol: dict) -> tuple:
    c = make_complex(p.get("gen", "disk:8"))
    d = cx.build_complex_dual(c)
    f = cx.dual_forest(d, seed)
    r = cx.ominus_star_complex(c, f, d)
    betti = cx.homology_gf2(r)
    k = cx.back_orbit_saturate(c, f, [(c.dim, d.top_ids[seed % len(d.top_ids)])], dual=d)
    cr = cx.collapse_retract(c, f, k, d)
    return [inv("forest spans toward infinity", not f.violations(d)),
            inv("removed complex homology trivial", not any(betti), betti),
            inv("collapse complete", cr.remainder == cr.target)], \
        {"betti": betti, "steps": len(cr.steps), "saturated": len(k)}


def _pipe_forest(p: dict, seed: int, tol: dict) -> tuple:
    w = make_window(p.get("kind", "grid"), {**p.get("gen", {}), "seed": seed})
    f = make_forest(w, p.get("method", "layered"), seed)
    bad = subforest.forest_violations(w, f)
    return [inv("forest invariant suite", not bad, bad[:5] or None)], \
        {"edges": len(f.parent), "roots": len(f.roots)}


PIPELINES = {
    "planar": _pipe_planar,
    "tile": _pipe_tile,
    "iso": _pipe_iso,
    "complex": _pipe_complex,
    "forest": _pipe_forest,
}


def run_config(cfg: ExperimentConfig, n_threads: int = 1) -> dict:
    """Run a pipeline once per seed; results are ordered by seed position."""
    fn = PIPELINES[cfg.command]

    def one(seed):
        try:
            invs, res = fn(cfg.params, seed, cfg.tolerances)
        except INPUT_ERRORS as exc:
            raise ConfigError("bad pipeline parameters", detail=str(exc)) from None
        except TreeforgeError as exc:
            invs, res = [inv("pipeline completed", False, f"{type(exc).__name__}: {exc}")], {}
        return {"seed": seed, "invariants": invs, "result": res}

    if n_threads > 1 and len(cfg.seeds) > 1:
        with ThreadPoolExecutor(max_workers=n_threads) as pool:
            runs = list(pool.map(one, cfg.seeds))
    else:
        runs = [one(s) for s in cfg.seeds]
    invs = [{**i, "name": f"seed {r['seed']}: {i['name']}"} for r in runs for i in r["invariants"]]
    return build_report("run", cfg.to_json(), invs, {"runs": runs})


def cmd_run(a):
    text, source = read_text(a.config)
    cfg = ExperimentConfig.from_json(parse_json(text, source))
    n = a.threads or threads()
    report = run_config(cfg, n)
    return report, cfg.outputs.get("report")


# argument parsing ----------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="treeforge", description=__doc__.splitlines()[0])
    ap.add_argument("--version", action="version", version=__version__)
    sub = ap.add_subparsers(dest="command", required=True)

    def common(p, has_input=True):
        if has_input:
            p.add_argument("input", nargs="?", default="-", help="input JSON file (default stdin)")
        p.add_argument("--report", help="write the report here instead of stdout")
        p.add_argument("-o", "--output", help="write the artifact here")

    p = sub.add_parser("gen", help="generate a window")
    p.add_argument("kind")
    for name in ("m", "n", "rows", "cols", "d", "radius", "seed", "p", "q", "layers"):
        p.add_argument(f"--{name}", type=int)
    p.add_argument("--keep", type=float)
    p.add_argument("--no-boundary", action="store_true")
    common(p, has_input=False)

    p = sub.add_parser("tile", help="hyperbolic tiling windows")
    p.add_argument("--pq", type=int, nargs=2, metavar=("P", "Q"))
    p.add_argument("--layers", type=int, default=5)
    p.add_argument("--sample", choices=["poisson", "genus2"], default="poisson")
    p.add_argument("--R", type=float, default=5.5)
    p.add_argument("--r0", type=float, default=0.2)
    p.add_argument("--lam", type=float, default=2.0)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--wordlen", type=int, default=2)
    p.add_argument("--svg", help="also draw the Dirichlet tiling and its treeing")
    common(p, has_input=False)

    p = sub.add_parser("treeing", help="spanning forest from a 2-basis")
    p.add_argument("--verify", action="store_true")
    common(p)

    p = sub.add_parser("dual", help="dual graph of a window's 2-basis")
    p.add_argument("--no-virtual", action="store_true")
    p.add_argument("--double", action="store_true", help="also check the double dual")
    common(p)

    p = sub.add_parser("forest", help="one-ended spanning subforests")
    p.add_argument("--method", choices=["layered", "bfs", "random", "one-ended"], default="layered")
    p.add_argument("--seed", type=int, default=0)
    common(p)

    p = sub.add_parser("ominus", help="remove primal edges dual to a subgraph")
    p.add_argument("--sub", required=True, help="dual edge ids, comma separated or a JSON list")
    common(p)

    p = sub.add_parser("verify", help="check invariants of a window and attachments")
    p.add_argument("--forest")
    p.add_argument("--basis", action="store_true", help="validate the facial basis")
    p.add_argument("--center", type=int)
    common(p)

    p = sub.add_parser("iso", help="isoperimetric constants and covers")
    g = p.add_mutually_exclusive_group()
    g.add_argument("--exact", dest="mode", action="store_const", const="exact")
    g.add_argument("--greedy", dest="mode", action="store_const", const="greedy")
    g.add_argument("--cover", dest="mode", action="store_const", const="cover")
    p.set_defaults(mode="exact")
    p.add_argument("--eps", type=float)
    p.add_argument("--edge", action="store_true")
    p.add_argument("--finite-mode", choices=["either", "boundary", "cap"], default="either")
    p.add_argument("--seed", type=int, default=0)
    common(p)

    p = sub.add_parser("complex", help="cell complexes and dual-forest removal")
    p.add_argument("action", choices=["dual", "ominus", "collapse", "homology"])
    p.add_argument("--gen", help="built-in complex, e.g. disk:22 or ball:9")
    p.add_argument("--off", action="store_true", help="input is an OFF mesh")
    p.add_argument("--dim", type=int, default=2)
    p.add_argument("--seed", type=int, help="random dual forest seed (default BFS forest)")
    p.add_argument("--cell", help="collapse seed cell as dim:id")
    common(p)

    p = sub.add_parser("render", help="SVG or DOT drawing of a window")
    p.add_argument("--format", choices=["svg", "dot"], default="svg")
    p.add_argument("--forest")
    p.add_argument("--plain", action="store_true", help="positions are Euclidean")
    common(p)

    p = sub.add_parser("run", help="run an experiment config")
    p.add_argument("config")
    p.add_argument("--threads", type=int, help="worker threads (default TREEFORGE_THREADS)")
    p.add_argument("--report")
    return ap


HANDLERS = {
    "gen": cmd_gen, "tile": cmd_tile, "treeing": cmd_treeing, "dual": cmd_dual,
    "forest": cmd_forest, "ominus": cmd_ominus, "verify": cmd_verify, "iso": cmd_iso,
    "complex": cmd_complex, "render": cmd_render,
}
PRODUCERS = {"gen", "tile", "render"}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "run":
            report, path = cmd_run(args)
            _write(args.report or path, dumps(report))
            return 0 if report["ok"] else 1
        config, invs, result, art = HANDLERS[args.command](args)
    except ConfigError as exc:
        sys.stderr.write(dumps(exc.info))
        return 2
    except INPUT_ERRORS as exc:
        sys.stderr.write(dumps({"error": type(exc).__name__, "detail": str(exc)}))
        return 2
    except TreeforgeError as exc:
        config, result, art = {"argv": list(argv or sys.argv[1:])}, {}, None
        invs = [inv("command completed", False, f"{type(exc).__name__}: {exc}")]
    report = build_report(args.command, config, invs, result)
    if args.command in PRODUCERS:
        if art is not None:
            _write(args.output, art)
        if args.report:
            _write(args.report, dumps(report))
    else:
        if art is not None and args.output:
            _write(args.output, art)
        _write(args.report, dumps(report))
    return 0 if report["ok"] else 1


if __name__ == "__main__":
    sys.exit(main())
