"""Command-line front end.

Exit status: 0 on success, 1 on domain errors (bad input, unsupported
algebra, failed validation), 2 when an internal consistency check fails.
"""
from __future__ import annotations

import argparse
import json
import re
import sys
from dataclasses import dataclass
from importlib import resources
from pathlib import Path as FsPath

from . import __version__
from . import linalg as la
from .algebra import build_algebra, m_matrix
from .errors import Ambiguous, DomainError, EngineError, NotDimerTree
from .quiver import ParsedQuiver, format_quiver, infer_potential, load, validate_dimer_tree

SCHEMA = 1


@dataclass
class RunConfig:
    subcommand: str
    input: str | None = None
    vertex: str | None = None
    arrow: str | None = None
    module: str | None = None
    dmax: int | None = None
    char: int = 2
    rank: int = 1
    json: bool = False
    dot: str | None = None
    cap: int | None = None
    glue: str | None = None
    show: bool = False
    catalog: bool = True
    strict: bool = False
    trees: int = 20


# -- input helpers ---------------------------------------------------------------------

def bundled_dir():
    return resources.files("cmsyzygy") / "data"


def resolve_input(name: str) -> str:
    """A path on disk, or the bundled example with the same file name."""
    p = FsPath(name)
    if p.exists():
        return str(p)
    cand = bundled_dir() / p.name
    if cand.is_file():
        return str(cand)
    cand = bundled_dir() / (p.name + ".qp")
    if cand.is_file():
        return str(cand)
    raise DomainError(f"cannot read {name}")


def read_input(name: str) -> ParsedQuiver:
    return load(resolve_input(name))


def potential_of(pq: ParsedQuiver):
    """The potential, recovering it from the relations if necessary."""
    if pq.potential is not None:
        return pq.potential, False
    if pq.relations is not None:
        w = infer_potential(pq.quiver, pq.relations)
        if w is not None:
            return w, True
    return None, False


def algebra_of(pq: ParsedQuiver, cap):
    pres = pq.presentation
    if pres is None:
        raise DomainError("the input has neither cycles nor relations")
    return build_algebra(pq.quiver, pres, cap)


def dimer_of(pq: ParsedQuiver):
    from .dimer import analyze

    w, _ = potential_of(pq)
    if w is None:
        raise NotDimerTree("no potential given and none matches the relations")
    return analyze(pq.quiver, w), w


def check_vertex(pq: ParsedQuiver, v):
    if v is None:
        raise DomainError("--vertex is required")
    if v not in pq.quiver.vertices:
        raise DomainError(f"unknown vertex {v!r}")
    return v


# -- module specifications ---------------------------------------------------------------

_SIMPLE_SPEC = re.compile(r"^([PS])(?::|\()?([^():]+)\)?$")


def module_from_spec(a, spec: str, catalog_factory=None):
    """P5, P:5, P(5), S5, rad:<spec>, top:<spec>, omega:<spec>, path:<a*b*...>,
    or a Loewy label such as "1 5/2" looked up in the CM catalog."""
    from .modules import generated_submodule, projective, radical, simple, syzygy, top
    from .quiver import Path

    spec = spec.strip()
    for prefix, fn in (("rad:", lambda m: radical(m)[0]), ("top:", lambda m: top(m)[0]),
                       ("omega:", syzygy)):
        if spec.startswith(prefix):
            return fn(module_from_spec(a, spec[len(prefix):], catalog_factory))
    if spec.startswith("path:"):
        arrows = [x.strip() for x in spec[5:].split("*") if x.strip()]
        for x in arrows:
            if not a.quiver.has_arrow(x):
                raise DomainError(f"unknown arrow {x!r}")
        p = Path.of(a.quiver, arrows)
        nf = a.reduce_word(p.source, p.arrows)
        if nf is None:
            raise DomainError(f"the path {p} is zero in the algebra")
        pj = projective(a, p.source)
        col = [0] * pj.dims[p.target]
        col[pj.basis_paths[p.target].index(nf[1])] = nf[0]
        return generated_submodule(pj, [(p.target, la.column(col))], name=f"{p}A")[0]
    m = _SIMPLE_SPEC.match(spec)
    if m and m.group(2) in a.vertices:
        return (projective if m.group(1) == "P" else simple)(a, m.group(2))
    if spec in a.vertices:
        return simple(a, spec)
    if catalog_factory is not None:
        cat = catalog_factory()
        want = spec.strip("()").strip()
        hits = [e for e in cat.entries if e.label == want]
        if len(hits) > 1:
            raise Ambiguous(f"several catalog entries have the label {want!r}")
        if hits:
            return hits[0].rep
    raise DomainError(f"cannot interpret module {spec!r}")


# -- commands ------------------------------------------------------------------------------

def cmd_validate(cfg: RunConfig):
    pq = read_input(cfg.input)
    w, inferred = potential_of(pq)
    rep = validate_dimer_tree(pq.quiver, w)
    notes = list(rep.notes)
    if inferred:
        notes.append("potential recovered from the relations")
    if w is None and pq.relations is not None:
        notes.append("no signed sum of chordless cycles yields the given relations")
    data = {
        "ok": rep.ok,
        "vertices": len(pq.quiver.vertices),
        "arrows": len(pq.quiver.arrows),
        "chordless_cycles": [" ".join(c) for c in rep.cycles],
        "failures": rep.failures,
        "notes": notes,
    }
    lines = [("PASS" if rep.ok else "FAIL") + f": {data['vertices']} vertices, {data['arrows']} arrows, "
             f"{len(rep.cycles)} chordless cycles"]
    for c in rep.cycles:
        lines.append("  cycle " + " ".join(c))
    lines += ["  failure: " + f for f in rep.failures]
    lines += ["  note: " + n for n in notes]
    return (0 if rep.ok else 1), data, lines


def cmd_basis(cfg: RunConfig):
    pq = read_input(cfg.input)
    a = algebra_of(pq, cfg.cap)
    data = {"dim": a.dim, "length_cap": a.length_cap,
            "basis": {v: [str(p) for p in a.paths_from(v)] for v in a.vertices}}
    lines = [f"dim A = {a.dim}"]
    for v in a.vertices:
        lines.append(f"e_{v}A ({len(data['basis'][v])}): " + ", ".join(data["basis"][v]))
    return 0, data, lines


def cmd_dims(cfg: RunConfig):
    from .algebra import is_schurian

    pq = read_input(cfg.input)
    a = algebra_of(pq, cfg.cap)
    mm = m_matrix(a)
    vs = list(a.vertices)
    data = {"dim": a.dim, "vertices": vs, "projective_dims": {v: len(a.paths_from(v)) for v in vs},
            "m_matrix": [[int(x) for x in row] for row in mm], "schurian": is_schurian(a)}
    width = max([len(v) for v in vs] + [len(str(int(x))) for x in mm.flat] + [1])
    lines = [f"dim A = {a.dim}", "dim P(j): " + "  ".join(f"{v}:{data['projective_dims'][v]}" for v in vs),
             "m[j][i] = dim e_j A e_i (rows j, columns i):",
             " " * (width + 1) + " ".join(v.rjust(width) for v in vs)]
    for v, row in zip(vs, mm):
        lines.append(v.rjust(width) + " " + " ".join(str(int(x)).rjust(width) for x in row))
    lines.append(f"schurian: {'yes' if data['schurian'] else 'no'}")
    return 0, data, lines


def _catalog_factory(a, cfg):
    from .catalog import enumerate_cmp

    box = {}

    def get():
        if "cat" not in box:
            box["cat"] = enumerate_cmp(a, cfg.dmax, cfg.char, cfg.rank, ext_table=False)
        return box["cat"]
    return get


def cmd_module(cfg: RunConfig):
    from .modules import is_cm, is_indecomposable, is_projective, radical_layers

    pq = read_input(cfg.input)
    a = algebra_of(pq, cfg.cap)
    if not cfg.module:
        raise DomainError("--name is required")
    m = module_from_spec(a, cfg.module, _catalog_factory(a, cfg))
    layers = radical_layers(m) if m.dim else []
    rows = [" ".join(v for v in a.vertices for _ in range(layer[v])) for layer in layers]
    data = {"spec": cfg.module, "dim": m.dim, "dim_vector": dict(m.dims), "loewy": rows,
            "indecomposable": bool(m.dim) and is_indecomposable(m), "projective": is_projective(m),
            "cm": is_cm(m)}
    lines = [f"module {cfg.module}: dim {m.dim}",
             "dim vector: " + " ".join(f"{v}:{m.dims[v]}" for v in a.vertices)]
    width = max([len(r) for r in rows] + [1])
    lines.append("Loewy series:")
    lines += ["  " + r.center(width).rstrip() for r in rows]
    lines.append("indecomposable: " + ("yes" if data["indecomposable"] else "no"))
    lines.append("projective: " + ("yes" if data["projective"] else "no"))
    lines.append("CM: " + ("yes" if data["cm"] else "no"))
    return 0, data, lines


def cmd_cmtype(cfg: RunConfig):
    pq = read_input(cfg.input)
    an, _ = dimer_of(pq)
    data = {"total_weight": an.total_weight, "N": an.N, "cm_type": an.cm_type, "notes": an.notes}
    lines = [f"{an.cm_type} (total weight {an.total_weight})", f"N = {an.N}"]
    lines += ["note: " + n for n in an.notes]
    return 0, data, lines


def cmd_zigzag(cfg: RunConfig):
    from .dimer import cozigzag_path, weight_of_length, zigzag_path

    pq = read_input(cfg.input)
    an, _ = dimer_of(pq)
    if not cfg.arrow:
        raise DomainError("--arrow is required")
    if not pq.quiver.has_arrow(cfg.arrow):
        raise DomainError(f"unknown arrow {cfg.arrow!r}")
    z = zigzag_path(pq.quiver, an.cycles, cfg.arrow)
    c = cozigzag_path(pq.quiver, an.cycles, cfg.arrow)
    data = {"arrow": cfg.arrow, "zigzag": z, "weight": weight_of_length(len(z)),
            "cozigzag": c, "coweight": weight_of_length(len(c))}
    lines = [f"zigzag {cfg.arrow}: {' '.join(z)} (length {len(z)}, weight {data['weight']})",
             f"cozigzag {cfg.arrow}: {' '.join(c)} (length {len(c)}, coweight {data['coweight']})"]
    return 0, data, lines


def _verdict(x):
    return {True: "true", False: "false", None: "undecided"}[x]


def _report(cfg: RunConfig):
    from .catalog import enumerate_cmp
    from .reduction import quotient_algebra, reduction_report

    pq = read_input(cfg.input)
    v = check_vertex(pq, cfg.vertex)
    a = algebra_of(pq, cfg.cap)
    cat = enumerate_cmp(a, cfg.dmax, cfg.char, cfg.rank, ext_table=False) if cfg.catalog else None
    rep = reduction_report(a, v, catalog=cat)
    b = quotient_algebra(a, v, cfg.cap)
    return a, b, rep


def cmd_reduce(cfg: RunConfig):
    a, b, rep = _report(cfg)
    j = rep.ideal
    data = {
        "vertex": rep.vertex,
        "verdicts": {k: rep.verdicts[k] for k in "abcdef"},
        "J": {"dim": j.dim, "summands": j.describe(), "direct": j.direct,
              "types": [{"dim_vector": list(t.dim_vector), "multiplicity": m, "projective": p}
                        for t, m, p in j.types]},
        "B": {"dim": b.dim, "vertices": list(b.vertices), "relations": [str(r) for r in b.relations]},
        "witness": rep.witnesses.get("b") if isinstance(rep.witnesses.get("b"), str) else None,
        "notes": rep.notes,
    }
    names = {"a": "stable CM equivalence", "b": "J projective", "c": "dim J = sum m_ji dim P(i)",
             "d": "P(i)^m_ji -> P(j) injective", "e": "rad P(i) generated away from i",
             "f": "generation sequence exists"}
    lines = [f"reduction at vertex {rep.vertex}",
             f"J = {j.describe()}  (dim {j.dim})",
             f"B = A/Ae_{rep.vertex}A: dim {b.dim}, vertices {' '.join(b.vertices)}"]
    lines += ["  relation: " + str(r) for r in b.relations]
    for k in "abcdef":
        lines.append(f"({k}) {names[k]}: {_verdict(rep.verdicts[k])}")
    if data["witness"]:
        lines.append("witness: " + data["witness"])
    lines += ["note: " + n for n in rep.notes]
    return 0, data, lines


def cmd_equiv(cfg: RunConfig):
    cfg.catalog = False
    a, b, rep = _report(cfg)
    yes = bool(rep.verdicts["b"])
    if yes:
        text = f"YES (J = {rep.ideal.describe()} is projective)"
    else:
        text = f"NO (witness: {rep.witnesses.get('b')})"
    return 0, {"vertex": rep.vertex, "equivalent": yes, "text": text}, [text]


def cmd_minimal(cfg: RunConfig):
    from .dimer import cm_minimal

    pq = read_input(cfg.input)
    an, _ = dimer_of(pq)
    mr = cm_minimal(an)
    per = {}
    lines = [f"{an.cm_type} (total weight {an.total_weight})"]
    for v, verdict in mr.verdicts.items():
        per[v] = {"preserves": verdict.value, "witness": list(verdict.witness["cycle"]) if verdict.witness else None}
        extra = ""
        if verdict.witness:
            wt = verdict.witness
            extra = (f"  [3-cycle {' '.join(wt['cycle'])}, coweight {wt['coweight']}, weight {wt['weight']}]")
        lines.append(f"vertex {v}: {'preserves' if verdict.value else 'changes'} the CM-type{extra}")
    lines.append(f"CM-minimal: {'yes' if mr.minimal else 'no'}")
    return 0, {"cm_type": an.cm_type, "minimal": mr.minimal, "vertices": per}, lines


def _glued(cfg: RunConfig):
    """(q, w, g, q0, w0) from either a base tree + --glue or a glued file with an involution."""
    from .skew import action_from_involution, fibered_product, split_fibered

    pq = read_input(cfg.input)
    w, _ = potential_of(pq)
    if w is None:
        raise NotDimerTree("no potential given")
    if cfg.glue:
        q, wg, g = fibered_product(pq.quiver, w, cfg.glue)
        return q, wg, g, pq.quiver, w
    if pq.involution is None:
        raise DomainError("give --glue ARROW or an input file with an involution line")
    g = action_from_involution(pq.quiver, pq.involution)
    q0, w0, _ = split_fibered(pq.quiver, w, g)
    return pq.quiver, w, g, q0, w0


def skew_dot(qb) -> str:
    lines = ["digraph QB {"]
    for v in qb.vertices:
        lines.append(f'  "{v}";')
    for a, s, t in qb.arrows:
        lines.append(f'  "{s}" -> "{t}" [label="{a}"];')
    lines.append("}")
    return "\n".join(lines) + "\n"


def cmd_skew(cfg: RunConfig):
    from .dimer import analyze
    from .skew import d_type, skew_quiver

    q, w, g, _, _ = _glued(cfg)
    an = analyze(q, w)
    sq = skew_quiver(q, g)
    text = format_quiver(sq.quiver)
    dot = skew_dot(sq.quiver)
    dt = d_type(an)
    data = {"vertices": list(sq.quiver.vertices), "arrows": [list(x) for x in sq.quiver.arrows],
            "glued_total_weight": an.total_weight, "d_type": dt.label, "text": text, "dot": dot}
    lines = [f"# skew group quiver of the glued algebra (total weight {an.total_weight}, CM-type {dt.label})"]
    lines += text.rstrip("\n").split("\n")
    if cfg.dot:
        _write(cfg.dot, dot)
    else:
        lines += ["", dot.rstrip("\n")]
    return 0, data, lines


def cmd_transfer(cfg: RunConfig):
    from .skew import minimality_transfer_check

    _, _, _, q0, w0 = _glued(cfg)
    alpha = cfg.glue
    if alpha is None:
        _, _, g, _, _ = _glued(cfg)
        alpha = g.alpha
    tr = minimality_transfer_check(q0, w0, alpha, strict=cfg.strict)
    data = {"a_minimal": tr.a_minimal, "ag_minimal": tr.ag_minimal, "agree": tr.agree,
            "a_type": tr.a_type, "ag_type": tr.ag_type.label,
            "a_verdicts": tr.a_verdicts, "orbit_verdicts": tr.orbit_verdicts, "shared": tr.shared, "notes": tr.notes}
    lines = [f"A: CM-type {tr.a_type}, CM-minimal {'yes' if tr.a_minimal else 'no'}",
             f"AG: CM-type {tr.ag_type.label}, CM-minimal {'yes' if tr.ag_minimal else 'no'}",
             "vertices of A preserving the type: " + (", ".join(v for v, x in tr.a_verdicts.items() if x) or "none"),
             "vertices of AG preserving the type: "
             + (", ".join(k for k, x in tr.orbit_verdicts.items() if x) or "none"),
             f"agreement: {'yes' if tr.agree else 'no'}"]
    lines += ["note: " + n for n in tr.notes]
    return 0, data, lines


def cmd_functor_f(cfg: RunConfig):
    from .reduction import functor_F, ideal_J, module_tag, quotient_algebra

    pq = read_input(cfg.input)
    v = check_vertex(pq, cfg.vertex)
    if not cfg.module:
        raise DomainError("--module is required")
    a = algebra_of(pq, cfg.cap)
    x = module_from_spec(a, cfg.module, _catalog_factory(a, cfg))
    b = quotient_algebra(a, v, cfg.cap)
    fx = functor_F(ideal_J(a, v), x, b)
    tag = module_tag(fx) if fx.dim else "0"
    data = {"module": cfg.module, "vertex": v, "image": tag, "dim_vector": dict(fx.dims)}
    lines = [f"F({module_tag(x)}) = {tag}",
             "dim vector over B: " + " ".join(f"{w}:{fx.dims[w]}" for w in b.vertices)]
    return 0, data, lines


def cmd_enumerate(cfg: RunConfig):
    from .catalog import enumerate_cmp

    pq = read_input(cfg.input)
    a = algebra_of(pq, cfg.cap)
    cat = enumerate_cmp(a, cfg.dmax, cfg.char, cfg.rank)
    entries = [{"index": e.index, "label": e.label, "dim_vector": list(e.dim_vector), "projective": e.projective,
                "top": e.top, "omega": cat.omega.get(e.index)} for e in cat.entries]
    data = {"count": len(cat), "nonprojective": len(cat.nonprojective()), "entries": entries,
            "ext": [[int(x) for x in row] for row in cat.ext] if cat.ext is not None else None,
            "settings": {"char": cat.settings["char"], "ambient_rank": cat.settings["ambient_rank"]}}
    lines = [f"{len(cat)} indecomposable CM modules ({len(cat.nonprojective())} non-projective)"]
    for e in cat.entries:
        om = cat.omega.get(e.index)
        tail = f"  Ω -> {om}" if om is not None else ""
        lines.append(f"  {e.describe()}  ({e.label}){tail}")
    if cfg.dot:
        _write(cfg.dot, cat.to_dot())
    return 0, data, lines


def cmd_golden(cfg: RunConfig):
    from .golden import run_golden

    results = run_golden(cfg.input, cfg.trees)
    ok = all(r["passed"] for r in results)
    width = max(len(r["name"]) for r in results)
    lines = [f"{'criterion'.ljust(width)}  result  detail"]
    for r in results:
        lines.append(f"{r['name'].ljust(width)}  {'PASS' if r['passed'] else 'FAIL'}    {r['detail']}")
    lines.append(f"{sum(r['passed'] for r in results)}/{len(results)} passed")
    return (0 if ok else 1), {"results": results, "passed": ok}, lines


def _write(path: str, text: str) -> None:
    if path == "-":
        sys.stdout.write(text)
        return
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(text)


COMMANDS = {
    "validate": cmd_validate, "basis": cmd_basis, "dims": cmd_dims, "module": cmd_module,
    "cmtype": cmd_cmtype, "zigzag": cmd_zigzag, "reduce": cmd_reduce, "equiv": cmd_equiv,
    "minimal": cmd_minimal, "skew": cmd_skew, "transfer-check": cmd_transfer,
    "functor-f": cmd_functor_f, "enumerate": cmd_enumerate, "golden": cmd_golden,
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="machine-readable output")
    common.add_argument("--cap", type=int, default=None, help="override the rewriting length cap")

    p = argparse.ArgumentParser(prog="cmsyzygy", description="CM modules over Jacobian algebras of quivers.")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="subcommand", required=True)

    def add(name, help_, needs_input=True):
        sp = sub.add_parser(name, help=help_, parents=[common])
        if needs_input:
            sp.add_argument("input", help=".qp file (bundled examples may be named by file name)")
        return sp

    add("validate", "check the dimer tree axioms")
    add("basis", "normal-form path basis")
    add("dims", "dimensions and the m-matrix")
    sp = add("module", "describe a module")
    sp.add_argument("--name", dest="module", required=True, help="P5, S:5, rad:P5, omega:S5, path:a*b, or a label")
    sp.add_argument("--show", action="store_true", help="print the Loewy series (always shown)")
    add("cmtype", "total weight and CM-type")
    sp = add("zigzag", "zigzag and co-zigzag paths of a boundary arrow")
    sp.add_argument("--arrow", required=True)
    for name, help_ in (("reduce", "reduction report at a vertex"), ("equiv", "YES/NO stable CM equivalence")):
        sp = add(name, help_)
        sp.add_argument("--vertex", required=True)
        sp.add_argument("--dmax", type=int, default=None)
        sp.add_argument("--char", type=int, default=2)
        if name == "reduce":
            sp.add_argument("--no-catalog", dest="catalog", action="store_false",
                            help="skip the catalog; leaves (e) and (f) undecided when (b) fails")
    add("minimal", "per-vertex reduction criterion")
    for name, help_ in (("skew", "skew group quiver"), ("transfer-check", "minimality transfer check")):
        sp = add(name, help_)
        sp.add_argument("--glue", default=None, help="boundary arrow to glue two copies along")
        if name == "skew":
            sp.add_argument("--dot", default=None, help="write the DOT rendering here ('-' for stdout)")
        else:
            sp.add_argument("--strict", action="store_true",
                            help="fail when a qualifying 3-cycle meets a vertex fixed by sigma")
    sp = add("functor-f", "image of a module under F")
    sp.add_argument("--vertex", required=True)
    sp.add_argument("--module", required=True)
    sp.add_argument("--dmax", type=int, default=None)
    sp.add_argument("--char", type=int, default=2)
    sp = add("enumerate", "catalog of indecomposable CM modules")
    sp.add_argument("--dmax", type=int, default=None)
    sp.add_argument("--char", type=int, default=2)
    sp.add_argument("--rank", type=int, default=1, help="number of projective summands in the ambient module")
    sp.add_argument("--dot", default=None)
    sp = sub.add_parser("golden", help="run the bundled acceptance examples", parents=[common])
    sp.add_argument("input", nargs="?", default=None, help="directory with the example files")
    sp.add_argument("--trees", type=int, default=20, help="random dimer trees in the property sweep")
    return p


def config_from_args(ns) -> RunConfig:
    cfg = RunConfig(ns.subcommand)
    for k in ("input", "vertex", "arrow", "module", "dmax", "char", "rank", "json", "dot", "cap", "glue",
              "show", "catalog", "strict", "trees"):
        if hasattr(ns, k):
            setattr(cfg, k, getattr(ns, k))
    return cfg


def run(cfg: RunConfig, out=None) -> int:
    out = out or sys.stdout
    try:
        status, data, lines = COMMANDS[cfg.subcommand](cfg)
    except DomainError as e:
        return _fail(cfg, out, 1, type(e).__name__, str(e))
    except EngineError as e:
        return _fail(cfg, out, 2, type(e).__name__, str(e))
    except (OSError, ValueError) as e:
        return _fail(cfg, out, 1, type(e).__name__, str(e))
    if cfg.json:
        payload = {"schema": SCHEMA, "command": cfg.subcommand, "status": status, "result": data}
        out.write(json.dumps(payload, indent=2, ensure_ascii=False, default=str) + "\n")
    else:
        out.write("\n".join(lines) + "\n")
    return status


def _fail(cfg, out, status, kind, msg) -> int:
    if cfg.json:
        payload = {"schema": SCHEMA, "command": cfg.subcommand, "status": status,
                   "error": {"type": kind, "message": msg}}
        out.write(json.dumps(payload, indent=2, ensure_ascii=False) + "\n")
    else:
        print(f"error ({kind}): {msg}", file=sys.stderr)
    return status


def main(argv=None) -> int:
    ns = build_parser().parse_args(argv)
    return run(config_from_args(ns))


if __name__ == "__main__":
    sys.exit(main())
