"""Command-line front end."""

from __future__ import annotations

import argparse
import json
import os
import random
import sys
from dataclasses import dataclass, field
from typing import List, Optional

from .chorddiag import branch_reduce, diagram_from_word, format_chords, parse_chords, slide_normal_form
from .errors import ParseError, PtolemyError
from .fatgraph import FatGraph, MoveSequence, classify_move, format_fat, parse_fat, validate, whitehead_move
from .freegroup import EndoMap, abelianization_matrix, apply_endo, compose_endos, format_word
from .magnus import EvaluatedMagnus, magnus_of_sequence
from .marking import SL2, parse_marking, solve_marking, transport
from .nielsen import boundary_word, greedy, marking_from_generators, nielsen_of_move, nielsen_of_sequence
from .symplectic import (
    MODES,
    geometric_marking,
    h_basis,
    identity_extension,
    is_symplectic_matrix,
    matmul,
    normalization_matrix,
    sp_of_move,
    sp_of_sequence,
    symplectic_basis,
    transpose,
)

SCHEMA = 1


# ---------------------------------------------------------------------------
# random walks and the self-check harness


def movable_edges(g: FatGraph) -> List[int]:
    return [e for e, _ in g.edges() if e != g.tail_edge]


def random_walk(g: FatGraph, steps: int, rng: random.Random) -> MoveSequence:
    seq = MoveSequence(g)
    for _ in range(steps):
        seq = seq.then(rng.choice(movable_edges(seq.end)))
    return seq


def _touching(g: FatGraph, e: int, f: int) -> bool:
    ends = lambda x: {g.head(x), g.head(g.inv[x])}  # noqa: E731
    return bool(ends(e) & ends(f))


@dataclass
class CheckReport:
    seed: int
    genus: int
    steps: int
    counts: dict = field(default_factory=dict)
    failures: List[str] = field(default_factory=list)

    def tick(self, name: str, ok: bool, detail: str = "") -> None:
        self.counts[name] = self.counts.get(name, 0) + 1
        if not ok:
            self.failures.append(f"{name}: {detail}")

    @property
    def ok(self) -> bool:
        return not self.failures


EXACT_LIMIT = 200


def selfcheck(genus: int, walk: int, seed: int, magnus: bool = True, sp: bool = True) -> CheckReport:
    """Random walk from the symplectic diagram checking the groupoid relations
    at every step and the representations along every prefix.

    The prefix checks compare independent computations.  Composed Nielsen
    maps are checked against a marking carried by transport, exactly while
    the words stay short and in SL(2, F_p) throughout.  The evaluated Magnus
    chain rule must satisfy the fundamental formula against the composed
    map.  Products of Sp step matrices must match the abelianized Nielsen
    map conjugated by the normalization matrices.
    """
    from .chorddiag import symplectic_diagram

    rng = random.Random(seed)
    rep = CheckReport(seed, genus, walk)
    n = 2 * genus
    g = symplectic_diagram(genus).graph
    tree = greedy(g)
    group = SL2()
    base = [group.random_element(rng) for _ in range(n)]
    ev = solve_marking(g, tree.tree_edges, dict(zip(tree.generators, base)), group)
    tracker = EvaluatedMagnus(group, base)
    free = marking_from_generators(g)
    acc: Optional[EndoMap] = EndoMap.identity(n)
    hm = geometric_marking(g)
    x0 = symplectic_basis(g, hm)
    n0t = transpose(normalization_matrix(g))
    d = _signs(genus)
    ab = [[int(i == j) for j in range(n)] for i in range(n)]
    sp_acc = [row[:] for row in ab]
    for k in range(walk):
        edges = movable_edges(g)
        e = rng.choice(edges)
        g2 = whitehead_move(g, e)
        rep.tick("involutive", whitehead_move(g2, e).canonical() == g.canonical(), f"step {k} edge {e}")
        apart = [f for f in edges if f != e and not _touching(g, e, f)]
        if apart:
            f = rng.choice(apart)
            ef = whitehead_move(whitehead_move(g, e), f)
            fe = whitehead_move(whitehead_move(g, f), e)
            rep.tick("commute", ef == fe, f"step {k} edges {e} {f}")
        near = [f for f in edges if f != e and _touching(g, e, f)]
        if near:
            f = rng.choice(near)
            h = g
            for x in (e, f, e, f, e):
                h = whitehead_move(h, x)
            rep.tick("pentagon", h.canonical() == g.canonical(), f"step {k} edges {e} {f}")
        phi = nielsen_of_move(g, e)
        rep.tick("boundary", apply_endo(phi, boundary_word(g2)) == boundary_word(g), f"step {k} edge {e}")
        ev = transport(g, ev, e)
        if acc is not None:
            free = transport(g, free, e)
            acc = compose_endos(acc, phi)
        if magnus:
            tracker.push(phi)
        else:
            tracker.current = [group.evaluate(w, tracker.current) for w in phi.images]
        ab = matmul(abelianization_matrix(phi), ab)
        if sp:
            step = sp_of_move(g, hm, e)
            rep.tick("sp_form", is_symplectic_matrix(step), f"step {k} edge {e}")
            sp_acc = matmul(sp_acc, step)
            hm = transport(g, hm, e)
        g = g2
        gens = greedy(g).generators
        rep.tick("nielsen", [ev[x] for x in gens] == tracker.current, f"prefix {k + 1}")
        if acc is not None:
            rep.tick("nielsen_exact", EndoMap([free[x] for x in gens]) == acc, f"prefix {k + 1}")
            if max(len(w.letters) for w in acc.images) > EXACT_LIMIT:
                acc = None
        if magnus:
            rep.tick("magnus", not tracker.fundamental_defect(base), f"prefix {k + 1}")
        if sp:
            # with D the sign matrix and N the normalization matrices,
            # sp = D N_0^{-T} ab^T N_k^T D must agree with the step product
            lhs = matmul(n0t, matmul(d, sp_acc))
            rhs = matmul(transpose(ab), matmul(transpose(normalization_matrix(g)), d))
            ok = lhs == rhs and symplectic_basis(g, hm) == matmul(x0, sp_acc)
            rep.tick("sp", ok, f"prefix {k + 1}")
    return rep


def _signs(genus: int):
    return [[(-1 if i % 2 == 0 else 1) * int(i == j) for j in range(2 * genus)] for i in range(2 * genus)]


# ---------------------------------------------------------------------------
# input and output


def read_graph(path: str) -> FatGraph:
    text = sys.stdin.read() if path == "-" else open(path).read()
    first = next((ln.strip() for ln in text.splitlines() if ln.strip()), "")
    if first.startswith("core:"):
        return parse_chords(text).graph
    return parse_fat(text)


def _edges(args, g: FatGraph) -> List[int]:
    if args.edge is not None and args.edges is not None:
        raise ParseError("give --edge or --edges, not both")
    if args.edge is not None:
        return [args.edge]
    if args.edges is not None:
        try:
            return [int(x) for x in args.edges.replace(",", " ").split()]
        except ValueError as exc:
            raise ParseError(f"bad edge list {args.edges!r}") from exc
    raise ParseError("an edge is required (--edge or --edges)")


def _sequence(args, g: FatGraph) -> MoveSequence:
    return MoveSequence.from_edges(g, _edges(args, g))


def _h_marking(args, g: FatGraph):
    if getattr(args, "marking", None):
        return parse_marking(open(args.marking).read(), "h")
    return geometric_marking(g)


def _int_rows(path: str) -> List[List[int]]:
    rows = []
    for ln in open(path).read().splitlines():
        ln = ln.strip()
        if not ln or ln.startswith("#"):
            continue
        _, _, rest = ln.rpartition(":")
        try:
            rows.append([int(x) for x in rest.split()])
        except ValueError as exc:
            raise ParseError(f"bad vector line {ln!r}") from exc
    return rows


class Output:
    def __init__(self, command: str, as_json: bool):
        self.command = command
        self.as_json = as_json
        self.data = {"schema": SCHEMA, "command": command}
        self.lines: List[str] = []

    def put(self, key: str, value, text: Optional[str] = None) -> None:
        self.data[key] = value
        if text is None:
            text = value if isinstance(value, str) and "\n" in value else f"{key}: {value}"
        self.lines.append(text.rstrip("\n"))

    def emit(self) -> None:
        if self.as_json:
            print(json.dumps(self.data, sort_keys=True))
        else:
            print("\n".join(self.lines))


def _endo_json(phi: EndoMap):
    return [format_word(w) for w in phi.images]


def _endo_text(phi: EndoMap) -> str:
    return "\n".join(f"x{i} -> {format_word(w) or '1'}" for i, w in enumerate(phi.images, 1))


def _matrix_text(m) -> str:
    return "\n".join(" ".join(str(x) for x in row) for row in m)


# ---------------------------------------------------------------------------
# subcommands


def cmd_validate(args, out: Output) -> int:
    r = validate(read_graph(args.file))
    out.put("genus", r.genus)
    out.put("boundary_cycles", r.boundary_cycles)
    out.put("vertices", r.vertex_count)
    out.put("edges", r.edge_count)
    out.put("bordered", r.bordered)
    out.put("trivalent", r.trivalent)
    out.put("violations", list(r.violations), "violations: " + ("; ".join(r.violations) or "none"))
    return 0 if r.ok else 1


def cmd_genus(args, out: Output) -> int:
    out.put("genus", read_graph(args.file).genus(), None)
    return 0


def cmd_generators(args, out: Output) -> int:
    t = greedy(read_graph(args.file))
    out.put("tree_edges", sorted(t.tree_edges))
    out.put("generators", list(t.generators))
    return 0


def cmd_express(args, out: Output) -> int:
    g = read_graph(args.file)
    d = g.tail if args.dart is None else args.dart
    if d not in g.inv:
        raise ParseError(f"no dart {d}")
    out.put("dart", d)
    out.put("word", format_word(marking_from_generators(g)[d]))
    return 0


def cmd_move(args, out: Output) -> int:
    g = read_graph(args.file)
    s = _sequence(args, g)
    out.put("types", [str(st.type) for st in s.steps])
    out.put("fat", format_fat(s.end))
    return 0


def cmd_classify(args, out: Output) -> int:
    g = read_graph(args.file)
    edges = [args.edge] if args.edge is not None else movable_edges(g)
    types = {str(g.edge_of(e)): str(classify_move(g, e)) for e in edges}
    out.put("types", types, "\n".join(f"{e}: {t}" for e, t in types.items()))
    return 0


def cmd_nielsen(args, out: Output) -> int:
    g = read_graph(args.file)
    s = _sequence(args, g)
    phi = nielsen_of_sequence(s) if len(s) != 1 else nielsen_of_move(g, s.edges[0], check=True)
    out.put("images", _endo_json(phi), _endo_text(phi))
    return 0


def cmd_magnus(args, out: Output) -> int:
    g = read_graph(args.file)
    mode = "abelianized" if args.abelianized else "free"
    m = magnus_of_sequence(_sequence(args, g), mode)
    rows = m.to_json()
    out.put("mode", mode)
    out.put("matrix", rows, "\n".join(" | ".join(x or "0" for x in row) for row in rows))
    return 0


def cmd_sp(args, out: Output) -> int:
    g = read_graph(args.file)
    s = _sequence(args, g)
    m = sp_of_sequence(s, _h_marking(args, g))
    out.put("matrix", m, _matrix_text(m))
    return 0


def cmd_reduce(args, out: Output) -> int:
    g = read_graph(args.file)
    s, c = branch_reduce(g)
    out.put("moves", list(s.edges))
    out.put("types", [str(st.type) for st in s.steps])
    out.put("diagram", format_chords(c))
    return 0


def cmd_normal(args, out: Output) -> int:
    g = read_graph(args.file)
    s1, c = branch_reduce(g)
    s2, c2 = slide_normal_form(c)
    out.put("moves", list(s1.edges + s2.edges))
    out.put("diagram", format_chords(c2))
    return 0


def cmd_realize(args, out: Output) -> int:
    try:
        letters = [int(x) for x in args.word.replace(",", " ").split()]
    except ValueError as exc:
        raise ParseError(f"bad word {args.word!r}") from exc
    if any(a == 0 for a in letters):
        raise ParseError("letter 0 is not allowed")
    r = diagram_from_word(letters)
    out.put("accepted", r.accepted)
    out.put("boundary_cycles", r.boundary_cycles)
    if r.accepted:
        out.put("relabel", {str(k): v for k, v in sorted(r.relabel.items())})
        out.put("fat", format_fat(r.diagram.graph.canonical_graph()))
    return 0


def cmd_idext(args, out: Output) -> int:
    g = read_graph(args.file)
    s = _sequence(args, g) if (args.edge is not None or args.edges is not None) else MoveSequence(g)
    m = _h_marking(args, g)
    data = None
    if args.mode == "torelli":
        data = _int_rows(args.basis) if args.basis else h_basis(g, m)
    elif args.mode == "lagrangian":
        if args.lagrangian:
            data = _int_rows(args.lagrangian)
        else:
            cols = transpose(symplectic_basis(g, m))
            data = [cols[2 * p + 1] for p in range(g.genus())]
    phi = identity_extension(s, args.mode, data, m)
    out.put("mode", args.mode)
    out.put("images", _endo_json(phi), _endo_text(phi))
    out.put("abelianized", abelianization_matrix(phi), _matrix_text(abelianization_matrix(phi)))
    return 0


def cmd_selfcheck(args, out: Output) -> int:
    seed = args.seed if args.seed is not None else int(os.environ.get("PTOLEMY_SEED", "0"))
    rep = selfcheck(args.genus, args.walk, seed)
    out.put("seed", seed)
    out.put("checks", dict(sorted(rep.counts.items())), "checks: " + ", ".join(f"{k}={v}" for k, v in sorted(rep.counts.items())))
    out.put("failures", rep.failures, "\n".join(rep.failures) if rep.failures else "all checks passed")
    return 0 if rep.ok else 1


COMMANDS = {
    "validate": (cmd_validate, "check the fatgraph conditions and report genus"),
    "genus": (cmd_genus, "print the genus"),
    "generators": (cmd_generators, "greedy tree edges and generator darts"),
    "express": (cmd_express, "value of a dart in the greedy generators"),
    "move": (cmd_move, "apply Whitehead moves and print the result"),
    "classify": (cmd_classify, "type of the move on each edge"),
    "nielsen": (cmd_nielsen, "Nielsen automorphism of a move sequence"),
    "magnus": (cmd_magnus, "Magnus matrix of a move sequence"),
    "sp": (cmd_sp, "symplectic matrix of a move sequence"),
    "reduce": (cmd_reduce, "branch reduction to a chord diagram"),
    "normal": (cmd_normal, "slide normal form"),
    "realize": (cmd_realize, "chord diagram of a boundary word"),
    "idext": (cmd_idext, "identity extension of a move sequence"),
    "selfcheck": (cmd_selfcheck, "random-walk verification"),
}


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="ptolemy", description="Fatgraphs, Whitehead moves and their representations.")
    p.add_argument("--json", action="store_true", help="emit JSON")
    sub = p.add_subparsers(dest="command", required=True)
    for name, (_, help_) in COMMANDS.items():
        sp = sub.add_parser(name, help=help_)
        sp.add_argument("--json", action="store_true", default=argparse.SUPPRESS, help="emit JSON")
        if name not in ("realize", "selfcheck"):
            sp.add_argument("file", help=".fat or chord-diagram file, '-' for stdin")
        if name in ("move", "classify", "nielsen", "magnus", "sp", "idext"):
            sp.add_argument("--edge", type=int, help="edge (any of its darts)")
            if name != "classify":
                sp.add_argument("--edges", help="space or comma separated edge list")
        if name in ("sp", "idext"):
            sp.add_argument("--marking", help="H-marking file (default: the geometric marking)")
        if name == "express":
            sp.add_argument("--dart", type=int, help="dart (default: the tail)")
        if name == "magnus":
            sp.add_argument("--abelianized", action="store_true")
        if name == "realize":
            sp.add_argument("--word", required=True, help="letters as signed integers")
        if name == "idext":
            sp.add_argument("--mode", choices=MODES, default="mc")
            sp.add_argument("--basis", help="geometric basis file (torelli)")
            sp.add_argument("--lagrangian", help="Lagrangian basis file")
        if name == "selfcheck":
            sp.add_argument("--genus", type=int, default=1)
            sp.add_argument("--walk", type=int, default=100)
            sp.add_argument("--seed", type=int)
    return p


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    out = Output(args.command, args.json)
    try:
        code = COMMANDS[args.command][0](args, out)
    except PtolemyError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    out.emit()
    return code


if __name__ == "__main__":
    sys.exit(main())
