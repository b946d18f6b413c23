"""Line-oriented text formats for programs and physical circuits.

Program grammar (``#`` starts a comment, keywords are case-insensitive)::

    dims <nx> <ny> <nz>
    name <text>
    op col <kind> <x> <y>
    op <kind>cols <x> <y>                  # shorthand for op col
    op twocol <kind> <x1> <y1> <x2> <y2>
    op czlayer oe|eo
    op hlayer
    op reset <x> <y>
    op boundary <kind> (<x> <y> <z>)+
    op note <text>

Physical grammar::

    qubits <n>
    layout <lineLength> <planes> <roles>
    g <kind> <sites...> @t<step> #src<id> [^<op>]
"""

from __future__ import annotations

import re

from ..errors import ParseError
from .model import (Annotation, BoundaryOp, Circuit, Column, ColumnGate, ColumnReset, GateKind,
                    GlobalHLayer, LatticeDims, Layout2D, PhysGate, PhysicalCircuit, Site,
                    TwoColumnGate, VerticalCZLayer)
from ..errors import HoloError


def _strip_comment(line: str) -> str:
    m = re.search(r"(^|\s)#(?!src)", line)
    return line[:m.start()] if m else line


def _int(tok: str, lineno: int) -> int:
    try:
        return int(tok)
    except ValueError:
        raise ParseError("expected an integer", lineno, tok) from None


def _kind(tok: str, lineno: int) -> GateKind:
    try:
        return GateKind.parse(tok)
    except KeyError:
        raise ParseError("unknown gate kind", lineno, tok) from None


def parse_circuit(text: str) -> Circuit:
    dims = None
    name = "circuit"
    ops = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = _strip_comment(raw).strip()
        if not line:
            continue
        toks = line.split()
        head = toks[0].lower()
        if head == "dims":
            if len(toks) != 4 or dims is not None:
                raise ParseError("dims takes three integers, once", lineno, line)
            try:
                dims = LatticeDims(*(_int(t, lineno) for t in toks[1:]))
            except HoloError as exc:
                if isinstance(exc, ParseError):
                    raise
                raise ParseError(str(exc), lineno, toks[1]) from None
            continue
        if head == "name":
            name = line.split(None, 1)[1] if len(toks) > 1 else ""
            continue
        if head != "op":
            raise ParseError("expected 'dims', 'name' or 'op'", lineno, toks[0])
        if dims is None:
            raise ParseError("op before dims", lineno, toks[0])
        if len(toks) < 2:
            raise ParseError("missing op type", lineno, line)
        ops.append(_parse_op(toks[1:], line, lineno))
    if dims is None:
        raise ParseError("missing dims line", 0, "")
    return Circuit(dims, tuple(ops), name)


def _parse_op(toks: list[str], line: str, lineno: int):
    word = toks[0].lower()
    args = toks[1:]

    def nargs(k):
        if len(args) != k:
            raise ParseError(f"'{word}' takes {k} arguments", lineno, " ".join(args) or word)

    if word == "col":
        nargs(3)
        return ColumnGate(_kind(args[0], lineno), Column(_int(args[1], lineno), _int(args[2], lineno)))
    if word.endswith("cols") and len(word) > 4:
        nargs(2)
        return ColumnGate(_kind(word[:-4], lineno), Column(_int(args[0], lineno), _int(args[1], lineno)))
    if word == "twocol":
        nargs(5)
        v = [_int(a, lineno) for a in args[1:]]
        return TwoColumnGate(_kind(args[0], lineno), Column(v[0], v[1]), Column(v[2], v[3]))
    if word == "czlayer":
        nargs(1)
        par = args[0].lower()
        if par not in ("oe", "eo"):
            raise ParseError("parity must be oe or eo", lineno, args[0])
        return VerticalCZLayer(par)
    if word == "hlayer":
        nargs(0)
        return GlobalHLayer()
    if word == "reset":
        nargs(2)
        return ColumnReset(Column(_int(args[0], lineno), _int(args[1], lineno)))
    if word == "boundary":
        if len(args) < 4 or (len(args) - 1) % 3:
            raise ParseError("boundary takes a kind and x y z triples", lineno, " ".join(args))
        v = [_int(a, lineno) for a in args[1:]]
        sites = tuple(Site(v[i], v[i + 1], v[i + 2]) for i in range(0, len(v), 3))
        return BoundaryOp(_kind(args[0], lineno), sites)
    if word == "note":
        return Annotation(line.split(None, 2)[2] if len(args) else "")
    raise ParseError("unknown op type", lineno, toks[0])


def serialize_circuit(c: Circuit) -> str:
    d = c.dims
    lines = [f"dims {d.nx} {d.ny} {d.nz}"]
    if c.name:
        lines.append(f"name {c.name}")
    for op in c.ops:
        if isinstance(op, ColumnGate):
            lines.append(f"op col {op.kind.token} {op.col.x} {op.col.y}")
        elif isinstance(op, TwoColumnGate):
            a, b = op.col_a, op.col_b
            lines.append(f"op twocol {op.kind.token} {a.x} {a.y} {b.x} {b.y}")
        elif isinstance(op, VerticalCZLayer):
            lines.append(f"op czlayer {op.parity}")
        elif isinstance(op, GlobalHLayer):
            lines.append("op hlayer")
        elif isinstance(op, ColumnReset):
            lines.append(f"op reset {op.col.x} {op.col.y}")
        elif isinstance(op, BoundaryOp):
            sites = " ".join(f"{s.x} {s.y} {s.z}" for s in op.sites)
            lines.append(f"op boundary {op.kind.token} {sites}")
        elif isinstance(op, Annotation):
            lines.append(f"op note {op.text}".rstrip())
    return "\n".join(lines) + "\n"


_GATE_RE = re.compile(r"^g\s+(\S+)((?:\s+\d+)+)\s+@t(-?\d+)\s+#src(\d+)(?:\s+\^(-?\d+))?$", re.I)


def serialize_physical(pc: PhysicalCircuit) -> str:
    lines = [f"qubits {pc.n_qubits}"]
    if pc.layout is not None:
        lines.append(f"layout {pc.layout.line_length} {pc.planes} {pc.layout.roles()}")
    for g in pc.gates:
        tail = f" ^{g.op_index}" if g.op_index != -1 else ""
        sites = " ".join(str(s) for s in g.sites)
        lines.append(f"g {g.kind.token} {sites} @t{g.timestep} #src{g.source}{tail}")
    return "\n".join(lines) + "\n"


def parse_physical(text: str) -> PhysicalCircuit:
    n = None
    layout = None
    planes = 0
    gates = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = _strip_comment(raw).strip()
        if not line:
            continue
        toks = line.split()
        head = toks[0].lower()
        if head == "qubits":
            if len(toks) != 2:
                raise ParseError("qubits takes one integer", lineno, line)
            n = _int(toks[1], lineno)
        elif head == "layout":
            if len(toks) != 4:
                raise ParseError("layout takes length, planes and roles", lineno, line)
            length = _int(toks[1], lineno)
            planes = _int(toks[2], lineno)
            layout = Layout2D((length + 1) // 2)
            if layout.line_length != length or layout.roles() != toks[3]:
                raise ParseError("layout roles must alternate info/placeholder", lineno, toks[3])
        elif head == "g":
            m = _GATE_RE.match(line)
            if not m:
                raise ParseError("malformed gate line", lineno, line)
            kind = _kind(m.group(1), lineno)
            sites = tuple(int(s) for s in m.group(2).split())
            op = int(m.group(5)) if m.group(5) is not None else -1
            gates.append(PhysGate(kind, sites, int(m.group(3)), int(m.group(4)), op))
        else:
            raise ParseError("expected 'qubits', 'layout' or 'g'", lineno, toks[0])
    if n is None:
        raise ParseError("missing qubits line", 0, "")
    try:
        return PhysicalCircuit(n, tuple(gates), layout, planes)
    except HoloError as exc:
        raise ParseError(str(exc), 0, "") from None
