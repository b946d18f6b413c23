"""Core data model for semi-global programs and flat physical circuits."""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Iterator, Optional, Union

from ..errors import BadDims, InvalidCircuit


class GateKind(Enum):
    """Gate vocabulary shared by the IR and both simulation engines."""

    H = ("h", 1, True)
    X = ("x", 1, True)
    Y = ("y", 1, True)
    Z = ("z", 1, True)
    S = ("s", 1, True)
    SDG = ("sdg", 1, True)
    CZ = ("cz", 2, True)
    CNOT = ("cnot", 2, True)
    SWAP = ("swap", 2, True)
    TOFFOLI = ("toffoli", 3, False)
    Z_TOFFOLI = ("z_toffoli", 3, False)
    CXHALF = ("cxhalf", 2, False)
    CXHALF_DG = ("cxhalf_dg", 2, False)
    ZQUARTER = ("zquarter", 1, False)
    RESET = ("reset", 1, True)
    MEASURE_Z = ("measure_z", 1, True)
    MEASURE_X = ("measure_x", 1, True)
    WAIT = ("wait", 1, True)

    def __init__(self, token: str, arity: int, clifford: bool):
        self.token = token
        self.arity = arity
        self.clifford = clifford

    @property
    def is_measurement(self) -> bool:
        return self in (GateKind.MEASURE_Z, GateKind.MEASURE_X)

    @property
    def is_unitary(self) -> bool:
        return self not in (GateKind.RESET, GateKind.MEASURE_Z, GateKind.MEASURE_X)

    @classmethod
    def parse(cls, token: str) -> "GateKind":
        key = token.strip().lower()
        for kind in cls:
            if kind.token == key:
                return kind
        aliases = {"cx": cls.CNOT, "ccx": cls.TOFFOLI, "ccz": cls.Z_TOFFOLI, "t": cls.ZQUARTER,
                   "sqrtx_c": cls.CXHALF, "i": cls.WAIT, "id": cls.WAIT, "m": cls.MEASURE_Z,
                   "mz": cls.MEASURE_Z, "mx": cls.MEASURE_X, "s_dag": cls.SDG}
        if key in aliases:
            return aliases[key]
        raise KeyError(token)


@dataclass(frozen=True)
class LatticeDims:
    nx: int
    ny: int
    nz: int

    def __post_init__(self):
        for name in ("nx", "ny", "nz"):
            v = getattr(self, name)
            if not isinstance(v, int) or v < 1:
                raise BadDims(f"{name} must be a positive integer, got {v!r}")

    @property
    def n_columns(self) -> int:
        return self.nx * self.ny

    @property
    def n_qubits(self) -> int:
        return self.nx * self.ny * self.nz

    def columns(self) -> Iterator["Column"]:
        """Columns in linearization order (x fastest)."""
        for y in range(1, self.ny + 1):
            for x in range(1, self.nx + 1):
                yield Column(x, y)

    def contains_column(self, col: "Column") -> bool:
        return 1 <= col.x <= self.nx and 1 <= col.y <= self.ny

    def contains_site(self, site: "Site") -> bool:
        return 1 <= site.x <= self.nx and 1 <= site.y <= self.ny and 1 <= site.z <= self.nz

    def is_boundary(self, z: int) -> bool:
        return z == 1 or z == self.nz

    def index(self, x: int, y: int, z: int) -> int:
        """Zero-based qubit index, x fastest then y then z."""
        return (x - 1) + self.nx * (y - 1) + self.nx * self.ny * (z - 1)

    def site_of(self, q: int) -> "Site":
        plane, rem = divmod(q, self.nx * self.ny)
        y, x = divmod(rem, self.nx)
        return Site(x + 1, y + 1, plane + 1)


@dataclass(frozen=True)
class Column:
    x: int
    y: int


@dataclass(frozen=True)
class Site:
    x: int
    y: int
    z: int

    @property
    def column(self) -> Column:
        return Column(self.x, self.y)


@dataclass(frozen=True)
class ColumnGate:
    kind: GateKind
    col: Column


@dataclass(frozen=True)
class TwoColumnGate:
    kind: GateKind
    col_a: Column
    col_b: Column


@dataclass(frozen=True)
class VerticalCZLayer:
    parity: str  # "oe" pairs (2n-1, 2n); "eo" pairs (2n, 2n+1)

    def __post_init__(self):
        if self.parity not in ("oe", "eo"):
            raise InvalidCircuit(f"unknown parity {self.parity!r}")

    def pairs(self, nz: int) -> list[tuple[int, int]]:
        start = 1 if self.parity == "oe" else 2
        return [(z, z + 1) for z in range(start, nz, 2)]


@dataclass(frozen=True)
class GlobalHLayer:
    pass


@dataclass(frozen=True)
class ColumnReset:
    col: Column


@dataclass(frozen=True)
class BoundaryOp:
    kind: GateKind
    sites: tuple[Site, ...]


@dataclass(frozen=True)
class Annotation:
    text: str


SemiGlobalOp = Union[ColumnGate, TwoColumnGate, VerticalCZLayer, GlobalHLayer,
                     ColumnReset, BoundaryOp, Annotation]


@dataclass(frozen=True)
class Circuit:
    dims: LatticeDims
    ops: tuple = ()
    name: str = "circuit"

    def __post_init__(self):
        object.__setattr__(self, "ops", tuple(self.ops))

    def annotations(self) -> dict[str, str]:
        """``key=value`` annotations collected into a dict (later wins)."""
        out = {}
        for op in self.ops:
            if isinstance(op, Annotation) and "=" in op.text:
                k, v = op.text.split("=", 1)
                out[k.strip()] = v.strip()
        return out


@dataclass(frozen=True)
class PhysGate:
    kind: GateKind
    sites: tuple[int, ...]
    timestep: int
    source: int
    op_index: int = -1


def _overlap_allowed(a: PhysGate, b: PhysGate) -> bool:
    # Controlled powers of X on a shared target commute, so the Toffoli
    # decomposition may run two of them in one step (controls must differ).
    xpow = (GateKind.CXHALF, GateKind.CXHALF_DG, GateKind.CNOT)
    if a.kind in xpow and b.kind in xpow and len(a.sites) == len(b.sites) == 2:
        return a.sites[1] == b.sites[1] and a.sites[0] != b.sites[0]
    return False


@dataclass(frozen=True)
class Layout2D:
    """Line layout for one plane: info sites at odd positions (1-based)."""

    n_info: int

    @property
    def line_length(self) -> int:
        return 2 * self.n_info - 1

    def role_of(self, pos: int) -> str:
        if not 1 <= pos <= self.line_length:
            raise KeyError(pos)
        return "info" if pos % 2 == 1 else "placeholder"

    def position(self, plane_site: int) -> int:
        """Line position of the zero-based plane-local site index."""
        if not 0 <= plane_site < self.n_info:
            raise KeyError(plane_site)
        return 2 * plane_site + 1

    def roles(self) -> str:
        return "".join("i" if p % 2 else "p" for p in range(1, self.line_length + 1))


@dataclass(frozen=True)
class PhysicalCircuit:
    n_qubits: int
    gates: tuple = ()
    layout: Optional[Layout2D] = None
    planes: int = 0

    def __post_init__(self):
        object.__setattr__(self, "gates", tuple(self.gates))
        problems = physical_violations(self)
        if problems:
            raise InvalidCircuit("; ".join(problems[:5]))

    @property
    def depth(self) -> int:
        return len({g.timestep for g in self.gates})

    def locations(self) -> dict[int, list[int]]:
        """Map source id to the gate indices it owns."""
        out: dict[int, list[int]] = {}
        for i, g in enumerate(self.gates):
            out.setdefault(g.source, []).append(i)
        return out


def physical_violations(pc: PhysicalCircuit) -> list[str]:
    problems = []
    last_t = None
    busy: dict[int, PhysGate] = {}
    for i, g in enumerate(pc.gates):
        if len(g.sites) != g.kind.arity:
            problems.append(f"gate {i}: arity {len(g.sites)} for {g.kind.token}")
        if len(set(g.sites)) != len(g.sites):
            problems.append(f"gate {i}: repeated site")
        if any(not 0 <= s < pc.n_qubits for s in g.sites):
            problems.append(f"gate {i}: site out of range")
        if last_t is not None and g.timestep < last_t:
            problems.append(f"gate {i}: timestep decreases")
        if g.timestep != last_t:
            busy = {}
            last_t = g.timestep
        for s in g.sites:
            prev = busy.get(s)
            if prev is not None and not _overlap_allowed(prev, g):
                problems.append(f"gate {i}: qubit {s} used twice in timestep {g.timestep}")
            busy[s] = g
    return problems
