"""Bounded temporal-logic monitoring over finite vehicle traces.

Formulas are built from the atoms BER (best-effort reaction engaged: max
braking held until halt), C (collided) and Y (shares responsibility),
boolean connectives, and the bounded operators G[a,b] (at every step offset
in [a, b]) and F[a,b] (at some step offset in [a, b]).

Traces are finite. By default an offset past the last step reads the final
state, which is absorbing once every vehicle has halted; strict mode
instead drops out-of-range offsets (making G vacuous and F unwitnessable
there).
"""

import csv
import io
import math
from dataclasses import dataclass
from enum import Enum
from typing import Callable, Iterable, Sequence, Union

from .errors import EvaluationError, FormulaError, InvalidInputError
from .params import require_finite


# ---------------------------------------------------------------------------
# Formula AST


@dataclass(frozen=True)
class Atom:
    name: str


@dataclass(frozen=True)
class Not:
    child: "Formula"


@dataclass(frozen=True)
class And:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class Or:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class Implies:
    left: "Formula"
    right: "Formula"


def _check_interval(lo: int, hi: int):
    if not (isinstance(lo, int) and isinstance(hi, int)):
        raise FormulaError(f"interval bounds must be integers, got [{lo},{hi}]")
    if lo < 0 or hi < lo:
        raise FormulaError(f"interval must satisfy 0 <= lo <= hi, got [{lo},{hi}]")


@dataclass(frozen=True)
class Globally:
    lo: int
    hi: int
    child: "Formula"

    def __post_init__(self):
        _check_interval(self.lo, self.hi)


@dataclass(frozen=True)
class Finally:
    lo: int
    hi: int
    child: "Formula"

    def __post_init__(self):
        _check_interval(self.lo, self.hi)


Formula = Union[Atom, Not, And, Or, Implies, Globally, Finally]


# ---------------------------------------------------------------------------
# Traces


@dataclass(frozen=True)
class VehicleState:
    """One sampled state of one vehicle."""

    position: float
    velocity: float
    ber_active: bool
    collided: bool
    responsible: bool

    def __post_init__(self):
        require_finite("position", self.position)
        require_finite("velocity", self.velocity)
        if self.velocity < 0:
            raise InvalidInputError(f"velocity must be >= 0, got {self.velocity}")


@dataclass(frozen=True)
class Trace:
    """Uniformly sampled state sequence of one vehicle."""

    vehicle_id: str
    steps: tuple[VehicleState, ...]
    dt: float

    def __post_init__(self):
        object.__setattr__(self, "steps", tuple(self.steps))
        if not self.steps:
            raise InvalidInputError("Trace.steps must be non-empty")
        if not (isinstance(self.dt, (int, float)) and self.dt > 0 and math.isfinite(self.dt)):
            raise InvalidInputError(f"Trace.dt must be a finite positive number, got {self.dt}")
        # A collision is permanent within the horizon.
        for earlier, later in zip(self.steps, self.steps[1:]):
            if earlier.collided and not later.collided:
                raise InvalidInputError(
                    f"trace {self.vehicle_id}: collided flag must be monotone"
                )

    def __len__(self) -> int:
        return len(self.steps)

    @property
    def last_index(self) -> int:
        return len(self.steps) - 1


ATOMS: dict[str, Callable[[VehicleState], bool]] = {
    "BER": lambda s: s.ber_active,
    "C": lambda s: s.collided,
    "Y": lambda s: s.responsible,
}


class BoundaryMode(Enum):
    ABSORBING = "absorbing"  # offsets past the end read the final state
    STRICT = "strict"        # offsets past the end are dropped


def evaluate(
    trace: Trace,
    i: int,
    formula: Formula,
    boundary: BoundaryMode = BoundaryMode.ABSORBING,
) -> bool:
    """Evaluate a formula on a trace at step index i."""
    if not (0 <= i < len(trace)):
        raise EvaluationError(f"index {i} outside trace of length {len(trace)}")
    return _eval(trace, i, formula, boundary)


def _eval(trace: Trace, i: int, f: Formula, boundary: BoundaryMode) -> bool:
    if isinstance(f, Atom):
        try:
            predicate = ATOMS[f.name]
        except KeyError:
            raise EvaluationError(
                f"unknown atom {f.name!r}; registered atoms: {sorted(ATOMS)}"
            ) from None
        return predicate(trace.steps[i])
    if isinstance(f, Not):
        return not _eval(trace, i, f.child, boundary)
    if isinstance(f, And):
        return _eval(trace, i, f.left, boundary) and _eval(trace, i, f.right, boundary)
    if isinstance(f, Or):
        return _eval(trace, i, f.left, boundary) or _eval(trace, i, f.right, boundary)
    if isinstance(f, Implies):
        return (not _eval(trace, i, f.left, boundary)) or _eval(
            trace, i, f.right, boundary
        )
    if isinstance(f, (Globally, Finally)):
        last = trace.last_index
        if boundary is BoundaryMode.ABSORBING:
            indices = [min(j, last) for j in range(i + f.lo, i + f.hi + 1)]
        else:
            indices = list(range(i + f.lo, min(i + f.hi, last) + 1))
        if isinstance(f, Globally):
            return all(_eval(trace, j, f.child, boundary) for j in indices)
        return any(_eval(trace, j, f.child, boundary) for j in indices)
    raise EvaluationError(f"unknown formula node {f!r}")


def safety_formula(horizon: int) -> Formula:
    """Blame-freedom under best-effort reaction over [0, horizon]."""
    return Globally(0, horizon, Implies(Atom("BER"), Not(Atom("Y"))))


def vehicle_safe(trace: Trace) -> bool:
    """True iff the vehicle is never responsible while holding max brake."""
    return evaluate(trace, 0, safety_formula(trace.last_index))


def _check_common_horizon(traces: Sequence[Trace]):
    if not traces:
        return
    dt = traces[0].dt
    horizon = len(traces[0])
    for trace in traces[1:]:
        if trace.dt != dt or len(trace) != horizon:
            raise InvalidInputError(
                f"trace {trace.vehicle_id}: dt/horizon mismatch "
                f"({trace.dt}, {len(trace)}) vs ({dt}, {horizon})"
            )


def road_safe(traces: Sequence[Trace]) -> bool:
    """True iff every vehicle on the road is in the safe state."""
    _check_common_horizon(traces)
    return all(vehicle_safe(t) for t in traces)


def sdt(traces: Sequence[Trace]) -> int:
    """Safe-driving throughput: the number of vehicles in the safe state."""
    _check_common_horizon(traces)
    return sum(1 for t in traces if vehicle_safe(t))


# ---------------------------------------------------------------------------
# Formula text syntax
#
#   formula  := or ('->' formula)?          right-associative implication
#   or       := and ('|' and)*
#   and      := unary ('&' unary)*
#   unary    := '!' unary
#             | ('G' | 'F') '[' int ',' int ']' unary
#             | atom
#             | '(' formula ')'


_SYMBOLS = ("->", "(", ")", "[", "]", ",", "!", "&", "|")


def _tokenize(text: str) -> list[tuple[str, str, int]]:
    tokens = []
    pos = 0
    n = len(text)
    while pos < n:
        ch = text[pos]
        if ch.isspace():
            pos += 1
            continue
        if text.startswith("->", pos):
            tokens.append(("sym", "->", pos))
            pos += 2
            continue
        if ch in "()[],!&|":
            tokens.append(("sym", ch, pos))
            pos += 1
            continue
        if ch.isdigit():
            start = pos
            while pos < n and text[pos].isdigit():
                pos += 1
            tokens.append(("int", text[start:pos], start))
            continue
        if ch.isalpha() or ch == "_":
            start = pos
            while pos < n and (text[pos].isalnum() or text[pos] == "_"):
                pos += 1
            tokens.append(("name", text[start:pos], start))
            continue
        raise FormulaError(f"unexpected character {ch!r} at position {pos}")
    return tokens


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.tokens = _tokenize(text)
        self.pos = 0

    def peek(self):
        return self.tokens[self.pos] if self.pos < len(self.tokens) else None

    def take(self, kind=None, value=None):
        tok = self.peek()
        if tok is None:
            raise FormulaError(f"unexpected end of formula {self.text!r}")
        if kind is not None and tok[0] != kind:
            raise FormulaError(
                f"expected {kind} at position {tok[2]}, got {tok[1]!r}"
            )
        if value is not None and tok[1] != value:
            raise FormulaError(
                f"expected {value!r} at position {tok[2]}, got {tok[1]!r}"
            )
        self.pos += 1
        return tok

    def parse(self) -> Formula:
        f = self.formula()
        tok = self.peek()
        if tok is not None:
            raise FormulaError(f"trailing input at position {tok[2]}: {tok[1]!r}")
        return f

    def formula(self) -> Formula:
        left = self.disjunction()
        tok = self.peek()
        if tok and tok[:2] == ("sym", "->"):
            self.take()
            return Implies(left, self.formula())
        return left

    def disjunction(self) -> Formula:
        left = self.conjunction()
        while True:
            tok = self.peek()
            if tok and tok[:2] == ("sym", "|"):
                self.take()
                left = Or(left, self.conjunction())
            else:
                return left

    def conjunction(self) -> Formula:
        left = self.unary()
        while True:
            tok = self.peek()
            if tok and tok[:2] == ("sym", "&"):
                self.take()
                left = And(left, self.unary())
            else:
                return left

    def unary(self) -> Formula:
        tok = self.peek()
        if tok is None:
            raise FormulaError(f"unexpected end of formula {self.text!r}")
        if tok[:2] == ("sym", "!"):
            self.take()
            return Not(self.unary())
        if tok[0] == "name" and tok[1] in ("G", "F"):
            op = self.take()[1]
            self.take("sym", "[")
            lo = int(self.take("int")[1])
            self.take("sym", ",")
            hi = int(self.take("int")[1])
            self.take("sym", "]")
            child = self.unary()
            return Globally(lo, hi, child) if op == "G" else Finally(lo, hi, child)
        if tok[0] == "name":
            return Atom(self.take()[1])
        if tok[:2] == ("sym", "("):
            self.take()
            inner = self.formula()
            self.take("sym", ")")
            return inner
        raise FormulaError(f"unexpected token {tok[1]!r} at position {tok[2]}")


def parse_formula(text: str) -> Formula:
    """Parse the textual formula syntax; raises FormulaError with positions."""
    return _Parser(text).parse()


# ---------------------------------------------------------------------------
# Trace CSV
#
# Columns: t, vehicle_id, position_m, velocity_mps, ber, collided,
# responsible, plus an optional trailing info_source column recording where
# a cooperative follower got its front-car information from. Floats are
# written with repr() so identical runs produce byte-identical files.

TRACE_CSV_COLUMNS = (
    "t",
    "vehicle_id",
    "position_m",
    "velocity_mps",
    "ber",
    "collided",
    "responsible",
)


def write_traces_csv(
    traces: Sequence[Trace],
    stream,
    info_sources: dict[str, str] | None = None,
) -> None:
    columns = list(TRACE_CSV_COLUMNS)
    if info_sources:
        columns.append("info_source")
    stream.write(",".join(columns) + "\n")
    for trace in traces:
        source = (info_sources or {}).get(trace.vehicle_id, "")
        for k, state in enumerate(trace.steps):
            row = [
                repr(k * trace.dt),
                trace.vehicle_id,
                repr(state.position),
                repr(state.velocity),
                str(int(state.ber_active)),
                str(int(state.collided)),
                str(int(state.responsible)),
            ]
            if info_sources:
                row.append(source)
            stream.write(",".join(row) + "\n")


def traces_to_csv(traces: Sequence[Trace], info_sources=None) -> str:
    buffer = io.StringIO()
    write_traces_csv(traces, buffer, info_sources)
    return buffer.getvalue()


def read_traces_csv(stream: Iterable[str]) -> list[Trace]:
    """Parse the trace CSV back into traces; extra columns are ignored."""
    reader = csv.DictReader(stream)
    if reader.fieldnames is None:
        raise InvalidInputError("empty trace CSV")
    missing = [c for c in TRACE_CSV_COLUMNS if c not in reader.fieldnames]
    if missing:
        raise InvalidInputError(f"trace CSV missing columns: {missing}")
    per_vehicle: dict[str, list[tuple[float, VehicleState]]] = {}
    order: list[str] = []
    for lineno, row in enumerate(reader, start=2):
        try:
            vid = row["vehicle_id"]
            t = float(row["t"])
            state = VehicleState(
                position=float(row["position_m"]),
                velocity=float(row["velocity_mps"]),
                ber_active=bool(int(row["ber"])),
                collided=bool(int(row["collided"])),
                responsible=bool(int(row["responsible"])),
            )
        except (KeyError, TypeError, ValueError) as exc:
            raise InvalidInputError(f"trace CSV line {lineno}: {exc}") from exc
        if vid not in per_vehicle:
            per_vehicle[vid] = []
            order.append(vid)
        per_vehicle[vid].append((t, state))

    traces = []
    for vid in order:
        rows = sorted(per_vehicle[vid], key=lambda pair: pair[0])
        if len(rows) < 2:
            raise InvalidInputError(f"trace {vid}: need at least two samples")
        dt = rows[1][0] - rows[0][0]
        if dt <= 0:
            raise InvalidInputError(f"trace {vid}: non-increasing timestamps")
        for (t0, _), (t1, _) in zip(rows, rows[1:]):
            if abs((t1 - t0) - dt) > 1e-9 * max(1.0, abs(dt)):
                raise InvalidInputError(f"trace {vid}: non-uniform sampling step")
        traces.append(Trace(vid, tuple(state for _, state in rows), dt))
    return traces
