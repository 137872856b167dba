"""Cell-state model and stepping engine for automata with dynamic global links.

Every cell of a ring (or torus) holds a data value plus a small vector of
pointers ("arms") that may target any other cell.  One synchronous step
computes, for every cell, new data and new pointers from a read-only snapshot
of generation t and commits all results at once; a cell only ever writes its
own state, so there are no write conflicts by construction.

Three model variants differ only in how the effective target of an arm is
obtained:

* ``basic``   - the stored pointers are the effective addresses (they were
  computed one step earlier by the pointer rule),
* ``general`` - an address modifier turns the stored pointer bases into
  effective addresses at the start of the step, before any access,
* ``plain``   - the whole state is unstructured; a pointer function derives
  the effective addresses from ``(i, q)`` alone.

Addresses are either relative (offset from the reading cell, wrapped) or
absolute.  All wrapping uses mathematical modulus, so results always lie in
``[0, n)`` regardless of sign.
"""

from __future__ import annotations

import random as _random
from dataclasses import dataclass, field, replace
from typing import Any, Callable, Iterable, Literal, NamedTuple, Sequence

__all__ = [
    "Address",
    "CellState",
    "Configuration",
    "FixedPoint",
    "GcaError",
    "Predicate",
    "PreconditionError",
    "RuleContext",
    "RuleEvaluationError",
    "RuleSet",
    "RunResult",
    "StepLimitError",
    "Steps",
    "Topology",
    "Trace",
    "default_step_limit",
    "gather_neighbors",
    "make_configuration",
    "normalize_relative",
    "relative_window",
    "resolve",
    "run",
    "step_async",
    "step_sync",
]


class GcaError(Exception):
    """Base class for engine errors."""


class PreconditionError(GcaError, ValueError):
    """An operation was invoked with arguments outside its contract."""


class RuleEvaluationError(GcaError):
    """A data or pointer rule raised; reports the offending cell and time."""

    def __init__(self, cell: int, time: int, cause: BaseException):
        super().__init__(f"rule evaluation failed at cell {cell}, t={time}: {cause!r}")
        self.cell = cell
        self.time = time


class StepLimitError(GcaError):
    """An open-ended run exceeded its step budget without halting."""

    def __init__(self, limit: int, time: int):
        super().__init__(
            f"no halt after {limit} committed steps (t={time}); "
            "raise step_limit if the run is expected to be this long"
        )
        self.limit = limit
        self.time = time


# ---------------------------------------------------------------------------
# addresses and topology

Kind = Literal["relative", "absolute"]


class Address(NamedTuple):
    """A cell address: ``kind`` is ``'relative'`` or ``'absolute'``.

    ``value`` is an int on a ring and an ``(x, y)`` pair on a torus.
    """

    kind: str
    value: Any


def relative_window(n: int) -> range:
    """Canonical signed offset window for a ring of n cells.

    Even n gives ``-n/2 .. n/2-1``, odd n gives ``-(n-1)/2 .. (n-1)/2``.
    """
    if n < 1:
        raise PreconditionError(f"ring size must be positive, got {n}")
    half = (n - 1) // 2
    return range(half - n + 1, half + 1)


def normalize_relative(a: int, n: int) -> int:
    """Map an arbitrary signed offset into the canonical window for size n."""
    if n < 1:
        raise PreconditionError(f"ring size must be positive, got {n}")
    r = a % n
    if r > (n - 1) // 2:
        r -= n
    return r


@dataclass(frozen=True)
class Topology:
    """Cyclic cell arrangement: a ring ``(n,)`` or a torus ``(w, h)``.

    Torus cells are numbered row-major: index = y*w + x, so each axis wraps
    independently and the linear index wraps only through the axes.
    """

    dims: tuple[int, ...]

    def __post_init__(self) -> None:
        if len(self.dims) not in (1, 2) or any(d < 1 for d in self.dims):
            raise PreconditionError(f"bad topology dims {self.dims}")

    @staticmethod
    def ring(n: int) -> "Topology":
        return Topology((n,))

    @staticmethod
    def torus(w: int, h: int) -> "Topology":
        return Topology((w, h))

    @property
    def n(self) -> int:
        n = 1
        for d in self.dims:
            n *= d
        return n

    @property
    def is_2d(self) -> bool:
        return len(self.dims) == 2

    @property
    def width(self) -> int:
        return self.dims[0]

    @property
    def height(self) -> int:
        return self.dims[1] if self.is_2d else 1

    def coords(self, i: int) -> tuple[int, int]:
        w = self.dims[0]
        return i % w, i // w

    def index(self, x: int, y: int = 0) -> int:
        w = self.dims[0]
        h = self.height
        return (y % h) * w + (x % w)


def resolve(topology: Topology, i: int, addr: Address) -> int:
    """Absolute index of the cell reached from cell i via ``addr``.

    Wrapping is per axis on a torus; the result is always in ``[0, n)``.
    """
    kind, value = addr
    if kind == "absolute":
        if topology.is_2d:
            return topology.index(value[0], value[1])
        return value % topology.n
    if kind != "relative":
        raise PreconditionError(f"unknown address kind {kind!r}")
    if topology.is_2d:
        x, y = topology.coords(i)
        return topology.index(x + value[0], y + value[1])
    return (i + value) % topology.n


# ---------------------------------------------------------------------------
# cell state and configuration

class CellState(NamedTuple):
    """State of one cell: a data value and a tuple of stored pointers.

    Plain-model cells keep their whole (unstructured) state in ``data`` and
    carry an empty pointer tuple.
    """

    data: Any
    pointers: tuple = ()


@dataclass
class Configuration:
    """A full generation: every cell state plus the generation counter."""

    states: list[CellState]
    topology: Topology
    time: int = 0

    def __post_init__(self) -> None:
        if len(self.states) != self.topology.n:
            raise PreconditionError(
                f"{len(self.states)} states for {self.topology.n} cells"
            )

    @property
    def n(self) -> int:
        return self.topology.n

    def data(self) -> list:
        return [q.data for q in self.states]

    def pointers(self, arm: int = 0) -> list:
        return [q.pointers[arm] for q in self.states]

    def grid(self) -> list[list]:
        """Data values as rows (2D topologies only)."""
        w, h = self.topology.width, self.topology.height
        d = self.data()
        return [d[y * w : (y + 1) * w] for y in range(h)]

    def copy(self) -> "Configuration":
        return Configuration(list(self.states), self.topology, self.time)


def make_configuration(
    data: Sequence, pointers: Sequence[tuple] | tuple | None, topology: Topology
) -> Configuration:
    """Build a generation-0 configuration from parallel data/pointer vectors.

    ``pointers`` may be one tuple (same for every cell), a per-cell sequence,
    or None for plain-model states.
    """
    n = topology.n
    if pointers is None:
        states = [CellState(d, ()) for d in data]
    elif isinstance(pointers, tuple):
        states = [CellState(d, pointers) for d in data]
    else:
        if len(pointers) != n:
            raise PreconditionError("pointer vector length mismatch")
        states = [CellState(d, tuple(p)) for d, p in zip(data, pointers)]
    return Configuration(states, topology)


# ---------------------------------------------------------------------------
# rules

class RuleContext:
    """Per-cell view handed to rules; one instance is reused across cells.

    Fields: ``i`` own index, ``cell`` own state, ``neighbors`` gathered arm
    states (generation-t values), ``t`` current generation, ``w`` static
    stencil states, ``params`` the rule set's parameter block.
    """

    __slots__ = ("i", "cell", "neighbors", "t", "w", "params")

    def __init__(self) -> None:
        self.i = 0
        self.cell: CellState | None = None
        self.neighbors: tuple = ()
        self.t = 0
        self.w: tuple = ()
        self.params: Any = None


@dataclass(frozen=True)
class RuleSet:
    """Local program of an automaton.

    ``data_rule`` maps a :class:`RuleContext` to the new data value (for the
    plain variant: to the whole new state).  ``pointer_rule`` returns the new
    stored pointer tuple; the general variant additionally carries an
    ``address_modifier`` that turns stored bases into effective addresses at
    the start of a step (called with ``ctx.neighbors`` unset), and the plain
    variant replaces both with ``pointer_function(i, q)``.

    ``addressing`` applies to all arms; ``stencil`` lists static relative
    offsets whose generation-t states are provided as ``ctx.w``.
    """

    variant: str
    arms: int
    data_rule: Callable[[RuleContext], Any]
    pointer_rule: Callable[[RuleContext], tuple] | None = None
    address_modifier: Callable[[RuleContext], tuple] | None = None
    pointer_function: Callable[[int, CellState], tuple] | None = None
    addressing: str = "relative"
    stencil: tuple = ()
    params: Any = None

    def __post_init__(self) -> None:
        if self.variant not in ("basic", "general", "plain"):
            raise PreconditionError(f"unknown variant {self.variant!r}")
        if self.arms < 1:
            raise PreconditionError(f"need at least one arm, got {self.arms}")
        if self.addressing not in ("relative", "absolute"):
            raise PreconditionError(f"unknown addressing {self.addressing!r}")
        if self.variant == "plain" and self.pointer_function is None:
            raise PreconditionError("plain variant needs a pointer_function")
        if self.variant == "general" and self.address_modifier is None:
            raise PreconditionError("general variant needs an address_modifier")
        if self.variant != "plain" and self.pointer_rule is None:
            raise PreconditionError(f"{self.variant} variant needs a pointer_rule")


def _effective_addresses(
    ruleset: RuleSet, ctx: RuleContext, q: CellState, i: int
) -> tuple:
    """Raw effective addresses of cell i for the coming step."""
    if ruleset.variant == "basic":
        eff = q.pointers
    elif ruleset.variant == "general":
        ctx.i = i
        ctx.cell = q
        ctx.neighbors = ()
        eff = ruleset.address_modifier(ctx)
    else:
        eff = ruleset.pointer_function(i, q)
    if len(eff) != ruleset.arms:
        raise RuleEvaluationError(
            i,
            ctx.t,
            ValueError(f"{len(eff)} effective addresses for {ruleset.arms} arm(s)"),
        )
    return eff


def gather_neighbors(
    cfg: Configuration, i: int, ruleset: RuleSet
) -> tuple[tuple, list[int]]:
    """Arm states and resolved target indices of cell i at the current time.

    Returns ``(states, targets)`` where both follow arm order.
    """
    ctx = RuleContext()
    ctx.t = cfg.time
    ctx.params = ruleset.params
    q = cfg.states[i]
    eff = _effective_addresses(ruleset, ctx, q, i)
    topo = cfg.topology
    kind = ruleset.addressing
    targets = [resolve(topo, i, Address(kind, a)) for a in eff]
    return tuple(cfg.states[j] for j in targets), targets


# ---------------------------------------------------------------------------
# stepping

def _stencil_states(cfg: Configuration, i: int, stencil: tuple) -> tuple:
    topo = cfg.topology
    return tuple(
        cfg.states[resolve(topo, i, Address("relative", off))] for off in stencil
    )


def step_sync(
    cfg: Configuration,
    ruleset: RuleSet,
    *,
    edge_sink: list | None = None,
    phase1_order: Sequence[int] | None = None,
    on_commit: Callable[[int, CellState], None] | None = None,
) -> Configuration:
    """One synchronous step: compute every cell from the generation-t snapshot,
    then commit all results as generation t+1.

    ``edge_sink`` collects ``(reader, target)`` access edges for this step.
    ``phase1_order`` evaluates phase 1 in the given index permutation (the
    committed result is order independent); ``on_commit`` is a diagnostics
    hook invoked once per cell at commit time with the owner index.
    """
    states = cfg.states
    topo = cfg.topology
    n = topo.n
    t = cfg.time
    basic = ruleset.variant == "basic"
    relative = ruleset.addressing == "relative"
    twod = topo.is_2d
    f = ruleset.data_rule
    g = ruleset.pointer_rule
    arms = ruleset.arms
    stencil = ruleset.stencil
    record = edge_sink is not None

    ctx = RuleContext()
    ctx.t = t
    ctx.params = ruleset.params
    new_states: list = [None] * n
    order = range(n) if phase1_order is None else phase1_order
    i = -1
    # Tight loops for the overwhelmingly common shapes (basic variant, 1-D
    # ring, relative addressing, no stencil, no edge recording).  Identical
    # semantics to the generic loop below, minus the per-cell dispatch;
    # tuple.__new__ skips the namedtuple constructor wrapper.
    fast = basic and relative and not twod and not stencil and not record
    tnew = tuple.__new__
    cs = CellState
    try:
        if fast and arms == 1:
            if phase1_order is None:
                cells = enumerate(states)
            else:
                cells = ((j, states[j]) for j in order)
            for i, q in cells:
                p = q[1]  # .pointers without the descriptor hop
                if len(p) != 1:
                    raise RuleEvaluationError(
                        i, t, ValueError(f"{len(p)} effective addresses for 1 arm(s)")
                    )
                ctx.i = i
                ctx.cell = q
                ctx.neighbors = (states[(i + p[0]) % n],)
                new_states[i] = tnew(cs, (f(ctx), g(ctx)))
        elif fast and arms == 2:
            if phase1_order is None:
                cells = enumerate(states)
            else:
                cells = ((j, states[j]) for j in order)
            for i, q in cells:
                p = q[1]  # .pointers without the descriptor hop
                if len(p) != 2:
                    raise RuleEvaluationError(
                        i, t, ValueError(f"{len(p)} effective addresses for 2 arm(s)")
                    )
                ctx.i = i
                ctx.cell = q
                ctx.neighbors = (states[(i + p[0]) % n], states[(i + p[1]) % n])
                new_states[i] = tnew(cs, (f(ctx), g(ctx)))
        else:
            _step_sync_generic(
                cfg, ruleset, ctx, new_states, order, edge_sink, record
            )
    except GcaError:
        raise
    except Exception as exc:  # no partial commit: nothing escapes this frame
        raise RuleEvaluationError(i, t, exc) from exc
    if on_commit is not None:
        for i in range(n):
            on_commit(i, new_states[i])
    return Configuration(new_states, topo, t + 1)


def _step_sync_generic(
    cfg: Configuration,
    ruleset: RuleSet,
    ctx: "RuleContext",
    new_states: list,
    order,
    edge_sink: list | None,
    record: bool,
) -> None:
    """Phase 1 for every variant/topology combination the fast paths skip."""
    states = cfg.states
    topo = cfg.topology
    n = topo.n
    t = cfg.time
    variant = ruleset.variant
    basic = variant == "basic"
    general = variant == "general"
    plain = variant == "plain"
    relative = ruleset.addressing == "relative"
    twod = topo.is_2d
    f = ruleset.data_rule
    g = ruleset.pointer_rule
    modifier = ruleset.address_modifier
    pf = ruleset.pointer_function
    arms = ruleset.arms
    stencil = ruleset.stencil
    w = topo.dims[0]
    h = topo.height
    i = -1
    try:
        for i in order:
            q = states[i]
            if basic:
                eff = q.pointers
            elif general:
                ctx.i = i
                ctx.cell = q
                ctx.neighbors = ()
                eff = modifier(ctx)
            else:
                eff = pf(i, q)
            if len(eff) != arms:
                raise RuleEvaluationError(
                    i, t, ValueError(f"{len(eff)} effective addresses for {arms} arm(s)")
                )
            if twod:
                x = i % w
                y = i // w
                if relative:
                    targets = [((y + dy) % h) * w + (x + dx) % w for dx, dy in eff]
                else:
                    targets = [(ay % h) * w + ax % w for ax, ay in eff]
            elif relative:
                targets = [(i + p) % n for p in eff]
            else:
                targets = [p % n for p in eff]
            ctx.i = i
            ctx.cell = q
            ctx.neighbors = tuple(states[j] for j in targets)
            if stencil:
                ctx.w = _stencil_states(cfg, i, stencil)
            if record:
                for j in targets:
                    edge_sink.append((i, j))
            if plain:
                new_states[i] = CellState(f(ctx), ())
            else:
                new_states[i] = CellState(f(ctx), g(ctx))
    except GcaError:
        raise
    except Exception as exc:  # no partial commit: nothing escapes this frame
        raise RuleEvaluationError(i, t, exc) from exc


def step_async(
    cfg: Configuration,
    ruleset: RuleSet,
    *,
    order: str = "ascending",
    seed: int | None = None,
) -> Configuration:
    """One asynchronous sweep: cells update one at a time, each reading the
    partially updated array, in ascending, descending or seeded-random order.
    """
    n = cfg.n
    if order == "ascending":
        sequence: Iterable[int] = range(n)
    elif order == "descending":
        sequence = range(n - 1, -1, -1)
    elif order == "random":
        if seed is None:
            raise PreconditionError("async random order requires an explicit seed")
        sequence = list(range(n))
        _random.Random(seed).shuffle(sequence)
    else:
        raise PreconditionError(f"unknown async order {order!r}")

    work = cfg.copy()
    ctx = RuleContext()
    ctx.t = cfg.time
    ctx.params = ruleset.params
    topo = cfg.topology
    kind = ruleset.addressing
    plain = ruleset.variant == "plain"
    try:
        for i in sequence:
            q = work.states[i]
            eff = _effective_addresses(ruleset, ctx, q, i)
            targets = [resolve(topo, i, Address(kind, a)) for a in eff]
            ctx.i = i
            ctx.cell = q
            ctx.neighbors = tuple(work.states[j] for j in targets)
            if ruleset.stencil:
                ctx.w = _stencil_states(work, i, ruleset.stencil)
            if plain:
                work.states[i] = CellState(ruleset.data_rule(ctx), ())
            else:
                work.states[i] = CellState(
                    ruleset.data_rule(ctx), ruleset.pointer_rule(ctx)
                )
    except GcaError:
        raise
    except Exception as exc:
        raise RuleEvaluationError(i, cfg.time, exc) from exc
    work.time = cfg.time + 1
    return work


# ---------------------------------------------------------------------------
# runs

@dataclass(frozen=True)
class Steps:
    """Stop after exactly T committed steps."""

    count: int


@dataclass(frozen=True)
class FixedPoint:
    """Stop once a committed step changed nothing (sync mode only)."""


@dataclass(frozen=True)
class Predicate:
    """Stop once ``fn(configuration)`` is true (checked after each commit)."""

    fn: Callable[[Configuration], bool]


StopRule = Steps | FixedPoint | Predicate


def default_step_limit(n: int) -> int:
    """Budget guarding open-ended runs: generous for every shipped algorithm."""
    return 10 * n + 64


@dataclass
class Trace:
    """Recorded run history.

    ``snapshots`` holds configurations (including the initial one) when state
    recording is on; ``edges[t]`` lists the ``(reader, target)`` access edges
    of the step that turned generation t into t+1.
    """

    snapshots: list[Configuration] = field(default_factory=list)
    edges: list[list[tuple[int, int]]] = field(default_factory=list)


@dataclass
class RunResult:
    config: Configuration
    steps: int
    halt: str  # "steps" | "fixed-point" | "predicate"
    trace: Trace | None = None


def run(
    cfg: Configuration,
    ruleset: RuleSet,
    stop: StopRule,
    *,
    mode: str = "sync",
    order: str = "ascending",
    seed: int | None = None,
    record_states: bool = False,
    record_edges: bool = False,
    step_limit: int | None = None,
) -> RunResult:
    """Drive an automaton until its stop rule fires.

    Open-ended stop rules (fixed point, predicate) are guarded by
    ``step_limit`` (default ``10*n + 64``); exceeding it raises
    :class:`StepLimitError`.  The input configuration is not modified.
    """
    if mode not in ("sync", "async"):
        raise PreconditionError(f"unknown mode {mode!r}")
    if isinstance(stop, FixedPoint) and mode != "sync":
        raise PreconditionError("fixed-point halting is defined for sync mode only")
    if record_edges and mode == "async":
        raise PreconditionError("access-edge recording is defined for sync mode only")

    trace = Trace() if (record_states or record_edges) else None
    if trace is not None and record_states:
        trace.snapshots.append(cfg.copy())

    limit: int | None
    if isinstance(stop, Steps):
        limit = stop.count
        open_ended = False
    else:
        limit = step_limit if step_limit is not None else default_step_limit(cfg.n)
        open_ended = True

    current = cfg
    steps = 0
    while True:
        if isinstance(stop, Steps) and steps >= stop.count:
            return RunResult(current, steps, "steps", trace)
        if isinstance(stop, Predicate) and stop.fn(current):
            return RunResult(current, steps, "predicate", trace)
        if open_ended and steps >= limit:
            raise StepLimitError(limit, current.time)
        edge_sink = [] if record_edges else None
        if mode == "sync":
            nxt = step_sync(current, ruleset, edge_sink=edge_sink)
        else:
            nxt = step_async(current, ruleset, order=order, seed=seed)
        steps += 1
        if trace is not None:
            if record_edges:
                trace.edges.append(edge_sink)
            if record_states:
                trace.snapshots.append(nxt.copy())
        if isinstance(stop, FixedPoint) and nxt.states == current.states:
            return RunResult(nxt, steps, "fixed-point", trace)
        current = nxt
