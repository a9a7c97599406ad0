"""
Walk families behind one abstraction.

Three kinds of symmetric walks are supported:
- lattice: Z^d with a symmetric step law (per-axis jump sets or explicit steps)
- tree: simple walk on the regular tree where every vertex has degree b+1
- lamplighter: Z_2 wreath Z^d, move to a neighbouring site and optionally flip the
  lamp at the site being left, each of the 4d possibilities with probability 1/(4d)

Every model enumerates weighted neighbours, renders canonical byte keys and knows its
period. Models are frozen and safe to share between workers.
"""

from __future__ import annotations

import abc
import logging
import math
import struct
from collections import deque
from dataclasses import dataclass, field
from functools import cached_property, lru_cache, reduce
from typing import Any, Iterable, Literal, Union

from pydantic import BaseModel, ConfigDict, Field, ValidationError

from utils.errors import (
    BudgetExceededError,
    InvalidModelSpecError,
    InvalidVertexError,
    SymmetryViolationError,
    UnsupportedDistanceError,
)
from utils.helpers import fit_loglog_slope

logger = logging.getLogger("bridgewalk.walk_models")

ModelKind = Literal["lattice", "tree", "lamplighter"]

_TAG_LATTICE = 0x01
_TAG_TREE = 0x02
_TAG_LAMPLIGHTER = 0x03

_PROB_TOLERANCE = 1e-12
# Radius of the BFS two-colouring run when a model is built.
_PERIOD_CHECK_RADIUS = 4
_DEFAULT_BFS_MAX_KEYS = 20_000_000


@dataclass(frozen=True)
class LampState:
    """Lamplighter vertex: set of lit lamp sites and the lamplighter position."""

    lamps: frozenset[tuple[int, ...]]
    position: tuple[int, ...]


Vertex = Union[tuple[int, ...], LampState]


# =============================================================================
# MODEL SPEC
# =============================================================================


class ModelSpec(BaseModel):
    """User-facing description of a walk (kind + parameters)."""

    model_config = ConfigDict(extra="forbid", frozen=True)

    kind: ModelKind
    b: int | None = Field(default=None, description="Tree branching (vertex degree is b+1)")
    dim: int = Field(default=1, description="Lattice / lamplighter base dimension")
    jumps: tuple[int, ...] | None = Field(
        default=None, description="Positive per-axis jump sizes; default is the simple walk"
    )
    weights: tuple[float, ...] | None = Field(
        default=None, description="Probability mass per jump size (both signs together)"
    )
    steps: tuple[tuple[tuple[int, ...], float], ...] | None = Field(
        default=None, description="Explicit lattice step law as (vector, probability) pairs"
    )


# =============================================================================
# BASE MODEL
# =============================================================================


class WalkModel(abc.ABC):
    """Common interface of the supported walk families."""

    kind: str = "base"

    @property
    @abc.abstractmethod
    def identity(self) -> Vertex: ...

    @property
    @abc.abstractmethod
    def model_id(self) -> str: ...

    @property
    @abc.abstractmethod
    def degree(self) -> int:
        """Number of distinct one-step moves (support size of the step law)."""

    @property
    @abc.abstractmethod
    def structural_period(self) -> int: ...

    @abc.abstractmethod
    def validate_vertex(self, v: Any) -> None: ...

    @abc.abstractmethod
    def neighbors(self, v: Vertex) -> list[tuple[Vertex, float]]: ...

    @abc.abstractmethod
    def canonical_key(self, v: Vertex) -> bytes: ...

    @abc.abstractmethod
    def graph_distance(self, v: Vertex) -> int: ...

    @property
    def supports_distance(self) -> bool:
        return True

    @property
    def period(self) -> int:
        return self.structural_period

    def step_probability(self, v: Vertex, w: Vertex) -> float:
        target = self.canonical_key(w)
        return sum(p for u, p in self.neighbors(v) if self.canonical_key(u) == target)


# =============================================================================
# LATTICE
# =============================================================================


@dataclass(frozen=True)
class LatticeModel(WalkModel):
    dim: int
    steps: tuple[tuple[tuple[int, ...], float], ...]
    jumps: tuple[int, ...] | None = None
    weights: tuple[float, ...] | None = None
    kind: str = field(default="lattice", init=False)

    @property
    def identity(self) -> tuple[int, ...]:
        return (0,) * self.dim

    @property
    def model_id(self) -> str:
        if self.jumps is not None:
            tag = ".".join(str(j) for j in self.jumps)
            if self.weights is not None and len(set(self.weights)) > 1:
                tag += "-w" + ".".join(f"{w:g}" for w in self.weights)
            return f"lattice-d{self.dim}-j{tag}"
        return f"lattice-d{self.dim}-custom{len(self.steps)}"

    @property
    def degree(self) -> int:
        return len(self.steps)

    @property
    def max_jump(self) -> int:
        """Largest coordinate displacement of a single step."""
        return max(max(abs(c) for c in vec) for vec, _ in self.steps)

    @cached_property
    def structural_period(self) -> int:
        # Bipartite iff some parity character x -> sum_{i in S} x_i mod 2 is odd on every step.
        for mask in range(1, 1 << self.dim):
            axes = [i for i in range(self.dim) if mask >> i & 1]
            if all(sum(vec[i] for i in axes) % 2 for vec, _ in self.steps):
                return 2
        return 1

    @property
    def is_axis_separable(self) -> bool:
        return self.jumps is not None

    def axis_law(self) -> tuple[tuple[int, float], ...]:
        """One-dimensional step law of a single axis, conditional on that axis moving."""
        if self.jumps is None or self.weights is None:
            raise InvalidModelSpecError("lattice model was not built from per-axis jumps")
        law: list[tuple[int, float]] = []
        for jump, weight in zip(self.jumps, self.weights):
            law.append((-jump, weight / 2))
            law.append((jump, weight / 2))
        return tuple(sorted(law))

    def validate_vertex(self, v: Any) -> None:
        if not isinstance(v, tuple) or len(v) != self.dim or not all(isinstance(c, int) for c in v):
            raise InvalidVertexError(
                f"lattice vertex must be a {self.dim}-tuple of ints, got {v!r}"
            )

    def neighbors(self, v: Vertex) -> list[tuple[Vertex, float]]:
        self.validate_vertex(v)
        assert isinstance(v, tuple)
        return [(tuple(a + b for a, b in zip(v, vec)), p) for vec, p in self.steps]

    def canonical_key(self, v: Vertex) -> bytes:
        self.validate_vertex(v)
        return struct.pack(f"<B{self.dim}q", _TAG_LATTICE, *v)

    def graph_distance(self, v: Vertex) -> int:
        self.validate_vertex(v)
        assert isinstance(v, tuple)
        if self.jumps is None:
            return bfs_distance(self, v)
        return sum(_axis_distance(self.jumps, abs(c)) for c in v)


def _axis_distance(jumps: tuple[int, ...], x: int) -> int:
    if x == 0:
        return 0
    if jumps == (1,):
        return x
    # Tables grow in powers of two so nearby queries share one BFS.
    radius = 1 << max(4, (x + max(jumps)).bit_length())
    return _axis_distance_table(jumps, radius)[x]


@lru_cache(maxsize=64)
def _axis_distance_table(jumps: tuple[int, ...], radius: int) -> tuple[int, ...]:
    """Word distance from 0 to every x in [0, radius - max(jumps)] under jumps ±J."""
    jmax = max(jumps)
    lo, hi = -jmax, radius
    dist = {0: 0}
    queue = deque([0])
    while queue:
        x = queue.popleft()
        for j in jumps:
            for y in (x - j, x + j):
                if lo <= y <= hi and y not in dist:
                    dist[y] = dist[x] + 1
                    queue.append(y)
    # Steps commute, so an optimal path can stay inside [-jmax, x + jmax].
    return tuple(dist.get(x, -1) for x in range(radius - jmax + 1))


# =============================================================================
# TREE
# =============================================================================


@dataclass(frozen=True)
class TreeModel(WalkModel):
    """Simple walk on the tree with vertex degree b+1.

    Vertices are reduced label sequences from the root: the root has b+1 child labels,
    every other vertex has b; a parent move pops the last label.
    """

    b: int
    kind: str = field(default="tree", init=False)

    @property
    def identity(self) -> tuple[int, ...]:
        return ()

    @property
    def model_id(self) -> str:
        return f"tree-b{self.b}"

    @property
    def degree(self) -> int:
        return self.b + 1

    @property
    def structural_period(self) -> int:
        return 2

    def validate_vertex(self, v: Any) -> None:
        if not isinstance(v, tuple):
            raise InvalidVertexError(f"tree vertex must be a label tuple, got {v!r}")
        for depth, label in enumerate(v):
            limit = self.b + 1 if depth == 0 else self.b
            if not isinstance(label, int) or not 0 <= label < limit:
                raise InvalidVertexError(f"label {label!r} at depth {depth} outside [0, {limit})")

    def children(self, v: tuple[int, ...]) -> list[tuple[int, ...]]:
        return [v + (c,) for c in range(self.b if v else self.b + 1)]

    def neighbors(self, v: Vertex) -> list[tuple[Vertex, float]]:
        self.validate_vertex(v)
        assert isinstance(v, tuple)
        p = 1.0 / (self.b + 1)
        out: list[tuple[Vertex, float]] = []
        if v:
            out.append((v[:-1], p))
        out.extend((w, p) for w in self.children(v))
        return out

    def canonical_key(self, v: Vertex) -> bytes:
        self.validate_vertex(v)
        return struct.pack(f"<BI{len(v)}H", _TAG_TREE, len(v), *v)

    def graph_distance(self, v: Vertex) -> int:
        self.validate_vertex(v)
        return len(v)


# =============================================================================
# LAMPLIGHTER
# =============================================================================


@dataclass(frozen=True)
class LamplighterModel(WalkModel):
    dim: int
    kind: str = field(default="lamplighter", init=False)

    @property
    def identity(self) -> LampState:
        return LampState(frozenset(), (0,) * self.dim)

    @property
    def model_id(self) -> str:
        return f"lamplighter-d{self.dim}"

    @property
    def degree(self) -> int:
        return 4 * self.dim

    @property
    def structural_period(self) -> int:
        # Every move changes the parity of the position coordinate sum.
        return 2

    @property
    def supports_distance(self) -> bool:
        return self.dim == 1

    def validate_vertex(self, v: Any) -> None:
        if not isinstance(v, LampState):
            raise InvalidVertexError(f"lamplighter vertex must be a LampState, got {v!r}")
        sites = list(v.lamps) + [v.position]
        if any(len(s) != self.dim for s in sites):
            raise InvalidVertexError(f"lamplighter sites must have dimension {self.dim}")

    def neighbors(self, v: Vertex) -> list[tuple[Vertex, float]]:
        self.validate_vertex(v)
        assert isinstance(v, LampState)
        p = 1.0 / (4 * self.dim)
        flipped = v.lamps ^ {v.position}
        out: list[tuple[Vertex, float]] = []
        for lamps in (v.lamps, flipped):
            for axis in range(self.dim):
                for sign in (1, -1):
                    pos = list(v.position)
                    pos[axis] += sign
                    out.append((LampState(lamps, tuple(pos)), p))
        return out

    def canonical_key(self, v: Vertex) -> bytes:
        self.validate_vertex(v)
        assert isinstance(v, LampState)
        sites = sorted(v.lamps)
        fmt = f"<BI{len(sites) * self.dim}q{self.dim}q"
        flat = [c for site in sites for c in site]
        return struct.pack(fmt, _TAG_LAMPLIGHTER, len(sites), *flat, *v.position)

    def graph_distance(self, v: Vertex) -> int:
        self.validate_vertex(v)
        if self.dim != 1:
            raise UnsupportedDistanceError(
                f"word metric on the lamplighter over Z^{self.dim} is a covering-tour problem; "
                "only d=1 is supported"
            )
        assert isinstance(v, LampState)
        return _lamplighter_line_distance(frozenset(s[0] for s in v.lamps), v.position[0])


def _lamplighter_line_distance(lit: frozenset[int], y: int) -> int:
    """Word distance from the identity to (lit, y) on Z_2 wreath Z.

    A lamp can only be switched when it is departed, so the walk x_0..x_m must depart
    every lit site (visit it at a time < m) and end at y. The departed sites form an
    interval containing 0; the last departed site is next to y.
    """
    if not lit and y == 0:
        return 0
    lo = min(min(lit, default=0), 0)
    hi = max(max(lit, default=0), 0)

    def cover_then_reach(z: int) -> int:
        left_first = -lo + (hi - lo) + abs(z - hi)
        right_first = hi + (hi - lo) + abs(z - lo)
        return min(left_first, right_first)

    return 1 + min(cover_then_reach(y - 1), cover_then_reach(y + 1))


# =============================================================================
# CONSTRUCTION
# =============================================================================


def make_model(spec: ModelSpec | dict[str, Any]) -> WalkModel:
    """Build and validate a walk model from its specification."""
    if isinstance(spec, dict):
        try:
            spec = ModelSpec(**spec)
        except ValidationError as exc:
            raise InvalidModelSpecError(f"invalid model spec: {exc}") from exc

    if spec.dim < 1:
        raise InvalidModelSpecError(f"dimension must be >= 1, got {spec.dim}")

    model: WalkModel
    if spec.kind == "tree":
        if spec.b is None or spec.b < 2:
            raise InvalidModelSpecError(f"tree requires b >= 2, got {spec.b}")
        model = TreeModel(b=spec.b)
    elif spec.kind == "lamplighter":
        model = LamplighterModel(dim=spec.dim)
    else:
        model = _make_lattice(spec)

    _check_period(model)
    logger.debug("Built %s (degree=%d, period=%d)", model.model_id, model.degree, model.period)
    return model


def _make_lattice(spec: ModelSpec) -> LatticeModel:
    if spec.steps is not None:
        if spec.jumps is not None or spec.weights is not None:
            raise InvalidModelSpecError("give either explicit steps or jumps/weights, not both")
        steps = _validate_steps(spec.dim, spec.steps)
        if not _generates_lattice([vec for vec, _ in steps], spec.dim):
            raise InvalidModelSpecError(f"steps do not generate Z^{spec.dim}")
        return LatticeModel(dim=spec.dim, steps=steps)

    jumps = tuple(spec.jumps) if spec.jumps is not None else (1,)
    if not jumps:
        raise InvalidModelSpecError("empty jump set")
    if any(j <= 0 for j in jumps) or len(set(jumps)) != len(jumps):
        raise InvalidModelSpecError(f"jump sizes must be distinct positive integers, got {jumps}")
    if reduce(math.gcd, jumps) != 1:
        raise InvalidModelSpecError(f"jump sizes {jumps} do not generate Z (gcd != 1)")

    if spec.weights is None:
        weights = tuple(1.0 / len(jumps) for _ in jumps)
    else:
        weights = tuple(float(w) for w in spec.weights)
        if len(weights) != len(jumps):
            raise InvalidModelSpecError("one weight per jump size is required")
        if any(w <= 0 for w in weights) or abs(sum(weights) - 1.0) > _PROB_TOLERANCE:
            raise InvalidModelSpecError(f"jump weights must be positive and sum to 1: {weights}")

    order = sorted(range(len(jumps)), key=lambda i: jumps[i])
    jumps = tuple(jumps[i] for i in order)
    weights = tuple(weights[i] for i in order)

    steps: list[tuple[tuple[int, ...], float]] = []
    for axis in range(spec.dim):
        for jump, weight in zip(jumps, weights):
            for sign in (1, -1):
                vec = [0] * spec.dim
                vec[axis] = sign * jump
                steps.append((tuple(vec), weight / (2 * spec.dim)))
    return LatticeModel(dim=spec.dim, steps=tuple(steps), jumps=jumps, weights=weights)


def _validate_steps(
    dim: int, raw: Iterable[tuple[tuple[int, ...], float]]
) -> tuple[tuple[tuple[int, ...], float], ...]:
    law: dict[tuple[int, ...], float] = {}
    for vec, p in raw:
        vec = tuple(int(c) for c in vec)
        if len(vec) != dim:
            raise InvalidModelSpecError(f"step {vec} does not have dimension {dim}")
        if not any(vec):
            raise InvalidModelSpecError("the zero step is not allowed")
        if vec in law:
            raise InvalidModelSpecError(f"duplicate step {vec}")
        if p <= 0:
            raise InvalidModelSpecError(f"step {vec} has non-positive probability {p}")
        law[vec] = float(p)
    if not law:
        raise InvalidModelSpecError("empty jump set")
    total = sum(law.values())
    if abs(total - 1.0) > _PROB_TOLERANCE:
        raise InvalidModelSpecError(f"step probabilities sum to {total!r}, not 1")
    for vec, p in law.items():
        inverse = tuple(-c for c in vec)
        q = law.get(inverse, 0.0)
        if abs(p - q) > _PROB_TOLERANCE:
            raise SymmetryViolationError(vec, p, q)
    return tuple(sorted(law.items()))


def _generates_lattice(vectors: list[tuple[int, ...]], dim: int) -> bool:
    """True iff the integer span of `vectors` is all of Z^dim (row echelon over Z)."""
    rows = [list(v) for v in vectors]
    for col in range(dim):
        live = [r for r in rows[col:] if r[col]]
        while len(live) > 1:
            live.sort(key=lambda r: abs(r[col]))
            pivot = live[0]
            for r in live[1:]:
                q = r[col] // pivot[col]
                for j in range(col, dim):
                    r[j] -= q * pivot[j]
            live = [r for r in live if r[col]]
        if not live or abs(live[0][col]) != 1:
            return False
        i = rows.index(live[0], col)
        rows[col], rows[i] = rows[i], rows[col]
    return True


def _check_period(model: WalkModel) -> None:
    observed = bfs_period(model, _PERIOD_CHECK_RADIUS)
    if model.structural_period == 2 and observed == 1:
        raise InvalidModelSpecError(f"{model.model_id}: odd cycle found but structural period is 2")
    if model.structural_period == 1 and observed == 2:
        logger.debug(
            "%s: shortest odd cycle is longer than %d steps",
            model.model_id,
            2 * _PERIOD_CHECK_RADIUS + 1,
        )


# =============================================================================
# OPERATIONS
# =============================================================================


def neighbors(model: WalkModel, v: Vertex) -> list[tuple[Vertex, float]]:
    return model.neighbors(v)


def canonical_key(model: WalkModel, v: Vertex) -> bytes:
    return model.canonical_key(v)


def graph_distance(model: WalkModel, v: Vertex) -> int:
    return model.graph_distance(v)


def period(model: WalkModel) -> int:
    return model.period


@dataclass(frozen=True)
class VolumeCurve:
    """volumes[n] = number of distinct vertices within n steps of e."""

    volumes: tuple[int, ...]

    def __getitem__(self, n: int) -> int:
        return self.volumes[n]

    def __len__(self) -> int:
        return len(self.volumes)


def ball_volume(model: WalkModel, n: int, max_keys: int = _DEFAULT_BFS_MAX_KEYS) -> VolumeCurve:
    """Exact BFS ball sizes for radii 0..n."""
    if n < 0:
        raise ValueError(f"radius must be >= 0, got {n}")
    seen = {model.canonical_key(model.identity)}
    frontier = [model.identity]
    volumes = [1]
    for _ in range(n):
        nxt: list[Vertex] = []
        for v in frontier:
            for w, _p in model.neighbors(v):
                key = model.canonical_key(w)
                if key not in seen:
                    seen.add(key)
                    nxt.append(w)
            if len(seen) > max_keys:
                raise BudgetExceededError("bfs_max_keys", max_keys, len(seen))
        frontier = nxt
        volumes.append(len(seen))
    return VolumeCurve(tuple(volumes))


def bfs_distance(model: WalkModel, v: Vertex, max_keys: int = _DEFAULT_BFS_MAX_KEYS) -> int:
    """Word distance by breadth-first search from e (the exact oracle)."""
    target = model.canonical_key(v)
    seen = {model.canonical_key(model.identity)}
    if target in seen:
        return 0
    frontier = [model.identity]
    depth = 0
    while frontier:
        depth += 1
        nxt: list[Vertex] = []
        for u in frontier:
            for w, _p in model.neighbors(u):
                key = model.canonical_key(w)
                if key == target:
                    return depth
                if key not in seen:
                    seen.add(key)
                    nxt.append(w)
        if len(seen) > max_keys:
            raise BudgetExceededError("bfs_max_keys", max_keys, len(seen))
        frontier = nxt
    raise InvalidVertexError(f"vertex {v!r} is not reachable from e")


def bfs_period(model: WalkModel, radius: int) -> int:
    """Period inferred from BFS two-colouring of the ball of the given radius."""
    depth = {model.canonical_key(model.identity): 0}
    frontier = [model.identity]
    for level in range(radius):
        nxt: list[Vertex] = []
        for u in frontier:
            for w, _p in model.neighbors(u):
                key = model.canonical_key(w)
                seen_at = depth.get(key)
                if seen_at is None:
                    depth[key] = level + 1
                    nxt.append(w)
                elif (seen_at - level) % 2 == 0:
                    return 1
        frontier = nxt
    return 2


def volume_growth_exponent(curve: VolumeCurve, start: int = 1) -> dict[str, float]:
    """Log-log slope of V(n) (polynomial degree) and log V(n)/n (exponential rate)."""
    ns = list(range(max(1, start), len(curve)))
    if len(ns) < 2:
        raise ValueError("need at least two radii to fit a growth exponent")
    last = ns[-1]
    return {
        "polynomial_degree": fit_loglog_slope(ns, [curve[k] for k in ns]),
        "exponential_rate": math.log(curve[last]) / last,
    }
