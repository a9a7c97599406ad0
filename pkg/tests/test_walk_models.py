import math

import pytest

from bridgewalk.bridge.sampler import sample_walk
from bridgewalk.rng import trial_generator
from bridgewalk.walk_models import (
    LampState,
    ModelSpec,
    ball_volume,
    bfs_distance,
    bfs_period,
    canonical_key,
    graph_distance,
    make_model,
    neighbors,
    period,
    volume_growth_exponent,
)
from utils.errors import (
    BudgetExceededError,
    InvalidModelSpecError,
    InvalidVertexError,
    SymmetryViolationError,
    UnsupportedDistanceError,
)


def _ball(model, radius):
    """key -> (vertex, depth) for every vertex within `radius` steps of e."""
    seen = {model.canonical_key(model.identity): (model.identity, 0)}
    frontier = [model.identity]
    for depth in range(1, radius + 1):
        nxt = []
        for v in frontier:
            for w, _p in model.neighbors(v):
                key = model.canonical_key(w)
                if key not in seen:
                    seen[key] = (w, depth)
                    nxt.append(w)
        frontier = nxt
    return seen


# =============================================================================
# CONSTRUCTION
# =============================================================================


def test_tree_degree_and_period(tree2):
    assert tree2.degree == 3
    assert period(tree2) == 2
    assert tree2.model_id == "tree-b2"


def test_lattice_with_two_jump_sizes(line12):
    assert line12.degree == 4
    assert period(line12) == 1
    assert bfs_period(line12, 4) == 1


def test_lamplighter_degree_and_period(lamp1):
    assert lamp1.degree == 4
    assert period(lamp1) == 2
    assert all(p == pytest.approx(0.25) for _, p in neighbors(lamp1, lamp1.identity))


def test_spec_object_and_dict_agree():
    assert make_model(ModelSpec(kind="tree", b=3)) == make_model({"kind": "tree", "b": 3})


@pytest.mark.parametrize(
    "spec",
    [
        {"kind": "tree"},
        {"kind": "tree", "b": 1},
        {"kind": "lattice", "dim": 0},
        {"kind": "lattice", "jumps": [2, 4]},
        {"kind": "lattice", "jumps": [1, 2], "weights": [0.5, 0.6]},
        {"kind": "lattice", "steps": []},
        {"kind": "lattice", "steps": [[[0], 1.0]]},
        {"kind": "cayley"},
        {"kind": "tree", "b": 2, "colour": "red"},
    ],
)
def test_invalid_specs_are_rejected(spec):
    with pytest.raises(InvalidModelSpecError):
        make_model(spec)


def test_asymmetric_step_law_names_the_step():
    with pytest.raises(SymmetryViolationError) as info:
        make_model({"kind": "lattice", "steps": [[[1], 0.6], [[-1], 0.4]]})
    assert info.value.step in {(1,), (-1,)}


def test_explicit_steps_build_a_custom_lattice():
    model = make_model(
        {
            "kind": "lattice",
            "dim": 2,
            "steps": [[[1, 0], 0.3], [[-1, 0], 0.3], [[0, 1], 0.2], [[0, -1], 0.2]],
        }
    )
    assert model.degree == 4
    assert period(model) == 2
    assert not model.is_axis_separable


@pytest.mark.parametrize(
    "steps",
    [
        [[[2], 0.5], [[-2], 0.5]],
        [[[2, 0], 0.25], [[-2, 0], 0.25], [[0, 1], 0.25], [[0, -1], 0.25]],
        [[[1, 1], 0.25], [[-1, -1], 0.25], [[1, -1], 0.25], [[-1, 1], 0.25]],
    ],
)
def test_explicit_steps_must_generate_the_lattice(steps):
    with pytest.raises(InvalidModelSpecError, match="do not generate"):
        make_model({"kind": "lattice", "dim": len(steps[0][0]), "steps": steps})


def test_explicit_steps_period_follows_any_parity_character():
    # x-coordinate parity flips on every step although (1, 1) has an even coordinate sum
    model = make_model(
        {
            "kind": "lattice",
            "dim": 2,
            "steps": [[[1, 0], 0.25], [[-1, 0], 0.25], [[1, 1], 0.25], [[-1, -1], 0.25]],
        }
    )
    assert period(model) == 2
    assert bfs_period(model, 6) == 2


def test_explicit_steps_with_an_odd_cycle_are_aperiodic():
    model = make_model(
        {
            "kind": "lattice",
            "dim": 2,
            "steps": [
                [[1, 0], 0.2],
                [[-1, 0], 0.2],
                [[0, 1], 0.2],
                [[0, -1], 0.2],
                [[1, 1], 0.1],
                [[-1, -1], 0.1],
            ],
        }
    )
    assert period(model) == 1
    assert bfs_period(model, 4) == 1


# =============================================================================
# NEIGHBOURS AND KEYS
# =============================================================================


def test_tree_root_neighbours_are_uniform(tree2):
    out = neighbors(tree2, ())
    assert len(out) == 3
    assert all(p == pytest.approx(1 / 3) for _, p in out)


def test_lattice_neighbours(line12):
    out = dict(neighbors(line12, (0,)))
    assert set(out) == {(-2,), (-1,), (1,), (2,)}
    assert all(p == pytest.approx(0.25) for p in out.values())


def test_lamplighter_neighbours_flip_departed_site(lamp1):
    out = [w for w, _ in neighbors(lamp1, lamp1.identity)]
    assert set(out) == {
        LampState(frozenset(), (1,)),
        LampState(frozenset(), (-1,)),
        LampState(frozenset({(0,)}), (1,)),
        LampState(frozenset({(0,)}), (-1,)),
    }


def test_step_out_and_back_returns_identity_key(tree2, line, lamp1):
    child = (1,)
    assert canonical_key(tree2, child[:-1]) == canonical_key(tree2, ())
    assert canonical_key(line, (1 - 1,)) == canonical_key(line, (0,))

    # Depart 0 flipping its lamp, come back, depart again flipping it off.
    v = LampState(frozenset({(0,)}), (1,))
    v = LampState(v.lamps, (0,))
    keys = {canonical_key(lamp1, w): w for w, _ in neighbors(lamp1, v)}
    assert canonical_key(lamp1, LampState(frozenset(), (1,))) in keys


def test_keys_distinguish_models(tree2, line):
    assert canonical_key(tree2, ()) != canonical_key(line, (0,))


def test_invalid_vertices(tree2, line, lamp1):
    with pytest.raises(InvalidVertexError):
        neighbors(tree2, (3,))
    with pytest.raises(InvalidVertexError):
        neighbors(tree2, (0, 2))
    with pytest.raises(InvalidVertexError):
        canonical_key(line, (0, 0))
    with pytest.raises(InvalidVertexError):
        canonical_key(lamp1, (0,))


def test_step_probability(tree2):
    assert tree2.step_probability((), (0,)) == pytest.approx(1 / 3)
    assert tree2.step_probability((), (0, 1)) == 0.0


def _vertex_ball(model, radius):
    """Vertices within `radius` steps of e, deduplicated by equality rather than key."""
    seen = {model.identity}
    frontier = [model.identity]
    for _ in range(radius):
        nxt = []
        for v in frontier:
            for w, _p in model.neighbors(v):
                if w not in seen:
                    seen.add(w)
                    nxt.append(w)
        frontier = nxt
    return seen


@pytest.mark.parametrize("name", ["tree2", "line12", "plane", "lamp1"])
def test_canonical_keys_are_injective_on_the_ball(name, request):
    model = request.getfixturevalue(name)
    vertices = _vertex_ball(model, 10)
    keys = {canonical_key(model, v) for v in vertices}
    assert len(keys) == len(vertices)
    assert len(_ball(model, 10)) == len(vertices)


@pytest.mark.parametrize("name", ["tree2", "tree3", "line12", "plane", "cubic", "lamp1"])
def test_neighbour_laws_are_symmetric_along_walks(name, request):
    model = request.getfixturevalue(name)
    visited = {canonical_key(model, v): v for v, _depth in _ball(model, 3).values()}
    for trial in range(10):
        path = sample_walk(model, 20, trial_generator(7, trial))
        visited.update((canonical_key(model, v), v) for v in path.vertices)
    for v in visited.values():
        out = neighbors(model, v)
        assert sum(p for _, p in out) == pytest.approx(1.0, abs=1e-12)
        for w, _p in out:
            assert model.step_probability(v, w) == pytest.approx(
                model.step_probability(w, v), abs=1e-12
            ), (v, w)


# =============================================================================
# DISTANCES
# =============================================================================


def test_identity_is_at_distance_zero(tree2, line12, lamp1):
    assert graph_distance(tree2, ()) == 0
    assert graph_distance(line12, (0,)) == 0
    assert graph_distance(lamp1, lamp1.identity) == 0


def test_lattice_distance_with_long_jumps(line12):
    assert graph_distance(line12, (3,)) == 2
    assert graph_distance(line12, (-7,)) == 4
    assert graph_distance(line12, (3,)) == bfs_distance(line12, (3,))


def test_lamp_at_origin_needs_two_steps(lamp1):
    assert graph_distance(lamp1, LampState(frozenset({(0,)}), (0,))) == 2


def test_lamplighter_distance_matches_breadth_first_search(lamp1):
    for vertex, depth in _ball(lamp1, 8).values():
        assert graph_distance(lamp1, vertex) == depth, vertex


@pytest.mark.parametrize("jumps", [[1], [1, 2], [2, 3]])
def test_lattice_distance_matches_breadth_first_search(jumps):
    model = make_model({"kind": "lattice", "dim": 2, "jumps": jumps})
    for vertex, depth in _ball(model, 4).values():
        assert graph_distance(model, vertex) == depth, vertex


def test_lamplighter_distance_needs_dimension_one():
    model = make_model({"kind": "lamplighter", "dim": 2})
    assert not model.supports_distance
    with pytest.raises(UnsupportedDistanceError):
        graph_distance(model, model.identity)


# =============================================================================
# VOLUMES
# =============================================================================


def test_tree_ball_volume_is_geometric(tree2):
    curve = ball_volume(tree2, 12)
    assert curve[1] == 4
    assert list(curve.volumes) == [1 + 3 * (2**n - 1) for n in range(13)]


def test_lattice_ball_volume(line12):
    curve = ball_volume(line12, 3)
    assert curve[1] == 5
    assert curve[3] == 13


def test_ball_volume_counts_keys_within_radius(lamp1):
    ball = _ball(lamp1, 5)
    curve = ball_volume(lamp1, 5)
    for n in range(6):
        assert curve[n] == sum(1 for _, depth in ball.values() if depth <= n)


def test_ball_volume_budget(tree2):
    with pytest.raises(BudgetExceededError) as info:
        ball_volume(tree2, 12, max_keys=100)
    assert info.value.budget_name == "bfs_max_keys"


def test_growth_exponents(tree2, plane):
    tree = volume_growth_exponent(ball_volume(tree2, 12))
    assert tree["exponential_rate"] == pytest.approx(math.log(12286) / 12)
    planar = volume_growth_exponent(ball_volume(plane, 30), start=10)
    assert planar["polynomial_degree"] == pytest.approx(2.0, abs=0.15)
