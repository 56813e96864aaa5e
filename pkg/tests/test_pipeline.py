import math

import numpy as np
import pytest

from taskseq.cgraph import brute_force_selection, build_layered_graph, path_cost
from taskseq.metrics import MetricKind, MetricParams
from taskseq.model import GuardError, RobotModel, Task, TaskTarget, generate_random_task
from taskseq.pipeline import (
    PipelineConfig,
    baseline_cspace_tsp,
    baseline_gtsp_exact,
    benchmark_run,
    execute_trajectory_schedule,
    instance_seed,
    manipulability_choice,
    resolve_ik_sets,
    solve_sequence,
)
from taskseq.tsp import SolverKind, brute_force_cycle, build_task_distance_matrix, tour_cost

COARSE = PipelineConfig(step_size=math.pi)  # keeps tiny instances inside all guards


def _single_joint_task():
    robot = RobotModel(dof=1, vel_max=[1.0], acc_max=[1.0])
    target = TaskTarget(id=0, position=[1.0, 0.0], ik_solutions=(np.array([2.0]),))
    return Task(robot=robot, home=[0.0], targets=(target,))


def test_degenerate_single_target_pipeline():
    task = _single_joint_task()
    result = solve_sequence(task, PipelineConfig(metric=MetricKind.LINEAR_INTERP_DURATION))
    assert result.order.order == (0,)
    assert result.selection.chosen == (0,)
    # home 0 -> 2 -> 0 with unit limits: two trapezoidal moves of 3 s each
    assert result.schedule_duration == pytest.approx(6.0)
    assert result.counts == {"n": 1, "total_ik": 1, "edges": 2}


def test_pipeline_against_both_oracles():
    task = generate_random_task(5, 3, seed=21, mode="explicit_ik")
    config = PipelineConfig(tsp_solver=SolverKind.EXACT, metric=MetricKind.WEIGHTED_EUCLIDEAN)
    result = solve_sequence(task, config)

    # Step-1 oracle: the solved tour matches the permutation minimum.
    dm = build_task_distance_matrix(task, include_home_depot=True)
    assert result.step1_cost == tour_cost(dm, brute_force_cycle(dm))

    # Step-2 oracle: the selection matches exhaustive enumeration for the order.
    params = MetricParams.from_robot(task.robot)
    ik_sets = resolve_ik_sets(task, config.step_size)
    ordered = [ik_sets[t] for t in result.order.order]
    oracle = brute_force_selection(task.home, ordered, config.metric, params)
    assert result.selection.total_cost == oracle.total_cost
    assert result.selection.chosen == oracle.chosen


def test_pipeline_errors_before_step1_on_empty_ik():
    robot = RobotModel(dof=2, vel_max=[1.0, 1.0], acc_max=[1.0, 1.0])
    task = Task(
        robot=robot,
        home=[0.0, 0.0],
        targets=(TaskTarget(id=0, position=[0.5, 0.5], ik_solutions=()),),
    )
    with pytest.raises(ValueError, match="target 0"):
        solve_sequence(task)


def test_pipeline_errors_on_unreachable_planar_target():
    task = generate_random_task(3, 1, seed=0, mode="planar")
    far = TaskTarget(id=1, position=[9.0, 9.0])
    broken = Task(robot=task.robot, home=task.home,
                  targets=(task.targets[0], far, task.targets[2]))
    with pytest.raises(ValueError, match="unreachable"):
        solve_sequence(broken)


def test_schedule_identity_and_1d_examples():
    q = np.array([1.0, 2.0])
    assert execute_trajectory_schedule([q, q.copy()], [1.0, 1.0], [1.0, 1.0]) == 0.0
    assert execute_trajectory_schedule(
        [np.array([0.0]), np.array([2.0]), np.array([0.0])], [1.0], [1.0]
    ) == pytest.approx(6.0)
    with pytest.raises(ValueError):
        execute_trajectory_schedule([q], [1.0, 1.0], [1.0, 1.0])


def test_schedule_equals_step2_cost_under_linear_interp_metric():
    task = generate_random_task(8, 4, seed=9, mode="planar")
    config = PipelineConfig(metric=MetricKind.LINEAR_INTERP_DURATION)
    result = solve_sequence(task, config)
    assert result.schedule_duration == result.selection.total_cost


def test_pipeline_is_deterministic():
    task = generate_random_task(10, 3, seed=31, mode="planar")
    a = solve_sequence(task, COARSE)
    b = solve_sequence(task, COARSE)
    assert a.order.order == b.order.order
    assert a.selection == b.selection
    assert a.schedule_duration == b.schedule_duration
    assert a.step1_cost == b.step1_cost
    assert a.counts == b.counts


def test_no_depot_mode_runs():
    task = generate_random_task(6, 2, seed=3, mode="planar")
    config = PipelineConfig(step_size=math.pi, include_home_depot=False)
    result = solve_sequence(task, config)
    assert sorted(result.order.order) == list(range(6))


def test_manipulability_baseline_single_ik_collapse():
    # With one configuration per target, the baseline's path cost for its
    # order equals the optimal selection's cost for that same order.
    task = generate_random_task(5, 1, seed=13, mode="explicit_ik")
    config = PipelineConfig(tsp_solver=SolverKind.EXACT)
    theirs = baseline_cspace_tsp(task, config)
    assert theirs.selection.chosen == (0,) * 5
    params = MetricParams.from_robot(task.robot)
    ik_sets = resolve_ik_sets(task, config.step_size)
    ordered = [ik_sets[t] for t in theirs.order.order]
    graph = build_layered_graph(task.home, ordered, config.metric, params)
    expected, _ = path_cost(graph, (0,) * 5)
    assert theirs.selection.total_cost == expected


def test_manipulability_baseline_is_dominated_for_fixed_order():
    for seed in range(5):
        task = generate_random_task(6, 1, seed=seed, mode="planar")
        ours = solve_sequence(task, COARSE)
        params = MetricParams.from_robot(task.robot)
        ik_sets = resolve_ik_sets(task, COARSE.step_size)
        fixed = manipulability_choice(task, ik_sets)
        ordered = [ik_sets[t] for t in ours.order.order]
        graph = build_layered_graph(task.home, ordered, COARSE.metric, params)
        fixed_cost, _ = path_cost(graph, tuple(fixed[t] for t in ours.order.order))
        assert ours.selection.total_cost <= fixed_cost + 1e-12


def test_manipulability_tie_picks_lowest_index():
    robot = RobotModel(dof=3, vel_max=np.ones(3), acc_max=np.ones(3),
                       planar_links=np.array([1.0, 1.0, 1.0]))
    q = np.array([0.1, 0.2, 0.3])
    mirrored = -q  # exact tie: mirroring about the x-axis preserves det(J J^T)
    task = Task(robot=robot, home=np.zeros(3),
                targets=(TaskTarget(id=0, ik_solutions=(q, mirrored)),))
    ik_sets = resolve_ik_sets(task, math.pi)
    assert manipulability_choice(task, ik_sets) == [0]


def test_gtsp_two_targets_enumerates_both_orders():
    task = generate_random_task(2, 1, seed=17, mode="explicit_ik")
    config = PipelineConfig()
    joint = baseline_gtsp_exact(task, config)
    params = MetricParams.from_robot(task.robot)
    ik_sets = resolve_ik_sets(task, config.step_size)
    costs = []
    for perm in ((0, 1), (1, 0)):
        ordered = [ik_sets[t] for t in perm]
        graph = build_layered_graph(task.home, ordered, config.metric, params)
        costs.append(path_cost(graph, (0, 0))[0])
    assert joint.selection.total_cost == min(costs)


def test_gtsp_never_exceeds_the_decoupled_pipeline():
    for seed in range(10):
        task = generate_random_task(5, 3, seed=seed, mode="explicit_ik")
        joint = baseline_gtsp_exact(task, COARSE)
        ours = solve_sequence(task, COARSE)
        assert joint.selection.total_cost <= ours.selection.total_cost + 1e-12


def test_gtsp_guards():
    with pytest.raises(GuardError, match="guard"):
        baseline_gtsp_exact(generate_random_task(8, 1, seed=0, mode="explicit_ik"))
    big = generate_random_task(7, 29, seed=0, mode="explicit_ik")
    with pytest.raises(GuardError, match="guard"):
        baseline_gtsp_exact(big)


def test_benchmark_row_arithmetic():
    rows = benchmark_run("tsp_solver", sizes=[6, 8], repeats=3, seed=0)
    assert len(rows) == 18  # 3 solvers x 2 sizes x 3 repeats
    assert [r["variant"] for r in rows] == sorted(r["variant"] for r in rows)
    keys = {(r["variant"], r["n"], r["repeat"]) for r in rows}
    assert len(keys) == 18


def test_benchmark_same_instance_across_variants():
    rows = benchmark_run("metric", sizes=[5], repeats=2, seed=42)
    by_repeat = {}
    for row in rows:
        by_repeat.setdefault(row["repeat"], set()).add(row["seed"])
    assert all(len(seeds) == 1 for seeds in by_repeat.values())
    assert instance_seed(42, 5, 0) in by_repeat[0]


def test_benchmark_step_size_counts_grow_monotonically():
    rows = benchmark_run("step_size", sizes=[6], repeats=1, seed=2)
    counts = {r["variant"]: r["total_ik"] for r in rows}
    ordered = [counts[v] for v in ("pi", "pi/2", "pi/3", "pi/4", "pi/6", "pi/12")]
    assert all(a <= b for a, b in zip(ordered, ordered[1:]))


def test_benchmark_method_axis_reports_cost_ordering():
    rows = benchmark_run("method", sizes=[4], repeats=2, seed=5,
                         config=PipelineConfig(step_size=math.pi))
    by_cell = {}
    for row in rows:
        by_cell.setdefault((row["n"], row["repeat"]), {})[row["variant"]] = row
    for cell in by_cell.values():
        assert set(cell) == {"decoupled", "cspace_tsp", "gtsp_exact"}
        assert cell["gtsp_exact"]["step2_cost"] <= cell["decoupled"]["step2_cost"] + 1e-12


def test_benchmark_guard_refusals_are_flagged_rows():
    rows = benchmark_run("tsp_solver", sizes=[25], repeats=1, seed=1)
    exact_rows = [r for r in rows if r["variant"] == "exact"]
    assert len(exact_rows) == 1
    assert math.isnan(exact_rows[0]["step2_cost"])
    others = [r for r in rows if r["variant"] != "exact"]
    assert all(not math.isnan(r["step2_cost"]) for r in others)


def test_benchmark_rejects_unknown_axis():
    with pytest.raises(ValueError):
        benchmark_run("nope", sizes=[4])
