"""End-to-end smoke tests for the python module and the CLI."""

import json
import os
import subprocess

import pytest

import purc_assign as pa

DATA = os.environ.get("PURC_DATA", "data")
CLI = os.environ.get("PURC_CLI")


def test_grid_assignment_converges():
    net = pa.generate_grid(2)
    assert net.num_nodes == 9
    assert net.num_links == 24
    od = pa.gravity_demand(net, 1.0)
    types = pa.to_traveler_types(od)
    assert len(types) == 72
    result = pa.solve(net, types)
    assert result.converged
    assert result.status == pa.SolveStatus.converged
    assert result.r1 <= 1e-5
    assert result.r2 <= 1e-5
    assert len(result.aggregate_flow) == net.num_links


def test_hand_built_network_matches_reference():
    net = pa.make_network(
        [1, 2],
        [
            pa.Link(0, 1, capacity=1.0, free_flow_time=1.0, b=0.0),
            pa.Link(0, 1, capacity=1.0, free_flow_time=2.0, b=0.0),
        ],
    )
    types = [pa.TravelerType(0, 1, 1.0)]
    result = pa.solve(net, types, theta=1.0)
    assert result.converged
    reference = pa.primal_solve(net, types, theta=1.0, seed=3)
    assert reference.converged
    for a, b in zip(result.flows[0], reference.flows[0]):
        assert abs(a - b) <= 1e-4
    z = pa.primal_objective(net, types, 1.0, result.flows)
    assert abs(z - reference.objective) <= 1e-6 * abs(reference.objective)


def test_tntp_parsing_and_scaling():
    net = pa.parse_network(os.path.join(DATA, "SiouxFalls_net.tntp"))
    assert net.num_nodes == 24
    assert net.num_links == 76
    od = pa.parse_trips(os.path.join(DATA, "SiouxFalls_trips.tntp"), net)
    assert abs(od.total() - 360600.0) < 1e-6
    doubled = pa.scale_demand(od, 2.0)
    assert abs(doubled.total() - 721200.0) < 1e-6
    with pytest.raises(ValueError):
        pa.parse_network(os.path.join(DATA, "no_such_file.tntp"))


@pytest.mark.skipif(CLI is None, reason="PURC_CLI not set")
def test_cli_grid_generates_roundtrippable_files(tmp_path):
    proc = subprocess.run(
        [CLI, "grid", "--k", "2", "--q", "5", "--out", str(tmp_path)],
        capture_output=True,
        text=True,
        timeout=300,
    )
    assert proc.returncode == 0, proc.stdout + proc.stderr

    net = pa.parse_network(str(tmp_path / "net.tntp"))
    assert net.num_nodes == 9
    assert net.num_links == 24
    od = pa.parse_trips(str(tmp_path / "trips.tntp"), net)
    assert abs(od.total() - 9 * 5.0) < 1e-9

    out = tmp_path / "run"
    proc = subprocess.run(
        [CLI, "solve", "--net", str(tmp_path / "net.tntp"),
         "--trips", str(tmp_path / "trips.tntp"), "--out", str(out)],
        capture_output=True,
        text=True,
        timeout=300,
    )
    assert proc.returncode == 0, proc.stdout + proc.stderr
    summary = json.loads((out / "summary.json").read_text())
    assert summary["result"]["status"] == "converged"
    assert summary["instance"]["nodes"] == 9
    assert (out / "flows.csv").exists()
    assert (out / "trace.csv").exists()


@pytest.mark.skipif(CLI is None, reason="PURC_CLI not set")
def test_cli_solve_and_check_roundtrip(tmp_path):
    out = tmp_path / "sf"
    net_path = os.path.join(DATA, "SiouxFalls_net.tntp")
    trips_path = os.path.join(DATA, "SiouxFalls_trips.tntp")
    proc = subprocess.run(
        [CLI, "solve", "--net", net_path, "--trips", trips_path, "--out", str(out),
         "--per-type-flows"],
        capture_output=True,
        text=True,
        timeout=300,
    )
    assert proc.returncode == 0, proc.stdout + proc.stderr

    check = subprocess.run(
        [CLI, "check", "--net", net_path, "--flows", str(out / "flows.csv")],
        capture_output=True,
        text=True,
        timeout=300,
    )
    assert check.returncode == 0, check.stdout + check.stderr
    assert "PASS" in check.stdout

    connectivity = subprocess.run(
        [CLI, "check", "--net", net_path, "--trips", trips_path],
        capture_output=True,
        text=True,
        timeout=300,
    )
    assert connectivity.returncode == 0, connectivity.stdout + connectivity.stderr
    assert "routable" in connectivity.stdout


@pytest.mark.skipif(CLI is None, reason="PURC_CLI not set")
def test_cli_exit_codes(tmp_path):
    # input error
    proc = subprocess.run(
        [CLI, "solve", "--net", "missing.tntp", "--trips", "missing.tntp"],
        capture_output=True,
        text=True,
    )
    assert proc.returncode == 1

    # non-convergence on a starved iteration budget
    proc = subprocess.run(
        [CLI, "solve", "--net", os.path.join(DATA, "SiouxFalls_net.tntp"),
         "--trips", os.path.join(DATA, "SiouxFalls_trips.tntp"),
         "--max-iters", "2", "--out", str(tmp_path / "starved")],
        capture_output=True,
        text=True,
        timeout=300,
    )
    assert proc.returncode == 2
