"""End-to-end runs of the command-line driver."""

import json
import time

import numpy as np
import pytest

from scatter_lens.cli import build_parser, main
from scatter_lens.io import (
    read_boundary_matrix,
    read_potential_samples,
    read_report,
    read_scattering_data,
    write_boundary,
    write_potential,
)

GRID = ["--kmax", "20", "--nk", "64"]


@pytest.fixture
def problem(tmp_path):
    """A sampled sin² well with a Dirichlet boundary, written to files."""
    x = np.linspace(0.0, 2.0, 81)
    q = -3.0 * np.sin(np.pi * x / 2.0) ** 2
    potential, boundary = tmp_path / "q.txt", tmp_path / "u.txt"
    write_potential(potential, x, q)
    write_boundary(boundary, -1.0)
    return potential, boundary


def run(*argv) -> int:
    return main([str(a) for a in argv])


class TestParser:
    def test_mode_required(self):
        with pytest.raises(SystemExit) as info:
            build_parser().parse_args([])
        assert info.value.code == 2

    def test_grid_flags(self):
        args = build_parser().parse_args(["direct", "--potential", "q", "--boundary", "u", "--out", "o", *GRID])
        assert args.k_max == 20.0
        assert args.n_k == 64
        assert not hasattr(args, "x_max")

    def test_too_few_k_points(self, problem, tmp_path):
        potential, boundary = problem
        with pytest.raises(SystemExit) as info:
            run("direct", "--potential", potential, "--boundary", boundary, "--out", tmp_path / "o", "--nk", 8)
        assert info.value.code == 2


class TestDirect:
    def test_writes_scattering_data(self, problem, tmp_path, capsys):
        potential, boundary = problem
        out = tmp_path / "run"
        code = run("direct", "--potential", potential, "--boundary", boundary, "--out", out, *GRID, "--json-summary")
        assert code == 0
        summary = json.loads(capsys.readouterr().out)
        assert summary["success"] is True
        assert summary["max_unitarity_defect"] < 1e-6
        sd = read_scattering_data(out / "scattering.txt")
        assert sd.kgrid.size == 64
        assert len(sd.bound_states) == summary["bound_state_count"]

    def test_malformed_potential(self, problem, tmp_path):
        potential, boundary = problem
        potential.write_text("1,5\n0,1,0\n1,1,0\n", encoding="utf-8")
        out = tmp_path / "run"
        assert run("direct", "--potential", potential, "--boundary", boundary, "--out", out, *GRID) == 3
        assert not (out / "scattering.txt").exists()

    def test_potential_not_utf8(self, problem, tmp_path):
        potential, boundary = problem
        potential.write_bytes(b"1,2\n0,\xc3\x28,0\n1,1,0\n")
        assert run("direct", "--potential", potential, "--boundary", boundary, "--out", tmp_path / "o", *GRID) == 3

    def test_non_unitary_boundary(self, problem, tmp_path):
        potential, boundary = problem
        write_boundary(boundary, 2.0)
        assert run("direct", "--potential", potential, "--boundary", boundary, "--out", tmp_path / "o", *GRID) == 4

    def test_size_mismatch(self, problem, tmp_path):
        potential, boundary = problem
        write_boundary(boundary, -np.eye(2))
        assert run("direct", "--potential", potential, "--boundary", boundary, "--out", tmp_path / "o", *GRID) == 4

    def test_text_summary(self, problem, tmp_path, capsys):
        potential, boundary = problem
        run("direct", "--potential", potential, "--boundary", boundary, "--out", tmp_path / "o", *GRID)
        out = capsys.readouterr().out
        assert out.startswith("status: OK")
        assert "bound_state_count:" in out


class TestInverse:
    def test_direct_then_inverse(self, problem, tmp_path):
        potential, boundary = problem
        run("direct", "--potential", potential, "--boundary", boundary, "--out", tmp_path / "run", *GRID)
        rec = tmp_path / "rec"
        code = run("inverse", "--data", tmp_path / "run" / "scattering.txt", "--out", rec, "--xmax", 2, "--nx", 41)
        assert code == 0
        x, q = read_potential_samples(rec / "potential.txt")
        assert x.size == 41
        assert q.shape == (41, 1, 1)
        assert read_boundary_matrix(rec / "boundary.txt").shape == (1, 1)

    def test_missing_data(self, tmp_path):
        assert run("inverse", "--data", tmp_path / "absent.txt", "--out", tmp_path / "rec") == 3


class TestStarGraph:
    def test_needs_input(self, tmp_path, capsys):
        assert run("stargraph", "--out", tmp_path / "star", "--json-summary") == 2
        assert json.loads(capsys.readouterr().out)["error_type"] == "UsageError"


@pytest.mark.slow
class TestLongRuns:
    def test_roundtrip_report(self, problem, tmp_path):
        potential, boundary = problem
        out = tmp_path / "rt"
        start = time.perf_counter()
        code = run("roundtrip", "--potential", potential, "--boundary", boundary, "--out", out)
        elapsed = time.perf_counter() - start
        report = read_report(out / "report.csv")
        assert {"q_relative_l2_error", "u_error", "marchenko_max_residual"} <= report.keys()
        assert (out / "comparison.csv").exists()
        assert code == 0
        assert float(report["q_relative_l2_error"]) <= 0.05
        assert float(report["u_error"]) <= 1e-2
        assert elapsed < 120.0

    def test_selftest(self, capsys):
        assert run("selftest") == 0
        assert "FAIL" not in capsys.readouterr().out
