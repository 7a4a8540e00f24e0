import json
from pathlib import Path

import numpy as np
import pytest

from sepcert import stateio
from sepcert.cli import main
from sepcert.states import (
    DensityMatrix,
    PureState,
    bell,
    random_density,
    random_separable,
    zero_plus_mixture,
)

DATA = Path(__file__).parent / "data"


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


class TestStateFiles:
    def test_density_round_trip_full_precision(self, tmp_path):
        state, _ = random_separable((2, 3), terms=3, seed=5)
        path = tmp_path / "state.json"
        stateio.save(path, state)
        loaded = stateio.load(path)
        assert isinstance(loaded, DensityMatrix)
        assert np.array_equal(loaded.matrix, state.matrix)
        assert loaded.dims == state.dims

    def test_pure_round_trip(self, tmp_path):
        amplitudes = np.array([0.6, 0.8j, 0, 0])
        psi = PureState(amplitudes, (2, 2))
        path = tmp_path / "pure.json"
        stateio.save(path, psi)
        loaded = stateio.load(path)
        assert isinstance(loaded, PureState)
        assert np.array_equal(loaded.amplitudes, psi.amplitudes)

    def test_matrix_round_trip(self, tmp_path):
        matrix = np.array([[1 + 2j, 3], [0, -1j]])
        path = tmp_path / "matrix.json"
        stateio.save(path, matrix)
        assert np.array_equal(stateio.load(path), matrix)

    @pytest.mark.parametrize(
        "payload",
        [
            "not json",
            '{"schema_version": "2", "kind": "density"}',
            '{"schema_version": "1", "kind": "unknown"}',
            '{"schema_version": "1", "kind": "density", "dims": [2], "data": [[["x", 0]]]}',
            '{"schema_version": "1", "kind": "density", "dims": [2, 2], "data": []}',
            '{"schema_version": "1", "kind": "pure", "dims": [2], "data": [[1, 0]]}',
        ],
    )
    def test_malformed_files_rejected(self, tmp_path, payload):
        path = tmp_path / "bad.json"
        path.write_text(payload)
        with pytest.raises(stateio.StateFileError):
            stateio.load(path)

    def test_unphysical_density_rejected(self, tmp_path):
        path = tmp_path / "bad.json"
        payload = {
            "schema_version": "1",
            "kind": "density",
            "dims": [2],
            "data": [[[2.0, 0.0], [0.0, 0.0]], [[0.0, 0.0], [-1.0, 0.0]]],
        }
        path.write_text(json.dumps(payload))
        with pytest.raises(stateio.StateFileError):
            stateio.load(path)


class TestGen:
    def test_bell_round_trips_exactly(self, tmp_path, capsys):
        out = tmp_path / "bell.json"
        code, _, _ = run(capsys, "gen", "bell", "1", str(out))
        assert code == 0
        loaded = stateio.load(out)
        assert np.array_equal(loaded.matrix, bell(1).matrix)

    def test_werner_trace_on_reload(self, tmp_path, capsys):
        out = tmp_path / "w.json"
        code, _, _ = run(capsys, "gen", "werner", "0.5", str(out))
        assert code == 0
        assert abs(np.trace(stateio.load(out).matrix) - 1) < 1e-12

    def test_random_separable_deterministic_bytes(self, tmp_path, capsys):
        a, b = tmp_path / "a.json", tmp_path / "b.json"
        assert run(capsys, "gen", "random-separable", "2", "2", "--terms", "3", "--seed", "7", str(a))[0] == 0
        assert run(capsys, "gen", "random-separable", "2", "2", "--terms", "3", "--seed", "7", str(b))[0] == 0
        assert a.read_bytes() == b.read_bytes()

    def test_mixed_multi_dims(self, tmp_path, capsys):
        out = tmp_path / "mm.json"
        assert run(capsys, "gen", "mixed", "2", "3", "2", str(out))[0] == 0
        loaded = stateio.load(out)
        assert loaded.dims == (2, 3, 2)

    def test_random_density_rank(self, tmp_path, capsys):
        out = tmp_path / "rd.json"
        assert run(capsys, "gen", "random-density", "4", "2", "--seed", "3", str(out))[0] == 0
        loaded = stateio.load(out)
        assert np.array_equal(loaded.matrix, random_density(4, 2, seed=3).matrix)

    @pytest.mark.parametrize(
        "argv",
        [
            ("gen", "bell", "9", "out.json"),
            ("gen", "werner", "2.0", "out.json"),
            ("gen", "werner", "x", "out.json"),
            ("gen", "ghz", "1", "out.json"),
            ("gen", "random-density", "2", "5", "out.json"),
            ("gen", "bell", "out.json"),
        ],
    )
    def test_invalid_parameters_exit_2(self, tmp_path, capsys, argv):
        argv = tuple(a if a != "out.json" else str(tmp_path / "out.json") for a in argv)
        code, _, err = run(capsys, *argv)
        assert code == 2
        assert err


class TestTilde:
    def test_golden_conv6_bytes(self, tmp_path, capsys):
        out = tmp_path / "out.json"
        code, _, _ = run(
            capsys, "tilde", str(DATA / "realign4_input.json"), str(out),
            "--shape", "2", "2", "--convention", "6",
        )
        assert code == 0
        assert out.read_bytes() == (DATA / "realign4_conv6.json").read_bytes()

    def test_golden_conv8_bytes(self, tmp_path, capsys):
        out = tmp_path / "out.json"
        code, _, _ = run(
            capsys, "tilde", str(DATA / "realign4_input.json"), str(out),
            "--shape", "2", "2", "--convention", "8",
        )
        assert code == 0
        assert out.read_bytes() == (DATA / "realign4_conv8.json").read_bytes()

    def test_leg_realignment_shape(self, tmp_path, capsys):
        src = tmp_path / "ghz.json"
        out = tmp_path / "out.json"
        assert run(capsys, "gen", "ghz", "3", str(src))[0] == 0
        code, _, _ = run(capsys, "tilde", str(src), str(out), "--dims", "2", "2", "2", "--k", "2")
        assert code == 0
        payload = json.loads(out.read_text())
        assert (payload["rows"], payload["cols"]) == (4, 16)

    def test_density_file_uses_its_dims(self, tmp_path, capsys):
        src = tmp_path / "mm.json"
        out = tmp_path / "out.json"
        assert run(capsys, "gen", "mixed", "2", "3", str(src))[0] == 0
        assert run(capsys, "tilde", str(src), str(out))[0] == 0
        payload = json.loads(out.read_text())
        assert (payload["rows"], payload["cols"]) == (9, 4)

    def test_bad_shape_exits_2(self, tmp_path, capsys):
        out = tmp_path / "out.json"
        code, _, err = run(
            capsys, "tilde", str(DATA / "realign4_input.json"), str(out), "--shape", "2", "3"
        )
        assert code == 2 and "error" in err

    def test_missing_input_exits_2(self, tmp_path, capsys):
        code, _, err = run(capsys, "tilde", str(tmp_path / "no.json"), str(tmp_path / "o.json"),
                           "--shape", "2", "2")
        assert code == 2 and err


class TestAnalyze:
    def test_bell_json_report(self, tmp_path, capsys):
        src = tmp_path / "bell.json"
        run(capsys, "gen", "bell", "1", str(src))
        code, out, _ = run(capsys, "analyze", str(src), "--json")
        assert code == 0
        report = json.loads(out)
        assert report["verdict"] == "EntangledBy"
        assert report["witness"]["criterion"] == "realignment"
        assert abs(report["witness"]["value"] - 2.0) < 1e-10
        # lossless serializer round trip
        assert json.loads(json.dumps(report)) == report

    def test_maximally_mixed_certified(self, tmp_path, capsys):
        src = tmp_path / "mm.json"
        run(capsys, "gen", "mixed", "2", "2", str(src))
        code, out, _ = run(capsys, "analyze", str(src), "--json")
        report = json.loads(out)
        assert code == 0
        assert report["verdict"] == "CertifiedSeparable"
        assert len(report["certificate"]["terms"]) == 1

    def test_fixture_inconclusive_with_values(self, tmp_path, capsys):
        src = tmp_path / "fixture.json"
        stateio.save(src, zero_plus_mixture())
        code, out, _ = run(capsys, "analyze", str(src), "--json")
        report = json.loads(out)
        assert code == 0
        assert report["verdict"] == "Inconclusive"
        values = np.array(report["singular_values"])
        assert np.abs(values[:2] - [0.75, 0.25]).max() < 1e-12

    def test_deterministic_output(self, tmp_path, capsys):
        src = tmp_path / "bell.json"
        run(capsys, "gen", "bell", "2", str(src))
        _, first, _ = run(capsys, "analyze", str(src), "--json")
        _, second, _ = run(capsys, "analyze", str(src), "--json")
        assert first == second

    def test_pure_file_accepted(self, tmp_path, capsys):
        src = tmp_path / "pure.json"
        stateio.save(src, PureState(np.array([1, 0, 0, 0], dtype=complex), (2, 2)))
        code, out, _ = run(capsys, "analyze", str(src), "--json")
        assert code == 0
        assert json.loads(out)["verdict"] == "CertifiedSeparable"

    def test_partition_flag(self, tmp_path, capsys):
        src = tmp_path / "mm3.json"
        run(capsys, "gen", "mixed", "2", "2", "2", str(src))
        code, out, _ = run(capsys, "analyze", str(src), "--partition", "(12)(3)", "--json")
        assert code == 0
        assert json.loads(out)["verdict"] == "CertifiedSeparable"

    def test_single_block_partition_exits_2(self, tmp_path, capsys):
        src = tmp_path / "mm3.json"
        run(capsys, "gen", "mixed", "2", "2", "2", str(src))
        code, _, err = run(capsys, "analyze", str(src), "--partition", "(123)")
        assert code == 2 and err

    def test_non_contiguous_partition_exits_2(self, tmp_path, capsys):
        src = tmp_path / "mm3.json"
        run(capsys, "gen", "mixed", "2", "2", "2", str(src))
        code, _, err = run(capsys, "analyze", str(src), "--partition", "(13)(2)")
        assert code == 2 and err

    def test_tolerance_overrides(self, tmp_path, capsys):
        src = tmp_path / "mm.json"
        run(capsys, "gen", "mixed", "2", "2", str(src))
        code, out, _ = run(capsys, "analyze", str(src), "--json", "--tol-psd", "1e-7",
                           "--tol-rank", "1e-8")
        report = json.loads(out)
        assert code == 0
        assert report["tolerances_used"]["psd_tol"] == 1e-7
        assert report["tolerances_used"]["rank_tol"] == 1e-8

    def test_malformed_input_exits_2(self, tmp_path, capsys):
        src = tmp_path / "bad.json"
        src.write_text("{broken")
        code, _, err = run(capsys, "analyze", str(src))
        assert code == 2 and err


class TestCheckProduct:
    def test_pure_basis_state(self, tmp_path, capsys):
        src = tmp_path / "pure.json"
        stateio.save(src, PureState(np.array([1, 0, 0, 0], dtype=complex), (2, 2)))
        code, out, _ = run(capsys, "check-product", str(src), "--pure", "--json")
        assert code == 0
        report = json.loads(out)
        assert report["accepted"] and len(report["factors"]) == 2

    def test_bell_rejected(self, tmp_path, capsys):
        src = tmp_path / "bell.json"
        run(capsys, "gen", "bell", "1", str(src))
        code, out, _ = run(capsys, "check-product", str(src), "--json")
        report = json.loads(out)
        assert code == 0
        assert not report["accepted"]
        assert "rank 4" in report["reason"]

    def test_triple_product(self, tmp_path, capsys):
        src = tmp_path / "triple.json"
        matrix = random_density(2, 2, seed=1).matrix
        for seed in (2, 3):
            matrix = np.kron(matrix, random_density(2, 2, seed=seed).matrix)
        stateio.save(src, DensityMatrix(matrix, (2, 2, 2)))
        code, out, _ = run(capsys, "check-product", str(src), "--json")
        report = json.loads(out)
        assert code == 0
        assert report["accepted"] and len(report["factors"]) == 3

    def test_human_output_mentions_reason(self, tmp_path, capsys):
        src = tmp_path / "bell.json"
        run(capsys, "gen", "bell", "1", str(src))
        code, out, _ = run(capsys, "check-product", str(src))
        assert code == 0
        assert "product state: no" in out and "rank 4" in out


class TestTopLevel:
    def test_unknown_command(self, capsys):
        code, _, err = run(capsys, "frobnicate")
        assert code == 2 and "unknown command" in err

    def test_no_arguments(self, capsys):
        code, _, err = run(capsys)
        assert code == 2 and "usage" in err

    def test_help(self, capsys):
        code, out, _ = run(capsys, "--help")
        assert code == 0 and "commands" in out
