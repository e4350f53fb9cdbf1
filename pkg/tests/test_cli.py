"""Exit codes, file outputs, and printed reports of the command line."""

from pathlib import Path

import numpy as np
import pytest

import relusplines as rs
from relusplines.cli import main

FIXTURES = Path(__file__).resolve().parent / "fixtures"
MAX_NET = str(FIXTURES / "max_knots_network.json")
MAX_SPLINE = str(FIXTURES / "max_knots_spline.json")


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    captured = capsys.readouterr()
    return code, captured.out, captured.err


class TestEval:
    def spline_file(self, tmp_path, **kw):
        obj = {"q1": 1.0, "q0": 0.0, "knots": [], "coeffs": []} | kw
        path = tmp_path / "spline.json"
        rs.dump_json(path, obj)
        return path

    def test_identity_two_samples(self, tmp_path, capsys):
        path = self.spline_file(tmp_path)
        code, out, _ = run(capsys, "eval", path, "--from", "0", "--to", "1", "--samples", "2")
        assert code == 0
        assert out == "0,0\n1,1\n"

    def test_header_and_output_file(self, tmp_path, capsys):
        path = self.spline_file(tmp_path)
        csv = tmp_path / "out.csv"
        code, out, _ = run(capsys, "eval", path, "--from", "0", "--to", "1",
                           "--samples", "3", "-o", csv, "--header")
        assert code == 0
        assert out == ""
        assert csv.read_text() == "t,value\n0,0\n0.5,0.5\n1,1\n"

    def test_network_input(self, capsys):
        # one sample sits at the start of the range; the value is the
        # network's computed double, printed with shortest round trip
        code, out, _ = run(capsys, "eval", MAX_NET, "--from", "0", "--to", "1", "--samples", "1")
        assert code == 0
        assert out == "0,0.20000000000000018\n"
        assert float(out.split(",")[1]) == pytest.approx(0.2)

    def test_range_must_be_increasing(self, tmp_path, capsys):
        path = self.spline_file(tmp_path)
        code, _, err = run(capsys, "eval", path, "--from", "1", "--to", "1", "--samples", "2")
        assert code == 2
        assert "below" in err

    def test_samples_must_be_positive(self, tmp_path, capsys):
        path = self.spline_file(tmp_path)
        code, _, err = run(capsys, "eval", path, "--from", "0", "--to", "1", "--samples", "0")
        assert code == 2

    def test_missing_file(self, tmp_path, capsys):
        code, _, err = run(capsys, "eval", tmp_path / "nope.json",
                           "--from", "0", "--to", "1", "--samples", "2")
        assert code == 2
        assert "error:" in err

    def test_csv_is_bit_stable(self, tmp_path, capsys):
        first = tmp_path / "a.csv"
        second = tmp_path / "b.csv"
        for csv in (first, second):
            code, _, _ = run(capsys, "eval", MAX_NET, "--from", "-1.7", "--to", "4.9",
                             "--samples", "113", "-o", csv)
            assert code == 0
        assert first.read_bytes() == second.read_bytes()


class TestToSpline:
    def test_reference_network(self, tmp_path, capsys):
        out_path = tmp_path / "spline.json"
        code, out, _ = run(capsys, "to-spline", MAX_NET, "-o", out_path)
        assert code == 0
        assert out == "knots: observed=15 bound=15\n"
        written = rs.spline_from_obj(rs.load_json(out_path))
        expected = rs.dnn_to_spline(rs.network_from_obj(rs.load_json(MAX_NET)))
        assert written.q1 == expected.q1 and written.q0 == expected.q0
        np.testing.assert_array_equal(written.knots, expected.knots)
        np.testing.assert_array_equal(written.coeffs, expected.coeffs)

    def test_malformed_input(self, tmp_path, capsys):
        bad = tmp_path / "bad.json"
        bad.write_text("{oops")
        code, _, err = run(capsys, "to-spline", bad, "-o", tmp_path / "s.json")
        assert code == 2
        assert "not valid JSON" in err

    def test_shape_mismatch(self, tmp_path, capsys):
        obj = rs.load_json(MAX_NET)
        obj["layers"][1]["A"] = [[1.0, 2.0]]
        bad = tmp_path / "bad.json"
        rs.dump_json(bad, obj)
        code, _, err = run(capsys, "to-spline", bad, "-o", tmp_path / "s.json")
        assert code == 3

    def test_inconsistent_tolerances(self, tmp_path, capsys):
        code, _, err = run(capsys, "to-spline", MAX_NET, "--tol-merge", "1e-3",
                           "-o", tmp_path / "s.json")
        assert code == 2
        assert "merge_tol" in err

    def test_tolerance_flags_accepted(self, tmp_path, capsys):
        code, _, _ = run(capsys, "to-spline", MAX_NET, "--tol-zero", "1e-8",
                         "--tol-merge", "1e-9", "--tol-eval", "1e-6",
                         "-o", tmp_path / "s.json")
        assert code == 0


class TestSynth:
    def test_no_source_reference(self, tmp_path, capsys):
        out_path = tmp_path / "net.json"
        code, out, _ = run(capsys, "synth", FIXTURES / "nine_flat_knots.json",
                           "--arch", "3,2", "--no-source", "--seeds", "-1,1",
                           "-o", out_path)
        assert code == 0
        assert out == "prescribed knots active: 9/9\n"
        assert rs.load_json(out_path) == rs.load_json(FIXTURES / "nine_knots_network.json")

    def test_seeds_equals_form(self, tmp_path, capsys):
        out_path = tmp_path / "net.json"
        code, _, _ = run(capsys, "synth", FIXTURES / "nine_flat_knots.json",
                         "--arch", "3,2", "--no-source", "--seeds=-1,1", "-o", out_path)
        assert code == 0
        assert rs.load_json(out_path) == rs.load_json(FIXTURES / "nine_knots_network.json")

    def test_two_level_hierarchy(self, tmp_path, capsys):
        out_path = tmp_path / "net.json"
        code, out, _ = run(capsys, "synth", FIXTURES / "max_knots_hierarchy.json",
                           "-o", out_path)
        assert code == 0
        assert out == "prescribed knots active: 15/15\n"
        net = rs.network_from_obj(rs.load_json(out_path))
        assert net.widths == (1, 3, 3, 1)

    def test_three_level_hierarchy(self, tmp_path, capsys):
        out_path = tmp_path / "net.json"
        with pytest.warns(RuntimeWarning, match="below log2"):
            code, out, _ = run(capsys, "synth", FIXTURES / "fourteen_hierarchy.json",
                               "-o", out_path)
        assert code == 0
        assert out == "prescribed knots active: 14/14\n"
        assert rs.load_json(out_path) == rs.load_json(FIXTURES / "three_hidden_network.json")

    def test_flat_knots_with_architecture(self, tmp_path, capsys):
        flat = tmp_path / "flat.json"
        rs.dump_json(flat, {"knots": np.arange(1.0, 9.0).tolist()})
        code, out, _ = run(capsys, "synth", flat, "--arch", "2,2", "-o", tmp_path / "net.json")
        assert code == 0
        assert out == "prescribed knots active: 8/8\n"

    def test_flat_needs_architecture(self, tmp_path, capsys):
        code, _, err = run(capsys, "synth", FIXTURES / "nine_flat_knots.json",
                           "-o", tmp_path / "net.json")
        assert code == 2
        assert "--arch" in err

    def test_wrong_knot_count(self, tmp_path, capsys):
        # 3 + 2 * 4 = 11 knots needed, file has 9
        code, _, err = run(capsys, "synth", FIXTURES / "nine_flat_knots.json",
                           "--arch", "3,2", "-o", tmp_path / "net.json")
        assert code == 3

    def test_duplicate_knots(self, tmp_path, capsys):
        flat = tmp_path / "dup.json"
        rs.dump_json(flat, {"knots": [1.0, 1.0, 2.0]})
        code, _, err = run(capsys, "synth", flat, "--arch", "1,1", "-o", tmp_path / "net.json")
        assert code == 4
        assert "strictly increasing" in err

    def test_inactive_knot_reported(self, tmp_path, capsys):
        # a single second-layer unit cannot keep even-position level-1 knots
        flat = tmp_path / "five.json"
        rs.dump_json(flat, {"knots": [0.0, 1.0, 2.0, 3.0, 4.0]})
        with pytest.warns(RuntimeWarning, match="single second-layer unit"):
            code, _, err = run(capsys, "synth", flat, "--arch", "2,1",
                               "-o", tmp_path / "net.json")
        assert code == 5
        assert "inactive prescribed knots: [3.0]" in err

    def test_same_sign_seeds_rejected(self, tmp_path, capsys):
        code, _, err = run(capsys, "synth", FIXTURES / "nine_flat_knots.json",
                           "--arch", "3,2", "--no-source", "--seeds", "1,1",
                           "-o", tmp_path / "net.json")
        assert code == 2
        assert "sign change" in err


class TestVerify:
    def test_every_fixture_verifies(self, capsys):
        networks = sorted(FIXTURES.glob("*_network.json"))
        assert networks
        for net_path in networks:
            code, _, _ = run(capsys, "verify", net_path)
            assert code == 0, net_path.name
            spline_path = net_path.with_name(net_path.name.replace("_network", "_spline"))
            code, _, _ = run(capsys, "verify", net_path, spline_path)
            assert code == 0, spline_path.name

    def test_reports_error_and_bound(self, capsys):
        code, out, _ = run(capsys, "verify", MAX_NET, MAX_SPLINE)
        assert code == 0
        assert out.startswith("max relative error: ")
        assert "knots: observed=15 bound=15 ok" in out

    def test_perturbed_spline_fails(self, tmp_path, capsys):
        obj = rs.load_json(MAX_SPLINE)
        obj["q0"] += 1.0
        bad = tmp_path / "bad.json"
        rs.dump_json(bad, obj)
        code, out, _ = run(capsys, "verify", MAX_NET, bad)
        assert code == 1
        assert "max relative error" in out


class TestNormalize:
    def test_reference_signs(self, tmp_path, capsys):
        out_path = tmp_path / "net.json"
        code, out, _ = run(capsys, "normalize", MAX_NET, "-o", out_path)
        assert code == 0
        assert out == "layer 2 source signs: before [0.0, 0.0, 0.0] after [1.0, 1.0, -1.0]\n"
        normalized = rs.network_from_obj(rs.load_json(out_path))
        assert rs.is_normalized(normalized)

    def test_function_preserved(self, tmp_path, capsys):
        out_path = tmp_path / "net.json"
        run(capsys, "normalize", MAX_NET, "-o", out_path)
        original = rs.network_from_obj(rs.load_json(MAX_NET))
        normalized = rs.network_from_obj(rs.load_json(out_path))
        grid = rs.probe_grid(rs.dnn_to_spline(original).knots)
        np.testing.assert_allclose(
            rs.eval_network(normalized, grid), rs.eval_network(original, grid),
            rtol=0, atol=1e-9,
        )

    def test_degenerate_fails_with_warning(self, tmp_path, capsys):
        obj = {
            "widths": [1, 2, 1],
            "layers": [
                {"A": [[1.0], [1.0]], "b": [0.0, 0.0]},
                {"A": [[1.0, 1.0]], "b": [0.0]},
            ],
        }
        bad = tmp_path / "deg.json"
        rs.dump_json(bad, obj)
        code, _, err = run(capsys, "normalize", bad, "-o", tmp_path / "net.json")
        assert code == 1
        assert "effective width 1 of 2" in err
        assert not (tmp_path / "net.json").exists()

    def test_shallow_reports_no_interior(self, tmp_path, capsys):
        obj = {
            "widths": [1, 2, 1],
            "layers": [
                {"A": [[1.0], [-1.0]], "b": [0.0, 1.0]},
                {"A": [[1.0, 1.0]], "b": [0.0]},
            ],
        }
        net = tmp_path / "net.json"
        rs.dump_json(net, obj)
        code, out, _ = run(capsys, "normalize", net, "-o", tmp_path / "out.json")
        assert code == 0
        assert out == "no interior layers to normalize\n"
