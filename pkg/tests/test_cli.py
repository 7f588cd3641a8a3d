import json
import math

import numpy as np
import pytest

from localbound.cli import load_matrix_file, load_vector_file, main


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out


class TestHarper:
    def test_basic_enclosure(self, capsys):
        code, out = run(capsys, "harper", "--m", "1", "--n", "3", "--v0", "1")
        report = json.loads(out)
        assert code == 0
        assert report["upper"] - report["lower"] <= 1e-6
        assert report["lower"] - 1e-12 <= report["exact"] <= report["upper"] + 1e-12

    def test_zero_amplitude(self, capsys):
        code, out = run(capsys, "harper", "--m", "1", "--n", "4", "--v0", "0")
        report = json.loads(out)
        assert code == 0
        assert report["exact"] == pytest.approx(-2.0, abs=1e-12)
        assert report["lower"] == pytest.approx(-2.0, abs=1e-12)
        assert report["upper"] == pytest.approx(-2.0, abs=1e-12)

    def test_noncoprime_is_usage_error(self, capsys):
        code, _ = run(capsys, "harper", "--m", "2", "--n", "4")
        assert code == 2

    def test_small_period_is_usage_error(self, capsys):
        code, _ = run(capsys, "harper", "--m", "1", "--n", "2")
        assert code == 2


class TestButterfly:
    def test_row_enumeration(self, capsys, tmp_path):
        out_path = tmp_path / "sweep.csv"
        code, out = run(capsys, "butterfly", "--n-max", "5", "--v0", "2",
                        "--out", str(out_path))
        assert code == 0
        assert json.loads(out)["rows"] == 8
        lines = out_path.read_text().strip().split("\n")
        assert lines[0] == "M,N,lower,upper,exact"
        assert len(lines) == 9
        pairs = [tuple(int(x) for x in line.split(",")[:2]) for line in lines[1:]]
        assert pairs == [(1, 3), (2, 3), (1, 4), (3, 4),
                         (1, 5), (2, 5), (3, 5), (4, 5)]
        for line in lines[1:]:
            _, _, lower, upper, exact = line.split(",")
            assert float(lower) - 1e-12 <= float(exact) <= float(upper) + 1e-12

    def test_minimal_sweep(self, capsys, tmp_path):
        out_path = tmp_path / "tiny.csv"
        code, out = run(capsys, "butterfly", "--n-max", "3", "--out", str(out_path))
        assert code == 0
        assert json.loads(out)["rows"] == 2

    def test_unwritable_path(self, capsys, tmp_path):
        code, _ = run(capsys, "butterfly", "--n-max", "3",
                      "--out", str(tmp_path / "missing_dir" / "x.csv"))
        assert code == 2

    def test_jobs_flag_preserves_output(self, capsys, tmp_path):
        serial = tmp_path / "serial.csv"
        threaded = tmp_path / "threaded.csv"
        run(capsys, "butterfly", "--n-max", "4", "--out", str(serial))
        run(capsys, "butterfly", "--n-max", "4", "--out", str(threaded), "--jobs", "3")
        assert serial.read_bytes() == threaded.read_bytes()


class TestFnmax:
    def test_four_points(self, capsys, tmp_path):
        out_path = tmp_path / "best.txt"
        code, out = run(capsys, "fnmax", "--n", "4", "--restarts", "5",
                        "--max-iterations", "2000", "--out", str(out_path))
        report = json.loads(out)
        assert code == 0
        assert report["best_value"] == pytest.approx(6.0, abs=1e-6)
        assert report["known_reference"] == 6.0
        assert abs(report["gap_to_reference"]) <= 1e-6
        header = out_path.read_text().split("\n")[0]
        assert header == "4 3"

    def test_planar_triangle(self, capsys):
        code, out = run(capsys, "fnmax", "--n", "3", "--d", "2", "--restarts", "4")
        report = json.loads(out)
        assert code == 0
        assert report["best_value"] == pytest.approx(1.5, abs=1e-8)
        assert report["known_reference"] is None  # references are d = 3 only

    def test_invalid_size(self, capsys):
        code, _ = run(capsys, "fnmax", "--n", "2")
        assert code == 2


class TestNbodyBounds:
    def test_two_body_pinch(self, capsys):
        code, out = run(capsys, "nbody-bounds", "--n", "2")
        report = json.loads(out)
        assert code == 0
        assert report["lower"] == pytest.approx(-0.25)
        assert report["upper"] == pytest.approx(-0.25)

    def test_three_body(self, capsys):
        _, out = run(capsys, "nbody-bounds", "--n", "3", "--alpha-source", "lemma3")
        report = json.loads(out)
        assert report["lower"] == pytest.approx(-9.0 / 8.0)
        assert report["upper"] == pytest.approx(-1.0)
        assert report["conjectural"] is False

    def test_conjectural_source_tightens(self, capsys):
        _, out_l = run(capsys, "nbody-bounds", "--n", "10", "--alpha-source", "lemma3")
        _, out_c = run(capsys, "nbody-bounds", "--n", "10", "--alpha-source", "c8")
        lemma, c8 = json.loads(out_l), json.loads(out_c)
        assert c8["lower"] > lemma["lower"]
        assert c8["conjectural"] is True

    def test_flat_space_is_usage_error(self, capsys):
        code, _ = run(capsys, "nbody-bounds", "--n", "3", "--d", "1")
        assert code == 2


class TestZeeman:
    def test_field_off(self, capsys):
        code, out = run(capsys, "zeeman", "--b", "0")
        report = json.loads(out)
        assert code == 0
        assert report["analytic"] == -0.5
        assert report["sampled"] == -0.5

    def test_default_grid_attains_bound(self, capsys):
        _, out = run(capsys, "zeeman", "--b", "2")
        report = json.loads(out)
        assert report["analytic"] == 0.5
        assert report["sampled"] == 0.5

    def test_grid_without_axis(self, capsys):
        _, out = run(capsys, "zeeman", "--b", "1", "--rho-min", "0.5", "--rho-max", "3")
        report = json.loads(out)
        assert report["sampled"] < report["analytic"]

    def test_negative_field_is_usage_error(self, capsys):
        code, _ = run(capsys, "zeeman", "--b", "-1")
        assert code == 2

    def test_profile_csv(self, capsys, tmp_path):
        path = tmp_path / "profile.csv"
        code, _ = run(capsys, "zeeman", "--b", "1", "--rho-points", "5",
                      "--z-points", "5", "--profile-out", str(path))
        assert code == 0
        lines = path.read_text().strip().split("\n")
        assert lines[0] == "rho,z,value"
        assert len(lines) == 26
        rho, z, value = (float(t) for t in lines[1].split(","))
        assert value <= 0.0 + 1e-12


def write_matrix(path, matrix, complex_entries=False):
    matrix = np.asarray(matrix)
    with open(path, "w") as handle:
        handle.write(f"{matrix.shape[0]} {matrix.shape[1]}\n")
        for row in matrix:
            if complex_entries:
                handle.write(" ".join(f"{v.real:.17g} {v.imag:.17g}" for v in row) + "\n")
            else:
                handle.write(" ".join(f"{v:.17g}" for v in row) + "\n")


class TestPerron:
    def test_identity(self, capsys, tmp_path):
        path = tmp_path / "identity.txt"
        write_matrix(path, np.eye(2))
        code, out = run(capsys, "perron", "--matrix", str(path))
        report = json.loads(out)
        assert code == 0
        assert (report["re_lower"], report["re_upper"]) == (1.0, 1.0)
        assert (report["im_lower"], report["im_upper"]) == (0.0, 0.0)

    def test_hand_example_contains_root(self, capsys, tmp_path):
        path = tmp_path / "hand.txt"
        write_matrix(path, [[1.0, 2.0], [3.0, 1.0]])
        code, out = run(capsys, "perron", "--matrix", str(path))
        report = json.loads(out)
        assert code == 0
        assert (report["re_lower"], report["re_upper"]) == (3.0, 4.0)
        assert report["perron_root"] == pytest.approx(1 + math.sqrt(6), abs=1e-9)
        assert report["contained"] is True

    def test_random_positive_matrix(self, capsys, tmp_path):
        rng = np.random.default_rng(0)
        path = tmp_path / "random.txt"
        write_matrix(path, rng.uniform(0.1, 1.0, size=(6, 6)))
        code, out = run(capsys, "perron", "--matrix", str(path))
        assert code == 0
        assert json.loads(out)["contained"] is True

    def test_custom_phi_file(self, capsys, tmp_path):
        matrix_path = tmp_path / "m.txt"
        phi_path = tmp_path / "phi.txt"
        write_matrix(matrix_path, [[1.0, 2.0], [3.0, 1.0]])
        phi_path.write_text("2.0\n1.0\n")
        _, out = run(capsys, "perron", "--matrix", str(matrix_path),
                     "--phi", str(phi_path))
        report = json.loads(out)
        # adjoint ratios: ((1*2 + 3*1)/2, (2*2 + 1*1)/1) = (2.5, 5)
        assert report["re_lower"] == pytest.approx(2.5)
        assert report["re_upper"] == pytest.approx(5.0)
        assert report["contained"] is True

    def test_complex_matrix_file(self, capsys, tmp_path):
        path = tmp_path / "c.txt"
        write_matrix(path, np.array([[1 + 1j, 0], [0, 2 - 0.5j]]), complex_entries=True)
        code, out = run(capsys, "perron", "--matrix", str(path), "--complex")
        report = json.loads(out)
        assert code == 0
        assert (report["re_lower"], report["re_upper"]) == (1.0, 2.0)
        assert report["perron_root"] is None

    def test_non_square_is_usage_error(self, capsys, tmp_path):
        path = tmp_path / "rect.txt"
        write_matrix(path, np.ones((2, 3)))
        code, _ = run(capsys, "perron", "--matrix", str(path))
        assert code == 2


class TestFileLoaders:
    def test_matrix_round_trip(self, tmp_path):
        path = tmp_path / "m.txt"
        matrix = np.array([[1.5, -2.0], [3.25, 0.0]])
        write_matrix(path, matrix)
        assert np.array_equal(load_matrix_file(path), matrix)

    def test_vector_loader(self, tmp_path):
        path = tmp_path / "v.txt"
        path.write_text("1.0\n2.5\n\n3.0\n")
        assert load_vector_file(path).tolist() == [1.0, 2.5, 3.0]

    def test_matrix_token_count_checked(self, tmp_path):
        path = tmp_path / "bad.txt"
        path.write_text("2 2\n1 2 3\n")
        with pytest.raises(ValueError):
            load_matrix_file(path)


class TestManifestsAndDeterminism:
    def test_repeat_runs_byte_identical(self, capsys, tmp_path):
        first_csv = tmp_path / "a.csv"
        second_csv = tmp_path / "b.csv"
        _, out1 = run(capsys, "butterfly", "--n-max", "4", "--out", str(first_csv))
        _, out2 = run(capsys, "butterfly", "--n-max", "4", "--out", str(second_csv))
        assert out1 == out2.replace(str(second_csv), str(first_csv))
        assert first_csv.read_bytes() == second_csv.read_bytes()

    def test_rerun_from_manifest(self, capsys, tmp_path):
        out_path = tmp_path / "sweep.csv"
        run(capsys, "butterfly", "--n-max", "4", "--v0", "1.5", "--out", str(out_path))
        manifest = json.loads((tmp_path / "sweep.csv.manifest.json").read_text())
        assert manifest["subcommand"] == "butterfly"
        first = out_path.read_bytes()
        code, _ = run(capsys, *manifest["argv"])
        assert code == 0
        assert out_path.read_bytes() == first

    def test_manifest_written_next_to_report(self, capsys, tmp_path):
        out_path = tmp_path / "report.json"
        run(capsys, "harper", "--m", "1", "--n", "3", "--out", str(out_path))
        manifest = json.loads((tmp_path / "report.json.manifest.json").read_text())
        assert manifest["subcommand"] == "harper"
        assert manifest["seed"] == 0
        assert manifest["version"]
        assert manifest["parameters"]["N"] == 3
        assert json.loads(out_path.read_text())["N"] == 3

    def test_fnmax_rerun_reproduces_configuration(self, capsys, tmp_path):
        out_path = tmp_path / "points.txt"
        args = ["fnmax", "--n", "4", "--restarts", "3", "--seed", "7",
                "--max-iterations", "1500", "--out", str(out_path)]
        _, out1 = run(capsys, *args)
        first = out_path.read_bytes()
        _, out2 = run(capsys, *args)
        assert out1 == out2
        assert out_path.read_bytes() == first
