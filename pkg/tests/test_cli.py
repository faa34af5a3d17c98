import json

from circlepack import cli
from circlepack.solution import read_solution, write_solution


def run_cli(args):
    return cli.main(args)


def solve_small(tmp_path, name="a.json", extra=()):
    out = tmp_path / name
    code = run_cli(
        ["solve", "--family", "linear", "--n", "4", "--l0", "30", "--time", "60",
         "--seed", "5", "-o", str(out), *extra]
    )
    return code, out


class TestSolve:
    def test_success_exit_zero_and_verifiable(self, tmp_path, capsys):
        code, out = solve_small(tmp_path)
        assert code == 0
        assert out.exists()
        sol = read_solution(str(out))
        assert sol.n == 4 and sol.seed == 5
        assert sol.wall_time_s is None  # reproducible serial mode
        assert run_cli(["verify", str(out), "--tol", "1e-9"]) == 0
        text = capsys.readouterr().out
        assert "container L" in text and "FEASIBLE" in text

    def test_zero_budget_exit_two(self, tmp_path):
        out = tmp_path / "none.json"
        code = run_cli(
            ["solve", "--family", "linear", "--n", "4", "--l0", "30", "--time", "0",
             "--seed", "1", "-o", str(out)]
        )
        assert code == 2
        assert not out.exists()

    def test_unknown_family_exit_one(self, tmp_path):
        code = run_cli(
            ["solve", "--family", "cubic", "--n", "4", "--time", "1",
             "-o", str(tmp_path / "x.json")]
        )
        assert code == 1

    def test_bad_n_exit_one(self, tmp_path):
        code = run_cli(
            ["solve", "--family", "linear", "--n", "0", "--time", "1",
             "-o", str(tmp_path / "x.json")]
        )
        assert code == 1

    def test_missing_required_flag_exit_one(self):
        assert run_cli(["solve", "--family", "linear", "--n", "4"]) == 1

    def test_svg_and_txt_outputs(self, tmp_path):
        svg = tmp_path / "out.svg"
        txt = tmp_path / "out.txt"
        code, _ = solve_small(tmp_path, extra=["--svg", str(svg), "--txt", str(txt)])
        assert code == 0
        assert svg.read_text().startswith("<svg")
        assert len(txt.read_text().splitlines()) == 4

    def test_byte_reproducible_with_seed(self, tmp_path):
        _, first = solve_small(tmp_path, name="one.json")
        _, second = solve_small(tmp_path, name="two.json")
        assert first.read_bytes() == second.read_bytes()


class TestVerify:
    def test_detects_corrupted_coordinate(self, tmp_path, capsys):
        code, out = solve_small(tmp_path)
        sol = read_solution(str(out))
        rows = list(sol.circles)
        idx, r, x, y = rows[2]
        rows[2] = (idx, r, x + 0.5, y)
        sol.circles = rows
        bad = tmp_path / "bad.json"
        write_solution(sol, str(bad))
        assert run_cli(["verify", str(bad), "--tol", "1e-9"]) == 2
        text = capsys.readouterr().out
        assert "INFEASIBLE" in text

    def test_parse_error_exit_one_with_location(self, tmp_path, capsys):
        bad = tmp_path / "garbage.json"
        bad.write_text('{"family": "linear", \n  broken')
        assert run_cli(["verify", str(bad)]) == 1
        err = capsys.readouterr().err
        assert "line" in err and "column" in err

    def test_missing_file_exit_one(self, tmp_path):
        assert run_cli(["verify", str(tmp_path / "absent.json")]) == 1


class TestRender:
    def test_renders_deterministic_bytes(self, tmp_path):
        _, sol_path = solve_small(tmp_path)
        a = tmp_path / "a.svg"
        b = tmp_path / "b.svg"
        assert run_cli(["render", str(sol_path), "-o", str(a)]) == 0
        assert run_cli(["render", str(sol_path), "-o", str(b)]) == 0
        assert a.read_bytes() == b.read_bytes()


class TestBench:
    def test_structure_and_determinism(self, tmp_path, capsys):
        csv_a = tmp_path / "a.csv"
        csv_b = tmp_path / "b.csv"
        args = ["bench", "--family", "linear", "--n-min", "4", "--n-max", "6",
                "--repeats", "2", "--l0", "40", "--time", "60", "--seed", "3",
                "-o"]
        assert run_cli(args + [str(csv_a)]) == 0
        assert run_cli(args + [str(csv_b)]) == 0
        lines = csv_a.read_text().splitlines()
        assert len(lines) == 4  # header + three instances
        assert lines[0].startswith("family,n,record_ASGO")
        # no records for n=4..6: hit/gap columns empty, L reported
        row = lines[1].split(",")
        assert row[0] == "linear" and row[1] == "4"
        assert row[6] == "" and row[7] == ""
        assert float(row[5]) <= 40.0
        assert csv_a.read_bytes() == csv_b.read_bytes()

    def test_gap_and_hits_against_records(self, tmp_path, monkeypatch):
        # a fake record makes a generous target so a single run hits it
        rec = tmp_path / "records.csv"
        rec.write_text("family,n,source,L\nlinear,4,PAS-PCI,20.0\nlinear,4,ASGO,21.0\n")
        monkeypatch.setenv("CIRCLEPACK_RECORDS", str(rec))
        out = tmp_path / "bench.csv"
        code = run_cli(
            ["bench", "--family", "linear", "--n-min", "4", "--n-max", "4",
             "--repeats", "1", "--l0", "19.0", "--time", "120", "--seed", "1",
             "--rel-tol", "1e-6", "-o", str(out)]
        )
        assert code == 0
        header, row = out.read_text().splitlines()
        cells = dict(zip(header.split(","), row.split(",")))
        assert cells["record_PAS-PCI"] == "20.00000000000"
        assert cells["record_ASGO"] == "21.00000000000"
        assert float(cells["best_L"]) <= 19.0
        assert float(cells["gap_pct"]) < 0.0  # beat the fake record
        assert cells["hits"] == "1"

    def test_bad_range_exit_one(self):
        assert run_cli(["bench", "--family", "linear", "--n-min", "6", "--n-max", "4",
                        "--repeats", "1", "--time", "1"]) == 1


class TestSweep:
    def test_csv_shape(self, tmp_path):
        out = tmp_path / "sweep.csv"
        code = run_cli(
            ["sweep", "--family", "linear", "--n", "4", "--m-values", "1,2",
             "--repeats", "1", "--l0", "30", "--time", "60", "--seed", "2",
             "-o", str(out)]
        )
        assert code == 0
        lines = out.read_text().splitlines()
        assert lines[0] == "m,hits,repeats,avg_time_s,best_L,worst_L,avg_L"
        assert len(lines) == 3
        for line in lines[1:]:
            m = int(line.split(",")[0])
            assert m in (1, 2)

    def test_bad_m_values_exit_one(self):
        assert run_cli(["sweep", "--family", "linear", "--n", "4",
                        "--m-values", "a,b", "--time", "1"]) == 1


def test_no_command_exit_one():
    assert run_cli([]) == 1


def test_help_exits_zero():
    assert run_cli(["--help"]) == 0
