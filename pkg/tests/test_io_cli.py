"""File formats and the command-line interface."""

from __future__ import annotations

import math
from pathlib import Path

import numpy as np
import pytest

from geoinv.cli import main
from geoinv.io import (
    fmt,
    parse_cif_lite,
    parse_xyz,
    to_csv,
    write_cif_lite,
    write_xyz,
)
from geoinv.periodic import ppc

FIXTURES = Path(__file__).parent / "fixtures"


def test_parse_cif_cubic():
    S = parse_cif_lite((FIXTURES / "cubic.cif").read_text())
    assert S.basis == pytest.approx(np.eye(3), abs=1e-12)
    assert len(S.motif) == 1


def test_parse_cif_hexagonal():
    S = parse_cif_lite((FIXTURES / "hexagonal.cif").read_text())
    assert S.rank == 3
    assert S.cell_volume() == pytest.approx(10 * math.sqrt(3) / 2, abs=1e-9)


def test_cif_round_trip():
    S = parse_cif_lite((FIXTURES / "cubic.cif").read_text())
    T = parse_cif_lite(write_cif_lite(S))
    assert np.abs(T.basis - S.basis).max() < 1e-9
    assert np.abs(T.motif - S.motif).max() < 1e-9


def test_cif_malformed_angle_rejected():
    text = (FIXTURES / "cubic.cif").read_text().replace(
        "_cell_angle_beta 90", "_cell_angle_beta 200"
    )
    with pytest.raises(ValueError):
        parse_cif_lite(text)


def test_cif_non_p1_rejected():
    text = (FIXTURES / "cubic.cif").read_text().replace("'P 1'", "'P -1'")
    with pytest.raises(ValueError):
        parse_cif_lite(text)


def test_cif_occupancy_rejected():
    text = (FIXTURES / "hexagonal.cif").read_text().replace(
        "C1 0.0 0.0 0.0 1.0", "C1 0.0 0.0 0.0 0.5"
    )
    with pytest.raises(ValueError):
        parse_cif_lite(text)


def test_cif_missing_tag_rejected():
    text = "\n".join(
        ln
        for ln in (FIXTURES / "cubic.cif").read_text().splitlines()
        if "_cell_length_b" not in ln
    )
    with pytest.raises(ValueError):
        parse_cif_lite(text)


def test_cif_uncertainty_suffix():
    text = (FIXTURES / "cubic.cif").read_text().replace(
        "_cell_length_a 1.0", "_cell_length_a 1.0(2)"
    )
    S = parse_cif_lite(text)
    assert S.basis[0, 0] == pytest.approx(1.0)


def test_xyz_round_trip():
    text = (FIXTURES / "trapezium.xyz").read_text()
    C = parse_xyz(text)
    assert C.points.shape == (4, 2)
    D = parse_xyz(write_xyz(C, "again"))
    assert np.abs(D.points - C.points).max() < 1e-12


def test_xyz_header_mismatch_rejected():
    with pytest.raises(ValueError):
        parse_xyz("3\ncomment\nA 0 0\n")


def test_fmt_significant_digits():
    assert fmt(1 / 3) == "0.333333333333"
    assert fmt(-0.0) == "0"
    assert to_csv([[1.0, 0.5]], ["a", "b"]) == "a,b\n1,0.5\n"


def test_cli_lattice_invariant(capsys):
    assert main(["lattice", "invariant", "--basis", "1", "0", "0", "1"]) == 0
    out = capsys.readouterr().out.splitlines()
    assert out[0] == "r12,r01,r02,sign,x,y"
    assert out[1] == "0,1,1,0,0,0"


def test_cli_cloud_compare(capsys):
    code = main(
        [
            "cloud",
            "compare",
            "--k",
            "3",
            str(FIXTURES / "trapezium.xyz"),
            str(FIXTURES / "kite.xyz"),
        ]
    )
    assert code == 0
    value = float(capsys.readouterr().out.splitlines()[1])
    assert value > 0


def test_cli_usage_error_exit_1(capsys):
    assert main(["no-such-command"]) == 1


def test_cli_data_error_exit_2(capsys):
    assert main(["cloud", "pdd", "/nonexistent/file.xyz"]) == 2


def test_cli_json_output(capsys):
    import json

    assert (
        main(
            [
                "periodic",
                "ppc",
                str(FIXTURES / "cubic.cif"),
                "--format",
                "json",
            ]
        )
        == 0
    )
    data = json.loads(capsys.readouterr().out)
    S = parse_cif_lite((FIXTURES / "cubic.cif").read_text())
    assert data["ppc"] == pytest.approx(ppc(S), abs=1e-9)


def test_cli_output_file(tmp_path):
    out = tmp_path / "res.csv"
    assert (
        main(["periodic", "amd", str(FIXTURES / "cubic.cif"), "--k", "6", "--output", str(out)])
        == 0
    )
    assert out.read_text().strip() == "1,1,1,1,1,1"


def test_cli_deterministic_output(capsys):
    args = ["cloud", "pdd", str(FIXTURES / "kite.xyz"), "--k", "3"]
    assert main(args) == 0
    first = capsys.readouterr().out
    assert main(args) == 0
    assert capsys.readouterr().out == first


def test_cli_density_and_seq(capsys, tmp_path):
    assert (
        main(
            [
                "density",
                "rho",
                "--period",
                "1",
                "--points",
                "0",
                "0.3333333333333333",
                "0.5",
                "--k",
                "0",
            ]
        )
        == 0
    )
    assert float(capsys.readouterr().out.splitlines()[1]) == pytest.approx(7 / 72)
    pts = tmp_path / "pts.txt"
    pts.write_text("0 0\n0 1\n1 0\n1 1\n")
    assert main(["seq1", "cdm", str(pts)]) == 0
    rows = capsys.readouterr().out.splitlines()
    assert len(rows) == 3


def test_cli_backbone_round_trip(tmp_path, capsys):
    tsv = tmp_path / "chain.tsv"
    tsv.write_text(
        "1\t0\t0\t0\t1.5\t0\t0\t2\t1\t0\n2\t3\t1\t0.5\t4\t0.5\t0\t5\t1.5\t0.3\n"
    )
    out = tmp_path / "bri.csv"
    assert main(["backbone", "bri", str(tsv), "--output", str(out)]) == 0
    rows = out.read_text().strip().splitlines()
    assert len(rows) == 2
    assert main(["backbone", "compare", str(tsv), str(tsv)]) == 0
    assert float(capsys.readouterr().out.splitlines()[1]) == 0.0


def test_cli_selftest():
    assert main(["selftest", "--seed", "3"]) == 0
