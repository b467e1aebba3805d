import math

import pytest

from fourns_plots import (
    CrossCheckError,
    PlotSpec,
    SchemaError,
    render,
)


def write_sweep(path, rows, slope):
    lines = ["N,delta_E_I,sign,fitted_slope"]
    lines += [f"{n},{d},{sign},{slope!r}" for n, d, sign in rows]
    lines += [f"# fitted_slope,{slope!r}", "# t_star,3.84e-08"]
    path.write_text("\n".join(lines) + "\n")
    return path


def write_diagnostics(path, rows):
    lines = ["t,mass,energy,h_s,h2,linf,mod_energy_N8"]
    lines += [",".join(repr(float(v)) for v in row) for row in rows]
    path.write_text("\n".join(lines) + "\n")
    return path


def write_calc(path, entries):
    header = (
        "k,s,threshold,threshold_dec,split_point,split_point_dec,second_threshold,"
        "e1,e2,e1_positive,e2_positive,growth_exponent,growth_exponent_dec"
    )
    lines = [header]
    for k, s, growth_frac, growth_dec in entries:
        lines.append(f"{k},{s},5/4,1.25,3/2,1.5,4/3,1,1,True,True,{growth_frac},{growth_dec}")
    path.write_text("\n".join(lines) + "\n")
    return path


@pytest.fixture
def sweep_rows():
    # two-point fit over the top half has the closed form log2(d64/d32)
    rows = [(8.0, 1.2e3, 1), (16.0, 94.0, -1), (32.0, 1.0e-2, -1), (64.0, 7.7e-5, 1)]
    slope = math.log(7.7e-5 / 1.0e-2) / math.log(64.0 / 32.0)
    return rows, slope


class TestAclDecay:
    def test_annotation_matches_footer_within_1e9(self, tmp_path, sweep_rows):
        rows, slope = sweep_rows
        csv = write_sweep(tmp_path / "sweep.csv", rows, slope)
        out = render(
            PlotSpec("acl_decay", {"sweep": str(csv)}, str(tmp_path / "acl.png"))
        )
        assert out.output.exists() and out.output.stat().st_size > 0
        assert abs(out.annotations["fitted_slope"] - slope) <= 1e-9
        assert out.annotations["reference_exponent"] == -3.0

    def test_mismatched_footer_refused(self, tmp_path, sweep_rows):
        rows, slope = sweep_rows
        csv = write_sweep(tmp_path / "sweep.csv", rows, slope + 1e-6)
        with pytest.raises(CrossCheckError):
            render(PlotSpec("acl_decay", {"sweep": str(csv)}, str(tmp_path / "acl.png")))

    def test_reference_overlay_configurable(self, tmp_path, sweep_rows):
        rows, slope = sweep_rows
        csv = write_sweep(tmp_path / "sweep.csv", rows, slope)
        out = render(
            PlotSpec(
                "acl_decay",
                {"sweep": str(csv)},
                str(tmp_path / "acl.png"),
                overlays={"reference_exponent": -4.0},
            )
        )
        assert out.annotations["reference_exponent"] == -4.0

    def test_missing_column_named(self, tmp_path):
        (tmp_path / "sweep.csv").write_text("N,delta\n8.0,1.0\n16.0,0.5\n")
        with pytest.raises(SchemaError, match="delta_E_I"):
            render(
                PlotSpec(
                    "acl_decay",
                    {"sweep": str(tmp_path / "sweep.csv")},
                    str(tmp_path / "a.png"),
                )
            )


class TestDrift:
    def test_renders(self, tmp_path):
        rows = [
            (0.0, 3.14159, 58.12, 2.2, 3.1, 1.0, 58.12),
            (0.001, 3.14159, 58.12000001, 2.2, 3.1, 1.0, 58.12),
            (0.002, 3.141590001, 58.1200002, 2.21, 3.11, 1.01, 58.1200001),
        ]
        csv = write_diagnostics(tmp_path / "diag.csv", rows)
        out = render(PlotSpec("drift", {"diagnostics": str(csv)}, str(tmp_path / "d.png")))
        assert out.output.exists()
        assert out.annotations["rows"] == 3

    def test_empty_refused(self, tmp_path):
        csv = write_diagnostics(tmp_path / "diag.csv", [])
        with pytest.raises(SchemaError, match="no diagnostics rows"):
            render(PlotSpec("drift", {"diagnostics": str(csv)}, str(tmp_path / "d.png")))


class TestGrowth:
    def test_envelope_exponent_from_calc_table(self, tmp_path):
        diag = write_diagnostics(
            tmp_path / "diag.csv",
            [(0.0, 1.0, 2.0, 5.0, 6.0, 1.0, 2.0), (0.5, 1.0, 2.0, 5.5, 6.5, 1.0, 2.0)],
        )
        calc = write_calc(tmp_path / "calc.csv", [(1, "3/2", "1", "1.0")])
        out = render(
            PlotSpec(
                "growth",
                {"diagnostics": str(diag), "calc": str(calc)},
                str(tmp_path / "g.png"),
                params={"k": 1, "s": "3/2"},
            )
        )
        # independent recomputation: (4 - 2s)/(4ks - 8k + 3) at k=1, s=3/2
        want = (4.0 - 2.0 * 1.5) / (4.0 * 1.5 - 8.0 + 3.0)
        assert abs(out.annotations["envelope_exponent"] - want) <= 1e-9

    def test_unknown_pair_refused(self, tmp_path):
        diag = write_diagnostics(tmp_path / "diag.csv", [(0.0, 1, 2, 5, 6, 1, 2)])
        calc = write_calc(tmp_path / "calc.csv", [(1, "3/2", "1", "1.0")])
        with pytest.raises(SchemaError, match="no row"):
            render(
                PlotSpec(
                    "growth",
                    {"diagnostics": str(diag), "calc": str(calc)},
                    str(tmp_path / "g.png"),
                    params={"k": 2, "s": "3/2"},
                )
            )

    def test_subthreshold_pair_refused(self, tmp_path):
        diag = write_diagnostics(tmp_path / "diag.csv", [(0.0, 1, 2, 5, 6, 1, 2)])
        calc = write_calc(tmp_path / "calc.csv", [(1, "5/4", "", "")])
        with pytest.raises(SchemaError, match="threshold"):
            render(
                PlotSpec(
                    "growth",
                    {"diagnostics": str(diag), "calc": str(calc)},
                    str(tmp_path / "g.png"),
                    params={"k": 1, "s": "5/4"},
                )
            )


class TestLabConstants:
    def test_renders(self, tmp_path):
        lines = ["case,k,s,N,samples,max_ratio,constant"]
        for case, c in (("T1C1", 1.02), ("T2C2", 0.92), ("hyperplane", 1.03)):
            lines.append(f"{case},1,1.5,16.0,100000,{c},{c}")
        (tmp_path / "lab.csv").write_text("\n".join(lines) + "\n")
        out = render(
            PlotSpec(
                "lab_constants",
                {"lab": str(tmp_path / "lab.csv")},
                str(tmp_path / "lab.png"),
            )
        )
        assert out.output.exists()
        assert out.annotations["cases"] == 3


class TestSpecValidation:
    def test_unknown_kind(self, tmp_path):
        with pytest.raises(ValueError, match="unknown figure kind"):
            PlotSpec("heatmap", {}, str(tmp_path / "x.png"))

    def test_missing_input_file(self, tmp_path):
        with pytest.raises(SchemaError, match="not found"):
            render(
                PlotSpec(
                    "drift",
                    {"diagnostics": str(tmp_path / "nope.csv")},
                    str(tmp_path / "d.png"),
                )
            )
