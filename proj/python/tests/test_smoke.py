import math

import numpy as np
import pytest
import scipy.sparse as sp

import versatile_ns as vns

TWO_PI = 2.0 * math.pi


def test_mesh_counts():
    topo = vns.structured_mesh(1, 1)
    assert topo.num_elements == 2
    assert topo.num_vertices == 4
    assert topo.num_faces == 5
    assert topo.vertices.shape == (4, 2)
    assert topo.triangles.shape == (2, 3)


def test_periodic_box_has_no_boundary():
    topo = vns.structured_mesh(10, 10, (0, 0, TWO_PI, TWO_PI), True, True)
    assert topo.num_faces == 300
    assert topo.num_boundary_faces == 0
    assert topo.h == pytest.approx(0.8886, abs=1e-4)


def test_space_dimensions():
    topo = vns.structured_mesh(10, 10, (0, 0, TWO_PI, TWO_PI), True, True)
    assert vns.function_space(topo, "BDM", 2).num_dofs + vns.function_space(topo, "DC-pressure", 1).num_dofs + 1 == 2101
    with pytest.raises(Exception):
        vns.function_space(topo, "Nedelec", 1)


def test_mass_matrix_of_unit_field():
    topo = vns.structured_mesh(4, 4)
    V = vns.function_space(topo, "TH-velocity", 2)
    M = vns.mass_matrix(V)
    assert sp.issparse(M)
    e1 = vns.interpolate(V, lambda x, y: (1.0, 0.0)).coeffs
    assert e1 @ (M @ e1) == pytest.approx(1.0, abs=1e-13)


def test_interpolated_field_is_divergence_free():
    topo = vns.structured_mesh(8, 8, (0, 0, TWO_PI, TWO_PI), True, True)
    V = vns.function_space(topo, "BDM", 2)
    u = vns.interpolate(V, lambda x, y: (-math.sin(x) * math.cos(y), math.cos(x) * math.sin(y)))
    assert vns.max_cellwise_divergence(u) < 1e-11
    assert vns.kinetic_energy(u) == pytest.approx(math.pi**2, rel=2e-2)
    v = u(1.0, 2.0)
    assert v[0] == pytest.approx(-math.sin(1.0) * math.cos(2.0), abs=5e-3)


def test_central_convection_is_skew():
    topo = vns.structured_mesh(6, 6, (0, 0, TWO_PI, TWO_PI), True, True)
    V = vns.function_space(topo, "BDM", 1)
    beta = vns.interpolate(V, lambda x, y: (math.sin(y), math.cos(x)))
    C = vns.convection_matrix(V, beta, 0.0)
    assert abs(C + C.T).max() < 1e-12 * abs(C).max()


def test_config_defaults_and_rejection():
    cfg = vns.config({"k": 2})
    assert cfg["eta"] == pytest.approx(vns.default_eta(2))
    with pytest.raises(vns.ConfigError):
        vns.config({"bogus_key": 1})


def test_short_taylor_green_run():
    res = vns.run_case({"k": 1, "nx": 6, "ny": 6, "dt": 0.01, "t_end": 0.05})
    diag = res["diagnostics"]
    assert res["t"] == pytest.approx(0.05)
    assert diag["step"] == [0, 1, 2, 3, 4, 5]
    assert max(diag["max_divergence"]) < 1e-10
    assert np.isfinite(res["vel_error"]) and res["vel_error"] < 0.5
    assert res["velocity"].coeffs.shape[0] > 0


def test_convergence_rows_and_table():
    rows = vns.run_convergence({"k": 1, "nx_list": [4, 8], "dt": 0.02, "t_end": 0.04})
    assert len(rows) == 2
    assert rows[1]["h"] < rows[0]["h"]
    assert math.isnan(rows[0]["vel_order"])
    text = vns.format_error_table(rows)
    assert text.splitlines()[0].startswith("k,h,dof")
    assert len(text.strip().splitlines()) == 3


def test_observed_order_and_kernel():
    orders = vns.observed_order([(1.0, 1.0), (0.5, 0.125)])
    assert orders[0] == pytest.approx(3.0)
    value, residual = vns.eval_kernel_field(2, [1.0, 2.0, 0.5], np.array([0.1, 0.2]))
    assert value.shape == (2,)
    assert np.abs(residual).max() < 1e-12
