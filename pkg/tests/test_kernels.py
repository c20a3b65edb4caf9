import subprocess
import sys

import numpy as np
import pytest

from tempoctrl import _kernels, flow
from tempoctrl.edge_analysis import edge_betweenness
from tempoctrl.generate import GeneratorSpec, er_temporal
from tempoctrl.temporal_graph import build_layered


@pytest.fixture
def restore_backend():
    before = _kernels.active_backend()
    yield
    _kernels.set_backend(before)


def test_backends_agree_on_flow(restore_backend):
    for seed in range(5):
        net = er_temporal(GeneratorSpec(model="er", n=9, snapshots=4, p=0.25, seed=seed))
        g = build_layered(net)
        results = {}
        for backend in ("numba", "python"):
            _kernels.set_backend(backend)
            st = flow.evaluate_drivers(g, [0, 3, 7])
            results[backend] = (st.flow, st.cap.tobytes())
        assert results["numba"] == results["python"]


def test_backends_agree_on_betweenness(restore_backend):
    net = er_temporal(GeneratorSpec(model="er", n=8, snapshots=4, p=0.3, seed=31))
    _kernels.set_backend("numba")
    a = edge_betweenness(net)
    _kernels.set_backend("python")
    b = edge_betweenness(net)
    assert a.keys() == b.keys()
    for key in a:
        assert a[key] == pytest.approx(b[key])


def test_unknown_backend_rejected():
    with pytest.raises(ValueError):
        _kernels.set_backend("fortran")


def test_env_flag_selects_python_backend():
    code = "import tempoctrl; print(tempoctrl.active_backend())"
    out = subprocess.run(
        [sys.executable, "-c", code],
        capture_output=True,
        text=True,
        env={"PATH": "/usr/bin:/bin", "TEMPOCTRL_NUMBA": "0"},
    )
    assert out.stdout.strip() == "python"


def test_reachable_mask_matches_python(restore_backend):
    net = er_temporal(GeneratorSpec(model="er", n=7, snapshots=3, p=0.3, seed=77))
    g = build_layered(net)
    st = flow.evaluate_drivers(g, [1, 2])
    masks = {}
    for backend in ("numba", "python"):
        _kernels.set_backend(backend)
        masks[backend] = _kernels.reachable_mask(g.indptr, g.adj_eid, g.eto, st.cap, g.source)
    assert np.array_equal(masks["numba"], masks["python"])
