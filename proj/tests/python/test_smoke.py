import pytest

import matrixfirst as mf


def test_ref_pivots():
    r = mf.ref([[1, 2], [2, 4]])
    assert r["rank"] == 1
    assert r["free_cols"] == [1]


def test_exact_solve_and_det():
    r = mf.solve([[2, 1], [1, 3]], [3, 5])
    assert r["x"] == ["4/5", "7/5"]
    assert mf.det([[1, 2], [3, 4]]) == "-2"
    assert mf.det([["1/2", 0], [0, 4]]) == "2"


def test_singular_inverse_raises_structured_error():
    with pytest.raises(mf.MatrixFirstError) as info:
        mf.inv([[1, 2], [2, 4]])
    assert "rank 1" in str(info.value)
    assert '"SingularMatrix"' in info.value.args[1]


def test_minpoly_and_eig():
    assert mf.minpoly([[2, 1], [1, 2]])["text"] == "x^2 - 4x + 3"
    e = mf.eig([[2, 1], [1, 2]])
    assert sorted(round(v["re"], 9) for v in e["eigenvalues"]) == [1.0, 3.0]
    assert e["certified"] is True


def test_qr_and_lstsq():
    q = mf.qr([[1, 0], [0, 1], [1, 1]])
    assert len(q["Q"]["data"]) == 3
    x = mf.lstsq([[1, 0], [0, 1], [1, 1]], [1, 1, 0])["x"]
    assert x == pytest.approx([1 / 3, 1 / 3])


def test_demos():
    assert mf.charpoly_cost(5)["terms"] == 120
    with pytest.raises(mf.MatrixFirstError):
        mf.charpoly_cost(9)
    n = 10
    hilbert = [[1.0 / (i + j + 1) for j in range(n)] for i in range(n)]
    assert mf.gs_compare(hilbert)["ratio"] >= 1e6


def test_session_reaches_goal_through_hints():
    s = mf.Session([[0, 1], [1, 0]])
    while s.state()["status"] != "goal_reached":
        s.apply(s.hint()["op"])
    assert s.verify()["ok"] is True
    with pytest.raises(mf.MatrixFirstError):
        s.hint()


def test_compute_ops_listed():
    assert {"ref", "rref", "solve", "inv", "lu", "det", "qr", "lstsq", "eig", "krylov"} <= set(mf.compute_ops())
