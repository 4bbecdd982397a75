"""Smoke test for the moc_lab extension module.

Build and run from the repository root:

    cargo build --release -p moc-lab-py
    cp target/release/libmoc_lab.so python/moc_lab.so
    python3 python/smoke_test.py
"""

import cmath
import os
import sys

sys.path.insert(0, os.path.dirname(os.path.abspath(__file__)))

import moc_lab  # noqa: E402


def close(a, b, tol=1e-12):
    return abs(complex(a) - complex(b)) <= tol * max(1.0, abs(b))


def main():
    x = moc_lab.Matrix([[1j]])
    n = moc_lab.dilate(x, 0)
    assert n.to_list() == [[1j, -1j], [-1j, 1j]], n.to_list()
    assert moc_lab.classify(n)["normality_residual"] <= 1e-12

    a = moc_lab.Matrix.diag([1, 2])
    b = moc_lab.Matrix.diag([3, 4])
    assert close(moc_lab.determinant(a + b), 24)
    points = moc_lab.sigma_points([1, 2], [3, 4])
    assert [p for p, _ in points] == [[0, 1], [1, 0]]
    assert [z for _, z in points] == [24, 25]

    report = moc_lab.verify_moc(a, b)
    assert report["membership"]["verdict"] == "boundary"
    assert report["det_sum"] == [24.0, 0.0]
    assert report["sigma_count"] == 2

    u = moc_lab.haar_unitary(4, seed=1)
    assert moc_lab.classify(u)["unitarity_residual"] <= 1e-12
    assert moc_lab.Matrix.from_json(u.to_json()) == u

    rows = [[complex(i - j, i * j) for j in range(2)] for i in range(2)]
    y = moc_lab.Matrix(rows)
    t1 = moc_lab.verify_theorem1(y, y.adjoint(), s=0.5 - 1j, t=cmath.exp(1j))
    assert t1["holds"], t1["violations"]

    h = moc_lab.Matrix([[2, 1 - 1j], [1 + 1j, -1]])
    spec = moc_lab.eig_hermitian(h)
    assert close(sum(spec), h.trace())
    assert moc_lab.verify_fiedler(h, moc_lab.Matrix.diag([1, -1]), samples=50)["passed"]
    assert moc_lab.verify_drury(h, moc_lab.Matrix.diag([0.5, 3]))["certificate_valid"]

    hull = moc_lab.hull_membership([0, 2, 2j], 0.5 + 0.5j)
    assert hull["verdict"] == "inside"
    lp = moc_lab.membership_lp([[0, 0], [2, 0], [0, 2]], [3, 3])
    assert lp["verdict"] == "outside"

    try:
        moc_lab.verify_theorem1(moc_lab.Matrix.zeros(6), moc_lab.Matrix.zeros(6))
    except moc_lab.MocError as e:
        assert e.args[0] == "capacity", e.args
    else:
        raise AssertionError("expected a capacity error")

    try:
        moc_lab.Matrix([[1, 2], [3]])
    except moc_lab.MocError as e:
        assert e.args[0] == "dimension", e.args
    else:
        raise AssertionError("expected a dimension error")

    print("moc_lab smoke test: ok")


if __name__ == "__main__":
    main()
