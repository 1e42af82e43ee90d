#!/usr/bin/env python3
"""Smoke test for the gandyn_py extension module.

Builds nothing itself: run `cargo build --release -p gandyn-py` first.
The script locates the cdylib, exposes it as an importable module, and
exercises the main types and operations.
"""

import math
import shutil
import sys
import tempfile
from pathlib import Path

ROOT = Path(__file__).resolve().parent.parent


def locate_cdylib() -> Path:
    candidates = [
        ROOT / "target" / "release" / "libgandyn_py.so",
        ROOT / "target" / "debug" / "libgandyn_py.so",
        ROOT / "target" / "release" / "libgandyn_py.dylib",
        ROOT / "target" / "debug" / "libgandyn_py.dylib",
    ]
    for c in candidates:
        if c.exists():
            return c
    sys.exit(
        "gandyn_py cdylib not found; build it first:\n"
        "  cargo build --release -p gandyn-py"
    )


def main() -> None:
    lib = locate_cdylib()
    staging = Path(tempfile.mkdtemp(prefix="gandyn_py_"))
    shutil.copy(lib, staging / "gandyn_py.so")
    sys.path.insert(0, str(staging))
    import gandyn_py as g

    # matrix kernels
    eigs = sorted(g.eig_general([[0.0, -2.0], [2.0, 0.0]]), key=lambda p: p[1])
    assert abs(eigs[0][0]) < 1e-12 and abs(eigs[0][1] + 2.0) < 1e-12, eigs
    assert abs(eigs[1][1] - 2.0) < 1e-12
    print("ok eig_general: rotation spectrum is ±2i")

    m = g.gaussian_fourth_moment_matrix([0.0], [[1.0]])
    assert m == [[3.0, 0.0], [0.0, 1.0]], m
    print("ok gaussian_fourth_moment_matrix: standard normal case")

    t = g.commutation_matrix(2)
    vec_v = [1.0, 3.0, 2.0, 4.0]  # vec([[1,2],[3,4]])
    tv = [sum(t[i][k] * vec_v[k] for k in range(4)) for i in range(4)]
    assert tv == [1.0, 2.0, 3.0, 4.0], tv
    print("ok commutation_matrix: T·vec(V) == vec(Vᵀ)")

    p = g.solve_lyapunov([[-1.0, 0.0], [0.0, -1.0]], [[2.0, 0.0], [0.0, 2.0]])
    assert all(abs(p[i][j] - (1.0 if i == j else 0.0)) < 1e-12 for i in range(2) for j in range(2))
    print("ok solve_lyapunov: J=−I, Q=2I gives P=I")

    val, d1, d2 = g.loss_eval("logistic", 0.0)
    assert abs(val + math.log(2)) < 1e-14 and d1 == 0.5 and d2 == -0.25
    print("ok loss_eval: logistic derivatives at 0")

    # systems and stability
    gan = g.make_uniform_2d("logistic")
    spec, hurwitz, abscissa = gan.stability()
    assert hurwitz and abs(abscissa + 0.05) < 1e-9, (hurwitz, abscissa)
    print("ok uniform_2d logistic: hurwitz with abscissa −0.05")

    wgan = g.make_uniform_2d("wgan")
    _, hurwitz0, abscissa0 = wgan.stability()
    assert not hurwitz0 and abs(abscissa0) < 1e-10
    reg = wgan.regularize(0.5)
    jac = reg.numeric_jacobian()
    assert abs(jac[1][1] + 4.0 / 9.0) < 1e-6, jac
    print("ok wgan uniform_2d: center at η=0, damped generator block at η=0.5")

    # a short orbit of the scalar WGAN returns near its start
    orbit = g.make_scalar_wgan_lq(1.0)
    times, states = orbit.integrate([0.0, 0.0], [0.9, 0.0], 3.2)
    d_min = min(
        math.dist(s, [0.0, 0.0, 0.9, 0.0]) for t, s in zip(times, states) if t > 2.0
    )
    assert d_min < 1e-2, d_min
    print("ok scalar_wgan_lq: orbit loops back near its start")

    # convergence of the regularized system
    times, states = reg.integrate([0.2], [0.8], 80.0)
    final = states[-1]
    assert math.dist(final, [0.0, 1.0]) < 1e-6, final
    print("ok regularized wgan: trajectory converges to (0, 1)")

    assert g.concavity_probe("logistic", [0.0, 0.1], [0.1, 0.7, 0.2], 0) < 0.0
    print("ok concavity_probe: negative for linear discriminator")

    print("smoke test passed")


if __name__ == "__main__":
    main()
