"""Smoke test for the eislab_py extension module.

Run after `cargo build -p eislab-py` (or a maturin install):

    python3 python/smoke_test.py
"""

import importlib.machinery
import importlib.util
import pathlib
import sys
from fractions import Fraction

ROOT = pathlib.Path(__file__).resolve().parent.parent


def load():
    try:
        import eislab_py

        return eislab_py
    except ImportError:
        pass
    for profile in ("release", "debug"):
        lib = ROOT / "target" / profile / "libeislab_py.so"
        if lib.exists():
            loader = importlib.machinery.ExtensionFileLoader("eislab_py", str(lib))
            spec = importlib.util.spec_from_file_location("eislab_py", lib, loader=loader)
            module = importlib.util.module_from_spec(spec)
            loader.exec_module(module)
            return module
    sys.exit("eislab_py not found; build it with `cargo build -p eislab-py`")


def main():
    eis = load()

    level = eis.Level(30)
    assert level.primes == [2, 3, 5]
    assert level.divisors() == [1, 2, 3, 5, 6, 10, 15, 30]
    assert level.phi_psi() == (8, 72)

    order = eis.cusp_order(17, 17, oracle=True)
    assert order["closed_form_order"] == 4 and order["h"] == 2 and order["agreed"]
    assert eis.order_lattice_oracle(11, 11) == 5
    assert eis.cuspidal_group_structure(11) == [5]

    lam, a = eis.lambda_matrices(10)
    prod = [[sum(lam[i][k] * a[k][j] for k in range(4)) for j in range(4)] for i in range(4)]
    assert prod == [[72 if i == j else 0 for j in range(4)] for i in range(4)]

    assert eis.eisenstein_series(11, 11, 4) == [-10, -24, -72, -96]
    res = {cusp: value for cusp, _, value in eis.residues(15, 3)}
    assert res[3] == Fraction(-48, 5)
    assert eis.level_lowering_identity(15, 3)["holds"]

    ring = eis.HeckeRing(11)
    assert (ring.genus, ring.rank) == (1, 1)
    assert ring.hecke_matrix(2) == [[-2, 0], [0, -2]]
    assert ring.eisenstein_index(11) == 5
    assert eis.HeckeRing(33).compare_index_order(3)["index"] == 10
    ideals = ring.maximal_ideals()
    assert [(r["ell"], r["m"]) for r in ideals["records"]] == [(5, 11)]

    report = eis.run_suite("lattice-oracle", 60)
    assert report["passed"]

    try:
        eis.Level(12)
    except ValueError:
        pass
    else:
        raise AssertionError("12 is not square-free")

    print("eislab_py smoke test passed")


if __name__ == "__main__":
    main()
