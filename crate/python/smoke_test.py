"""Smoke test for the gradreg Python bindings.

Run after `cargo build -p gradreg-py --release`, or after installing the
extension with maturin:

    python3 python/smoke_test.py
"""

import importlib.machinery
import importlib.util
import os
import pathlib
import sys

ROOT = pathlib.Path(__file__).resolve().parent.parent


def load():
    """The library named by GRADREG_PY_LIB, an installed module, or a cargo build."""
    explicit = os.environ.get("GRADREG_PY_LIB")
    if not explicit:
        try:
            import gradreg_py

            return gradreg_py
        except ImportError:
            pass
    candidates = [pathlib.Path(explicit)] if explicit else [ROOT / "target" / p / "libgradreg_py.so" for p in ("release", "debug")]
    for lib in candidates:
        if lib.exists():
            loader = importlib.machinery.ExtensionFileLoader("gradreg_py", str(lib))
            spec = importlib.util.spec_from_file_location("gradreg_py", lib, loader=loader)
            module = importlib.util.module_from_spec(spec)
            loader.exec_module(module)
            return module
    sys.exit("gradreg_py not found: build it with `cargo build -p gradreg-py --release`")


def main():
    g = load()
    assert "dualnum" in g.catalog_names()

    qplane = g.Algebra.catalog("qplane", top=4)
    assert qplane.hilbert == [1, 2, 3, 4, 5]
    assert qplane.koszul_certificate()
    assert qplane.opposite().hilbert == qplane.hilbert
    assert g.Algebra.catalog("kron2", top=3).endo_twist([0, 0]).hilbert_blocks[1] == [[0, 2], [0, 0]]

    ctx = g.Context("dualnum")
    k = ctx.module("trivial")
    res = ctx.resolve(k)
    assert res.check() == (True, True, True)
    assert res.torreg()[0] == {"kind": "int", "value": 0}
    assert res.pdim()["kind"] == "atLeast"

    ext = ctx.ext_table(k, "regular")
    assert ext["ideg"] == {"kind": "int", "value": 1}
    regs = ctx.regularity(ctx.module("regular"))
    assert regs["regularities"]["exreg"]["value"] == {"kind": "int", "value": -1}, regs
    a = ctx.asreg()
    assert a["left"]["ASreg"]["value"] == {"kind": "int", "value": 1}, a
    assert a["left"]["asreg"]["value"] == {"kind": "int", "value": 0}, a

    poly2 = g.Context("poly2", h=6, n=8)
    m = poly2.module("random:6")
    d = m.degrees()
    assert d["ideg"]["kind"] == "int"
    assert m.shift(2).degrees()["ideg"]["value"] == d["ideg"]["value"] - 2
    tor = poly2.tor_table(m, "trivial")
    assert tor["ideg"] == d["ideg"]

    suite = poly2.verify(seed=42, instances=3, checks=[1, 5, 11])
    assert all(o["verdict"] != "fails" for o in suite["outcomes"])

    eq = g.equalize_parameters([1, 3], [1, 0], [[0, 2], [2, 0]])
    assert eq == {"p": [0, 1], "ell": [2, 2]}, eq
    assert "infeasible" in g.equalize_parameters([1, 3], [0, 1], [[0, 2], [2, 0]])

    try:
        g.Context("nosuch")
    except g.GradregError as e:
        assert "BadInput" in str(e)
    else:
        raise AssertionError("unknown catalog entry accepted")

    print("gradreg_py smoke test passed")


if __name__ == "__main__":
    main()
