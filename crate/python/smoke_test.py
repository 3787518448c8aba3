#!/usr/bin/env python3
"""Smoke test for the sonc_py extension module.

Build the extension first:

    cargo build -p sonc-py            # or --release

The script copies the produced cdylib into a temporary directory under the
importable name ``sonc_py`` and exercises every exposed entry point.
"""

import math
import shutil
import sys
import tempfile
from pathlib import Path

ROOT = Path(__file__).resolve().parent.parent


def find_cdylib() -> Path:
    candidates = [
        ROOT / "target" / profile / name
        for profile in ("release", "debug")
        for name in ("libsonc_py.so", "libsonc_py.dylib", "sonc_py.dll")
    ]
    for path in candidates:
        if path.exists():
            return path
    sys.exit("extension not found; run `cargo build -p sonc-py` first")


def main() -> None:
    cdylib = find_cdylib()
    with tempfile.TemporaryDirectory() as tmp:
        suffix = ".pyd" if cdylib.suffix == ".dll" else ".so"
        shutil.copy2(cdylib, Path(tmp) / f"sonc_py{suffix}")
        sys.path.insert(0, tmp)
        import sonc_py

        # --- instance model ------------------------------------------------
        motzkin = sonc_py.Instance.from_json(
            (ROOT / "instances" / "motzkin.json").read_text()
        )
        assert motzkin.n == 2
        assert motzkin.kind == "polynomial"
        assert len(motzkin.terms()) == 4
        # The polynomial vanishes at y = (1, 1), i.e. x = (0, 0).
        assert motzkin.evaluate([0.0, 0.0]) == 0.0
        assert "Instance(n=2" in repr(motzkin)

        # --- certified bound -------------------------------------------------
        report = sonc_py.bound(motzkin)
        assert report["status"] == "bounded", report
        assert abs(report["opt"] - 26.0) < 1e-9, report
        assert abs(report["lower_bound"] + 26.0) < 1e-9, report
        assert report["branch"] == "zero_in_a_plus"
        ((beta, tau),) = report["certificate"].items()
        assert beta == (2.0, 2.0)
        assert all(abs(t - math.log(3.0) / 2.0) < 1e-9 for t in tau)

        # --- dual membership and the circuit certificate ---------------------
        # (1, -2, 1) on {0, 1, 2}: a perfect square, so nonnegative with the
        # circuit inequality tight, yet outside the dual cone.
        square = sonc_py.Instance(
            1, "exponential", [([0.0], 1.0), ([1.0], -2.0), ([2.0], 1.0)]
        )
        dual = sonc_py.check_dual(square)
        assert dual["member"] is False
        assert dual["tau_form"] == dual["lambda_form"] == "not_member"
        circuit = sonc_py.check_circuit(square)
        assert circuit["certified"] is True
        assert abs(circuit["theta"] - 2.0) < 1e-12
        assert abs(circuit["lambda"][(0.0,)] - 0.5) < 1e-12
        assert abs(circuit["lambda"][(2.0,)] - 0.5) < 1e-12

        # A perturbed Motzkin coefficient breaks the certificate.
        perturbed = sonc_py.Instance(
            2,
            "polynomial",
            [
                ([2.0, 4.0], 1.0),
                ([4.0, 2.0], 1.0),
                ([2.0, 2.0], -3.01),
                ([0.0, 0.0], 1.0),
            ],
        )
        assert sonc_py.check_circuit(perturbed)["certified"] is False

        # --- second branch and the sampling oracle ---------------------------
        cosh = sonc_py.Instance(
            1, "exponential", [([0.0], -5.0), ([1.0], 1.0), ([-1.0], 1.0)]
        )
        b = sonc_py.bound(cosh)
        assert b["branch"] == "zero_in_a_minus"
        assert abs(b["opt"] - 4.0) < 1e-9, b
        est = sonc_py.oracle_min(cosh, grid=101, radius=4.0)
        assert abs(est["value"] + 3.0) < 1e-6, est
        assert est["value"] >= b["lower_bound"], (est, b)
        assert est["evaluations"] >= 101

        # --- relaxation -------------------------------------------------------
        relaxed = sonc_py.relaxed(motzkin, 1.0)
        assert relaxed["status"] == "bounded"
        assert relaxed["tol"] == 0.0
        assert abs(relaxed["opt"] - 26.0) < 1e-9

        dwarfed = sonc_py.Instance.from_json(
            (ROOT / "instances" / "dwarfed2d_c3.json").read_text()
        )
        assert sonc_py.bound(dwarfed)["status"] == "infeasible"
        loose = sonc_py.relaxed(dwarfed, 1.0)
        assert loose["status"] == "uncertified"
        assert loose["tol"] > 1e-6

        # --- error mapping ----------------------------------------------------
        try:
            sonc_py.Instance(1, "polynomial", [([0.5], 1.0)])
        except ValueError:
            pass
        else:
            raise AssertionError("fractional polynomial exponent must be rejected")

    print("smoke test passed: bound, check_dual, check_circuit, relaxed, oracle_min")


if __name__ == "__main__":
    main()
