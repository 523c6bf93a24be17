"""Smoke test for the `jcas` Python extension.

Builds the extension with cargo, drops it next to this script as an
importable module, and exercises the main entry points.

    python3 python/smoke_test.py
"""

import math
import os
import shutil
import subprocess
import sys
import sysconfig
import tempfile

ROOT = os.path.dirname(os.path.dirname(os.path.abspath(__file__)))


def build_module(dest_dir):
    subprocess.run(
        ["cargo", "build", "-p", "jcas-py", "--release", "--features", "extension-module"],
        cwd=ROOT,
        check=True,
    )
    target = os.environ.get("CARGO_TARGET_DIR", os.path.join(ROOT, "target"))
    lib = {"darwin": "libjcas.dylib", "win32": "jcas.dll"}.get(sys.platform, "libjcas.so")
    suffix = sysconfig.get_config_var("EXT_SUFFIX") or ".so"
    shutil.copy(os.path.join(target, "release", lib), os.path.join(dest_dir, "jcas" + suffix))


def main():
    with tempfile.TemporaryDirectory() as tmp:
        build_module(tmp)
        sys.path.insert(0, tmp)
        import jcas

        assert abs(jcas.fspl_db(4.2e9, 500e3) - 158.89) < 0.01
        assert abs(jcas.noise_power_dbw(300, 100e6) + 123.83) < 0.01
        assert jcas.symbols_in(0.3, 100e6, 1024, 72) == 27372
        num = jcas.numerology(100e6, 1024, 72)
        assert num["subcarrier_spacing_hz"] == 97656.25

        s = jcas.Scenario(tx_power_dbw=9, doppler_precompensated=True)
        assert s.get("tx_power_dbw") == "9"
        point = jcas.run_point(s)
        assert abs(point["comm_snr_db"] - 29.60) < 0.05
        assert abs(point["shannon_rate_bps"] / 7.18e8 - 1) < 0.01
        assert point["monostatic"]["detection_feasible"] is False

        rows = jcas.run_sweep(jcas.Scenario())
        assert len(rows) == 45
        assert rows == jcas.run_sweep(jcas.Scenario(), parallel=False)
        ratio = rows[0]["bistatic"]["range_mse_m2"] / rows[8]["bistatic"]["range_mse_m2"]
        assert abs(ratio - 10 ** 0.8) < 1e-6

        csv_path = os.path.join(tmp, "sweep.csv")
        summary = jcas.write_sweep_csv(csv_path, mode="all")
        assert summary["rows"] == 90
        back = jcas.read_sweep_csv(csv_path)
        assert len(back) == 90 and back[0]["mode"] == "radar_bistatic"
        assert list(back[0].keys()) == jcas.CSV_COLUMNS

        band = jcas.lookup_comm_band(4.2)
        assert band["label"] == "C-Band 3.4–7.025 GHz"
        pairing = jcas.check_jcas_pairing(4.2, 100)
        assert pairing["verdict"] == "comm_only"
        assert len(jcas.lookup_radar_allocations(5.0, 6.0)) == 1

        a = jcas.delay_crlb(0.0, 28.87e6)
        assert math.isclose(a / jcas.delay_crlb(10.0, 28.87e6), 10.0, rel_tol=1e-9)

        for bad in (lambda: jcas.fspl_db(-1, 1), lambda: jcas.Scenario(bogus_key=1)):
            try:
                bad()
            except jcas.JcasError as e:
                assert isinstance(e, ValueError)
            else:
                raise AssertionError("expected JcasError")

    print("python smoke test: ok")


if __name__ == "__main__":
    main()
