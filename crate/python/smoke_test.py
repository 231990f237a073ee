#!/usr/bin/env python3
"""Smoke test for the omit_py extension module.

Builds nothing itself: run `cargo build -p omit-py` (or --release) first,
then `python3 python/smoke_test.py`. The script locates the compiled
cdylib, stages it under the importable name omit_py.so, and checks a
handful of closed-form facts about the transparency window.
"""

import math
import pathlib
import shutil
import sys
import tempfile


def stage_module() -> pathlib.Path:
    root = pathlib.Path(__file__).resolve().parent.parent
    candidates = [
        root / "target" / profile / name
        for profile in ("release", "debug")
        for name in ("libomit_py.so", "libomit_py.dylib", "omit_py.dll")
    ]
    built = next((p for p in candidates if p.exists()), None)
    if built is None:
        sys.exit("omit_py cdylib not found; run `cargo build -p omit-py` first")
    stage = pathlib.Path(tempfile.mkdtemp(prefix="omit_py_"))
    shutil.copy2(built, stage / "omit_py.so")
    sys.path.insert(0, str(stage))
    return built


def approx(a, b, rel=1e-9, abs_tol=0.0):
    assert abs(a - b) <= max(rel * max(abs(a), abs(b)), abs_tol), f"{a} !~ {b}"


def main():
    built = stage_module()
    import omit_py

    kappa_hz = 15e6
    omega_m_hz = 51.8e6
    gamma_m_hz = 41e3

    # critically coupled reference-scale toroid, no splitting
    device = omit_py.Device(
        kappa0_hz=kappa_hz / 2,
        kappa_ex_hz=kappa_hz / 2,
        wavelength_m=775e-9,
        m_eff_kg=2e-11,
        omega_m_hz=omega_m_hz,
        gamma_m_hz=gamma_m_hz,
        g0_hz_per_m=-1.2e19,
    )
    approx(device.x_zpf_m, 9.0e-17, rel=1e-3)
    approx(device.eta_c, 0.5, rel=1e-12)

    # calibrate power to cooperativity (C is linear in power), then pin C = 9
    probe = omit_py.Drive(power_w=1e-3, detuning_hz=-omega_m_hz)
    c_per_watt = omit_py.operating_point(device, probe).cooperativity / 1e-3
    drive9 = omit_py.Drive(power_w=9.0 / c_per_watt, detuning_hz=-omega_m_hz)
    op9 = omit_py.operating_point(device, drive9)
    approx(op9.cooperativity, 9.0, rel=1e-9)

    # the 81% contrast point and the homodyne dip relation
    t_norm = omit_py.transmission_normalized(device, drive9, omega_m_hz, model="weak")
    approx(abs(t_norm) ** 2, 0.81, rel=1e-9)
    approx((1.0 - abs(t_norm)) ** 2, 0.01, rel=1e-6)
    approx(op9.transparency_peak, 0.81, rel=1e-9)

    # window width law via a sweep + Lorentzian fit
    gamma_omit_hz = op9.gamma_omit_hz
    approx(gamma_omit_hz, gamma_m_hz * 10.0, rel=1e-9)
    span = 5.0 * gamma_omit_hz
    data = omit_py.sweep_probe(
        device,
        drive9,
        omega_m_hz - span,
        omega_m_hz + span,
        1001,
        observables=["t_p_norm_sq"],
        model="weak",
    )
    fit = omit_py.fit_lorentzian(data["omega_hz"], data["t_p_norm_sq"])
    assert fit["converged"]
    approx(fit["fwhm"], gamma_omit_hz, rel=1e-3)
    approx(fit["center"], omega_m_hz, rel=1e-6)

    # group delay: delay-bandwidth product of 2
    tau = omit_py.group_delay(device, drive9, 0.0, model="weak")
    approx(tau * (2 * math.pi * gamma_omit_hz), 2.0, rel=1e-3)
    approx(op9.group_delay_s * (2 * math.pi * gamma_omit_hz), 2.0, rel=1e-12)

    # undriven steady state sits at the origin
    roots = omit_py.steady_state_roots(device, -omega_m_hz, 0.0)
    assert len(roots) == 1 and roots[0]["stable"]
    assert roots[0]["x_bar_m"] == 0.0 and roots[0]["a_bar"] == 0.0

    # full model at the window center approaches the weak-coupling value
    t_full = omit_py.transmission_normalized(device, drive9, omega_m_hz, model="full")
    approx(abs(t_full) ** 2, 0.81, rel=2e-2)

    # the mapped atomic system reproduces the optomechanical response
    assert omit_py.eit_max_deviation(device, drive9) <= 1e-12

    # power series is monotone and self-consistent
    rows = omit_py.power_series(device, probe, [1e-4, 5e-4, 2e-3])
    peaks = [r["fitted_peak"] for r in rows]
    assert peaks == sorted(peaks)
    for r in rows:
        assert r["fit_converged"]
        approx(r["fitted_gamma_omit_hz"], r["theory_gamma_omit_hz"], rel=1e-2)

    print(f"omit_py smoke test passed ({built})")


if __name__ == "__main__":
    main()
