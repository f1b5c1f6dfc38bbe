"""How the two normalisations of the damper coefficient shift the predictions.

The Gamma-ratio form (psi(1) = pi) and the first-Fourier-coefficient form
(psi(1) = 1) differ by a factor pi. This prints, for the unit cubic
controller, the analytic bandwidth and time constant under each form next to
the simulated values, which shows which one the simulation tracks.

    python scripts/psi_convention_study.py
"""

import argparse

from sfclab.controllers import SfcParams
from sfclab.describing import bandwidth_analytic, psi, time_constant_analytic
from sfclab.signals import Step
from sfclab.sim import SimConfig, numeric_bandwidth, numeric_bode, numeric_time_constant, run


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--amplitudes", type=float, nargs="+", default=[1.0, 10.0, 100.0])
    args = ap.parse_args()

    print(f"{'n':>5} {'gamma_ratio':>12} {'fourier':>10}")
    for n in (1, 2, 3, 5, 10, 30, 100):
        print(f"{n:5d} {psi(n):12.6f} {psi(n, 'fourier'):10.6f}")

    p = SfcParams(m=1.0, mu=1.0, n=3.0)
    print("\nbandwidth [rad/s]")
    for curve in numeric_bode(p, args.amplitudes):
        A = curve.amplitude_A
        print(
            f"  A={A:6g}: gamma_ratio {bandwidth_analytic(p, A):8.3f}  fourier "
            f"{bandwidth_analytic(p, A, 'fourier'):8.3f}  simulated {numeric_bandwidth(curve):8.3f}"
        )
    print("\ntime constant [s]")
    for A in args.amplitudes:
        trace = run(SimConfig(p, Step(A), 1e-4, 40.0 * time_constant_analytic(p, A, "fourier")))
        print(
            f"  A={A:6g}: gamma_ratio {time_constant_analytic(p, A):8.4f}  fourier "
            f"{time_constant_analytic(p, A, 'fourier'):8.4f}  simulated {numeric_time_constant(trace):8.4f}"
        )


if __name__ == "__main__":
    main()
