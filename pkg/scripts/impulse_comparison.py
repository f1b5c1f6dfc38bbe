"""Compare SFC, L-AC and N-AC on the 5 N / 50 N / 5 N impact profile.

Reports peak output velocity, recovery time to within 5 % of the 5 N steady
value, and the share of output energy above 1 Hz; writes the traces.

    python scripts/impulse_comparison.py --family fixed
"""

import argparse
import json
import math
import os

from sfclab.config import load_preset
from sfclab.controllers import steady_state_velocity
from sfclab.signals import impact_profile
from sfclab.sim import SimConfig, band_energy, run, settle_time, write_atomic


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--family", choices=("fixed", "mobile"), default="fixed")
    ap.add_argument("--duration", type=float, default=3.0)
    ap.add_argument("--out", default="results/impulse")
    args = ap.parse_args()

    os.makedirs(args.out, exist_ok=True)
    profile = impact_profile()
    rows = {}
    for kind in ("sfc", "lac", "nac"):
        p, dt = load_preset(f"{args.family}_{kind}")
        trace = run(SimConfig(p, profile, dt, args.duration))
        write_atomic(os.path.join(args.out, f"{args.family}_{kind}.csv"), trace.to_csv())
        rows[kind] = {
            "peak_v_output": float(trace.v_output.max()),
            "steady_v_output": steady_state_velocity(p, profile.f_low),
            "recovery_s": settle_time(trace, profile.t_off, steady_state_velocity(p, profile.f_low)),
            "energy_above_1hz": band_energy(trace.v_output, dt, (2 * math.pi, math.pi / dt)),
        }
        r = rows[kind]
        print(
            f"{kind}: peak {r['peak_v_output']:.3f} m/s, recovery {r['recovery_s']:.3f} s,"
            f" >1 Hz energy {r['energy_above_1hz']:.2%}"
        )
    write_atomic(os.path.join(args.out, f"{args.family}_summary.json"), json.dumps(rows, indent=2) + "\n")


if __name__ == "__main__":
    main()
