"""Step responses of the fixed-manipulator SFC across sample times.

For each sample time the 50 N step is run and labelled converged, marginal,
oscillatory or divergent; the velocity traces are written as one CSV per
sample time so they can be overlaid.

    python scripts/sample_time_study.py --dts 0.002 0.005 0.0067 0.008
"""

import argparse
import json
import os

from sfclab.config import load_preset
from sfclab.errors import DivergenceError
from sfclab.signals import Step
from sfclab.sim import SimConfig, run, write_atomic
from sfclab.stability import classify_sample_time, max_sample_time


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--preset", default="fixed_sfc")
    ap.add_argument("--force", type=float, default=50.0)
    ap.add_argument("--dts", type=float, nargs="+", default=[0.002, 0.005, 0.0067, 0.008, 0.01])
    ap.add_argument("--out", default="results/sample_time")
    args = ap.parse_args()

    p, _ = load_preset(args.preset)
    os.makedirs(args.out, exist_ok=True)
    print(f"sample-time bound at {args.force:g} N: {max_sample_time(p, args.force) * 1e3:.3f} ms")
    summary = []
    for dt in args.dts:
        verdict = classify_sample_time(p, args.force, dt)
        summary.append(verdict)
        print(f"  dt={dt * 1e3:6.2f} ms  ratio={verdict['ratio']:.3f}  {verdict['label']}")
        try:
            trace = run(SimConfig(p, Step(args.force, t_on=0.1), dt, 1.0))
        except DivergenceError:
            continue
        write_atomic(os.path.join(args.out, f"step_dt{dt * 1e3:g}ms.csv"), trace.to_csv())
    write_atomic(os.path.join(args.out, "summary.json"), json.dumps(summary, indent=2) + "\n")


if __name__ == "__main__":
    main()
