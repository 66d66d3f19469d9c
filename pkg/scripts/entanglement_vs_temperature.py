#!/usr/bin/env python3
"""Steady-state atom-mirror log negativity versus bath occupation.

Scans n_th for a constant-amplitude drive at a fixed effective detuning
and prints one CSV row per point (also written to a file with --out).
"""

import argparse
from dataclasses import replace

import numpy as np

from optomech.errors import NotStable
from optomech.fluctuations import (build_diffusion, build_drift,
                                   steady_state_lyapunov)
from optomech.measures import log_negativity, reduce_atom_mirror
from optomech.model import SystemParams
from optomech.moments import steady_state_constant


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--amplitude", type=float, default=1.2e5,
                    help="constant drive amplitude E")
    ap.add_argument("--g0", type=float, default=1.0,
                    help="collective atom-field coupling")
    ap.add_argument("--nth-max", type=float, default=80.0)
    ap.add_argument("--points", type=int, default=33)
    ap.add_argument("--out", help="optional CSV path")
    args = ap.parse_args()

    base = SystemParams(delta_a=1.0, kappa=0.2, gamma_m=1e-3, g=1e-5,
                        delta_c=-1.0, gamma_a=0.1,
                        g0_collective=args.g0)
    lines = ["n_th,status,EN"]
    for n_th in np.linspace(0.0, args.nth_max, args.points):
        params = replace(base, n_th=float(n_th))
        try:
            fm, eff = steady_state_constant(params, args.amplitude,
                                            delta_a_eff=1.0)
            v = steady_state_lyapunov(build_drift(eff, fm.q, fm.a),
                                      build_diffusion(eff))
            en = log_negativity(reduce_atom_mirror(v))
            lines.append(f"{n_th},stable,{en}")
        except NotStable:
            lines.append(f"{n_th},unstable,nan")
    text = "\n".join(lines)
    print(text)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text + "\n")


if __name__ == "__main__":
    main()
