#!/usr/bin/env python3
"""Regenerate the synthetic susceptibility stand-ins in this directory.

The published study reports fitted couplings for a hydroxo-bridged Cu(II)
dimer (J/k_B = -32 K at ambient pressure, -42 K at 0.84 GPa) but no chi(T)
tables. These files are Bleaney-Bowers curves at those couplings with g = 2.1
and 1% multiplicative Gaussian noise, measured on the same 20-350 K range.
They are stand-ins for digitised data, not measurements.
"""

import math
from pathlib import Path

import numpy as np

# CODATA 2018, cgs
N_A = 6.02214076e23
MU_B = 9.2740100783e-21
K_B = 1.380649e-16
C = N_A * MU_B**2 / K_B

G = 2.1
NOISE = 0.01
TEMPERATURES = np.arange(20.0, 351.0, 10.0)

DATASETS = [
    ("cu_dimer_ambient.csv", -32.0, 0.0, "Cu(II) dimer, ambient pressure (synthetic)", 1001),
    ("cu_dimer_0p84GPa.csv", -42.0, 0.84, "Cu(II) dimer, 0.84 GPa (synthetic)", 1002),
]


def chi(j, t):
    return 2.0 * C * G * G / t / (3.0 + math.exp(j / t))


def main():
    here = Path(__file__).resolve().parent
    for name, j, pressure, label, seed in DATASETS:
        rng = np.random.default_rng(seed)
        lines = [
            f"# label: {label}",
            f"# pressure_GPa: {pressure}",
            "# source: synthetic Bleaney-Bowers curve, not measured data",
            f"# generator: data/generate_synthetic.py (seed {seed})",
            f"# true_J_over_kB_K: {j}",
            f"# true_g: {G}",
            f"# noise: {NOISE} relative gaussian",
            "T_K,chi_emu_mol",
        ]
        for t in TEMPERATURES:
            value = chi(j, t) * (1.0 + NOISE * rng.standard_normal())
            lines.append(f"{t:.1f},{value:.8e}")
        (here / name).write_text("\n".join(lines) + "\n")


if __name__ == "__main__":
    main()
