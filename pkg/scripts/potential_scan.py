"""V(r)/D for H2 and I2 at several c_h per regime, as CSV on stdout.

V/D depends only on b_h, r_e and c_h, so no well depth is needed.
"""
import argparse
import csv
import sys

import numpy as np

from tietz_spectra.model import PotentialParams, classify_regime, potential_eval
from tietz_spectra.moldb import find_molecule

C_VALUES = (-0.5, -0.2, 0.0, 0.1, 0.5, 0.8)


def scan(name: str, c_values=C_VALUES, samples: int = 200):
    rec = find_molecule(name)
    for c in c_values:
        p = PotentialParams.natural(D=1.0, r_e=rec.r_e, b_h=rec.b_h, c_h=c)
        reg = classify_regime(p)
        start = max(reg.domain_start, 0.0) + 0.02 * rec.r_e
        r = np.linspace(start, rec.r_e + 6.0 / rec.b_h, samples)
        for ri, v in zip(r, potential_eval(p, r)):
            yield rec.short_name, c, reg.kind.value, ri, v


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--molecules", nargs="+", default=["H2", "I2"])
    ap.add_argument("--samples", type=int, default=200)
    args = ap.parse_args()
    out = csv.writer(sys.stdout, lineterminator="\n")
    out.writerow(["molecule", "c_h", "regime", "r_angstrom", "V_over_D"])
    for name in args.molecules:
        for mol, c, kind, r, v in scan(name, samples=args.samples):
            out.writerow([mol, c, kind, f"{r:.6f}", f"{v:.10g}"])


if __name__ == "__main__":
    main()
