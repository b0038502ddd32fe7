#!/usr/bin/env python3
"""Regenerate crates/core/data/molar_masses.txt from standard atomic weights.

Atomic weights are the IUPAC abridged standard values (2021). Usage:

    python3 scripts/molar_masses.py > crates/core/data/molar_masses.txt
"""
import os
import re
import sys

ATOMIC_WEIGHTS = {
    "H": 1.008, "Li": 6.94, "Be": 9.0122, "B": 10.81, "C": 12.011,
    "N": 14.007, "O": 15.999, "F": 18.998, "Na": 22.990, "Mg": 24.305,
    "Al": 26.982, "Si": 28.085, "P": 30.974, "S": 32.06, "Cl": 35.45,
    "K": 39.098, "Ca": 40.078, "Sc": 44.956, "Ti": 47.867, "V": 50.942,
    "Cr": 51.996, "Mn": 54.938, "Fe": 55.845, "Co": 58.933, "Ni": 58.693,
    "Cu": 63.546, "Zn": 65.38, "Ga": 69.723, "Ge": 72.630, "As": 74.922,
    "Se": 78.971, "Rb": 85.468, "Sr": 87.62, "Y": 88.906, "Zr": 91.224,
    "Nb": 92.906, "Mo": 95.95, "Ag": 107.87, "Cd": 112.41, "In": 114.82,
    "Sn": 118.71, "Sb": 121.76, "Te": 127.60, "Cs": 132.91, "Ba": 137.33,
    "La": 138.91, "Ce": 140.12, "Pr": 140.91, "Nd": 144.24, "Sm": 150.36,
    "Eu": 151.96, "Gd": 157.25, "Tb": 158.93, "Dy": 162.50, "Ho": 164.93,
    "Er": 167.26, "Tm": 168.93, "Yb": 173.05, "Lu": 174.97, "Hf": 178.49,
    "Ta": 180.95, "W": 183.84, "Tl": 204.38, "Pb": 207.2, "Bi": 208.98,
    "Th": 232.04, "U": 238.03,
}

TOKEN = re.compile(r"([A-Z][a-z]?)(\d*)")


def molar_mass(formula):
    pos = 0
    total = 0.0
    for m in TOKEN.finditer(formula):
        if m.start() != pos:
            raise ValueError(f"cannot parse {formula!r}")
        total += ATOMIC_WEIGHTS[m.group(1)] * int(m.group(2) or 1)
        pos = m.end()
    if pos != len(formula):
        raise ValueError(f"cannot parse {formula!r}")
    return total


def main():
    here = os.path.dirname(os.path.abspath(__file__))
    lexicon = os.path.join(here, "..", "crates", "core", "data", "oxides.txt")
    out = sys.stdout
    out.write("# formula\tmolar mass (g/mol), generated by scripts/molar_masses.py\n")
    with open(lexicon, encoding="utf-8") as fh:
        for line in fh:
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            formula = line.split("\t")[0]
            out.write(f"{formula}\t{molar_mass(formula):.4f}\n")


if __name__ == "__main__":
    main()
