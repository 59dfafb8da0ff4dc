#!/usr/bin/env python3
#
# nomenkit - SMILES/IUPAC dataset curation and evaluation toolkit
# SPDX-License-Identifier: Apache-2.0
#
"""Regenerates data/atomic_masses.tsv and data/crippen_contributions.tsv.

Requires RDKit. Only needed when the reference toolkit version changes; the
generated files are committed.
"""
import glob
import os
import re
import subprocess
import sys

import rdkit
from rdkit import Chem

ROOT = os.path.abspath(os.path.join(os.path.dirname(__file__), "..", "..", ".."))
DATA = os.path.join(ROOT, "data")


def export_masses():
    pt = Chem.GetPeriodicTable()
    with open(os.path.join(DATA, "atomic_masses.tsv"), "w") as out:
        out.write("# nomenkit atomic mass table v1\n")
        out.write(f"# standard average atomic weights (reference toolkit {rdkit.__version__})\n")
        out.write("# symbol\tatomic_number\tmass\n")
        for z in range(1, 119):
            out.write(f"{pt.GetElementSymbol(z)}\t{z}\t{pt.GetAtomicWeight(z):.6g}\n")


def export_crippen():
    libdir = os.path.join(os.path.dirname(rdkit.__file__), "..", "rdkit.libs")
    libs = glob.glob(os.path.join(libdir, "libRDKitDescriptors-*.so*"))
    if not libs:
        sys.exit("descriptor library not found")
    text = subprocess.run(["strings", "-n", "6", libs[0]], capture_output=True,
                          text=True, check=True).stdout
    rows = [l for l in text.splitlines() if re.match(r"^\w+\t\S+\t", l)]
    with open(os.path.join(DATA, "crippen_contributions.tsv"), "w") as out:
        out.write("# nomenkit Crippen-Wildman atom contribution table v1\n")
        out.write("# Wildman & Crippen atom types as distributed with RDKit (BSD licence)\n")
        out.write("# Rows are tried in order; the first matching pattern types the atom.\n")
        out.write("# type\tsmarts\tlogp\tmr\n")
        for r in rows:
            f = r.split("\t")
            mr = f[3] if len(f) > 3 and f[3] else "0"
            out.write(f"{f[0]}\t{f[1]}\t{f[2]}\t{mr}\n")


if __name__ == "__main__":
    export_masses()
    export_crippen()
