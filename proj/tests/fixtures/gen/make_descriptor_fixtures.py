#!/usr/bin/env python3
#
# nomenkit - SMILES/IUPAC dataset curation and evaluation toolkit
# SPDX-License-Identifier: Apache-2.0
#
"""Builds the frozen descriptor and ring-perception fixtures.

Reference values come from RDKit. Molecules are drawn from the public example
sets bundled with the RDKit distribution (NCI, WEHI, ChEMBL and PubChem
examples) and re-encoded as Kekule SMILES, the form used by PubChem dumps.

Outputs (tests/fixtures/):
  descriptor_oracle.tsv   1,000 whitelisted single-fragment molecules with
                          reference descriptor values, aromatic atom flags
                          and forbidden-pattern hits
  ring_corpus.smi         10,000 parseable molecules of any composition
"""
import csv
import os
import random

import rdkit
from rdkit import Chem, RDLogger
from rdkit.Chem import Crippen, Descriptors
from rdkit.Chem import rdMolDescriptors as rd

RDLogger.DisableLog("rdApp.*")

HERE = os.path.dirname(os.path.abspath(__file__))
ROOT = os.path.abspath(os.path.join(HERE, "..", "..", ".."))
FIXTURES = os.path.join(ROOT, "tests", "fixtures")
RD = os.path.dirname(rdkit.__file__)

WHITELIST = {"H", "C", "N", "O", "S", "F", "Cl", "Br"}


def load_sources():
    smiles = []
    with open(os.path.join(RD, "Data/NCI/first_5K.smi")) as f:
        smiles += [l.split()[0] for l in f if l.strip()]
    with open(os.path.join(RD, "Data/Pains/test_data/wehi_mols.csv")) as f:
        smiles += [row[0] for row in csv.reader(f) if row]
    for rel in ("Contrib/fraggle/data/ChEMBL_11265_actives.smi",
                "Contrib/FreeWilson/data/CHEMBL2321810.smi",
                "Contrib/mmpa/data/sample.smi"):
        with open(os.path.join(RD, rel)) as f:
            smiles += [l.split()[0] for l in f if l.strip()]
    with open(os.path.join(RD, "Contrib/Fastcluster/cdk2.smi")) as f:
        smiles += [l.split()[1] for l in f if len(l.split()) > 1]
    with open(os.path.join(
            RD, "Contrib/NIBRSubstructureFilters/"
                "SubstructureFilter_HitTriaging_wPubChemExamples.csv")) as f:
        for row in csv.DictReader(f):
            for k in ("EX1", "EX2", "EX3", "EX4", "EX5"):
                if row.get(k):
                    smiles.append(row[k])
    return smiles


def kekule(mol):
    m = Chem.Mol(mol)
    Chem.Kekulize(m, clearAromaticFlags=True)
    return Chem.MolToSmiles(m, kekuleSmiles=True)


def load_patterns():
    pats = []
    with open(os.path.join(ROOT, "data", "forbidden_patterns.tsv")) as f:
        for line in f:
            if line.startswith("#") or not line.strip():
                continue
            name, smarts = line.rstrip("\n").split("\t")
            pats.append((name, Chem.MolFromSmarts(smarts)))
    return pats


def phenyl_rings(mol):
    n = 0
    ri = mol.GetRingInfo()
    for atoms, bonds in zip(ri.AtomRings(), ri.BondRings()):
        if (len(atoms) == 6 and all(mol.GetAtomWithIdx(a).GetSymbol() == "C" for a in atoms)
                and all(mol.GetBondWithIdx(b).GetIsAromatic() for b in bonds)):
            n += 1
    return n


def describe(smi, pats):
    m = Chem.MolFromSmiles(smi)
    n_c = sum(1 for a in m.GetAtoms() if a.GetAtomicNum() == 6)
    n_sp3 = sum(1 for a in m.GetAtoms()
                if a.GetAtomicNum() == 6 and a.GetHybridization() == Chem.HybridizationType.SP3)
    assert n_c == 0 or abs(n_sp3 / n_c - rd.CalcFractionCSP3(m)) < 1e-12
    hbd = sum(a.GetTotalNumHs() for a in m.GetAtoms() if a.GetAtomicNum() in (7, 8))
    return {
        "smiles": smi,
        "heavy_atoms": m.GetNumAtoms(),
        "mw": f"{Descriptors.MolWt(m):.4f}",
        "carbons": n_c,
        "sp3_carbons": n_sp3,
        "n_rings": rd.CalcNumRings(m),
        "n_aromatic_rings": rd.CalcNumAromaticRings(m),
        "n_phenyl_rings": phenyl_rings(m),
        "n_rotatable": rd.CalcNumRotatableBonds(m),
        "hbd": hbd,
        "net_charge": Chem.GetFormalCharge(m),
        "tpsa": f"{rd.CalcTPSA(m):.4f}",
        "clogp": f"{Crippen.MolLogP(m):.4f}",
        "aromatic_atoms": "".join("1" if a.GetIsAromatic() else "0" for a in m.GetAtoms()),
        "patterns": "".join("1" if m.HasSubstructMatch(p) else "0" for _, p in pats),
    }


def main():
    pats = load_patterns()
    seen = set()
    clean, ring_pool = [], []
    for raw in load_sources():
        mol = Chem.MolFromSmiles(raw)
        if mol is None:
            continue
        if any(a.GetNumRadicalElectrons() for a in mol.GetAtoms()):
            continue
        try:
            smi = kekule(mol)
        except Exception:
            continue
        if smi in seen or Chem.MolFromSmiles(smi) is None:
            continue
        seen.add(smi)
        ring_pool.append(smi)
        if "." in smi:
            continue
        if any(a.GetSymbol() not in WHITELIST or a.GetIsotope() for a in mol.GetAtoms()):
            continue
        if mol.GetNumAtoms() > 70:
            continue
        clean.append(smi)

    rng = random.Random(20231108)
    rng.shuffle(ring_pool)
    with open(os.path.join(FIXTURES, "ring_corpus.smi"), "w") as f:
        for smi in sorted(ring_pool[:10000]):
            f.write(smi + "\n")

    rows = [describe(s, pats) for s in clean]
    rng.shuffle(rows)
    chosen, used = [], set()

    def take(row):
        if row["smiles"] not in used:
            used.add(row["smiles"])
            chosen.append(row)

    for k in range(len(pats)):
        hits = [r for r in rows if r["patterns"][k] == "1"]
        hits.sort(key=lambda r: r["heavy_atoms"])
        for r in hits[:4] + hits[-2:]:
            take(r)
    for r in [r for r in rows if r["heavy_atoms"] <= 12][:200]:
        take(r)
    for r in rows:
        if len(chosen) >= 1000:
            break
        take(r)
    chosen.sort(key=lambda r: r["smiles"])

    cols = list(chosen[0].keys())
    with open(os.path.join(FIXTURES, "descriptor_oracle.tsv"), "w") as f:
        f.write(f"# reference: RDKit {rdkit.__version__}; patterns column follows "
                "data/forbidden_patterns.tsv order\n")
        f.write("\t".join(cols) + "\n")
        for r in chosen:
            f.write("\t".join(str(r[c]) for c in cols) + "\n")
    print(len(ring_pool), len(clean), len(chosen),
          sum(1 for r in chosen if r["heavy_atoms"] <= 12))


if __name__ == "__main__":
    main()
