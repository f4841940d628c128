#!/usr/bin/env python3
"""Builds the hand-specified mini corpus and its golden counts.csv.

The golden file is computed here, independently of the C++ aggregator:
plain dictionaries over NFC-normalized tokens, exact byte matching.
Run from this directory: python3 make_mini_corpus.py
"""
import gzip
import random
import unicodedata

NFC = lambda s: unicodedata.normalize("NFC", s)
NFD = lambda s: unicodedata.normalize("NFD", s)

# lemma, stem, accented stem, archaic forms
LEXICON = [
    ("poder", "pudie", "pudié", []),
    ("ser", "fue", "fué", []),
    ("ver", "vie", "vié", []),
    ("haber", "hubie", "hubié", ["oviese", "oviesse", "hobiese", "oviera", "hobiera"]),
    ("resultar", "resulta", "resultá", []),
    ("ir", "fue", "fué", []),
    ("cantar", "canta", "cantá", []),
    ("deber", "debie", "debié", []),
]
RA = ["ra", "ras", "ramos", "rais", "ran"]
SE = ["se", "ses", "semos", "seis", "sen"]
YEAR_RANGE = (1500, 1800)  # ingest_start_year .. end_year in mini.conf


def forms(stem, acc):
    ra = [(acc if i == 2 else stem) + e for i, e in enumerate(RA)]
    se = [(acc if i == 2 else stem) + e for i, e in enumerate(SE)]
    return ra, se


def main():
    rng = random.Random(20240601)
    lines_a, lines_b = [], []
    for lemma, stem, acc, _ in LEXICON:
        if lemma == "ir":
            continue  # shares every surface form with ser
        ra, se = forms(stem, acc)
        years = list(range(1750, 1801, 2))
        for year in years:
            if lemma == "cantar" and 1775 <= year <= 1779:
                continue  # engineered gap: window 1775-1779 has no tokens
            tok = rng.choice(ra + se)
            rec = f"{tok}\t{year}\t{rng.randint(1, 40)}\t{rng.randint(1, 9)}"
            (lines_a if rng.random() < 0.7 else lines_b).append(rec)
    # Duplicate token-year pairs are summed.
    lines_a.append("pudiera\t1760\t3\t1")
    lines_b.append("pudiera\t1760\t4\t2")
    # NFD spelling must match after normalization; capitalized form must not.
    lines_a.append(NFD("pudiéramos") + "\t1790\t6\t2")
    lines_a.append("Pudiera\t1790\t50\t9")
    # Out-of-range years and unrelated tokens are ignored.
    lines_a.append("viera\t1499\t100\t1")
    lines_a.append("viera\t1801\t100\t1")
    for w in ["casa", "perro", "cantar", "fuere", "pudieron", "vieras_", "cantaría"]:
        lines_b.append(f"{w}\t1770\t{rng.randint(1, 30)}\t1")
    # Archaic spellings of haber: historical and one late straggler.
    lines_a.append("oviesse\t1650\t8\t2")
    lines_a.append("hobiera\t1600\t3\t1")
    lines_b.append("oviese\t1720\t2\t1")
    # Zero-count record still creates a year entry.
    lines_a.append("resultaran\t1751\t0\t0")
    rng.shuffle(lines_a)
    rng.shuffle(lines_b)

    with open("mini/ngrams_a.tsv", "w", encoding="utf-8", newline="\n") as f:
        f.write("\n".join(lines_a) + "\n")
    with open("mini/ngrams_b.tsv.gz", "wb") as raw:
        with gzip.GzipFile(fileobj=raw, mode="wb", mtime=0) as gz:
            gz.write(("\n".join(lines_b) + "\n").encode("utf-8"))

    with open("mini/lexicon.csv", "w", encoding="utf-8", newline="\n") as f:
        f.write("# lemma,stem,stem_accented[,archaic1;archaic2;...]\n")
        for lemma, stem, acc, arch in LEXICON:
            row = [lemma, stem, acc] + ([";".join(arch)] if arch else [])
            f.write(",".join(row) + "\n")

    # Independent aggregation.
    index = {}
    for v, (lemma, stem, acc, arch) in enumerate(LEXICON):
        ra, se = forms(stem, acc)
        for tok in ra:
            index.setdefault(NFC(tok), []).append((v, "ra"))
        for tok in se:
            index.setdefault(NFC(tok), []).append((v, "se"))
        for tok in arch:
            index.setdefault(NFC(tok), []).append((v, "arch"))
    by_year = [dict() for _ in LEXICON]
    for line in lines_a + lines_b:
        tok, year, match, _ = line.split("\t")
        year, match = int(year), int(match)
        if not (YEAR_RANGE[0] <= year <= YEAR_RANGE[1]):
            continue
        for v, kind in index.get(NFC(tok), []):
            if kind == "arch":
                continue
            ra_se = by_year[v].setdefault(year, [0, 0])
            ra_se[0 if kind == "ra" else 1] += match
    with open("mini/golden_counts.csv", "w", encoding="utf-8", newline="\n") as f:
        f.write("lemma,year,n_ra,n_se\n")
        for v, (lemma, *_rest) in enumerate(LEXICON):
            for year in sorted(by_year[v]):
                n_ra, n_se = by_year[v][year]
                f.write(f"{lemma},{year},{n_ra},{n_se}\n")
    print(len(lines_a) + len(lines_b), "n-gram lines")


if __name__ == "__main__":
    main()
