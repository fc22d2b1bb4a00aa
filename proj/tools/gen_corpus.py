#!/usr/bin/env python3
"""Writes the trav/sum grid into corpus/grid with .expected sidecars."""
import argparse
import itertools
from pathlib import Path


def offset(z):
    return f"i + {z}" if z >= 0 else f"i - {-z}"


def trav(L, R, Z):
    return f"requires array(a, s);\nfor i in [{L} : s - {R}] do !a[{offset(Z)}]\n"


def summ(L, R, Z):
    return f"requires array(a, s) * n |-> _;\nfor i in [{L} : s - {R}] do !n := !n + !a[{offset(Z)}]\n"


def tag(z):
    return str(z) if z >= 0 else f"m{-z}"


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--out", default=str(Path(__file__).resolve().parent.parent / "corpus" / "grid"))
    args = ap.parse_args()
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    for name, build in (("trav", trav), ("sum", summ)):
        for L, R, Z in itertools.product(range(4), range(4), range(-3, 4)):
            stem = f"{name}_{L}_{R}_{tag(Z)}"
            (out / f"{stem}.wl").write_text(build(L, R, Z))
            safe = L + Z >= 0 and Z < R
            (out / f"{stem}.expected").write_text("Safe\n" if safe else "Unsafe\n")


if __name__ == "__main__":
    main()
