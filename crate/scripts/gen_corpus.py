#!/usr/bin/env python3
"""Generate the newform test corpus under crates/core/data/newforms/.

Requires cypari2 (PARI/GP). Each selected newform is written in the
ingestion schema ({label, level, weight, sign, an}). Forms with a
non-rational coefficient field are written through their first real
embedding. A sidecar `<label>.ref.json` stores L(f,1..k-1) as computed by
PARI's lfun, for use as an independent reference in tests.
"""
import json
import math
import os
import sys

import cypari2

pari = cypari2.Pari()
pari.allocatemem(4 * 10**9)
pari.set_real_precision(40)
# Method calls on the Pari instance run at the library default precision;
# closures evaluated by GP pick up realprecision.
gp_embed = pari("(f, c) -> mfembed(f, c)")
gp_lfun = pari("(lf, s) -> lfun(lf, s)")
gp_rootres = pari("(lf) -> lfunrootres(lf)")
gp_lfunmf = pari("(mf, f) -> lfunmf(mf, f)")

OUT = os.path.join(os.path.dirname(__file__), "..", "crates", "core", "data", "newforms")

# (weight, level, wanted sign)
SELECTION = [
    (4, 5, 1),
    (4, 11, 1),
    (4, 13, -1),
    (4, 23, 1),
    (4, 53, -1),
    (4, 67, 1),
    (4, 151, 1),
    (4, 311, 1),
    (4, 503, 1),
    (6, 3, 1),
    (6, 44, -1),
    (6, 65, -1),
    (8, 2, 1),
    (8, 26, -1),
    (10, 6, 1),
]


def num(x):
    x = pari(x)
    if pari.type(x) == "t_INT":
        return int(x)
    return float(pari.real(x))


def pick(k, n, sign):
    mf = pari.mfinit([n, k], 0)
    basis = pari.mfeigenbasis(mf)
    for idx, f in enumerate(basis):
        lf = gp_lfunmf(mf, f)
        if pari.poldegree(pari.mffields(mf)[idx]) > 1:
            lf = lf[0]
        eps = int(pari.round(pari.real(gp_rootres(lf)[2])))
        if eps == sign:
            return mf, f, idx, eps
    raise SystemExit(f"no newform of weight {k}, level {n}, sign {sign}")


def main():
    os.makedirs(OUT, exist_ok=True)
    for k, n, sign in SELECTION:
        mf, f, idx, eps = pick(k, n, sign)
        count = int(math.ceil(10 * math.sqrt(n))) + 60
        coefs = pari.mfcoefs(f, count)
        field_deg = int(pari.poldegree(pari.mffields(mf)[idx]))
        if field_deg == 1:
            an = [num(c) for c in coefs[1:]]
        else:
            emb = gp_embed(f, coefs)
            an = [num(c) for c in emb[0][1:]]
        # ensure integers are stored exactly
        an = [int(round(a)) if field_deg == 1 else a for a in an]
        label = f"{n}.{k}.a.{chr(ord('a') + idx)}"
        if field_deg > 1:
            label += ".e1"
        doc = {"label": label, "level": n, "weight": k, "sign": eps, "an": an}
        with open(os.path.join(OUT, f"{label}.json"), "w") as fh:
            json.dump(doc, fh)
            fh.write("\n")

        # lfunmf on an embedded form returns one L-function per embedding
        lf = gp_lfunmf(mf, f)
        if field_deg > 1:
            lf = lf[0]
        lvals = [float(pari.real(gp_lfun(lf, j))) for j in range(1, k)]
        ref = {"label": label, "lvalues": lvals, "source": "PARI/GP lfun"}
        with open(os.path.join(OUT, f"{label}.ref.json"), "w") as fh:
            json.dump(ref, fh, indent=1)
            fh.write("\n")
        print(label, "eps", eps, "terms", count, "field degree", field_deg, file=sys.stderr)


if __name__ == "__main__":
    main()
