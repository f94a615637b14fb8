"""Print the headline results for the bundled example sets.

    python3 scripts/reproduce_examples.py [--sweep N]

``--sweep N`` additionally checks the closure property on N random
complete bases and reports counterexamples and wall time.
"""

import argparse
import random
import sys
import time
from pathlib import Path

from opbkit import corpus
from opbkit.activation import is_activable, is_strongly_local
from opbkit.constraints import derive_constraint_space, is_locally_irreducible
from opbkit.core import classify_completeness, has_local_redundancy
from opbkit.discrimination import is_upb, search_protocol
from opbkit.measurement import Closure, apply_projector, enumerate_op_pvms
from opbkit.tiling import render_tiling


def summarize(name):
    s = corpus.load(name)
    c = classify_completeness(s)
    print(f"== {name}: dims={s.dims} states={len(s)} {c.tag.value} spans={c.local_span_dims}")
    for p in range(len(s.dims)):
        space, _ = derive_constraint_space(s, p)
        print(f"   party {p + 1}: constraint space dim {space.dim_space}")
    v = search_protocol(s)
    print(f"   protocol: {v.verdict.value} (height {v.depth_used})")
    print(f"   upb: {is_upb(s).unextendible}   locally irreducible: {is_locally_irreducible(s).irreducible}")
    r = is_activable(s)
    print(f"   activation: {r.status.value} {r.reason or ''}")
    print(render_tiling(s))


def sweep(n, seed=1):
    sys.path.insert(0, str(Path(__file__).resolve().parents[1] / "tests"))
    from bases import guillotine_basis, random_tiling_basis

    rng = random.Random(seed)
    t0 = time.perf_counter()
    bad = 0
    for i in range(n):
        da, db = rng.randint(2, 4), rng.randint(2, 4)
        s = random_tiling_basis(da, db, rng) if i % 2 else guillotine_basis((da, db), rng)
        for p in range(2):
            for m in enumerate_op_pvms(s, p):
                for k, el in enumerate(m.elements):
                    out = apply_projector(s, el, k)
                    bad += out.closure is not Closure.SUBSET or len(out.survivors) >= len(s)
    print(f"sweep: {n} bases, {bad} counterexamples, {time.perf_counter() - t0:.1f}s")


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--sweep", type=int, default=0)
    args = ap.parse_args()
    for name in ("s1", "s2", "tiles"):
        summarize(name)
    s2 = corpus.load("s2")
    print(f"S2 local redundancy on Bob (2x3): {has_local_redundancy(s2, 1, (2, 3))}")
    print(f"S1 strongly local: {is_strongly_local(corpus.load('s1')).overall}")
    if args.sweep:
        sweep(args.sweep)


if __name__ == "__main__":
    main()
