"""Smoke test for the monostruct extension module.

Build and run from the workspace root:

    cargo build -p monostruct-python
    cp target/debug/libmonostruct.so python/monostruct.so
    python3 python/smoke_test.py
"""

import itertools
import math
import os
import sys

sys.path.insert(0, os.path.dirname(os.path.abspath(__file__)))

import monostruct as ms


def check(cond, what):
    if not cond:
        raise AssertionError(what)
    print("ok", what)


tri = ms.generate("triangle", 3)
check(tri.size == 3 and tri.signature == [("R", 2)], "triangle generator")
check(ms.is_monomorphic(tri), "triangle is monomorphic")
check(ms.find_chains(tri) == [], "triangle has no chaining order")
report = ms.check_monomorphy(tri)
check([lvl["monomorphic"] for lvl in report["levels"]] == [True, True, True], "per-level verdicts")

cyc = ms.generate("cyclic", 5)
orders = ms.find_chains(cyc)
check(len(orders) == 10, "cyclic order on 5 has 10 chaining orders")
check(all(o.reverse() in orders for o in orders), "chain set closed under reversal")
check(ms.classify(cyc)["case"] == "CutReversal", "cyclic classifies as cut-reversal")

betw = ms.generate("betweenness", 5)
x = ms.LinearOrder.natural(5)
defs = ms.synthesize_def(betw, x)
check(defs["relations"][0]["patterns"] == [[0, 1, 2], [2, 1, 0]], "betweenness patterns")
check(ms.derive(x, defs["text"]) == betw, "derive reproduces the structure")
check(ms.classify(betw)["case"] == "Kernel", "betweenness classifies as kernel")

const = ms.generate("constant", 4)
check(len(ms.find_chains(const)) == math.factorial(4), "constant structure admits every order")

y = ms.Structure("R/2", 3, {"R": [(0, 1), (1, 2)]})
check(ms.Structure.parse(y.to_text()) == y, "text round trip")
check(ms.model_check(y, "E v0 E v1 R(v0,v1)"), "model check of a sentence")
check(not ms.model_check(y, "R(v0,v1)", [1, 0]), "model check under an assignment")

k = ms.Structure("R/2", 2)
psi = ms.build_psi(k)
check(psi.is_sentence, "psi is a sentence")
check(ms.model_check(ms.generate("random", 4, density=0.0), psi), "empty relation satisfies psi of the empty pair")
check(not ms.model_check(y, psi), "path fails psi of the empty pair")

psi2 = ms.build_psi_n("R/2", 2)
for s in ms.corpus():
    if s.signature == [("R", 2)] and s.size >= 2:
        mono2 = ms.check_monomorphy(s, 2)["monomorphic"]
        assert ms.model_check(s, psi2) == mono2
check(True, "psi_2 agrees with 2-monomorphy on the corpus")

f = ms.Formula.parse("A v1 (R(v0,v1) | v0 = v1)", "R/2")
check(f.free_vars() == [0], "free variables")
defs_text = "signature R/2\nR := v0 < v1\n"
star = ms.star_translate(f, defs_text)
order = ms.LinearOrder([2, 0, 3, 1])
lin = ms.generate("linear", 4).relabel([2, 0, 3, 1])
derived = ms.derive(order, defs_text)
for a in range(4):
    assert ms.model_check(lin, star, [a]) == ms.model_check(derived, f, [a])
check(True, "star translation")

dup = ms.Structure("A/2 B/2", 3, {"A": [(0, 1)], "B": [(0, 1)]})
reduced, groups = ms.reduce_signature(dup)
check(groups == [["A", "B"]] and reduced.signature == [("A", 2)], "duplicate relations merged")

perm = [2, 0, 1]
z = cyc.relabel(perm + [3, 4])
iso = ms.find_isomorphism(z, cyc)
check(iso is not None, "relabeled copy is isomorphic")
moved = sorted((ms.transport(iso, o) for o in orders), key=lambda o: o.ascending)
check(moved == ms.find_chains(z), "transport maps chain sets")

sweep = ms.frasnay_sweep(2, 4)
check(sweep["up_to_m"]["m"] == 3, "threshold sweep at size 4")

code, out, _ = ms.run_cli(["--json", "gen", "linear", "--size", "3"])
check(code == 0 and '"command": "gen"' in out, "cli in-process")

try:
    ms.synthesize_def(tri, ms.LinearOrder([0, 1, 2]))
except ms.MonostructError as e:
    check("mixed pattern" in str(e), "mixed pattern raises")
else:
    raise AssertionError("expected an error")

check(len(list(itertools.islice(ms.corpus(), 60))) >= 50, "corpus size")
print("all smoke checks passed")
