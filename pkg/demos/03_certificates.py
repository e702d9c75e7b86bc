"""
Why the stages are not monomial
===============================

For each stage the pair (u, v) is pushed as far as it goes toward a
monomial form: subtract the only possible multiple of v^p, then look at what
is left.  The certificate names the term that nothing can remove.
"""

from ladderwork import AlphaPolicy, certify_nonmonomial, run_ladder, search_monomial, stage_pair

tr = run_ladder(3, 3, AlphaPolicy("smallest"), 20)

for block in range(1, 5):
    for i in range(3):
        cert = certify_nonmonomial(tr, block, i)
        mono = cert.obstruction_monomial
        print(f"block {block} i={i} [{cert.case}]: a_3={cert.a_p} "
              f"blocking x^{mono[0]}y^{mono[1]} coeff {cert.obstruction_coefficient}")

cert = certify_nonmonomial(tr, 1, 0)
print("\nresidual at block 1, i=0:", cert.residual)
for line in cert.trace:
    print("  ", line)

# brute force agrees: nothing of degree <= 6 rescues stage (1, 0)
u, v = stage_pair(tr.state_before(1), 0, 17)
res = search_monomial(u, v, 6, 17)
print("\nsearch:", res.status, res.candidates, "candidates")
for reason, n in sorted(res.to_json()["failures"].items()):
    print(f"   {n:6d}  {reason}")
