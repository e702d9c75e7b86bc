"""
Running the ladder
==================

Each block performs p quadratic transforms upstairs.  The next state is
computed twice, once from closed formulas and once by substituting the chart
and reading the normal form back off, and the two are compared exactly.
"""

from ladderwork import AlphaPolicy, run_ladder

tr = run_ladder(3, 4, AlphaPolicy("smallest"), 12)

print(f"p={tr.p}, initial precision {tr.initial_precision}")
for rec in tr.blocks:
    st = rec.state
    doms = ["-" if not d else str(d.chart) for d in rec.domination]
    print(f"block {rec.index}: alpha={int(rec.alpha)} beta={int(rec.beta)} "
          f"c={int(st.c)} f={int(st.f)} e={int(st.e)} tau={st.tau.y_coeffs()[:7]}")
    print("   steps:", ", ".join(doms))
    print("   precision closed/direct:", rec.precision_out)

# seeded choices are reproducible
a = run_ladder(5, 2, AlphaPolicy("seeded", 7)).alphas
b = run_ladder(5, 2, AlphaPolicy("seeded", 7)).alphas
print("seeded alphas at p=5:", a, a == b)
