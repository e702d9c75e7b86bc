"""
Values along the ladder
=======================

An element is pulled through the block charts until it becomes a unit
times a power of the first coordinate.  The value groups upstairs and
downstairs are then compared level by level.
"""

from ladderwork import AlphaPolicy, gens, run_ladder, value_group_report, value_of

tr = run_ladder(3, 5, AlphaPolicy("smallest"))
x, y = gens(3, 30)

for name, f in [("x", x), ("y", y), ("u", x ** 3 * (1 + y)), ("v", y ** 3 + x),
                ("x+y", x + y), ("x^2 y^2 (2+x+y)", x ** 2 * y ** 2 * (2 + x + y))]:
    print(f"nu({name}) = {value_of(f, tr)}")

rep = value_group_report(tr)
for lv in rep.to_json()["levels"]:
    print(f"level {lv['level']}: x={lv['x']} u={lv['u']} v={lv['v']} "
          f"up={lv['upstairs_generator']} down={lv['downstairs_generator']}")
print("finite-stage e, f:", rep.to_json()["finite_stage"])
print("defect:", rep.metadata["defect"])
