"""
Truncated series over F_p
=========================

Series live in k[[x, y]] truncated below a total degree N.  In
characteristic p the p-th power is additive, which is what makes the
relation below vanish identically.
"""

from ladderwork import gens, ord_and_leading_form, series_invert_unit, weierstrass_prepare

p = 3
x, y = gens(p, p * p + 2)

u = x ** p * (1 + y)
v = y ** p + x
print("u =", u)
print("v =", v)

# (y^p + x)^p collapses to y^(p^2) + x^p
print("v^p =", v ** p)

rel = y ** (p * p + 1) + y ** (p * p) - y * v ** p + (u - v ** p)
print("relation residual:", rel, "| zero:", rel.is_zero())

# the first thing that goes wrong for monomial forms: u - v^p
r = u - v ** p
lf = ord_and_leading_form(r)
print("u - v^3 =", r, "  order", lf.order)

# 2 + y is a unit; its inverse has constant coefficients
print("1/(2+y) =", series_invert_unit(2 + y))

# preparation of u - v^3 in y: the distinguished polynomial is y^9 - x^3 y
x, y = gens(p, 20)
unit, poly = weierstrass_prepare(x ** 3 * y - y ** 9, "y")
print("distinguished polynomial:", poly)
print("unit constant term:", unit.constant_term)
