"""Smoke test for the `sdw` extension module."""

import sdw

s3 = sdw.Algebra.builtin("s3")
assert s3.size == 6
assert s3.commutator([[list(range(6))], [list(range(6))]]) == [[0, 3, 4], [1, 2, 5]]
assert s3.malcev_term() is not None
assert sdw.Algebra.builtin("l2").malcev_term() is None

d4 = sdw.Algebra.builtin("d4")
assert d4.supernilpotence_class(2) == 2
assert len(d4.congruences()) == 6

again = sdw.Algebra.from_json(s3.to_json())
assert again.signature() == s3.signature()

z4 = sdw.Algebra.builtin("z4")
c = sdw.Subproduct([z4, z4], generators=[[1, 1], [0, 2]])
assert len(c) == 8 and c.is_subdirect() and c.is_fiber_product()
lifted = c.lift([1], [1], [(0, 2)], "mul(mul(x0, inv(x1)), x2)")
assert sdw.Subproduct([z4, z4], generators=lifted).tuples() == c.tuples()

order = sdw.Subproduct([sdw.Algebra.builtin("l2")] * 2, elements=[[0, 0], [0, 1], [1, 1]])
assert not order.is_fiber_product()

assert sdw.lattice_leq("x", "x \\/ (y /\\ z)")
assert not sdw.lattice_leq("x \\/ (y /\\ z)", "x")
assert sdw.xyz_claims_hold(4)

rho = "xy^2x = xyx; yx^2y = yxy; x^2y^2 = x^2y; y^2x^2 = yx^2; y^2x^2 = y^2x; x^2y^2 = xy^2"
path = sdw.monoid_relate_path(rho, "xy^3x", "xyx")
assert path[0] == "xy^3x" and path[-1] == "xyx"
assert sdw.monoid_relate_path("xy^ix = xyx : i>=1", "x", "y") is None

assert sdw.ideal_member("xy^ix : i>=1", "yxy^3xy")
assert sdw.intersection_agrees(
    "xy^ix : i>=1; x^2y^2; y^2x^2; yxy",
    "yx^iy : i>=1; y^2x^2; x^2y^2; xyx",
    "x^2y^2; y^2x^2; xyx; yxy",
    6,
)

print("smoke test passed")
