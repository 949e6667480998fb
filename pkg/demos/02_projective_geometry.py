"""Subspace enumeration and the poset layers around a base vertex.

Subspaces of F_q^N are represented by their reduced-echelon row basis,
so each subspace has exactly one representation and equality is literal.
The base vertex x splits the poset into layers P_{i,j} by the meet
dimension i = dim(u meet x) and the complement count j = dim u - i.
"""

from qgrass.qarith import q_binomial
from qgrass.subspaces import GeometryContext, enumerate_subspaces

q, n, d = 2, 4, 2

print(f"subspaces of F_{q}^{n} by dimension:")
for l in range(n + 1):
    table = enumerate_subspaces(q, n, l)
    assert len(table) == q_binomial(n, l, q)
    print(f"  dim {l}: {len(table)} subspaces")

lines = enumerate_subspaces(q, n, 1)
print()
print("every 1-dimensional subspace, by its echelon basis row:")
for s in lines:
    print(f"  {''.join(str(v) for v in s.rows[0])}")

geometry = GeometryContext(q, n, d)
print()
print(f"base vertex x = row space of the first {d} unit vectors")
census = geometry.census()
census.require()
print(f"  census: {len(census.checks)} structural checks pass")

print()
print("layers P_(i,j) with their sizes (rows i = meet with x):")
sizes = {}
for u in (s for l in range(n + 1) for s in geometry.table(l)):
    sizes[geometry.pij(u)] = sizes.get(geometry.pij(u), 0) + 1
for i in range(d + 1):
    row = [sizes.get((i, j), 0) for j in range(n - d + 1)]
    print(f"  i={i}: {row}")
total = sum(sizes.values())
print(f"  total {total} subspaces")

print()
line = next(u for u in geometry.table(1) if geometry.pij(u) == (1, 0))
print(f"covers of the line {line.rows[0]} inside x, classified by")
print("whether the meet with x grows (slash) or not (backslash):")
kinds = {"slash": 0, "backslash": 0}
for v in geometry.covers_of(line):
    kinds[geometry.cover_type(line, v).value] += 1
print(f"  {kinds}")
assert kinds["slash"] == 1  # only v = x extends the meet past the line

print()
print("done: geometry layer structure verified")
