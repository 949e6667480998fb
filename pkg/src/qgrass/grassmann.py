"""The Grassmann graph J_q(N, D) and its adjacency algebra, exactly.

Vertices are the D-dimensional subspaces of F_q^N, adjacent when they
meet in dimension D - 1, so graph distance is D - dim(y meet z).  The
module builds distance matrices, extracts the multiplication table of
the distance algebra from verified integer products, constructs the
primitive idempotents from the closed-form eigenvalues, and derives the
dual system at the base vertex.  Every claimed identity is checked in
exact arithmetic, with the minimal polynomial product as the primary
guard that the closed-form eigenvalues belong to the built graph.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .errors import EigenvalueCollision, InvalidParameters, InvalidQuadruple
from .linalg import (
    ExactMatrix,
    ExactVector,
    invert_fraction_matrix,
    rank_exact,
    rank_mod_prime,
)
from .qarith import q_binomial, q_int
from .report import CheckSet
from .subspaces import DEFAULT_POSET_CAP, DEFAULT_TABLE_CAP, GeometryContext, dim_of_mask

RANK_VERIFY_LIMIT = 60
BFS_FULL_LIMIT = 1000
BFS_SAMPLE_SOURCES = 50
BFS_SAMPLE_TARGETS = 200
_BFS_SEED = 20240


class GraphContext:
    """A built Grassmann graph: vertex table, exact distance matrix, and
    cached distance-class matrices."""

    def __init__(self, geometry: GeometryContext, dist: np.ndarray, checks: CheckSet):
        self.geometry = geometry
        self.q = geometry.q
        self.n = geometry.ambient
        self.d = geometry.d
        self.vertices = geometry.table(geometry.d)
        self.n_vertices = len(self.vertices)
        self.dist = dist
        self.x_index = geometry.index_of(geometry.x)
        self.boundary = geometry.ambient == 2 * geometry.d
        self.build_checks = checks
        self._a64: dict[int, np.ndarray] = {}
        self._adjacency: list[list[int]] | None = None
        self._p = None
        self._p_checks = None

    def a64(self, i: int) -> np.ndarray:
        """Distance-i indicator matrix as int64 (entries 0/1)."""
        if i not in self._a64:
            self._a64[i] = (self.dist == i).astype(np.int64)
        return self._a64[i]

    def distance_matrix(self, i: int) -> ExactMatrix:
        return ExactMatrix.from_class_values(
            self.dist, {h: (1 if h == i else 0) for h in range(self.d + 1)}
        )

    def adjacency_lists(self) -> list[list[int]]:
        if self._adjacency is None:
            self._adjacency = [
                np.flatnonzero(self.dist[v] == 1).tolist()
                for v in range(self.n_vertices)
            ]
        return self._adjacency


def _bfs_full_check(gc: GraphContext, cs: CheckSet) -> None:
    """All-pairs breadth-first distances by repeated boolean expansion,
    compared with the meet-dimension distances."""
    n = gc.n_vertices
    adj64 = gc.a64(1)
    cur = np.eye(n, dtype=bool)
    bfs = np.full((n, n), -1, dtype=np.int16)
    np.fill_diagonal(bfs, 0)
    for t in range(1, gc.d + 1):
        nxt = (cur.astype(np.int64) @ adj64) > 0
        nxt |= cur
        newly = nxt & ~cur
        if not newly.any():
            break
        bfs[newly] = t
        cur = nxt
    cs.check_true("bfs_reaches_every_pair", bool(cur.all()))
    cs.check_true("bfs_distances_match_meet_formula", bool((bfs == gc.dist).all()))


def _bfs_sampled_check(gc: GraphContext, cs: CheckSet) -> None:
    rng = random.Random(_BFS_SEED)
    n = gc.n_vertices
    adj = gc.adjacency_lists()
    sources = rng.sample(range(n), min(n, BFS_SAMPLE_SOURCES))
    ok = True
    witness = None
    pairs = 0
    for s in sources:
        level = {s: 0}
        frontier = [s]
        t = 0
        while frontier:
            t += 1
            nxt = []
            for v in frontier:
                for w in adj[v]:
                    if w not in level:
                        level[w] = t
                        nxt.append(w)
            frontier = nxt
        targets = rng.sample(range(n), min(n, BFS_SAMPLE_TARGETS))
        for y in targets:
            pairs += 1
            if level.get(y, -1) != int(gc.dist[s, y]):
                ok = False
                witness = f"pair ({s},{y}): bfs {level.get(y)} vs {int(gc.dist[s, y])}"
    cs.check_true("bfs_sampled_distances_match", ok, witness)
    cs.record("bfs_sampled_pairs", pairs)


def build_graph(
    q: int,
    n: int,
    d: int,
    x_rows=None,
    table_cap: int = DEFAULT_TABLE_CAP,
    poset_cap: int = DEFAULT_POSET_CAP,
    cache_dir: str | None = None,
) -> GraphContext:
    """Build J_q(N, D) with its exact distance matrix.

    Requires N > D >= 1 and N >= 2D; N = 2D is allowed and flagged as
    the boundary regime.  For N < 2D the dimension-complement
    isomorphism makes (N, N - D) the normalized parameters, so such
    input is rejected rather than silently rewritten.
    """
    if not (n > d >= 1):
        raise InvalidParameters(f"need N > D >= 1, got N={n} D={d}")
    if n < 2 * d:
        raise InvalidParameters(
            f"N={n} < 2D={2 * d}; use the complement parameters (N, N-D)=({n},{n - d})"
        )
    geometry = GeometryContext(
        q, n, d, x_rows=x_rows, table_cap=table_cap, poset_cap=poset_cap, cache_dir=cache_dir
    )
    vertices = geometry.table(d)
    nv = len(vertices)
    masks = [v.mask for v in vertices]
    dist = np.zeros((nv, nv), dtype=np.int16)
    for a in range(nv):
        ma = masks[a]
        row = dist[a]
        for b in range(a + 1, nv):
            ddd = d - dim_of_mask(ma & masks[b], q)
            row[b] = ddd
            dist[b, a] = ddd
    cs = CheckSet(f"graph build q={q} N={n} D={d}")
    cs.check("vertex_count", q_binomial(n, d, q), nv)
    cs.check_true("distance_range", bool(((dist >= 0) & (dist <= d)).all()))
    cs.check_true("distance_symmetric", bool((dist == dist.T).all()))
    gc = GraphContext(geometry, dist, cs)
    if nv <= BFS_FULL_LIMIT:
        _bfs_full_check(gc, cs)
    else:
        _bfs_sampled_check(gc, cs)
    # the distance-i sphere around x is exactly the layer P_{D-i, i}
    layer_ok = True
    witness = None
    for y_idx, y in enumerate(vertices):
        i = int(dist[gc.x_index, y_idx])
        if geometry.pij(y) != (d - i, i):
            layer_ok = False
            witness = f"vertex {y.rows}"
            break
    cs.check_true("sphere_equals_layer", layer_ok, witness)
    return gc


def structure_constants(gc: GraphContext):
    """Multiplication table of the distance algebra: integers p[h][i][j]
    with A_i A_j = sum_h p[h][i][j] A_h, extracted from exact products
    and verified class by class.

    Cached on the graph context after the first call.
    """
    if gc._p is not None:
        return gc._p, gc._p_checks
    d = gc.d
    cs = CheckSet("distance algebra structure constants")
    eye = np.eye(gc.n_vertices, dtype=np.int64)
    cs.check_true("a0_is_identity", bool((gc.a64(0) == eye).all()))
    total = sum(gc.a64(i) for i in range(d + 1))
    cs.check_true("classes_partition_pairs", bool((total == 1).all()))
    p = [[[0] * (d + 1) for _ in range(d + 1)] for _ in range(d + 1)]
    ok = True
    witness = None
    for i in range(d + 1):
        for j in range(i, d + 1):
            prod = exact_int_product(gc.a64(i), gc.a64(j), gc.n_vertices)
            for h in range(d + 1):
                vals = prod[gc.dist == h]
                v0 = int(vals[0])
                if vals.size and not (vals == v0).all():
                    ok = False
                    witness = f"A_{i}A_{j} not constant on class {h}"
                p[h][i][j] = v0
                p[h][j][i] = v0
    cs.check_true("products_constant_on_classes", ok, witness)
    gc._p = p
    gc._p_checks = cs
    return p, cs


def exact_int_product(a64: np.ndarray, b64: np.ndarray, inner: int) -> np.ndarray:
    """int64 product guarded against overflow; falls back to
    arbitrary-precision objects when the bound does not certify."""
    am = int(np.abs(a64).max()) if a64.size else 0
    bm = int(np.abs(b64).max()) if b64.size else 0
    if inner * max(am, 1) * max(bm, 1) < 2**62:
        return a64 @ b64
    return np.dot(a64.astype(object), b64.astype(object))


@dataclass
class IntersectionNumbers:
    k: int
    a: list[int]
    b: list[int]
    c: list[int]


def intersection_number_formulas(q: int, n: int, d: int) -> IntersectionNumbers:
    """Closed forms: b_i = q^(2i+1) [D-i][N-D-i], c_i = [i]^2, and
    a_i = k - b_i - c_i with k = q [D][N-D]."""
    k = q * q_int(d, q) * q_int(n - d, q)
    b = [q ** (2 * i + 1) * q_int(d - i, q) * q_int(n - d - i, q) for i in range(d + 1)]
    c = [q_int(i, q) ** 2 for i in range(d + 1)]
    a = [k - b[i] - c[i] for i in range(d + 1)]
    return IntersectionNumbers(k=k, a=a, b=b, c=c)


def intersection_numbers(gc: GraphContext):
    """Count a_i, b_i, c_i from the verified multiplication table and
    compare them with the closed forms, exactly."""
    q, n, d = gc.q, gc.n, gc.d
    p, pcs = structure_constants(gc)
    cs = CheckSet(f"intersection numbers q={q} N={n} D={d}")
    cs.extend(pcs)
    counted_b = [p[i][i + 1][1] if i < d else 0 for i in range(d + 1)]
    counted_c = [p[i][i - 1][1] if i > 0 else 0 for i in range(d + 1)]
    counted_a = [p[i][i][1] for i in range(d + 1)]
    k_counted = p[0][1][1]
    rows = gc.a64(1).sum(axis=1)
    cs.check_true("valency_constant_rows", bool((rows == k_counted).all()))
    forms = intersection_number_formulas(q, n, d)
    cs.check("valency", forms.k, k_counted)
    for i in range(d + 1):
        cs.check(f"b_{i}", forms.b[i], counted_b[i])
        cs.check(f"c_{i}", forms.c[i], counted_c[i])
        cs.check(f"a_{i}", forms.a[i], counted_a[i])
        cs.check(f"abc_sum_{i}", forms.k, counted_a[i] + counted_b[i] + counted_c[i])
    counted = IntersectionNumbers(k=k_counted, a=counted_a, b=counted_b, c=counted_c)
    cs.record("k", forms.k)
    cs.record("a", forms.a)
    cs.record("b", forms.b)
    cs.record("c", forms.c)
    return counted, cs


def eigenvalue_formulas(q: int, n: int, d: int) -> list[int]:
    """theta_i = q [D][N-D] - [i][N-i+1], decreasing in i."""
    return [
        q * q_int(d, q) * q_int(n - d, q) - q_int(i, q) * q_int(n - i + 1, q)
        for i in range(d + 1)
    ]


def dual_eigenvalue_formulas(q: int, n: int, d: int) -> list[Fraction]:
    """theta*_i as explicit rationals, from the affine function of
    q^(-i) defined by the base constants."""
    dd = q_int(d, q)
    nd = q_int(n - d, q)
    base = Fraction(-q * q_int(n - 1, q) * (dd + nd), (q - 1) * dd * nd)
    slope = Fraction(q * q_int(n, q) * q_int(n - 1, q), (q - 1) * dd * nd)
    return [base + slope * Fraction(1, q**i) for i in range(d + 1)]


@dataclass
class SpectralSystem:
    gc: GraphContext
    theta: list[int]
    theta_star: list[Fraction]
    m: list[int]
    e_coeffs: list[list[Fraction]] = field(repr=False)
    checks: CheckSet = field(repr=False)
    _e_cache: dict = field(default_factory=dict, repr=False)
    _e_num_cache: dict = field(default_factory=dict, repr=False)

    def idempotent(self, i: int) -> ExactMatrix:
        if i not in self._e_cache:
            values = {h: self.e_coeffs[i][h] for h in range(self.gc.d + 1)}
            self._e_cache[i] = ExactMatrix.from_class_values(self.gc.dist, values)
        return self._e_cache[i]

    def idempotent_numerator(self, i: int):
        """(M, den) with E_i = M / den and M integral."""
        if i not in self._e_num_cache:
            den = 1
            for c in self.e_coeffs[i]:
                den = den * c.denominator // math.gcd(den, c.denominator)
            values = {h: int(self.e_coeffs[i][h] * den) for h in range(self.gc.d + 1)}
            m = ExactMatrix.from_class_values(self.gc.dist, values)
            self._e_num_cache[i] = (m, den)
        return self._e_num_cache[i]

    def estar_indicator(self, i: int) -> np.ndarray:
        return self.gc.dist[self.gc.x_index] == i

    def estar_diag(self, i: int) -> ExactVector:
        return ExactVector(
            np.where(self.estar_indicator(i), 1, 0).astype(object)
        )

    def astar_diag(self) -> list[Fraction]:
        xrow = self.gc.dist[self.gc.x_index]
        return [self.theta_star[int(xrow[y])] for y in range(self.gc.n_vertices)]

    def astar_apply(self, v: ExactVector) -> ExactVector:
        diag = self.astar_diag()
        return ExactVector(np.array([dv * vv for dv, vv in zip(diag, v.a)], dtype=object))


def spectral_system(gc: GraphContext) -> SpectralSystem:
    """Exact eigenstructure of the adjacency matrix.

    Eigenvalues come from the closed form only, never from numerics.
    The minimal polynomial product over the built adjacency matrix must
    vanish exactly; the idempotents are evaluated in the verified
    distance algebra and checked for idempotency, orthogonality, unit
    sum, and rank equal to trace.
    """
    q, n, d = gc.q, gc.n, gc.d
    nv = gc.n_vertices
    theta = eigenvalue_formulas(q, n, d)
    if len(set(theta)) != d + 1:
        raise EigenvalueCollision(f"eigenvalues collide: {theta}")
    cs = CheckSet(f"spectral system q={q} N={n} D={d}")
    p, pcs = structure_constants(gc)
    cs.extend(pcs)

    # minimal polynomial: the product of (A - theta_i I) must vanish
    adj = gc.distance_matrix(1)
    prod = adj - theta[0] * ExactMatrix.identity(nv)
    for i in range(1, d + 1):
        prod = prod @ (adj - theta[i] * ExactMatrix.identity(nv))
    cs.check_true("minimal_polynomial_vanishes", prod.is_zero())

    # idempotents in the distance algebra: coefficient vectors over A_h
    def apply_adjacency(coef):
        return [
            sum(coef[g] * p[h][1][g] for g in range(d + 1)) for h in range(d + 1)
        ]

    e_coeffs: list[list[Fraction]] = []
    for i in range(d + 1):
        c = [Fraction(1 if h == 0 else 0) for h in range(d + 1)]
        for j in range(d + 1):
            if j == i:
                continue
            ac = apply_adjacency(c)
            scale = Fraction(1, theta[i] - theta[j])
            c = [(a - theta[j] * b) * scale for a, b in zip(ac, c)]
        e_coeffs.append(c)

    ident = [Fraction(1 if h == 0 else 0) for h in range(d + 1)]
    total = [sum(e_coeffs[i][h] for i in range(d + 1)) for h in range(d + 1)]
    cs.check("idempotents_sum_to_identity", ident, total)
    cs.check(
        "e0_is_all_ones_over_size",
        [Fraction(1, nv)] * (d + 1),
        e_coeffs[0],
    )
    adj_coeffs = [Fraction(1 if h == 1 else 0) for h in range(d + 1)]
    recon = [
        sum(theta[i] * e_coeffs[i][h] for i in range(d + 1)) for h in range(d + 1)
    ]
    cs.check("adjacency_reconstruction", adj_coeffs, recon)

    ss = SpectralSystem(gc=gc, theta=theta, theta_star=[], m=[], e_coeffs=e_coeffs, checks=cs)

    # idempotency and orthogonality on the materialized matrices
    ok = True
    witness = None
    for i in range(d + 1):
        mi, di = ss.idempotent_numerator(i)
        sq = mi @ mi
        if not sq.equals(di * mi):
            ok = False
            witness = f"E_{i}^2 != E_{i}"
    cs.check_true("idempotency", ok, witness)
    ok = True
    witness = None
    for i in range(d + 1):
        mi, _ = ss.idempotent_numerator(i)
        for j in range(i + 1, d + 1):
            mj, _ = ss.idempotent_numerator(j)
            if not (mi @ mj).is_zero():
                ok = False
                witness = f"E_{i}E_{j} != 0"
    cs.check_true("orthogonality", ok, witness)

    # multiplicities: trace of a verified idempotent equals its rank
    mults = []
    for i in range(d + 1):
        tr = nv * e_coeffs[i][0]
        cs.check_true(f"multiplicity_{i}_integral", tr.denominator == 1 and tr > 0)
        mults.append(int(tr))
    cs.check("multiplicities_sum", nv, sum(mults))
    cs.check("m_0", 1, mults[0])
    # rank certificate: orthogonality plus unit sum make the images span
    # V directly, so the rational ranks sum to |X|; each modular rank is
    # a lower bound, so modular ranks that already sum to |X| are exact
    mod_ranks = []
    for i in range(d + 1):
        mi, _ = ss.idempotent_numerator(i)
        mod_ranks.append(rank_mod_prime(mi))
    cs.check("rank_certificate_total", nv, sum(mod_ranks))
    cs.check("rank_certificate", mults, mod_ranks)
    if nv <= RANK_VERIFY_LIMIT:
        for i in range(d + 1):
            mi, _ = ss.idempotent_numerator(i)
            cs.check(f"rank_E_{i}", mults[i], rank_exact(mi))
    ss.m = mults

    # dual eigenvalues at the base vertex
    theta_star = dual_eigenvalue_formulas(q, n, d)
    observed_star = [nv * e_coeffs[1][h] for h in range(d + 1)]
    cs.check("dual_eigenvalue_closed_form", theta_star, observed_star)
    cs.check_true("dual_eigenvalues_distinct", len(set(theta_star)) == d + 1)
    ss.theta_star = theta_star
    counts = np.bincount(gc.dist[gc.x_index], minlength=d + 1)
    cs.check_true("dual_idempotents_partition", int(counts.sum()) == nv)
    cs.check(
        "sphere_sizes",
        [q_binomial(d, i, q) * q ** (i * i) * q_binomial(n - d, i, q) for i in range(d + 1)],
        [int(v) for v in counts],
    )

    cs.record("theta", theta)
    cs.record("theta_star", theta_star)
    cs.record("multiplicities", mults)
    return ss


def krein_parameters(ss: SpectralSystem):
    """Krein parameters from E_i (hadamard) E_j = (1/|X|) sum_h q^h_{ij} E_h,
    solved exactly in the class-coefficient algebra, plus the polynomial
    ordering conditions: q^h_{ij} vanishes when one of the three indices
    exceeds the sum of the other two and is nonzero at equality."""
    gc = ss.gc
    d = gc.d
    nv = gc.n_vertices
    cs = CheckSet("krein parameters")
    e_mat = [[ss.e_coeffs[t][h] for h in range(d + 1)] for t in range(d + 1)]
    inv = invert_fraction_matrix(e_mat)  # inv[g][t]: A_g = sum_t inv[g][t] E_t
    kp = [[[Fraction(0)] * (d + 1) for _ in range(d + 1)] for _ in range(d + 1)]
    recon_ok = True
    recon_witness = None
    for i in range(d + 1):
        for j in range(i, d + 1):
            s = [ss.e_coeffs[i][g] * ss.e_coeffs[j][g] for g in range(d + 1)]
            for h in range(d + 1):
                val = nv * sum(s[g] * inv[g][h] for g in range(d + 1))
                kp[h][i][j] = val
                kp[h][j][i] = val
            # the solved parameters must reproduce the hadamard product
            recon = [
                Fraction(1, nv) * sum(kp[h][i][j] * ss.e_coeffs[h][g] for h in range(d + 1))
                for g in range(d + 1)
            ]
            if recon != s:
                recon_ok = False
                recon_witness = f"pair ({i},{j})"
    cs.check_true("krein_reconstruction", recon_ok, recon_witness)

    ok_zero = True
    ok_nonzero = True
    witness_zero = witness_nonzero = None
    for h in range(d + 1):
        for i in range(d + 1):
            for j in range(d + 1):
                hi = max(h, i, j)
                rest = h + i + j - hi
                if hi > rest and kp[h][i][j] != 0:
                    ok_zero = False
                    witness_zero = f"q^{h}_{{{i},{j}}} = {kp[h][i][j]}"
                if hi == rest and kp[h][i][j] == 0:
                    ok_nonzero = False
                    witness_nonzero = f"q^{h}_{{{i},{j}}} = 0"
    cs.check_true("krein_vanishing_above_sum", ok_zero, witness_zero)
    cs.check_true("krein_nonzero_at_sum", ok_nonzero, witness_nonzero)
    cs.record(
        "krein",
        {f"{h},{i},{j}": kp[h][i][j] for h in range(d + 1) for i in range(d + 1) for j in range(d + 1)},
    )
    return kp, cs


def tmodule_condition_violations(n: int, d: int, r: int, t: int, dw: int, e: int):
    """Which of the four admissibility conditions the quadruple
    (r, t, dw, e) violates; empty list means admissible."""
    bad = []
    half = Fraction(d - dw, 2)
    if not (0 <= half <= r <= t <= d - dw <= d):
        bad.append("chain_inequalities")
    if (e + dw + d) % 2 != 0:
        bad.append("parity")
    if abs(e) > 2 * r - d + dw:
        bad.append("endpoint_bound")
    allowed = {e + d - 2 * r, min(d - t, e + d - 2 * r + 2 * (n - 2 * d))}
    if dw not in allowed:
        bad.append("diameter_selection")
    return bad


def _qpow(q: int, e: int):
    if e >= 0:
        return q**e
    return Fraction(1, q**-e)


def tmodule_intersection_numbers(q: int, n: int, d: int, r: int, t: int, dw: int, e: int):
    """Intersection numbers of the irreducible module with parameters
    (r, t, dw, e): lists a, b, c of length dw + 1.

    Raises InvalidQuadruple unless the four admissibility conditions
    hold.  b_dw and c_0 vanish through the [0] factor in the closed
    forms; that is asserted, not patched.
    """
    bad = tmodule_condition_violations(n, d, r, t, dw, e)
    if bad:
        raise InvalidQuadruple(f"(r,t,d,e)=({r},{t},{dw},{e}) violates {bad}")
    half_minus = (d - dw - e) // 2  # integral by the parity condition
    half_plus = (e - d - dw) // 2
    base = q * q_int(d, q) * q_int(n - d, q) - q_int(t, q) * q_int(n + 1 - t, q)
    b = []
    c = []
    for i in range(dw + 1):
        bi = (
            _qpow(q, 2 * i + 1 + r + half_minus)
            * q_int(dw - i, q)
            * q_int(n - i - r - t + half_plus, q)
        )
        ci = _qpow(q, t) * q_int(i, q) * q_int(i + r - t + half_minus, q)
        b.append(bi)
        c.append(ci)
    if b[dw] != 0:
        raise ArithmeticError("b_d must vanish")
    if c[0] != 0:
        raise ArithmeticError("c_0 must vanish")
    a = [base - b[i] - c[i] for i in range(dw + 1)]
    return a, b, c


def spectrum_json(gc: GraphContext, ss: SpectralSystem, nums: IntersectionNumbers) -> dict:
    return {
        "q": gc.q,
        "N": gc.n,
        "D": gc.d,
        "theta": [int(t) for t in ss.theta],
        "mult": [int(m) for m in ss.m],
        "theta_star": [str(t) for t in ss.theta_star],
        "intersection_numbers": {
            "k": int(nums.k),
            "a": [int(v) for v in nums.a],
            "b": [int(v) for v in nums.b],
            "c": [int(v) for v in nums.c],
        },
    }
