"""Restricted root systems, Weyl groups, the opposition involution and the
subspace b of iota-fixed chamber directions, for sl(n,R) and su(p,q).

Torus vectors are exact: tuples of Fraction in the free coordinates of the
diagonal pattern (the full traceless diagonal for sl(n,R); (a_1..a_q) for
su(p,q)).  The Weyl group is stored extensionally as signed permutations of
the free coordinates, which keeps every quantifier over W exact and simple.
"""

import itertools
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property

import numpy as np

from . import _ratlin
from .algebra import SL, SU
from .errors import ParameterError, RealizationError

WEYL_RANK_CAP = 8


def torus_vector(values):
    return tuple(Fraction(v) for v in values)


@dataclass(frozen=True)
class WeylElement:
    perm: tuple
    signs: tuple

    def apply(self, v):
        return tuple(s * v[p] for s, p in zip(self.signs, self.perm))

    def apply_inverse(self, u):
        out = [None] * len(u)
        for i, (s, p) in enumerate(zip(self.signs, self.perm)):
            out[p] = s * u[i]
        return tuple(out)

    def apply_root(self, coeffs):
        """Coefficients of alpha o w^{-1} given those of alpha."""
        return tuple(s * coeffs[p] for s, p in zip(self.signs, self.perm))

    @property
    def is_identity(self):
        return all(s == 1 for s in self.signs) and self.perm == tuple(range(len(self.perm)))

    def describe(self):
        return {"perm": list(self.perm), "signs": list(self.signs)}


@dataclass(frozen=True)
class Root:
    coeffs: tuple  # integer functional on the free coordinates
    multiplicity: int

    def value(self, v):
        return sum(c * x for c, x in zip(self.coeffs, v))


@dataclass(frozen=True, eq=False)
class SplitTorusData:
    algebra: object
    family: str
    rank: int
    coord_len: int
    roots: tuple
    positive_roots: tuple
    weyl: tuple
    w0: WeylElement
    b_basis: tuple  # exact primitive-integer vectors spanning the iota-fixed subspace

    @property
    def weyl_order(self):
        return len(self.weyl)

    def vector(self, values):
        v = torus_vector(values)
        if len(v) != self.coord_len:
            raise ParameterError(f"expected {self.coord_len} coordinates, got {len(v)}")
        if self.family == SL and sum(v) != 0:
            raise ParameterError("sl(n,R) torus vectors must have zero trace")
        return v

    def identity(self):
        return WeylElement(tuple(range(self.coord_len)), (1,) * self.coord_len)

    def full_diagonal(self, v):
        """Exact ambient diagonal entries of a free-coordinate vector."""
        if self.family == SL:
            return tuple(v)
        p, q = self.algebra.params
        middle = (Fraction(0),) * (p - q)
        return tuple(v) + middle + tuple(-x for x in reversed(v))

    def matrix_of(self, v):
        diag = [float(x) for x in self.full_diagonal(v)]
        m = np.diag(diag)
        return m.astype(complex) if self.algebra.is_complex else m

    def vector_from_diagonal(self, h, tol=1e-9):
        """Exact free coordinates of a diagonal integer matrix in the a-pattern."""
        h = np.asarray(h)
        off = h - np.diag(np.diag(h))
        if np.linalg.norm(off) > tol * max(np.linalg.norm(h), 1.0):
            raise RealizationError("matrix is not diagonal; conjugate into a first")
        diag = np.diag(h)
        if np.linalg.norm(np.asarray(diag).imag) > tol:
            raise RealizationError("diagonal is not real")
        ints = [round(float(x.real)) for x in diag]
        if max(abs(float(x.real) - r) for x, r in zip(diag, ints)) > 1e-8:
            raise RealizationError("diagonal entries are not integers")
        if self.family == SL:
            return self.vector(ints)
        p, q = self.algebra.params
        n = p + q
        for k in range(q):
            if ints[k] != -ints[n - 1 - k]:
                raise RealizationError("diagonal does not match the mirrored a-pattern")
        for m in range(q, p):
            if ints[m] != 0:
                raise RealizationError("middle diagonal entries must vanish")
        return self.vector(ints[:q])

    def is_dominant(self, v):
        return all(r.value(v) >= 0 for r in self.positive_roots)

    def dominant_representative(self, v):
        """(v_plus, w) with w.v = v_plus in the closed chamber; w is a witness."""
        v = self.vector(v)
        if self.is_dominant(v):
            return v, self.identity()
        if self.family == SL:
            order = sorted(range(self.coord_len), key=lambda i: (-v[i], i))
            w = WeylElement(tuple(order), (1,) * self.coord_len)
        else:
            order = sorted(range(self.coord_len), key=lambda i: (-abs(v[i]), i))
            signs = tuple(-1 if v[i] < 0 else 1 for i in order)
            w = WeylElement(tuple(order), signs)
        v_plus = w.apply(v)
        assert self.is_dominant(v_plus)
        return v_plus, w

    def iota(self, v):
        """Opposition involution -w0."""
        return tuple(-x for x in self.w0.apply(self.vector(v)))

    def in_b(self, v):
        return self.iota(v) == tuple(self.vector(v))

    def in_b_plus(self, v):
        return self.in_b(v) and self.is_dominant(v)

    @cached_property
    def b_dim(self):
        return len(self.b_basis)

    def chamber_interior_point(self):
        """A strictly dominant iota-fixed rational vector (staircase)."""
        if self.family == SU:
            return self.vector(range(self.rank, 0, -1))
        n = self.coord_len
        return self.vector([n + 1 - 2 * (i + 1) for i in range(n)])


def _sl_roots(n):
    roots = []
    for i in range(n):
        for j in range(n):
            if i != j:
                c = [0] * n
                c[i], c[j] = 1, -1
                roots.append(tuple(c))
    return roots


def _su_root_patterns(p, q):
    """Root functionals of su(p,q) on (a_1..a_q): e_i±e_j, e_i (p>q only), 2e_i."""
    roots = []
    for i in range(q):
        for j in range(q):
            if i < j:
                for sj in (1, -1):
                    c = [0] * q
                    c[i], c[j] = 1, sj
                    roots.append(tuple(c))
                    roots.append(tuple(-x for x in c))
    if p > q:
        for i in range(q):
            c = [0] * q
            c[i] = 1
            roots.append(tuple(c))
            c2 = [0] * q
            c2[i] = -1
            roots.append(tuple(c2))
    for i in range(q):
        c = [0] * q
        c[i] = 2
        roots.append(tuple(c))
        c2 = [0] * q
        c2[i] = -2
        roots.append(tuple(c2))
    return roots


_GENERIC_WEIGHTS = tuple(p ** 0.5 for p in (2, 3, 5, 7, 11, 13, 17, 19))


def _root_multiplicities(alg, torus_free_basis, root_coeffs):
    """Multiplicities from ad-eigenspace dimensions of the realized operators.

    A generic real combination of the commuting ad operators separates the
    integer root functionals (square roots of primes are rationally
    independent), so one eigendecomposition yields every multiplicity.
    """
    from .algebra import adjoint_operator

    ads = [adjoint_operator(alg, a_mat) for _, a_mat in torus_free_basis]
    rank = len(ads)
    mu = _GENERIC_WEIGHTS[:rank]
    combined = sum(m * ad for m, ad in zip(mu, ads))
    eigs = np.linalg.eigvals(combined)
    if np.max(np.abs(eigs.imag)) > 1e-7 * max(np.max(np.abs(eigs)), 1.0):
        raise RealizationError("ad operators of the split torus are not real-diagonalizable")
    eigs = np.sort(eigs.real)

    # eigenvalue of the combined operator attached to each root functional
    free_coords = [fc for fc, _ in torus_free_basis]
    mults = {}
    used = np.zeros(len(eigs), dtype=bool)
    for coeffs in root_coeffs:
        lam = sum(
            m * float(sum(c * x for c, x in zip(coeffs, fc)))
            for m, fc in zip(mu, free_coords)
        )
        hits = np.nonzero(~used & (np.abs(eigs - lam) < 1e-6))[0]
        used[hits] = True
        mults[coeffs] = len(hits)
    zero_count = int(np.sum(~used & (np.abs(eigs) < 1e-6)))
    if sum(mults.values()) + zero_count != alg.dim:
        raise RealizationError("root-space dimensions do not exhaust the algebra")
    return mults


def _lex_positive(coeffs):
    for c in coeffs:
        if c != 0:
            return c > 0
    return False


def split_torus(alg):
    """SplitTorusData for a supported algebra; W stored extensionally."""
    if alg.family == SL:
        (n,) = alg.params
        rank, coord_len = n - 1, n
        if rank > WEYL_RANK_CAP:
            raise ParameterError(f"rank {rank} exceeds the extensional Weyl cap {WEYL_RANK_CAP}")
        root_coeffs = _sl_roots(n)
        weyl = tuple(WeylElement(p, (1,) * n) for p in itertools.permutations(range(n)))
    else:
        p, q = alg.params
        rank, coord_len = q, q
        if rank > WEYL_RANK_CAP:
            raise ParameterError(f"rank {rank} exceeds the extensional Weyl cap {WEYL_RANK_CAP}")
        root_coeffs = _su_root_patterns(p, q)
        weyl = tuple(
            WeylElement(perm, signs)
            for perm in itertools.permutations(range(q))
            for signs in itertools.product((1, -1), repeat=q)
        )

    # multiplicities from ad-eigenspace dimensions, validating the realization
    probe = _ProtoTorus(alg, coord_len)
    torus_basis = []
    for i in range(rank):
        free = [Fraction(0)] * coord_len
        if alg.family == SL:
            free[i], free[i + 1] = Fraction(1), Fraction(-1)
        else:
            free[i] = Fraction(1)
        torus_basis.append((tuple(free), probe.matrix_of(free)))
    ordered = sorted(root_coeffs, reverse=True)
    mults = _root_multiplicities(alg, torus_basis, ordered)
    roots = tuple(Root(c, mults[c]) for c in ordered)
    for r in roots:
        if r.multiplicity < 1:
            raise RealizationError(f"root {r.coeffs} has no ad-eigenspace in this realization")
    positive = tuple(r for r in roots if _lex_positive(r.coeffs))

    proto = SplitTorusData(alg, alg.family, rank, coord_len, roots, positive,
                           weyl, WeylElement(tuple(range(coord_len)), (1,) * coord_len), ())
    w0 = _longest_element(proto)
    b_basis = _b_basis(proto, w0)
    return SplitTorusData(alg, alg.family, rank, coord_len, roots, positive, weyl, w0, b_basis)


class _ProtoTorus:
    """Just enough structure to build diagonal matrices before SplitTorusData exists."""

    def __init__(self, alg, coord_len):
        self.alg = alg
        self.coord_len = coord_len

    def matrix_of(self, free):
        if self.alg.family == SL:
            diag = [float(x) for x in free]
        else:
            p, q = self.alg.params
            diag = [float(x) for x in free] + [0.0] * (p - q) + [-float(x) for x in reversed(free)]
        m = np.diag(diag)
        return m.astype(complex) if self.alg.is_complex else m


def _longest_element(torus):
    """w0 found constructively: the unique w sending the staircase to the
    antidominant representative; verified to map positive roots to negatives."""
    if torus.family == SU:
        rho = torus.vector(range(torus.rank, 0, -1))
    else:
        n = torus.coord_len
        rho = torus.vector([n + 1 - 2 * (i + 1) for i in range(n)])
    v_plus, _ = torus.dominant_representative([-x for x in rho])
    target = tuple(-x for x in v_plus)  # antidominant image of rho
    perm, signs = [], []
    values = list(rho)
    for t in target:
        j = values.index(abs(t)) if torus.family == SU else values.index(t)
        perm.append(j)
        signs.append(-1 if (torus.family == SU and t < 0) else 1)
    w0 = WeylElement(tuple(perm), tuple(signs))
    pos = {r.coeffs for r in torus.positive_roots}
    for r in torus.positive_roots:
        image = w0.apply_root(r.coeffs)
        if tuple(-c for c in image) not in pos:
            raise RealizationError("constructed w0 does not negate the positive system")
    return w0


def _b_basis(torus, w0):
    """Exact primitive basis of {v : iota(v) = v} (with zero trace for sl)."""
    m = torus.coord_len
    rows = []
    for i in range(m):
        row = [Fraction(0)] * m
        row[i] += 1
        # iota(v)_i = -signs[i] * v[perm[i]]
        row[w0.perm[i]] += w0.signs[i]
        rows.append(tuple(row))
    if torus.family == SL:
        rows.append(tuple(Fraction(1) for _ in range(m)))
    basis = _ratlin.nullspace(rows, m)
    prim = sorted(_ratlin.primitive(v) for v in basis)
    return tuple(tuple(x for x in v) for v in prim)


def b_space(torus):
    """(exact basis of b, inequality description of b_plus).

    The inequalities are the positive-root functionals; b_plus is the set of
    b-vectors on which all of them are nonnegative.
    """
    return torus.b_basis, torus.positive_roots
