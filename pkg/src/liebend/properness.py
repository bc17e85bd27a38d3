"""Exact properness decisions: Weyl-orbit membership, the sl(2,R) criterion,
the non-virtually-abelian existence criterion, the equal-rank obstruction,
and a sampled transversality margin.

Every yes/no decision here runs in exact rational arithmetic over the
extensionally stored Weyl group; floats appear only in the sampled margin.
"""

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property

import numpy as np

from . import _ratlin
from .errors import ParameterError, RealizationError


@dataclass(frozen=True, eq=False)
class HSubalgebraTorus:
    """Exact rational subspace a_h of the split torus (basis in free coordinates)."""
    torus: object
    basis: tuple

    def __post_init__(self):
        vecs = tuple(self.torus.vector(v) for v in self.basis)
        object.__setattr__(self, "basis", vecs)
        if vecs and _ratlin.rank(vecs) != len(vecs):
            raise ParameterError("a_h basis vectors are linearly dependent over Q")

    @property
    def dim(self):
        return len(self.basis)

    @cached_property
    def _rref(self):
        return _ratlin.rref(self.basis)

    @cached_property
    def annihilator(self):
        """Primitive integer functionals cutting out span(a_h); u is in the
        span iff every functional vanishes on u (fast exact membership)."""
        n = self.torus.coord_len
        if not self.basis:
            return tuple(tuple(1 if j == i else 0 for j in range(n)) for i in range(n))
        null = _ratlin.nullspace(self.basis, n)
        return tuple(tuple(int(x) for x in _ratlin.primitive(v)) for v in null)

    def contains(self, v):
        v = self.torus.vector(v)
        return all(sum(c * x for c, x in zip(row, v)) == 0 for row in self.annihilator)


def in_weyl_orbit_of_subspace(torus, v, ah):
    """(bool, witness w) deciding whether some w in W moves v into span(a_h)."""
    v = torus.vector(v)
    ann = ah.annihilator
    for w in torus.weyl:
        wv = w.apply(v)
        if all(sum(c * x for c, x in zip(row, wv)) == 0 for row in ann):
            return True, w
    return False, None


def sl2_action_proper(torus, triple, ah):
    """Properness of the SL(2,R)-action via the triple: the dominant image of
    the H-vector must avoid the Weyl orbit of a_h."""
    if triple.torus_vector is None:
        raise RealizationError(
            "triple has no a-diagonal H; conjugate it into the torus first")
    v_plus, _ = torus.dominant_representative(triple.torus_vector)
    member, _ = in_weyl_orbit_of_subspace(torus, v_plus, ah)
    return not member


def _in_translate(ah, w, v):
    """v in w.span(a_h), tested as w^{-1} v in span(a_h) via the annihilator."""
    u = w.apply_inverse(v)
    return all(sum(c * x for c, x in zip(row, u)) == 0 for row in ah.annihilator)


def _b_contained_in_translate(torus, ah, w):
    return all(_in_translate(ah, w, b) for b in torus.b_basis)


def benoist_criterion(torus, ah):
    """True iff the b_plus cone is not covered by the Weyl translates of a_h.

    Since b_plus spans b and each translate is a subspace, covering the cone
    forces one translate to contain all of b; the decision reduces to an exact
    containment test per Weyl element.
    """
    if ah.dim < torus.b_dim:
        return True
    return not any(_b_contained_in_translate(torus, ah, w) for w in torus.weyl)


def benoist_certificate(torus, ah, max_denominator=1000):
    """A rational point of b_plus outside every Weyl translate of a_h, or None.

    Starts from the strictly dominant staircase restricted to b and perturbs
    along the b basis with shrinking rational steps until the point leaves all
    translates while staying in the chamber.
    """
    if not benoist_criterion(torus, ah):
        return None
    base = torus.chamber_interior_point()

    def outside_all(v):
        return not any(_in_translate(ah, w, v) for w in torus.weyl)

    if outside_all(base):
        return base
    denom = 2
    while denom <= max_denominator:
        for direction in torus.b_basis:
            cand = tuple(x + Fraction(1, denom) * d for x, d in zip(base, direction))
            if torus.is_dominant(cand) and torus.in_b(cand) and outside_all(cand):
                return cand
            cand = tuple(x - Fraction(1, denom) * d for x, d in zip(base, direction))
            if torus.is_dominant(cand) and torus.in_b(cand) and outside_all(cand):
                return cand
        denom += 1
    raise RealizationError("no rational certificate point found below the denominator cap")


def calabi_markus(torus, ah):
    """True (no infinite discontinuous groups) iff a_h has full rank in a."""
    return ah.dim == torus.rank


@dataclass(frozen=True)
class PitchforkResult:
    margin: float
    qualifying: int
    inconclusive: bool


def pitchfork_margin(torus, mu_samples, ah, radius=None):
    """Minimal distance from the qualifying mu samples to W.span(a_h).

    Samples with ||mu|| below the radius are ignored (the relative-compactness
    condition is vacuous on a bounded core).  A diagnostic, not a decision.
    """
    from .config import DEFAULT
    r = DEFAULT.pitchfork_radius if radius is None else float(radius)

    projectors = []
    for w in torus.weyl:
        cols = np.array([[float(x) for x in w.apply(b)] for b in ah.basis], dtype=float)
        if cols.size == 0:
            projectors.append(None)
            continue
        q_mat, _ = np.linalg.qr(cols.T)
        projectors.append(q_mat)
    seen = set()
    unique_projectors = []
    for q_mat in projectors:
        # the orthogonal projector determines the subspace independently of
        # the basis produced by qr, so it is a sound deduplication key
        key = None if q_mat is None else tuple(np.round(q_mat @ q_mat.T, 9).ravel())
        if key in seen:
            continue
        seen.add(key)
        unique_projectors.append(q_mat)

    margin = math.inf
    qualifying = 0
    for sample in mu_samples:
        v = np.asarray([float(x) for x in sample], dtype=float)
        if np.linalg.norm(v) < r:
            continue
        qualifying += 1
        for q_mat in unique_projectors:
            dist = np.linalg.norm(v) if q_mat is None else np.linalg.norm(v - q_mat @ (q_mat.T @ v))
            margin = min(margin, dist)
    return PitchforkResult(margin, qualifying, qualifying == 0)


def weyl_compatible_identity_holds(torus, ah, samples):
    """Cross-check of the chamber identity a_+ ∩ W.a_h = a_+ ∩ a_h on the given
    exact dominant samples; meaningful only for symmetric-pair subalgebras."""
    for v in samples:
        v = torus.vector(v)
        if not torus.is_dominant(v):
            v, _ = torus.dominant_representative(v)
        member, _ = in_weyl_orbit_of_subspace(torus, v, ah)
        if member != ah.contains(v):
            return False
    return True
