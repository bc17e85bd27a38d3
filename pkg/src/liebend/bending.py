"""Explicit Fuchsian surface groups, the bending deformation of their images
under an sl(2,R)-homomorphism, the strict separation inequalities that make
the deformation certify, and the bracket-closure density certificate.
"""

import math
from dataclasses import dataclass, replace
from functools import cached_property

import numpy as np
from scipy.linalg import expm

from .algebra import (adjoint_operator, bracket, generated_subalgebra,
                      kernel_of)
from .config import DEFAULT
from .errors import (GenusConditionError, ParameterError, RealizationError,
                     ShapeError)
from .sl2 import module_multiplicities, property_star_basis, rho_of

_MOBIUS = np.array([[1.0, -1.0j], [1.0, 1.0j]])
_MOBIUS_INV = np.linalg.inv(_MOBIUS)


@dataclass(frozen=True, eq=False)
class SurfaceGroupRep:
    """Images of the standard generators a_1,b_1,...,a_g,b_g."""
    genus: int
    a: tuple  # g matrices
    b: tuple  # g matrices

    def relation_residual(self):
        return self.relation_diagnostics()[0]

    def relation_diagnostics(self):
        """(residual, max partial-product norm, word length); the partial norm
        measures how strongly rounding noise is amplified along the word."""
        n = self.a[0].shape[0]
        prod = np.eye(n, dtype=complex)
        peak = 1.0
        length = 0
        for ak, bk in zip(self.a, self.b):
            for m in (ak, bk, np.linalg.inv(ak), np.linalg.inv(bk)):
                prod = prod @ m
                peak = max(peak, float(np.linalg.norm(prod)))
                length += 1
        return float(np.linalg.norm(prod - np.eye(n))), peak, length

    def generators(self):
        out = []
        for ak, bk in zip(self.a, self.b):
            out.extend([ak, bk])
        return out


def _disk_rotation(phi):
    return np.array([[np.exp(0.5j * phi), 0.0], [0.0, np.exp(-0.5j * phi)]])


def _disk_translation(d):
    return np.array([[math.cosh(d / 2.0), math.sinh(d / 2.0)],
                     [math.sinh(d / 2.0), math.cosh(d / 2.0)]], dtype=complex)


def fuchsian_generators(genus, relation_tol=None):
    """Side-pairing matrices of the regular hyperbolic 4g-gon with vertex
    angle 2*pi/4g (angle sum 2*pi, one vertex cycle).

    Sides are numbered counterclockwise and carry the boundary word
    a_1 b_1 a_1^{-1} b_1^{-1} ...; A_k glues side 4k+2 onto side 4k and B_k
    glues side 4k+1 onto side 4k+3, which realizes
    [A_1,B_1]...[A_g,B_g] = I in SL(2,R).
    """
    tol = DEFAULT.seed_relation_tol if relation_tol is None else relation_tol
    g = int(genus)
    if g < 2:
        raise ParameterError(f"surface groups need genus >= 2, got {g}")
    n = 4 * g
    rho = math.acosh(1.0 / math.tan(math.pi / n))  # center-to-side distance

    def normal_angle(j):
        return 2.0 * math.pi * (j + 0.5) / n

    def glue(src, dst):
        u = (_disk_rotation(normal_angle(dst) + math.pi)
             @ _disk_translation(2.0 * rho)
             @ np.linalg.inv(_disk_rotation(normal_angle(src))))
        m = _MOBIUS_INV @ u @ _MOBIUS
        if np.max(np.abs(m.imag)) > 1e-11:
            raise RealizationError("disk-model side pairing failed to descend to SL(2,R)")
        return m.real

    a_list, b_list = [], []
    for k in range(g):
        a_list.append(glue(4 * k + 2, 4 * k))
        b_list.append(glue(4 * k + 1, 4 * k + 3))
    rep = SurfaceGroupRep(g, tuple(a_list), tuple(b_list))
    resid = rep.relation_residual()
    if resid > tol:
        raise RealizationError(f"polygon relation residual {resid:.3e} exceeds {tol:.1e}")
    for m in rep.generators():
        if abs(np.trace(m)) <= 2.0:
            raise RealizationError("polygon side pairing produced a non-hyperbolic generator")
    return rep


def _hyperbolic_conjugator(a_matrix):
    """k in SL(2,R) with k^{-1} a k diagonal; deterministic column choices."""
    w, vecs = np.linalg.eig(a_matrix)
    if np.max(np.abs(w.imag)) > 1e-10:
        raise ParameterError("the fixed line needs a hyperbolic element")
    order = np.argsort(-w.real)
    vecs = vecs[:, order].real
    for c in range(2):
        col = vecs[:, c]
        lead = col[np.argmax(np.abs(col) > 1e-12)]
        if lead < 0:
            vecs[:, c] = -col
    det = np.linalg.det(vecs)
    if det < 0:
        vecs[:, 1] = -vecs[:, 1]
        det = -det
    return vecs / math.sqrt(det)


def fixed_weight_zero_vector(triple, iso, i, j, a_matrix, tol=1e-7):
    """The Ad(rho(a))-fixed line in the piece V_{i,j}, unit-normalized with a
    deterministic sign.  a must be hyperbolic in SL(2,R).

    With a = k d k^{-1} diagonal, the fixed line is Ad(rho(k)) applied to the
    weight-zero basis vector of the piece: conjugation avoids extracting a
    near-kernel from an operator whose spectrum spreads exponentially in the
    highest weight.  The fixed-point equation is verified afterwards.
    """
    a_matrix = np.asarray(a_matrix, dtype=float)
    if a_matrix.shape != (2, 2):
        raise ShapeError("a must be a 2x2 matrix")
    if abs(np.trace(a_matrix)) <= 2.0:
        raise ParameterError("the fixed line needs a hyperbolic element")
    alg = triple.algebra
    k = _hyperbolic_conjugator(a_matrix)
    rho_k = rho_of(triple, k)
    cols = iso.piece_columns[(i, j)]
    v0 = alg.from_coordinates(cols[:, i])  # weight-zero vector of the piece
    x_mat = rho_k @ v0 @ np.linalg.inv(rho_k)
    x = alg.coordinates(x_mat)
    x = x / np.linalg.norm(x)
    lead = x[np.argmax(np.abs(x) > 1e-9)]
    if lead < 0:
        x = -x
    # fixed-point residual, relative to how strongly Ad(rho(a)) stretches
    rho_a = rho_of(triple, a_matrix)
    moved = rho_a @ alg.from_coordinates(x) @ np.linalg.inv(rho_a)
    stretch = max(np.linalg.norm(moved), 1.0)
    resid = np.linalg.norm(moved - alg.from_coordinates(x))
    if resid > tol * stretch:
        raise RealizationError(
            f"fixed-point residual {resid:.3e} too large in V_({i},{j})")
    return x


@dataclass(frozen=True, eq=False)
class BendingPlan:
    triple: object
    seed: SurfaceGroupRep
    iso: object                # IsotypicData of the target subalgebra
    Lambda: tuple
    f: dict                    # (i,j) -> generator index in 1..g
    x_vectors: dict            # (i,j) -> algebra coordinates
    y_vectors: dict            # (i,j) -> algebra coordinates, i != 0 only
    t: float | None
    star_kinds: dict           # j -> classification of X_{0,j}

    @property
    def genus(self):
        return self.seed.genus

    def x_matrix(self, ij):
        return self.triple.algebra.from_coordinates(self.x_vectors[ij])

    def y_matrix(self, ij):
        return self.triple.algebra.from_coordinates(self.y_vectors[ij])

    def with_t(self, t):
        return replace(self, t=t)

    @cached_property
    def generator_assignment(self):
        """k -> (i,j) for bent generators; others get no twist."""
        return {k: ij for ij, k in self.f.items()}


def build_plan(alg, triple, seed, t="auto", target=None, config=None):
    """Assemble a bending plan: isotypic pieces, the injection into generator
    indices, the fixed vectors, companions and the bending parameter."""
    cfg = config or DEFAULT
    if target is not None:
        closed = generated_subalgebra(alg, [alg.from_coordinates(r) for r in target.onb])
        if closed.dim != target.dim:
            raise ParameterError("custom target subalgebra is not bracket-closed")
        for m in triple.images():
            if not triple.is_zero and not target.contains_vector(alg.coordinates(m), 1e-7):
                raise ParameterError("triple image leaves the target subalgebra")
    iso = module_multiplicities(alg, triple, target=target)
    lam = iso.Lambda
    if seed.genus < len(lam):
        raise GenusConditionError(
            f"genus {seed.genus} is below the required {len(lam)} (sum of odd multiplicities)")
    f_map = {ij: k + 1 for k, ij in enumerate(lam)}

    zero_js = sorted(j for (i, j) in lam if i == 0)
    star = []
    if zero_js:
        z_sub = _triple_centralizer(alg, triple)
        if target is not None:
            z_sub = _intersect(alg, z_sub, iso.target)
        if z_sub.dim != len(zero_js):
            raise RealizationError(
                f"centralizer dimension {z_sub.dim} disagrees with the trivial-piece count "
                f"{len(zero_js)}")
        star = property_star_basis(alg, z_sub, triple=triple)

    x_vectors, y_vectors, star_kinds = {}, {}, {}
    for (i, j) in lam:
        if i == 0:
            x_vectors[(0, j)] = np.array(star[j - 1].coords, dtype=float)
            star_kinds[j] = star[j - 1].kind
            continue
        a_matrix = seed.a[f_map[(i, j)] - 1]
        x = fixed_weight_zero_vector(triple, iso, i, j, a_matrix)
        x_vectors[(i, j)] = x
        x_mat = alg.from_coordinates(x)
        best, best_norm = None, -1.0
        for cand in (triple.e, triple.f, triple.h):
            norm = np.linalg.norm(bracket(x_mat, cand))
            if norm > best_norm + 1e-12:
                best, best_norm = cand, norm
        if best_norm <= 1e-10:
            raise RealizationError(f"[X,Y] vanishes for every triple image at {(i, j)}")
        y_vectors[(i, j)] = alg.coordinates(best)

    plan = BendingPlan(triple, seed, iso, lam, f_map, x_vectors, y_vectors, None, star_kinds)
    if t == "auto":
        for cand in cfg.t_grid:
            trial = plan.with_t(float(cand))
            if bending_inequalities(trial).ok:
                return trial
        return plan  # t stays None; caller reports the failed grid
    return plan.with_t(float(t))


def _triple_centralizer(alg, triple):
    ops = [adjoint_operator(alg, m) for m in triple.images()]
    return kernel_of(ops, alg)


def _intersect(alg, s1, s2):
    p1 = np.eye(alg.dim) - s1.onb.T @ s1.onb
    p2 = np.eye(alg.dim) - s2.onb.T @ s2.onb
    return kernel_of([p1, p2], alg)


def z_vector(alg, x_mat, y_mat, t):
    """(1/t)(Ad(e^{tX})Y - Y) in algebra coordinates."""
    if t == 0:
        raise ParameterError("z_vector needs t != 0")
    g = expm(float(t) * np.asarray(x_mat))
    moved = g @ np.asarray(y_mat) @ np.linalg.inv(g)
    return alg.coordinates((moved - np.asarray(y_mat)) / float(t), check=False)


@dataclass(frozen=True)
class InequalityReport:
    ok: bool
    margins: tuple  # records per inequality
    note: str = ""


def bending_inequalities(plan):
    """Strict separation inequalities for the bent pieces, with margins.

    For each (i,j) with i != 0 the self-projection of Z_{i,j}(t) must exceed
    (1 - 1/mult) of the commutator size, and every cross-projection (i,k),
    k != j, must stay below (1/mult) of it.  Multiplicity-one indices have an
    empty cross family.
    """
    if plan.t is None or plan.t == 0:
        return InequalityReport(False, (), "no bending parameter set")
    alg = plan.triple.algebra
    iso = plan.iso
    records = []
    ok = True
    for (i, j) in plan.Lambda:
        if i == 0:
            continue
        mult = iso.target_odd_mults[i]
        x_mat = plan.x_matrix((i, j))
        y_mat = plan.y_matrix((i, j))
        z = z_vector(alg, x_mat, y_mat, plan.t)
        if not np.all(np.isfinite(z)):
            return InequalityReport(False, tuple(records),
                                    f"Ad(e^(tX)) overflowed at t={plan.t:g}")
        comm = alg.coordinates(bracket(x_mat, y_mat))
        cnorm = float(np.linalg.norm(iso.model_coordinates(i, j, comm)))
        self_norm = float(np.linalg.norm(iso.model_coordinates(i, j, z)))
        lower = (1.0 - 1.0 / mult) * cnorm
        rec = {"pair": (i, j), "kind": "self", "value": self_norm,
               "bound": lower, "margin": self_norm - lower}
        ok = ok and rec["margin"] > 0
        records.append(rec)
        for k in range(1, mult + 1):
            if k == j:
                continue
            cross = float(np.linalg.norm(iso.model_coordinates(i, k, z)))
            upper = cnorm / mult
            rec = {"pair": (i, j), "against": (i, k), "kind": "cross",
                   "value": cross, "bound": upper, "margin": upper - cross}
            ok = ok and rec["margin"] > 0
            records.append(rec)
    return InequalityReport(ok, tuple(records))


def pushed_forward(triple, seed):
    """The undeformed representation: generator images under the homomorphism."""
    return SurfaceGroupRep(seed.genus,
                           tuple(rho_of(triple, ak) for ak in seed.a),
                           tuple(rho_of(triple, bk) for bk in seed.b))


def bend(seed, plan, seed_tol=None):
    """The deformed representation: a_k images unchanged, b_k images multiplied
    by exp(t X_k).

    The deformation is algebraically relation-preserving: the output residual
    is bounded by a small multiple of the undeformed pushed-forward residual
    plus a rounding allowance proportional to the measured conditioning of the
    relation word (high ad-weights amplify float noise independently of the
    bending).  The algebraically exact statement is certified separately by
    the high-precision lane.  Absolute residual policies live with the caller.
    """
    cfg_seed = DEFAULT.seed_relation_tol if seed_tol is None else seed_tol
    if plan.t is None:
        raise ParameterError("plan has no bending parameter; the grid search failed")
    if plan.genus != seed.genus:
        raise GenusConditionError("plan and seed genus differ")
    seed_resid = seed.relation_residual()
    if seed_resid > cfg_seed:
        raise RealizationError(f"seed relation residual {seed_resid:.3e} exceeds {cfg_seed:.1e}")
    triple = plan.triple
    alg = triple.algebra
    pushed = pushed_forward(triple, seed)
    pushed_resid = pushed.relation_residual()

    twists = []
    for k in range(1, seed.genus + 1):
        ij = plan.generator_assignment.get(k)
        if ij is None:
            twists.append(np.eye(alg.size, dtype=complex if alg.is_complex else float))
        else:
            twists.append(expm(plan.t * alg.from_coordinates(plan.x_vectors[ij])))
    bent = SurfaceGroupRep(seed.genus, pushed.a,
                           tuple(bb @ tw for bb, tw in zip(pushed.b, twists)))
    resid, peak, length = bent.relation_diagnostics()
    gen_norm = max(np.linalg.norm(m) for m in bent.generators())
    noise = 64.0 * np.finfo(float).eps * length * peak * gen_norm
    if resid > 10.0 * pushed_resid + noise + 1e-12:
        raise RealizationError(
            f"bent residual {resid:.3e} exceeds 10x the undeformed residual "
            f"{pushed_resid:.3e} plus the rounding allowance {noise:.3e}")
    return bent


@dataclass(frozen=True)
class CertificateResult:
    verdict: str  # PASS | FAIL | INCONCLUSIVE
    achieved_dim: int
    target_dim: int
    inequalities: InequalityReport
    seed_count: int


def density_certificate(alg, triple, bent_rep, plan):
    """Bracket-closure certificate at the Lie-algebra level.

    Seeds are the triple images, the Z_{i,j}(t) vectors and the X_{0,j};
    all of them lie in the Lie algebra of the closure of the bent group.
    PASS means they generate the full target subalgebra; a failed inequality
    check downgrades the verdict to INCONCLUSIVE, never to FAIL.
    """
    ineq = bending_inequalities(plan)
    seeds = [m for m in triple.images() if np.linalg.norm(m) > 0]
    for (i, j) in plan.Lambda:
        if i == 0:
            seeds.append(alg.from_coordinates(plan.x_vectors[(0, j)]))
        elif plan.t not in (None, 0):
            z = z_vector(alg, plan.x_matrix((i, j)), plan.y_matrix((i, j)), plan.t)
            seeds.append(alg.from_coordinates(z))
    closure = generated_subalgebra(alg, seeds)
    achieved = closure.dim
    target = plan.iso.target.dim
    if achieved == target and ineq.ok:
        verdict = "PASS"
    elif not ineq.ok:
        verdict = "INCONCLUSIVE"
    else:
        verdict = "FAIL"
    return CertificateResult(verdict, achieved, target, ineq, len(seeds))
