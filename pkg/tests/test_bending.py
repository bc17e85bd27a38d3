import numpy as np
import pytest
from scipy.linalg import expm

from liebend.algebra import bracket, generated_subalgebra, make_algebra
from liebend.bending import (bend, bending_inequalities, build_plan,
                             density_certificate, fixed_weight_zero_vector,
                             fuchsian_generators, pushed_forward, z_vector)
from liebend.errors import GenusConditionError, ParameterError
from liebend.sl2 import (module_multiplicities, rho1_su, rho2_su,
                         sl2_from_partition)

H2 = np.array([[1.0, 0.0], [0.0, -1.0]])
E2 = np.array([[0.0, 1.0], [0.0, 0.0]])
F2 = E2.T


@pytest.mark.parametrize("genus", [2, 3])
def test_fuchsian_generators(genus):
    rep = fuchsian_generators(genus)
    assert len(rep.a) == len(rep.b) == genus
    assert rep.relation_residual() <= 1e-10
    for m in rep.generators():
        assert abs(np.trace(m)) > 2.0
        assert abs(np.linalg.det(m) - 1.0) < 1e-12


def test_fuchsian_rejects_torus():
    with pytest.raises(ParameterError):
        fuchsian_generators(1)


def test_fixed_vector_adjoint_module(sl2):
    triple = sl2_from_partition(sl2, (2,))
    iso = module_multiplicities(sl2, triple)
    (i, j) = iso.Lambda[0]
    a = expm(0.8 * H2)
    x = fixed_weight_zero_vector(triple, iso, i, j, a)
    x_mat = sl2.from_coordinates(x)
    x_mat /= np.linalg.norm(x_mat)
    assert np.linalg.norm(x_mat - H2 / np.linalg.norm(H2)) < 1e-9

    k = expm(0.6 * (E2 - F2))
    a_conj = k @ a @ np.linalg.inv(k)
    x2 = sl2.from_coordinates(fixed_weight_zero_vector(triple, iso, i, j, a_conj))
    x2 /= np.linalg.norm(x2)
    target = k @ H2 @ np.linalg.inv(k)
    target /= np.linalg.norm(target)
    assert min(np.linalg.norm(x2 - target), np.linalg.norm(x2 + target)) < 1e-9


def test_fixed_vector_needs_hyperbolic(sl2):
    triple = sl2_from_partition(sl2, (2,))
    iso = module_multiplicities(sl2, triple)
    rot = expm(0.5 * (E2 - F2))
    with pytest.raises(ParameterError):
        fixed_weight_zero_vector(triple, iso, *iso.Lambda[0], rot)


def test_bend_t_zero_is_pushforward(su21):
    triple = rho1_su(su21)
    seed = fuchsian_generators(2)
    plan = build_plan(su21, triple, seed, t=0.0)
    bent = bend(seed, plan)
    pushed = pushed_forward(triple, seed)
    for m1, m2 in zip(bent.generators(), pushed.generators()):
        assert np.allclose(m1, m2)


def test_bend_su21_residual(su21):
    triple = rho1_su(su21)
    seed = fuchsian_generators(2)
    plan = build_plan(su21, triple, seed, t=0.01)
    bent = bend(seed, plan)
    assert bent.relation_residual() <= 1e-9
    pushed = pushed_forward(triple, seed)
    assert bent.relation_residual() <= 10.0 * pushed.relation_residual() + 1e-12


def test_bend_relation_exactness_random_plans(rng):
    """Across 50 random plans the bent residual stays within a small multiple
    of the undeformed pushed-forward residual plus the rounding allowance
    tied to the measured conditioning of the relation word (the allowance is
    what bend() enforces; it raises on violation)."""
    su21 = make_algebra("su", 2, 1)
    sl3 = make_algebra("sl", 3)
    sl4 = make_algebra("sl", 4)
    pool = [
        (su21, rho1_su(su21), 2),
        (su21, rho2_su(su21), 2),
        (sl3, sl2_from_partition(sl3, (3,)), 2),
        (sl3, sl2_from_partition(sl3, (2, 1)), 3),
        (sl4, sl2_from_partition(sl4, (4,)), 3),
        (sl4, sl2_from_partition(sl4, (3, 1)), 5),
    ]
    seeds = {}
    count = 0
    while count < 50:
        alg, triple, min_genus = pool[int(rng.integers(0, len(pool)))]
        genus = min_genus + int(rng.integers(0, 2))
        if genus not in seeds:
            seeds[genus] = fuchsian_generators(genus, relation_tol=1e-9)
        seed = seeds[genus]
        t = float(10 ** rng.uniform(-4, -1.4))
        plan = build_plan(alg, triple, seed, t=t)
        bent = bend(seed, plan, seed_tol=1e-9)  # raises if the bound is violated
        pushed = pushed_forward(triple, seed)
        resid, peak, length = bent.relation_diagnostics()
        gen_norm = max(np.linalg.norm(m) for m in bent.generators())
        noise = 64.0 * np.finfo(float).eps * length * peak * gen_norm
        assert resid <= 10.0 * pushed.relation_residual() + noise + 1e-12
        count += 1
    assert count == 50


def test_genus_condition_rejected(sl5):
    triple = sl2_from_partition(sl5, (5,))
    seed3 = fuchsian_generators(3)
    with pytest.raises(GenusConditionError):
        build_plan(sl5, triple, seed3, t=0.01)


def test_plan_seed_genus_mismatch(su21):
    triple = rho1_su(su21)
    seed2 = fuchsian_generators(2)
    seed3 = fuchsian_generators(3)
    plan = build_plan(su21, triple, seed2, t=0.01)
    with pytest.raises(GenusConditionError):
        bend(seed3, plan)


def test_z_vector_properties(su21, rng):
    triple = rho1_su(su21)
    x = triple.e + triple.f
    y = triple.h
    comm = su21.coordinates(bracket(x, y), check=False)
    errs = []
    for t in (1e-2, 1e-3, 1e-4):
        z = z_vector(su21, x, y, t)
        errs.append(np.linalg.norm(z - comm))
    assert errs[0] <= 1e-1 and errs[1] <= 1e-2 and errs[2] <= 1e-3
    assert errs[2] < errs[0]

    z1 = z_vector(su21, x, y, 1e-3)
    z2 = z_vector(su21, x, 2.0 * np.asarray(y), 1e-3)
    assert np.allclose(z2, 2.0 * z1, atol=1e-12)

    commuting = z_vector(su21, triple.h, triple.h, 0.5)
    assert np.linalg.norm(commuting) < 1e-12
    with pytest.raises(ParameterError):
        z_vector(su21, x, y, 0.0)


def test_inequalities_multiplicity_one(su21):
    triple = rho1_su(su21)
    seed = fuchsian_generators(2)
    plan = build_plan(su21, triple, seed, t=0.01)
    rep = bending_inequalities(plan)
    assert rep.ok
    assert all(r["kind"] == "self" for r in rep.margins)  # cross family empty
    # mult 1 lower bound is zero: inequality reads > 0
    assert all(r["bound"] == 0.0 for r in rep.margins)
    assert all(r["margin"] > 0.0 for r in rep.margins)


def test_inequalities_multiplicity_five_report(sl5):
    """Multiplicity-5 case: the cross family is present and every margin is
    reported, including at a deliberately large t."""
    triple = sl2_from_partition(sl5, (3, 1, 1))
    seed = fuchsian_generators(10, relation_tol=1e-8)
    plan = build_plan(sl5, triple, seed, t="auto")
    rep = bending_inequalities(plan)
    assert rep.ok
    kinds = {r["kind"] for r in rep.margins}
    assert kinds == {"self", "cross"}
    big = bending_inequalities(plan.with_t(10.0))
    assert len(big.margins) == len(rep.margins)
    for r in big.margins:
        assert "margin" in r and "bound" in r and "pair" in r


def test_density_certificate_su21(su21):
    triple = rho1_su(su21)
    seed = fuchsian_generators(2)
    plan = build_plan(su21, triple, seed, t="auto")
    bent = bend(seed, plan)
    cert = density_certificate(su21, triple, bent, plan)
    assert cert.verdict == "PASS"
    assert cert.achieved_dim == 4 == cert.target_dim


def test_density_certificate_sl5(sl5):
    triple = sl2_from_partition(sl5, (5,))
    seed = fuchsian_generators(4)
    plan = build_plan(sl5, triple, seed, t="auto")
    bent = bend(seed, plan)
    cert = density_certificate(sl5, triple, bent, plan)
    assert cert.verdict == "PASS"
    assert cert.achieved_dim == 24 == cert.target_dim


def test_density_certificate_no_bending(su21, sl5):
    # without a bending parameter the Z seeds are unavailable: the closure
    # degenerates to the triple image plus the centralizer and the verdict
    # cannot be PASS
    triple5 = sl2_from_partition(sl5, (5,))
    seed4 = fuchsian_generators(4)
    plan5 = build_plan(sl5, triple5, seed4, t=0.01)
    bent5 = bend(seed4, plan5)
    cert5 = density_certificate(sl5, triple5, bent5, plan5.with_t(None))
    assert cert5.verdict != "PASS"
    assert cert5.achieved_dim == 3 < cert5.target_dim  # just the sl2 image

    triple = rho1_su(su21)
    seed = fuchsian_generators(2)
    plan = build_plan(su21, triple, seed, t=0.01)
    bent = bend(seed, plan)
    cert = density_certificate(su21, triple, bent, plan.with_t(None))
    # here sl2 + centralizer happens to exhaust the target, yet the verdict
    # still must not PASS without the inequality premise
    assert cert.verdict == "INCONCLUSIVE"


def test_density_certificate_monotone_in_seeds(sl5):
    triple = sl2_from_partition(sl5, (5,))
    seed = fuchsian_generators(4)
    plan = build_plan(sl5, triple, seed, t=0.01)
    base = [m for m in triple.images()]
    dims = []
    seeds = list(base)
    dims.append(generated_subalgebra(sl5, seeds).dim)
    for (i, j) in plan.Lambda:
        if i == 0:
            continue
        z = z_vector(sl5, plan.x_matrix((i, j)), plan.y_matrix((i, j)), plan.t)
        seeds.append(sl5.from_coordinates(z))
        dims.append(generated_subalgebra(sl5, seeds).dim)
    assert dims == sorted(dims)
    assert dims[-1] == 24


def test_density_certificate_t_halving(su21, sl5):
    for alg, triple, genus in ((su21, rho1_su(su21), 2),
                               (sl5, sl2_from_partition(sl5, (5,)), 4)):
        seed = fuchsian_generators(genus)
        dims = []
        for t in (0.01, 0.005):
            plan = build_plan(alg, triple, seed, t=t)
            assert bending_inequalities(plan).ok
            bent = bend(seed, plan)
            cert = density_certificate(alg, triple, bent, plan)
            dims.append(cert.achieved_dim)
        assert dims[0] == dims[1]


def test_certificate_seeds_recomputable(su21):
    """PASS certificates use only data recomputable from the plan and the
    bent representation (conditional certificate, documented)."""
    triple = rho1_su(su21)
    seed = fuchsian_generators(2)
    plan = build_plan(su21, triple, seed, t="auto")
    bent = bend(seed, plan)
    cert = density_certificate(su21, triple, bent, plan)
    assert cert.verdict == "PASS"
    recomputed = [m for m in triple.images()]
    for (i, j) in plan.Lambda:
        if i == 0:
            recomputed.append(su21.from_coordinates(plan.x_vectors[(0, j)]))
        else:
            z = z_vector(su21, plan.x_matrix((i, j)), plan.y_matrix((i, j)), plan.t)
            recomputed.append(su21.from_coordinates(z))
    assert len(recomputed) == cert.seed_count
    closure = generated_subalgebra(su21, recomputed)
    assert closure.dim == cert.achieved_dim


def test_density_certificate_equal_signature_family():
    """The equal-signature family member is even, so its deformation certifies
    density in the full algebra; needs the glued-pair torsion generators."""
    from liebend.sl2 import genus_bound, is_even, rho1_su
    alg = make_algebra("su", 2, 2)
    triple = rho1_su(alg)
    assert is_even(triple)
    seed = fuchsian_generators(genus_bound(alg, triple), relation_tol=1e-8)
    plan = build_plan(alg, triple, seed, t="auto")
    bent = bend(seed, plan, seed_tol=1e-8)
    cert = density_certificate(alg, triple, bent, plan)
    assert cert.verdict == "PASS"
    assert cert.achieved_dim == alg.dim == cert.target_dim


def test_custom_intermediate_target(su21):
    """Any bracket-closed subalgebra between the triple image and the even
    part is accepted as a certificate target; invalid targets are rejected."""
    from liebend.algebra import subspace_from_coordinates
    triple = rho1_su(su21)
    seed = fuchsian_generators(2)
    sl2_img = generated_subalgebra(su21, triple.images())
    plan = build_plan(su21, triple, seed, t="auto", target=sl2_img)
    assert plan.Lambda == ((1, 1),)
    bent = bend(seed, plan)
    cert = density_certificate(su21, triple, bent, plan)
    assert cert.verdict == "PASS" and cert.achieved_dim == 3 == cert.target_dim

    bad = subspace_from_coordinates(su21, [su21.coordinates(triple.e)])
    with pytest.raises(ParameterError):
        build_plan(su21, triple, seed, t="auto", target=bad)


def test_highprec_verification(su21, sl5):
    from liebend.highprec import verify_bent_relation
    for alg, triple, genus, bound in ((su21, rho1_su(su21), 2, 1e-20),
                                      (sl5, sl2_from_partition(sl5, (5,)), 4, 1e-15)):
        seed = fuchsian_generators(genus)
        plan = build_plan(alg, triple, seed, t="auto")
        bent = bend(seed, plan)
        hp = verify_bent_relation(plan, bent, dps=40)
        assert hp.seed_residual < 1e-25
        assert hp.pushed_residual < bound
        assert hp.bent_residual < bound
        assert hp.max_entry_distance < 1e-8
