import numpy as np
import pytest

from eqdeg.errors import MarginFailure, SliceMarginFailure, StabilizationFailure
from eqdeg.euler_ring import (
    CIRCLE,
    DirectLimitClass,
    SubgroupClass,
    basis_element,
    limit_class_equal,
    unit,
)
from eqdeg.galerkin import (
    BallSpec,
    LocalMapSpec,
    OtopyPath,
    RegionSpec,
    ShellBasis,
    certify_margin,
    correction_factor,
    deg_along_otopy,
    deg_infinite,
    degree_result_from_json,
    direct_sum_local_maps,
    normalization_map,
    potential_nonlinearity,
    restriction_consistency,
    scalar_nonlinearity,
    shell_degrees,
    zero_nonlinearity,
)
from eqdeg.hamiltonian import loop_operator
from eqdeg.polynomials import Polynomial
from eqdeg.reps import Rep, SpectralOperator
from eqdeg.selftest import (
    corpus_local_maps,
    normalization_operators,
    quartic_hamiltonian,
    synthetic_operator_a,
)
from eqdeg.hamiltonian import local_map as hamiltonian_local_map

import oracles

ONE = unit(CIRCLE)


def e(k):
    return basis_element(CIRCLE, SubgroupClass.finite(k))


def half_shift_map(radius=1.0):
    """x -> Ax - x/2 on the integer-spectrum loop operator (kernel R^2)."""
    return LocalMapSpec(
        operator=loop_operator(1),
        nonlinearity=scalar_nonlinearity(0.5),
        region=RegionSpec.ball(radius),
        name="A - id/2",
    )


# ---------------------------------------------------------------------------
# Correction factors


def test_correction_factor_empty_product():
    assert correction_factor(loop_operator(1), 0) == ONE


def test_correction_factor_single_shell():
    op = SpectralOperator(
        {0: [], 1: [(1.0, Rep(0, ((1, 1),))), (-1.0, Rep(0, ((1, 1),)))]}, max_level=1
    )
    assert shell_degrees(op, 1) == (ONE - e(1),)
    assert correction_factor(op, 1) == ONE + e(1)


def test_correction_factor_recursion():
    op = loop_operator(2)
    for n in range(1, 5):
        a_next = shell_degrees(op, n + 1)[-1]
        inv = a_next.invert()
        assert correction_factor(op, n + 1) == correction_factor(op, n) * inv


# ---------------------------------------------------------------------------
# Margin certification


def test_certify_linear_diagonal_tail_vanishes():
    f = half_shift_map()
    for n in (1, 2, 3):
        eps, tail = certify_margin(f, n)
        assert tail < 1e-12
        assert eps > 0


def test_certify_zero_nonlinearity():
    op = loop_operator(1)
    f = LocalMapSpec(op, zero_nonlinearity, RegionSpec.ball(1.0), name="A only")
    # A has a kernel, so boundary samples with kernel components keep |Ax|
    # away from zero only off the kernel; the minimum is still positive on
    # random samples, and the tail is exactly zero.
    eps, tail = certify_margin(f, 2)
    assert tail == 0.0
    assert eps > 0


def test_certify_cubic_tail_decreases_until_certified():
    f = hamiltonian_local_map(quartic_hamiltonian(1, 0.4, quartic_coeff=0.8), radius=0.9)
    tails = []
    for n in (1, 2, 3):
        _, tail = certify_margin(f, n)
        tails.append(tail)
    assert tails[0] > tails[1] > tails[2]


def test_certify_margin_failure_when_tail_dominates():
    # a nonlinearity acting purely on the reference-level tail coordinates:
    # certification at low level must fail
    op = loop_operator(1)

    def heavy_tail(X, basis):
        X = np.atleast_2d(X)
        out = np.zeros_like(X)
        d1 = basis.prefix_dim(min(1, basis.level))
        out[:, d1:] = 5.0
        return out

    f = LocalMapSpec(op, heavy_tail, RegionSpec.ball(1.0), name="tail heavy")
    with pytest.raises(MarginFailure):
        certify_margin(f, 1)


# ---------------------------------------------------------------------------
# The stabilized degree


def test_normalization_loop_and_synthetic():
    for name, op in normalization_operators():
        res = deg_infinite(normalization_map(op))
        assert res.value == ONE, name
        level = res.level
        assert oracles.telescoped_normalization(op, level) == ONE


def test_half_shift_telescopes_to_unit():
    res = deg_infinite(half_shift_map(), stabilization_depth=2)
    assert res.value == ONE
    # independent sign-count telescoping at every checked level
    for n in res.diagnostics["levels_checked"]:
        assert oracles.telescoped_linear_degree(loop_operator(1), 0.5, n) == ONE


def test_empty_domain_zero_degree():
    # f = Ax - grad(|x0|^2/2) has its only zero at the origin; a small ball
    # away from it contains no zeros and the degree vanishes
    op = synthetic_operator_a()
    poly = Polynomial.from_terms(2, [((2, 0), 0.5), ((0, 2), 0.5)])
    f = LocalMapSpec(
        op,
        potential_nonlinearity(poly),
        RegionSpec.ball(0.2, center=(0.9, 0.0), center_level=0),
        name="off-center",
    )
    res = deg_infinite(f)
    assert res.value.is_zero
    assert res.diagnostics["zero_counts"][0] == 0


def test_existence_nonzero_degree_locates_a_zero():
    for inst in corpus_local_maps():
        res = deg_infinite(inst.build())
        if not res.value.is_zero:
            assert res.diagnostics["zero_counts"][0] >= 1


def test_corpus_stabilizes_three_levels():
    for inst in corpus_local_maps():
        res = deg_infinite(inst.build(), stabilization_depth=2)
        assert len(res.stabilization) == 3
        assert all(v == res.value for v in res.stabilization)
        if inst.expected is not None:
            assert res.value == inst.expected, inst.name


def test_forced_level_matches_auto():
    f = half_shift_map()
    auto = deg_infinite(f)
    forced = deg_infinite(f, level=auto.level + 2)
    assert forced.value == auto.value


def test_value_independent_of_sampling_seed():
    inst = next(i for i in corpus_local_maps() if i.name == "loop1-quartic")
    values = {deg_infinite(inst.build(), seed=s).value for s in (0, 1, 2)}
    assert len(values) == 1


def test_auto_level_escalates_past_margin_failures():
    # a strong quartic tail swamps level 1; certification succeeds at 2
    f = hamiltonian_local_map(quartic_hamiltonian(1, 0.4, quartic_coeff=5.0), radius=1.3)
    with pytest.raises(MarginFailure):
        certify_margin(f, 1)
    res = deg_infinite(f)
    assert res.level == 2
    assert res.value == ONE


def test_auto_level_exhaustion_reports_margin_failure():
    op = loop_operator(1)

    def heavy_tail(X, basis):
        X = np.atleast_2d(X)
        out = np.zeros_like(X)
        out[:, basis.prefix_dim(min(1, basis.level)) :] = 5.0
        return out

    f = LocalMapSpec(op, heavy_tail, RegionSpec.ball(1.0), name="tail heavy")
    with pytest.raises(MarginFailure):
        deg_infinite(f, max_level=4)


def test_stabilization_failure_is_detected():
    # a non-gradient-consistent nonlinearity that changes the truncated
    # degree with the level: F acts only on the top shell of each basis
    op = loop_operator(1)

    def level_dependent(X, basis):
        X = np.atleast_2d(X)
        out = 0.5 * X
        top = basis.prefix_dim(basis.level - 1)
        out[:, top:] = 3.0 * X[:, top:]
        return out

    f = LocalMapSpec(op, level_dependent, RegionSpec.ball(1.0), name="level dependent")
    with pytest.raises(StabilizationFailure):
        deg_infinite(f)


# ---------------------------------------------------------------------------
# Domain independence


def test_restriction_same_region():
    f = half_shift_map()
    assert restriction_consistency(f, f.region, f.region)


def test_restriction_nested_radii():
    f = half_shift_map()
    assert restriction_consistency(f, RegionSpec.ball(1.0), RegionSpec.ball(2.0))


def test_restriction_overlapping_corollary():
    f = half_shift_map()
    u = RegionSpec.ball(0.8, center=(0.15, 0.0))
    v = RegionSpec.ball(0.8, center=(-0.15, 0.0))
    both = RegionSpec((u.balls[0], v.balls[0]), mode="intersection")
    r_u = deg_infinite(f.with_region(u))
    r_v = deg_infinite(f.with_region(v))
    r_i = deg_infinite(f.with_region(both))
    assert r_u.value == r_v.value == r_i.value == ONE


def test_additivity_over_disjoint_balls():
    inst = next(i for i in corpus_local_maps() if i.name == "abstract-a")
    f = inst.build()
    well = BallSpec(0.3, (0.5, 0.0), 0)
    other = BallSpec(0.3, (-0.5, 0.0), 0)
    origin = BallSpec(0.3, (0.0, 0.0), 0)
    single = deg_infinite(f.with_region(RegionSpec((well,))))
    both = deg_infinite(f.with_region(RegionSpec((well, other))))
    at_zero = deg_infinite(f.with_region(RegionSpec((origin,))))
    assert both.value == 2 * single.value
    assert both.value + at_zero.value == deg_infinite(f).value


# ---------------------------------------------------------------------------
# Products on operator direct sums


def test_product_property_on_direct_sums():
    insts = {i.name: i for i in corpus_local_maps()}
    f = insts["loop2-quadratic-mixed"].build()
    g = insts["abstract-b"].build()
    fg = direct_sum_local_maps(f, g)
    rf, rg, rfg = deg_infinite(f), deg_infinite(g), deg_infinite(fg)
    assert rfg.value == rf.value * rg.value
    assert rfg.value == ONE - e(1) - e(2)


# ---------------------------------------------------------------------------
# Otopies


def test_otopy_constant_path():
    path = OtopyPath.uniform(lambda t: half_shift_map(), steps=4)
    results = deg_along_otopy(path)
    assert len(results) == 5
    assert all(r.value == ONE for r in results)


def test_otopy_between_equal_negative_parts():
    # interpolate the shift between 0.4 and 0.6: no eigenvalue of A crosses
    def family(t):
        return LocalMapSpec(
            loop_operator(1),
            scalar_nonlinearity(0.4 + 0.2 * t),
            RegionSpec.ball(1.0),
            name=f"shift {0.4 + 0.2 * t:.2f}",
        )

    results = deg_along_otopy(OtopyPath.uniform(family, steps=10))
    assert all(r.value == results[0].value for r in results)


def test_otopy_crossing_raises_slice_failure():
    # the path passes t=1 where A - t id has the mode-1 eigenspace as kernel
    def family(u):
        t = 0.5 + u
        return LocalMapSpec(
            loop_operator(1),
            scalar_nonlinearity(t),
            RegionSpec.ball(1.0),
            name=f"shift {t:.2f}",
        )

    with pytest.raises(SliceMarginFailure) as err:
        deg_along_otopy(OtopyPath.uniform(family, steps=10))
    assert abs(err.value.t - 0.5) < 1e-12  # the slice with shift exactly 1


# ---------------------------------------------------------------------------
# Results: limit classes and serialization


def test_limit_class_consistency_across_corpus():
    for inst in corpus_local_maps():
        res = deg_infinite(inst.build())
        assert res.limit_class_consistent()
        anchor = DirectLimitClass(0, res.value, ())
        assert limit_class_equal(anchor, res.limit_class)


def test_degree_result_json_round_trip():
    res = deg_infinite(half_shift_map())
    data = res.to_json()
    back = degree_result_from_json(data)
    assert back["value"] == res.value
    assert back["level"] == res.level
    assert back["stabilization"] == list(res.stabilization)
    assert back["limit_class"]["value"] == res.limit_class.value


def test_region_validation_rejects_center_off_fixed_space():
    op = loop_operator(1)
    basis = ShellBasis(op, 1)
    bad = RegionSpec.ball(1.0, center=(0.0, 0.0, 0.3, 0.0, 0.0, 0.0), center_level=1)
    f = LocalMapSpec(op, zero_nonlinearity, bad, name="bad center")
    with pytest.raises(ValueError):
        deg_infinite(f)


def test_potential_nonlinearity_requires_enough_coordinates():
    # the potential touches 8 coordinates; V_1 of the loop operator has 6,
    # so forcing level 1 must surface the coordinate shortfall
    op = loop_operator(1)
    poly = Polynomial.from_terms(8, [((2,) + (0,) * 7, 1.0)])
    f = LocalMapSpec(op, potential_nonlinearity(poly), RegionSpec.ball(1.0), name="wide")
    with pytest.raises(ValueError):
        deg_infinite(f, level=1)
