import random
from fractions import Fraction

import pytest
from hypothesis import HealthCheck, assume, given, settings
from hypothesis import strategies as st

from mixedsurf.cover import InadmissibleSignature, Signature, hurwitz_genus
from mixedsurf.divisors import orbit_divisors
from mixedsurf.mixed import max_exceptional_bound, surface_invariants

from fuzz import cover_for, odd_permutation_datum, random_perm_group

seeds = st.integers(min_value=0, max_value=2**32 - 1)
slow = settings(max_examples=60, deadline=None, suppress_health_check=[HealthCheck.filter_too_much])


def _group(seed):
    G = random_perm_group(random.Random(seed))
    assume(G is not None)
    return G


@slow
@given(seeds)
def test_double_count_identity(seed):
    H = _group(seed)
    cover = cover_for(H)
    lhs = sum(cover.fixed_point_table[1:])
    rhs = sum(Fraction(H.order, m) * (m - 1) for m in cover.vector.signature.periods)
    assert lhs == rhs


@slow
@given(seeds, st.data())
def test_counts_are_class_functions(seed, data):
    H = _group(seed)
    fix = cover_for(H).fixed_point_table
    f = data.draw(st.integers(1, H.order - 1)) if H.order > 1 else 0
    assume(f != 0)
    assert fix[f] == fix[H.inv[f]]
    for g in H.elements:
        assert fix[H.conjugate(f, g)] == fix[f]


@slow
@given(seeds)
def test_fixed_points_only_on_stabilizers(seed):
    H = _group(seed)
    cover = cover_for(H)
    sigma = cover.stabilizers
    assert all((cover.fixed_point_table[f] > 0) == (f in sigma) for f in range(1, H.order))


@given(
    st.integers(1, 200),
    st.integers(0, 3),
    st.lists(st.integers(2, 12), max_size=6),
)
def test_hurwitz_integrality(order, g_prime, periods):
    sig = Signature(g_prime, tuple(periods))
    two_g = order * (2 * g_prime - 2 + sum((Fraction(m - 1, m) for m in periods), Fraction(0))) + 2
    if two_g.denominator != 1 or two_g % 2 or two_g < 0:
        with pytest.raises(InadmissibleSignature):
            hurwitz_genus(order, sig)
    else:
        assert 2 * hurwitz_genus(order, sig) == two_g


@settings(max_examples=40, deadline=None, suppress_health_check=[HealthCheck.filter_too_much])
@given(seeds)
def test_mixed_invariants_and_orbits(seed):
    G = _group(seed)
    d = odd_permutation_datum(G)
    assume(d is not None)
    inv = surface_invariants(d)  # raises on any non-integral chi or branch genus
    assert inv.K2 == 8 * inv.chi - inv.pa_B_minus_1
    ds = orbit_divisors(d)
    seen = sorted(x for D in ds for x in D.orbit)
    assert seen == list(d.G0.elements)  # orbits partition G0
    assert sum(D.is_branch for D in ds) == len(inv.branch)
    for D in ds:
        assert D.pa >= 0 and D.pa == 1 + (D.D2 + D.KD) // 2
    if 1 <= inv.K2 <= 8:
        assert sum(D.is_exceptional for D in ds if not D.is_branch) <= max_exceptional_bound(inv.K2)
