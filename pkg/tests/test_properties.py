"""Property tests over random symmetric roots, monotone roots and their sums."""

from fractions import Fraction

from hypothesis import HealthCheck, given, settings
from hypothesis import strategies as st

from rootforge.connected_sum import SumSpec, d_lower_bound, mixed_sum_invariants, sum_correction_terms
from rootforge.graded_root import (
    build_monotone,
    monotone_params,
    monotone_subroot,
    root_correction_terms,
)
from rootforge.iota_complex import (
    connected_sum_complex,
    dual,
    fu_homology,
    involutive_homology_via_root,
    involutive_invariants,
    mapping_cone,
    monotone_complex,
    standard_complex,
    verify_iota_complex,
    verify_local_map,
    witness_maps,
)
from strategies import monotone_params as monotone_strategy
from strategies import symmetric_roots

PROPERTY = settings(
    max_examples=200,
    derandomize=True,
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow, HealthCheck.data_too_large],
)

small_roots = symmetric_roots(max_stem=4, max_pairs=3, max_height=4)
small_monotone = monotone_strategy(max_n=2, bound=8)


def _dims_of_root(R, low):
    top = R.top_degree
    out = {}
    g = Fraction(top)
    while g >= low:
        out[g] = R.count_at(g)
        g -= 1
    return out


def _cone_dims(C, low, high):
    return fu_homology(mapping_cone(C).complex).per_degree(low, high)


@PROPERTY
@given(small_roots)
def test_standard_complex_is_iota_complex(R):
    C = standard_complex(R)
    assert verify_iota_complex(C).ok


@PROPERTY
@given(small_monotone, small_monotone, st.booleans())
def test_sum_dual_and_cone_are_complexes(P, Q, flip):
    A = monotone_complex(P)
    B = monotone_complex(Q)
    if flip:
        B = dual(B)
    C = connected_sum_complex(A, B)
    assert verify_iota_complex(C).ok
    assert verify_iota_complex(dual(C)).ok
    cone = mapping_cone(C).complex
    cone.check_square_zero()
    cone.check_homogeneous()


@PROPERTY
@given(small_roots)
def test_homology_matches_vertex_counts(R):
    low = R.degrees[R.bottom] - 4
    H = fu_homology(standard_complex(R))
    assert H.free_rank == 1
    assert H.per_degree(low, R.top_degree) == _dims_of_root(R, low)


@PROPERTY
@given(small_roots)
def test_complex_invariants_match_root(R):
    inv = involutive_invariants(standard_complex(R))
    d_upper, d_lower = root_correction_terms(R)
    assert inv.d == R.top_degree + 2
    assert inv.d_upper == d_upper
    assert inv.d_lower == d_lower


@PROPERTY
@given(small_roots)
def test_fast_path_matches_cone(R):
    C = standard_complex(R)
    fast = involutive_homology_via_root(R)
    cone = fu_homology(mapping_cone(C).complex)
    low = R.degrees[R.bottom] - 6
    high = R.top_degree + 1
    assert fast.module.per_degree(low, high) == cone.per_degree(low, high)
    diagram = fast.per_degree(low)
    assert diagram == cone.per_degree(low, max(diagram))
    assert fast.module.summands() == cone.summands()
    inv = involutive_invariants(C)
    assert (fast.d_lower, fast.d_upper) == (inv.d_lower, inv.d_upper)


@PROPERTY
@given(monotone_strategy(max_n=4, bound=12))
def test_monotone_round_trip(P):
    assert monotone_subroot(build_monotone(P)) == P


@PROPERTY
@given(small_roots)
def test_witness_maps_are_local(R):
    P, f, g = witness_maps(R)
    assert verify_local_map(f)
    assert verify_local_map(g)
    assert involutive_invariants(monotone_complex(P)).as_tuple() == involutive_invariants(
        standard_complex(R)
    ).as_tuple()


@PROPERTY
@given(small_roots)
def test_duality(R):
    C = standard_complex(R)
    inv = involutive_invariants(C)
    dinv = involutive_invariants(dual(C))
    assert dinv.d == -inv.d
    assert dinv.d_upper == -inv.d_lower
    assert dinv.d_lower == -inv.d_upper


@PROPERTY
@given(small_monotone, small_monotone, st.booleans())
def test_d_additive(P, Q, flip):
    A = monotone_complex(P)
    B = monotone_complex(Q)
    if flip:
        B = dual(B)
    total = involutive_invariants(connected_sum_complex(A, B))
    assert total.d == involutive_invariants(A).d + involutive_invariants(B).d


@PROPERTY
@given(small_monotone, small_monotone, st.booleans())
def test_ordering_and_parity(P, Q, flip):
    A = monotone_complex(P)
    B = monotone_complex(Q)
    if flip:
        B = dual(B)
    for C in (A, connected_sum_complex(A, B)):
        inv = involutive_invariants(C)
        assert inv.d_lower <= inv.d <= inv.d_upper
        assert (inv.d - inv.d_lower) % 2 == 0
        assert (inv.d_upper - inv.d) % 2 == 0


@PROPERTY
@given(st.lists(monotone_strategy(max_n=3, bound=12), min_size=1, max_size=3))
def test_formula_matches_engine(family):
    spec = SumSpec.of(*family)
    assert sum_correction_terms(spec) == mixed_sum_invariants(spec)


@PROPERTY
@given(st.lists(monotone_strategy(max_n=3, bound=12), min_size=1, max_size=4), st.data())
def test_d_lower_bound(family, data):
    last = data.draw(st.integers(0, len(family) - 1))
    inv = sum_correction_terms(SumSpec.of(*family))
    assert inv.d_lower <= d_lower_bound(family, last)
    ps = [monotone_params(P) for P in family]
    best = max(range(len(ps)), key=lambda i: ps[i].delta_tilde[-1])
    if all(p.projective for p in ps) and ps[last].delta_tilde[-1] == ps[best].delta_tilde[-1]:
        assert inv.d_lower == d_lower_bound(family, last)
