"""Property suites over random exact inputs."""

import itertools
from fractions import Fraction as Fr

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import corpus_case
from kstab import build_blowup_plane, build_blowup_quadric, decompose, sweep, volume
from kstab.exact import Poly, is_negative_definite, poly_integrate, poly_interpolate, solve_linear
from kstab.picard import pair
from kstab.threefold import triple

small = st.fractions(min_value=-6, max_value=6, max_denominator=12)
positive = st.fractions(min_value=Fr(1, 12), max_value=6, max_denominator=12)
polys = st.lists(small, min_size=0, max_size=5).map(lambda cs: Poly(tuple(cs)))

MODELS = {
    "plane1": build_blowup_plane(1),
    "plane3": build_blowup_plane(3),
    "plane4": build_blowup_plane(4),
    "plane5": build_blowup_plane(5),
    "quadric0": build_blowup_quadric(0),
    "quadric2": build_blowup_quadric(2),
    "quadric3": build_blowup_quadric(3),
    "quadric4": build_blowup_quadric(4),
}
SMALL_MODELS = {k: m for k, m in MODELS.items() if len(m.negative_curves) <= 16}


def divisors(model):
    """Random classes near a multiple of -K, so that many are big."""
    n = len(model.basis)
    K = model.anticanonical.coeffs
    return st.tuples(positive, st.lists(small, min_size=n, max_size=n)).map(
        lambda tv: model.basis.vector([tv[0] * k + x / 2 for k, x in zip(K, tv[1])])
    )


model_and_divisor = st.sampled_from(sorted(MODELS)).flatmap(lambda k: st.tuples(st.just(MODELS[k]), divisors(MODELS[k])))


# --- exact -----------------------------------------------------------------


@given(polys, small, small, small)
def test_integral_additivity(p, x, y, z):
    a, b, c = sorted((x, y, z))
    assert poly_integrate(p, a, c) == poly_integrate(p, a, b) + poly_integrate(p, b, c)


@given(st.lists(small, min_size=1, max_size=4), st.lists(small, min_size=4, max_size=4, unique=True))
def test_interpolation_inverts_sampling(coeffs, xs):
    p = Poly(tuple(coeffs))
    d = len(coeffs) - 1
    pts = [(x, p(x)) for x in xs[: d + 1]]
    assert poly_interpolate(pts, d) == p


@given(st.integers(-50, 50), st.integers(1, 50), st.integers(-50, 50), st.integers(1, 50))
def test_sum_matches_integer_formula(a, b, c, d):
    s = Fr(a, b) + Fr(c, d)
    assert s == Fr(a * d + c * b, b * d)
    assert s * b * d == a * d + c * b


# --- picard ----------------------------------------------------------------


@given(st.data())
def test_pair_symmetric_bilinear(data):
    m = MODELS["plane5"]
    D, C, E = (data.draw(divisors(m)) for _ in range(3))
    s = data.draw(small)
    assert pair(m.form, D, C) == pair(m.form, C, D)
    assert pair(m.form, D * s + E, C) == s * pair(m.form, D, C) + pair(m.form, E, C)
    assert pair(m.form, D, m.basis.zero()) == 0


# --- zariski ---------------------------------------------------------------


@settings(max_examples=100, deadline=None)
@given(model_and_divisor, positive)
def test_volume_homogeneity(md, t):
    m, D = md
    assert volume(m, D * t) == t**2 * volume(m, D)


@settings(max_examples=100, deadline=None)
@given(model_and_divisor)
def test_zariski_contract(md):
    m, D = md
    if volume(m, D) == 0:
        return
    dec = decompose(m, D)
    P = dec.positive
    assert P + dec.negative == D
    support = [c for c, _ in dec.negative_support]
    assert all(a > 0 for _, a in dec.negative_support)
    assert all(pair(m.form, P, c) == 0 for c in support)
    assert all(pair(m.form, P, c) >= 0 for c in m.mori_generators)
    assert pair(m.form, P, m.anticanonical) >= 0
    assert is_negative_definite([[pair(m.form, a, b) for b in support] for a in support])
    assert dec.volume == pair(m.form, P, P)
    # idempotent on the positive part
    again = decompose(m, P)
    assert again.negative_support == () and again.positive == P


@settings(max_examples=60, deadline=None)
@given(model_and_divisor)
def test_nef_divisor_volume_is_square(md):
    m, D = md
    if all(pair(m.form, D, c) >= 0 for c in m.mori_generators) and pair(m.form, D, m.anticanonical) >= 0:
        assert volume(m, D) == pair(m.form, D, D)


_SUBSETS = {}


def _definite_subsets(m):
    """Every curve subset with negative definite Gram, with that Gram's inverse."""
    if id(m) in _SUBSETS:
        return _SUBSETS[id(m)]
    curves, form = m.negative_curves, m.form
    out = []

    def grow(S, start):
        if S:
            g = [[pair(form, curves[i], curves[j]) for j in S] for i in S]
            cols = [solve_linear(g, [Fr(int(r == c)) for r in range(len(S))]) for c in range(len(S))]
            out.append((tuple(S), [[cols[c][r] for c in range(len(S))] for r in range(len(S))]))
        for j in range(start, len(curves)):
            T = S + [j]
            if is_negative_definite([[pair(form, curves[x], curves[y]) for y in T] for x in T]):
                grow(T, j + 1)

    grow([], 0)
    _SUBSETS[id(m)] = out
    return out


def _brute_volume(m, D):
    """Best P^2 over negative definite supports whose solved P is nef with N >= 0."""
    curves, form = m.negative_curves, m.form
    tests = m.mori_generators + (m.anticanonical,)
    best, found = Fr(0), False
    b = [pair(form, D, c) for c in curves]
    for S, inv in [((), [])] + _definite_subsets(m):
        a = [sum(row[k] * b[i] for k, i in enumerate(S)) for row in inv]
        if any(x < 0 for x in a):
            continue
        P = D - sum((curves[i] * x for i, x in zip(S, a)), m.basis.zero())
        if all(pair(form, P, c) >= 0 for c in tests):
            found = True
            best = max(best, pair(form, P, P))
    return best if found else Fr(0)


@pytest.mark.parametrize("name", sorted(SMALL_MODELS))
def test_brute_force_volume_oracle(name):
    m = SMALL_MODELS[name]
    strategy = divisors(m)
    seen = []

    @settings(max_examples=50, deadline=None, database=None)
    @given(strategy)
    def check(D):
        seen.append(D)
        assert volume(m, D) == _brute_volume(m, D)

    check()
    assert len(seen) >= 50


@settings(max_examples=40, deadline=None)
@given(st.data())
def test_sweep_continuity_and_monotonicity(data):
    name = data.draw(st.sampled_from(sorted(MODELS)))
    m = MODELS[name]
    D = data.draw(divisors(m))
    if volume(m, D) == 0:
        return
    Z = data.draw(st.sampled_from(m.mori_generators))
    sw = sweep(m, D, Z)
    assert sw.chambers
    assert sw.chambers[0].vol(0) == volume(m, D)
    for left, right in zip(sw.chambers, sw.chambers[1:]):
        assert left.vol(left.upper) == right.vol(right.lower)
    for ch in sw.chambers:
        assert ch.vol.derivative().max_on(ch.lower, ch.upper) <= 0
        mid = (ch.lower + ch.upper) / 2
        assert ch.vol(mid) == volume(m, D - Z * mid)
    assert sw(sw.effective_threshold) == 0


# --- threefold -------------------------------------------------------------


RING = corpus_case("II.1c.F.s_divisor").ring


@given(*(st.lists(small, min_size=4, max_size=4) for _ in range(3)))
def test_triple_permutation_invariance(a, b, c):
    classes = [RING.basis.vector(x) for x in (a, b, c)]
    values = {triple(RING, *p) for p in itertools.permutations(classes)}
    assert len(values) == 1
