import itertools

import pytest

from kstab import build_blowup_plane, build_blowup_quadric, enumerate_negative_curves
from kstab.errors import KStabError
from kstab.picard import Basis, IntersectionForm, pair


@pytest.mark.parametrize(
    "builder, arg, degree, count",
    [
        (build_blowup_plane, 1, 8, 1),
        (build_blowup_plane, 2, 7, 3),
        (build_blowup_plane, 3, 6, 6),
        (build_blowup_plane, 4, 5, 10),
        (build_blowup_plane, 5, 4, 16),
        (build_blowup_plane, 6, 3, 27),
        (build_blowup_plane, 7, 2, 56),
        (build_blowup_quadric, 2, 6, 6),
        (build_blowup_quadric, 3, 5, 10),
        (build_blowup_quadric, 4, 4, 16),
        (build_blowup_quadric, 6, 2, 56),
    ],
)
def test_curve_counts(builder, arg, degree, count):
    S = builder(arg)
    assert S.degree == degree
    assert len(S.negative_curves) == count
    assert len(set(S.negative_curves)) == count


def test_curves_are_minus_one_curves():
    S = build_blowup_plane(6)
    for c in S.negative_curves:
        assert S.pair(c, c) == -1
        assert S.pair(S.canonical, c) == -1


def test_cubic_surface_contains_conics_q():
    S = build_blowup_plane(6)
    for i in range(1, 7):
        q = S.parse("2l - e1 - e2 - e3 - e4 - e5 - e6") + S.basis.unit(f"e{i}")
        assert q in S.negative_curves


def test_degree_six_quadric_list():
    S = build_blowup_quadric(2)
    want = {S.parse(t) for t in ("e1", "e2", "l1 - e1", "l1 - e2", "l2 - e1", "l2 - e2")}
    assert set(S.negative_curves) == want


@pytest.mark.parametrize("builder, arg", [(build_blowup_plane, 5), (build_blowup_quadric, 4), (build_blowup_plane, 6)])
def test_mutual_pairings(builder, arg):
    S = builder(arg)
    for a, b in itertools.combinations(S.negative_curves, 2):
        assert S.pair(a, b) >= 0
    for c in S.negative_curves:
        assert S.pair(S.anticanonical, c) >= 0


def test_enumeration_independent_of_ordering():
    S = build_blowup_plane(5)
    perm = ("l", "e3", "e1", "e5", "e2", "e4")
    b = Basis(perm)
    n = len(perm)
    gram = [[0] * n for _ in range(n)]
    gram[0][0] = 1
    for i in range(1, n):
        gram[i][i] = -1
    form = IntersectionForm(b, gram)
    K = b.parse("-3l + e1 + e2 + e3 + e4 + e5")
    relabelled = {str(c) for c in enumerate_negative_curves(form, K)}
    original = {str(c) for c in S.negative_curves}
    norm = lambda s: " ".join(sorted(s.replace("- ", "-").replace("+ ", "").split()))
    assert {norm(s) for s in relabelled} == {norm(s) for s in original}


def test_out_of_range():
    for bad in (0, 8):
        with pytest.raises(KStabError) as e:
            build_blowup_plane(bad)
        assert e.value.code == "unsupported-model"
    with pytest.raises(KStabError):
        build_blowup_quadric(7)


def test_non_del_pezzo_lattice_rejected():
    b = Basis(("a", "b"))
    form = IntersectionForm(b, [[1, 0], [0, 1]])
    with pytest.raises(KStabError) as e:
        enumerate_negative_curves(form, b.parse("-a"))
    assert e.value.code == "unsupported-model"


def test_degree_eight_extra_generators():
    S = build_blowup_plane(1)
    assert S.extra_generators == (S.parse("l - e1"),)
    Q = build_blowup_quadric(0)
    assert set(Q.extra_generators) == {Q.parse("l1"), Q.parse("l2")}
    assert pair(Q.form, Q.canonical, Q.canonical) == 8
