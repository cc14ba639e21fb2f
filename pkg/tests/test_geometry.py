from fractions import Fraction
from itertools import combinations

import pytest

from app.config import settings
from app.services.geometry import (
    Vertex,
    ball,
    centers,
    coset_path,
    distance,
    distance_cache_info,
    finite_subgroups,
    geodesic,
    geodesic_report,
    is_simplex,
    morse_order,
    orbit_radii,
    orientation_profile,
    parse_vertex,
    quotient_order,
    reverse_geodesic_check,
    tameness_probe,
    torsion_exponent,
    translate,
    translation_length,
    word_length_bound,
)
from app.services.words import GroupElement, format_element, parse_element, power
from app.utils import GermMismatch


def v(germ, text):
    return parse_vertex(germ, text)


def test_vertices_forget_delta_powers(a2):
    assert v(a2, "s@3") == v(a2, "s")
    assert v(a2, "s.t.s") == Vertex.base(a2)
    assert str(Vertex.base(a2)) == "1"
    assert str(v(a2, "s.t@-1")) == "st"


def test_distance_examples(a2):
    one = Vertex.base(a2)

    assert distance(one, v(a2, "s.s")) == 2
    assert distance(one, v(a2, "s")) == 1
    assert distance(v(a2, "s"), one) == 2
    assert distance(v(a2, "s"), v(a2, "t")) == 3
    assert distance(one, one) == 0


def test_geodesic_labels_and_path(a2):
    s = v(a2, "s")
    one = Vertex.base(a2)

    assert [a2.names[x] for x in geodesic(s, one)] == ["ts"]
    assert [str(x) for x in coset_path(s, v(a2, "t"))] == ["s", "1", "t"]
    assert reverse_geodesic_check(s, v(a2, "t"))


def test_orientation_profile(a2):
    one = Vertex.base(a2)

    assert orientation_profile(v(a2, "s"), v(a2, "t")) == ["down", "up"]
    assert orientation_profile(one, v(a2, "s.s")) == ["up", "up"]
    assert orientation_profile(v(a2, "s"), one) == ["down"]


def test_geodesic_report(a2):
    report = geodesic_report(v(a2, "s"), v(a2, "t"))

    assert report.distance == 3
    assert report.labels == ["ts", "s"]
    assert report.path == ["s", "1", "t"]
    assert report.profile == ["down", "up"]
    assert geodesic_report(v(a2, "s"), v(a2, "t"), with_profile=False).profile is None


def test_balls(a2):
    assert [str(x) for x in ball(Vertex.base(a2), 1)] == ["1", "s", "t"]
    assert len(ball(v(a2, "s.t"), 1)) == 3
    assert [str(x) for x in ball(Vertex.base(a2), 2)] == ["1", "s", "st", "t", "ts", "s.s", "t.t"]
    with pytest.raises(ValueError):
        ball(Vertex.base(a2), -1)


def test_translation_preserves_distance(a2):
    g = parse_element(a2, "t.s@-1")
    x, y = v(a2, "s.s"), v(a2, "t")

    assert distance(translate(g, x), translate(g, y)) == distance(x, y)


def test_simplices(a2):
    one = Vertex.base(a2)

    assert is_simplex([one, v(a2, "s"), v(a2, "st")])
    assert not is_simplex([one, v(a2, "s"), v(a2, "t")])
    assert is_simplex([one])


def test_center_of_a_single_vertex(a2):
    report = centers([v(a2, "s.t")])

    assert report.radius == 0
    assert report.centers == ["st"]


def test_centers_of_a_pair(a2):
    report = centers([Vertex.base(a2), v(a2, "s.s")])

    assert report.search_radius == 4
    assert report.radius == 2
    assert report.centers == ["s", "s.s"]


def test_centers_rejects_empty_and_mixed_sets(a2, dual_a2):
    with pytest.raises(ValueError):
        centers([])
    with pytest.raises(GermMismatch):
        centers([Vertex.base(a2), Vertex.base(dual_a2)])


def test_morse_order(a2):
    order = [(str(x), value) for x, value in morse_order(a2, 1)]

    assert order == [("1", 0), ("s", 1), ("t", 1)]


def test_a2_finite_subgroups(a2):
    table = finite_subgroups(a2)
    orders = {r.generator: r.order for r in table.records}

    assert table.sigma_order == 2
    assert orders == {"@1": 2, "s@1": 3}
    assert table.torsion_exponent == torsion_exponent(a2) == 6


def test_subgroup_generators_are_roots_of_delta_powers(a2, dual_a3):
    for germ in (a2, dual_a3):
        for record in finite_subgroups(germ).records:
            if record.type != 1:
                continue
            g = parse_element(germ, record.generator)
            assert format_element(power(g, record.t)) == f"@{record.t * record.j + 1}"


def test_quotient_order(a2):
    assert quotient_order(parse_element(a2, "s@1"), 64).order == 3
    assert quotient_order(parse_element(a2, "@1"), 64).order == 2
    assert quotient_order(parse_element(a2, "s"), 16).order is None


def test_tameness_probe(a2):
    report = tameness_probe(a2, 4)

    assert [s.norm for s in report.samples] == [3, 6, 9, 12]
    assert report.constant == "3"
    with pytest.raises(ValueError):
        tameness_probe(a2, 0)


def test_translation_length(a2):
    assert translation_length(GroupElement.delta_power(a2, 1), 5).estimate == "1"
    assert translation_length(GroupElement.identity(a2), 5).estimate == "0"

    estimate = translation_length(parse_element(a2, "s@1"), 6)
    assert estimate.estimate == "4/3"
    assert estimate.minimizing_n == 3
    assert estimate.word_lengths[:3] == [2, 3, 4]


def test_translation_estimates_do_not_increase(a2):
    g = parse_element(a2, "s.t.t@-1")
    values = [Fraction(translation_length(g, n).estimate) for n in range(1, 7)]

    assert values == sorted(values, reverse=True)


def test_translation_lower_bound(a2):
    s = parse_element(a2, "s")

    assert translation_length(s, 3, tameness_constant=Fraction(3)).lower_bound == "1/9"
    assert translation_length(GroupElement.identity(a2), 3, Fraction(3)).lower_bound is None
    assert word_length_bound(s, Fraction(3))


def test_orbit_radii(a2):
    assert orbit_radii(parse_element(a2, "s"), 3).radii == [0, 1, 2]


def exhaustive_centers(T):
    r0 = max(distance(t, T[0]) for t in T)
    radii = {x: max(distance(t, x) for t in T) for x in ball(T[0], r0)}
    radius = min(radii.values())
    return radius, sorted(str(x) for x, r in radii.items() if r == radius)


@pytest.mark.parametrize("name", ["a2", "dual_a2"])
def test_center_search_matches_the_whole_ball(request, name):
    germ = request.getfixturevalue(name)
    region = ball(Vertex.base(germ), 2)

    for T in combinations(region, 3):
        report = centers(list(T))
        assert (report.radius, sorted(report.centers)) == exhaustive_centers(list(T))


def test_distance_cache_is_bounded(a2):
    info = distance_cache_info(a2)
    assert info.maxsize == settings.GARSIDE_DISTANCE_CACHE_SIZE

    distance(v(a2, "s"), v(a2, "t.t"))
    distance(v(a2, "s"), v(a2, "t.t"))

    assert distance_cache_info(a2).hits >= info.hits + 1
