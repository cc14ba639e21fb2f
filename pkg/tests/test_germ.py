import pytest

from app.models.germFile import GermFile, ViolationKind
from app.services.germ import IDENTITY, Side, _parse_table, _sigma_powers, check_germ, validate
from app.utils import GermValidationError, NotADivisor, ParseError, UnknownSimple


A2_PRODUCTS = [
    ["s", "t", "st"],
    ["t", "s", "ts"],
    ["s", "ts", "sts"],
    ["t", "st", "sts"],
    ["st", "s", "sts"],
    ["ts", "t", "sts"],
]


def a2_file(**overrides) -> GermFile:
    data = {
        "name": "hand A2",
        "simples": ["1", "s", "t", "st", "ts", "sts"],
        "delta": "sts",
        "atoms": ["s", "t"],
        "product": A2_PRODUCTS,
    }
    data.update(overrides)
    return GermFile(**data)


def kinds(violations):
    return {v.kind for v in violations}


def test_hand_written_a2_validates():
    germ = validate(a2_file())

    assert germ.size == 6
    assert germ.delta_norm == 3
    assert germ.m == 2
    assert sorted(germ.names[a] for a in germ.atoms()) == ["s", "t"]


def test_built_a2_matches_hand_written(a2):
    assert a2 == validate(a2_file())
    assert a2.summary()["simples"] == 6


def test_divisibility_meet_and_join(a2):
    s, t, st, ts, sts = (a2.id_of(x) for x in ("s", "t", "st", "ts", "sts"))

    assert a2.left_divides(s, st)
    assert not a2.left_divides(t, st)
    assert a2.right_divides(t, st)
    assert a2.meet(st, ts) == IDENTITY
    assert a2.meet(st, sts) == st
    assert a2.join(s, t) == sts
    assert a2.join(s, st, Side.left) == st
    assert a2.meet(st, ts, Side.right) == IDENTITY
    assert a2.divisors(sts) == list(range(6))


def test_quotients(a2):
    s, st, sts, ts = (a2.id_of(x) for x in ("s", "st", "sts", "ts"))

    assert a2.left_quotient(s, sts) == ts
    assert a2.right_quotient(s, sts) == st
    with pytest.raises(NotADivisor):
        a2.left_quotient(a2.id_of("t"), st)


def test_complements_and_sigma(a2):
    s, t, st, ts = (a2.id_of(x) for x in ("s", "t", "st", "ts"))

    assert a2.right_complement(s) == ts
    assert a2.left_complement(s) == st
    assert a2.right_complement(a2.delta) == IDENTITY
    assert a2.sigma(s) == t
    assert a2.sigma(st) == ts
    assert a2.sigma(s, 2) == s
    assert a2.sigma(s, -1) == t


def test_sigma_of_classical_generators_are_atoms(a3):
    for a in a3.atoms():
        assert a3.is_atom(a3.sigma(a))


def test_renorm_rewrites_to_greedy(a2):
    s, t, st = (a2.id_of(x) for x in ("s", "t", "st"))

    assert a2.renorm(s, t) == (st, IDENTITY)
    assert a2.renorm(s, s) == (s, s)
    assert a2.is_greedy(s, s)
    assert not a2.is_greedy(s, t)
    assert a2.right_renorm(s, t) == (IDENTITY, st)


def test_norms(a2, dual_a3):
    assert a2.simple_norm(a2.id_of("st")) == 2
    assert a2.simple_norm(IDENTITY) == 0
    assert dual_a3.delta_norm == 3


def test_unknown_simple(a2):
    with pytest.raises(UnknownSimple):
        a2.id_of("u")


def test_missing_identity_is_reported():
    germ, violations = check_germ(a2_file(simples=["s", "t", "st", "ts", "sts"]))

    assert germ is None
    assert kinds(violations) == {ViolationKind.missing_identity}


def test_cancellation_violation_has_witness():
    raw = GermFile(
        name="cancel",
        simples=["1", "a", "b", "c"],
        delta="c",
        product=[["a", "a", "c"], ["a", "b", "c"]],
    )
    germ, violations = check_germ(raw)

    assert germ is None
    cancellation = [v for v in violations if v.kind == ViolationKind.cancellation]
    assert cancellation
    assert set(cancellation[0].witness[:3]) >= {"a", "b"}


def test_divisor_mismatch_when_delta_is_not_a_common_multiple():
    raw = GermFile(name="small", simples=["1", "a", "b"], delta="a", product=[])
    _, violations = check_germ(raw)

    assert ViolationKind.divisor_mismatch in kinds(violations)


def test_atom_mismatch():
    _, violations = check_germ(a2_file(atoms=["s"]))

    assert kinds(violations) == {ViolationKind.atom_mismatch}
    assert violations[0].witness == ["t"]


def test_associativity_violation():
    products = [p for p in A2_PRODUCTS if p != ["st", "s", "sts"]]
    _, violations = check_germ(a2_file(product=products))

    assert ViolationKind.associativity in kinds(violations)


def test_validate_raises_with_every_violation():
    with pytest.raises(GermValidationError) as excinfo:
        validate(a2_file(atoms=["s"], simples=["1", "s", "t", "st", "ts", "sts"]))

    assert excinfo.value.exit_code == 1
    assert excinfo.value.witness[0]["kind"] == "AtomMismatch"


@pytest.mark.parametrize(
    "overrides",
    [
        {"simples": ["1", "s", "s", "t", "st", "ts", "sts"]},
        {"delta": "Δ"},
        {"product": A2_PRODUCTS + [["s", "t", "ts"]]},
        {"product": A2_PRODUCTS + [["1", "s", "t"]]},
    ],
)
def test_malformed_tables_raise_parse_error(overrides):
    with pytest.raises(ParseError):
        check_germ(a2_file(**overrides))


def test_germ_file_export_is_name_sorted(a2):
    exported = a2.to_germ_file()

    assert exported.simples == sorted(exported.simples)
    assert exported.product == sorted(exported.product)
    assert validate(exported) == a2


def test_germs_with_different_products_differ(a2, dual_a2):
    assert a2 != dual_a2
    assert not a2.same_as(dual_a2)


def witnesses(violations, kind):
    return [v.witness for v in violations if v.kind == kind]


def test_redirected_product_breaks_associativity():
    products = [["s", "t", "ts"] if p == ["s", "t", "st"] else p for p in A2_PRODUCTS]
    germ, violations = check_germ(a2_file(product=products))

    assert germ is None
    assert ["s", "t", "t"] in witnesses(violations, ViolationKind.associativity)


def test_missing_delta_products_break_the_lattice():
    products = [p for p in A2_PRODUCTS if p[2] != "sts"]
    germ, violations = check_germ(a2_file(product=products, atoms=None))

    assert germ is None
    assert {ViolationKind.lattice, ViolationKind.divisor_mismatch} <= kinds(violations)
    assert ["s", "t", "left", "join"] in witnesses(violations, ViolationKind.lattice)


def test_mutual_divisors_are_not_a_partial_order():
    raw = GermFile(
        name="loop",
        simples=["1", "a", "b", "c"],
        delta="c",
        product=[["a", "c", "b"], ["b", "c", "a"]],
    )
    germ, violations = check_germ(raw)

    assert germ is None
    assert ["a", "b", "left"] in witnesses(violations, ViolationKind.partial_order)


def test_two_right_complements():
    germ, violations = check_germ(a2_file(product=A2_PRODUCTS + [["s", "s", "sts"]]))

    assert germ is None
    assert ["s", "s", "ts", "right"] in witnesses(violations, ViolationKind.complement)
    assert ViolationKind.cancellation in kinds(violations)


def test_sigma_must_respect_products():
    names, _, table = _parse_table(a2_file())
    s, t, st, ts = (names.index(x) for x in ("s", "t", "st", "ts"))
    # left complements in a 4-cycle, so σ = (s st)(t ts)
    cycle = list(range(len(names)))
    cycle[s], cycle[t], cycle[st], cycle[ts] = t, st, ts, s
    violations = []

    _sigma_powers(names, table, cycle, violations)

    assert kinds(violations) == {ViolationKind.sigma}
    assert violations[0].witness == ["s", "t"]


def test_sigma_must_be_a_bijection():
    names, _, table = _parse_table(a2_file())
    violations = []

    _sigma_powers(names, table, [IDENTITY] * len(names), violations)

    assert [v.kind for v in violations] == [ViolationKind.sigma]
    assert violations[0].message == "σ is not a bijection"
