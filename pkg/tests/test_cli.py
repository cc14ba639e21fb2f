import io
import json

import pytest

import app.main as cli
from app.main import build_parser, run


def call(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = run(list(argv), stdout=out, stderr=err)
    return code, out.getvalue(), err.getvalue()


@pytest.fixture(scope="module")
def a2_path(tmp_path_factory):
    path = tmp_path_factory.mktemp("germs") / "a2.json"
    code, out, _ = call("build", "classical", "A", "2", "-o", str(path))
    assert code == 0
    assert out.startswith("wrote classical A2 (6 simples)")
    return str(path)


def lines(text):
    return text.splitlines()


def test_info():
    code, out, _ = call("--json", "info")

    assert code == 0
    assert json.loads(out)["builders"] == ["classical", "dual"]


def test_build_to_stdout_is_the_canonical_file(fixtures_dir):
    code, out, _ = call("build", "dual", "A", "2")

    assert code == 0
    assert out == (fixtures_dir / "dual_a2.json").read_text(encoding="utf-8")


def test_homology(a2_path):
    code, out, _ = call("homology", a2_path)

    assert code == 0
    assert lines(out) == ["H_0 = Z", "H_1 = Z", "H_2 = 0", "H_3 = 0"]


def test_cells(a2_path):
    _, out, _ = call("cells", a2_path)

    assert lines(out) == ["C_0: 1", "C_1: 5", "C_2: 6", "C_3: 2", "euler characteristic: 0"]


def test_normal_forms(a2_path):
    assert call("nf", a2_path, "s.t.s")[1] == "@1\n"
    assert call("nf", a2_path, "")[1] == "\n"
    assert call("dnf", a2_path, "s.t@-2")[1] == "st@-2\n"
    assert call("inv", a2_path, "s.t")[1] == "s@-1\n"
    assert call("mult", a2_path, "s", "t.s")[1] == "@1\n"
    assert call("eq", a2_path, "s.t.s", "t.s.t")[1] == "true\n"
    assert call("gcd", a2_path, "s.t", "s.s")[1] == "s\n"
    assert call("norm", a2_path, "@2")[1] == "6\n"


def test_json_output_in_either_position(a2_path):
    for argv in (("--json", "dnf", a2_path, "s.t.s"), ("dnf", "--json", a2_path, "s.t.s")):
        code, out, _ = call(*argv)
        payload = json.loads(out)
        assert code == 0
        assert payload["result"] == "@1"
        assert payload["exp"] == 1


def test_geodesic(a2_path):
    _, out, _ = call("geodesic", a2_path, "s", "t")

    assert lines(out) == ["distance: 3", "labels: ts s", "path: s -> 1 -> t", "profile: down up"]
    assert call("distance", a2_path, "s", "")[1] == "2\n"


def test_centers_and_subgroups(a2_path):
    _, out, _ = call("centers", a2_path, "", "s.s")
    assert lines(out) == ["radius: 2", "centers: s, s.s"]

    _, out, _ = call("subgroups", a2_path)
    assert lines(out)[-1] == "torsion exponent: 6"

    assert call("quotient-order", a2_path, "s@1")[1] == "3\n"


def test_tameness_and_translation(a2_path):
    _, out, _ = call("tameness", a2_path, "-n", "3")
    assert lines(out) == ["||Δ^1|| = 3", "||Δ^2|| = 6", "||Δ^3|| = 9", "c_3 = 3"]

    _, out, _ = call("translation-length", a2_path, "s@1", "-n", "6", "--tameness-n", "2")
    assert lines(out) == ["τ ≤ 4/3 (n = 3)", "τ ≥ 1/9"]


def test_duality_check(fixtures_dir):
    code, out, _ = call("duality-check", str(fixtures_dir / "dual_a2.json"))

    assert code == 0
    assert lines(out)[0] == "duality group: yes (n = 2)"


def test_validate(fixtures_dir):
    code, out, _ = call("validate", str(fixtures_dir / "a2.yaml"))
    assert code == 0
    assert lines(out)[0] == "valid: classical A2"

    code, out, _ = call("--json", "validate", str(fixtures_dir / "a2_missing_identity.json"))
    report = json.loads(out)
    assert code == 1
    assert not report["valid"]
    assert report["violations"][0]["kind"] == "MissingIdentity"


def test_usage_errors_exit_two(a2_path):
    for argv in (("frobnicate",), ("build", "affine", "A", "2"), ("build", "classical", "A", "0"), ("nf",)):
        code, _, err = call(*argv)
        assert code == 2, argv
        assert "usage_error" in err


def test_domain_errors_exit_one(a2_path, tmp_path):
    code, _, err = call("nf", a2_path, "s.q")
    assert code == 1
    assert "unknown_simple" in err

    code, _, err = call("--json", "nf", a2_path, "s@-1")
    assert code == 1
    assert json.loads(err)["error_code"] == "parse_error"

    code, _, err = call("homology", str(tmp_path / "missing.json"))
    assert code == 1
    assert "io_error" in err


def test_rank_limit_is_a_domain_error():
    code, _, err = call("build", "classical", "A", "9")

    assert code == 1
    assert "rank_too_large" in err


def test_parser_lists_every_verb():
    subparsers = next(a for a in build_parser()._actions if a.dest == "command")

    assert {"homology", "duality-check", "centers", "translation-length"} <= set(subparsers.choices)


@pytest.fixture(scope="module")
def dual_a3_path(tmp_path_factory):
    path = tmp_path_factory.mktemp("germs") / "dual_a3.json"
    code, _, _ = call("build", "dual", "A", "3", "-o", str(path))
    assert code == 0
    return str(path)


def test_cohomology_abelianization_and_dimension(a2_path):
    assert lines(call("cohomology", a2_path)[1]) == ["H^0 = Z", "H^1 = Z", "H^2 = 0", "H^3 = 0"]
    assert call("abelianization", a2_path)[1] == "G^ab = Z\n"
    assert lines(call("dimension", a2_path)[1]) == [
        "||Δ|| = 3",
        "top cell dimension: 3",
        "top nonzero cohomology: 1 (lower bound for cd)",
    ]


def test_poset_homology(a2_path):
    code, out, _ = call("poset-homology", a2_path)
    assert code == 0
    assert lines(out)[0] == "proper: 4 element(s)"
    assert "  H~_0 = Z" in lines(out)

    _, out, _ = call("poset-homology", a2_path, "--cohomology")
    assert "  H~_0 = Z" in lines(out)

    _, out, _ = call("poset-homology", a2_path, "--mu", "s")
    assert lines(out)[0] == "avoid(s): 2 element(s)"
    assert all(line.endswith("= 0") for line in lines(out)[1:])


def test_end_connectivity(a2_path, dual_a3_path):
    code, out, _ = call("end-connectivity", a2_path)
    assert code == 0
    assert lines(out)[0] == "end connectivity: inconclusive"

    _, out, _ = call("end-connectivity", dual_a3_path)
    assert lines(out)[:2] == ["end connectivity: yes", "G is 1-connected at infinity (n = 0)"]


def test_links(a2_path):
    code, out, _ = call("links", a2_path, "s")

    assert code == 0
    assert lines(out)[:2] == ["vertex: s", "RF = s, RF* = ts"]
    assert lines(out)[2].startswith("descending ")
    assert lines(out)[3].startswith("ascending ")


def test_orbit_radii(a2_path):
    assert call("orbit-radii", a2_path, "s", "-n", "3")[1] == "0 1 2\n"


def test_repeated_runs_are_byte_identical(a2_path, dual_a3_path):
    for argv in (
        ("--json", "subgroups", dual_a3_path),
        ("--json", "duality-check", dual_a3_path),
        ("centers", a2_path, "", "s.s", "t"),
        ("homology", dual_a3_path),
        ("build", "dual", "A", "3"),
    ):
        first, second = call(*argv), call(*argv)
        assert first == second, argv
        assert first[0] == 0, argv


def test_unexpected_errors_exit_one(a2_path, monkeypatch):
    def lookup_fails(germ):
        raise KeyError("missing")

    monkeypatch.setattr(cli.homology, "abelianization", lookup_fails)
    code, _, err = call("--json", "abelianization", a2_path)
    assert code == 1
    assert json.loads(err)["error_code"] == "unknown_key"

    def crashes(germ):
        raise RuntimeError("boom")

    monkeypatch.setattr(cli.homology, "abelianization", crashes)
    code, _, err = call("abelianization", a2_path)
    assert code == 1
    assert "internal_error" in err
