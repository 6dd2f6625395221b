import json
from fractions import Fraction

import numpy as np
import pytest

from qhfrob.core import PresentationError, verify_all
from qhfrob.exactlin import GF, QQ, exact_equal
from qhfrob.workbench.builders import (
    build_dual_group_algebra_twisted,
    build_group_algebra,
    build_sweedler,
    cyclic_group,
    symmetric_group,
    z2_sign_cocycle,
)
from qhfrob.workbench.cli import EXIT_FAIL, EXIT_INPUT, EXIT_PASS, main
from qhfrob.workbench.examples import shipped_examples, shipped_paths, write_shipped_examples
from qhfrob.workbench.fileformat import (
    PresentationFileError,
    load_presentation,
    parse_presentation,
    presentation_file,
    serialize_presentation,
)
from qhfrob.workbench.report import build_report
from qhfrob.workbench.twist import gauge_twist, random_twist, tensor2_inverse, twisted_variants

# ---------------------------------------------------------------- builders


def test_trivial_group():
    h = build_group_algebra([[0]])
    assert h.dim == 1 and verify_all(h).passed


def test_cyclic_group_algebras():
    for n in (3, 4):
        assert verify_all(build_group_algebra(cyclic_group(n))).passed


def test_symmetric_group_table():
    table, perms = symmetric_group(3)
    assert len(perms) == 6 and perms[0] == (0, 1, 2)
    assert build_group_algebra(table, verify=True).dim == 6


def test_non_group_table_rejected():
    with pytest.raises(PresentationError):
        build_group_algebra([[0, 1], [1, 1]])
    with pytest.raises(PresentationError):
        build_group_algebra([[0, 1], [1]])


def test_non_cocycle_rejected():
    with pytest.raises(PresentationError):
        build_dual_group_algebra_twisted(cyclic_group(2), lambda a, b, c: -1 if a == 1 else 1)


def test_nonabelian_dual_rejected():
    table, _ = symmetric_group(3)
    with pytest.raises(PresentationError):
        build_dual_group_algebra_twisted(table)


def test_sweedler_char2_rejected():
    with pytest.raises(PresentationError):
        build_sweedler(GF(2))


def test_sweedler_over_fp():
    h = build_sweedler(GF(5))
    assert verify_all(h).passed


def test_twisted_dual_z4_trivial_cocycle():
    assert verify_all(build_dual_group_algebra_twisted(cyclic_group(4))).passed


# ---------------------------------------------------------------- twists


def test_identity_twist(sweedler):
    one = np.multiply.outer(sweedler.alg.unit, sweedler.alg.unit)
    h = gauge_twist(sweedler, one)
    assert exact_equal(h.qb.phi, sweedler.qb.phi)
    assert exact_equal(h.qb.delta, sweedler.qb.delta)
    assert exact_equal(h.beta, sweedler.beta)


def test_twist_round_trip(sweedler, tz2):
    rng = np.random.default_rng(1)
    for base in (sweedler, tz2):
        F, G = random_twist(base, rng)
        h = gauge_twist(base, F, G)
        back = gauge_twist(h, G, F)
        assert exact_equal(back.qb.delta, base.qb.delta)
        assert exact_equal(back.qb.phi, base.qb.phi)
        assert exact_equal(back.alpha, base.alpha)
        assert exact_equal(back.beta, base.beta)


def test_sweedler_twist_has_nontrivial_associator(sweedler):
    h = gauge_twist(sweedler, *random_twist(sweedler, np.random.default_rng(11)))
    assert not exact_equal(h.qb.phi, sweedler.qb.phi)
    assert verify_all(h).passed


def test_c2_twist_keeps_associator(c2):
    # H⊗H is commutative and every normalized 2-cochain on Z2 has trivial
    # coboundary, so only α and β move
    rng = np.random.default_rng(0)
    changed = False
    for _ in range(5):
        F, G = random_twist(c2, rng)
        h = gauge_twist(c2, F, G)
        assert exact_equal(h.qb.phi, c2.qb.phi)
        assert exact_equal(h.qb.delta, c2.qb.delta)
        changed |= not exact_equal(h.beta, c2.beta)
    assert changed


def test_non_invertible_twist_rejected(c2):
    H = c2.alg
    g = H.basis(1)
    # (1 - g)⊗(1 - g) is 4 times an idempotent, so this F kills it
    F = np.multiply.outer(H.unit, H.unit) - np.multiply.outer(H.unit - g, H.unit - g) * Fraction(1, 4)
    assert tensor2_inverse(c2, F) is None
    with pytest.raises(PresentationError):
        gauge_twist(c2, F)


def test_non_normalized_twist_rejected(c2):
    F = 2 * np.multiply.outer(c2.alg.unit, c2.alg.unit)
    with pytest.raises(PresentationError):
        gauge_twist(c2, F)


def test_twisted_variants_count(sweedler, tz2):
    vs = twisted_variants([sweedler, tz2], 4, seed=2)
    assert len(vs) == 4
    assert all(verify_all(h).passed for h in vs)


# ---------------------------------------------------------------- file format


def test_shipped_files_round_trip():
    for path in shipped_paths():
        text = path.read_text(encoding="utf-8")
        assert serialize_presentation(parse_presentation(text, str(path))) == text


def test_shipped_files_match_builders():
    docs = shipped_examples()
    for path in shipped_paths():
        assert serialize_presentation(docs[path.name]) == path.read_text(encoding="utf-8")


def test_write_shipped_examples(tmp_path):
    paths = write_shipped_examples(tmp_path)
    assert {p.name for p in paths} == {p.name for p in shipped_paths()}
    for p in paths:
        assert verify_all(load_presentation(p).presentation).passed


def test_parsed_structure_matches(sweedler):
    doc = parse_presentation(serialize_presentation(presentation_file(sweedler)))
    h = doc.presentation
    assert exact_equal(h.S, sweedler.S)
    assert exact_equal(h.alg.mult, sweedler.alg.mult)
    assert doc.labels == ("1", "g", "x", "gx")


def _c2_text():
    return serialize_presentation(presentation_file(build_group_algebra(cyclic_group(2), labels=("1", "g"))))


def test_bad_coefficient_reports_line():
    text = _c2_text().replace('[1, 1, 0, "1"]', '[1, 1, 0, "1/0"]')
    with pytest.raises(PresentationFileError) as exc:
        parse_presentation(text, "c2.json")
    err = exc.value
    assert err.line == text.splitlines().index('    [1, 1, 0, "1/0"]') + 1
    assert str(err).startswith(f"c2.json:{err.line}:")


def test_index_out_of_range_reports_line():
    text = _c2_text().replace('[1, 1, 0, "1"]', '[1, 1, 5, "1"]')
    with pytest.raises(PresentationFileError) as exc:
        parse_presentation(text)
    assert "out of range" in exc.value.message and exc.value.line is not None


def test_missing_key_and_bad_json():
    d = json.loads(_c2_text())
    del d["antipode"]
    with pytest.raises(PresentationFileError, match="antipode"):
        parse_presentation(json.dumps(d))
    with pytest.raises(PresentationFileError, match="invalid JSON"):
        parse_presentation("{")
    with pytest.raises(PresentationFileError, match="unknown key"):
        parse_presentation(json.dumps({**json.loads(_c2_text()), "extra": 1}))
    with pytest.raises(PresentationFileError, match="must be a string"):
        parse_presentation(_c2_text().replace('[0, "1"]', "[0, 1]", 1))


def test_field_override():
    text = _c2_text()
    doc = parse_presentation(text, field=GF(2))
    assert doc.presentation.field == GF(2)
    # 1 + g is a nonzero integral with ε = 0 in characteristic 2
    assert doc.presentation.eps(doc.presentation.alg.element([1, 1])) == 0
    f2 = (shipped_paths()[0].parent / "c2_f2.json").read_text(encoding="utf-8")
    with pytest.raises(PresentationFileError, match="field-tag mismatch"):
        parse_presentation(f2, field=QQ)


def test_residue_in_rational_file_rejected():
    with pytest.raises(PresentationFileError):
        parse_presentation(_c2_text().replace('[0, "1"]', '[0, "p1"]', 1))


def test_missing_file():
    with pytest.raises(PresentationFileError, match="cannot read"):
        load_presentation("/nonexistent/file.json")


# ---------------------------------------------------------------- report


def test_report_on_broken_presentation():
    d = json.loads(_c2_text())
    d["antipode"] = [[0, 0, "1"], [1, 1, "2"]]
    doc = parse_presentation(json.dumps(d))
    rep = build_report(doc, ("check", "integrals"))
    assert not rep.passed
    assert "FAIL" in rep.render()


# ---------------------------------------------------------------- CLI


def _data(name):
    return str(shipped_paths()[0].parent / name)


def test_cli_check(capsys):
    assert main(["check", _data("twisted_z2.json")]) == EXIT_PASS
    assert "overall: PASS" in capsys.readouterr().out


def test_cli_separability_sweedler(capsys):
    assert main(["separability", _data("sweedler.json")]) == EXIT_PASS
    out = capsys.readouterr().out
    assert "separable: False" in out


def test_cli_radford_json(tmp_path, capsys):
    out = tmp_path / "r.json"
    assert main(["radford", _data("sweedler.json"), "--json", str(out)]) == EXIT_PASS
    d = json.loads(out.read_text())
    sec = d["reports"][0]["sections"][0]
    assert d["passed"] and sec["findings"]["u"] == "g" and sec["findings"]["b"] == "g"


def test_cli_bad_file(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text("{\n  \"dimension\": 2,\n  \"mult\": [[0, 0, 0, 1]]\n}\n")
    assert main(["check", str(bad)]) == EXIT_INPUT
    err = capsys.readouterr().err
    assert "bad.json:3" in err


def test_cli_failing_check(tmp_path, capsys):
    d = json.loads(_c2_text())
    d["antipode"] = [[0, 0, "1"], [1, 1, "2"]]
    p = tmp_path / "broken.json"
    p.write_text(json.dumps(d))
    assert main(["check", str(p)]) == EXIT_FAIL


def test_cli_extension(capsys):
    assert main(["extension", _data("s3.json")]) == EXIT_PASS
    assert main(["extension", _data("c2.json")]) == EXIT_INPUT


def test_cli_sub_option(tmp_path, capsys):
    sub = tmp_path / "sub.json"
    sub.write_text(json.dumps({"basis": [[[0, "1"]]], "name": "scalars"}))
    assert main(["extension", _data("c2.json"), "--sub", str(sub)]) == EXIT_PASS


def test_cli_field_override(capsys):
    assert main(["separability", _data("c2.json"), "--field", "Fp:2"]) == EXIT_PASS
    assert "separable: False" in capsys.readouterr().out
