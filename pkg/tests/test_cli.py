import json

import pytest

from vankampen.cli import main
from vankampen.combing import TameFunction
from vankampen.gallery import Z2_TEXT, grid, notched_grid, square, tall_dipole


@pytest.fixture
def files(tmp_path):
    (tmp_path / "z2.p").write_text(Z2_TEXT)
    (tmp_path / "s1.json").write_text(square().to_json())
    (tmp_path / "rect.json").write_text(grid(2, 1).to_json())
    (tmp_path / "tall.json").write_text(tall_dipole(5).to_json())
    (tmp_path / "u.json").write_text(notched_grid().to_json())
    (tmp_path / "id.json").write_text(TameFunction({q: q for q in range(40)}, "id").to_json())
    return tmp_path


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out = capsys.readouterr()
    return code, out.out, out.err


def test_validate(files, capsys):
    code, out, _ = run(capsys, "validate", "--presentation", files / "z2.p", "--diagram", files / "s1.json")
    assert code == 0
    assert "1 faces" in out


def test_validate_rejects_bad_label(files, capsys):
    data = json.loads((files / "s1.json").read_text())
    data["darts"][0]["label"], data["darts"][1]["label"] = "b", "b^-1"
    (files / "bad.json").write_text(json.dumps(data))
    code, _, err = run(capsys, "validate", "--presentation", files / "z2.p", "--diagram", files / "bad.json")
    assert code == 1
    assert "error" in err


def test_usage_error(capsys):
    assert run(capsys, "frobnicate")[0] == 2
    assert run(capsys, "validate")[0] == 2


def test_analyze_reports(files, capsys):
    code, out, _ = run(capsys, "analyze", "--diagram", files / "s1.json", "--report", "distances")
    assert json.loads(out) == {"edges": [[0, 2], [2, 6], [4, 6], [6, 2]], "faces": [5], "vertices": [0, 4, 8, 4]}
    code, out, _ = run(capsys, "analyze", "--diagram", files / "u.json", "--report", "bdiam")
    assert json.loads(out)["geodesically_bounded"] is False


def test_tree(files, capsys):
    code, out, _ = run(capsys, "tree", "--diagram", files / "s1.json")
    assert json.loads(out)["tree_edges"] == [0, 2, 6]


def test_icicles_hasse(files, capsys):
    code, out, _ = run(capsys, "icicles", "--diagram", files / "rect.json")
    data = json.loads(out)
    assert code == 0
    assert data["hasse"] == [[10, 12]]
    assert {r["edge"]: r["body_face_count"] for r in data["icicles"]} == {10: 1, 12: 2}


def test_comb_reports(files, capsys):
    _, out, _ = run(capsys, "comb", "--diagram", files / "s1.json")
    assert json.loads(out)["edges"] == [[4, 6, 8]]
    _, out, _ = run(capsys, "comb", "--diagram", files / "s1.json", "--f", files / "id.json", "--report", "obstruction")
    assert json.loads(out) == {"N": 6, "violators": [4]}
    _, out, _ = run(capsys, "comb", "--diagram", files / "s1.json", "--report", "variation")
    assert json.loads(out) == {"variation": [[4, 6, 12]]}
    code, _, _ = run(capsys, "comb", "--diagram", files / "u.json", "--any-tree")
    assert code == 0


def test_oracle_queries(files, capsys):
    p = files / "z2.p"
    code, out, _ = run(capsys, "oracle", "--presentation", p, "mp", "--max-faces", 3)
    assert code == 0 and "M_P = 2 (8 quarters), exhaustive=True" in out
    _, out, _ = run(capsys, "oracle", "--presentation", p, "idiam-word", "aba^-1b^-1")
    assert "8 quarters" in out
    _, out, _ = run(capsys, "oracle", "--presentation", p, "idiam-fn", 3)
    assert out.splitlines()[-1].startswith("IDiam(3) = 1 (4 quarters)")
    _, out, _ = run(capsys, "oracle", "--presentation", p, "sb", "aa^-1", "--max-faces", 1)
    assert "none" in out
    _, out, _ = run(capsys, "oracle", "--presentation", p, "subprofile", files / "s1.json")
    assert json.loads(out) == {"0": 0, "2": 4, "4": 8, "6": 12}
    assert run(capsys, "oracle", "--presentation", p, "sb")[0] == 1


def test_prop5(files, capsys):
    out_file = files / "fat.json"
    code, _, err = run(capsys, "prop5", "--presentation", files / "z2.p", "--word", "aabb^-1a^-1a^-1", "--out", out_file)
    assert code == 0
    assert json.loads(out_file.read_text())["vertices"] > 0


def test_tame_and_certify(files, capsys):
    cert = files / "cert.json"
    code, _, err = run(
        capsys, "tame", "--presentation", files / "z2.p", "--word", "aa^-1", "--start", files / "tall.json", "--assume-tables", "--out", cert
    )
    assert code == 0 and "[2, None]" in err
    code, out, _ = run(capsys, "certify", cert)
    assert code == 0 and "accepted" in out
    data = json.loads(cert.read_text())
    data["f"]["table"][2][1] -= 1
    cert.write_text(json.dumps(data))
    code, out, _ = run(capsys, "certify", cert)
    assert code == 1
    assert "rejected" in out and '"point": 2' in out


def test_tame_refuses_short_table(files, capsys):
    code, _, err = run(
        capsys, "tame", "--presentation", files / "z2.p", "--word", "aa^-1", "--start", files / "tall.json", "--table-len", 2
    )
    assert code == 1 and "--assume-tables" in err


def test_render(files, capsys):
    svg = files / "rect.svg"
    code, _, _ = run(capsys, "render", "--diagram", files / "rect.json", "--highlight", "icicle:12", "--out", svg)
    assert code == 0
    assert svg.read_text().count("<polygon") == 2
