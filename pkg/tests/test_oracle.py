import json

import pytest

from vankampen.diagram import boundary_word, idiam, simply_bounded, single_vertex_diagram
from vankampen.gallery import grid, square
from vankampen.oracle import (
    Oracle,
    OracleError,
    SearchBudget,
    compute_M_P,
    diagram_key,
    enumerate_fillings,
    idiam_function,
    idiam_of_word,
    presentation_hash,
    simply_bounded_data,
    subcomplexes_by_growth,
    subcomplexes_by_subsets,
    subdiagram_profile,
)
from vankampen.presentation import Word, parse_presentation
from vankampen.surgery import mirror

B4 = SearchBudget(4)


def W(p, text):
    return p.parse_word(text)


def test_commutator_includes_s1(Z2):
    res = enumerate_fillings(Z2, W(Z2, "aba^-1b^-1"), SearchBudget(1))
    assert res.exhaustive
    assert diagram_key(square(), Z2) in set(res.keys)


def test_spur_exists_but_not_simply_bounded(Z2):
    res = enumerate_fillings(Z2, W(Z2, "aa^-1"), SearchBudget(1))
    assert len(res) >= 1
    assert not any(simply_bounded(d) for d in res)
    assert simply_bounded_data(Z2, W(Z2, "aa^-1"), SearchBudget(1)).value is None


def test_dipole_at_budget_two(Z2):
    # two squares glued along three sides fill a a^-1 with a simple boundary
    r = simply_bounded_data(Z2, W(Z2, "aa^-1"), SearchBudget(2))
    assert r.value == 8
    assert r.diagram.face_count == 2


def test_single_letter_has_no_filling(Z2):
    res = enumerate_fillings(Z2, W(Z2, "a"), B4)
    assert len(res) == 0 and res.exhaustive
    with pytest.raises(OracleError):
        idiam_of_word(Z2, W(Z2, "a"), B4)


def test_fillings_are_valid_and_distinct(Z2):
    res = enumerate_fillings(Z2, W(Z2, "abba^-1b^-1b^-1"), B4)
    assert len(res) > 0
    for d in res:
        assert boundary_word(d) == W(Z2, "abba^-1b^-1b^-1")
    assert len(set(res.keys)) == len(res.keys)


@pytest.mark.parametrize("n,total", [(0, 1), (2, 93), (4, 2037)])
def test_frozen_counts_z2(Z2, n, total):
    o = Oracle(Z2, B4, use_cache=False)
    assert sum(len(o.fillings(w)) for w in o.words_up_to(n)) == total


def test_frozen_counts_a3(A3):
    o = Oracle(A3, B4, use_cache=False)
    assert sum(len(o.fillings(w)) for w in o.words_up_to(6)) == 1347
    assert len(o.fillings(W(A3, "aa^-1"))) == 5
    assert len(o.fillings(W(A3, "aaaaaa"))) == 23


@pytest.mark.parametrize("text", ["aba^-1b^-1", "aabb^-1a^-1a^-1", "ab^-1ba^-1", "aa^-1bb^-1"])
def test_mirror_cross_check(Z2, text):
    """Fillings of w, mirrored, are exactly the fillings of w^-1."""
    w = W(Z2, text)
    fwd = enumerate_fillings(Z2, w, B4)
    back = enumerate_fillings(Z2, w.inverse(), B4)
    assert {diagram_key(mirror(d), Z2) for d in fwd} == set(back.keys)


def test_idiam_values(Z2):
    r = idiam_of_word(Z2, W(Z2, "aba^-1b^-1"), B4)
    assert (r.value, r.exhaustive) == (8, True)
    assert idiam_of_word(Z2, Word(()), B4).value == 0
    r = idiam_of_word(Z2, W(Z2, "aba^-1b^-1aba^-1b^-1"), B4)
    assert r.value == 8 and idiam(r.diagram) == 8


def test_idiam_function(Z2):
    tab = idiam_function(Z2, 4, B4)
    assert {n: r.value for n, r in tab.items()} == {0: 0, 1: 0, 2: 4, 3: 4, 4: 8}
    assert all(r.exhaustive for r in tab.values())


def test_idiam_lower_bounds_every_filling(Z2):
    w = W(Z2, "aabb^-1a^-1a^-1")
    best = idiam_of_word(Z2, w, B4).value
    assert best == min(idiam(d) for d in enumerate_fillings(Z2, w, B4))


def test_simply_bounded_commutator(Z2):
    r = simply_bounded_data(Z2, W(Z2, "aba^-1b^-1"), B4)
    assert r.value == 8
    assert diagram_key(r.diagram, Z2) == diagram_key(square(), Z2)


def test_bigon():
    p = parse_presentation("gens: a\nrels: aa")
    r = simply_bounded_data(p, p.parse_word("aa"), SearchBudget(2))
    assert r.diagram.face_count == 1
    assert simply_bounded(r.diagram)


@pytest.mark.parametrize("budget,value", [(1, 8), (3, 8), (4, 12), (5, 12)])
def test_m_p(Z2, budget, value):
    r = compute_M_P(Z2, SearchBudget(budget))
    assert (r.value, r.exhaustive) == (value, True)


def test_m_p_without_simply_bounded_short_words():
    # a a^-1 is null in every group, so only a free presentation has nothing to count
    p = parse_presentation("gens: a\nrels:", allow_free=True)
    assert compute_M_P(p, B4).value == 0


def test_time_cap_marks_non_exhaustive(Z2):
    o = Oracle(Z2, SearchBudget(8, None, 0.01), use_cache=False)
    assert not o.fillings(W(Z2, "aabba^-1a^-1b^-1b^-1")).exhaustive


def test_cache_file(tmp_path, monkeypatch, Z2):
    monkeypatch.setenv("VK_CACHE_DIR", str(tmp_path))
    o = Oracle(Z2, SearchBudget(2))
    o.idiam_of_word(W(Z2, "aba^-1b^-1"))
    o.compute_M_P()
    path = tmp_path / f"{presentation_hash(Z2)}.oracle.json"
    data = json.loads(path.read_text())
    assert set(data) == {"M_P", "idiam_n", "presentation", "presentation_hash", "words"}
    assert data["M_P"]["f2"]["value"] == 8
    again = Oracle(Z2, SearchBudget(2))
    assert again.compute_M_P().value == 8


def test_budget_validation():
    with pytest.raises(ValueError):
        SearchBudget(-1)
    with pytest.raises(ValueError):
        SearchBudget(2, None, 0)


def test_subdiagram_profiles():
    assert subdiagram_profile(square()) == {0: 0, 2: 4, 4: 8, 6: 12}
    assert subdiagram_profile(single_vertex_diagram()) == {0: 0}
    r = grid(2, 1)
    assert subdiagram_profile(r, "subsets") == subdiagram_profile(r, "growth")
    assert subcomplexes_by_subsets(r) == subcomplexes_by_growth(r)


def test_word_subdiagram_profile(Z2):
    from vankampen.oracle import word_subdiagram_profile

    o = Oracle(Z2, SearchBudget(3), use_cache=False)
    assert word_subdiagram_profile(o, W(Z2, "aba^-1b^-1")) == ({0: 0, 2: 4, 4: 8, 6: 12}, True)
    # the bare spur beats every dipole
    assert word_subdiagram_profile(o, W(Z2, "aa^-1")) == ({0: 0, 2: 4}, True)
