import numpy as np
import pytest

from gatequiz import problems
from gatequiz.problems import (
    enumerate_promised,
    label_of,
    make_cl,
    make_diof,
    make_eo,
    make_geo,
    make_neo,
    make_problem,
    parse_descriptor,
    reduced_eo_words,
    restrict,
)

from cl_word_lists import ACCEPT_WORDS, REJECT_WORDS


def test_restricted_eo1_words():
    p = make_eo(1, 3)
    assert enumerate_promised(p, p.max_len) == [
        ("", "y"), ("ss", "n"), ("ssss", "y"), ("ssssss", "n"),
    ]


def test_eo_label_examples():
    p = make_eo(1)
    assert label_of(p, "ss") == "n"
    assert label_of(p, "") == "y"
    assert label_of(p, "s") is None
    p2 = make_eo(2)
    assert enumerate_promised(p2, 4) == [("", "y"), ("ssss", "n")]


def test_geo_label_examples():
    p = make_geo(3, 1)
    assert label_of(p, "s" * 5) == "2"
    p = make_geo(3, 3)
    assert label_of(p, "s" * 6) == "2"
    assert label_of(p, "s" * 4) is None


def test_neo_label_examples():
    p = make_neo(2, 1)
    assert label_of(p, "11") == "10"
    assert label_of(p, "1") is None
    assert label_of(p, "1122") == "11"
    assert label_of(p, "") == "00"


def test_diof_examples():
    p = make_diof(2)
    assert p.alphabet == ("t", "s")
    assert problems.diof_weights(p) == {"t": 1, "s": 2}
    assert label_of(p, "ss") == "n"
    assert label_of(p, "tt") is None
    assert label_of(p, "ttsss") == "y"  # weight 2*1 + 3*2 = 8


def test_cl_membership_examples():
    p = make_cl()
    assert label_of(p, "shs") == "y"
    assert label_of(p, "ss") == "n"
    assert label_of(p, "s") is None
    assert label_of(p, "") == "y"


def test_cl_enumeration_matches_reference_listing():
    p = make_cl()
    words = enumerate_promised(p, 8)
    got_y = {w for w, lab in words if lab == "y"}
    got_n = {w for w, lab in words if lab == "n"}
    assert got_y == set(ACCEPT_WORDS)
    assert got_n == set(REJECT_WORDS)
    assert len(got_y) == 95 and len(got_n) == 76


def test_cl_orbit_table_matches_unitary_simulation():
    s_gate = np.diag([1, 1j])
    h_gate = np.array([[1, 1], [1, -1]]) / np.sqrt(2)
    plus = np.array([1, 1]) / np.sqrt(2)
    minus = np.array([1, -1]) / np.sqrt(2)
    p = make_cl()
    stack = [("", np.eye(2))]
    while stack:
        word, u = stack.pop()
        overlap_p = abs(plus.conj() @ u @ plus)
        overlap_m = abs(minus.conj() @ u @ plus)
        expected = None
        if overlap_p > 1 - 1e-9:
            expected = "y"
        elif overlap_m > 1 - 1e-9:
            expected = "n"
        assert label_of(p, word) == expected, word
        if len(word) < 10:
            stack.append((word + "s", s_gate @ u))
            stack.append((word + "h", h_gate @ u))


def test_reduced_eo_words():
    assert reduced_eo_words(1, 3) == [
        ("", "y"), ("ss", "n"), ("ssss", "y"), ("ssssss", "n"),
    ]
    assert reduced_eo_words(1, 4) == [
        ("", "y"), ("ss", "n"), ("ssss", "y"), ("ssssssss", "y"),
    ]
    assert reduced_eo_words(2, 3) == [
        ("", "y"), ("s" * 4, "n"), ("s" * 8, "y"), ("s" * 12, "n"),
    ]
    with pytest.raises(ValueError):
        reduced_eo_words(1, 5)


def test_reduced_words_carry_original_labels():
    for k in (1, 2):
        full = make_eo(k)
        for i_max in range(0, 2 ** (k + 1) + 1):
            for word, lab in reduced_eo_words(k, i_max):
                assert label_of(full, word) == lab


def test_restrict_examples():
    p = restrict(make_eo(1), 0)
    assert enumerate_promised(p, 0) == [("", "y")]
    p = problems.restrict_index(make_eo(1), 5)
    assert len(enumerate_promised(p, p.max_len)) == 6
    p = restrict(make_cl(), 2)
    assert enumerate_promised(p, 2) == [("", "y"), ("ss", "n"), ("hh", "y")]


def test_restriction_monotone():
    for desc in ("eo:k=2", "cl", "diof:k=2", "neo:n=2:k=1", "geo:q=3:r=2"):
        p = make_problem(desc)
        full = set(enumerate_promised(p, 6))
        for bound in range(7):
            rp = restrict(p, bound)
            sub = set(enumerate_promised(rp, 6))
            assert sub <= full
            for word, lab in sub:
                assert len(word) <= bound


def test_labels_are_single_valued():
    for desc in ("eo:k=1", "diof:k=2", "cl", "neo:n=2:k=1", "geo:q=3:r=3"):
        p = make_problem(desc)
        seen = {}
        for word, lab in enumerate_promised(p, 7):
            assert word not in seen
            seen[word] = lab
            assert lab in p.labels


def test_unary_parity_embeds_into_weighted_problem():
    for k in (1, 2, 3):
        diof = make_diof(k)
        eo = make_eo(k)
        weight_one = diof.alphabet[0]
        for count in range(2 ** (k + 2) + 1):
            got = label_of(diof, weight_one * count)
            want = label_of(eo, "s" * count)
            assert got == want


def test_descriptor_round_trip():
    for desc in (
        "eo:k=1", "eo:k=2:len=12", "diof:k=2", "cl", "cl:len=8",
        "neo:n=2:k=1", "geo:q=3:r=3", "geo:q=5:r=5:len=50",
    ):
        p = parse_descriptor(desc)
        assert parse_descriptor(p.descriptor()) == p


def test_descriptor_imax():
    assert parse_descriptor("eo:k=1:imax=3") == make_eo(1, 3)
    assert parse_descriptor("eo:k=2:imax=3").max_len == 12


def test_descriptor_errors():
    for bad in ("eo", "eo:k=0", "geo:q=4:r=1", "geo:q=3", "wat:k=1", "eo:k=1:zz=2"):
        with pytest.raises(ValueError):
            parse_descriptor(bad)
    with pytest.raises(ValueError):
        make_neo(0, 1)
    with pytest.raises(ValueError):
        label_of(make_eo(1), "sx")


def test_unary_index_structure():
    step, period, lab = problems.unary_index_structure(make_eo(2))
    assert (step, period) == (4, 2)
    assert lab(0) == "y" and lab(3) == "n"
    step, period, lab = problems.unary_index_structure(make_geo(5, 5))
    assert (step, period) == (5, 5)
    assert lab(7) == "2"
    with pytest.raises(ValueError):
        problems.unary_index_structure(make_cl())
