import random
from fractions import Fraction as F
from itertools import product
from math import comb

import pytest

from betamoments.combinatorics import (
    FALL,
    HORIZONTAL,
    RISE,
    VERTICAL,
    EnumerationBoundError,
    InadmissiblePathError,
    Path,
    PathModel,
    Step,
    catalan,
    count_weighted_paths,
    dyck_model,
    enumerate_paths,
    enumerate_schroder_paths,
    is_schroder_path,
    jacobi_model,
    motzkin_count,
    motzkin_model,
    schroder,
    schroder_bijection,
    schroder_like_model,
)


def brute_words(alphabet, length):
    """All words of ``length`` letters, as height sequences, staying >= 0 and ending at 0."""
    for word in product(alphabet, repeat=length):
        h, ok = 0, True
        for dy in word:
            h += dy
            if h < 0:
                ok = False
                break
        if ok and h == 0:
            yield word


@pytest.mark.parametrize("n,want", [(0, 1), (3, 5), (5, 42)])
def test_catalan_examples(n, want):
    assert catalan(n) == want


@pytest.mark.parametrize("p", range(9))
def test_catalan_vs_itertools_brute_force(p):
    assert catalan(p) == sum(1 for _ in brute_words((1, -1), 2 * p))


@pytest.mark.parametrize("n,m,want", [(4, 1, 6), (5, 0, 1), (6, 3, 5)])
def test_motzkin_examples(n, m, want):
    assert motzkin_count(n, m) == want


def test_motzkin_vs_brute_force():
    for n in range(11):
        for m in range(n + 1):
            brute = sum(1 for w in brute_words((1, -1, 0), n) if w.count(1) == m)
            assert motzkin_count(n, m) == brute, (n, m)


def test_motzkin_beyond_half_is_zero():
    assert motzkin_count(5, 3) == 0


@pytest.mark.parametrize("n,want", [(0, 1), (1, 2), (2, 6), (3, 22), (4, 90), (5, 394)])
def test_schroder_examples(n, want):
    assert schroder(n) == want


@pytest.mark.parametrize("n", range(7))
def test_schroder_vs_brute_force(n):
    paths = enumerate_schroder_paths(n)
    assert len(paths) == schroder(n)
    assert all(is_schroder_path(p) for p in paths)


def test_negative_index_rejected():
    for f in (catalan, schroder):
        with pytest.raises(ValueError):
            f(-1)


def test_unit_dyck_count():
    assert count_weighted_paths(dyck_model(6)) == 5


def test_weighted_dyck():
    assert count_weighted_paths(dyck_model(4, F(1, 2), F(1, 3))) == F(1, 18)


def test_weighted_motzkin_horizontal():
    assert count_weighted_paths(motzkin_model(3, 1, 1, 2)) == 14


def test_odd_length_dyck_has_no_paths():
    assert count_weighted_paths(dyck_model(5)) == 0
    assert enumerate_paths(dyck_model(5), 20) == []


def test_enumerate_small_models():
    assert [str(p) for p in enumerate_paths(dyck_model(2), 4)] == ["UD"]
    assert sorted(str(p) for p in enumerate_paths(motzkin_model(2), 4)) == ["HH", "UD"]
    fig3 = sorted(str(p) for p in enumerate_paths(schroder_like_model(1), 4))
    assert fig3 == ["H", "VD"]


def test_empty_path_when_length_zero():
    assert enumerate_paths(dyck_model(0), 3) == [Path(())]
    assert count_weighted_paths(dyck_model(0)) == 1


def test_enumeration_bound():
    with pytest.raises(EnumerationBoundError, match="enumeration bound"):
        enumerate_paths(dyck_model(30), 30)


def test_nonzero_floor_and_end_height():
    model = PathModel((Step(*RISE), Step(*FALL)), horizontal_length=4, floor=-1, start_height=0, end_height=0)
    # bilateral Dyck paths of 4 steps bounded below by -1
    brute = 0
    for w in product((1, -1), repeat=4):
        hs = [sum(w[:i + 1]) for i in range(4)]
        brute += min(hs) >= -1 and hs[-1] == 0
    assert count_weighted_paths(model) == brute == len(enumerate_paths(model, 10))


def test_model_validation():
    with pytest.raises(ValueError):
        Step(0, -1)
    with pytest.raises(ValueError):
        PathModel((Step(*RISE), Step(*RISE)), horizontal_length=2)
    with pytest.raises(ValueError):
        PathModel((Step(*RISE),), horizontal_length=2, floor=1)


def test_weight_of_and_admits():
    m = motzkin_model(3, 2, 3, 5)
    p = Path.from_string("UHD")
    assert m.admits(p)
    assert m.weight_of(p) == 30
    assert not m.admits(Path.from_string("UH"))
    with pytest.raises(InadmissiblePathError):
        m.weight_of(Path.from_string("VD"))


def test_path_string_round_trip():
    p = Path((VERTICAL, HORIZONTAL, FALL, RISE))
    assert str(p) == "VHDU"
    assert Path.from_string(str(p)) == p
    with pytest.raises(ValueError):
        Path.from_string("UX")


@pytest.mark.parametrize("n", range(7))
def test_fig3_paths_biject_onto_schroder(n):
    fig3 = enumerate_paths(schroder_like_model(n), 20)
    images = [schroder_bijection(p) for p in fig3]
    assert len(set(images)) == len(images) == schroder(n)
    assert set(images) == set(enumerate_schroder_paths(n))


def test_bijection_doubles_horizontals():
    assert schroder_bijection(Path((HORIZONTAL, HORIZONTAL))) == Path(((2, 0), (2, 0)))
    assert schroder_bijection(Path(())) == Path(())


@pytest.mark.parametrize("word", ["U", "VDD", "V"])
def test_bijection_rejects_inadmissible(word):
    with pytest.raises(InadmissiblePathError):
        schroder_bijection(Path.from_string(word))


def _rand_weight(rng):
    return F(rng.randint(-9, 9), rng.randint(1, 6))


@pytest.mark.parametrize("make", [
    lambda w: dyck_model(8, w(), w()),
    lambda w: motzkin_model(6, w(), w(), w()),
    lambda w: schroder_like_model(5, w(), w(), w()),
    lambda w: jacobi_model(5, w(), w(), w(), w()),
], ids=["dyck", "motzkin", "fig3", "four-step"])
def test_dp_matches_enumeration_random_weights(make):
    rng = random.Random(7)
    for _ in range(50):
        model = make(lambda: _rand_weight(rng))
        brute = sum((model.weight_of(p) for p in enumerate_paths(model, 20)), F(0))
        assert count_weighted_paths(model) == brute


def test_weighted_dyck_is_catalan_times_power():
    u, v = F(2, 7), F(-3, 5)
    for p in range(8):
        assert count_weighted_paths(dyck_model(2 * p, u, v)) == catalan(p) * (u * v) ** p


def test_motzkin_polynomial_structure():
    u, d, h = F(1, 3), F(5, 2), F(-4, 9)
    for n in range(9):
        want = sum(motzkin_count(n, m) * (u * d) ** m * h ** (n - 2 * m) for m in range(n // 2 + 1))
        assert count_weighted_paths(motzkin_model(n, u, d, h)) == want


def test_motzkin_closed_form_identity():
    # M_{n,m} = C(n, 2m) C_m
    for n in range(12):
        for m in range(n // 2 + 1):
            assert motzkin_count(n, m) == comb(n, 2 * m) * catalan(m)
