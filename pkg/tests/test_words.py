import pytest
from hypothesis import given
from hypothesis import strategies as st

from qstree.errors import HorizonError
from qstree.words import X_word, ball_class, factors, n_k, word_adapter, x_length

W = word_adapter(10)


def test_first_words():
    assert X_word(1) == "aaba"
    assert X_word(2) == "baaabab"
    assert [len(X_word(k)) for k in range(1, 7)] == [x_length(k) for k in range(1, 7)]


@given(st.integers(1, 8))
def test_prefix_chain(k):
    # X_k is a factor of X_{k+1}, so factor sets only grow
    assert X_word(k) in X_word(k + 1) or X_word(k)[::-1] in X_word(k + 1)


@pytest.mark.parametrize("k", [2, 3, 4])
def test_rpp_half_length(k):
    for n in range(n_k(k - 1) + 1, n_k(k) + 1):
        assert W.rpp(n) - n == x_length(k) // 2


def test_rpp_at_one():
    assert W.rpp(1) == 3


def test_b_at_nk_modulo_reversal():
    assert [W.b(n_k(k)) for k in range(1, 5)] == [x_length(k) for k in range(1, 5)]
    # raw factor count at length 3 is one more than |X_1|
    assert W.p(3) == 5


@given(st.text(alphabet="ab", min_size=1, max_size=12))
def test_ball_class_is_reversal_invariant(f):
    assert ball_class(f) == ball_class(f[::-1])


def test_factors():
    assert factors("abab", 2) == {"ab", "ba"}


def test_unstable_level_raises():
    with pytest.raises(HorizonError):
        word_adapter(3).b(20)
