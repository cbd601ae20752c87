"""The 2-regular tree colored by a bi-infinite word.

On the 2-regular tree a radius-``n`` ball is a length-``2n + 1`` factor, and
the center-fixing isometries include the reflection, so ball classes are
factors taken up to reversal. Raw factor counts are reported next to them.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache

from .errors import CapExceededError, HorizonError


@lru_cache(maxsize=None)
def L_word(k: int) -> str:
    if k < 1:
        raise ValueError("k >= 1")
    if k == 1:
        return ""
    prev = L_word(k - 1)
    mid = "a" if (k - 1) % 2 else "b"
    return prev + mid + prev


def X_word(k: int) -> str:
    L = L_word(k)
    if k % 2:
        return "a" + L + "a" + L + "b" + L + "a"
    return "b" + L + "a" + L + "b" + L + "b"


def n_k(k: int) -> int:
    return 2 ** k - 1


def x_length(k: int) -> int:
    return 3 * 2 ** (k - 1) + 1


def factors(word: str, length: int) -> set[str]:
    return {word[i:i + length] for i in range(len(word) - length + 1)}


def ball_class(factor: str) -> str:
    return min(factor, factor[::-1])


@dataclass
class WordFixture:
    k_max: int
    word: str
    _levels: dict = field(default_factory=dict, repr=False)

    def stable_level(self, length: int) -> int:
        """Smallest ``k`` with ``F(X_k) = F(X_{k+1}) = F(X_{k+2})`` at this length."""
        if length not in self._levels:
            self._levels[length] = self._stable_level(length)
        return self._levels[length]

    def _stable_level(self, length: int) -> int:
        for k in range(1, self.k_max - 1):
            a, b, c = (factors(X_word(j), length) for j in (k, k + 1, k + 2))
            if a and a == b == c:
                return k
        raise HorizonError(f"factors of length {length} do not stabilize below k={self.k_max}")

    def balls(self, n: int) -> set[str]:
        self.stable_level(2 * n + 1)
        return {ball_class(f) for f in factors(self.word, 2 * n + 1)}

    def b(self, n: int) -> int:
        return len(self.balls(n))

    def p(self, length: int) -> int:
        self.stable_level(length)
        return len(factors(self.word, length))

    def rpp(self, n: int, cap: int | None = None) -> int:
        """Smallest ``m`` such that one length-``2m + 1`` window holds every ``n``-ball."""
        want = self.balls(n)
        cap = cap if cap is not None else n + 2 * len(want) + 4
        w = self.word
        inner = [ball_class(w[i:i + 2 * n + 1]) for i in range(len(w) - 2 * n)]
        for m in range(n, cap + 1):
            self.stable_level(2 * m + 1)
            span = 2 * (m - n) + 1
            counts: dict[str, int] = {}
            for i, c in enumerate(inner):
                counts[c] = counts.get(c, 0) + 1
                if i >= span:
                    old = inner[i - span]
                    counts[old] -= 1
                    if not counts[old]:
                        del counts[old]
                if i >= span - 1 and len(counts) == len(want):
                    return m
        raise CapExceededError(f"R''({n}) exceeds cap {cap}")


def word_adapter(k_max: int) -> WordFixture:
    if k_max < 3:
        raise ValueError("k_max must be >= 3")
    return WordFixture(k_max, X_word(k_max))
