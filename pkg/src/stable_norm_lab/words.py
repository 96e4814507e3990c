"""Words in surface-group generators.

A letter is a nonzero integer: ``+k`` is the generator with 1-based index
``k`` and ``-k`` its inverse.  Generators are ordered ``a1, b1, a2, b2, ...``,
so index ``2i-1`` is ``a_i`` and ``2i`` is ``b_i``.  Text form uses lower case
for generators and upper case for inverses, e.g. ``"a1 b1 A1 B1"``.
"""

import re
from typing import Iterable, Sequence, Tuple

from .errors import InvalidInputError

Word = Tuple[int, ...]

_TOKEN = re.compile(r"([abAB])(\d+)(?:\^(-?\d+))?$")


def letter_key(x: int):
    """Fixed total order on letters: a1 < A1 < b1 < B1 < a2 < ..."""
    return (abs(x), x < 0)


def word_key(w: Sequence[int]):
    return tuple(letter_key(x) for x in w)


def is_reduced(w: Sequence[int]) -> bool:
    return all(w[i] != -w[i + 1] for i in range(len(w) - 1))


def free_reduce(w: Iterable[int]) -> Word:
    out = []
    for x in w:
        if out and out[-1] == -x:
            out.pop()
        else:
            out.append(x)
    return tuple(out)


def make_word(letters: Iterable[int], ngens: int = None) -> Word:
    """Validate and return a freely reduced word.

    Raises InvalidInputError on zero letters, letters beyond ``ngens`` or
    adjacent cancelling pairs (words are required to be freely reduced).
    """
    w = tuple(int(x) for x in letters)
    for x in w:
        if x == 0 or (ngens is not None and abs(x) > ngens):
            raise InvalidInputError(f"bad generator index {x} in word {w}")
    if not is_reduced(w):
        raise InvalidInputError(f"word {format_word(w)!r} is not freely reduced")
    return w


def inverse(w: Sequence[int]) -> Word:
    return tuple(-x for x in reversed(w))


def cyclic_reduce(w: Sequence[int]) -> Word:
    w = list(free_reduce(w))
    i, j = 0, len(w) - 1
    while i < j and w[i] == -w[j]:
        i += 1
        j -= 1
    return tuple(w[i : j + 1])


def min_rotation(w: Sequence[int]) -> Word:
    """Lexicographically least rotation under :func:`letter_key`."""
    if not w:
        return ()
    keys = [letter_key(x) for x in w]
    n = len(w)
    best = 0
    for r in range(1, n):
        for k in range(n):
            a, b = keys[(r + k) % n], keys[(best + k) % n]
            if a != b:
                if a < b:
                    best = r
                break
    return tuple(w[best:]) + tuple(w[:best])


def canonical_cyclic(w: Sequence[int]) -> Word:
    """Canonical representative of the cyclic word: cyclic reduction + least rotation."""
    return min_rotation(cyclic_reduce(w))


def primitive_root(w: Sequence[int]) -> Tuple[Word, int]:
    """Return ``(u, n)`` with ``w == u * n`` and ``n`` maximal."""
    w = tuple(w)
    n = len(w)
    for p in range(1, n + 1):
        if n % p == 0 and w[:p] * (n // p) == w:
            return w[:p], n // p
    return w, 1


def exponent_sums(w: Iterable[int], ngens: int) -> Tuple[int, ...]:
    """Abelianisation: exponent-sum vector ordered a1, b1, ..., ag, bg."""
    h = [0] * ngens
    for x in w:
        if x == 0 or abs(x) > ngens:
            raise InvalidInputError(f"bad generator index {x}")
        h[abs(x) - 1] += 1 if x > 0 else -1
    return tuple(h)


def _letter_text(x: int) -> str:
    k = abs(x)
    name = ("a" if k % 2 == 1 else "b") + str((k + 1) // 2)
    return name if x > 0 else name.upper()


def format_word(w: Sequence[int]) -> str:
    return " ".join(_letter_text(x) for x in w)


def parse_word(text: str) -> Word:
    """Parse ``"a1 b1 A1 B1"``; ``a1^-2`` style powers are accepted too."""
    out = []
    for tok in text.replace(".", " ").split():
        m = _TOKEN.match(tok)
        if not m:
            raise InvalidInputError(f"cannot parse token {tok!r} in word {text!r}")
        ch, idx, power = m.group(1), int(m.group(2)), m.group(3)
        if idx < 1:
            raise InvalidInputError(f"generator index must be >= 1 in {tok!r}")
        k = 2 * idx - 1 if ch in "aA" else 2 * idx
        sign = 1 if ch.islower() else -1
        p = int(power) if power is not None else 1
        out.extend([sign * k if p > 0 else -sign * k] * abs(p))
    return free_reduce(out)


def relation_word(genus: int) -> Word:
    """The surface relation [a1,b1]...[ag,bg]."""
    w = []
    for i in range(genus):
        a, b = 2 * i + 1, 2 * i + 2
        w += [a, b, -a, -b]
    return tuple(w)
