"""Permutations in one-line notation: ``p[k]`` is the image of ``k`` (0-based)."""

from __future__ import annotations

from itertools import combinations, permutations
from typing import Iterator, Sequence

Perm = tuple[int, ...]


def identity(d: int) -> Perm:
    return tuple(range(d))


def compose(p: Sequence[int], r: Sequence[int]) -> Perm:
    """The product ``p r``, i.e. ``k -> p[r[k]]``."""
    return tuple(p[k] for k in r)


def inverse(p: Sequence[int]) -> Perm:
    out = [0] * len(p)
    for k, v in enumerate(p):
        out[v] = k
    return tuple(out)


def sign(p: Sequence[int]) -> int:
    inv = sum(1 for a, b in combinations(p, 2) if a > b)
    return -1 if inv % 2 else 1


def transposition(d: int, i: int, j: int) -> Perm:
    p = list(range(d))
    p[i], p[j] = p[j], p[i]
    return tuple(p)


def is_perm(p: Sequence[int]) -> bool:
    return sorted(p) == list(range(len(p)))


def adjacent_word(p: Sequence[int]) -> list[int]:
    """Indices ``i`` with ``p = s_{i_1} s_{i_2} ...`` where ``s_i`` swaps i and i+1.

    The word is reduced (its length is the inversion count).
    """
    q = list(p)
    word = []
    done = False
    while not done:
        done = True
        for i in range(len(q) - 1):
            if q[i] > q[i + 1]:
                q[i], q[i + 1] = q[i + 1], q[i]
                word.append(i)
                done = False
    word.reverse()
    return word


def all_perms(d: int) -> Iterator[Perm]:
    return (tuple(p) for p in permutations(range(d)))


def shuffles(sizes: Sequence[int]) -> Iterator[Perm]:
    """Permutations increasing on each consecutive block of the given sizes.

    These are the minimal coset representatives for the Young subgroup
    of the block decomposition.
    """
    d = sum(sizes)
    starts = [sum(sizes[:t]) for t in range(len(sizes))]
    for p in all_perms(d):
        if all(all(p[s + k] < p[s + k + 1] for k in range(n - 1))
               for s, n in zip(starts, sizes)):
            yield p
