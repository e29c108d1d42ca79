"""Finite groups as multiplication tables, with coset machinery.

Elements are indices 0..order-1; presets put the identity at index 0.
Coset representatives are always the lexicographically smallest member,
so every derived object is deterministic across runs.
"""
from __future__ import annotations

from dataclasses import dataclass
from itertools import permutations

import numpy as np


class FiniteGroup:
    """A group given by its multiplication table table[i][j] = i*j.

    Associativity, identity and inverses are verified at construction;
    only desk-scale orders are intended.
    """

    __slots__ = ("table", "order", "identity", "inverses", "name")

    def __init__(self, table, name: str = "group"):
        table = np.array(table, dtype=int)
        n = table.shape[0]
        if table.shape != (n, n):
            raise ValueError("multiplication table must be square")
        if table.min() < 0 or table.max() >= n:
            raise ValueError("table entries must be element indices")
        identity = None
        for e in range(n):
            if all(table[e][j] == j and table[j][e] == j for j in range(n)):
                identity = e
                break
        if identity is None:
            raise ValueError("table has no identity element")
        inverses = [-1] * n
        for g in range(n):
            for h in range(n):
                if table[g][h] == identity and table[h][g] == identity:
                    inverses[g] = h
                    break
            if inverses[g] < 0:
                raise ValueError(f"element {g} has no inverse")
        for a in range(n):
            for b in range(n):
                for c in range(n):
                    if table[table[a][b]][c] != table[a][table[b][c]]:
                        raise ValueError("table is not associative")
        table.setflags(write=False)
        self.table = table
        self.order = n
        self.identity = int(identity)
        self.inverses = tuple(inverses)
        self.name = name

    def multiply(self, g: int, h: int) -> int:
        return int(self.table[g][h])

    def inverse(self, g: int) -> int:
        return self.inverses[g]

    def elements(self) -> range:
        return range(self.order)

    def closure(self, elements) -> tuple[int, ...]:
        """Subgroup generated by the given elements (always contains e)."""
        current = {self.identity, *elements}
        while True:
            grown = set(current)
            for a in current:
                grown.add(self.inverse(a))
                for b in current:
                    grown.add(self.multiply(a, b))
            if grown == current:
                return tuple(sorted(current))
            current = grown

    def is_subgroup(self, elements) -> bool:
        s = set(elements)
        if self.identity not in s:
            return False
        return all(
            self.inverse(a) in s and self.multiply(a, b) in s
            for a in s for b in s
        )

    def element_order(self, g: int) -> int:
        k, x = 1, g
        while x != self.identity:
            x = self.multiply(x, g)
            k += 1
        return k

    def cyclic_generator(self, elements) -> int | None:
        """An element generating the given subgroup, if one exists."""
        target = set(elements)
        for g in elements:
            if set(self.closure([g])) == target:
                return g
        return None

    def __repr__(self):
        return f"FiniteGroup({self.name}, order={self.order})"

    # -- presets -------------------------------------------------------

    @classmethod
    def cyclic(cls, n: int) -> "FiniteGroup":
        table = [[(i + j) % n for j in range(n)] for i in range(n)]
        return cls(table, name=f"Z{n}")

    @classmethod
    def dihedral(cls, n: int) -> "FiniteGroup":
        """Order 2n: indices 0..n-1 are rotations r^i, n..2n-1 are s r^i."""
        def mul(a, b):
            fa, ia = divmod(a, n)
            fb, ib = divmod(b, n)
            if fa == 0 and fb == 0:
                return (ia + ib) % n
            if fa == 0 and fb == 1:
                return n + (ib - ia) % n
            if fa == 1 and fb == 0:
                return n + (ia + ib) % n
            return (ib - ia) % n
        table = [[mul(a, b) for b in range(2 * n)] for a in range(2 * n)]
        return cls(table, name=f"D{n}")

    @classmethod
    def symmetric(cls, n: int) -> "FiniteGroup":
        """S_n with elements enumerated in lexicographic permutation order,
        so the identity is index 0. Composition acts left-to-first:
        (p*q)(x) = p(q(x))."""
        perms = list(permutations(range(n)))
        index = {p: i for i, p in enumerate(perms)}
        table = [
            [index[tuple(p[q[x]] for x in range(n))] for q in perms]
            for p in perms
        ]
        return cls(table, name=f"S{n}")


@dataclass(frozen=True)
class CosetSpace:
    """Right cosets H\\G with lexicographic representatives.

    For every g the unique factorization g = h . rep(coset(g)) is stored,
    so equivariant extension of section values is a table lookup.
    """

    group: FiniteGroup
    subgroup: tuple[int, ...]
    representatives: tuple[int, ...]
    coset_of: tuple[int, ...]
    h_part: tuple[int, ...]

    @property
    def size(self) -> int:
        return len(self.representatives)

    def factor(self, g: int) -> tuple[int, int]:
        """(h, coset index) with g = h * representatives[coset index]."""
        return self.h_part[g], self.coset_of[g]


def right_cosets(group: FiniteGroup, subgroup) -> CosetSpace:
    sub = tuple(sorted(set(subgroup)))
    if not group.is_subgroup(sub):
        raise ValueError("not a subgroup")
    seen = [-1] * group.order
    reps = []
    for g in range(group.order):
        if seen[g] >= 0:
            continue
        idx = len(reps)
        reps.append(g)
        for h in sub:
            seen[group.multiply(h, g)] = idx
    h_part = [0] * group.order
    for g in range(group.order):
        rep = reps[seen[g]]
        h_part[g] = group.multiply(g, group.inverse(rep))
    return CosetSpace(group, sub, tuple(reps), tuple(seen), tuple(h_part))


@dataclass(frozen=True)
class LeftCosetSpace:
    """Left cosets G/H with lexicographic representatives and the
    factorization g = rep(coset(g)) * h."""

    group: FiniteGroup
    subgroup: tuple[int, ...]
    representatives: tuple[int, ...]
    coset_of: tuple[int, ...]
    h_part: tuple[int, ...]

    @property
    def size(self) -> int:
        return len(self.representatives)

    def factor(self, g: int) -> tuple[int, int]:
        """(coset index, h) with g = representatives[coset index] * h."""
        return self.coset_of[g], self.h_part[g]


def left_cosets(group: FiniteGroup, subgroup) -> LeftCosetSpace:
    sub = tuple(sorted(set(subgroup)))
    if not group.is_subgroup(sub):
        raise ValueError("not a subgroup")
    seen = [-1] * group.order
    reps = []
    for g in range(group.order):
        if seen[g] >= 0:
            continue
        idx = len(reps)
        reps.append(g)
        for h in sub:
            seen[group.multiply(g, h)] = idx
    h_part = [0] * group.order
    for g in range(group.order):
        rep = reps[seen[g]]
        h_part[g] = group.multiply(group.inverse(rep), g)
    return LeftCosetSpace(group, sub, tuple(reps), tuple(seen), tuple(h_part))
