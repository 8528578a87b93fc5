"""Level-finite simplicial sets used as box-product ingredients.

Simplices at level n are (n+1)-tuples; the action of an operator
[m] -> [n] is reindexing.  This covers standard simplices, their
boundaries and horns, and the chaotic-nerve interval with vertices
DIAMOND (0) and FILLED (1).
"""

from __future__ import annotations

import itertools
from functools import lru_cache

DIAMOND = 0
FILLED = 1


class SimplicialSet:
    """Simplices are value tuples; subclasses fix levels and membership."""

    name = "sset"

    def level(self, n):
        raise NotImplementedError

    def contains(self, x):
        raise NotImplementedError

    def act(self, x, alpha):
        """Restrict the simplex x (at level alpha.dst) along alpha."""
        return tuple(x[v] for v in alpha.values)

    def __repr__(self):
        return f"<{self.name}>"


class StandardSimplex(SimplicialSet):
    def __init__(self, q):
        self.q = q
        self.name = f"Delta[{q}]"

    @lru_cache(maxsize=None)
    def _level(self, n):
        return tuple(itertools.combinations_with_replacement(range(self.q + 1), n + 1))

    def level(self, n):
        return self._level(n)

    def contains(self, x):
        return all(0 <= v <= self.q for v in x) and all(
            x[i] <= x[i + 1] for i in range(len(x) - 1)
        )


class BoundarySimplex(SimplicialSet):
    """Non-surjective simplices of the standard simplex."""

    def __init__(self, q):
        self.q = q
        self.full = StandardSimplex(q)
        self.name = f"bdDelta[{q}]"

    def level(self, n):
        return tuple(x for x in self.full.level(n) if self.contains(x))

    def contains(self, x):
        return self.full.contains(x) and set(x) != set(range(self.q + 1))


class HornSimplex(SimplicialSet):
    """Simplices missing some vertex other than i."""

    def __init__(self, q, i):
        if not 0 <= i <= q:
            raise ValueError(f"horn index {i} out of range for Delta[{q}]")
        self.q = q
        self.i = i
        self.full = StandardSimplex(q)
        self.name = f"Horn^{i}[{q}]"

    def level(self, n):
        return tuple(x for x in self.full.level(n) if self.contains(x))

    def contains(self, x):
        if not self.full.contains(x):
            return False
        missing = set(range(self.q + 1)) - set(x)
        return bool(missing - {self.i})


class Interval(SimplicialSet):
    """Nerve of the chaotic category on two objects: all 0/1 tuples."""

    name = "J"

    @lru_cache(maxsize=None)
    def _level(self, n):
        return tuple(itertools.product((DIAMOND, FILLED), repeat=n + 1))

    def level(self, n):
        return self._level(n)

    def contains(self, x):
        return all(v in (DIAMOND, FILLED) for v in x)


class DiamondPoint(SimplicialSet):
    """The DIAMOND endpoint inclusion into the interval."""

    name = "{diamond}"

    def level(self, n):
        return ((DIAMOND,) * (n + 1),)

    def contains(self, x):
        return all(v == DIAMOND for v in x)


class EmptySSet(SimplicialSet):
    name = "empty"

    def level(self, n):
        return ()

    def contains(self, x):
        return False


# shared instances; all classes are stateless past construction
J = Interval()
DIAMOND_POINT = DiamondPoint()
EMPTY = EmptySSet()


@lru_cache(maxsize=None)
def standard_simplex(q):
    return StandardSimplex(q)


@lru_cache(maxsize=None)
def boundary_sset(q):
    return BoundarySimplex(q)


@lru_cache(maxsize=None)
def horn_sset(q, i):
    return HornSimplex(q, i)
