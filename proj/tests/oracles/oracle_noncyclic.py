"""Structure of B_2(G) and M_2(G) for G = Z/2 x Z/4 by brute force.

Characters are pairs (x mod 2, y mod 4); a symbol is faithful when its two
entries generate G, tested by closing the span under addition.
"""
import itertools

from sympy import Matrix, ZZ
from sympy.matrices.normalforms import invariant_factors

ORDERS = (2, 4)


def add(a, b):
    return tuple((x + y) % m for x, y, m in zip(a, b, ORDERS))


def neg(a):
    return tuple((-x) % m for x, m in zip(a, ORDERS))


def span(gens):
    seen = {(0, 0)}
    frontier = [(0, 0)]
    while frontier:
        p = frontier.pop()
        for g in gens:
            q = add(p, g)
            if q not in seen:
                seen.add(q)
                frontier.append(q)
    return seen


ELEMENTS = list(itertools.product(range(2), range(4)))
SYMBOLS = sorted({tuple(sorted(p)) for p in itertools.product(ELEMENTS, repeat=2) if len(span(p)) == 8})
INDEX = {s: i for i, s in enumerate(SYMBOLS)}


def canon(a, b):
    return tuple(sorted((a, b)))


def structure(variant):
    cols = []
    for a, b in SYMBOLS:
        col = [0] * len(SYMBOLS)
        col[INDEX[(a, b)]] += 1
        if variant == "B" and a == b:
            col[INDEX[canon((0, 0), a)]] -= 1
        else:
            col[INDEX[canon(a, add(b, neg(a)))]] -= 1
            col[INDEX[canon(add(a, neg(b)), b)]] -= 1
        if any(col):
            cols.append(col)
    m = Matrix(cols).T
    f = [abs(int(x)) for x in invariant_factors(m, domain=ZZ) if x != 0]
    return len(SYMBOLS), len(SYMBOLS) - len(f), [x for x in f if x > 1]


if __name__ == "__main__":
    for v in ("B", "M"):
        gens, rank, torsion = structure(v)
        print(f"{v}_2(Z/2 x Z/4): generators {gens}, rank {rank}, torsion {torsion}")
