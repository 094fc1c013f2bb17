"""Independent evaluation of psi-tilde for 2-dimensional cones and of T_{ell,1} on B_2(Z/N).

The smooth subdivision is taken from the compact boundary of the convex hull of
the nonzero lattice points of the cone (the minimal resolution), found by brute
force, and characters are found by exhaustive search. Run once; the printed
values are frozen into the C++ tests.
"""
from fractions import Fraction
from itertools import product
from math import gcd


def primitive(v):
    g = 0
    for x in v:
        g = gcd(g, int(x))
    return tuple(int(x) // g for x in v)


def det2(a, b):
    return a[0] * b[1] - a[1] * b[0]


def hull_rays(u, w, box=40):
    """Lattice points on the compact boundary of conv(cone ∩ Z^2 minus 0), ordered from u to w."""
    d = det2(u, w)
    pts = []
    for x in range(-box, box + 1):
        for y in range(-box, box + 1):
            p = (x, y)
            if p == (0, 0):
                continue
            # p = s u + t w with s, t >= 0
            s = Fraction(det2(p, w), d)
            t = Fraction(det2(u, p), d)
            if s >= 0 and t >= 0 and s + t <= 2:
                pts.append((p, s, t))
    # walk: from current point, the next boundary point is the one that keeps all
    # other points on the far side (minimal turning), nearest first
    cur = u
    out = [u]
    while cur != w:
        best = None
        for p, s, t in pts:
            if p == cur:
                continue
            if det2(cur, p) * (1 if d > 0 else -1) <= 0:
                continue
            ok = True
            for q, _, _ in pts:
                side = det2((p[0] - cur[0], p[1] - cur[1]), (q[0] - cur[0], q[1] - cur[1]))
                if side * (1 if d > 0 else -1) > 0:
                    ok = False
                    break
            if ok:
                dist = abs(p[0] - cur[0]) + abs(p[1] - cur[1])
                if best is None or dist < best[0]:
                    best = (dist, p)
        cur = best[1]
        out.append(cur)
    return out


def solve_ray(v, b, N):
    for c in range(N):
        if all((v[i] * c - b[i]) % N == 0 for i in range(2)):
            return c
    return None


def solve_pair(v, w, b, N):
    for x, y in product(range(N), repeat=2):
        if all((v[i] * x + w[i] * y - b[i]) % N == 0 for i in range(2)):
            return (x, y)
    raise ValueError


def canon(sym, N):
    return tuple(sorted(x % N for x in sym))


def psi2(u, w, b, N):
    rays = hull_rays(u, w)
    expr = {}
    for i in range(len(rays) - 1):
        s = canon(solve_pair(rays[i], rays[i + 1], b, N), N)
        expr[s] = expr.get(s, 0) + 1
    for v in rays[1:-1]:
        c = solve_ray(v, b, N)
        if c is not None:
            s = canon((c, 0), N)
            expr[s] = expr.get(s, 0) - 1
    return {k: v for k, v in expr.items() if v}


def inv2(m):
    d = m[0][0] * m[1][1] - m[0][1] * m[1][0]
    return [[Fraction(m[1][1], d), Fraction(-m[0][1], d)], [Fraction(-m[1][0], d), Fraction(m[0][0], d)]]


def hecke_2(a, N, ell):
    total = {}
    lines = [(1, k) for k in range(ell)] + [(0, 1)]
    for line in lines:
        # L^ = Z^2 + Z line/ell, basis: line/ell and a complementary standard vector
        comp = (0, 1) if line[0] != 0 else (1, 0)
        basis = [[Fraction(line[0], ell), Fraction(comp[0])], [Fraction(line[1], ell), Fraction(comp[1])]]
        if det2((basis[0][0], basis[1][0]), (basis[0][1], basis[1][1])) == 0:
            raise ValueError
        binv = inv2(basis)
        gens = []
        for e in ((1, 0), (0, 1)):
            gens.append(primitive([binv[r][0] * e[0] + binv[r][1] * e[1] for r in range(2)]))
        b = []
        for r in range(2):
            val = binv[r][0] * a[0] + binv[r][1] * a[1]
            b.append(val.numerator * pow(val.denominator, -1, N) % N)
        for s, c in psi2(gens[0], gens[1], b, N).items():
            total[s] = total.get(s, 0) + c
    return {k: v for k, v in sorted(total.items()) if v}


if __name__ == "__main__":
    print("rays <(1,0),(1,2)>:", hull_rays((1, 0), (1, 2)))
    print("rays <(1,0),(2,3)>:", hull_rays((1, 0), (2, 3)))
    print("rays <(1,0),(1,3)>:", hull_rays((1, 0), (1, 3)))
    print("rays <(2,1),(1,3)>:", hull_rays((2, 1), (1, 3)))
    print("rays <(1,0),(1,5)>:", hull_rays((1, 0), (1, 5)))
    for a in ((1, 1), (1, 2), (0, 1)):
        print("T_{2,1}", a, "Z/3:", hecke_2(a, 3, 2))
    print("T_{2,1} (1,1) Z/5:", hecke_2((1, 1), 5, 2))
    print("psi <(1,0),(2,3)> chi=(1,2) Z/5:", psi2((1, 0), (2, 3), (1, 2), 5))
    print("psi <(1,0),(1,2)> chi=(1,0) Z/3:", psi2((1, 0), (1, 2), (1, 0), 3))


def overlattice_bases(ell):
    lines = [(1, k) for k in range(ell)] + [(0, 1)]
    for line in lines:
        comp = (0, 1) if line[0] != 0 else (1, 0)
        yield [[Fraction(line[0], ell), Fraction(comp[0])], [Fraction(line[1], ell), Fraction(comp[1])]]


def hecke_ray(a, N, ell):
    """T_{ell,1} of the ray triple (Z^2, (e1+e2) (x) a, <e1+e2>)."""
    total = {}
    for basis in overlattice_bases(ell):
        binv = inv2(basis)
        v = primitive([binv[r][0] + binv[r][1] for r in range(2)])
        b = []
        for r in range(2):
            val = (binv[r][0] + binv[r][1]) * a
            b.append(val.numerator * pow(val.denominator, -1, N) % N)
        c = solve_ray(v, b, N)
        s = canon((c, 0), N)
        total[s] = total.get(s, 0) + 1
    return total


def well_definedness(N, ell):
    import oracle
    syms, cols = oracle.relations(N, 2, "B")
    images = {s: hecke_2(s, N, ell) for s in syms}
    bad = []
    for col in cols:
        expr = {}
        for s, c in col:
            for t, d in images[s].items():
                expr[t] = expr.get(t, 0) + c * d
        terms = [(v, k) for k, v in expr.items() if v]
        if oracle.order(N, 2, "B", terms) != 1:
            bad.append(col)
    return len(cols), bad


if __name__ == "__main__":
    import oracle
    for N, ell in ((3, 2), (5, 2), (5, 3), (3, 5), (7, 2)):
        total, bad = well_definedness(N, ell)
        print(f"Z/{N} ell={ell}: {len(bad)} of {total} relation images nonzero:", bad)
    for N, ell in ((3, 2), (5, 2), (5, 3), (3, 5)):
        for a in range(1, N):
            basic = hecke_2((a, 0), N, ell)
            ray = hecke_ray(a, N, ell)
            diff = dict(basic)
            for k, v in ray.items():
                diff[k] = diff.get(k, 0) - v
            terms = [(v, k) for k, v in diff.items() if v]
            print(f"Z/{N} ell={ell} [{a},0]: basic {basic} ray {ray} order of difference",
                  oracle.order(N, 2, "B", terms))
