"""Finite groups as multiplication tables, and the constructors the toolkit needs.

Element 0 is always the identity. Each constructor fixes an element order:

* metacyclic groups ``<a, b>`` list ``a^i b^j`` with ``i`` varying fastest;
* ``semidirect(N, H)`` and ``direct_product(N, H)`` list ``(n, h)`` at index
  ``h * |N| + n``, so a generalized dihedral group lists ``H`` first, then ``Hg``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Hashable, Iterable, Sequence

import numpy as np

from .fields import field as gf, prime_power


class GroupError(ValueError):
    pass


class FiniteGroup:
    """A finite group on ``{0..n-1}`` given by its Cayley table."""

    def __init__(self, mul: np.ndarray, label: str = "", check: bool = True):
        mul = np.asarray(mul, dtype=np.int64)
        n = mul.shape[0]
        if mul.shape != (n, n):
            raise GroupError("multiplication table must be square")
        self.order = n
        self.mul = mul
        self.label = label
        self.mul.setflags(write=False)
        inv = np.argmax(mul == 0, axis=1)
        self.inv = inv
        self._gens: list[int] | None = None
        self._elem_orders: np.ndarray | None = None
        if check:
            self.check_axioms()

    def check_axioms(self, sample: int = 20000, seed: int = 0) -> None:
        n, mul = self.order, self.mul
        ar = np.arange(n)
        if not (np.array_equal(mul[0], ar) and np.array_equal(mul[:, 0], ar)):
            raise GroupError("element 0 is not the identity")
        for row in mul:
            if not np.array_equal(np.sort(row), ar):
                raise GroupError("table is not a Latin square")
        if not (np.all(mul[ar, self.inv] == 0) and np.all(mul[self.inv, ar] == 0)):
            raise GroupError("inverse law fails")
        if n <= 64:
            left = mul[mul[:, :, None], ar[None, None, :]]  # (xy)z
            right = mul[ar[:, None, None], mul[None, :, :]]  # x(yz)
            if not np.array_equal(left, right):
                raise GroupError("multiplication is not associative")
        else:
            rng = np.random.default_rng(seed)
            x, y, z = rng.integers(0, n, size=(3, sample))
            if not np.array_equal(mul[mul[x, y], z], mul[x, mul[y, z]]):
                raise GroupError("multiplication is not associative")

    def __len__(self) -> int:
        return self.order

    def __repr__(self) -> str:
        tag = f" {self.label}" if self.label else ""
        return f"FiniteGroup(order={self.order}{tag})"

    def m(self, *xs: int) -> int:
        out = 0
        for x in xs:
            out = int(self.mul[out, x])
        return out

    def power(self, x: int, k: int) -> int:
        if k < 0:
            x, k = int(self.inv[x]), -k
        out = 0
        while k:
            if k & 1:
                out = int(self.mul[out, x])
            x = int(self.mul[x, x])
            k >>= 1
        return out

    def conj(self, x: int, g: int) -> int:
        """``x^g = g^-1 x g``."""
        return int(self.mul[self.mul[self.inv[g], x], g])

    def element_orders(self) -> np.ndarray:
        if self._elem_orders is None:
            n = self.order
            orders = np.zeros(n, dtype=np.int64)
            cur = np.arange(n)
            k = 1
            while (orders == 0).any():
                hit = (cur == 0) & (orders == 0)
                orders[hit] = k
                cur = self.mul[cur, np.arange(n)]
                k += 1
            self._elem_orders = orders
        return self._elem_orders

    def element_order(self, x: int) -> int:
        return int(self.element_orders()[x])

    def exponent(self) -> int:
        return int(np.lcm.reduce(self.element_orders()))

    def is_abelian(self) -> bool:
        return bool(np.array_equal(self.mul, self.mul.T))

    def center(self) -> list[int]:
        return [x for x in range(self.order) if np.array_equal(self.mul[x], self.mul[:, x])]

    def centralizer(self, xs: Iterable[int]) -> list[int]:
        xs = list(xs)
        return [g for g in range(self.order) if all(self.mul[g, x] == self.mul[x, g] for x in xs)]

    def is_subgroup(self, H: Iterable[int]) -> bool:
        H = np.array(sorted(set(int(h) for h in H)), dtype=np.int64)
        if len(H) == 0 or H[0] != 0 or self.order % len(H):
            return False
        prods = self.mul[np.ix_(H, self.inv[H])]
        return bool(np.isin(prods, H).all())

    def is_normal(self, N: Iterable[int]) -> bool:
        N = sorted(set(int(x) for x in N))
        if not self.is_subgroup(N):
            return False
        Nset = np.zeros(self.order, dtype=bool)
        Nset[N] = True
        for g in self.generators():
            conj = self.mul[self.mul[self.inv[g], N], g]
            if not Nset[conj].all():
                return False
        return True

    def subgroup_generated(self, seeds: Iterable[int]) -> list[int]:
        return subgroup_generated(self, seeds)

    def generators(self) -> list[int]:
        """A small generating set chosen greedily (largest element order first)."""
        if self._gens is None:
            orders = self.element_orders()
            ranked = sorted(range(1, self.order), key=lambda x: (-orders[x], x))
            gens: list[int] = []
            current = {0}
            for x in ranked:
                if len(current) == self.order:
                    break
                if x not in current:
                    gens.append(x)
                    current = set(subgroup_generated(self, gens))
            self._gens = gens
        return list(self._gens)

    def conjugacy_classes(self) -> list[list[int]]:
        return conjugacy_classes(self)

    def relabel(self, perm: Sequence[int]) -> FiniteGroup:
        """Isomorphic copy where old element ``x`` becomes ``perm[x]`` (``perm[0]`` must be 0)."""
        perm = np.asarray(perm, dtype=np.int64)
        if perm[0] != 0:
            raise GroupError("relabeling must fix the identity")
        inv = np.empty_like(perm)
        inv[perm] = np.arange(len(perm))
        new = perm[self.mul[np.ix_(inv, inv)]]
        return FiniteGroup(new, label=self.label, check=False)


@dataclass
class GroupHom:
    """A homomorphism given by its image table."""

    source: FiniteGroup
    target: FiniteGroup
    images: np.ndarray = field(repr=False)

    def __post_init__(self):
        self.images = np.asarray(self.images, dtype=np.int64)
        s, t = self.source, self.target
        lhs = self.images[s.mul]
        rhs = t.mul[self.images[:, None], self.images[None, :]]
        if not np.array_equal(lhs, rhs):
            raise GroupError("map is not a homomorphism")

    def __call__(self, x: int) -> int:
        return int(self.images[x])

    def is_injective(self) -> bool:
        return len(set(self.images.tolist())) == self.source.order

    def kernel(self) -> list[int]:
        return [int(x) for x in np.nonzero(self.images == 0)[0]]


# ---------------------------------------------------------------------------
# generic builders


def from_elements(elements: Sequence[Hashable], mul: Callable, label: str = "") -> FiniteGroup:
    """Table for a concrete group; ``elements[0]`` must be the identity."""
    index = {e: i for i, e in enumerate(elements)}
    n = len(elements)
    table = np.empty((n, n), dtype=np.int64)
    for i, a in enumerate(elements):
        for j, b in enumerate(elements):
            table[i, j] = index[mul(a, b)]
    G = FiniteGroup(table, label=label)
    G.elements = list(elements)
    return G


def closure(identity: Hashable, gens: Sequence[Hashable], mul: Callable) -> list:
    """BFS closure of ``gens``; identity first, then in discovery order."""
    seen = {identity}
    out = [identity]
    for x in out:
        for g in gens:
            y = mul(x, g)
            if y not in seen:
                seen.add(y)
                out.append(y)
    return out


def subgroup_generated(G: FiniteGroup, seeds: Iterable[int]) -> list[int]:
    seeds = [int(s) for s in seeds]
    seen = np.zeros(G.order, dtype=bool)
    seen[0] = True
    frontier = [0]
    while frontier:
        nxt = []
        for x in frontier:
            for s in seeds:
                y = int(G.mul[x, s])
                if not seen[y]:
                    seen[y] = True
                    nxt.append(y)
        frontier = nxt
    return [int(x) for x in np.nonzero(seen)[0]]


def metacyclic(m: int, s: int, r: int, t: int = 0, label: str = "") -> FiniteGroup:
    """``<a, b | a^m = 1, b^s = a^t, a^b = a^r>``; element ``a^i b^j`` has index ``j*m + i``."""
    r %= m
    if math.gcd(r, m) != 1 and m > 1:
        raise GroupError("r must be a unit mod m")
    # b a b^-1 = a^R with R = r^-1
    R = pow(r, -1, m) if m > 1 else 0
    if pow(R, s, m) != 1 % m or (R * t - t) % m:
        raise GroupError("inconsistent metacyclic parameters")
    n = m * s
    i = np.arange(n) % m
    j = np.arange(n) // m
    Rpow = np.array([pow(R, int(e), m) if m > 1 else 0 for e in range(s)], dtype=np.int64)
    # (a^i1 b^j1)(a^i2 b^j2) = a^(i1 + i2 R^j1) b^(j1 + j2)
    ii = i[:, None] + i[None, :] * Rpow[j][:, None]
    jj = j[:, None] + j[None, :]
    wrap = jj >= s
    ii = (ii + np.where(wrap, t, 0)) % m if m > 1 else np.zeros_like(ii)
    jj = jj % s
    return FiniteGroup(jj * m + ii, label=label)


def cyclic(n: int) -> FiniteGroup:
    if n < 1:
        raise GroupError("order must be positive")
    return metacyclic(n, 1, 1, label=f"C{n}")


def dihedral(order: int) -> FiniteGroup:
    """Dihedral group of the given (even) order."""
    if order < 2 or order % 2:
        raise GroupError("dihedral order must be even and >= 2")
    n = order // 2
    return metacyclic(n, 2, -1, label=f"D{order}")


def quaternion_generalized(order: int) -> FiniteGroup:
    pk = prime_power(order)
    if pk is None or pk[0] != 2 or pk[1] < 3:
        raise GroupError("generalized quaternion needs order 2^k with k >= 3")
    m = order // 2
    return metacyclic(m, 2, -1, t=m // 2, label=f"Q{order}")


def semidihedral(order: int) -> FiniteGroup:
    pk = prime_power(order)
    if pk is None or pk[0] != 2 or pk[1] < 4:
        raise GroupError("semidihedral needs order 2^k with k >= 4")
    m = order // 2
    return metacyclic(m, 2, -1 + m // 2, label=f"SD{order}")


def modular_M(p: int, k: int) -> FiniteGroup:
    if prime_power(p) != (p, 1) or k < 3 or (p == 2 and k <= 3):
        raise GroupError("M_{p^k} needs prime p, k >= 3, and k > 3 when p = 2")
    m = p ** (k - 1)
    return metacyclic(m, p, 1 + p ** (k - 2), label=f"M{p**k}")


def elementary_abelian(p: int, k: int) -> FiniteGroup:
    """Additive group of ``GF(p)^k``; element index is the base-``p`` digit vector."""
    if prime_power(p) != (p, 1) or k < 0:
        raise GroupError("elementary abelian needs a prime p")
    n = p**k
    place = p ** np.arange(k, dtype=np.int64)
    digits = (np.arange(n)[:, None] // place[None, :]) % p
    table = ((digits[:, None, :] + digits[None, :, :]) % p) @ place
    return FiniteGroup(table.reshape(n, n), label=f"E{n}")


def additive_group(q: int) -> FiniteGroup:
    """Additive group of ``GF(q)`` with element index = field element code."""
    F = gf(q)
    return FiniteGroup(F.add_table(), label=f"E{q}" if F.k > 1 else f"C{q}")


def semidirect(N: FiniteGroup, H: FiniteGroup, action: np.ndarray | Sequence[Sequence[int]],
               label: str = "") -> FiniteGroup:
    """``N : H`` with ``(n1, h1)(n2, h2) = (n1 * act[h1](n2), h1 h2)``.

    ``action[h]`` is the automorphism of ``N`` by which ``h`` acts, as an image array.
    """
    act = np.asarray(action, dtype=np.int64)
    if act.shape != (H.order, N.order):
        raise GroupError("action must be an |H| x |N| array")
    for h in range(H.order):
        a = act[h]
        if not np.array_equal(np.sort(a), np.arange(N.order)):
            raise GroupError(f"action of {h} is not a bijection")
        if not np.array_equal(a[N.mul], N.mul[a[:, None], a[None, :]]):
            raise GroupError(f"action of {h} is not an automorphism")
    # act[h1 h2] = act[h1] o act[h2]
    lhs = act[H.mul]
    rhs = act[np.arange(H.order)[:, None, None], act[None, :, :]]
    if not np.array_equal(lhs, rhs):
        raise GroupError("action is not a homomorphism into Aut(N)")
    nN, nH = N.order, H.order
    n = nN * nH
    idx = np.arange(n)
    nn, hh = idx % nN, idx // nN
    n2 = act[hh[:, None], nn[None, :]]
    new_n = N.mul[nn[:, None], n2]
    new_h = H.mul[hh[:, None], hh[None, :]]
    return FiniteGroup(new_h * nN + new_n, label=label)


def direct_product(A: FiniteGroup, B: FiniteGroup, label: str = "") -> FiniteGroup:
    act = np.tile(np.arange(A.order), (B.order, 1))
    return semidirect(A, B, act, label=label or (f"{A.label}x{B.label}" if A.label and B.label else ""))


def cyclic_action(N: FiniteGroup, m: int, auto: Sequence[int]) -> np.ndarray:
    """Action array of ``C_m`` on ``N`` where the generator acts by ``auto``."""
    auto = np.asarray(auto, dtype=np.int64)
    rows = [np.arange(N.order)]
    for _ in range(1, m):
        rows.append(auto[rows[-1]])
    return np.array(rows)


def generalized_dihedral(H: FiniteGroup) -> FiniteGroup:
    if not H.is_abelian():
        raise GroupError("generalized dihedral needs an abelian group")
    act = np.array([np.arange(H.order), H.inv])
    tag = f"Dih({H.label})" if H.label else ""
    return semidirect(H, cyclic(2), act, label=tag)


def g16() -> FiniteGroup:
    """``<a,b,c | a^4=b^2=c^2=[a,b]=[a,c]=1, [b,c]=a^2>`` as ``(C4 x C2) : C2``."""
    N = direct_product(cyclic(4), cyclic(2))  # a^i b^j at j*4 + i
    # c^-1 b c = b a^2, c fixes a
    auto = [((i + 2 * j) % 4) + 4 * j for j in range(2) for i in range(4)]
    return semidirect(N, cyclic(2), cyclic_action(N, 2, auto), label="G16")


def sg16_3() -> FiniteGroup:
    """``(C4 x C2) : C2`` with ``c^-1 a c = ab``, ``c`` centralizing ``b`` (SmallGroup(16,3))."""
    N = direct_product(cyclic(4), cyclic(2))
    auto = [(i % 4) + 4 * ((j + i) % 2) for j in range(2) for i in range(4)]
    return semidirect(N, cyclic(2), cyclic_action(N, 2, auto), label="SG(16,3)")


def frobenius_field(p: int, k: int, m: int) -> FiniteGroup:
    """``E_{p^k} : C_m`` with ``C_m`` multiplying ``GF(p^k)`` by an element of order ``m``."""
    q = p**k
    if prime_power(p) != (p, 1):
        raise GroupError("p must be prime")
    if (q - 1) % m:
        raise GroupError(f"{m} does not divide {q - 1}")
    F = gf(q)
    N = additive_group(q)
    c = F.pow(F.primitive, (q - 1) // m)
    auto = [F.mul(c, v) for v in range(q)]
    return semidirect(N, cyclic(m), cyclic_action(N, m, auto), label=f"E{q}:C{m}")


def symmetric_group(n: int) -> FiniteGroup:
    import itertools

    elems = list(itertools.permutations(range(n)))
    return from_elements(elems, lambda a, b: tuple(b[i] for i in a), label=f"S{n}")


def alternating_group(n: int) -> FiniteGroup:
    import itertools

    def sign(p):
        s, seen = 1, set()
        for i in range(len(p)):
            if i in seen:
                continue
            j, ln = i, 0
            while j not in seen:
                seen.add(j)
                j = p[j]
                ln += 1
            s *= -1 if ln % 2 == 0 else 1
        return s

    elems = [p for p in itertools.permutations(range(n)) if sign(p) == 1]
    return from_elements(elems, lambda a, b: tuple(b[i] for i in a), label=f"A{n}")


def psl2(q: int) -> FiniteGroup:
    """``PSL_2(q)`` from 2x2 determinant-one matrices over ``GF(q)`` modulo ``+-I``."""
    if prime_power(q) is None:
        raise GroupError(f"{q} is not a prime power")
    if q > 13:
        raise GroupError("psl2 is capped at q <= 13")
    F = gf(q)
    add, mult = F.add_table(), F.mul_table()
    neg = np.array([F.neg(x) for x in range(q)])

    def canon(M):
        a, b, c, d = M
        other = (int(neg[a]), int(neg[b]), int(neg[c]), int(neg[d]))
        return min(M, other)

    def mm(X, Y):
        a, b, c, d = X
        e, f, g, h = Y
        return canon((int(add[mult[a, e], mult[b, g]]), int(add[mult[a, f], mult[b, h]]),
                      int(add[mult[c, e], mult[d, g]]), int(add[mult[c, f], mult[d, h]])))

    gens = [canon((1, x, 0, 1)) for x in range(1, q)] + [canon((1, 0, x, 1)) for x in range(1, q)]
    elems = closure(canon((1, 0, 0, 1)), gens, mm)
    keys = np.array([((a * q + b) * q + c) * q + d for a, b, c, d in elems], dtype=np.int64)
    order = np.argsort(keys)
    sorted_keys = keys[order]
    arr = np.array(elems, dtype=np.int64)
    A, B, C, D = arr.T
    n = len(elems)
    # all pairwise products at once

    P = add[mult[A[:, None], A[None, :]], mult[B[:, None], C[None, :]]]
    Q = add[mult[A[:, None], B[None, :]], mult[B[:, None], D[None, :]]]
    R = add[mult[C[:, None], A[None, :]], mult[D[:, None], C[None, :]]]
    S = add[mult[C[:, None], B[None, :]], mult[D[:, None], D[None, :]]]
    k1 = ((P * q + Q) * q + R) * q + S
    k2 = ((neg[P] * q + neg[Q]) * q + neg[R]) * q + neg[S]
    k = np.minimum(k1, k2)
    table = order[np.searchsorted(sorted_keys, k)]
    label = f"PSL2({q})"
    return FiniteGroup(table.reshape(n, n), label=label, check=n <= 64)


# ---------------------------------------------------------------------------
# structure


def conjugacy_classes(G: FiniteGroup) -> list[list[int]]:
    """Classes ordered by smallest element; class of the identity first."""
    n = G.order
    ar = np.arange(n)
    conj = G.mul[G.mul[G.inv[:, None], ar[None, :]], ar[:, None]]  # conj[g, x] = g^-1 x g
    seen = np.zeros(n, dtype=bool)
    out = []
    for x in range(n):
        if not seen[x]:
            cls = np.unique(conj[:, x])
            seen[cls] = True
            out.append([int(c) for c in cls])
    return out


def quotient(G: FiniteGroup, N: Iterable[int]) -> tuple[FiniteGroup, np.ndarray]:
    """``G/N`` and the projection array; cosets are numbered by smallest element."""
    N = sorted(set(int(x) for x in N))
    if not G.is_normal(N):
        raise GroupError("N is not a normal subgroup")
    proj = np.full(G.order, -1, dtype=np.int64)
    reps = []
    for x in range(G.order):
        if proj[x] < 0:
            proj[G.mul[x, N]] = len(reps)
            reps.append(x)
    reps = np.array(reps)
    table = proj[G.mul[np.ix_(reps, reps)]]
    return FiniteGroup(table, check=False), proj


def _class_sizes(G: FiniteGroup) -> np.ndarray:
    sizes = np.zeros(G.order, dtype=np.int64)
    for cls in conjugacy_classes(G):
        sizes[cls] = len(cls)
    return sizes


def _invariants(G: FiniteGroup) -> np.ndarray:
    return np.stack([G.element_orders(), _class_sizes(G)], axis=1)


def _extend(A: FiniteGroup, B: FiniteGroup, gens: Sequence[int], imgs: Sequence[int]) -> np.ndarray | None:
    """Extend a generator assignment to a partial injective hom on ``<gens>``; None if impossible."""
    phi = np.full(A.order, -1, dtype=np.int64)
    used = np.zeros(B.order, dtype=bool)
    phi[0] = 0
    used[0] = True
    queue = [0]
    for x in queue:
        for g, h in zip(gens, imgs):
            y = int(A.mul[x, g])
            w = int(B.mul[phi[x], h])
            if phi[y] < 0:
                if used[w]:
                    return None
                phi[y] = w
                used[w] = True
                queue.append(y)
            elif phi[y] != w:
                return None
    return phi


def _iso_search(A: FiniteGroup, B: FiniteGroup, find_all: bool):
    if A.order != B.order:
        return []
    ia, ib = _invariants(A), _invariants(B)
    key = lambda arr: sorted(map(tuple, arr.tolist()))
    if key(ia) != key(ib):
        return []
    gens = A.generators()
    cands = []
    for g in gens:
        cands.append([h for h in range(B.order) if tuple(ib[h]) == tuple(ia[g])])
    results = []

    def rec(level: int, imgs: list[int]) -> bool:
        if level == len(gens):
            phi = _extend(A, B, gens, imgs)
            if phi is not None and (phi >= 0).all():
                results.append(phi)
                return not find_all
            return False
        for h in cands[level]:
            imgs.append(h)
            if _extend(A, B, gens[: level + 1], imgs) is not None:
                if rec(level + 1, imgs):
                    return True
            imgs.pop()
        return False

    rec(0, [])
    return results


def is_isomorphic(A: FiniteGroup, B: FiniteGroup) -> GroupHom | None:
    """An isomorphism ``A -> B`` (lexicographically first on ``A.generators()``), or None."""
    found = _iso_search(A, B, find_all=False)
    if not found:
        return None
    return GroupHom(A, B, found[0])


def automorphisms(G: FiniteGroup) -> list[np.ndarray]:
    """All automorphisms of ``G`` as image arrays (identity first)."""
    return _iso_search(G, G, find_all=True)


def is_automorphism(G: FiniteGroup, images: Sequence[int]) -> bool:
    a = np.asarray(images)
    return bool(np.array_equal(np.sort(a), np.arange(G.order))) and bool(
        np.array_equal(a[G.mul], G.mul[a[:, None], a[None, :]]))


def induced_subgroup(G: FiniteGroup, elements: Iterable[int], label: str = "") -> tuple[FiniteGroup, np.ndarray]:
    """A subgroup as its own FiniteGroup, plus the embedding array (sorted, identity first)."""
    elems = np.array(sorted(set(int(x) for x in elements)), dtype=np.int64)
    if not G.is_subgroup(elems.tolist()):
        raise GroupError("elements do not form a subgroup")
    index = np.full(G.order, -1, dtype=np.int64)
    index[elems] = np.arange(len(elems))
    table = index[G.mul[np.ix_(elems, elems)]]
    return FiniteGroup(table, label=label, check=False), elems


def group_from_perms(group, label: str = "", limit: int = 100_000) -> tuple[FiniteGroup, list]:
    """Cayley table of a PermGroup; returns the table and its element list (identity first)."""
    elems = sorted(group.elements(), key=lambda p: p.images.tolist())
    if len(elems) > limit:
        raise GroupError(f"group of order {len(elems)} exceeds table limit {limit}")
    index = {p.key(): i for i, p in enumerate(elems)}
    n = len(elems)
    table = np.empty((n, n), dtype=np.int64)
    imgs = np.array([p.images for p in elems])
    for i in range(n):
        prod = imgs[:, imgs[i]]  # rows: elems[i] * elems[j] applies i first then j
        for j in range(n):
            table[i, j] = index[prod[j].tobytes()]
    return FiniteGroup(table, label=label, check=False), elems
