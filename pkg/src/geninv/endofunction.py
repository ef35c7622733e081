"""Drazin and left-Drazin inverses of finite endofunctions.

The image chain V = T^0(V) containing T^1(V) containing ... stabilizes by
step |V|; the restriction of T to the stabilized image is the permutation
of the functional graph's cyclic part. The Drazin inverse is
S^-(k+1) T^k on that permutation; the left-Drazin inverse only needs an
injective restriction and is free off T^(k+1)(V).
"""

from dataclasses import dataclass

import numpy as np

from .core_ops import FiniteOperator, compose, power


def _require_endo(T):
    if not T.is_endofunction:
        raise ValueError("operator must map a set to itself")


@dataclass
class ImageChain:
    sets: list                 # [T^0(V), T^1(V), ..., T^k*(V)], sorted id arrays
    stabilization_step: int    # first k with T^k(V) = T^(k+1)(V)
    injective: list            # per step k: T restricted to sets[k] is injective
    bijective: list            # per step k: restriction is a bijection of sets[k]


def image_chain(T):
    """Nested images with per-step injective/bijective flags."""
    _require_endo(T)
    t = T.arr
    sets = [np.arange(T.domain_size, dtype=np.int64)]
    injective = []
    bijective = []
    while True:
        cur = sets[-1]
        nxt = np.unique(t[cur]) if cur.size else cur
        inj = len(nxt) == len(cur)
        bij = inj and np.array_equal(nxt, cur)
        injective.append(inj)
        bijective.append(bij)
        if np.array_equal(nxt, cur):
            return ImageChain(sets, len(sets) - 1, injective, bijective)
        sets.append(nxt)


@dataclass
class DrazinResult:
    exists: bool
    inverse: FiniteOperator    # None when no Drazin inverse exists
    index: int                 # minimal m with T^(m+1) G = T^m
    k: int                     # chain parameter used by the construction


def drazin_inverse(T):
    """Drazin inverse by the image-chain construction, axiom-verified.

    Exists iff the restriction of T to the stabilized image is bijective;
    the inverse is then S^-(k+1) T^k with S that bijection. Nonexistence
    is a value, not an error.
    """
    _require_endo(T)
    chain = image_chain(T)
    k = chain.stabilization_step
    M = chain.sets[-1]
    t = T.arr
    pos = -np.ones(T.domain_size, dtype=np.int64)
    pos[M] = np.arange(len(M))
    perm = pos[t[M]]                      # restriction as a permutation of positions
    if len(np.unique(perm)) != len(M):
        return DrazinResult(False, None, None, k)
    inv_perm = np.argsort(perm)
    # S^-(k+1) on positions
    comp = np.arange(len(M), dtype=np.int64)
    for _ in range(k + 1):
        comp = inv_perm[comp]
    tk = power(T, k).arr
    table = M[comp[pos[tk]]]
    G = FiniteOperator(T.domain_size, T.domain_size, table)

    kk = max(k, 1)
    tkk = power(T, kk).arr
    g = G.arr
    assert np.array_equal(tkk[g[t]], tkk), "MP1^k failed; construction bug"
    assert np.array_equal(g[t[g]], g), "MP2 failed; construction bug"
    assert np.array_equal(t[g], g[t]), "D5 failed; construction bug"

    index = None
    tm = np.arange(T.domain_size, dtype=np.int64)    # T^0
    for m in range(1, T.domain_size + 2):
        tm = t[tm]                                   # now T^m
        if np.array_equal(t[tm][g], tm):             # T^(m+1) G = T^m
            index = m
            break
    assert index is not None, "index scan exceeded |V|+1; construction bug"
    return DrazinResult(True, G, index, k)


def drazin_loop_formula(T, n, k):
    """Drazin inverse of an operator with an exact loop T^n = T^k (n > k >= 0):
    T^((n-k)(k+1)-1) for k >= 1, and T^(n-1) for k = 0."""
    _require_endo(T)
    if not n > k >= 0:
        raise ValueError("loop formula needs n > k >= 0")
    if power(T, n) != power(T, k):
        raise ValueError("T^%d = T^%d does not hold for this operator" % (n, k))
    e = (n - k) * (k + 1) - 1 if k >= 1 else n - 1
    return power(T, e)


@dataclass
class LeftDrazinResult:
    inverse: FiniteOperator
    parameter: int             # m with G T^(m+1) = T^m
    k: int                     # least chain step with injective restriction


def left_drazin_inverse(T, fill=None):
    """A left-Drazin inverse: S^-1 on T^(k+1)(V), `fill` elsewhere.

    k is the least chain step where the restriction of T is injective. The
    values off T^(k+1)(V) are genuinely free; `fill` (id -> id) defaults to
    the identity there. Returns the inverse and the parameter max(k, 1).
    """
    _require_endo(T)
    chain = image_chain(T)
    k = next((i for i, inj in enumerate(chain.injective) if inj), None)
    if k is None:
        return None
    t = T.arr
    level = chain.sets[k] if k < len(chain.sets) else chain.sets[-1]
    table = np.arange(T.domain_size, dtype=np.int64)
    if fill is not None:
        table = np.array([fill(i) for i in range(T.domain_size)], dtype=np.int64)
    # constrained part: on T(level) = T^(k+1)(V), G must invert the restriction
    for v in level:
        table[t[v]] = v
    G = FiniteOperator(T.domain_size, T.domain_size, table)
    m = max(k, 1)
    lhs = compose(G, power(T, m + 1))
    assert lhs == power(T, m), "left-Drazin identity failed; construction bug"
    return LeftDrazinResult(G, m, k)


def exhaustive_drazin_search(T, cap=3125, chunk=100_000):
    """All G satisfying MP1^k (some k <= |V|), MP2, and D5, by brute force.

    MP1^k for any k >= 1 is equivalent to MP1^|V| because the identity
    propagates upward and powers of T cycle, so one exponent check
    suffices. Rejected when |V|^|V| exceeds `cap`.
    """
    _require_endo(T)
    n = T.domain_size
    if n == 0:
        raise ValueError("empty operator")
    total = n ** n
    if total > cap:
        raise ValueError("candidate space %d exceeds cap %d" % (total, cap))
    t = T.arr
    tK = power(T, max(n, 1)).arr
    radix = n ** np.arange(n - 1, -1, -1, dtype=np.int64)
    hits = []
    for start in range(0, total, chunk):
        idx = np.arange(start, min(start + chunk, total), dtype=np.int64)
        cand = (idx[:, None] // radix[None, :]) % n
        gt = cand[:, t]                              # G(T(v)) columnwise
        tg = t[cand]                                 # T(G(v))
        mp1k = np.all(tK[gt] == tK[None, :], axis=1)
        mp2 = np.all(np.take_along_axis(cand, tg, axis=1) == cand, axis=1)
        d5 = np.all(tg == gt, axis=1)
        sel = cand[mp1k & mp2 & d5]
        if sel.size:
            hits.append(sel)
    if not hits:
        return []
    tables = np.concatenate(hits, axis=0)
    return [FiniteOperator(n, n, tuple(row)) for row in tables]
