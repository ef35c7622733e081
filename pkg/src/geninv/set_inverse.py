"""{1,2}-inverses of finite operators.

An operator G: W -> V is a {1,2}-inverse of T: V -> W when TGT = T and
GTG = G. The degrees of freedom are a choice of one source per image
element (V0) and a retraction of the codomain onto the image (P0); the
inverse is then (T|_V0)^-1 P0. Everything here checks or enumerates those
identities exactly on id tables.
"""

from dataclasses import dataclass

import numpy as np

from .core_ops import FiniteOperator, compose, image


class InvalidSpec(ValueError):
    """Raised when a (V0, P0) pair violates its invariants."""


@dataclass(frozen=True)
class OneTwoInverseSpec:
    """Source selector V0 and retraction P0 for building a {1,2}-inverse.

    v0: ids in the domain, exactly one source for each image element.
    p0: full codomain-length table mapping every codomain id into the
        image, restricting to the identity on the image.
    """

    v0: tuple
    p0: tuple

    @staticmethod
    def from_json(obj):
        import json
        if isinstance(obj, str):
            obj = json.loads(obj)
        return OneTwoInverseSpec(tuple(obj["v0"]), tuple(obj["p0"]))

    def to_json(self):
        return {"v0": [int(v) for v in self.v0], "p0": [int(q) for q in self.p0]}

    def validate(self, T):
        img = image(T)
        img_set = set(int(w) for w in img)
        v0 = [int(v) for v in self.v0]
        if len(set(v0)) != len(v0):
            raise InvalidSpec("v0 contains duplicate ids")
        if len(v0) != len(img):
            raise InvalidSpec("v0 must pick exactly one source per image element")
        hit = set()
        for v in v0:
            if not 0 <= v < T.domain_size:
                raise InvalidSpec("v0 id %d outside domain" % v)
            w = T(v)
            if w in hit:
                raise InvalidSpec("v0 contains two sources of %d" % w)
            hit.add(w)
        if hit != img_set:
            raise InvalidSpec("v0 does not cover the image")
        if len(self.p0) != T.codomain_size:
            raise InvalidSpec("p0 must assign a value to every codomain id")
        for w, q in enumerate(self.p0):
            q = int(q)
            if q not in img_set:
                raise InvalidSpec("p0 value %d is outside the image" % q)
            if w in img_set and q != w:
                raise InvalidSpec("p0 must be the identity on the image")


def default_spec(T):
    """Smallest-id source per image element; nearest-id retraction."""
    img = image(T)
    v0 = []
    taken = set()
    for v in range(T.domain_size):
        w = T(v)
        if w not in taken:
            taken.add(w)
            v0.append(v)
    p0 = []
    for w in range(T.codomain_size):
        if w in taken:
            p0.append(w)
        else:
            j = int(np.argmin(np.abs(img - w)))   # ties resolve to the smaller id
            p0.append(int(img[j]))
    return OneTwoInverseSpec(tuple(v0), tuple(p0))


def build_one_two_inverse(T, spec=None):
    """Construct (T|_V0)^-1 P0, a {1,2}-inverse of T."""
    if spec is None:
        spec = default_spec(T)
    spec.validate(T)
    source_of = {}
    for v in spec.v0:
        source_of[T(v)] = v
    table = tuple(source_of[int(q)] for q in spec.p0)
    G = FiniteOperator(T.codomain_size, T.domain_size, table)
    mp1, mp2 = check_mp_axioms(T, G)
    assert mp1 and mp2, "construction violated MP1-2; spec validation is broken"
    return G


def check_mp_axioms(T, G):
    """Exact MP1 (TGT = T) and MP2 (GTG = G) flags by table composition."""
    if G.domain_size != T.codomain_size or G.codomain_size != T.domain_size:
        raise ValueError("G must map T's codomain back to its domain")
    t, g = T.arr, G.arr
    mp1 = bool(np.array_equal(t[g[t]], t))
    mp2 = bool(np.array_equal(g[t[g]], g))
    return mp1, mp2


def double_inverse(T, Tbar):
    """Apply the construction to Tbar with W0 = T(V), Q0 = Tbar T; returns T.

    Requires Tbar in T{1,2}; the symmetric choice of (W0, Q0) makes the
    double inverse land exactly back on T.
    """
    mp1, mp2 = check_mp_axioms(T, Tbar)
    if not (mp1 and mp2):
        raise InvalidSpec("Tbar is not a {1,2}-inverse of T")
    w0 = image(T)
    q0 = compose(Tbar, T)          # V -> V, identity on Tbar(W)
    source_of = {}                 # under Tbar, one source in W0 per element of Tbar(W)
    for w in w0:
        source_of[Tbar(int(w))] = int(w)
    table = tuple(source_of[q0(v)] for v in range(T.domain_size))
    out = FiniteOperator(T.domain_size, T.codomain_size, table)
    return out


def one_two_inverse_count(T):
    """Number of {1,2}-inverses: product over the image of preimage sizes,
    times |image|^(#codomain ids off the image)."""
    img = image(T)
    counts = np.bincount(T.arr, minlength=T.codomain_size)
    total = 1
    for w in img:
        total *= int(counts[w])
    off = T.codomain_size - len(img)
    return total * len(img) ** off


def enumerate_one_two_inverses(T, cap=10**6, chunk=200_000):
    """All tables G with TGT = T and GTG = G, by brute force.

    Candidates are every map W -> V in lexicographic order; the MP1-2
    filter is exact. Rejected when |V|^|W| exceeds `cap`.
    """
    nV, nW = T.domain_size, T.codomain_size
    if nV == 0 or nW == 0:
        raise ValueError("enumeration requires nonempty domain and codomain")
    total = nV ** nW
    if total > cap:
        raise ValueError("candidate space %d exceeds cap %d" % (total, cap))
    t = T.arr
    img = image(T)
    radges = nV ** np.arange(nW - 1, -1, -1, dtype=np.int64)
    keep = []
    for start in range(0, total, chunk):
        idx = np.arange(start, min(start + chunk, total), dtype=np.int64)
        cand = (idx[:, None] // radges[None, :]) % nV
        tg = t[cand]                                   # (N, nW) values in W
        mp1 = np.all(tg[:, img] == img[None, :], axis=1)
        gtg = np.take_along_axis(cand, tg, axis=1)
        mp2 = np.all(gtg == cand, axis=1)
        sel = cand[mp1 & mp2]
        if sel.size:
            keep.append(sel)
    if not keep:
        return np.empty((0, nW), dtype=np.int64)
    return np.concatenate(keep, axis=0)
