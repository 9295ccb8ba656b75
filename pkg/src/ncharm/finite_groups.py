"""Finite groups, coset spaces and generalized convolutions.

Groups are stored as Cayley tables over element indices ``0..n-1``.  Functions
on a group or coset space are value arrays indexed the same way.  All sums
carry a ``1/|G|`` normalization, so a convolution is an average over the group.

Left translation is ``(lambda_u f)(x) = f(u^-1 x)`` on both G and G/H.
"""
from __future__ import annotations

import itertools
import re
from collections import deque
from dataclasses import dataclass, field
from typing import Mapping, Sequence

import numpy as np

from .errors import (DomainMismatch, KernelNotEquivariant, LengthMismatch, NotASubgroup,
                     SizeLimitExceeded, UnsupportedSize)

MAX_ORDER = 64
MAX_REP_DEGREE = 4
MAX_UNKNOWNS = 2048
RANK_TOL = 1e-9


# ---------------------------------------------------------------------------
# groups

@dataclass(frozen=True, eq=False)
class FiniteGroup:
    name: str
    cayley: np.ndarray
    labels: tuple[str, ...] | None = None
    identity: int = field(init=False)
    inverse: np.ndarray = field(init=False)

    def __post_init__(self):
        table = np.array(self.cayley, dtype=np.int64)
        n = table.shape[0]
        if table.ndim != 2 or table.shape != (n, n) or n == 0:
            raise ValueError("Cayley table must be square and non-empty")
        if self.labels is None:
            object.__setattr__(self, "labels", tuple(str(i) for i in range(n)))
        if len(self.labels) != n:
            raise LengthMismatch(f"{len(self.labels)} labels for {n} elements")
        _validate_table(table)
        e = int(np.flatnonzero((table == np.arange(n)[None, :]).all(axis=1))[0])
        inv = np.argmax(table == e, axis=1)
        table.setflags(write=False)
        inv.setflags(write=False)
        object.__setattr__(self, "cayley", table)
        object.__setattr__(self, "identity", e)
        object.__setattr__(self, "inverse", inv)

    @property
    def order(self) -> int:
        return self.cayley.shape[0]

    def __len__(self) -> int:
        return self.order

    def __repr__(self) -> str:
        return f"FiniteGroup({self.name}, order={self.order})"

    def mul(self, a: int, b: int) -> int:
        return int(self.cayley[a, b])

    def inv(self, a: int) -> int:
        return int(self.inverse[a])

    def product(self, *elements: int) -> int:
        out = self.identity
        for g in elements:
            out = int(self.cayley[out, g])
        return out

    def is_abelian(self) -> bool:
        return bool(np.array_equal(self.cayley, self.cayley.T))

    def generated_subgroup(self, generators: Sequence[int]) -> tuple[int, ...]:
        elems = {self.identity}
        frontier = [self.identity]
        while frontier:
            nxt = []
            for a in frontier:
                for g in generators:
                    b = int(self.cayley[a, g])
                    if b not in elems:
                        elems.add(b)
                        nxt.append(b)
            frontier = nxt
        return tuple(sorted(elems))

    def is_subgroup(self, H: Sequence[int]) -> bool:
        Hs = set(int(h) for h in H)
        if not Hs or self.identity not in Hs or any(not 0 <= h < self.order for h in Hs):
            return False
        return all(int(self.cayley[a, self.inverse[b]]) in Hs for a in Hs for b in Hs)

    def same_as(self, other: "FiniteGroup") -> bool:
        return self is other or np.array_equal(self.cayley, other.cayley)


def _validate_table(table: np.ndarray) -> None:
    n = table.shape[0]
    rng = np.arange(n)
    if table.min() < 0 or table.max() >= n:
        raise ValueError("Cayley table entries out of range")
    for axis in (0, 1):
        if not (np.sort(table, axis=axis) == (rng[:, None] if axis == 0 else rng[None, :])).all():
            raise ValueError("Cayley table is not a Latin square")
    if not ((table == rng[None, :]).all(axis=1)).any():
        raise ValueError("no identity element")
    if n <= MAX_ORDER:
        left = table[table[:, :, None], rng[None, None, :]]   # (ab)c
        right = table[rng[:, None, None], table[None, :, :]]  # a(bc)
        if not np.array_equal(left, right):
            raise ValueError("operation is not associative")


def cyclic(n: int) -> FiniteGroup:
    if n < 1:
        raise UnsupportedSize(f"cyclic group needs n >= 1, got {n}")
    a = np.arange(n)
    labels = tuple("e" if k == 0 else f"a^{k}" for k in range(n))
    return FiniteGroup(f"cyclic({n})", (a[:, None] + a[None, :]) % n, labels)


def dihedral(n: int) -> FiniteGroup:
    """Order 2n; index ``k + n f`` is ``r^k s^f`` with ``s r s = r^-1``."""
    if n < 1:
        raise UnsupportedSize(f"dihedral group needs n >= 1, got {n}")
    idx = np.arange(2 * n)
    k, f = idx % n, idx // n
    rot = (k[:, None] + np.where(f[:, None] == 1, -1, 1) * k[None, :]) % n
    flip = (f[:, None] + f[None, :]) % 2
    labels = tuple(("e" if kk == 0 else f"r^{kk}") if ff == 0 else (f"r^{kk}s" if kk else "s")
                   for kk, ff in zip(k, f))
    return FiniteGroup(f"dihedral({n})", rot + n * flip, labels)


def symmetric(n: int) -> FiniteGroup:
    """Permutations of ``0..n-1`` in lexicographic order; ``(p q)(i) = p(q(i))``."""
    if n < 1 or n > 4:
        raise UnsupportedSize(f"symmetric({n}) not supported (1 <= n <= 4)")
    perms = list(itertools.permutations(range(n)))
    index = {p: i for i, p in enumerate(perms)}
    table = [[index[tuple(p[q[i]] for i in range(n))] for q in perms] for p in perms]
    labels = tuple("".join(str(x) for x in p) for p in perms)
    return FiniteGroup(f"symmetric({n})", table, labels)


_KINDS = {"cyclic": cyclic, "dihedral": dihedral, "symmetric": symmetric}


def make_group(kind: str, n: int | None = None) -> FiniteGroup:
    """``make_group("dihedral", 4)`` or ``make_group("dihedral(4)")``."""
    if n is None:
        m = re.fullmatch(r"\s*(\w+)\s*\(\s*(\d+)\s*\)\s*", kind)
        if not m:
            raise ValueError(f"cannot parse group {kind!r}")
        kind, n = m.group(1), int(m.group(2))
    if kind not in _KINDS:
        raise ValueError(f"unknown group kind {kind!r}")
    return _KINDS[kind](int(n))


# ---------------------------------------------------------------------------
# coset spaces

@dataclass(frozen=True, eq=False)
class CosetSpace:
    """Left cosets ``gH`` (or right cosets ``Hg``) with a section.

    Cosets are ordered by their smallest element; the section picks that
    element, except that the subgroup itself is represented by the identity.
    """

    group: FiniteGroup
    subgroup: tuple[int, ...]
    side: str = "left"
    cosets: tuple[tuple[int, ...], ...] = field(init=False)
    section: tuple[int, ...] = field(init=False)
    coset_of: np.ndarray = field(init=False)

    def __post_init__(self):
        G = self.group
        if self.side not in ("left", "right"):
            raise ValueError(f"side must be 'left' or 'right', got {self.side!r}")
        H = tuple(sorted(set(int(h) for h in self.subgroup)))
        if not G.is_subgroup(H):
            raise NotASubgroup(f"{H} is not a subgroup of {G.name}")
        seen = np.full(G.order, -1)
        cosets = []
        for g in range(G.order):
            if seen[g] >= 0:
                continue
            if self.side == "left":
                c = tuple(sorted(int(G.cayley[g, h]) for h in H))
            else:
                c = tuple(sorted(int(G.cayley[h, g]) for h in H))
            seen[list(c)] = len(cosets)
            cosets.append(c)
        section = [c[0] for c in cosets]
        home = int(seen[G.identity])
        section[home] = G.identity
        seen.setflags(write=False)
        object.__setattr__(self, "subgroup", H)
        object.__setattr__(self, "cosets", tuple(cosets))
        object.__setattr__(self, "section", tuple(section))
        object.__setattr__(self, "coset_of", seen)

    def __len__(self) -> int:
        return len(self.cosets)

    def __repr__(self) -> str:
        sym = "G/H" if self.side == "left" else "H\\G"
        return f"CosetSpace({self.group.name}, {sym}, |H|={len(self.subgroup)}, n={len(self)})"

    @property
    def base(self) -> int:
        """Index of the coset containing the identity."""
        return int(self.coset_of[self.group.identity])

    def index(self, g: int) -> int:
        return int(self.coset_of[g])

    def act(self, g: int, x: int) -> int:
        """Left action ``g . x`` on left cosets."""
        self._need_left()
        return int(self.coset_of[self.group.cayley[g, self.section[x]]])

    def action_table(self) -> np.ndarray:
        """``table[g, x] = g . x``."""
        self._need_left()
        s = np.asarray(self.section)
        return self.coset_of[self.group.cayley[:, s]]

    def same_as(self, other: "CosetSpace") -> bool:
        return (self is other or (self.group.same_as(other.group) and self.subgroup == other.subgroup
                                  and self.side == other.side))

    def _need_left(self):
        if self.side != "left":
            raise DomainMismatch("operation defined on left coset spaces only")


def coset_space(G: FiniteGroup, H_indices: Sequence[int], side: str = "left") -> CosetSpace:
    return CosetSpace(G, tuple(H_indices), side)


def twist(X: CosetSpace, x: int, g: int) -> int:
    """``h(x, g) = s(g x)^-1 g s(x)``, the element of H with ``g s(x) = s(g x) h``."""
    G = X.group
    gx = X.act(g, x)
    return G.product(G.inv(X.section[gx]), g, X.section[x])


def element_twist(X: CosetSpace, g: int) -> int:
    """``h(g) = h(H, g) = s(gH)^-1 g``, so that ``g = s(gH) h(g)``."""
    X._need_left()
    G = X.group
    return G.mul(G.inv(X.section[X.index(g)]), g)


def double_cosets(G: FiniteGroup, H1: Sequence[int], H2: Sequence[int]) -> list[tuple[int, ...]]:
    """Partition of G into ``H1 g H2``, ordered by smallest element."""
    seen = np.zeros(G.order, bool)
    out = []
    for g in range(G.order):
        if seen[g]:
            continue
        c = sorted({G.product(a, g, b) for a in H1 for b in H2})
        seen[c] = True
        out.append(tuple(c))
    return out


# ---------------------------------------------------------------------------
# functions on groups and coset spaces

Domain = FiniteGroup | CosetSpace


def _domain_size(d: Domain) -> int:
    return d.order if isinstance(d, FiniteGroup) else len(d)


def _parent(d: Domain) -> FiniteGroup:
    return d if isinstance(d, FiniteGroup) else d.group


def _same_domain(a: Domain, b: Domain) -> bool:
    if isinstance(a, FiniteGroup) and isinstance(b, FiniteGroup):
        return a.same_as(b)
    if isinstance(a, CosetSpace) and isinstance(b, CosetSpace):
        return a.same_as(b)
    return False


@dataclass(frozen=True, eq=False)
class GroupFunction:
    """Values indexed by group elements or cosets; shape ``(n,)`` or ``(n, d)``."""

    domain: Domain
    values: np.ndarray

    def __post_init__(self):
        v = np.asarray(self.values, dtype=complex)
        if v.ndim not in (1, 2) or v.shape[0] != _domain_size(self.domain):
            raise LengthMismatch(f"values of shape {v.shape} do not fit a domain of size "
                                 f"{_domain_size(self.domain)}")
        object.__setattr__(self, "values", v)

    @property
    def group(self) -> FiniteGroup:
        return _parent(self.domain)

    def translate(self, u: int) -> "GroupFunction":
        """``(lambda_u f)(x) = f(u^-1 x)``."""
        return GroupFunction(self.domain, self.values[_translation_perm(self.domain, u)])


def _translation_perm(d: Domain, u: int) -> np.ndarray:
    G = _parent(d)
    ui = G.inv(u)
    if isinstance(d, FiniteGroup):
        return d.cayley[ui]
    return d.action_table()[ui]


def finite_convolve(f: GroupFunction, k: GroupFunction) -> GroupFunction:
    """``(f * k)(g) = (1/|G|) sum_u f(g u^-1) k(u)``."""
    if not (isinstance(f.domain, FiniteGroup) and isinstance(k.domain, FiniteGroup)
            and f.domain.same_as(k.domain)):
        raise DomainMismatch("finite_convolve needs two functions on the same group")
    G = f.domain
    idx = G.cayley[:, G.inverse]  # [g, u] -> g u^-1
    return GroupFunction(G, np.tensordot(f.values[idx], k.values, axes=([1], [0])) / G.order)


def lift(f: GroupFunction) -> GroupFunction:
    """``(up f)(g) = f(gH)``."""
    if not isinstance(f.domain, CosetSpace):
        raise DomainMismatch("lift needs a function on a coset space")
    X = f.domain
    return GroupFunction(X.group, f.values[X.coset_of])


def project(f: GroupFunction, X: CosetSpace) -> GroupFunction:
    """``(down f)(gH) = (1/|H|) sum_{u in gH} f(u)``."""
    if not (isinstance(f.domain, FiniteGroup) and f.domain.same_as(X.group)):
        raise DomainMismatch("project needs a function on the parent group")
    vals = np.stack([f.values[list(c)].mean(axis=0) for c in X.cosets])
    return GroupFunction(X, vals)


def _as_group_function(f: GroupFunction) -> GroupFunction:
    return lift(f) if isinstance(f.domain, CosetSpace) else f


def convolution_case(f: GroupFunction, k: GroupFunction) -> str:
    fc = isinstance(f.domain, CosetSpace)
    kc = isinstance(k.domain, CosetSpace)
    return {(False, True): "I", (True, False): "II", (True, True): "III", (False, False): "IV"}[(fc, kc)]


def generalized_convolve(f: GroupFunction, k: GroupFunction, method: str = "reduced") -> GroupFunction:
    """``(f * k)(g) = (1/|G|) sum_u up f(g u^-1) up k(u)`` on the reduced output domain.

    Case I (f on G, k on G/H) and Case III (f on G/H1, k on G/H2) give outputs on
    the coset space of k; Cases II and IV give outputs on G.  ``method="direct"``
    evaluates the full sum over G with lifted inputs; ``method="reduced"`` uses
    the coset and double-coset formulas.
    """
    G = f.group
    if not G.same_as(k.group):
        raise DomainMismatch("inputs live on different groups")
    for d in (f.domain, k.domain):
        if isinstance(d, CosetSpace) and d.side != "left":
            raise DomainMismatch("inputs must be on left coset spaces")
    case = convolution_case(f, k)
    out_domain = k.domain if case in ("I", "III") else G
    if method == "direct":
        full = finite_convolve(_as_group_function(f), _as_group_function(k)).values
        if case in ("I", "III"):
            full = full[list(out_domain.section)]
        return GroupFunction(out_domain, full)
    if method != "reduced":
        raise ValueError(f"unknown method {method!r}")
    if case == "IV":
        return finite_convolve(f, k)
    if case == "I":
        X = k.domain
        reps = np.asarray(X.section)
        idx = G.cayley[reps][:, G.inverse]  # [x, u] -> s(x) u^-1
        kv = k.values[X.coset_of]
        return GroupFunction(X, np.tensordot(f.values[idx], kv, axes=([1], [0])) / G.order)
    # Cases II and III: sum over right cosets H1 v of f(g v^-1 H1) k~(H1 v)
    Xf = f.domain
    R = CosetSpace(G, Xf.subgroup, "right")
    kg = _as_group_function(k).values
    ktil = np.stack([sum(kg[G.mul(h, v)] for h in Xf.subgroup) for v in R.section])
    if case == "II":
        gs = np.arange(G.order)
    else:
        gs = np.asarray(k.domain.section)
    vinv = G.inverse[np.asarray(R.section)]
    fvals = f.values[Xf.coset_of[G.cayley[gs][:, vinv]]]  # [g, Hv]
    return GroupFunction(out_domain, np.tensordot(fvals, ktil, axes=([1], [0])) / G.order)


# ---------------------------------------------------------------------------
# representations

@dataclass(frozen=True, eq=False)
class FiniteRep:
    """Matrices ``rho(h)`` for the elements of a subgroup H of G."""

    group: FiniteGroup
    elements: tuple[int, ...]
    matrices: np.ndarray

    def __post_init__(self):
        elems = tuple(int(e) for e in self.elements)
        mats = np.asarray(self.matrices, dtype=complex)
        if mats.ndim != 3 or mats.shape[0] != len(elems) or mats.shape[1] != mats.shape[2]:
            raise LengthMismatch(f"need {len(elems)} square matrices, got shape {mats.shape}")
        mats.setflags(write=False)
        object.__setattr__(self, "elements", elems)
        object.__setattr__(self, "matrices", mats)
        object.__setattr__(self, "_pos", {e: i for i, e in enumerate(elems)})

    @property
    def degree(self) -> int:
        return self.matrices.shape[1]

    def __call__(self, h: int) -> np.ndarray:
        try:
            return self.matrices[self._pos[int(h)]]
        except KeyError:
            raise DomainMismatch(f"element {h} is not in the subgroup {self.elements}") from None

    def homomorphism_residual(self) -> float:
        G = self.group
        worst = float(np.abs(self(G.identity) - np.eye(self.degree)).max())
        for a in self.elements:
            for b in self.elements:
                worst = max(worst, float(np.abs(self(G.mul(a, b)) - self(a) @ self(b)).max()))
        return worst

    @classmethod
    def trivial(cls, G: FiniteGroup, H: Sequence[int], degree: int = 1) -> "FiniteRep":
        H = tuple(sorted(H))
        return cls(G, H, np.broadcast_to(np.eye(degree), (len(H), degree, degree)).copy())


def rep_from_generators(G: FiniteGroup, generators: Mapping[int, np.ndarray]) -> FiniteRep:
    """Extend generator images to the generated subgroup by breadth-first search.

    The result is checked to be a homomorphism; inconsistent images raise ValueError.
    """
    gens = {int(g): np.asarray(m, dtype=complex) for g, m in generators.items()}
    d = next(iter(gens.values())).shape[0]
    mats = {G.identity: np.eye(d, dtype=complex)}
    queue = deque([G.identity])
    while queue:
        a = queue.popleft()
        for g, m in gens.items():
            b = G.mul(a, g)
            if b not in mats:
                mats[b] = mats[a] @ m
                queue.append(b)
    elems = tuple(sorted(mats))
    rep = FiniteRep(G, elems, np.stack([mats[e] for e in elems]))
    if rep.homomorphism_residual() > 1e-10:
        raise ValueError("generator images do not define a representation")
    return rep


def _check_rep(rep: FiniteRep, X: CosetSpace) -> None:
    if not rep.group.same_as(X.group) or tuple(sorted(rep.elements)) != X.subgroup:
        raise DomainMismatch("representation is not defined on the coset space's subgroup")


# ---------------------------------------------------------------------------
# induced representations and equivariant maps

def induced_action(X: CosetSpace, rho: FiniteRep, g: int) -> np.ndarray:
    """Matrix of ``(pi(g) f)(x) = rho(h(x, g^-1)^-1) f(g^-1 x)`` on local functions.

    Local functions are flattened row-major from shape ``(|X|, d)``.
    """
    _check_rep(rho, X)
    G = X.group
    d = rho.degree
    gi = G.inv(g)
    out = np.zeros((len(X) * d, len(X) * d), dtype=complex)
    for x in range(len(X)):
        y = X.act(gi, x)
        out[x * d:(x + 1) * d, y * d:(y + 1) * d] = rho(G.inv(twist(X, x, gi)))
    return out


def lift_mackey(f_local: np.ndarray, X: CosetSpace, rho: FiniteRep) -> np.ndarray:
    """``f(g) = rho(h(g))^-1 f_j(gH)``; returns shape ``(|G|, d)``."""
    G = X.group
    f_local = np.asarray(f_local, complex).reshape(len(X), rho.degree)
    return np.stack([np.linalg.inv(rho(element_twist(X, g))) @ f_local[X.index(g)]
                     for g in range(G.order)])


def restrict_mackey(f: np.ndarray, X: CosetSpace) -> np.ndarray:
    """``f_j(x) = f(s(x))``."""
    return np.asarray(f)[list(X.section)]


def mackey_residual(f: np.ndarray, X: CosetSpace, rho: FiniteRep) -> float:
    """``max |f(gh) - rho(h^-1) f(g)|`` over g in G and h in H."""
    G = X.group
    return max(float(np.abs(f[G.mul(g, h)] - rho(G.inv(h)) @ f[g]).max())
               for g in range(G.order) for h in X.subgroup)


class _StackedSystem:
    """Row blocks of a homogeneous system, compressed to an n x n triangle as they arrive."""

    def __init__(self, n: int):
        self.R = np.zeros((0, n), dtype=complex)

    def add(self, A: np.ndarray) -> None:
        stacked = np.vstack([self.R, A])
        self.R = np.linalg.qr(stacked, mode="r") if stacked.shape[0] > stacked.shape[1] else stacked

    def null_space(self, tol: float = RANK_TOL) -> np.ndarray:
        """Orthonormal null space (as columns) from singular values at or below ``tol``."""
        n = self.R.shape[1]
        _, sv, Vh = np.linalg.svd(self.R)
        sv = np.concatenate([sv, np.zeros(n - sv.size)])
        return Vh.conj().T[:, sv <= tol]


def _check_sizes(G: FiniteGroup, *reps: FiniteRep) -> None:
    if G.order > MAX_ORDER:
        raise SizeLimitExceeded(f"group order {G.order} exceeds {MAX_ORDER}")
    for r in reps:
        if r.degree > MAX_REP_DEGREE:
            raise SizeLimitExceeded(f"representation degree {r.degree} exceeds {MAX_REP_DEGREE}")


@dataclass(frozen=True, eq=False)
class MapSpace:
    dimension: int
    basis: np.ndarray  # (dimension, n_out, n_in)


def equivariant_map_space(G: FiniteGroup, Hi: Sequence[int], Ho: Sequence[int],
                          rho_i: FiniteRep, rho_o: FiniteRep) -> MapSpace:
    """Null space of ``Phi pi_i(u) = pi_o(u) Phi`` stacked over every u in G."""
    _check_sizes(G, rho_i, rho_o)
    Xi, Xo = coset_space(G, Hi), coset_space(G, Ho)
    ni, no = len(Xi) * rho_i.degree, len(Xo) * rho_o.degree
    if ni * no > MAX_UNKNOWNS:
        raise SizeLimitExceeded(f"{ni * no} unknowns exceed {MAX_UNKNOWNS}")
    system = _StackedSystem(ni * no)
    for u in range(G.order):
        # column-major vec: vec(Phi P) = (P^T (x) I) vec Phi, vec(P Phi) = (I (x) P) vec Phi
        A = np.kron(np.eye(ni), induced_action(Xo, rho_o, u)) - np.kron(induced_action(Xi, rho_i, u).T, np.eye(no))
        system.add(A)
    N = system.null_space()
    basis = np.stack([v.reshape(ni, no).T for v in N.T]) if N.shape[1] else np.zeros((0, no, ni))
    return MapSpace(N.shape[1], basis)


@dataclass(frozen=True, eq=False)
class KernelSpace:
    dimension: int
    basis: np.ndarray  # (dimension, |G|, do, di)


def admissible_kernel_space(G: FiniteGroup, Hi: Sequence[int], Ho: Sequence[int],
                            rho_i: FiniteRep, rho_o: FiniteRep) -> KernelSpace:
    """Kernels ``k: G -> Hom(V_i, V_o)`` with ``k(ho g hi) = rho_o(ho) k(g) rho_i(hi)``."""
    _check_sizes(G, rho_i, rho_o)
    di, do = rho_i.degree, rho_o.degree
    blk = do * di
    n = G.order * blk
    if n > MAX_UNKNOWNS:
        raise SizeLimitExceeded(f"{n} unknowns exceed {MAX_UNKNOWNS}")
    system = _StackedSystem(n)
    eye = np.eye(blk)
    for g in range(G.order):
        for ho in Ho:
            for hi in Hi:
                t = G.product(ho, g, hi)
                # row-major vec: vec(A X B) = (A (x) B^T) vec X
                M = np.kron(rho_o(ho), rho_i(hi).T)
                A = np.zeros((blk, n), dtype=complex)
                A[:, t * blk:(t + 1) * blk] += eye
                A[:, g * blk:(g + 1) * blk] -= M
                system.add(A)
    N = system.null_space()
    basis = np.stack([v.reshape(G.order, do, di) for v in N.T]) if N.shape[1] else np.zeros((0, G.order, do, di))
    return KernelSpace(N.shape[1], basis)


def local_kernel(k_group: np.ndarray, Xi: CosetSpace) -> np.ndarray:
    """``k_H(x) = k_G(s(x))``."""
    return np.asarray(k_group)[list(Xi.section)]


def kernel_equivariance_residual(k_local: np.ndarray, Xi: CosetSpace, Xo: CosetSpace,
                                 rho_i: FiniteRep, rho_o: FiniteRep) -> tuple[float, int, int]:
    """Worst ``|k_H(h x) - rho_o(h) k_H(x) rho_i(h_i(x, h)^-1)|`` and the (h, x) attaining it."""
    G = Xi.group
    worst, where = 0.0, (G.identity, 0)
    for h in Xo.subgroup:
        for x in range(len(Xi)):
            lhs = k_local[Xi.act(h, x)]
            rhs = rho_o(h) @ k_local[x] @ rho_i(G.inv(twist(Xi, x, h)))
            r = float(np.abs(lhs - rhs).max())
            if r > worst:
                worst, where = r, (h, x)
    return worst, where[0], where[1]


def induce_and_correlate(f_local, k_local, Xi: CosetSpace, Xo: CosetSpace,
                         rho_i: FiniteRep, rho_o: FiniteRep, method: str = "local",
                         tol: float = 1e-10) -> np.ndarray:
    """Equivariant map from fields on G/Hi (type rho_i) to fields on G/Ho (type rho_o).

    ``method="local"`` evaluates
    ``out(y) = (1/|G/Hi|) sum_x k_H(s_o(y)^-1 x) rho_i(h_i(x, s_o(y)^-1)) f(x)``;
    ``method="mackey"`` lifts f and k to G, correlates there with
    ``(1/|G|) sum_u k_G(g^-1 u) f(u)`` and restricts along the section of G/Ho.
    Returns an array of shape ``(|G/Ho|, do)``.
    """
    _check_rep(rho_i, Xi)
    _check_rep(rho_o, Xo)
    G = Xi.group
    di, do = rho_i.degree, rho_o.degree
    f_local = np.asarray(f_local, complex).reshape(len(Xi), di)
    k_local = np.asarray(k_local, complex).reshape(len(Xi), do, di)
    res, h, x = kernel_equivariance_residual(k_local, Xi, Xo, rho_i, rho_o)
    if res > tol:
        raise KernelNotEquivariant(f"kernel violates the equivariance condition at h={h}, x={x} "
                                   f"(residual {res:.3g})", h=h, x=x, residual=res)
    out = np.zeros((len(Xo), do), dtype=complex)
    if method == "local":
        for y in range(len(Xo)):
            si = G.inv(Xo.section[y])
            for xx in range(len(Xi)):
                out[y] += k_local[Xi.act(si, xx)] @ rho_i(twist(Xi, xx, si)) @ f_local[xx]
        return out / len(Xi)
    if method != "mackey":
        raise ValueError(f"unknown method {method!r}")
    f = lift_mackey(f_local, Xi, rho_i)
    kG = np.stack([k_local[Xi.index(g)] @ rho_i(element_twist(Xi, g)) for g in range(G.order)])
    for y in range(len(Xo)):
        gi = G.inv(Xo.section[y])
        for u in range(G.order):
            out[y] += kG[G.mul(gi, u)] @ f[u]
    return out / G.order


def induced_map_matrix(k_local, Xi: CosetSpace, Xo: CosetSpace,
                       rho_i: FiniteRep, rho_o: FiniteRep) -> np.ndarray:
    """Matrix of ``f -> induce_and_correlate(f, k)`` on flattened local functions."""
    n = len(Xi) * rho_i.degree
    cols = [induce_and_correlate(e, k_local, Xi, Xo, rho_i, rho_o).reshape(-1) for e in np.eye(n)]
    return np.stack(cols, axis=1)
