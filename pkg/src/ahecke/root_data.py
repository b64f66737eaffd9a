"""Static root system data for the nine supported (type, lattice) configurations.

Each configuration fixes an integer basis of the lattice L so that every
exponent appearing anywhere in the algebra (including the half-coroot
exponents of the non-reduced types) is an integer vector.  A positive root is
stored as a pair (functional, coroot): the functional is the integer covector
computing lambda -> <lambda, alpha> in basis coordinates, and the coroot is
the integer coordinate vector of alpha^vee.  For non-reduced types the table
contains the doubled roots as well (class R3); R0 = R1 u R2 is the sub-table
on which all local factors live.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd

__all__ = [
    "CONFIGURATIONS",
    "Character",
    "PositiveRoot",
    "RootDatum",
    "UnsupportedConfiguration",
    "WeylElement",
    "build_root_datum",
    "enumerate_weyl",
    "inversion_set",
    "weyl_act_char",
]

CONFIGURATIONS = (
    "A1Q", "A1P", "BC1Q", "A2Q", "A2P", "C2Q", "C2P", "G2Q", "BC2Q",
)


class UnsupportedConfiguration(ValueError):
    """Raised for a (type, lattice) pair outside the nine supported ones."""


@dataclass(frozen=True)
class PositiveRoot:
    """One positive root alpha of R, in fixed lattice coordinates."""

    functional: tuple[int, ...]   # lambda -> <lambda, alpha>
    coroot: tuple[int, ...]       # alpha^vee
    cls: str                      # "R1", "R2" (alpha with 2alpha in R), "R3"
    param: int                    # parameter node index carried by s_alpha

    @property
    def half_coroot(self) -> tuple[int, ...]:
        # Only meaningful for R2 roots; integral by choice of basis.
        return tuple(c // 2 for c in self.coroot)


@dataclass(frozen=True)
class WeylElement:
    """An element of the finite Weyl group W0."""

    index: int
    word: tuple[int, ...]           # one fixed reduced word (1-based letters)
    matrix: tuple[tuple[int, ...], ...]  # action on L in basis coordinates

    @property
    def length(self) -> int:
        return len(self.word)


@dataclass(frozen=True)
class Character:
    """A point t of Hom(L, C*): nonzero values on the fixed lattice basis."""

    values: tuple[complex, ...]

    def __post_init__(self):
        if any(v == 0 for v in self.values):
            raise ValueError("character values must be nonzero")

    def value(self, lam) -> complex:
        """t^lambda for an integer vector lambda in basis coordinates."""
        out = 1.0 + 0.0j
        for v, k in zip(self.values, lam):
            if k:
                out *= v ** k
        return out

    def inverse(self) -> "Character":
        return Character(tuple(1.0 / v for v in self.values))

    def close_to(self, other: "Character", tol: float = 1e-9) -> bool:
        return all(
            abs(a - b) <= tol * max(1.0, abs(a))
            for a, b in zip(self.values, other.values)
        )


def _matmul(a, b):
    n = len(a)
    return tuple(
        tuple(sum(a[i][k] * b[k][j] for k in range(n)) for j in range(n))
        for i in range(n)
    )


def _matvec(a, v):
    return tuple(sum(row[j] * v[j] for j in range(len(v))) for row in a)


def _identity(n):
    return tuple(tuple(int(i == j) for j in range(n)) for i in range(n))


def _mat_inverse_int(a):
    """Inverse of a unimodular integer matrix, as an integer matrix."""
    n = len(a)
    m = [[Fraction(a[i][j]) for j in range(n)] + [Fraction(int(i == j)) for j in range(n)]
         for i in range(n)]
    for col in range(n):
        piv = next(r for r in range(col, n) if m[r][col] != 0)
        m[col], m[piv] = m[piv], m[col]
        inv = 1 / m[col][col]
        m[col] = [x * inv for x in m[col]]
        for r in range(n):
            if r != col and m[r][col] != 0:
                f = m[r][col]
                m[r] = [x - f * y for x, y in zip(m[r], m[col])]
    out = tuple(tuple(int(m[i][n + j]) for j in range(n)) for i in range(n))
    return out


@dataclass(frozen=True)
class RootDatum:
    type_tag: str
    lattice_tag: str
    rank: int
    lattice_basis_labels: tuple[str, ...]
    positive_roots: tuple[PositiveRoot, ...]
    simple_reflection_matrices: tuple
    coxeter_matrix: tuple
    highest_root_index: int
    simple_indices: tuple[int, ...]       # indices of alpha_1..alpha_n in positive_roots
    free_parameter_names: tuple[str, ...]
    node_parameter_slots: tuple[int, ...]  # node i (0..n) -> free parameter slot
    # populated by build_root_datum
    weyl: tuple[WeylElement, ...] = field(default=())
    weyl_mult: tuple = field(default=())
    weyl_inv: tuple[int, ...] = field(default=())
    root_action: tuple = field(default=())   # weyl index -> map signed root -> signed root
    s_phi_index: int = 0
    simple_weyl_indices: tuple[int, ...] = field(default=())

    @property
    def tag(self) -> str:
        return self.type_tag + self.lattice_tag

    @property
    def r0_indices(self) -> tuple[int, ...]:
        return tuple(i for i, r in enumerate(self.positive_roots) if r.cls != "R3")

    @property
    def num_nodes(self) -> int:
        return self.rank + 1

    @property
    def identity(self) -> WeylElement:
        return self.weyl[0]

    @property
    def longest_element(self) -> WeylElement:
        return max(self.weyl, key=lambda w: w.length)

    @property
    def highest_root(self) -> PositiveRoot:
        return self.positive_roots[self.highest_root_index]

    def simple_root(self, i: int) -> PositiveRoot:
        """The simple root alpha_i (1-based)."""
        return self.positive_roots[self.simple_indices[i - 1]]

    def mult(self, u: WeylElement, v: WeylElement) -> WeylElement:
        return self.weyl[self.weyl_mult[u.index][v.index]]

    def inverse(self, w: WeylElement) -> WeylElement:
        return self.weyl[self.weyl_inv[w.index]]

    def simple_reflection(self, i: int) -> WeylElement:
        """s_i as a Weyl group element (1-based)."""
        return self.weyl[self.simple_weyl_indices[i - 1]]

    def act_on_root(self, w: WeylElement, signed: int) -> int:
        """Image of a signed root index (+-(j+1)) under w."""
        return self.root_action[w.index][signed]

    def pair(self, lam, root_index: int) -> int:
        """<lambda, alpha> for the stored positive root."""
        f = self.positive_roots[root_index].functional
        return sum(a * b for a, b in zip(f, lam))

    def act_on_lattice(self, w: WeylElement, lam):
        return _matvec(w.matrix, lam)


_TABLES = {
    # tag: (rank, labels, roots, simple matrices, m12, phi index, simples,
    #       free params, node slot map)
    "A1Q": dict(
        rank=1, labels=("a1v",),
        roots=[((2,), (1,), "R1", 1)],
        mats=[((-1,),)], m12=None, phi=0, simples=(0,),
        free=("q",), nodes=(0, 0),
    ),
    "A1P": dict(
        rank=1, labels=("w1",),
        roots=[((1,), (2,), "R1", 1)],
        mats=[((-1,),)], m12=None, phi=0, simples=(0,),
        free=("q",), nodes=(0, 0),
    ),
    "BC1Q": dict(
        rank=1, labels=("a1v/2",),
        roots=[((1,), (2,), "R2", 1), ((2,), (1,), "R3", 0)],
        mats=[((-1,),)], m12=None, phi=1, simples=(0,),
        free=("q0", "q1"), nodes=(0, 1),
    ),
    "A2Q": dict(
        rank=2, labels=("a1v", "a2v"),
        roots=[((2, -1), (1, 0), "R1", 1),
               ((-1, 2), (0, 1), "R1", 2),
               ((1, 1), (1, 1), "R1", 1)],
        mats=[((-1, 1), (0, 1)), ((1, 0), (1, -1))],
        m12=3, phi=2, simples=(0, 1),
        free=("q",), nodes=(0, 0, 0),
    ),
    "A2P": dict(
        rank=2, labels=("w1", "w2"),
        roots=[((1, 0), (2, -1), "R1", 1),
               ((0, 1), (-1, 2), "R1", 2),
               ((1, 1), (1, 1), "R1", 1)],
        mats=[((-1, 0), (1, 1)), ((1, 1), (0, -1))],
        m12=3, phi=2, simples=(0, 1),
        free=("q",), nodes=(0, 0, 0),
    ),
    "C2Q": dict(
        rank=2, labels=("a1v", "a2v"),
        roots=[((2, -1), (1, 0), "R1", 1),      # alpha1 = e1-e2
               ((-2, 2), (0, 1), "R1", 2),      # alpha2 = 2e2
               ((2, 0), (1, 1), "R1", 2),       # 2e1
               ((0, 1), (1, 2), "R1", 1)],      # e1+e2
        mats=[((-1, 1), (0, 1)), ((1, 0), (2, -1))],
        m12=4, phi=2, simples=(0, 1),
        free=("q1", "q2"), nodes=(1, 0, 1),
    ),
    "C2P": dict(
        rank=2, labels=("w1", "w2"),
        roots=[((1, 0), (2, -2), "R1", 1),
               ((0, 1), (-1, 2), "R1", 2),
               ((2, 1), (1, 0), "R1", 2),       # 2e1
               ((1, 1), (0, 2), "R1", 1)],      # e1+e2
        mats=[((-1, 0), (2, 1)), ((1, 1), (0, -1))],
        m12=4, phi=2, simples=(0, 1),
        free=("q1", "q2"), nodes=(1, 0, 1),
    ),
    "G2Q": dict(
        rank=2, labels=("a1v", "a2v"),
        roots=[((2, -1), (1, 0), "R1", 1),      # alpha1 (short)
               ((-3, 2), (0, 1), "R1", 2),      # alpha2 (long)
               ((-1, 1), (1, 3), "R1", 1),      # alpha1+alpha2
               ((1, 0), (2, 3), "R1", 1),       # 2alpha1+alpha2
               ((3, -1), (1, 1), "R1", 2),      # 3alpha1+alpha2
               ((0, 1), (1, 2), "R1", 2)],      # 3alpha1+2alpha2
        mats=[((-1, 1), (0, 1)), ((1, 0), (3, -1))],
        m12=6, phi=5, simples=(0, 1),
        free=("q1", "q2"), nodes=(1, 0, 1),
    ),
    "BC2Q": dict(
        rank=2, labels=("a1v", "a2v/2"),
        roots=[((2, -1), (1, 0), "R1", 1),      # alpha1 = e1-e2
               ((-1, 1), (0, 2), "R2", 2),      # alpha2 = e2
               ((1, 0), (2, 2), "R2", 2),       # e1
               ((0, 1), (1, 2), "R1", 1),       # e1+e2
               ((-2, 2), (0, 1), "R3", 0),      # 2e2
               ((2, 0), (1, 1), "R3", 0)],      # 2e1
        mats=[((-1, 1), (0, 1)), ((1, 0), (2, -1))],
        m12=4, phi=5, simples=(0, 1),
        free=("q0", "q1", "q2"), nodes=(0, 1, 2),
    ),
}


def _enumerate_weyl_raw(mats, rank):
    """BFS by length, ties broken lexicographically by word."""
    ident = _identity(rank)
    seen = {ident: ()}
    frontier = [ident]
    order = [(ident, ())]
    while frontier:
        candidates = []
        for m in frontier:
            word = seen[m]
            for i in range(1, rank + 1):
                nm = _matmul(m, mats[i - 1])
                candidates.append((word + (i,), nm))
        candidates.sort(key=lambda c: c[0])
        frontier = []
        for word, nm in candidates:
            if nm not in seen:
                seen[nm] = word
                frontier.append(nm)
                order.append((nm, word))
    return order


def build_root_datum(type_tag: str, lattice_tag: str) -> RootDatum:
    """Construct the full datum for one of the nine configurations."""
    tag = type_tag + lattice_tag
    if tag not in _TABLES:
        raise UnsupportedConfiguration(
            f"unsupported configuration {type_tag!r}/{lattice_tag!r}; "
            f"supported: {', '.join(CONFIGURATIONS)}"
        )
    tbl = _TABLES[tag]
    rank = tbl["rank"]
    roots = tuple(PositiveRoot(*r) for r in tbl["roots"])
    mats = tuple(tbl["mats"])
    if rank == 1:
        cox = ((1,),)
    else:
        cox = ((1, tbl["m12"]), (tbl["m12"], 1))

    order = _enumerate_weyl_raw(mats, rank)
    weyl = tuple(
        WeylElement(index=i, word=word, matrix=m) for i, (m, word) in enumerate(order)
    )
    index_of = {w.matrix: w.index for w in weyl}
    weyl_mult = tuple(
        tuple(index_of[_matmul(u.matrix, v.matrix)] for v in weyl) for u in weyl
    )
    weyl_inv = tuple(index_of[_mat_inverse_int(w.matrix)] for w in weyl)

    # signed-root permutation tables: key +-(j+1)
    coroot_index = {}
    for j, r in enumerate(roots):
        coroot_index[r.coroot] = j + 1
        coroot_index[tuple(-c for c in r.coroot)] = -(j + 1)
    action = []
    for w in weyl:
        amap = {}
        for j, r in enumerate(roots):
            img = coroot_index[_matvec(w.matrix, r.coroot)]
            amap[j + 1] = img
            amap[-(j + 1)] = -img
        action.append(amap)

    phi = roots[tbl["phi"]]
    refl = tuple(
        tuple(
            int(i == j) - phi.coroot[i] * phi.functional[j]
            for j in range(rank)
        )
        for i in range(rank)
    )
    s_phi_index = index_of[refl]
    simple_weyl = tuple(index_of[mats[i]] for i in range(rank))

    return RootDatum(
        type_tag=type_tag,
        lattice_tag=lattice_tag,
        rank=rank,
        lattice_basis_labels=tbl["labels"],
        positive_roots=roots,
        simple_reflection_matrices=mats,
        coxeter_matrix=cox,
        highest_root_index=tbl["phi"],
        simple_indices=tbl["simples"],
        free_parameter_names=tbl["free"],
        node_parameter_slots=tbl["nodes"],
        weyl=weyl,
        weyl_mult=weyl_mult,
        weyl_inv=weyl_inv,
        root_action=tuple(action),
        s_phi_index=s_phi_index,
        simple_weyl_indices=simple_weyl,
    )


def datum_from_tag(tag: str) -> RootDatum:
    """Build a datum from a serialized tag like "C2Q"."""
    if tag not in CONFIGURATIONS:
        raise UnsupportedConfiguration(
            f"unknown tag {tag!r}; supported: {', '.join(CONFIGURATIONS)}"
        )
    return build_root_datum(tag[:-1], tag[-1])


def enumerate_weyl(datum: RootDatum):
    """All of W0, identity first, BFS by length then lex by word."""
    return datum.weyl


def inversion_set(datum: RootDatum, w: WeylElement) -> frozenset[int]:
    """R(w) = {alpha in R0+ : w^{-1} alpha < 0}, as indices into positive_roots."""
    winv = datum.inverse(w)
    return frozenset(
        j for j in datum.r0_indices if datum.act_on_root(winv, j + 1) < 0
    )


def weyl_act_char(datum: RootDatum, w: WeylElement, t: Character) -> Character:
    """(wt)^lambda = t^{w^{-1} lambda}."""
    minv = datum.inverse(w).matrix
    n = datum.rank
    vals = []
    for k in range(n):
        v = 1.0 + 0.0j
        for j in range(n):
            e = minv[j][k]
            if e:
                v *= t.values[j] ** e
        vals.append(v)
    return Character(tuple(vals))
