"""The (extended) affine Weyl group W_L = L x| W0.

Elements are pairs (lattice translation, finite Weyl part) with the
semidirect product law (lam, u)(mu, v) = (lam + u.mu, uv).  Length, left
descents and reduced words come from the standard affine-root bookkeeping:
the simple affine roots are a_i = (alpha_i, 0) for i >= 1 and
a_0 = (-phi, 1), and i is a left descent of w iff w^{-1} a_i is negative.
Stripping descents terminates at a length-zero remainder (the fundamental
alcove stabilizer; trivial when L = Q).
"""

from __future__ import annotations

from dataclasses import dataclass
from math import gcd

from .root_data import RootDatum, WeylElement, _matvec

__all__ = [
    "AffineWeylElement",
    "InternalError",
    "awe_identity",
    "awe_inverse",
    "awe_length",
    "awe_mult",
    "is_dominant",
    "left_descents",
    "reduced_word",
    "separation_length",
    "simple_affine_element",
    "translation",
]


class InternalError(RuntimeError):
    """Impossible-by-construction state (e.g. descent stripping ran away)."""


@dataclass(frozen=True)
class AffineWeylElement:
    translation: tuple[int, ...]
    finite: int  # index into datum.weyl

    def __repr__(self):
        return f"t{list(self.translation)}*w{self.finite}"


def awe_identity(datum: RootDatum) -> AffineWeylElement:
    return AffineWeylElement((0,) * datum.rank, 0)


def awe_mult(datum: RootDatum, a: AffineWeylElement, b: AffineWeylElement) -> AffineWeylElement:
    u = datum.weyl[a.finite]
    lam = tuple(
        x + y for x, y in zip(a.translation, _matvec(u.matrix, b.translation))
    )
    return AffineWeylElement(lam, datum.weyl_mult[a.finite][b.finite])


def awe_inverse(datum: RootDatum, a: AffineWeylElement) -> AffineWeylElement:
    uinv = datum.weyl_inv[a.finite]
    lam = tuple(-x for x in _matvec(datum.weyl[uinv].matrix, a.translation))
    return AffineWeylElement(lam, uinv)


def translation(datum: RootDatum, lam) -> AffineWeylElement:
    return AffineWeylElement(tuple(lam), 0)


def is_dominant(datum: RootDatum, lam) -> bool:
    return all(datum.pair(lam, j) >= 0 for j in datum.simple_indices)


def simple_affine_element(datum: RootDatum, i: int) -> AffineWeylElement:
    """s_i for i in 0..n; s_0 = t_{phi_vee} s_phi."""
    if i == 0:
        phi = datum.highest_root
        return AffineWeylElement(phi.coroot, datum.s_phi_index)
    return AffineWeylElement((0,) * datum.rank, datum.simple_weyl_indices[i - 1])


def _simple_affine_roots(datum: RootDatum):
    roots = [(-(datum.highest_root_index + 1), 1)]
    for j in datum.simple_indices:
        roots.append((j + 1, 0))
    return roots


def _act_affine_root(datum: RootDatum, a: AffineWeylElement, aff_root):
    """(lam, u) sends (beta, k) to (u.beta, k - <lam, u.beta>)."""
    signed, k = aff_root
    u = datum.weyl[a.finite]
    img = datum.act_on_root(u, signed)
    j = abs(img) - 1
    pairing = datum.pair(a.translation, j)
    if img < 0:
        pairing = -pairing
    return (img, k - pairing)


def left_descents(datum: RootDatum, a: AffineWeylElement) -> tuple[int, ...]:
    """Indices i in 0..n with a^{-1}(a_i) a negative affine root."""
    ainv = awe_inverse(datum, a)
    out = []
    simple = _simple_affine_roots(datum)
    for i in range(datum.num_nodes):
        signed, k = _act_affine_root(datum, ainv, simple[i])
        if k < 0 or (k == 0 and signed < 0):
            out.append(i)
    return tuple(out)


def reduced_word(datum: RootDatum, a: AffineWeylElement):
    """Return (word, omega): a = s_{i_1} ... s_{i_l} * omega with omega of length 0."""
    word = []
    cur = a
    cap = 10 * (1 + sum(abs(x) for x in a.translation)) * (len(datum.positive_roots) + 1) + 50
    for _ in range(cap):
        descents = left_descents(datum, cur)
        if not descents:
            return tuple(word), cur
        i = descents[0]
        word.append(i)
        cur = awe_mult(datum, simple_affine_element(datum, i), cur)
    raise InternalError(f"descent stripping did not terminate for {a}")


def awe_length(datum: RootDatum, a: AffineWeylElement) -> int:
    return len(reduced_word(datum, a)[0])


# ---------------------------------------------------------------------------
# Independent length formula: count affine hyperplanes separating the
# fundamental alcove from its image.

_ALCOVE_CACHE: dict = {}


def _alcove_data(datum: RootDatum):
    key = datum.tag
    if key in _ALCOVE_CACHE:
        return _ALCOVE_CACHE[key]
    n = datum.rank
    # interior point: solve <p, alpha_i> = 1, then scale to put <p, phi> < 1
    simples = [datum.positive_roots[j].functional for j in datum.simple_indices]
    if n == 1:
        v = (1.0 / simples[0][0],)
    else:
        (a, b), (c, d) = simples
        det = a * d - b * c
        v = (d / det, -b / det)
    phi_v = sum(f * x for f, x in zip(datum.highest_root.functional, v))
    scale = 0.4142135623730951 / phi_v  # irrational: no sample hits a wall
    p = tuple(x * scale for x in v)

    # residues of admissible levels per hyperplane direction
    orbits = []
    for j in range(len(datum.positive_roots)):
        orbits.append({abs(datum.act_on_root(w, j + 1)) - 1 for w in datum.weyl})
    dirs = []
    for j, r in enumerate(datum.positive_roots):
        g = gcd(*(abs(x) for x in r.functional)) if datum.rank > 1 else abs(r.functional[0])
        residues = set()
        for js in datum.simple_indices:
            if j in orbits[js]:
                residues.add(0 % g)
        if j in orbits[datum.highest_root_index]:
            residues.add(1 % g)
        if residues:
            dirs.append((r.functional, g, residues))
    _ALCOVE_CACHE[key] = (p, dirs)
    return p, dirs


def separation_length(datum: RootDatum, a: AffineWeylElement) -> int:
    """Number of affine hyperplanes separating the fundamental alcove from a(A0)."""
    p, dirs = _alcove_data(datum)
    u = datum.weyl[a.finite]
    image = tuple(
        sum(u.matrix[i][j] * p[j] for j in range(datum.rank)) + a.translation[i]
        for i in range(datum.rank)
    )
    total = 0
    for functional, g, residues in dirs:
        x0 = sum(f * x for f, x in zip(functional, p))
        x1 = sum(f * x for f, x in zip(functional, image))
        lo, hi = sorted((x0, x1))
        import math

        k = math.ceil(lo)
        while k < hi:
            if k % g in residues:
                total += 1
            k += 1
    return total
