"""The affine Hecke algebra: two exact multiplication engines, trace, star, tau.

Elements are finite linear combinations over one of two bases:

* Coxeter basis {T_w : w in W_L}, keyed by AffineWeylElement.  Products fold
  reduced words using T_i T_w = T_{s_i w} (length up) or
  T_{s_i w} + (q_i^{1/2} - q_i^{-1/2}) T_w (length down).
* Bernstein basis {T_w x^lam : w in W0, lam in L}, keyed by (weyl index, lam).
  Products rewrite with the Bernstein relation, whose correction term is the
  finite geometric sum q_i^{1/2} a_i(x) (x^lam - x^{s_i lam})/(1 - x^{-alpha_i_vee}).

Coefficients are ordinary complex floats (or mpmath complex numbers when a
Params is built with extended precision); coefficients below 1e-13 of the
element's largest magnitude are pruned after every product.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from . import affine_weyl as aw
from .affine_weyl import AffineWeylElement
from .root_data import RootDatum

__all__ = [
    "BasisMismatch",
    "HeckeAlgebra",
    "HeckeElement",
    "Params",
    "make_params",
]

class BasisMismatch(ValueError):
    """Operands in different bases where one basis is required."""


@dataclass(frozen=True)
class Params:
    """Numeric parameters q_i > 1 indexed by affine diagram node 0..n."""

    q: tuple          # node index -> value
    sqrt_q: tuple     # node index -> q^{1/2}
    free: tuple       # the free parameters as passed in

    def q_root(self, datum: RootDatum, root_index: int):
        return self.q[datum.positive_roots[root_index].param]


def make_params(datum: RootDatum, values, dps: int | None = None) -> Params:
    """Build Params from the free parameters named by the type's theorem.

    ``values`` is a sequence matching datum.free_parameter_names
    (e.g. (q,) for A2, (q1, q2) for C2/G2, (q0, q1, q2) for BC2).
    ``dps`` switches coefficients to mpmath extended precision.
    """
    values = tuple(values)
    if len(values) != len(datum.free_parameter_names):
        raise ValueError(
            f"{datum.tag} takes parameters {datum.free_parameter_names}, "
            f"got {len(values)} values"
        )
    if any(v <= 1 for v in values):
        raise ValueError("all parameters must satisfy q > 1")
    if dps is not None:
        import mpmath

        mpmath.mp.dps = max(mpmath.mp.dps, dps)
        values = tuple(mpmath.mpf(str(v)) for v in values)
        sqrt = mpmath.sqrt
    else:
        values = tuple(float(v) for v in values)
        sqrt = math.sqrt
    q_nodes = tuple(values[s] for s in datum.node_parameter_slots)
    return Params(q=q_nodes, sqrt_q=tuple(sqrt(v) for v in q_nodes), free=values)


@dataclass
class HeckeElement:
    """A finite linear combination over the Coxeter or Bernstein basis."""

    basis: str                 # "coxeter" | "bernstein"
    terms: dict

    def __add__(self, other):
        if self.basis != other.basis:
            raise BasisMismatch("cannot add elements in different bases")
        out = dict(self.terms)
        for k, c in other.terms.items():
            out[k] = out.get(k, 0) + c
        return HeckeElement(self.basis, _prune(out))

    def __sub__(self, other):
        return self + other.scale(-1)

    def scale(self, c):
        return HeckeElement(self.basis, {k: c * v for k, v in self.terms.items()})

    def coefficient(self, key):
        return self.terms.get(key, 0)

    def max_abs(self):
        return max((abs(c) for c in self.terms.values()), default=0.0)

    def close_to(self, other, tol=1e-10) -> bool:
        scale = max(self.max_abs(), other.max_abs(), 1.0)
        keys = set(self.terms) | set(other.terms)
        return all(
            abs(self.terms.get(k, 0) - other.terms.get(k, 0)) <= tol * scale
            for k in keys
        )


def _prune(terms: dict) -> dict:
    # Drop exact zeros only.  Pruning float coefficients relative to the
    # current maximum is unsound here: intermediate Coxeter-basis expansions
    # legitimately span a dynamic range of q^{l(t_mu)} (well beyond 1e13 for
    # large parameters), and small coefficients in them are exact values, not
    # noise -- a relative cutoff silently corrupts the trace.
    return {k: c for k, c in terms.items() if c != 0}


def _vadd(a, b):
    return tuple(x + y for x, y in zip(a, b))


def _vneg(a):
    return tuple(-x for x in a)


class HeckeAlgebra:
    """The algebra H_L for a fixed datum and parameter point, with caches."""

    def __init__(self, datum: RootDatum, params: Params):
        self.datum = datum
        self.params = params
        self._zero = (0,) * datum.rank
        self._rw_cache: dict = {}
        self._ldesc_cache: dict = {}
        self._push_cache: dict = {}
        self._w0_mult_cache: dict = {}
        self._cox_x_cache: dict = {}
        self._inv_trans_cache: dict = {}
        self._split_cache: dict = {}
        self._zeta = self._find_zeta()

    # -- constructors -------------------------------------------------------

    def one(self, basis="bernstein") -> HeckeElement:
        if basis == "bernstein":
            return HeckeElement("bernstein", {(0, self._zero): 1})
        return HeckeElement("coxeter", {aw.awe_identity(self.datum): 1})

    def T(self, i: int) -> HeckeElement:
        """T_i as a Bernstein element (i in 1..n)."""
        return HeckeElement(
            "bernstein", {(self.datum.simple_weyl_indices[i - 1], self._zero): 1}
        )

    def T_word(self, word) -> HeckeElement:
        h = self.one()
        for i in word:
            h = self.bernstein_mult(h, self.T(i))
        return h

    def x(self, lam) -> HeckeElement:
        return HeckeElement("bernstein", {(0, tuple(lam)): 1})

    def element(self, w_index: int, lam) -> HeckeElement:
        """T_w x^lam as a Bernstein basis element."""
        return HeckeElement("bernstein", {(w_index, tuple(lam)): 1})

    def cox_T(self, i: int) -> HeckeElement:
        return HeckeElement(
            "coxeter", {aw.simple_affine_element(self.datum, i): 1}
        )

    # -- shared word caches --------------------------------------------------

    def _rw(self, a: AffineWeylElement):
        out = self._rw_cache.get(a)
        if out is None:
            out = aw.reduced_word(self.datum, a)
            self._rw_cache[a] = out
        return out

    def _ldesc(self, a: AffineWeylElement):
        out = self._ldesc_cache.get(a)
        if out is None:
            out = aw.left_descents(self.datum, a)
            self._ldesc_cache[a] = out
        return out

    def q_node(self, i: int):
        return self.params.q[i]

    def Q_node(self, i: int):
        s = self.params.sqrt_q[i]
        return s - 1 / s

    def q_of(self, a: AffineWeylElement):
        """q_w = q_{i_1} ... q_{i_l} along any reduced word."""
        word, _ = self._rw(a)
        out = 1.0
        for i in word:
            out *= self.params.q[i]
        return out

    def q_w0(self):
        w0 = self.datum.longest_element
        out = 1.0
        for i in w0.word:
            out *= self.params.q[i]
        return out

    # -- Coxeter engine ------------------------------------------------------

    def _lmul_gen_cox(self, i: int, terms: dict) -> dict:
        Q = self.Q_node(i)
        si = aw.simple_affine_element(self.datum, i)
        out: dict = {}
        for b, c in terms.items():
            sb = aw.awe_mult(self.datum, si, b)
            if i in self._ldesc(b):
                out[sb] = out.get(sb, 0) + c
                out[b] = out.get(b, 0) + Q * c
            else:
                out[sb] = out.get(sb, 0) + c
        return out

    def _rmul_gen_cox(self, i: int, terms: dict, inverse=False) -> dict:
        Q = self.Q_node(i)
        si = aw.simple_affine_element(self.datum, i)
        a_i = aw._simple_affine_roots(self.datum)[i]
        out: dict = {}
        for b, c in terms.items():
            bs = aw.awe_mult(self.datum, b, si)
            signed, k = aw._act_affine_root(self.datum, b, a_i)
            descent = k < 0 or (k == 0 and signed < 0)
            if descent:
                out[bs] = out.get(bs, 0) + c
                out[b] = out.get(b, 0) + Q * c
                if inverse:
                    out[b] = out.get(b, 0) - Q * c  # cancels: T_b T_i^{-1}, i descent
            else:
                out[bs] = out.get(bs, 0) + c
                if inverse:
                    out[b] = out.get(b, 0) - Q * c
        return out

    def coxeter_mult(self, h1: HeckeElement, h2: HeckeElement) -> HeckeElement:
        if h1.basis != "coxeter" or h2.basis != "coxeter":
            raise BasisMismatch("coxeter_mult requires Coxeter-basis operands")
        total: dict = {}
        for a, ca in h1.terms.items():
            word, omega = self._rw(a)
            cur = {
                aw.awe_mult(self.datum, omega, b): c for b, c in h2.terms.items()
            }
            for i in reversed(word):
                cur = self._lmul_gen_cox(i, cur)
            for k, c in cur.items():
                total[k] = total.get(k, 0) + ca * c
        return HeckeElement("coxeter", _prune(total))

    def star(self, h: HeckeElement) -> HeckeElement:
        if h.basis == "bernstein":
            h = self.bernstein_to_coxeter(h)
        out: dict = {}
        for b, c in h.terms.items():
            k = aw.awe_inverse(self.datum, b)
            out[k] = out.get(k, 0) + complex(c).conjugate()
        return HeckeElement("coxeter", out)

    def trace(self, h: HeckeElement):
        if h.basis == "bernstein":
            h = self.bernstein_to_coxeter(h)
        return h.terms.get(aw.awe_identity(self.datum), 0.0)

    # -- Bernstein engine ----------------------------------------------------

    def _a_poly(self, i: int) -> dict:
        """a_{alpha_i}(x) as a lattice polynomial {exponent: coeff}."""
        root = self.datum.simple_root(i)
        q_a = self.params.q[root.param]
        out = {self._zero: 1 - 1 / q_a}
        if root.cls == "R2":
            sq0 = self.params.sqrt_q[0]
            sqn = self.params.sqrt_q[root.param]
            out[_vneg(root.half_coroot)] = sq0 / sqn - 1 / (sq0 * sqn)
        return out

    def _geom(self, lam, i: int) -> dict:
        """(x^lam - x^{s_i lam})/(1 - x^{-alpha_i_vee}) as a lattice polynomial."""
        root = self.datum.simple_root(i)
        k = sum(f * x for f, x in zip(root.functional, lam))
        out: dict = {}
        if k > 0:
            cur = tuple(lam)
            for _ in range(k):
                out[cur] = out.get(cur, 0) + 1
                cur = tuple(x - c for x, c in zip(cur, root.coroot))
        elif k < 0:
            cur = tuple(x - k * c for x, c in zip(lam, root.coroot))  # s_i lam
            for _ in range(-k):
                out[cur] = out.get(cur, 0) - 1
                cur = tuple(x - c for x, c in zip(cur, root.coroot))
        return out

    def _reflect(self, lam, i: int):
        root = self.datum.simple_root(i)
        k = sum(f * x for f, x in zip(root.functional, lam))
        return tuple(x - k * c for x, c in zip(lam, root.coroot))

    def bernstein_correction(self, i: int, lam) -> dict:
        """q_i^{1/2} a_i(x) (x^lam - x^{s_i lam})/(1 - x^{-alpha_i_vee})."""
        sq = self.params.sqrt_q[self.datum.simple_root(i).param]
        a = self._a_poly(i)
        g = self._geom(lam, i)
        out: dict = {}
        for e1, c1 in a.items():
            for e2, c2 in g.items():
                e = _vadd(e1, e2)
                out[e] = out.get(e, 0) + sq * c1 * c2
        return out

    def _w0_lmul(self, i: int, u: int) -> dict:
        """T_i T_u in the finite Hecke algebra, as {weyl index: coeff}."""
        datum = self.datum
        si = datum.simple_weyl_indices[i - 1]
        su = datum.weyl_mult[si][u]
        if datum.weyl[su].length > datum.weyl[u].length:
            return {su: 1}
        Q = self.Q_node(i)
        return {su: 1, u: Q}

    def _w0_mult(self, w: int, u: int) -> dict:
        """T_w T_u in the finite Hecke algebra."""
        key = (w, u)
        out = self._w0_mult_cache.get(key)
        if out is not None:
            return out
        datum = self.datum
        cur = {w: 1}
        for i in datum.weyl[u].word:
            nxt: dict = {}
            for v, c in cur.items():
                si = datum.simple_weyl_indices[i - 1]
                vs = datum.weyl_mult[v][si]
                if datum.weyl[vs].length > datum.weyl[v].length:
                    nxt[vs] = nxt.get(vs, 0) + c
                else:
                    nxt[vs] = nxt.get(vs, 0) + c
                    nxt[v] = nxt.get(v, 0) + self.Q_node(i) * c
            cur = nxt
        self._w0_mult_cache[key] = cur
        return cur

    def _x_through_T(self, lam, v: int) -> dict:
        """x^lam T_v = sum over {(u, nu): coeff} of coeff T_u x^nu, for v in W0."""
        key = (tuple(lam), v)
        out = self._push_cache.get(key)
        if out is not None:
            return out
        datum = self.datum
        if v == 0:
            out = {(0, tuple(lam)): 1}
            self._push_cache[key] = out
            return out
        word = datum.weyl[v].word
        i = word[0]
        si = datum.simple_weyl_indices[i - 1]
        vrest = datum.weyl_mult[si][v]  # s_i v, one shorter
        out = {}
        # x^lam T_i = T_i x^{s_i lam} - correction(s_i lam)
        slam = self._reflect(lam, i)
        for (u, nu), c in self._x_through_T(slam, vrest).items():
            for up, c2 in self._w0_lmul(i, u).items():
                k2 = (up, nu)
                out[k2] = out.get(k2, 0) + c * c2
        for e, ce in self.bernstein_correction(i, slam).items():
            for (u, nu), c in self._x_through_T(e, vrest).items():
                k2 = (u, nu)
                out[k2] = out.get(k2, 0) - ce * c
        self._push_cache[key] = out
        return out

    def bernstein_mult(self, h1: HeckeElement, h2: HeckeElement) -> HeckeElement:
        if h1.basis != "bernstein" or h2.basis != "bernstein":
            raise BasisMismatch("bernstein_mult requires Bernstein-basis operands")
        total: dict = {}
        for (w, lam), c1 in h1.terms.items():
            for (v, mu), c2 in h2.terms.items():
                c12 = c1 * c2
                for (u, nu), c3 in self._x_through_T(lam, v).items():
                    e = _vadd(nu, mu)
                    for wp, c4 in self._w0_mult(w, u).items():
                        k = (wp, e)
                        total[k] = total.get(k, 0) + c12 * c3 * c4
        return HeckeElement("bernstein", _prune(total))

    # -- basis conversion ----------------------------------------------------

    def _find_zeta(self):
        """A small strictly dominant lattice vector (all simple pairings >= 1)."""
        datum = self.datum
        n = datum.rank
        best = None
        rng = range(-8, 9)
        candidates = [(a,) for a in rng] if n == 1 else [
            (a, b) for a in rng for b in rng
        ]
        for v in candidates:
            if all(datum.pair(v, j) >= 1 for j in datum.simple_indices):
                norm = sum(abs(x) for x in v)
                if best is None or norm < best[0]:
                    best = (norm, v)
        assert best is not None
        return best[1]

    def _split_dominant(self, lam):
        """lam = mu - nu with mu, nu dominant and t_mu, t_nu as short as possible.

        Short translations keep the Coxeter expansions of x^lam small, which
        matters both for speed and for floating-point cancellation.
        """
        datum = self.datum
        if all(datum.pair(lam, j) >= 0 for j in datum.simple_indices):
            return tuple(lam), self._zero
        key = tuple(lam)
        cached = self._split_cache.get(key)
        if cached is not None:
            return cached

        def trans_len(v):
            return sum(abs(datum.pair(v, j)) for j in range(len(datum.positive_roots)))

        bound = 8 * max(abs(x) for x in lam) + 8 * max(abs(x) for x in self._zeta)
        rng = range(bound + 1)
        best = None
        for nu in ([(a,) for a in rng] if datum.rank == 1 else
                   [(a, b) for a in rng for b in rng]):
            if not all(datum.pair(nu, j) >= 0 for j in datum.simple_indices):
                continue
            mu = _vadd(lam, nu)
            if not all(datum.pair(mu, j) >= 0 for j in datum.simple_indices):
                continue
            cost = trans_len(nu) + trans_len(mu)
            if best is None or cost < best[0]:
                best = (cost, mu, nu)
        assert best is not None, f"no dominant split found for {lam}"
        out = (best[1], best[2])
        self._split_cache[key] = out
        return out

    def _inv_translation(self, nu) -> dict:
        """(T_{t_nu})^{-1} in the Coxeter basis, for dominant nu."""
        key = tuple(nu)
        out = self._inv_trans_cache.get(key)
        if out is not None:
            return out
        t = aw.translation(self.datum, nu)
        word, omega = self._rw(t)
        cur = {aw.awe_inverse(self.datum, omega): 1}
        for i in reversed(word):
            cur = self._rmul_gen_cox(i, cur, inverse=True)
            cur = _prune(cur)
        self._inv_trans_cache[key] = cur
        return cur

    def _cox_x(self, lam) -> HeckeElement:
        """x^lam in the Coxeter basis."""
        key = tuple(lam)
        out = self._cox_x_cache.get(key)
        if out is not None:
            return out
        mu, nu = self._split_dominant(lam)
        t_mu = HeckeElement("coxeter", {aw.translation(self.datum, mu): 1})
        inv = HeckeElement("coxeter", dict(self._inv_translation(nu)))
        out = self.coxeter_mult(t_mu, inv)
        self._cox_x_cache[key] = out
        return out

    def bernstein_to_coxeter(self, h: HeckeElement) -> HeckeElement:
        if h.basis != "bernstein":
            raise BasisMismatch("bernstein_to_coxeter requires Bernstein basis")
        datum = self.datum
        total: dict = {}
        for (w, lam), c in h.terms.items():
            word = datum.weyl[w].word
            piece = self._cox_x(lam)
            for i in reversed(word):
                piece = HeckeElement(
                    "coxeter", self._lmul_gen_cox(i, piece.terms)
                )
            for k, v in piece.terms.items():
                total[k] = total.get(k, 0) + c * v
        return HeckeElement("coxeter", _prune(total))

    # -- intertwiners --------------------------------------------------------

    def tau_i(self, i: int) -> HeckeElement:
        """tau_i = (1 - x^{-alpha_i_vee}) T_i - q_i^{1/2} a_i(x), Bernstein basis.

        The q_i^{1/2} normalization is forced by the intertwining property
        tau_i x^lam = x^{s_i lam} tau_i and by tau_i^2 = q_i n_i(x) n_i(x^{-1}).
        """
        root = self.datum.simple_root(i)
        sq = self.params.sqrt_q[root.param]
        pre = HeckeElement(
            "bernstein",
            {(0, self._zero): 1, (0, _vneg(root.coroot)): -1},
        )
        out = self.bernstein_mult(pre, self.T(i))
        a = HeckeElement(
            "bernstein", {(0, e): sq * c for e, c in self._a_poly(i).items()}
        )
        return out - a

    def tau(self, w) -> HeckeElement:
        """tau_w along the stored reduced word (word-independent)."""
        if isinstance(w, int):
            w = self.datum.weyl[w]
        h = self.one()
        for i in w.word:
            h = self.bernstein_mult(h, self.tau_i(i))
        return h
