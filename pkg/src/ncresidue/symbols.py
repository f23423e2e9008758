"""Symbol calculus in a collar neighbourhood of the boundary.

Scalar symbols live in a formal differential ring XiExpr generated by the
normal covariable xi_n, the full quadratic form u = |xi|^2, the tangential
quadratic form w, the conformal factor h of the collar metric, and explicit
tangential covariables.  The normal x-derivative acts through the first-jet
parameter hp0 (the normal derivative of h at the base point); tangential
x-derivatives vanish at the base point.

CliffXi couples XiExpr coefficients to Clifford blades with twist labels,
and SymbolExpansion stacks CliffXi pieces by homogeneity order.  On top of
this the module provides the operator symbol, formal composition, the
parametrix recursion, and the symbols of the relevant operator power.
"""

from __future__ import annotations

from fractions import Fraction

from .clifford import CliffordElement, _merge_labels, blade_mul, torsion_element
from .errors import AlphabetMismatch, DimMismatch, NonCanonicalInput
from .exact import GR_I, GaussRational, ParamPoly
from .halfplane import HalfPlaneRational

# key layout: (m, p, q, r, tang) for xi_n^m u^p w^q h^r * prod xi_j^e
# with tang a sorted tuple of (j, e) pairs over tangential indices j.


def _tang_mul(t1, t2):
    if not t1:
        return t2
    if not t2:
        return t1
    exps = dict(t1)
    for j, e in t2:
        exps[j] = exps.get(j, 0) + e
    return tuple(sorted(exps.items()))


class XiExpr:
    """Scalar symbol in the collar jet ring."""

    __slots__ = ("alphabet", "terms")

    def __init__(self, alphabet, terms=None):
        self.alphabet = alphabet
        clean = {}
        for key, coeff in (terms or {}).items():
            if not isinstance(coeff, ParamPoly):
                coeff = ParamPoly.const(alphabet, coeff)
            if coeff.is_zero():
                continue
            clean[key] = coeff
        self.terms = clean

    @classmethod
    def zero(cls, alphabet):
        return cls(alphabet, {})

    @classmethod
    def monomial(cls, alphabet, m=0, p=0, q=0, r=0, tang=(), coeff=1):
        return cls(alphabet, {(m, p, q, r, tuple(sorted(tang))): coeff})

    @classmethod
    def const(cls, alphabet, value):
        return cls.monomial(alphabet, coeff=value)

    @classmethod
    def u_power(cls, alphabet, p):
        return cls.monomial(alphabet, p=p)

    def _check(self, other):
        if other.alphabet != self.alphabet:
            raise AlphabetMismatch("operands over different alphabets")

    def is_zero(self):
        return not self.terms

    def __add__(self, other):
        self._check(other)
        terms = dict(self.terms)
        for key, c in other.terms.items():
            acc = terms.get(key)
            c = c if acc is None else acc + c
            if c.is_zero():
                terms.pop(key, None)
            else:
                terms[key] = c
        out = XiExpr.__new__(XiExpr)
        out.alphabet = self.alphabet
        out.terms = terms
        return out

    def __neg__(self):
        out = XiExpr.__new__(XiExpr)
        out.alphabet = self.alphabet
        out.terms = {k: -c for k, c in self.terms.items()}
        return out

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        self._check(other)
        terms = {}
        for (m1, p1, q1, r1, t1), c1 in self.terms.items():
            for (m2, p2, q2, r2, t2), c2 in other.terms.items():
                key = (m1 + m2, p1 + p2, q1 + q2, r1 + r2, _tang_mul(t1, t2))
                c = c1 * c2
                acc = terms.get(key)
                c = c if acc is None else acc + c
                if c.is_zero():
                    terms.pop(key, None)
                else:
                    terms[key] = c
        out = XiExpr.__new__(XiExpr)
        out.alphabet = self.alphabet
        out.terms = terms
        return out

    def scale(self, factor):
        if not isinstance(factor, ParamPoly):
            factor = ParamPoly.const(self.alphabet, factor)
        out = XiExpr.__new__(XiExpr)
        out.alphabet = self.alphabet
        out.terms = {}
        for key, c in self.terms.items():
            c = c * factor
            if not c.is_zero():
                out.terms[key] = c
        return out

    def __eq__(self, other):
        if not isinstance(other, XiExpr):
            return NotImplemented
        return self.terms == other.terms

    def d_xn(self):
        """Normal x-derivative to first jet order: brings down one hp0."""
        hp0 = ParamPoly.var(self.alphabet, "hp0")
        out = XiExpr.zero(self.alphabet)
        for (m, p, q, r, tang), c in self.terms.items():
            if p:
                out = out + XiExpr(
                    self.alphabet, {(m, p - 1, q + 1, r, tang): c * hp0 * p}
                )
            if q:
                out = out + XiExpr(self.alphabet, {(m, p, q, r, tang): c * hp0 * q})
            if r:
                out = out + XiExpr(self.alphabet, {(m, p, q, r, tang): c * hp0 * r})
        return out

    def d_xin(self):
        """Derivative in the normal covariable."""
        out = XiExpr.zero(self.alphabet)
        for (m, p, q, r, tang), c in self.terms.items():
            if m:
                out = out + XiExpr(self.alphabet, {(m - 1, p, q, r, tang): c * m})
            if p:
                out = out + XiExpr(
                    self.alphabet, {(m + 1, p - 1, q, r, tang): c * (2 * p)}
                )
        return out

    def d_xit(self, j):
        """Derivative in the tangential covariable xi_j."""
        out = XiExpr.zero(self.alphabet)
        for (m, p, q, r, tang), c in self.terms.items():
            if p:
                out = out + XiExpr(
                    self.alphabet,
                    {(m, p - 1, q, r + 1, _tang_mul(tang, ((j, 1),))): c * (2 * p)},
                )
            if q:
                out = out + XiExpr(
                    self.alphabet,
                    {(m, p, q - 1, r + 1, _tang_mul(tang, ((j, 1),))): c * (2 * q)},
                )
            exps = dict(tang)
            e = exps.get(j, 0)
            if e:
                if e == 1:
                    del exps[j]
                else:
                    exps[j] = e - 1
                out = out + XiExpr(
                    self.alphabet,
                    {(m, p, q, r, tuple(sorted(exps.items()))): c * e},
                )
        return out

    def restrict_sphere(self):
        """Restriction to the tangential unit sphere: w = h = 1, u = 1 + xi_n^2.

        Monomials odd in some tangential covariable average to zero over the
        sphere and are dropped; surviving even tangential powers would need a
        genuine angular average and are rejected.
        """
        out = HalfPlaneRational.zero(self.alphabet)
        for (m, p, _q, _r, tang), c in self.terms.items():
            if tang:
                if any(e % 2 for _, e in tang):
                    continue
                raise NonCanonicalInput(
                    "even tangential monomial requires angular averaging"
                )
            out = out + HalfPlaneRational.from_u_power(self.alphabet, m, p).scale(c)
        return out

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for key in sorted(self.terms):
            m, p, q, r, tang = key
            factors = []
            if m:
                factors.append(f"xin^{m}" if m > 1 else "xin")
            if p:
                factors.append(f"u^{p}")
            if q:
                factors.append(f"w^{q}" if q > 1 else "w")
            if r:
                factors.append(f"h^{r}" if r > 1 else "h")
            for j, e in tang:
                factors.append(f"xi{j}^{e}" if e > 1 else f"xi{j}")
            head = "*".join(factors) if factors else "1"
            parts.append(f"({self.terms[key]})*{head}")
        return " + ".join(parts)

    def __repr__(self):
        return f"XiExpr({self})"


class CliffXi:
    """Clifford-algebra-valued symbol: blades with twist labels over XiExpr."""

    __slots__ = ("dim", "alphabet", "terms")

    def __init__(self, dim, alphabet, terms=None):
        self.dim = dim
        self.alphabet = alphabet
        clean = {}
        for (mask, label), coeff in (terms or {}).items():
            if coeff.is_zero():
                continue
            clean[(mask, label)] = coeff
        self.terms = clean

    @classmethod
    def zero(cls, dim, alphabet):
        return cls(dim, alphabet, {})

    @classmethod
    def scalar(cls, dim, xe):
        return cls(dim, xe.alphabet, {(0, ()): xe})

    @classmethod
    def from_clifford(cls, elem):
        terms = {}
        for (mask, label), poly in elem.terms.items():
            terms[(mask, label)] = XiExpr(elem.alphabet, {(0, 0, 0, 0, ()): poly})
        return cls(elem.dim, elem.alphabet, terms)

    def _check(self, other):
        if other.dim != self.dim:
            raise DimMismatch("Clifford operands of different dimension")
        if other.alphabet != self.alphabet:
            raise AlphabetMismatch("operands over different alphabets")

    def is_zero(self):
        return not self.terms

    def __add__(self, other):
        self._check(other)
        terms = dict(self.terms)
        for key, c in other.terms.items():
            acc = terms.get(key)
            c = c if acc is None else acc + c
            if c.is_zero():
                terms.pop(key, None)
            else:
                terms[key] = c
        return CliffXi(self.dim, self.alphabet, terms)

    def __neg__(self):
        return CliffXi(
            self.dim, self.alphabet, {k: -c for k, c in self.terms.items()}
        )

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        self._check(other)
        terms = {}
        for (m1, l1), c1 in self.terms.items():
            for (m2, l2), c2 in other.terms.items():
                mask, sign = blade_mul(m1, m2)
                key = (mask, _merge_labels(l1, l2))
                c = (c1 * c2).scale(sign)
                acc = terms.get(key)
                c = c if acc is None else acc + c
                terms[key] = c
        return CliffXi(self.dim, self.alphabet, terms)

    def scale(self, factor):
        if isinstance(factor, XiExpr):
            return CliffXi(
                self.dim,
                self.alphabet,
                {k: c * factor for k, c in self.terms.items()},
            )
        return CliffXi(
            self.dim,
            self.alphabet,
            {k: c.scale(factor) for k, c in self.terms.items()},
        )

    def __eq__(self, other):
        if not isinstance(other, CliffXi):
            return NotImplemented
        return self.terms == other.terms

    def _map(self, fn):
        out = CliffXi.zero(self.dim, self.alphabet)
        for key, c in self.terms.items():
            out = out + CliffXi(self.dim, self.alphabet, {key: fn(c)})
        return out

    def d_xn(self):
        return self._map(lambda c: c.d_xn())

    def d_xin(self, k=1):
        out = self
        for _ in range(k):
            out = out._map(lambda c: c.d_xin())
        return out

    def d_xit(self, j):
        return self._map(lambda c: c.d_xit(j))

    def scalar_part(self):
        """Blade-free content by twist label: {label: XiExpr}."""
        out = {}
        for (mask, label), c in self.terms.items():
            if mask == 0:
                out[label] = out.get(label, XiExpr.zero(self.alphabet)) + c
        return {k: v for k, v in out.items() if not v.is_zero()}

    def restrict_sphere(self):
        """{(mask, label): HalfPlaneRational} on the tangential unit sphere."""
        out = {}
        for key, c in self.terms.items():
            f = c.restrict_sphere()
            if not f.is_zero():
                out[key] = f
        return out

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for (mask, label) in sorted(self.terms):
            blade = "*".join(f"c{j + 1}" for j in range(self.dim) if mask >> j & 1)
            tags = [blade] if blade else []
            tags.extend(label)
            head = "*".join(tags) if tags else "1"
            parts.append(f"[{self.terms[(mask, label)]}] {head}")
        return "  +  ".join(parts)

    def __repr__(self):
        return f"CliffXi({self})"


class SymbolExpansion:
    """Finite stack of homogeneous CliffXi pieces, keyed by order."""

    __slots__ = ("dim", "alphabet", "orders", "meta")

    def __init__(self, dim, alphabet, orders=None, meta=None):
        self.dim = dim
        self.alphabet = alphabet
        self.orders = {o: c for o, c in (orders or {}).items() if not c.is_zero()}
        self.meta = meta or {}

    def __getitem__(self, order):
        got = self.orders.get(order)
        return got if got is not None else CliffXi.zero(self.dim, self.alphabet)

    def __contains__(self, order):
        return order in self.orders

    def items(self):
        return sorted(self.orders.items(), reverse=True)


def laplace_symbol(dim, alphabet, b_term=None, gdn=None):
    """Symbol (orders 2, 1, 0) of the generalized Laplacian on the collar.

    b_term is the Clifford-valued zero-order block (the operator is written
    as a metric Laplacian plus first-order drift minus b_term).  gdn is the
    scalar multiplying i*xi_n in the subleading symbol; by default it is the
    collar value dim/2 * hp0.
    """
    if gdn is None:
        gdn = ParamPoly.var(alphabet, "hp0") * Fraction(dim, 2)
    elif not isinstance(gdn, ParamPoly):
        gdn = ParamPoly.const(alphabet, gdn)

    p2 = CliffXi.scalar(dim, XiExpr.u_power(alphabet, 1))

    phi = ("phi",)
    triples = {
        (a, b, c): ParamPoly.var(alphabet, f"T_{a}_{b}_{c}")
        for a in range(1, dim + 1)
        for b in range(a + 1, dim + 1)
        for c in range(b + 1, dim + 1)
    }
    ct = torsion_element(dim, alphabet, triples, label=phi)
    cy = CliffordElement.zero(dim, alphabet)
    for j in range(1, dim + 1):
        cy = cy + CliffordElement.generator(dim, alphabet, j).scale(
            ParamPoly.var(alphabet, f"Y_{j}")
        ).with_label(phi)
    w_elem = ct + cy

    k_list = []
    for j in range(1, dim + 1):
        cj = CliffordElement.generator(dim, alphabet, j)
        k_list.append(cj * w_elem + w_elem * cj)

    p1 = CliffXi.zero(dim, alphabet)
    for j in range(1, dim):
        xi_j = XiExpr.monomial(alphabet, tang=((j, 1),))
        drift = XiExpr.monomial(
            alphabet,
            tang=((j, 1),),
            coeff=ParamPoly.var(alphabet, f"X_{j}") * Fraction(1, 2),
        )
        p1 = p1 + CliffXi.scalar(dim, drift)
        p1 = p1 + CliffXi.from_clifford(k_list[j - 1]).scale(xi_j)
    xi_n = XiExpr.monomial(alphabet, m=1)
    p1 = p1 + CliffXi.scalar(
        dim,
        XiExpr.monomial(
            alphabet, m=1, coeff=ParamPoly.var(alphabet, f"X_{dim}") * Fraction(1, 2)
        ),
    )
    p1 = p1 + CliffXi.from_clifford(k_list[dim - 1]).scale(xi_n)
    p1 = p1 + CliffXi.scalar(dim, XiExpr.monomial(alphabet, m=1, coeff=gdn))
    p1 = p1.scale(GR_I)

    if b_term is None:
        p0 = CliffXi.zero(dim, alphabet)
    else:
        p0 = -CliffXi.from_clifford(b_term)

    meta = {"gdn": gdn, "K": k_list, "W": w_elem}
    return SymbolExpansion(dim, alphabet, {2: p2, 1: p1, 0: p0}, meta)


def _factorial(k):
    out = 1
    for j in range(2, k + 1):
        out *= j
    return out


def _dxn_power(c, k, cache):
    got = cache.get(k)
    if got is None:
        got = _dxn_power(c, k - 1, cache).d_xn() if k else c
        cache[k] = got
    return got


def compose_symbols(left, right, min_order):
    """Formal symbol product, collected by order down to min_order.

    Only the normal covariable contributes derivative terms: tangential
    x-derivatives vanish at the base point in the collar model.
    """
    if left.dim != right.dim:
        raise DimMismatch("symbol factors of different dimension")
    out = {}
    right_caches = {t: {0: q} for t, q in right.orders.items()}
    for s, p in left.orders.items():
        # xi_n-derivatives of p_s truncate quickly; bound k by the drop to
        # min_order
        for t, q in right.orders.items():
            for k in range(0, s - min_order - t + 1):
                dp = p.d_xin(k)
                if dp.is_zero():
                    break
                dq = _dxn_power(q, k, right_caches[t])
                if dq.is_zero():
                    continue
                order = s - k + t
                if order < min_order:
                    continue
                coeff = (GR_I * (-1)) ** k * Fraction(1, _factorial(k))
                piece = (dp * dq).scale(coeff)
                acc = out.get(order)
                out[order] = piece if acc is None else acc + piece
    return SymbolExpansion(left.dim, left.alphabet, out)


def invert_symbol(symbol, depth):
    """Parametrix symbols q_{-2}, ..., q_{-2-depth} of a second-order symbol."""
    dim, alphabet = symbol.dim, symbol.alphabet
    u_inv = CliffXi.scalar(dim, XiExpr.u_power(alphabet, -1))
    q = {-2: u_inv}
    caches = {-2: {0: u_inv}}
    for m in range(1, depth + 1):
        # the new symbol q_{-2-m} is fixed by the vanishing of the
        # composition at order -m, where it enters through p_2 * q_{-2-m}
        acc = CliffXi.zero(dim, alphabet)
        for s in (2, 1, 0):
            p = symbol[s]
            if p.is_zero():
                continue
            for k in range(0, m + 3):
                t = -m - s + k
                if t not in q:
                    continue
                dp = p.d_xin(k)
                if dp.is_zero():
                    continue
                dq = _dxn_power(q[t], k, caches[t])
                if dq.is_zero():
                    continue
                coeff = (GR_I * (-1)) ** k * Fraction(1, _factorial(k))
                acc = acc + (dp * dq).scale(coeff)
        q[-2 - m] = -(u_inv * acc)
        caches[-2 - m] = {0: q[-2 - m]}
    return SymbolExpansion(dim, alphabet, q, dict(symbol.meta))


def drift_subsymbol_parts(symbol):
    """Split of q_{-3} into normal, drift, and twist pieces.

    Returns (b1, b2, b3): b1 carries the collar normal-direction terms, b2
    the scalar drift in the tangential covariables, b3 the twist coupling.
    Their sum equals the first subleading parametrix symbol.
    """
    dim, alphabet = symbol.dim, symbol.alphabet
    gdn = symbol.meta["gdn"]
    k_list = symbol.meta["K"]
    hp0 = ParamPoly.var(alphabet, "hp0")
    minus_i = -GR_I

    b1 = CliffXi.scalar(
        dim, XiExpr.monomial(alphabet, m=1, p=-2, coeff=gdn * minus_i)
    ) + CliffXi.scalar(
        dim,
        XiExpr.monomial(alphabet, m=1, p=-3, q=1, coeff=hp0 * (minus_i * 2)),
    )

    b2 = CliffXi.zero(dim, alphabet)
    b3 = CliffXi.zero(dim, alphabet)
    u2 = XiExpr.u_power(alphabet, -2)
    for j in range(1, dim + 1):
        if j < dim:
            xi_j = XiExpr.monomial(alphabet, tang=((j, 1),))
        else:
            xi_j = XiExpr.monomial(alphabet, m=1)
        xj = ParamPoly.var(alphabet, f"X_{j}")
        b2 = b2 + CliffXi.scalar(
            dim, (u2 * xi_j).scale(xj * (minus_i * Fraction(1, 2)))
        )
        b3 = b3 + CliffXi.from_clifford(k_list[j - 1]).scale(
            (u2 * xi_j).scale(minus_i)
        )
    return b1, b2, b3


def power_symbol(symbol, nbar, parametrix=None):
    """Leading and subleading symbols of the relevant operator power.

    nbar is the boundary dimension (dim - 1, even).  Returns a
    SymbolExpansion with orders 2 - nbar and 1 - nbar; meta carries the
    split of the subleading symbol into normal / drift / twist parts.
    """
    dim, alphabet = symbol.dim, symbol.alphabet
    half = nbar // 2
    top = CliffXi.scalar(dim, XiExpr.u_power(alphabet, 1 - half))

    if parametrix is None:
        parametrix = invert_symbol(symbol, 1)
    qm3 = parametrix[-3]

    factor = XiExpr.monomial(
        alphabet, p=2 - half, coeff=GaussRational(Fraction(nbar - 2, 2))
    )
    b1, b2, b3 = drift_subsymbol_parts(symbol)

    # correction sum from composing leading parametrix factors
    ksum = CliffXi.zero(dim, alphabet)
    du_inv = XiExpr.u_power(alphabet, -1).d_xn()
    for k in range(0, half - 2):
        dxi = XiExpr.monomial(alphabet, p=k + 2 - half).d_xin()
        term = dxi * du_inv * XiExpr.u_power(alphabet, -k)
        ksum = ksum + CliffXi.scalar(dim, term.scale(-GR_I))

    part_normal = b1.scale(factor) + ksum
    part_drift = b2.scale(factor)
    part_twist = b3.scale(factor)
    sub = part_normal + part_drift + part_twist

    check = qm3.scale(factor) + ksum
    if not (sub - check).is_zero():
        raise NonCanonicalInput("subleading power symbol split is inconsistent")

    meta = dict(symbol.meta)
    meta["parts"] = {
        "normal": part_normal,
        "drift": part_drift,
        "twist": part_twist,
    }
    return SymbolExpansion(dim, alphabet, {2 - nbar: top, 1 - nbar: sub}, meta)
