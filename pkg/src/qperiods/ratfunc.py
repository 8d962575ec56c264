"""Exact rational functions over Q in the three indeterminates z, iq, av.

z is the generating-series variable, iq stands for the inverse residue
size 1/q, and av is the weight a single uniformizer power carries in
t-weighted sums.  Exponents may be negative (Laurent terms show up in a
few tail coefficients), and all coefficients are `Fraction`s, so every
comparison is exact.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Optional

NVARS = 3
VAR_Z, VAR_IQ, VAR_AV = 0, 1, 2
VAR_NAMES = ("z", "iq", "av")

Mono = tuple


def _frac(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    raise TypeError("expected int or Fraction, got %r" % (x,))


def _mono_mul(m1: Mono, m2: Mono) -> Mono:
    return (m1[0] + m2[0], m1[1] + m2[1], m1[2] + m2[2])


ONE_MONO: Mono = (0, 0, 0)


class Poly:
    """Laurent polynomial with Fraction coefficients, keyed by exponent triples."""

    __slots__ = ("terms",)

    def __init__(self, terms=None):
        tt = {}
        if terms:
            for mono, coeff in terms.items():
                c = _frac(coeff)
                if c:
                    tt[tuple(mono)] = c
        self.terms = tt

    @classmethod
    def const(cls, c) -> "Poly":
        return cls({ONE_MONO: _frac(c)})

    @classmethod
    def var(cls, idx: int, power: int = 1, coeff=1) -> "Poly":
        mono = [0, 0, 0]
        mono[idx] = power
        return cls({tuple(mono): _frac(coeff)})

    @classmethod
    def monomial(cls, ez: int = 0, eiq: int = 0, eav: int = 0, coeff=1) -> "Poly":
        return cls({(ez, eiq, eav): _frac(coeff)})

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def __eq__(self, other):
        other = _coerce_poly(other)
        if other is None:
            return NotImplemented
        return self.terms == other.terms

    def __neg__(self) -> "Poly":
        return Poly({m: -c for m, c in self.terms.items()})

    def __add__(self, other) -> "Poly":
        other = _coerce_poly(other)
        if other is None:
            return NotImplemented
        out = dict(self.terms)
        for m, c in other.terms.items():
            s = out.get(m, Fraction(0)) + c
            if s:
                out[m] = s
            else:
                out.pop(m, None)
        p = Poly()
        p.terms = out
        return p

    __radd__ = __add__

    def __sub__(self, other):
        other = _coerce_poly(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        other = _coerce_poly(other)
        if other is None:
            return NotImplemented
        return other + (-self)

    def __mul__(self, other) -> "Poly":
        other = _coerce_poly(other)
        if other is None:
            return NotImplemented
        out = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                m = _mono_mul(m1, m2)
                s = out.get(m, Fraction(0)) + c1 * c2
                if s:
                    out[m] = s
                else:
                    out.pop(m, None)
        p = Poly()
        p.terms = out
        return p

    __rmul__ = __mul__

    def __pow__(self, k: int) -> "Poly":
        if k < 0:
            raise ValueError("negative power of a polynomial; use RF")
        result = Poly.const(1)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def shift(self, mono: Mono) -> "Poly":
        return Poly({_mono_mul(m, mono): c for m, c in self.terms.items()})

    def min_exp(self, idx: int) -> int:
        if not self.terms:
            return 0
        return min(m[idx] for m in self.terms)

    def max_exp(self, idx: int) -> int:
        if not self.terms:
            return 0
        return max(m[idx] for m in self.terms)

    def subst_monomial(self, idx: int, coeff, mono: Mono = ONE_MONO) -> "Poly":
        """Replace the variable `idx` by coeff * X^mono (coeff a nonzero Fraction)."""
        coeff = _frac(coeff)
        if coeff == 0:
            raise ValueError("substitution coefficient must be nonzero")
        out = {}
        for m, c in self.terms.items():
            t = m[idx]
            rest = list(m)
            rest[idx] = 0
            new = _mono_mul(tuple(rest), tuple(e * t for e in mono))
            s = out.get(new, Fraction(0)) + c * coeff ** t
            if s:
                out[new] = s
            else:
                out.pop(new, None)
        p = Poly()
        p.terms = out
        return p

    def eval_partial(self, z=None, iq=None, av=None) -> "Poly":
        p = self
        for idx, val in ((VAR_Z, z), (VAR_IQ, iq), (VAR_AV, av)):
            if val is not None:
                p = p.subst_monomial(idx, val, ONE_MONO)
        return p

    def as_fraction(self) -> Fraction:
        if not self.terms:
            return Fraction(0)
        if len(self.terms) == 1 and ONE_MONO in self.terms:
            return self.terms[ONE_MONO]
        raise ValueError("polynomial is not constant: %s" % (self,))

    def uses_var(self, idx: int) -> bool:
        return any(m[idx] for m in self.terms)

    def __repr__(self):
        return "Poly(%s)" % format_poly(self)

    def sorted_terms(self):
        return sorted(self.terms.items())


def _coerce_poly(x) -> Optional[Poly]:
    if isinstance(x, Poly):
        return x
    if isinstance(x, (int, Fraction)):
        return Poly.const(x)
    return None


def format_poly(p: Poly, names=VAR_NAMES) -> str:
    if not p.terms:
        return "0"
    parts = []
    for mono, coeff in p.sorted_terms():
        factors = []
        for idx, e in enumerate(mono):
            if e == 0:
                continue
            if e == 1:
                factors.append(names[idx])
            else:
                factors.append("%s^%d" % (names[idx], e))
        if not factors:
            parts.append(str(coeff))
        elif coeff == 1:
            parts.append("*".join(factors))
        elif coeff == -1:
            parts.append("-" + "*".join(factors))
        else:
            parts.append(str(coeff) + "*" + "*".join(factors))
    out = parts[0]
    for term in parts[1:]:
        out += " - " + term[1:] if term.startswith("-") else " + " + term
    return out


class RF:
    """Quotient of two Laurent polynomials; equality by cross-multiplication."""

    __slots__ = ("num", "den")

    def __init__(self, num, den=None):
        num = _coerce_poly(num)
        den = Poly.const(1) if den is None else _coerce_poly(den)
        if den is None or num is None:
            raise TypeError("RF expects Poly/int/Fraction arguments")
        if den.is_zero():
            raise ZeroDivisionError("zero denominator")
        self.num, self.den = _normalize(num, den)

    @classmethod
    def const(cls, c) -> "RF":
        return cls(Poly.const(c))

    @classmethod
    def var(cls, idx: int, power: int = 1) -> "RF":
        if power >= 0:
            return cls(Poly.var(idx, power))
        return cls(Poly.const(1), Poly.var(idx, -power))

    @classmethod
    def monomial(cls, ez=0, eiq=0, eav=0, coeff=1) -> "RF":
        return cls(Poly.monomial(ez, eiq, eav, coeff))

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def __eq__(self, other):
        other = _coerce_rf(other)
        if other is None:
            return NotImplemented
        return (self.num * other.den - other.num * self.den).is_zero()

    def __neg__(self):
        return _raw_rf(-self.num, self.den)

    def __add__(self, other):
        other = _coerce_rf(other)
        if other is None:
            return NotImplemented
        return RF(self.num * other.den + other.num * self.den, self.den * other.den)

    __radd__ = __add__

    def __sub__(self, other):
        other = _coerce_rf(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        other = _coerce_rf(other)
        if other is None:
            return NotImplemented
        return other + (-self)

    def __mul__(self, other):
        other = _coerce_rf(other)
        if other is None:
            return NotImplemented
        return RF(self.num * other.num, self.den * other.den)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = _coerce_rf(other)
        if other is None:
            return NotImplemented
        if other.num.is_zero():
            raise ZeroDivisionError("division by zero rational function")
        return RF(self.num * other.den, self.den * other.num)

    def __rtruediv__(self, other):
        other = _coerce_rf(other)
        if other is None:
            return NotImplemented
        return other / self

    def __pow__(self, k: int):
        if k >= 0:
            return _raw_rf(self.num ** k, self.den ** k)
        if self.num.is_zero():
            raise ZeroDivisionError("negative power of zero")
        return _raw_rf(self.den ** (-k), self.num ** (-k))

    def subst_monomial(self, idx: int, coeff, mono: Mono = ONE_MONO) -> "RF":
        return RF(self.num.subst_monomial(idx, coeff, mono),
                  self.den.subst_monomial(idx, coeff, mono))

    def eval_partial(self, z=None, iq=None, av=None) -> "RF":
        return RF(self.num.eval_partial(z, iq, av), self.den.eval_partial(z, iq, av))

    def as_fraction(self) -> Fraction:
        return self.num.as_fraction() / self.den.as_fraction()

    def uses_var(self, idx: int) -> bool:
        return self.num.uses_var(idx) or self.den.uses_var(idx)

    def series_z(self, order: int, iq=None, av=None) -> list:
        """Power-series coefficients in z up to z^order (exact Fractions).

        Any remaining iq/av dependence must have been substituted away.
        """
        num = self.num.eval_partial(iq=iq, av=av)
        den = self.den.eval_partial(iq=iq, av=av)
        for p in (num, den):
            if p.uses_var(VAR_IQ) or p.uses_var(VAR_AV):
                raise ValueError("series_z needs numeric iq and av")
        shift = den.min_exp(VAR_Z)
        nmin = num.min_exp(VAR_Z) if num else shift
        if nmin < shift:
            raise ValueError("pole at z = 0; no power series")
        ncoef = [Fraction(0)] * (order + 1)
        dcoef = [Fraction(0)] * (order + 1)
        for m, c in num.terms.items():
            k = m[0] - shift
            if k <= order:
                ncoef[k] += c
        for m, c in den.terms.items():
            k = m[0] - shift
            if k <= order:
                dcoef[k] += c
        if dcoef[0] == 0:
            raise ValueError("denominator vanishes at z = 0 after shift")
        out = [Fraction(0)] * (order + 1)
        inv0 = 1 / dcoef[0]
        for k in range(order + 1):
            acc = ncoef[k]
            for j in range(1, k + 1):
                acc -= dcoef[j] * out[k - j]
            out[k] = acc * inv0
        return out

    def __repr__(self):
        if self.den == Poly.const(1):
            return "RF(%s)" % format_poly(self.num)
        return "RF((%s)/(%s))" % (format_poly(self.num), format_poly(self.den))

    def pretty(self) -> str:
        return pretty_rf(self)


def _raw_rf(num: Poly, den: Poly) -> RF:
    out = RF.__new__(RF)
    out.num, out.den = _normalize(num, den)
    return out


def _normalize(num: Poly, den: Poly):
    """Shift out negative exponents and make the pair primitive-ish."""
    if num.is_zero():
        return Poly(), Poly.const(1)
    shift = [0, 0, 0]
    for idx in range(NVARS):
        lo = min(num.min_exp(idx), den.min_exp(idx))
        if lo < 0:
            shift[idx] = -lo
    if any(shift):
        num = num.shift(tuple(shift))
        den = den.shift(tuple(shift))
    lead = den.terms[min(den.terms)]
    if lead != 1:
        inv = 1 / lead
        num = Poly({m: c * inv for m, c in num.terms.items()})
        den = Poly({m: c * inv for m, c in den.terms.items()})
    return num, den


def _coerce_rf(x) -> Optional[RF]:
    if isinstance(x, RF):
        return x
    if isinstance(x, Poly):
        return RF(x)
    if isinstance(x, (int, Fraction)):
        return RF.const(x)
    return None


# Convenience generators.
Zv = RF.var(VAR_Z)
IQv = RF.var(VAR_IQ)
AVv = RF.var(VAR_AV)


def rf_equal(f: RF, g: RF) -> bool:
    return f == g


def ratio_if_proportional(f: RF, g: RF, constant_free_of=(VAR_Z, VAR_IQ, VAR_AV)):
    """Return c with f = c*g where c avoids the listed variables, else None.

    When both inputs vanish identically the ratio is unconstrained and the
    constant 1 is returned.
    """
    if f.is_zero() and g.is_zero():
        return RF.const(1)
    if f.is_zero() or g.is_zero():
        return None
    P = f.num * g.den
    Q = g.num * f.den
    banned = tuple(constant_free_of)

    def grouped(poly):
        groups = {}
        for m, c in poly.terms.items():
            key = tuple(m[i] if i in banned else 0 for i in range(NVARS))
            rest = tuple(0 if i in banned else m[i] for i in range(NVARS))
            groups.setdefault(key, {})[rest] = c
        return {k: Poly(v) for k, v in groups.items()}

    gp, gq = grouped(P), grouped(Q)
    keys = sorted(set(gp) | set(gq))
    polys = [(gp.get(k, Poly()), gq.get(k, Poly())) for k in keys]
    base = None
    for pk, qk in polys:
        if not qk.is_zero():
            base = (pk, qk)
            break
    if base is None:
        return None
    p0, q0 = base
    for pk, qk in polys:
        if not (pk * q0 - p0 * qk).is_zero():
            return None
    c = _raw_rf(p0, q0)
    if any(c.uses_var(i) for i in banned):
        return None
    return c


def pretty_rf(f: RF, names=("z", "iq", "a")) -> str:
    num = format_poly(f.num, names)
    den = format_poly(f.den, names)
    if den == "1":
        return num
    return "(%s) / (%s)" % (num, den)


def geometric_inverse_factor(ez: int = 0, eiq: int = 0, eav: int = 0, coeff=1) -> RF:
    """The factor 1/(1 - coeff * z^ez iq^eiq av^eav)."""
    return RF(Poly.const(1), Poly.const(1) - Poly.monomial(ez, eiq, eav, coeff))
