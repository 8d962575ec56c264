"""Ground-truth solution-measure oracles.

X_ell(rho) is the measure of {a in o^n : B(a) = rho mod 2 pi^ell},
computed exactly: by honest enumeration, by the histogram-convolution
kernel, or (past the stabilization level) by the Hensel scaling laws.
Everything returns Fractions; nothing here is symbolic.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Optional

import numpy as np

from . import kernels
from .localfield import FieldElt, InternalConsistencyError, LocalField
from .qform import DiagonalForm, is_anisotropic


class TruncatedSeries:
    """Coefficients X_0..X_L of the level generating series in z."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs):
        self.coeffs = tuple(Fraction(c) for c in coeffs)
        if not self.coeffs:
            raise ValueError("need at least X_0")
        for c in self.coeffs:
            if c < 0 or c > 1:
                raise ValueError("level measures live in [0, 1], got %s" % (c,))

    @property
    def L(self) -> int:
        return len(self.coeffs) - 1

    def __getitem__(self, i):
        return self.coeffs[i]

    def __iter__(self):
        return iter(self.coeffs)

    def __len__(self):
        return len(self.coeffs)

    def __eq__(self, other):
        if isinstance(other, TruncatedSeries):
            return self.coeffs == other.coeffs
        return self.coeffs == tuple(Fraction(c) for c in other)

    def __repr__(self):
        return "TruncatedSeries(%s)" % (", ".join(str(c) for c in self.coeffs))

    def to_json(self):
        return {"L": self.L, "coeffs": [str(c) for c in self.coeffs]}


def _as_element(field, rho):
    if rho is None:
        return field.zero()
    if isinstance(rho, int):
        return field.elt(rho)
    return rho


def _coeff_coords(B: DiagonalForm):
    return [a.coords for a in B.coeffs]


def count_level_naive(B: DiagonalForm, rho, ell: int, budget=None) -> Fraction:
    """Measure of {a : B(a) = rho mod 2 pi^ell} by full enumeration."""
    if ell < 0:
        raise ValueError("negative level")
    field = B.field
    rho = _as_element(field, rho)
    ring = field.ring(ell + field.e)
    target = ring.reduce(rho.coords)
    if B.n == 0:
        return Fraction(1 if all(t == 0 for t in target) else 0)
    cnt = kernels.naive_count(ring, _coeff_coords(B), target,
                              planes=B.planes, budget=budget)
    return Fraction(cnt, ring.size ** B.n)


def count_level_histogram(B: DiagonalForm, rho, ell: int) -> Fraction:
    """Same measure through per-coordinate value histograms convolved over
    the additive group of o/2 pi^ell."""
    if ell < 0:
        raise ValueError("negative level")
    field = B.field
    rho = _as_element(field, rho)
    ring = field.ring(ell + field.e)
    target = ring.reduce(rho.coords)
    if B.n == 0:
        return Fraction(1 if all(t == 0 for t in target) else 0)
    cnt = kernels.solution_count(ring, _coeff_coords(B), target, planes=B.planes)
    return Fraction(cnt, ring.size ** B.n)


def x_series(B: DiagonalForm, rho, L: int, verify: int = 0,
             direct: bool = False) -> TruncatedSeries:
    """X_0..X_L for a target rho = unit * pi^(2T), or rho = 0 (pass None or 0).

    In the default stabilized mode, levels beyond ord(2 rho) + 1 come from
    the one-step law X_{l+1} = X_l / q (two-step X_{l+2} = X_l / q^n for the
    zero target); that shortcut is only sound for anisotropic forms, so
    isotropic input is rejected unless `direct` asks for full counting.
    `verify` recomputes that many extended levels by direct counting.
    """
    if L < 0:
        raise ValueError("negative truncation order")
    field = B.field
    rho = _as_element(field, rho)
    if direct:
        return TruncatedSeries([count_level_histogram(B, rho, l)
                                for l in range(L + 1)])
    if not is_anisotropic(B):
        raise ValueError("stabilized extension needs an anisotropic form; "
                         "pass direct=True for full counting")
    zero_target = rho.is_zero()
    if zero_target:
        cutoff = field.e + 1
    else:
        cutoff = int(rho.ord()) + field.e + 1
    vals = [count_level_histogram(B, rho, l)
            for l in range(min(L, cutoff) + 1)]
    if zero_target:
        step = Fraction(1, field.q ** B.n)
        while len(vals) <= L:
            vals.append(vals[-2] * step)
    else:
        step = Fraction(1, field.q)
        while len(vals) <= L:
            vals.append(vals[-1] * step)
    series = TruncatedSeries(vals)
    if verify > 0:
        for l in range(cutoff + 1, min(L, cutoff + verify) + 1):
            got = count_level_histogram(B, rho, l)
            if got != series.coeffs[l]:
                raise InternalConsistencyError(
                    "stabilized X_%d = %s but direct count gives %s"
                    % (l, series.coeffs[l], got))
    return series


def x_series_at(B: DiagonalForm, T: Optional[int], L: int, **kw) -> TruncatedSeries:
    """x_series for the canonical target pi^(2T); T = None means rho = 0."""
    if T is None:
        return x_series(B, None, L, **kw)
    if T < 0:
        raise ValueError("negative T")
    return x_series(B, B.field.uniformizer() ** (2 * T), L, **kw)


def pi_truncated(B: DiagonalForm, a_value, L: int, T_max: int,
                 direct: bool = False):
    """Coefficientwise truncation sum_{T <= T_max} a^T x_series(B, T, L),
    returned as a tuple of L + 1 exact rationals (a polynomial in z).

    `a_value` stands for q^(-alpha); the caller owns the tail bound.
    """
    a = Fraction(a_value)
    total = [Fraction(0)] * (L + 1)
    apow = Fraction(1)
    for T in range(T_max + 1):
        s = x_series_at(B, T, L, direct=direct)
        for i, c in enumerate(s.coeffs):
            total[i] += apow * c
        apow *= a
    return tuple(total)


# ---------------------------------------------------------------------------
# The mod-2 projective-line conic count (unramified fields only)
# ---------------------------------------------------------------------------

def residually_anisotropic_pair(field: LocalField):
    """Units u, v with (1+2u, 1+2v) = -1, i.e. u x^2 + xy + v y^2 = 0 mod 2
    forces x = y = 0 mod 2.  Cross-checked both ways."""
    from .localfield import hilbert_symbol
    if field.eram != 1 or field.p != 2:
        raise ValueError("needs an unramified dyadic field")
    ring1 = field.ring(1)
    two = field.elt(2)
    units = [ring1.lift(c) for c in ring1.elements() if ring1.is_unit(c)]
    for u in units:
        for v in units:
            a = field.one() + two * u
            b = field.one() + two * v
            if hilbert_symbol(field, a, b) == -1:
                mod2 = _conic_kernel_trivial(field, u, v)
                if not mod2:
                    raise InternalConsistencyError(
                        "symbol -1 but the mod-2 conic has a nonzero point")
                return u, v
    raise InternalConsistencyError("no residually anisotropic pair found")


def _conic_kernel_trivial(field, u, v) -> bool:
    """True when u x^2 + xy + v y^2 = 0 mod 2 only for x = y = 0 mod 2."""
    ring = field.ring(1)
    uc = ring.reduce(u.coords)
    vc = ring.reduce(v.coords)
    zero = (0,) * field.ncoords
    for xc in ring.elements():
        for yc in ring.elements():
            if xc == zero and yc == zero:
                continue
            val = ring.add(ring.mul(uc, ring.mul(xc, xc)), ring.mul(xc, yc))
            val = ring.add(val, ring.mul(vc, ring.mul(yc, yc)))
            if val == zero:
                return False
    return True


def conic_measure(field: LocalField, u, v, ell: int, C=1, bx=0, ay=0, d0=0) -> Fraction:
    """Measure of {(x, y) : u x^2 + C xy + v y^2 + bx*x + ay*y + d0 = 0 mod 2^ell}
    counted directly (vectorized over all residue pairs)."""
    if field.eram != 1 or field.p != 2:
        raise ValueError("the conic count is for unramified dyadic fields")
    if ell < 1:
        raise ValueError("need ell >= 1")
    u = _as_element(field, u)
    v = _as_element(field, v)
    C = _as_element(field, C)
    bx = _as_element(field, bx)
    ay = _as_element(field, ay)
    d0 = _as_element(field, d0)
    ring = field.ring(ell)
    base = kernels.coord_arrays(ring)
    size = ring.size
    idx = np.arange(size)
    xi = np.repeat(idx, size)
    yi = np.tile(idx, size)
    xs = tuple(c[xi] for c in base)
    ys = tuple(c[yi] for c in base)

    def const(e):
        return tuple(np.full(size * size, cc % m, dtype=np.int64)
                     for cc, m in zip(e.coords, ring.moduli))

    val = kernels.vec_mul(ring, const(u), kernels.vec_mul(ring, xs, xs))
    val = kernels.vec_add(ring, val, kernels.vec_mul(
        ring, const(C), kernels.vec_mul(ring, xs, ys)))
    val = kernels.vec_add(ring, val, kernels.vec_mul(
        ring, const(v), kernels.vec_mul(ring, ys, ys)))
    val = kernels.vec_add(ring, val, kernels.vec_mul(ring, const(bx), xs))
    val = kernels.vec_add(ring, val, kernels.vec_mul(ring, const(ay), ys))
    val = kernels.vec_add(ring, val, const(d0))
    mask = np.ones(size * size, dtype=bool)
    for c in val:
        mask &= (c == 0)
    return Fraction(int(mask.sum()), size * size)
