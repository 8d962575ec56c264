"""Batch command-line interface: classification, defects and symbols,
counting, series, local factors, global periods, plus verification and
benchmark drivers.

Exit codes: 0 success (all checks pass), 1 check failure, 2 usage error.
JSON output is deterministic: sorted keys, exact rationals as "p/q" strings,
no timings.  The bench command prints human-readable timings only.
"""

import argparse
import json
import math
import re
import sys
import time
from fractions import Fraction

from .localfield import (make_field, quadratic_defect, hilbert_symbol,
                         count_square_roots, unit_class_reps, unit_defect_kind)
from .qform import (DiagonalForm, invariants, is_anisotropic,
                    anisotropic_representative)
from .counting import (count_level_naive, count_level_histogram, x_series,
                       x_series_at, pi_truncated, conic_measure,
                       residually_anisotropic_pair)
from .kernels import EnumBudgetError
from .closedforms import (case_for_form, x_closed, closed_profile,
                          UnsupportedCase, ClosedFormCase, pi_geometric,
                          pi_from_x, local_factor_chain, halfstep_sum)
from .ratfunc import RF, Zv, IQv, pretty_rf, ratio_if_proportional, VAR_AV
from .periods import table_row, verify_table_row, evaluate_period

_NAMES = ("z", "1/q", "a")


class UsageError(Exception):
    pass


def _frac_str(x: Fraction) -> str:
    return "%d/%d" % (x.numerator, x.denominator)


def _emit(args, obj, human: str):
    if getattr(args, "json", False):
        print(json.dumps(obj, sort_keys=True))
    else:
        print(human)


# ---------------------------------------------------------------------------
# Input grammars
# ---------------------------------------------------------------------------

def parse_field(text: str):
    """Field specs: "q2"/"2" (base dyadic), "q4" (unramified quadratic
    dyadic), odd "3"/"q9" alike, or "ram(c1,c0)" for the ramified dyadic
    extension by x^2 + c1 x + c0."""
    t = text.strip().lower()
    m = re.fullmatch(r"ram\((-?\d+),(-?\d+)\)", t)
    if m:
        try:
            return make_field(2, 1, "ramified",
                              c1=int(m.group(1)), c0=int(m.group(2)))
        except ValueError as ex:
            raise UsageError(str(ex))
    m = re.fullmatch(r"q?(\d+)", t)
    if not m:
        raise UsageError("cannot parse field %r" % text)
    q = int(m.group(1))
    r = math.isqrt(q)
    try:
        if r >= 2 and r * r == q:
            return make_field(r, 2, "unramified")
        return make_field(q)
    except ValueError as ex:
        raise UsageError(str(ex))


_ELT = re.compile(r"(?P<sign>-)?(?:(?P<c>\d+)\*?)?(?:w(?:\^(?P<k>\d+))?)?")


def parse_element(text, field):
    """Element grammar: an integer, optionally times w^k with w the
    uniformizer ("5", "-3", "2*w", "w^3"); or a coordinate pair "(a,b)"
    for quadratic extensions."""
    s = text.replace(" ", "")
    m = re.fullmatch(r"\((-?\d+),(-?\d+)\)", s)
    if m:
        if field.ncoords != 2:
            raise UsageError("pair syntax needs a two-coordinate field")
        return field.elt(int(m.group(1)), int(m.group(2)))
    m = _ELT.fullmatch(s)
    if not s or not m or (m.group("c") is None and "w" not in s):
        raise UsageError("cannot parse element %r" % text)
    c = int(m.group("c")) if m.group("c") is not None else 1
    if m.group("sign"):
        c = -c
    val = field.elt(c)
    if "w" in s:
        k = int(m.group("k")) if m.group("k") else 1
        val = val * field.uniformizer() ** k
    return val


_TERM = re.compile(r"(?:(?P<c>\d+)\*?)?(?:(?P<w>w)(?:\^(?P<k>\d+))?\*?)?"
                   r"x(?:_?\d+)?(?:\^2)?")


def parse_form(text, field):
    """Diagonal-form grammar "c*x_i^2 +- ...": integer coefficients,
    optionally times w^k, acting on squared variables; variable indices
    are decorative.  Example: "x1^2 + x2^2 - 3*w*x3^2"."""
    s = text.replace(" ", "")
    if not s:
        raise UsageError("empty form")
    if s[0] not in "+-":
        s = "+" + s
    toks = re.findall(r"[+-][^+-]+", s)
    if "".join(toks) != s:
        raise UsageError("cannot parse form %r" % text)
    coeffs = []
    for tok in toks:
        m = _TERM.fullmatch(tok[1:])
        if not m:
            raise UsageError("cannot parse term %r" % tok)
        c = int(m.group("c")) if m.group("c") else 1
        if tok[0] == "-":
            c = -c
        val = field.elt(c)
        if m.group("w"):
            k = int(m.group("k")) if m.group("k") else 1
            val = val * field.uniformizer() ** k
        coeffs.append(val)
    return coeffs


def _build_form(args, field) -> DiagonalForm:
    planes = getattr(args, "planes", 0) or 0
    try:
        return DiagonalForm(field, parse_form(args.form, field), planes=planes)
    except ValueError as ex:
        raise UsageError(str(ex))


def parse_n_range(text: str):
    m = re.fullmatch(r"(\d+)(?:\.\.(\d+))?", text.strip())
    if not m:
        raise UsageError("cannot parse range %r (use A or A..B)" % text)
    a = int(m.group(1))
    b = int(m.group(2)) if m.group(2) else a
    if b < a:
        raise UsageError("empty range %r" % text)
    return range(a, b + 1)


# ---------------------------------------------------------------------------
# Simple commands
# ---------------------------------------------------------------------------

def cmd_classify(args) -> int:
    field = parse_field(args.field)
    B = _build_form(args, field)
    iv = invariants(B)
    aniso = is_anisotropic(B)
    case = None
    if aniso and B.planes == 0:
        try:
            c = case_for_form(B)
            case = {"tag": c.tag, "d": c.d}
        except UnsupportedCase:
            case = None
    obj = iv.to_json()
    obj.update({
        "field": field.to_json(),
        "anisotropic": aniso,
        "case": case,
    })
    human = ("m=%d disc=%s kind=%s d=%s hmi=%+d anisotropic=%s case=%s"
             % (iv.m, obj["disc_repr"], obj["disc_kind"], obj["d"], iv.hmi,
                "yes" if aniso else "no",
                case["tag"] if case else "-"))
    _emit(args, obj, human)
    return 0


def cmd_defect(args) -> int:
    field = parse_field(args.field)
    val = parse_element(args.value, field)
    if val.is_zero():
        raise UsageError("quadratic defect of 0 is undefined")
    res = quadratic_defect(field, val)
    ideal = "0" if res.is_square else "pi^%d*o" % res.d
    obj = {"value": args.value, "ord": res.o, "kind": res.kind,
           "d": res.d, "defect_ideal": ideal}
    _emit(args, obj, "defect(%s): kind=%s d=%s ideal=%s (ord %d)"
          % (args.value, res.kind, res.d, ideal, res.o))
    return 0


def cmd_hilbert(args) -> int:
    field = parse_field(args.field)
    a = parse_element(args.a, field)
    b = parse_element(args.b, field)
    if a.is_zero() or b.is_zero():
        raise UsageError("the symbol needs nonzero entries")
    s = hilbert_symbol(field, a, b)
    _emit(args, {"a": args.a, "b": args.b, "symbol": s},
          "(%s, %s) = %+d" % (args.a, args.b, s))
    return 0


def cmd_count(args) -> int:
    field = parse_field(args.field)
    B = _build_form(args, field)
    rho = field.elt(0) if args.zero else parse_element(args.rho, field)
    if args.method == "naive":
        value = count_level_naive(B, rho, args.ell)
    else:
        value = count_level_histogram(B, rho, args.ell)
    obj = {"ell": args.ell, "method": args.method, "value": _frac_str(value)}
    _emit(args, obj, "X_%d = %s" % (args.ell, _frac_str(value)))
    return 0


def cmd_xseries(args) -> int:
    field = parse_field(args.field)
    B = _build_form(args, field)
    if args.closed:
        if args.rho is not None:
            raise UsageError("--closed takes --T or --zero, not --rho")
        prof = closed_profile(B)
        if args.zero:
            coeffs = prof.zero_series(field.q, args.L)
        else:
            if args.T is None:
                raise UsageError("--closed needs --T or --zero")
            coeffs = prof.series_at(args.T, field.q, args.L)
        mode = "closed"
    else:
        kw = {"direct": args.direct}
        if args.zero:
            series = x_series_at(B, None, args.L, **kw)
        elif args.T is not None:
            series = x_series_at(B, args.T, args.L, **kw)
        elif args.rho is not None:
            series = x_series(B, parse_element(args.rho, field), args.L, **kw)
        else:
            raise UsageError("need one of --rho, --T, --zero")
        coeffs = list(series.coeffs)
        mode = "oracle"
    strs = [_frac_str(Fraction(c)) for c in coeffs]
    _emit(args, {"L": args.L, "mode": mode, "coeffs": strs},
          "coeffs " + ",".join(strs))
    return 0


def cmd_pi(args) -> int:
    field = parse_field(args.field)
    B = _build_form(args, field)
    if args.symbolic:
        rf = pi_geometric(closed_profile(B))
        _emit(args, {"pi": pretty_rf(rf, _NAMES)},
              "Pi = %s" % pretty_rf(rf, _NAMES))
        return 0
    if args.alpha_value is None:
        raise UsageError("need --symbolic or --alpha-value with --L/--T-max")
    try:
        a_val = Fraction(args.alpha_value)
    except ValueError:
        raise UsageError("cannot parse --alpha-value %r" % args.alpha_value)
    coeffs = pi_truncated(B, a_val, args.L, args.T_max)
    strs = [_frac_str(c) for c in coeffs]
    _emit(args, {"alpha_value": args.alpha_value, "L": args.L,
                 "T_max": args.T_max, "coeffs": strs},
          "coeffs " + ",".join(strs))
    return 0


def _rf_at(f: RF, iq: Fraction, av: Fraction):
    try:
        return f.eval_partial(iq=iq, av=av).as_fraction()
    except ZeroDivisionError:
        return None


def _ratio_at_q2(f: RF, g: RF, alphas) -> Fraction:
    """Constant f/g sampled at iq = 1/2 over several a = 2^-alpha, or None.

    Some table entries absorb an integer 2 into powers of q, so they match
    the assembled forms as rational functions only once q is the number 2."""
    ratios = []
    for alpha in alphas:
        av = Fraction(1, 2 ** alpha)
        fv = _rf_at(f, Fraction(1, 2), av)
        gv = _rf_at(g, Fraction(1, 2), av)
        if fv is None or gv is None or gv == 0:
            continue
        ratios.append(fv / gv)
    if len(ratios) >= 2 and all(r == ratios[0] for r in ratios):
        return ratios[0]
    return None


def cmd_localfactor(args) -> int:
    spec = table_row(args.n)
    prof = closed_profile(spec.witt.kernel_form)
    chain = local_factor_chain(prof, args.n, spec.witt.k)
    table = spec.local2_rf()
    ratio = ratio_if_proportional(chain, table, constant_free_of=(VAR_AV,))
    if ratio is not None:
        consistent, ratio_repr = True, pretty_rf(ratio, _NAMES)
    else:
        r2 = _ratio_at_q2(chain, table, range(args.n + 2, args.n + 7))
        consistent = r2 is not None
        ratio_repr = _frac_str(r2) if r2 is not None else None
    obj = {
        "n": args.n,
        "local_factor": pretty_rf(chain, _NAMES),
        "normalized": pretty_rf(table, _NAMES),
        "ratio": ratio_repr,
        "consistent": consistent,
    }
    if args.alpha is not None:
        val = _rf_at(table, Fraction(1, 2), Fraction(1, 2 ** args.alpha))
        if val is None:
            raise UsageError("alpha = %d sits on a pole; needs alpha > %d"
                             % (args.alpha, args.n + 1))
        obj["alpha"] = args.alpha
        obj["value"] = _frac_str(val)
    human = "local factor at 2 (n=%d): %s  [consistent=%s]" % (
        args.n, obj["normalized"], obj["consistent"])
    if "value" in obj:
        human += "  value(alpha=%d)=%s" % (args.alpha, obj["value"])
    _emit(args, obj, human)
    return 0 if consistent else 1


def cmd_period(args) -> int:
    pv = evaluate_period(args.n, args.alpha, args.pmax)
    obj = pv.to_json(args.digits)
    human = ("period(n=%d, alpha=%d, pmax=%d) ~ %s  tail <= %.3e\n"
             "  %s  [up to a multiplicative constant]"
             % (args.n, args.alpha, args.pmax, pv.decimal(args.digits),
                float(pv.tail_bound), pv.expression))
    _emit(args, obj, human)
    return 0


# ---------------------------------------------------------------------------
# Verification drivers
# ---------------------------------------------------------------------------

def _unit_with_defect(field, want_kind, want_d=None):
    for u in unit_class_reps(field):
        kind, d = unit_defect_kind(field, u)
        if kind == want_kind and (want_d is None or d == want_d):
            return u
    raise UsageError("no unit class with defect kind %r" % want_kind)


def _rep_for(field, tag, d):
    e = field.e
    if tag == "empty":
        return DiagonalForm(field, [])
    if tag == "unit_square":
        return DiagonalForm(field, [1])
    if tag == "unit_nonsquare":
        kind = "unit4" if d == 2 * e else "unitd"
        return DiagonalForm(
            field, [_unit_with_defect(field, kind, None if d == 2 * e else d)])
    if tag == "prime":
        return DiagonalForm(field, [field.uniformizer()])
    two = {"binary_prime_plus": ("prime", 1),
           "binary_prime_minus": ("prime", -1),
           "binary_unit4_minus": ("unit4", -1),
           "binary_unit4_plus": ("unit4", 1),
           "binary_odd_defect_minus": ("unitd", -1),
           "binary_odd_defect_plus": ("unitd", 1)}
    if tag in two:
        kind, hmi = two[tag]
        return anisotropic_representative(field, 2, disc_kind=kind, d=d, hmi=hmi)
    three = {"ternary_prime": "prime", "ternary_odd_defect": "unitd",
             "ternary_square": "square", "ternary_unit4": "unit4"}
    if tag in three:
        return anisotropic_representative(field, 3, disc_kind=three[tag])
    return anisotropic_representative(field, 4)


def _matrix_configs(quick=False):
    q2 = make_field(2)
    q4 = make_field(2, 2, "unramified")
    r2 = make_field(2, 1, "ramified", c1=0, c0=-2)
    f3 = make_field(3)
    all16 = [("empty", None), ("unit_square", None), ("unit_nonsquare", 1),
             ("unit_nonsquare", 2), ("prime", None),
             ("binary_prime_plus", None), ("binary_prime_minus", None),
             ("binary_unit4_minus", None), ("binary_unit4_plus", None),
             ("binary_odd_defect_minus", 1), ("binary_odd_defect_plus", 1),
             ("ternary_prime", None), ("ternary_odd_defect", None),
             ("ternary_square", None), ("ternary_unit4", None),
             ("quaternary", None)]
    out = [(q2, tag, d) for tag, d in all16]
    if quick:
        out += [(q4, "unit_square", None), (q4, "ternary_square", None),
                (r2, "prime", None), (f3, "binary_unit4_minus", None)]
        return out
    out += [(q4, tag, d) for tag, d in all16]
    out += [(r2, tag, d) for tag, d in
            [("empty", None), ("unit_square", None), ("unit_nonsquare", 1),
             ("unit_nonsquare", 3), ("unit_nonsquare", 4), ("prime", None),
             ("binary_prime_plus", None), ("binary_prime_minus", None),
             ("binary_unit4_minus", None), ("binary_odd_defect_minus", 1),
             ("binary_odd_defect_minus", 3)]]
    out += [(f3, tag, d) for tag, d in
            [("empty", None), ("unit_square", None), ("unit_nonsquare", 0),
             ("prime", None), ("binary_prime_plus", None),
             ("binary_prime_minus", None), ("binary_unit4_minus", None)]]
    return out


def _checks_closedforms(quick=False):
    out = []
    L = 4 if quick else 6
    Ts = range(2) if quick else range(4)
    for field, tag, d in _matrix_configs(quick):
        name = "closedform q=%d e=%d %s d=%s" % (field.q, field.e, tag, d)
        B = _rep_for(field, tag, d)
        case = case_for_form(B)
        if case.tag != tag:
            out.append((name, False, "dispatched to %s" % case.tag))
            continue
        prof = x_closed(case)
        ok, detail = True, ""
        for T in Ts:
            if prof.series_at(T, field.q, L) != list(x_series_at(B, T, L).coeffs):
                ok, detail = False, "series mismatch at T=%d" % T
                break
        if ok and prof.zero_series(field.q, L) != list(x_series_at(B, None, L).coeffs):
            ok, detail = False, "zero-target mismatch"
        out.append((name, ok, detail))

    # closed forms that require e = 1 must refuse other fields
    refused = True
    for tag in ("binary_unit4_plus", "ternary_square", "quaternary"):
        try:
            x_closed(ClosedFormCase(tag, 0, 2, d=1))
            refused = False
        except UnsupportedCase:
            pass
    out.append(("closedform unsupported-e refusal", refused, ""))

    # the two Pi assemblies agree for every case
    ok = True
    for field, tag, d in _matrix_configs(True):
        case = case_for_form(_rep_for(field, tag, d))
        prof = x_closed(case)
        if pi_from_x(prof) != pi_geometric(prof):
            ok = False
    out.append(("pi assembly agreement", ok, ""))

    # half-step sum identity
    ok = True
    for o in range(5):
        for Ln in range(10):
            direct = RF.const(0)
            for l in range(Ln):
                direct = direct + Zv ** l * IQv ** ((l + o + 1) // 2)
            if halfstep_sum(Ln, o) != direct:
                ok = False
    out.append(("half-step sum identity", ok, ""))

    # dimension reduction against direct counting, order 5
    ok, detail = True, ""
    order = 5
    for p in (2, 3):
        field = make_field(p)
        for k in (1, 2):
            for coeffs, rho in [([1], 1), ([1, -5], 1)]:
                B = DiagonalForm(field, coeffs)
                Bk = DiagonalForm(field, coeffs, planes=k)
                small = x_series(B, field.elt(rho), order + 2 * k, direct=True)
                big = x_series(Bk, field.elt(rho), order, direct=True)
                iq = Fraction(1, field.q)
                sub = [small[l] * iq ** (k * l) for l in range(len(small))]
                pref = ((RF.const(1) - Zv * IQv ** (k + 1))
                        / (RF.const(1) - Zv * IQv)).series_z(order, iq=iq)
                rhs = [sum(pref[j] * sub[l - j] for j in range(l + 1))
                       for l in range(order + 1)]
                if rhs != list(big.coeffs):
                    ok, detail = False, "p=%d k=%d %r" % (p, k, coeffs)
    out.append(("dimension reduction vs counting", ok, detail))
    return out


def _checks_lemmas(quick=False):
    out = []
    fields = [make_field(2)] if quick else [make_field(2),
                                            make_field(2, 2, "unramified")]
    for field in fields:
        q, e = field.q, field.e
        fname = "q=%d" % q

        # one-step decay of the level counts past ord(2 rho)
        ok, detail = True, ""
        reps = [_rep_for(field, "unit_square", None),
                _rep_for(field, "prime", None),
                _rep_for(field, "binary_unit4_minus", None),
                _rep_for(field, "ternary_square", None)]
        rhos = [field.elt(1), field.uniformizer(),
                field.uniformizer() ** 2, field.elt(2) * field.elt(3)]
        for B in reps:
            for rho in rhos:
                c = int(rho.ord()) + e + 1
                for l in range(c, c + 3):
                    a = count_level_histogram(B, rho, l)
                    b = count_level_histogram(B, rho, l + 1)
                    if b * q != a:
                        ok, detail = False, "m=%d ord=%d l=%d" % (
                            B.m, int(rho.ord()), l)
        out.append(("stabilized decay %s" % fname, ok, detail))

        # square-root counts against enumeration
        ok, detail = True, ""
        ring6 = field.ring(6)
        seen = set()
        for coords in ring6.elements():
            rho = ring6.lift(coords)
            if rho.is_zero():
                continue
            for l in range(1, 5):
                rl = field.ring(l)
                key = (tuple(rl.reduce(rho)), l)
                if key in seen:
                    continue
                seen.add(key)
                target = tuple(rl.reduce(rho))
                hits = sum(1 for x in rl.elements()
                           if tuple(rl.mul(x, x)) == target)
                if count_square_roots(field, rho, l) != Fraction(hits, rl.size):
                    ok, detail = False, "rho=%r l=%d" % (rho, l)
        out.append(("square-root measure %s" % fname, ok, detail))

        # unit-cross-term conic: measure q^-l + q^-(l-1)/q at every level
        ok, detail = True, ""
        u, v = residually_anisotropic_pair(field)
        grid = [(1, 0, 0, 1), (1, 0, 0, 3), (3, 1, 0, 0), (1, 1, 1, 1),
                (5, 0, 1, 2), (1, 2, 2, 1)]
        for C, bx, ay, d0 in grid:
            Ce, bxe, aye, d0e = (field.elt(C), field.elt(bx),
                                 field.elt(ay), field.elt(d0))
            probe = (u * aye * aye + (Ce + 2) * aye * bxe
                     + v * bxe * bxe + d0e)
            if not probe.is_unit():
                continue
            for l in range(1, 4 if quick else 5):
                got = conic_measure(field, u, v, l, C=C, bx=bx, ay=ay, d0=d0)
                want = Fraction(1, q ** l) + Fraction(1, q ** (l + 1))
                if got != want:
                    ok, detail = False, "C=%d bx=%d ay=%d d0=%d l=%d" % (
                        C, bx, ay, d0, l)
        out.append(("conic measure %s" % fname, ok, detail))

        # symbol properties; the symbol itself cross-checks rules against
        # solution search on every call
        ok, detail = True, ""
        w = field.uniformizer()
        sample = list(unit_class_reps(field))
        sample += [s * w for s in sample[:3]]
        for a in sample:
            for b in sample:
                if hilbert_symbol(field, a, b) != hilbert_symbol(field, b, a):
                    ok, detail = False, "symmetry"
        for a in sample[:4]:
            for b in sample[:4]:
                for c in sample[:4]:
                    lhs = hilbert_symbol(field, a * b, c)
                    rhs = hilbert_symbol(field, a, c) * hilbert_symbol(field, b, c)
                    if lhs != rhs:
                        ok, detail = False, "bimultiplicativity"
        delta = _unit_with_defect(field, "unit4")
        for a in sample:
            if hilbert_symbol(field, a, delta) != (-1) ** int(a.ord()):
                ok, detail = False, "unit4 pairing at %r" % a
        out.append(("symbol properties %s" % fname, ok, detail))

        # defect classification: squares, odd defects below 2e, or 2e
        ok, detail = True, ""
        for uu in unit_class_reps(field):
            res = quadratic_defect(field, uu)
            if res.is_square:
                continue
            if not (res.d == 2 * e or (res.d % 2 == 1 and res.d < 2 * e)):
                ok, detail = False, "unit defect %r -> %r" % (uu, res)
        out.append(("defect classification %s" % fname, ok, detail))
    return out


def _checks_tables(ns):
    out = []
    for n in ns:
        r = verify_table_row(n)
        detail = " ".join("%s:%s" % (k, "ok" if v["pass"] else "FAIL")
                          for k, v in sorted(r["checks"].items()))
        if r["flags"]:
            detail += "  [%d flag(s)]" % len(r["flags"])
        out.append(("tables n=%d" % n, r["pass"], detail))
    return out


def cmd_verify(args) -> int:
    subsets = [s for s in ("lemmas", "closedforms", "tables")
               if getattr(args, s)]
    if not subsets:
        subsets = ["lemmas", "closedforms", "tables"]
    ns = parse_n_range(args.n) if args.n else range(3, 19)
    checks = []
    if "lemmas" in subsets:
        checks += _checks_lemmas(args.quick)
    if "closedforms" in subsets:
        checks += _checks_closedforms(args.quick)
    if "tables" in subsets:
        checks += _checks_tables(ns)
    ok = all(c[1] for c in checks)
    if args.json:
        obj = {"pass": ok,
               "checks": [{"name": n, "pass": p, "detail": d}
                          for n, p, d in checks]}
        print(json.dumps(obj, sort_keys=True))
    else:
        for name, p, detail in checks:
            line = ("ok   " if p else "FAIL ") + name
            if detail:
                line += "  (%s)" % detail
            print(line)
        print("verify: %d/%d checks passed" % (sum(c[1] for c in checks),
                                               len(checks)))
    return 0 if ok else 1


# ---------------------------------------------------------------------------
# Benchmarks
# ---------------------------------------------------------------------------

def _time_once(fn):
    t0 = time.perf_counter()
    val = fn()
    return val, time.perf_counter() - t0


def _time_best(fn, repeats=5):
    best = None
    val = None
    for _ in range(repeats):
        val, dt = _time_once(fn)
        best = dt if best is None else min(best, dt)
    return val, best


def cmd_bench(args) -> int:
    field = parse_field(args.field)
    B = anisotropic_representative(field, 4)
    rho = field.elt(1)
    ell = args.ell
    deep = args.deep
    rows = []

    hv, ht = _time_best(lambda: count_level_histogram(B, rho, ell))
    rows.append(("histogram", "ell=%d" % ell, _frac_str(hv), "%.5fs" % ht))

    points = field.q ** ((ell + field.e) * 4)
    nv, nt = _time_once(
        lambda: count_level_naive(B, rho, ell, budget=max(points, 1 << 26)))
    speed = nt / ht if ht > 0 else float("inf")
    rows.append(("naive", "ell=%d" % ell, _frac_str(nv),
                 "%.3fs (%.0fx slower)" % (nt, speed)))

    dv, dt = _time_best(lambda: count_level_histogram(B, rho, deep), 3)
    rows.append(("histogram", "ell=%d" % deep, _frac_str(dv), "%.5fs" % dt))
    deep_points = field.q ** ((deep + field.e) * 4)
    rows.append(("naive", "ell=%d" % deep, "-",
                 "infeasible (%d points)" % deep_points))

    sv, st = _time_once(lambda: x_series(B, rho, deep))
    rows.append(("stabilized", "L=%d" % deep, _frac_str(sv[ell]), "%.5fs" % st))

    wid = [max(len(r[i]) for r in rows) for i in range(4)]
    for r in rows:
        print("  ".join(r[i].ljust(wid[i]) for i in range(4)))
    ok = nv == hv and sv[ell] == hv
    if not ok:
        print("bench: COUNT MISMATCH")
        return 1
    print("bench: counts agree; histogram speedup %.0fx at ell=%d"
          % (speed, ell))
    return 0


# ---------------------------------------------------------------------------
# Parser and entry point
# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="qperiods",
        description="Exact dyadic local densities of quadratic forms and "
                    "the global period tables built from them.")
    sub = ap.add_subparsers(dest="command", required=True)

    def add(name, fn, help_):
        p = sub.add_parser(name, help=help_)
        p.set_defaults(func=fn)
        p.add_argument("--json", action="store_true",
                       help="machine-readable output (sorted keys)")
        return p

    p = add("classify", cmd_classify, "invariants of a diagonal form")
    p.add_argument("--field", required=True)
    p.add_argument("--form", required=True)
    p.add_argument("--planes", type=int, default=0)

    p = add("defect", cmd_defect, "quadratic defect of an element")
    p.add_argument("--field", required=True)
    p.add_argument("--value", required=True)

    p = add("hilbert", cmd_hilbert, "Hilbert symbol of two elements")
    p.add_argument("--field", required=True)
    p.add_argument("--a", required=True)
    p.add_argument("--b", required=True)

    p = add("count", cmd_count, "one level density X_ell")
    p.add_argument("--field", required=True)
    p.add_argument("--form", required=True)
    p.add_argument("--planes", type=int, default=0)
    p.add_argument("--rho", default=None)
    p.add_argument("--zero", action="store_true")
    p.add_argument("--ell", type=int, required=True)
    p.add_argument("--method", choices=("histogram", "naive"),
                   default="histogram")

    p = add("xseries", cmd_xseries, "level series, by counting or closed form")
    p.add_argument("--field", required=True)
    p.add_argument("--form", required=True)
    p.add_argument("--planes", type=int, default=0)
    p.add_argument("--rho", default=None)
    p.add_argument("--T", type=int, default=None,
                   help="target w^(2T) instead of --rho")
    p.add_argument("--zero", action="store_true", help="target 0")
    p.add_argument("--L", type=int, required=True)
    p.add_argument("--oracle", action="store_true",
                   help="count directly (default)")
    p.add_argument("--closed", action="store_true",
                   help="use the closed form (needs --T or --zero)")
    p.add_argument("--direct", action="store_true",
                   help="disable the stabilized extension")

    p = add("pi", cmd_pi, "Pi, symbolic or numerically truncated")
    p.add_argument("--field", required=True)
    p.add_argument("--form", required=True)
    p.add_argument("--symbolic", action="store_true")
    p.add_argument("--alpha-value", default=None,
                   help="numeric q^-alpha as a fraction, e.g. 1/4")
    p.add_argument("--L", type=int, default=6)
    p.add_argument("--T-max", dest="T_max", type=int, default=24)

    p = add("localfactor", cmd_localfactor,
            "even-prime local factor for the dimension-n chain")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--alpha", type=int, default=None)

    p = add("period", cmd_period, "global period by truncated Euler product")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--alpha", type=int, required=True)
    p.add_argument("--pmax", type=int, required=True)
    p.add_argument("--digits", type=int, default=12)

    p = add("verify", cmd_verify, "run the verification suite")
    p.add_argument("--lemmas", action="store_true")
    p.add_argument("--closedforms", action="store_true")
    p.add_argument("--tables", action="store_true")
    p.add_argument("--n", default=None, help="table rows, e.g. 3..18")
    p.add_argument("--quick", action="store_true")

    p = sub.add_parser("bench", help="time naive vs histogram vs stabilized")
    p.set_defaults(func=cmd_bench)
    p.add_argument("--field", default="q2")
    p.add_argument("--ell", type=int, default=6)
    p.add_argument("--deep", type=int, default=10)

    return ap


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as ex:
        code = ex.code
        return code if isinstance(code, int) else 2
    try:
        return args.func(args)
    except UsageError as ex:
        print("error: %s" % ex, file=sys.stderr)
        return 2
    except (UnsupportedCase, EnumBudgetError, ValueError) as ex:
        print("error: %s" % ex, file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
