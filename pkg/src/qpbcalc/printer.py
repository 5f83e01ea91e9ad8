"""Canonical text rendering for engine values.

The grammar in ``parser`` reparses everything printed here, which the
round-trip tests rely on.  ``display_q`` substitutes a display name for the
formal parameter (e.g. ``e^{i*theta}``) without touching computation.
"""

from __future__ import annotations

from fractions import Fraction

from .scalars import Scalar


def format_scalar(s: Scalar, display_q="q") -> str:
    if s.is_zero():
        return "0"
    bits = []
    for k, v in s.terms():
        neg = v < 0
        v = -v if neg else v
        if k == 0:
            body = _frac(v)
        else:
            head = display_q if k == 1 else f"{display_q}^{k}"
            body = head if v == 1 else f"{_frac(v)}*{head}"
        bits.append((neg, body))
    return _join_signed(bits)


def _frac(v: Fraction) -> str:
    return str(v.numerator) if v.denominator == 1 else f"{v.numerator}/{v.denominator}"


def _join_signed(bits):
    out = []
    for i, (neg, body) in enumerate(bits):
        if i == 0:
            out.append(("-" if neg else "") + body)
        else:
            out.append(("- " if neg else "+ ") + body)
    return " ".join(out)


def _coeff_prefix(c: Scalar, display_q) -> tuple[bool, str]:
    """Return (negated, prefix) with prefix ending in '*' unless empty."""
    if c.is_one():
        return False, ""
    if c == Scalar.of(-1):
        return True, ""
    if len(c.c) == 1:
        text = format_scalar(c, display_q)
        if text.startswith("-"):
            return True, text[1:] + "*"
        return False, text + "*"
    return False, f"({format_scalar(c, display_q)})*"


def format_mono(pres, mono, display_q="q") -> str:
    bits = []
    for i, e in enumerate(mono):
        if not e:
            continue
        name = pres.generators[i].name
        bits.append(name if e == 1 else f"{name}^{e}")
    return "*".join(bits) if bits else "1"


def format_alg(elem, display_q="q") -> str:
    if not elem.terms:
        return "0"
    bits = []
    for mono in sorted(elem.terms):
        c = elem.terms[mono]
        body = format_mono(elem.pres, mono, display_q)
        neg, prefix = _coeff_prefix(c, display_q)
        if body == "1":
            text = format_scalar(-c if neg else c, display_q)
            sub_neg = text.startswith("-")
            bits.append((neg ^ sub_neg, text.lstrip("-")))
        else:
            bits.append((neg, prefix + body))
    return _join_signed(bits)


def format_form_word(calc, word) -> str:
    return "/\\".join(calc.form_display(f) for f in word)


def format_form_key(calc, mono, word, coeff, display_q="q"):
    mono_txt = format_mono(calc.algebra, mono, display_q)
    word_txt = format_form_word(calc, word)
    if word_txt:
        body = word_txt if mono_txt == "1" else f"{mono_txt}*{word_txt}"
    else:
        body = mono_txt
    neg, prefix = _coeff_prefix(coeff, display_q)
    if body == "1":
        text = format_scalar(-coeff if neg else coeff, display_q)
        return text.startswith("-") ^ neg, text.lstrip("-")
    return neg, prefix + body


def format_form(elem, display_q="q") -> str:
    if not elem.terms:
        return "0"
    bits = []
    for (mono, word) in sorted(elem.terms):
        bits.append(
            format_form_key(elem.calc, mono, word, elem.terms[(mono, word)], display_q)
        )
    return _join_signed(bits)


def format_tensor(elem, display_q="q") -> str:
    if not elem.terms:
        return "0"
    bits = []
    for key in sorted(elem.terms):
        c = elem.terms[key]
        factor_txts = []
        for calc, (mono, word) in zip(elem.factors, key):
            mono_txt = format_mono(calc.algebra, mono, display_q)
            word_txt = format_form_word(calc, word)
            if word_txt:
                factor_txts.append(
                    word_txt if mono_txt == "1" else f"{mono_txt}*{word_txt}"
                )
            else:
                factor_txts.append(mono_txt)
        body = " (x) ".join(factor_txts)
        neg, prefix = _coeff_prefix(c, display_q)
        bits.append((neg, prefix + body))
    return _join_signed(bits)
