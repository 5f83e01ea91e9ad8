"""Graded linear maps given by images of basis elements.

A BasisRuleMap holds finitely many (or lazily generated) rule images and an
extension mode: 'algebra' extends multiplicatively over words, 'anti'
contravariantly, 'linear' looks terms up as stated.  Images of inverse
letters are derived by inverting unit images.
"""

from __future__ import annotations

from .ncalg import AlgElem
from .scalars import ONE, Scalar


class RuleClosureError(KeyError):
    """An element fell outside the closure of the map's stated rules."""


class BasisRuleMap:
    def __init__(self, name, mode, rules=None, rule_fn=None, unit=None):
        assert mode in ("algebra", "anti", "linear")
        self.name = name
        self.mode = mode
        self.rules = dict(rules or {})
        self.rule_fn = rule_fn
        self.unit = unit  # image of 1 for morphism modes
        self._pow_cache = {}

    def rule(self, key):
        img = self.rules.get(key)
        if img is None and self.rule_fn is not None:
            img = self.rule_fn(key)
            if img is not None:
                self.rules[key] = img
        if img is None:
            raise RuleClosureError(f"{self.name}: no rule for {key}")
        return img

    # -- application ---------------------------------------------------------

    def __call__(self, elem):
        return self.apply(elem)

    def apply(self, elem):
        if isinstance(elem, AlgElem):
            if self.mode == "linear":
                return self._apply_linear(elem.terms)
            return self._apply_morphism(elem)
        # FormElem / TensorElem duck-typed through .terms
        if self.mode != "linear":
            raise RuleClosureError(f"{self.name}: morphism modes act on algebra elements")
        return self._apply_linear(elem.terms)

    def _apply_linear(self, terms):
        out = None
        for key, c in terms.items():
            img = self.rule(key)
            part = img.scale(c) if hasattr(img, "scale") else img * c
            out = part if out is None else out + part
        if out is None:
            raise RuleClosureError(f"{self.name}: empty element needs explicit zero")
        return out

    def _apply_morphism(self, elem: AlgElem):
        out = None
        for mono, c in elem.terms.items():
            img = self._image_of_mono(elem.pres, mono)
            part = img.scale(c) if hasattr(img, "scale") else img * c
            out = part if out is None else out + part
        if out is None:
            if self.unit is None:
                raise RuleClosureError(f"{self.name}: no unit image for zero element")
            return self.unit.scale(Scalar())
        return out

    def _image_of_mono(self, pres, mono):
        letters = [(i, e) for i, e in enumerate(mono) if e]
        if self.mode == "anti":
            letters.reverse()
        img = self.unit
        if img is None:
            raise RuleClosureError(f"{self.name}: morphism mode needs a unit image")
        for i, e in letters:
            img = img * self._power(pres.generators[i].name, e)
        return img

    def _power(self, name, e):
        key = (name, e)
        hit = self._pow_cache.get(key)
        if hit is not None:
            return hit
        base = self.rule(name)
        if e < 0:
            base = base.inverse_mono()
            e = -e
        out = None
        for _ in range(e):
            out = base if out is None else out * base
        self._pow_cache[key] = out
        return out


def apply(rule_map: BasisRuleMap, elem):
    """Spec-level entry point; linear in the element, morphism-mode aware."""
    return rule_map.apply(elem)
