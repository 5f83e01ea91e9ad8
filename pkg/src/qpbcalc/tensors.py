"""Graded tensors of calculus factors with Koszul-signed multiplication.

A tensor element stores a tuple of factor calculi and a dict mapping
per-factor keys ``(monomial, basis word)`` to scalars.  Degree-0 factors
multiply sign-free; odd factors crossing odd factors contribute the usual
sign, so the same class represents H (x) H, A (x) H, Omega(A) (x) Omega(H)
and the unbalanced stand-ins for tensors over the base.
"""

from __future__ import annotations

from .scalars import ONE, Scalar


class FactorMismatchError(ValueError):
    pass


def key_degree(key) -> int:
    return len(key[1])


class TensorElem:
    __slots__ = ("factors", "terms")

    def __init__(self, factors, terms=None):
        self.factors = tuple(factors)
        self.terms = {k: c for k, c in (terms or {}).items() if not c.is_zero()}

    @staticmethod
    def zero(factors):
        return TensorElem(factors)

    @staticmethod
    def unit(factors, coeff=ONE):
        key = tuple((c.algebra.unit_mono(), ()) for c in factors)
        return TensorElem(factors, {key: Scalar.of(coeff)})

    @staticmethod
    def outer(factors, elems, coeff=ONE):
        """Tensor product of single-factor elements (FormElems)."""
        out = {(): Scalar.of(coeff)}
        for e in elems:
            nxt = {}
            for key, c in out.items():
                for k2, c2 in e.terms.items():
                    nxt[key + (k2,)] = c * c2
            out = nxt
        return TensorElem(factors, out)

    def _check(self, other):
        if self.factors != other.factors:
            raise FactorMismatchError("tensor factor spaces differ")

    def is_zero(self):
        return not self.terms

    def __add__(self, other):
        self._check(other)
        terms = dict(self.terms)
        for k, c in other.terms.items():
            acc = terms.get(k, Scalar()) + c
            if acc.is_zero():
                terms.pop(k, None)
            else:
                terms[k] = acc
        return TensorElem(self.factors, terms)

    def __neg__(self):
        return TensorElem(self.factors, {k: -c for k, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def scale(self, coeff):
        coeff = Scalar.of(coeff)
        return TensorElem(self.factors, {k: c * coeff for k, c in self.terms.items()})

    def __mul__(self, other):
        """Koszul-signed componentwise product."""
        if isinstance(other, (int, Scalar)):
            return self.scale(other)
        self._check(other)
        n = len(self.factors)
        terms = {}
        for k1, c1 in self.terms.items():
            degs1 = [key_degree(k) for k in k1]
            for k2, c2 in other.terms.items():
                degs2 = [key_degree(k) for k in k2]
                exp = sum(
                    degs2[i] * degs1[j] for i in range(n) for j in range(i + 1, n)
                )
                sign = ONE if exp % 2 == 0 else Scalar.of(-1)
                partial = {(): c1 * c2 * sign}
                for f in range(n):
                    calc = self.factors[f]
                    prods = calc.mul_keys(k1[f], k2[f])
                    nxt = {}
                    for pre, cp in partial.items():
                        for kf, cf in prods.items():
                            acc = nxt.get(pre + (kf,), Scalar()) + cp * cf
                            if acc.is_zero():
                                nxt.pop(pre + (kf,), None)
                            else:
                                nxt[pre + (kf,)] = acc
                    partial = nxt
                    if not partial:
                        break
                for key, c in partial.items():
                    acc = terms.get(key, Scalar()) + c
                    if acc.is_zero():
                        terms.pop(key, None)
                    else:
                        terms[key] = acc
        return TensorElem(self.factors, terms)

    __rmul__ = __mul__

    def inverse_mono(self):
        """Invert a single unit term with degree-0 invertible factors."""
        if len(self.terms) != 1:
            raise ArithmeticError("can only invert single-term tensors")
        ((key, c),) = self.terms.items()
        from .ncalg import AlgElem

        new_key = []
        coeff = c.invert()
        for calc, (m, w) in zip(self.factors, key):
            if w:
                raise ArithmeticError("cannot invert positive-degree factors")
            inv = AlgElem(calc.algebra, {m: ONE}).inverse_mono()
            ((mi, ci),) = inv.terms.items()
            new_key.append((mi, ()))
            coeff = coeff * ci
        return TensorElem(self.factors, {tuple(new_key): coeff})

    # -- factor surgery ------------------------------------------------------

    def substitute_factor(self, i, expand, new_factors):
        """Replace factor i by an expansion key -> dict[key-tuple -> Scalar].

        The expansion must come from a degree-0 map (no Koszul sign).
        """
        factors = self.factors[:i] + tuple(new_factors) + self.factors[i + 1 :]
        terms = {}
        for key, c in self.terms.items():
            for mid, cm in expand(key[i]).items():
                new_key = key[:i] + tuple(mid) + key[i + 1 :]
                acc = terms.get(new_key, Scalar()) + c * cm
                if acc.is_zero():
                    terms.pop(new_key, None)
                else:
                    terms[new_key] = acc
        return TensorElem(factors, terms)

    def map_factor(self, i, fn):
        """Apply a degree-0 key map key -> dict[key -> Scalar] to factor i."""
        return self.substitute_factor(i, lambda k: {(k2,): c for k2, c in fn(k).items()},
                                      (self.factors[i],))

    def merge_factors(self, i):
        """Multiply adjacent factors i and i+1 (same calculus, no crossing)."""
        calc = self.factors[i]
        if self.factors[i + 1] is not calc:
            raise FactorMismatchError("can only merge factors of one calculus")
        factors = self.factors[:i] + self.factors[i + 1 :]
        terms = {}
        for key, c in self.terms.items():
            for kf, cf in calc.mul_keys(key[i], key[i + 1]).items():
                new_key = key[:i] + (kf,) + key[i + 2 :]
                acc = terms.get(new_key, Scalar()) + c * cf
                if acc.is_zero():
                    terms.pop(new_key, None)
                else:
                    terms[new_key] = acc
        return TensorElem(factors, terms)

    def factor_elem(self, i):
        """Project a single-factor tensor back to dict key -> Scalar."""
        if len(self.factors) != 1:
            raise FactorMismatchError("not a single-factor tensor")
        return dict(self.terms and {k[0]: c for k, c in self.terms.items()})

    def d(self):
        """Differential of the tensor-product DGA."""
        n = len(self.factors)
        terms = {}
        for key, c in self.terms.items():
            for i in range(n):
                before = sum(key_degree(key[j]) for j in range(i))
                sign = ONE if before % 2 == 0 else Scalar.of(-1)
                for kf, cf in self.factors[i].d_key(key[i]).items():
                    new_key = key[:i] + (kf,) + key[i + 1 :]
                    acc = terms.get(new_key, Scalar()) + c * cf * sign
                    if acc.is_zero():
                        terms.pop(new_key, None)
                    else:
                        terms[new_key] = acc
        return TensorElem(self.factors, terms)

    def component(self, degrees):
        """Restrict to terms with the given per-factor degrees (None = any)."""
        out = {}
        for key, c in self.terms.items():
            if all(
                d is None or key_degree(k) == d for k, d in zip(key, degrees)
            ):
                out[key] = c
        return TensorElem(self.factors, out)

    def __eq__(self, other):
        return (
            isinstance(other, TensorElem)
            and self.factors == other.factors
            and self.terms == other.terms
        )

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __repr__(self):
        from .printer import format_tensor

        return format_tensor(self)


def tensor_mul(x: TensorElem, y: TensorElem) -> TensorElem:
    return x * y
