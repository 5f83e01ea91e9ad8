"""Presented noncommutative algebras with rewrite normalisation.

An algebra is given by an ordered list of generators (each with an
invertibility flag and an integer weight for the structure coaction) and a
finite set of two-letter rewrite rules.  Normal-form monomials are exponent
vectors in generator order; rules are oriented so that normalisation
terminates, which the test suite certifies empirically on random and
exhaustive word sets.

Two rule shapes occur in practice:

* swaps ``y.x -> c * x.y`` for generators ``x < y`` with a unit coefficient,
* eliminations such as the quantum-determinant pair, whose left side is
  already in generator order; after sorting, the offending letters are
  commuted until adjacent and then eliminated.
"""

from __future__ import annotations

from dataclasses import dataclass

from .scalars import ONE, Scalar

Monomial = tuple  # exponent vector aligned with the generator order
Word = tuple  # tuple of (generator index, exponent) pairs


class BadPresentationError(RuntimeError):
    """Normalisation exceeded its step budget (non-terminating rules?)."""


class DomainError(ValueError):
    """A non-invertible generator received a negative exponent."""


class MismatchError(ValueError):
    """Operands belong to different presentations."""


@dataclass(frozen=True)
class GeneratorSpec:
    name: str
    invertible: bool = False
    degree: int = 0


class AlgebraPresentation:
    def __init__(self, name, generators, counit=None, budget=200_000):
        self.name = name
        self.generators = tuple(generators)
        self.index = {g.name: i for i, g in enumerate(self.generators)}
        if len(self.index) != len(self.generators):
            raise ValueError("duplicate generator names")
        self.rules = {}  # (i, j) -> dict[Monomial, Scalar]
        self.swaps = {}  # (i, j) with i > j -> unit Scalar c, meaning g_i g_j = c g_j g_i
        self.eliminations = []  # ordered pairs (i, j), i < j, that may not coexist
        self.counit = dict(counit) if counit else None  # gen name -> Scalar
        self.budget = budget
        self._mono_cache = {}

    # -- construction ------------------------------------------------------

    def add_rule(self, left, right_terms):
        """Register ``g_x g_y -> sum c * monomial``.

        ``left`` is a pair of generator names, ``right_terms`` a list of
        ``(coefficient, {gen: exp})`` pairs whose monomials must already be
        in normal form.
        """
        i, j = (self.index[left[0]], self.index[left[1]])
        rhs = {}
        for coeff, exps in right_terms:
            mono = self._mono_of_dict(exps)
            rhs[mono] = rhs.get(mono, Scalar()) + Scalar.of(coeff)
        rhs = {m: c for m, c in rhs.items() if not c.is_zero()}
        self.rules[(i, j)] = rhs
        if i > j and len(rhs) == 1:
            ((mono, coeff),) = rhs.items()
            if coeff.is_unit() and self._is_transposition(mono, i, j):
                self.swaps[(i, j)] = coeff
        if i < j:
            self.eliminations.append((i, j))
        self._mono_cache.clear()

    def _is_transposition(self, mono, i, j):
        want = [0] * len(self.generators)
        want[i] += 1
        want[j] += 1
        return list(mono) == want

    def _mono_of_dict(self, exps) -> Monomial:
        vec = [0] * len(self.generators)
        for gname, e in exps.items():
            vec[self.index[gname]] = int(e)
        return tuple(vec)

    # -- basic helpers -----------------------------------------------------

    def mono(self, **exps) -> Monomial:
        return self._mono_of_dict(exps)

    def unit_mono(self) -> Monomial:
        return (0,) * len(self.generators)

    def mono_word(self, mono: Monomial) -> Word:
        return tuple((i, e) for i, e in enumerate(mono) if e)

    def mono_degree(self, mono: Monomial) -> int:
        return sum(e * g.degree for e, g in zip(mono, self.generators))

    def check_domain(self, word: Word):
        for i, e in word:
            if e < 0 and not self.generators[i].invertible:
                raise DomainError(
                    f"negative power of non-invertible generator "
                    f"{self.generators[i].name}"
                )

    def counit_of_mono(self, mono: Monomial) -> Scalar:
        if self.counit is None:
            raise ValueError(f"presentation {self.name} has no counit")
        out = ONE
        for i, e in enumerate(mono):
            if e:
                eps = self.counit.get(self.generators[i].name, Scalar())
                out = out * eps ** e if not eps.is_zero() else Scalar()
            if out.is_zero():
                return out
        return out

    # -- normalisation -----------------------------------------------------

    def swap_scalar(self, i, j):
        """Unit c with g_i g_j = c g_j g_i for single letters, or None."""
        if i == j:
            return ONE
        if i > j:
            return self.swaps.get((i, j))
        c = self.swaps.get((j, i))
        return c.invert() if c is not None else None

    def normalize_word(self, word, coeff=ONE):
        """Rewrite a word to a dict Monomial -> Scalar."""
        self.check_domain(tuple(word))
        out = {}
        stack = [(coeff, tuple(word))]
        steps = 0
        while stack:
            c, w = stack.pop()
            steps += 1
            if steps > self.budget:
                raise BadPresentationError(
                    f"normalisation budget exceeded in {self.name}"
                )
            red = self._reduce_once(c, w)
            if red is None:
                mono = self._word_to_mono(w)
                acc = out.get(mono, Scalar()) + c
                if acc.is_zero():
                    out.pop(mono, None)
                else:
                    out[mono] = acc
            else:
                stack.extend(red)
        return out

    def _reduce_once(self, coeff, w):
        # merge adjacent equal letters and drop zero exponents first
        for k in range(len(w)):
            if w[k][1] == 0:
                return [(coeff, w[:k] + w[k + 1 :])]
            if k + 1 < len(w) and w[k][0] == w[k + 1][0]:
                e = w[k][1] + w[k + 1][1]
                mid = ((w[k][0], e),) if e else ()
                return [(coeff, w[:k] + mid + w[k + 2 :])]
        # adjacent elimination rules first: swapping must not tear the pair apart
        for k in range(len(w) - 1):
            (x, a), (y, b) = w[k], w[k + 1]
            if x < y and (x, y) in self.rules:
                return self._apply_rule(coeff, w, k, x, a, y, b, self.rules[(x, y)])
        # adjacent out-of-order pairs
        for k in range(len(w) - 1):
            (x, a), (y, b) = w[k], w[k + 1]
            if x <= y:
                continue
            swap = self.swaps.get((x, y))
            if swap is not None:
                new = w[:k] + ((y, b), (x, a)) + w[k + 2 :]
                return [(coeff * swap ** (a * b), new)]
            rhs = self.rules.get((x, y))
            if rhs is None:
                raise BadPresentationError(
                    f"no rule to reorder {self.generators[x].name}"
                    f"*{self.generators[y].name} in {self.name}"
                )
            return self._apply_rule(coeff, w, k, x, a, y, b, rhs)
        # elimination of ordered but forbidden pairs (possibly non-adjacent)
        for (x, y) in self.eliminations:
            pos_x = [k for k, (g, e) in enumerate(w) if g == x]
            pos_y = [k for k, (g, e) in enumerate(w) if g == y]
            if not pos_x or not pos_y:
                continue
            k = pos_x[-1]
            m = pos_y[0]
            if m != k + 1:
                # commute the x letter rightwards until adjacent to y
                c = coeff
                g, a = w[k]
                moved = list(w[:k] + w[k + 1 :])
                insert_at = m - 1
                for t in range(k, insert_at):
                    z, b = moved[t]
                    s = self.swap_scalar(g, z)
                    if s is None:
                        raise BadPresentationError(
                            f"cannot commute {self.generators[g].name} past "
                            f"{self.generators[z].name} for elimination"
                        )
                    c = c * s ** (a * b)
                moved.insert(insert_at, (g, a))
                return [(c, tuple(moved))]
            rhs = self.rules[(x, y)]
            return self._apply_rule(coeff, w, k, x, w[k][1], y, w[k + 1][1], rhs)
        return None

    def _apply_rule(self, coeff, w, k, x, a, y, b, rhs):
        # peel single letters off the adjacent powers: x^a y^b = x^(a-1) (xy) y^(b-1)
        prefix = w[:k] + (((x, a - 1),) if a != 1 else ())
        suffix = (((y, b - 1),) if b != 1 else ()) + w[k + 2 :]
        out = []
        for mono, c in rhs.items():
            out.append((coeff * c, prefix + self.mono_word(mono) + suffix))
        if not out:
            return [(Scalar(), ())]
        return out

    def _word_to_mono(self, w) -> Monomial:
        vec = [0] * len(self.generators)
        pos = -1
        for g, e in w:
            if g <= pos:
                raise BadPresentationError("unsorted word escaped reduction")
            pos = g
            vec[g] = e
        return tuple(vec)

    def mono_mul(self, m1: Monomial, m2: Monomial):
        key = (m1, m2)
        hit = self._mono_cache.get(key)
        if hit is None:
            hit = self.normalize_word(self.mono_word(m1) + self.mono_word(m2))
            self._mono_cache[key] = hit
        return hit

    def __repr__(self):
        return f"<algebra {self.name}: {', '.join(g.name for g in self.generators)}>"


class AlgElem:
    """Finite linear combination of normal-form monomials."""

    __slots__ = ("pres", "terms")

    def __init__(self, pres: AlgebraPresentation, terms=None):
        self.pres = pres
        self.terms = {m: c for m, c in (terms or {}).items() if not c.is_zero()}

    # -- constructors ------------------------------------------------------

    @staticmethod
    def zero(pres):
        return AlgElem(pres)

    @staticmethod
    def unit(pres, coeff=ONE):
        c = Scalar.of(coeff)
        return AlgElem(pres, {pres.unit_mono(): c} if not c.is_zero() else {})

    @staticmethod
    def gen(pres, name, exp=1):
        return AlgElem(pres, {pres.mono(**{name: exp}): ONE})

    @staticmethod
    def of_word(pres, word, coeff=ONE):
        """Normalise a word given as ((gen name, exp), ...)."""
        idx_word = tuple((pres.index[g], e) for g, e in word)
        return AlgElem(pres, pres.normalize_word(idx_word, Scalar.of(coeff)))

    def _check(self, other):
        if self.pres is not other.pres:
            raise MismatchError(
                f"presentations differ: {self.pres.name} vs {other.pres.name}"
            )

    # -- ring operations ---------------------------------------------------

    def __add__(self, other):
        self._check(other)
        terms = dict(self.terms)
        for m, c in other.terms.items():
            acc = terms.get(m, Scalar()) + c
            if acc.is_zero():
                terms.pop(m, None)
            else:
                terms[m] = acc
        return AlgElem(self.pres, terms)

    def __neg__(self):
        return AlgElem(self.pres, {m: -c for m, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def scale(self, coeff):
        coeff = Scalar.of(coeff)
        return AlgElem(self.pres, {m: c * coeff for m, c in self.terms.items()})

    def __mul__(self, other):
        if isinstance(other, (int, Scalar)):
            return self.scale(other)
        self._check(other)
        terms = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                c12 = c1 * c2
                for m, c in self.pres.mono_mul(m1, m2).items():
                    acc = terms.get(m, Scalar()) + c12 * c
                    if acc.is_zero():
                        terms.pop(m, None)
                    else:
                        terms[m] = acc
        return AlgElem(self.pres, terms)

    __rmul__ = scale

    def __pow__(self, n: int):
        if n < 0:
            return self.inverse_mono() ** (-n)
        out = AlgElem.unit(self.pres)
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def inverse_mono(self):
        """Inverse of a unit term c*m where all generators in m are invertible."""
        if len(self.terms) != 1:
            raise ArithmeticError("can only invert single-term elements")
        ((m, c),) = self.terms.items()
        word = tuple((i, -e) for i, e in reversed(tuple(enumerate(m))) if e)
        self.pres.check_domain(word)
        return AlgElem(self.pres, self.pres.normalize_word(word, c.invert()))

    # -- structure ---------------------------------------------------------

    def is_zero(self):
        return not self.terms

    def degree(self):
        """Coaction weight if homogeneous, else None."""
        degs = {self.pres.mono_degree(m) for m in self.terms}
        if len(degs) == 1:
            return degs.pop()
        return None if degs else 0

    def counit(self) -> Scalar:
        out = Scalar()
        for m, c in self.terms.items():
            out = out + c * self.pres.counit_of_mono(m)
        return out

    def __eq__(self, other):
        return (
            isinstance(other, AlgElem)
            and self.pres is other.pres
            and self.terms == other.terms
        )

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __repr__(self):
        from .printer import format_alg

        return format_alg(self)


class MonomialWindow:
    """Finite exponent box used to bound every enumeration and solve."""

    def __init__(self, pres: AlgebraPresentation, bound=4, bounds=None, form_caps=None):
        self.pres = pres
        self.bounds = {}
        for i, g in enumerate(pres.generators):
            if bounds and g.name in bounds:
                lo, hi = bounds[g.name]
            elif g.invertible:
                lo, hi = -bound, bound
            else:
                lo, hi = 0, bound
            self.bounds[i] = (lo, hi)
        self.form_caps = dict(form_caps or {})

    def shrink(self, bound):
        bounds = {
            self.pres.generators[i].name: (max(lo, -bound), min(hi, bound))
            for i, (lo, hi) in self.bounds.items()
        }
        return MonomialWindow(self.pres, bounds=bounds, form_caps=self.form_caps)

    def contains(self, mono: Monomial) -> bool:
        return all(lo <= e <= hi for e, (lo, hi) in zip(mono, self.bounds.values()))

    def enumerate(self, degree=None):
        """All normal-form monomials in the box, lexicographic order."""
        ranges = [range(lo, hi + 1) for lo, hi in self.bounds.values()]
        out = []
        stack = [()]
        for r in ranges:
            stack = [pre + (e,) for pre in stack for e in r]
        for vec in stack:
            mono = tuple(vec)
            if any(
                vec[i] > 0 and vec[j] > 0 for (i, j) in self.pres.eliminations
            ):
                continue
            if degree is not None and self.pres.mono_degree(mono) != degree:
                continue
            out.append(mono)
        out.sort()
        return out

    def elements(self, degree=None):
        return [
            AlgElem(self.pres, {m: ONE}) for m in self.enumerate(degree=degree)
        ]
