"""Polynomials over Z2 in free non-commutative graded variables.

A polynomial is a set of words (tuples of generator names); a word is present
iff its coefficient is 1.  Every polynomial belongs to an :class:`Algebra`,
which fixes the generators, their degrees and their order.
"""

from __future__ import annotations

import re
from typing import Callable, Dict, Iterable, Iterator, Mapping, Optional, Sequence, Tuple

Word = Tuple[str, ...]

# plain identifier, optionally followed by copy tags like [-], [+], [0] and hats
NAME_PATTERN = r"[A-Za-z][A-Za-z0-9_'^]*(?:\[(?:[-+]|[0-9]+)\]\^*)*"
_NAME_RE = re.compile(NAME_PATTERN + r"\Z")
_TOKEN_RE = re.compile(r"\s*(?:(" + NAME_PATTERN + r"|[0-9]+)|([+.])|(\S))")


class AlgebraError(ValueError):
    """Base class for malformed algebraic input."""


class DomainMismatchError(AlgebraError):
    """Operands live in different algebras."""


class UnknownGeneratorError(AlgebraError, KeyError):
    def __str__(self):
        return ValueError.__str__(self)


class ParseError(AlgebraError):
    pass


def is_valid_name(name: str) -> bool:
    return bool(_NAME_RE.match(name))


class Algebra:
    """Free unital algebra over Z2 on an ordered list of graded generators.

    List position is the height: later generators are higher.
    """

    __slots__ = ("names", "degrees", "_index", "_hash")

    def __init__(self, generators: Iterable[Tuple[str, int]]):
        names = []
        degrees = {}
        for name, deg in generators:
            if not is_valid_name(name):
                raise AlgebraError(f"invalid generator name {name!r}")
            if name in degrees:
                raise AlgebraError(f"duplicate generator {name!r}")
            names.append(name)
            degrees[name] = int(deg)
        self.names: Tuple[str, ...] = tuple(names)
        self.degrees: Dict[str, int] = degrees
        self._index = {n: i for i, n in enumerate(names)}
        self._hash = hash(tuple((n, degrees[n]) for n in names))

    def __len__(self):
        return len(self.names)

    def __iter__(self):
        return iter(self.names)

    def __contains__(self, name):
        return name in self._index

    def __eq__(self, other):
        if self is other:
            return True
        if not isinstance(other, Algebra):
            return NotImplemented
        return self._hash == other._hash and self.names == other.names and self.degrees == other.degrees

    def __hash__(self):
        return self._hash

    def __repr__(self):
        inner = ", ".join(f"{n}:{self.degrees[n]}" for n in self.names)
        return f"Algebra({inner})"

    def index(self, name: str) -> int:
        try:
            return self._index[name]
        except KeyError:
            raise UnknownGeneratorError(f"unknown generator {name!r}") from None

    def degree(self, name: str) -> int:
        try:
            return self.degrees[name]
        except KeyError:
            raise UnknownGeneratorError(f"unknown generator {name!r}") from None

    def word_degree(self, word: Word) -> int:
        return sum(self.degrees[g] for g in word)

    def sort_key(self, word: Word):
        idx = self._index
        return (self.word_degree(word), len(word), tuple(idx[g] for g in word))

    def zero(self) -> "Poly":
        return Poly(self, ())

    def one(self) -> "Poly":
        return Poly(self, ((),))

    def gen(self, name: str) -> "Poly":
        self.index(name)
        return Poly(self, ((name,),))

    def word(self, word: Sequence[str]) -> "Poly":
        for g in word:
            self.index(g)
        return Poly(self, (tuple(word),))

    def parse(self, text: str) -> "Poly":
        return parse_poly(text, self)

    def union(self, other: "Algebra") -> "Algebra":
        """Generators of self followed by the new generators of other."""
        gens = [(n, self.degrees[n]) for n in self.names]
        for n in other.names:
            if n in self.degrees:
                if self.degrees[n] != other.degrees[n]:
                    raise AlgebraError(f"generator {n!r} has conflicting degrees")
            else:
                gens.append((n, other.degrees[n]))
        return Algebra(gens)


def _toggle(acc: set, word: Word) -> None:
    if word in acc:
        acc.remove(word)
    else:
        acc.add(word)


class Poly:
    """Element of a free algebra over Z2; immutable and hashable."""

    __slots__ = ("alg", "terms")

    def __init__(self, alg: Algebra, terms: Iterable[Word] = ()):
        acc: set = set()
        for w in terms:
            _toggle(acc, tuple(w))
        self.alg = alg
        self.terms = frozenset(acc)

    @classmethod
    def _raw(cls, alg: Algebra, terms: frozenset) -> "Poly":
        p = object.__new__(cls)
        p.alg = alg
        p.terms = terms
        return p

    def _check(self, other: "Poly") -> None:
        if not isinstance(other, Poly):
            raise TypeError(f"expected Poly, got {type(other).__name__}")
        if self.alg != other.alg:
            raise DomainMismatchError("polynomials belong to different algebras")

    def __add__(self, other: "Poly") -> "Poly":
        self._check(other)
        return Poly._raw(self.alg, self.terms ^ other.terms)

    __sub__ = __add__

    def __mul__(self, other: "Poly") -> "Poly":
        self._check(other)
        acc: set = set()
        for u in self.terms:
            for v in other.terms:
                _toggle(acc, u + v)
        return Poly._raw(self.alg, frozenset(acc))

    def __eq__(self, other):
        if not isinstance(other, Poly):
            return NotImplemented
        return self.terms == other.terms and self.alg == other.alg

    def __hash__(self):
        return hash((self.alg, self.terms))

    def __bool__(self):
        return bool(self.terms)

    def __len__(self):
        return len(self.terms)

    def __iter__(self) -> Iterator[Word]:
        return iter(self.sorted_terms())

    def __contains__(self, word):
        return tuple(word) in self.terms

    def sorted_terms(self) -> list:
        return sorted(self.terms, key=self.alg.sort_key)

    def degrees(self) -> set:
        return {self.alg.word_degree(w) for w in self.terms}

    def is_homogeneous(self) -> bool:
        return len(self.degrees()) <= 1

    def degree(self) -> Optional[int]:
        """Common degree of all terms; None for zero; raises if inhomogeneous."""
        degs = self.degrees()
        if not degs:
            return None
        if len(degs) > 1:
            raise AlgebraError(f"polynomial {self} is not homogeneous")
        return degs.pop()

    def generators(self) -> set:
        return {g for w in self.terms for g in w}

    def canonical(self) -> "Poly":
        return Poly(self.alg, self.terms)

    def __str__(self):
        return format_poly(self)

    def __repr__(self):
        return f"Poly({format_poly(self)!r})"


def format_word(word: Word) -> str:
    return ".".join(word) if word else "1"


def format_poly(p: Poly) -> str:
    if not p.terms:
        return "0"
    return " + ".join(format_word(w) for w in p.sorted_terms())


def parse_poly(text: str, alg: Algebra) -> Poly:
    """Parse ``0 | term (+ term)*`` with ``term := 1 | NAME (. NAME)*``."""
    tokens = []
    pos = 0
    text = text.strip()
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            break
        if m.group(3) is not None:
            raise ParseError(f"unexpected character {m.group(3)!r} in {text!r}")
        tokens.append(m.group(1) or m.group(2))
        pos = m.end()
    if not tokens:
        raise ParseError("empty polynomial")
    if tokens == ["0"]:
        return alg.zero()

    words = []
    current: list = []
    expect_factor = True
    for tok in tokens + ["+"]:
        if expect_factor:
            if tok in ("+", "."):
                raise ParseError(f"misplaced {tok!r} in {text!r}")
            current.append(tok)
            expect_factor = False
        elif tok == ".":
            expect_factor = True
        elif tok == "+":
            words.append(current)
            current = []
            expect_factor = True
        else:
            raise ParseError(f"missing operator before {tok!r} in {text!r}")

    out = []
    for factors in words:
        if factors == ["1"]:
            out.append(())
            continue
        if factors == ["0"]:
            raise ParseError(f"0 is only allowed on its own, in {text!r}")
        for f in factors:
            if f[0].isdigit():
                raise ParseError(f"constant {f!r} inside a product in {text!r}")
            if f not in alg:
                raise UnknownGeneratorError(f"unknown generator {f!r} in {text!r}")
        out.append(tuple(factors))
    return Poly(alg, out)


class GenMap:
    """Unital algebra map given by the images of the domain generators."""

    __slots__ = ("domain", "codomain", "images")

    def __init__(self, domain: Algebra, codomain: Algebra, images: Mapping[str, Poly]):
        missing = [g for g in domain.names if g not in images]
        if missing:
            raise UnknownGeneratorError(f"map has no image for {', '.join(missing)}")
        extra = [g for g in images if g not in domain]
        if extra:
            raise UnknownGeneratorError(f"map has images for unknown generators {', '.join(extra)}")
        for g, img in images.items():
            if img.alg != codomain:
                raise DomainMismatchError(f"image of {g!r} is not in the codomain")
        self.domain = domain
        self.codomain = codomain
        self.images: Dict[str, Poly] = {g: images[g] for g in domain.names}

    @classmethod
    def identity(cls, alg: Algebra) -> "GenMap":
        return cls(alg, alg, {g: alg.gen(g) for g in alg.names})

    @classmethod
    def rename(cls, domain: Algebra, codomain: Algebra, names: Mapping[str, str]) -> "GenMap":
        return cls(domain, codomain, {g: codomain.gen(names[g]) for g in domain.names})

    def __getitem__(self, g: str) -> Poly:
        try:
            return self.images[g]
        except KeyError:
            raise UnknownGeneratorError(f"map has no image for {g!r}") from None

    def __call__(self, p: Poly) -> Poly:
        return apply_morphism(self, p)

    def __eq__(self, other):
        if not isinstance(other, GenMap):
            return NotImplemented
        return (self.domain, self.codomain, self.images) == (other.domain, other.codomain, other.images)

    def __repr__(self):
        inner = ", ".join(f"{g} -> {p}" for g, p in self.images.items())
        return f"GenMap({inner})"

    def compose(self, first: "GenMap") -> "GenMap":
        """``self ∘ first``: apply ``first``, then ``self``."""
        if first.codomain != self.domain:
            raise DomainMismatchError("maps are not composable")
        return GenMap(first.domain, self.codomain, {g: self(img) for g, img in first.images.items()})

    def image_word(self, word: Word) -> Poly:
        out = self.codomain.one()
        for g in word:
            out = out * self[g]
        return out


def poly_add(p: Poly, q: Poly) -> Poly:
    return p + q


def poly_mul(p: Poly, q: Poly) -> Poly:
    return p * q


def apply_morphism(f: GenMap, p: Poly) -> Poly:
    """Extend ``f`` to a unital algebra map and evaluate it on ``p``."""
    if p.alg != f.domain:
        raise DomainMismatchError("polynomial is not in the domain of the map")
    images = f.images
    acc: set = set()
    for word in p.terms:
        cur = {()}
        for g in word:
            try:
                img = images[g].terms
            except KeyError:
                raise UnknownGeneratorError(f"map has no image for {g!r}") from None
            nxt: set = set()
            for u in cur:
                for v in img:
                    _toggle(nxt, u + v)
            cur = nxt
            if not cur:
                break
        for w in cur:
            _toggle(acc, w)
    return Poly._raw(f.codomain, frozenset(acc))


def _suffix_images(word: Word, theta: GenMap) -> list:
    """suffix[j] = theta(word[j:]) as a frozenset of words, for 0 <= j <= len(word)."""
    out = [frozenset({()})]
    for g in reversed(word):
        img = theta[g].terms
        acc: set = set()
        for u in img:
            for v in out[-1]:
                _toggle(acc, u + v)
        out.append(frozenset(acc))
    out.reverse()
    return out


def _prefix_words(word: Word, left: Optional[Mapping[str, str]]) -> list:
    if left is None:
        return [word[:j] for j in range(len(word) + 1)]
    renamed = tuple(left[g] for g in word)
    return [renamed[:j] for j in range(len(word) + 1)]


def _check_left(p: Poly, out: Algebra, left: Optional[Mapping[str, str]]) -> None:
    gens = p.generators()
    if left is None:
        bad = [g for g in gens if g not in out]
    else:
        bad = [g for g in gens if g not in left or left[g] not in out]
    if bad:
        raise UnknownGeneratorError(f"no prefix embedding for {', '.join(sorted(bad))}")


def gamma_twisted(
    phi: GenMap,
    hat: Mapping[str, str],
    p: Poly,
    left: Optional[Mapping[str, str]] = None,
) -> Poly:
    """Degree +1 twisted derivation ``Γ(αβ) = Γ(α)φ(β) + αΓ(β)`` with ``Γ(g) = hat[g]``.

    On a word ``g1…gr`` this is ``Σ_j g1…g(j-1) · ĝj · φ(g(j+1)…gr)``.  The
    result lives in ``phi.codomain``; prefix letters are renamed through
    ``left`` (identity when omitted) and must exist there, as must the hats.
    """
    if p.alg != phi.domain:
        raise DomainMismatchError("polynomial is not in the domain of phi")
    out = phi.codomain
    _check_left(p, out, left)
    acc: set = set()
    for word in p.terms:
        if not word:
            continue
        suffixes = _suffix_images(word, phi)
        prefixes = _prefix_words(word, left)
        for j, g in enumerate(word):
            try:
                h = hat[g]
            except KeyError:
                raise UnknownGeneratorError(f"no hat generator for {g!r}") from None
            head = prefixes[j] + (h,)
            for tail in suffixes[j + 1]:
                _toggle(acc, head + tail)
    result = Poly._raw(out, frozenset(acc))
    missing = [h for h in {hat[g] for g in p.generators()} if h not in out]
    if missing:
        raise UnknownGeneratorError(f"hat generators {missing} not in the output algebra")
    return result


class HomotopyEvaluator:
    """A linear map K on words determined by generator values and an extension rule.

    ``rule="psi_left"`` (default): ``K(uv) = K(u)·φ(v) + ψ(u)·K(v)``, so that
    ``K(g1…gr) = Σ_j ψ(g1…g(j-1)) K(gj) φ(g(j+1)…gr)``.
    ``rule="phi_left"``: ``K(uv) = K(u)·ψ(v) + φ(u)·K(v)``.

    Either rule turns the homotopy equation on generators into the homotopy
    equation on all words; only ``psi_left`` makes the cone isomorphism built
    from K a chain map (see :func:`dgacone.cone.homotopy_iso`).
    """

    RULES = ("psi_left", "phi_left")

    def __init__(self, phi: GenMap, psi: GenMap, values: Mapping[str, Poly], rule: str = "psi_left"):
        if rule not in self.RULES:
            raise ValueError(f"unknown extension rule {rule!r}")
        if phi.domain != psi.domain or phi.codomain != psi.codomain:
            raise DomainMismatchError("phi and psi must share domain and codomain")
        self.phi = phi
        self.psi = psi
        self.rule = rule
        self.values = GenMap(phi.domain, phi.codomain, values)
        self._cache: Dict[Word, frozenset] = {}

    @property
    def domain(self) -> Algebra:
        return self.phi.domain

    @property
    def codomain(self) -> Algebra:
        return self.phi.codomain

    def on_word(self, word: Word) -> frozenset:
        cached = self._cache.get(word)
        if cached is not None:
            return cached
        if len(word) == 0:
            res = frozenset()
        elif len(word) == 1:
            res = self.values[word[0]].terms
        else:
            left_map, right_map = (self.psi, self.phi) if self.rule == "psi_left" else (self.phi, self.psi)
            # K(g·rest) = K(g)·R(rest) + L(g)·K(rest)
            g, rest = word[0], word[1:]
            acc: set = set()
            rest_img = right_map.image_word(rest).terms
            for u in self.values[g].terms:
                for v in rest_img:
                    _toggle(acc, u + v)
            k_rest = self.on_word(rest)
            for u in left_map[g].terms:
                for v in k_rest:
                    _toggle(acc, u + v)
            res = frozenset(acc)
        self._cache[word] = res
        return res

    def __call__(self, p: Poly) -> Poly:
        if p.alg != self.domain:
            raise DomainMismatchError("polynomial is not in the domain of K")
        acc: set = set()
        for w in p.terms:
            for t in self.on_word(w):
                _toggle(acc, t)
        return Poly._raw(self.codomain, frozenset(acc))


def gamma_K(
    K: HomotopyEvaluator,
    hat: Mapping[str, str],
    p: Poly,
    left: Optional[Mapping[str, str]] = None,
) -> Poly:
    """``Γ_K(g1…gr) = Σ_{j<r} g1…g(j-1) · ĝj · K(g(j+1)…gr)``; zero on 1 and on single letters."""
    if p.alg != K.domain:
        raise DomainMismatchError("polynomial is not in the domain of K")
    out = K.codomain
    _check_left(p, out, left)
    acc: set = set()
    for word in p.terms:
        if len(word) < 2:
            continue
        prefixes = _prefix_words(word, left)
        for j in range(len(word) - 1):
            try:
                h = hat[word[j]]
            except KeyError:
                raise UnknownGeneratorError(f"no hat generator for {word[j]!r}") from None
            head = prefixes[j] + (h,)
            for tail in K.on_word(word[j + 1:]):
                _toggle(acc, head + tail)
    return Poly._raw(out, frozenset(acc))


def omega_combinator(
    H: Callable[[str], Poly],
    theta: GenMap,
    p: Poly,
    left: Optional[Mapping[str, str]] = None,
) -> Poly:
    """``Ω(g1…gr) = Σ_j g1…g(j-1) · H(gj) · θ(g(j+1)…gr)``, result in ``theta.codomain``."""
    if p.alg != theta.domain:
        raise DomainMismatchError("polynomial is not in the domain of theta")
    out = theta.codomain
    _check_left(p, out, left)
    acc: set = set()
    for word in p.terms:
        if not word:
            continue
        suffixes = _suffix_images(word, theta)
        prefixes = _prefix_words(word, left)
        for j, g in enumerate(word):
            hg = H(g)
            if hg.alg != out:
                raise DomainMismatchError("H(g) is not in the codomain of theta")
            for mid in hg.terms:
                head = prefixes[j] + mid
                for tail in suffixes[j + 1]:
                    _toggle(acc, head + tail)
    return Poly._raw(out, frozenset(acc))
