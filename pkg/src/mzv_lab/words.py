"""Alphabets, normalized words, and exact-rational linear combinations.

Three working alphabets:

* ``H2``  letters ``x0, x1`` (free),
* ``PY``  letters ``p, y``   (free),
* ``PDY`` letters ``p, d, y`` subject to the rewriting rule ``pd = dp = 1``.

Words are immutable; PDY words are normalized eagerly on construction (the
rewriting system {pd -> 1, dp -> 1} is terminating and locally confluent, so
a single stack pass yields the unique normal form).

Weights: wt(p) = 1, wt(y) = 0 on PY/PDY, and every H2 letter has weight 1.
wt(d) := -1, forced by pd = 1 together with additivity of the grading; no
other choice is consistent.

``Poly`` is the universal carrier of all products and linear maps: a finite
formal sum of words with exact ``Fraction`` coefficients (zero coefficients
are never stored).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterable, Iterator, Mapping, Union

Rational = Union[int, Fraction]


class WordError(ValueError):
    """Base class for word/poly domain errors."""


class InvalidLetterError(WordError):
    pass


class AlphabetMismatchError(WordError):
    pass


class NotInSubalgebraError(WordError):
    pass


class EncodingError(WordError):
    pass


@dataclass(frozen=True)
class Alphabet:
    tag: str
    letters: tuple[str, ...]

    def __repr__(self) -> str:
        return self.tag

    def index(self, letter: str) -> int:
        try:
            return self.letters.index(letter)
        except ValueError:
            raise InvalidLetterError(f"letter {letter!r} not in alphabet {self.tag}") from None


H2 = Alphabet("H2", ("x0", "x1"))
PY = Alphabet("PY", ("p", "y"))
PDY = Alphabet("PDY", ("p", "d", "y"))

ALPHABETS = {"H2": H2, "PY": PY, "PDY": PDY}


def _normalize_pdy(letters: tuple[str, ...]) -> tuple[str, ...]:
    # single stack pass; cancels adjacent pd / dp pairs until none remain
    out: list[str] = []
    for a in letters:
        if out and {out[-1], a} == {"p", "d"}:
            out.pop()
        else:
            out.append(a)
    return tuple(out)


class Word:
    """A normalized word over one of the three alphabets.

    Immutable and hashable; ``w1 * w2`` concatenates (renormalizing on PDY).
    Canonical order for display and JSON is (length, letter indices).
    """

    __slots__ = ("alphabet", "letters", "_hash")

    def __init__(self, alphabet: Alphabet, letters: Iterable[str] = ()):
        letters = tuple(letters)
        for a in letters:
            if a not in alphabet.letters:
                raise InvalidLetterError(f"letter {a!r} not in alphabet {alphabet.tag}")
        if alphabet is PDY:
            letters = _normalize_pdy(letters)
        object.__setattr__(self, "alphabet", alphabet)
        object.__setattr__(self, "letters", letters)
        object.__setattr__(self, "_hash", hash((alphabet.tag, letters)))

    def __setattr__(self, name, value):
        raise AttributeError("Word is immutable")

    def __hash__(self) -> int:
        return self._hash

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, Word)
            and self.alphabet is other.alphabet
            and self.letters == other.letters
        )

    def sort_key(self) -> tuple:
        idx = self.alphabet.index
        return (len(self.letters), tuple(idx(a) for a in self.letters))

    def __lt__(self, other: "Word") -> bool:
        return self.sort_key() < other.sort_key()

    def __le__(self, other: "Word") -> bool:
        return self.sort_key() <= other.sort_key()

    def __len__(self) -> int:
        return len(self.letters)

    def __mul__(self, other: "Word") -> "Word":
        if isinstance(other, Word):
            if other.alphabet is not self.alphabet:
                raise AlphabetMismatchError(f"{self.alphabet} * {other.alphabet}")
            return Word(self.alphabet, self.letters + other.letters)
        return NotImplemented

    def __str__(self) -> str:
        return "".join(self.letters) if self.letters else "1"

    def __repr__(self) -> str:
        return f"Word({self.alphabet.tag}:{self})"

    @property
    def is_unit(self) -> bool:
        return not self.letters

    @property
    def weight(self) -> int:
        if self.alphabet is H2:
            return len(self.letters)
        return self.letters.count("p") - self.letters.count("d")

    @property
    def depth(self) -> int:
        marker = "x1" if self.alphabet is H2 else "y"
        return self.letters.count(marker)

    def grading(self) -> "Grading":
        return Grading(self.weight, self.depth, len(self.letters))


@dataclass(frozen=True)
class Grading:
    weight: int
    depth: int
    length: int

    def __add__(self, other: "Grading") -> "Grading":
        return Grading(
            self.weight + other.weight,
            self.depth + other.depth,
            self.length + other.length,
        )


def normalize(letters: Iterable[str], alphabet: Alphabet) -> Word:
    """Return the normalized word (identity on H2/PY, pd/dp-free form on PDY)."""
    return Word(alphabet, letters)


def grading(word: Word) -> Grading:
    return word.grading()


def unit(alphabet: Alphabet) -> Word:
    return Word(alphabet, ())


class Poly:
    """Finite linear combination of words with exact rational coefficients.

    Never stores a zero coefficient; two Polys are equal iff their term maps
    are equal.  ``p * q`` is the concatenation product, extended bilinearly.
    Scalar multiplication via ``coeff * p``.
    """

    __slots__ = ("alphabet", "terms")

    def __init__(self, alphabet: Alphabet, terms: Mapping[Word, Rational] | None = None):
        clean: dict[Word, Fraction] = {}
        if terms:
            for w, c in terms.items():
                if w.alphabet is not alphabet:
                    raise AlphabetMismatchError(f"term {w!r} not over {alphabet}")
                c = Fraction(c)
                if c:
                    clean[w] = clean.get(w, Fraction(0)) + c
                    if not clean[w]:
                        del clean[w]
        object.__setattr__(self, "alphabet", alphabet)
        object.__setattr__(self, "terms", clean)

    def __setattr__(self, name, value):
        raise AttributeError("Poly is immutable")

    # -- constructors ------------------------------------------------------
    @classmethod
    def zero(cls, alphabet: Alphabet) -> "Poly":
        return cls(alphabet)

    @classmethod
    def unit(cls, alphabet: Alphabet) -> "Poly":
        return cls(alphabet, {Word(alphabet): Fraction(1)})

    @classmethod
    def of(cls, word: Word, coeff: Rational = 1) -> "Poly":
        return cls(word.alphabet, {word: Fraction(coeff)})

    # -- linear structure --------------------------------------------------
    def _check(self, other: "Poly") -> None:
        if self.alphabet is not other.alphabet:
            raise AlphabetMismatchError(f"{self.alphabet} vs {other.alphabet}")

    def __add__(self, other: "Poly") -> "Poly":
        if not isinstance(other, Poly):
            return NotImplemented
        self._check(other)
        terms = dict(self.terms)
        for w, c in other.terms.items():
            terms[w] = terms.get(w, Fraction(0)) + c
        return Poly(self.alphabet, terms)

    def __sub__(self, other: "Poly") -> "Poly":
        return self + (-other)

    def __neg__(self) -> "Poly":
        return Poly(self.alphabet, {w: -c for w, c in self.terms.items()})

    def scale(self, coeff: Rational) -> "Poly":
        coeff = Fraction(coeff)
        if not coeff:
            return Poly(self.alphabet)
        return Poly(self.alphabet, {w: c * coeff for w, c in self.terms.items()})

    def __rmul__(self, coeff):
        if isinstance(coeff, (int, Fraction)):
            return self.scale(coeff)
        return NotImplemented

    def __mul__(self, other):
        # concatenation product, bilinear
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        if isinstance(other, Word):
            other = Poly.of(other)
        if not isinstance(other, Poly):
            return NotImplemented
        self._check(other)
        terms: dict[Word, Fraction] = {}
        for wu, cu in self.terms.items():
            for wv, cv in other.terms.items():
                w = wu * wv
                terms[w] = terms.get(w, Fraction(0)) + cu * cv
        return Poly(self.alphabet, terms)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, Poly)
            and self.alphabet is other.alphabet
            and self.terms == other.terms
        )

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __iter__(self) -> Iterator[tuple[Word, Fraction]]:
        return iter(sorted(self.terms.items(), key=lambda t: t[0].sort_key()))

    def coeff(self, word: Word) -> Fraction:
        return self.terms.get(word, Fraction(0))

    def map_words(self, f: "Callable[[Word], Poly]") -> "Poly":
        """Linear extension of a word-level map (the map fixes the codomain)."""
        acc: Poly | None = None
        for w, c in self.terms.items():
            piece = f(w).scale(c)
            acc = piece if acc is None else acc + piece
        if acc is None:
            return Poly(self.alphabet)
        return acc

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        parts: list[str] = []
        for w, c in self:
            body = str(w)
            if c == 1:
                text = body
            elif c == -1:
                text = f"-{body}"
            else:
                text = f"{c}*{body}"
            parts.append(text)
        out = parts[0]
        for text in parts[1:]:
            out += f" - {text[1:]}" if text.startswith("-") else f" + {text}"
        return out

    def __repr__(self) -> str:
        return f"Poly({self.alphabet.tag}: {self})"


def as_poly(x: Word | Poly) -> Poly:
    return Poly.of(x) if isinstance(x, Word) else x


def linear(f: Callable[[Word], Poly]) -> Callable[[Word | Poly], Poly]:
    """Lift a word-level map to Word | Poly inputs."""

    def lifted(x: Word | Poly) -> Poly:
        return as_poly(x).map_words(f)

    return lifted


# -- subalgebra membership --------------------------------------------------

_SPACES = {
    "H1": (PY, None, "y"),     # empty or ends in y
    "Hm1": (PY, "p", None),    # empty or starts with p
    "H0": (PY, "p", "y"),      # empty, or starts with p and ends in y
    "h1": (H2, None, "x1"),
    "hm1": (H2, "x0", None),
    "h0": (H2, "x0", "x1"),
}


def membership(word: Word, space: str) -> bool:
    """Boundary-letter membership tests for the six distinguished subalgebras."""
    try:
        alphabet, first, last = _SPACES[space]
    except KeyError:
        raise WordError(f"unknown space {space!r}; expected one of {sorted(_SPACES)}") from None
    if word.alphabet is not alphabet:
        raise AlphabetMismatchError(f"{space} is a space of {alphabet} words, got {word.alphabet}")
    if word.is_unit:
        return True
    if first is not None and word.letters[0] != first:
        return False
    if last is not None and word.letters[-1] != last:
        return False
    return True


def poly_membership(poly: Poly, space: str) -> bool:
    return all(membership(w, space) for w in poly.terms)


# -- z-block codecs ----------------------------------------------------------

def z_encode(comp: Iterable[int], alphabet: Alphabet) -> Word:
    """Encode a composition as a word of z-blocks.

    PY:  z_k = p^k y   (k >= 0);   H2:  z_k = x0^(k-1) x1   (k >= 1).
    The empty composition encodes to the unit word.
    """
    comp = tuple(comp)
    letters: list[str] = []
    if alphabet is PY:
        for k in comp:
            if k < 0:
                raise EncodingError(f"PY z-block needs k >= 0, got {k}")
            letters.extend(["p"] * k)
            letters.append("y")
    elif alphabet is H2:
        for k in comp:
            if k < 1:
                raise EncodingError(f"H2 z-block needs k >= 1, got {k}")
            letters.extend(["x0"] * (k - 1))
            letters.append("x1")
    else:
        raise EncodingError(f"no z-block codec on alphabet {alphabet.tag}")
    return Word(alphabet, letters)


def z_decode(word: Word) -> tuple[int, ...]:
    """Inverse of z_encode on H1 (PY) / h1 (H2) words."""
    if word.alphabet is PY:
        terminal, count_letter, offset = "y", "p", 0
    elif word.alphabet is H2:
        terminal, count_letter, offset = "x1", "x0", 1
    else:
        raise NotInSubalgebraError(f"no z-block codec on alphabet {word.alphabet.tag}")
    if word.letters and word.letters[-1] != terminal:
        raise NotInSubalgebraError(f"{word!r} does not end in {terminal}; not z-decodable")
    parts: list[int] = []
    run = 0
    for a in word.letters:
        if a == count_letter:
            run += 1
        else:
            parts.append(run + offset)
            run = 0
    return tuple(parts)


def zw(comp: Iterable[int], alphabet: Alphabet = PY) -> Word:
    """Shorthand used throughout the tests: zw((2,1)) is z_2 z_1."""
    return z_encode(comp, alphabet)


def zp(comp: Iterable[int], alphabet: Alphabet = PY, coeff: Rational = 1) -> Poly:
    return Poly.of(z_encode(comp, alphabet), coeff)


# -- letter-level morphisms --------------------------------------------------

def phi(word: Word) -> Word:
    """Alphabet isomorphism PY -> H2: p -> x0, y -> x1."""
    if word.alphabet is not PY:
        raise AlphabetMismatchError("phi acts on PY words")
    table = {"p": "x0", "y": "x1"}
    return Word(H2, tuple(table[a] for a in word.letters))


def phi_inv(word: Word) -> Word:
    if word.alphabet is not H2:
        raise AlphabetMismatchError("phi_inv acts on H2 words")
    table = {"x0": "p", "x1": "y"}
    return Word(PY, tuple(table[a] for a in word.letters))


_SWAP = {"x0": "x1", "x1": "x0", "p": "y", "y": "p"}


def reverse_swap(word: Word) -> Word:
    """Reverse the word and swap the two weight-bearing letters.

    On x0/x1 this exchanges x0 and x1; on p/y it exchanges p and y.  Either
    way the result is an anti-automorphism involution of the word algebra.
    Undefined on p/d/y words (d has no partner).
    """
    if word.alphabet is PDY:
        raise AlphabetMismatchError("reverse_swap is not defined on p/d/y words")
    return Word(word.alphabet, tuple(_SWAP[a] for a in reversed(word.letters)))


def embed_J(word: Word) -> Word:
    """Injective algebra morphism H2 -> PY on letters: x0 -> p, x1 -> py.

    Maps h1 into H0 and renders the two z-block codecs consistent:
    embed_J(x0^(k-1) x1) = p^k y.
    """
    if word.alphabet is not H2:
        raise AlphabetMismatchError("embed_J acts on H2 words")
    letters: list[str] = []
    for a in word.letters:
        letters.append("p")
        if a == "x1":
            letters.append("y")
    return Word(PY, letters)


def block_map(word: Word) -> Word:
    """Send an H0 word with all z-parts >= 1 to the H2 word of the same parts.

    Classical weight of the output equals PY-weight + depth of the input.
    """
    comp = z_decode(word)
    if word.alphabet is not PY or not membership(word, "H0"):
        raise NotInSubalgebraError(f"block_map needs an H0 word, got {word!r}")
    if any(k < 1 for k in comp):
        raise EncodingError(f"zero z-part in {word!r}; p^0 y blocks have no H2 image")
    return z_encode(comp, H2)


def weight_projection(poly: Poly, w: int) -> Poly:
    """Keep exactly the terms whose word has weight w."""
    return Poly(poly.alphabet, {word: c for word, c in poly.terms.items() if word.weight == w})


# -- enumeration helpers (deterministic: by weight, then canonical order) ----

def iter_words(alphabet: Alphabet, length: int) -> Iterator[Word]:
    """All normalized words of the exact letter length, in canonical order."""
    for letters in itertools.product(alphabet.letters, repeat=length):
        if alphabet is PDY and _normalize_pdy(letters) != letters:
            continue
        yield Word(alphabet, letters)


def iter_zcomps(total: int, depth: int, first_min: int, rest_min: int) -> Iterator[tuple[int, ...]]:
    """Compositions (k1..kn) with sum == total, n == depth, k1 >= first_min,
    kj >= rest_min for j >= 2.  Lexicographic order."""
    if depth == 0:
        if total == 0:
            yield ()
        return

    def rec(remaining: int, slots: int, lo: int) -> Iterator[tuple[int, ...]]:
        if slots == 1:
            if remaining >= lo:
                yield (remaining,)
            return
        for k in range(lo, remaining - rest_min * (slots - 1) + 1):
            for tail in rec(remaining - k, slots - 1, rest_min):
                yield (k,) + tail

    yield from rec(total, depth, first_min)
