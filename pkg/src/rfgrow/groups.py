"""Normal forms for the shipped infinite solvable groups.

Families and their element encodings (all plain, hashable tuples):

``z:<d>``        free abelian Z^d, a length-d integer tuple.
``heis``         integer Heisenberg group, ``(a, b, c)`` for the unitriangular
                 matrix with entries a (1,2), b (2,3), c (1,3).
``bs:1:<m>``     Baumslag-Solitar BS(1, m), ``(q, s)`` meaning a^q t^s with
                 q in Z[1/m].
``sol:a,b,c,d``  Z^2 semidirect Z via the hyperbolic matrix A, ``(v, s)``.
``ut3lamp:<p>``  U3(Z[1/p]) semidirect <d>, ``(x, y, z, s)`` meaning
                 u(x, y, z) d^s with d acting by (x, y, z) -> (px, py, p^2 z).

Elements of Z[1/m] are stored as ``(numerator, exponent)`` with value
numerator / m**exponent, where exponent > 0 forces m not to divide the
numerator.  Equal values have equal pairs, so element equality is tuple
equality.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Sequence

Element = Any
Syllable = tuple[str, int]
Word = list[Syllable]


class GroupError(ValueError):
    """Bad group spec, element, or word."""


# ---------------------------------------------------------------- Z[1/m]

def madic(value: Fraction | int, m: int) -> tuple[int, int]:
    """Normal form of a rational lying in Z[1/m]."""
    value = Fraction(value)
    num, den = value.numerator, value.denominator
    for e in range(den.bit_length() + 1):
        if m**e % den == 0:
            return _mnorm(num * (m**e // den), e, m)
    raise GroupError(f"{value} is not in Z[1/{m}]")


def _mnorm(num: int, e: int, m: int) -> tuple[int, int]:
    if num == 0:
        return (0, 0)
    while e > 0 and num % m == 0:
        num //= m
        e -= 1
    return (num, e)


def madd(x: tuple[int, int], y: tuple[int, int], m: int) -> tuple[int, int]:
    (n1, e1), (n2, e2) = x, y
    if e1 == e2:
        return _mnorm(n1 + n2, e1, m)
    if e1 < e2:
        return _mnorm(n1 * m ** (e2 - e1) + n2, e2, m)
    return _mnorm(n1 + n2 * m ** (e1 - e2), e1, m)


def mneg(x: tuple[int, int]) -> tuple[int, int]:
    return (-x[0], x[1])


def mscale(x: tuple[int, int], k: int, m: int) -> tuple[int, int]:
    """x * m**k for any integer k."""
    n, e = x
    if n == 0:
        return (0, 0)
    e -= k
    if e < 0:
        return (n * m ** (-e), 0)
    return _mnorm(n, e, m)


def mmul(x: tuple[int, int], y: tuple[int, int], m: int) -> tuple[int, int]:
    return _mnorm(x[0] * y[0], x[1] + y[1], m)


def mint(x: tuple[int, int], k: int, m: int) -> tuple[int, int]:
    """Integer multiple k * x."""
    return _mnorm(x[0] * k, x[1], m)


def mvalue(x: tuple[int, int], m: int) -> Fraction:
    return Fraction(x[0], m ** x[1])


def mmod(x: tuple[int, int], m: int, n: int) -> int:
    """Image of x in Z/n, for gcd(m, n) = 1."""
    num, e = x
    if e == 0:
        return num % n
    return num * pow(pow(m, e, n), -1, n) % n if n > 1 else 0


ZERO = (0, 0)
ONE = (1, 0)


# ---------------------------------------------------------------- words

_TOKEN = re.compile(r"^([A-Za-z_][A-Za-z_0-9]*)(?:\^\(?([+-]?\d+)\)?)?$")


def parse_word(text: str) -> Word:
    """Parse ``"t a t^-1 a^-2"`` into syllables ``[("t", 1), ("a", 1), ...]``.

    Tokens are separated by whitespace, ``*`` or ``.``.  ``1`` and ``e`` alone
    denote the empty word.
    """
    text = text.replace("⁻¹", "^-1").strip()
    if text in ("", "1", "e", "id"):
        return []
    out: Word = []
    for tok in re.split(r"[\s*.]+", text):
        if not tok:
            continue
        mt = _TOKEN.match(tok)
        if not mt:
            raise GroupError(f"cannot parse word token {tok!r}")
        out.append((mt.group(1), int(mt.group(2)) if mt.group(2) else 1))
    return reduce_word(out)


def reduce_word(word: Sequence[Syllable]) -> Word:
    """Merge adjacent syllables on the same generator and drop zero powers."""
    out: Word = []
    for g, k in word:
        if k == 0:
            continue
        if out and out[-1][0] == g:
            k += out[-1][1]
            out.pop()
            if k:
                out.append((g, k))
        else:
            out.append((g, k))
    return out


def invert_word(word: Sequence[Syllable]) -> Word:
    return [(g, -k) for g, k in reversed(word)]


def word_length(word: Sequence[Syllable]) -> int:
    return sum(abs(k) for _, k in word)


def format_word(word: Sequence[Syllable]) -> str:
    if not word:
        return "1"
    return " ".join(g if k == 1 else f"{g}^{k}" for g, k in word)


def letters(word: Sequence[Syllable]) -> list[Syllable]:
    """Expand syllables into single letters (g, +-1)."""
    out = []
    for g, k in word:
        out.extend([(g, 1 if k > 0 else -1)] * abs(k))
    return out


@dataclass(frozen=True)
class Presentation:
    generators: tuple[str, ...]
    relators: tuple[tuple[Syllable, ...], ...]

    def __str__(self) -> str:
        rels = ", ".join(format_word(r) for r in self.relators)
        return f"< {' '.join(self.generators)} | {rels} >"


@dataclass(frozen=True)
class Metadata:
    generators: tuple[str, ...]
    presentation: Presentation | None
    virtually_nilpotent: bool
    distinguished_element: Element
    nilpotent_depth: int
    distortion_class: str  # "linear", "polynomial" or "exponential"


# ---------------------------------------------------------------- families

class GroupSpec:
    """Base class: subclasses implement the normal-form arithmetic.

    ``mul``/``inv`` are the unchecked fast paths used by BFS; the module level
    functions below validate membership first.
    """

    family: str = ""
    generator_names: tuple[str, ...] = ()

    def identity(self) -> Element:
        raise NotImplementedError

    def mul(self, a: Element, b: Element) -> Element:
        raise NotImplementedError

    def inv(self, a: Element) -> Element:
        raise NotImplementedError

    def generator(self, name: str) -> Element:
        raise NotImplementedError

    def is_element(self, a: Element) -> bool:
        raise NotImplementedError

    def presentation(self) -> Presentation | None:
        return None

    def metadata(self) -> Metadata:
        raise NotImplementedError

    def pow(self, a: Element, k: int) -> Element:
        return _square_and_multiply(self, a, k)

    def label(self) -> str:
        raise NotImplementedError

    def generators(self) -> dict[str, Element]:
        return {g: self.generator(g) for g in self.generator_names}

    def symmetric_generators(self) -> list[tuple[str, int, Element]]:
        """(name, +-1, element) for the generators and their inverses."""
        out = []
        for g in self.generator_names:
            x = self.generator(g)
            out.append((g, 1, x))
            out.append((g, -1, self.inv(x)))
        return out

    def __repr__(self) -> str:
        return f"GroupSpec({self.label()!r})"

    def __eq__(self, other: object) -> bool:
        return isinstance(other, GroupSpec) and self.label() == other.label()

    def __hash__(self) -> int:
        return hash(self.label())


def _square_and_multiply(spec: GroupSpec, a: Element, k: int) -> Element:
    if k < 0:
        a, k = spec.inv(a), -k
    result = spec.identity()
    base = a
    while k:
        if k & 1:
            result = spec.mul(result, base)
        k >>= 1
        if k:
            base = spec.mul(base, base)
    return result


@dataclass(eq=False, repr=False)
class FreeAbelian(GroupSpec):
    d: int = 1
    family = "free-abelian"

    def __post_init__(self):
        if self.d < 1:
            raise GroupError("free abelian rank must be >= 1")
        self.generator_names = tuple(f"e{i + 1}" for i in range(self.d))

    def label(self):
        return f"z:{self.d}"

    def identity(self):
        return (0,) * self.d

    def mul(self, a, b):
        return tuple(x + y for x, y in zip(a, b))

    def inv(self, a):
        return tuple(-x for x in a)

    def pow(self, a, k):
        return tuple(k * x for x in a)

    def generator(self, name):
        try:
            i = self.generator_names.index(name)
        except ValueError:
            raise GroupError(f"unknown generator {name!r} for {self.label()}") from None
        return tuple(1 if j == i else 0 for j in range(self.d))

    def is_element(self, a):
        return isinstance(a, tuple) and len(a) == self.d and all(isinstance(x, int) for x in a)

    def presentation(self):
        g = self.generator_names
        rels = tuple(
            ((g[i], 1), (g[j], 1), (g[i], -1), (g[j], -1))
            for i in range(self.d)
            for j in range(i + 1, self.d)
        )
        return Presentation(g, rels)

    def metadata(self):
        return Metadata(self.generator_names, self.presentation(), True,
                        self.generator(self.generator_names[0]), 1, "linear")


@dataclass(eq=False, repr=False)
class Heisenberg(GroupSpec):
    family = "heisenberg"
    generator_names = ("x", "y")

    def label(self):
        return "heis"

    def identity(self):
        return (0, 0, 0)

    def mul(self, a, b):
        return (a[0] + b[0], a[1] + b[1], a[2] + b[2] + a[0] * b[1])

    def inv(self, a):
        return (-a[0], -a[1], -a[2] + a[0] * a[1])

    def pow(self, a, k):
        x, y, z = a
        return (k * x, k * y, k * z + x * y * (k * (k - 1) // 2))

    def generator(self, name):
        if name == "x":
            return (1, 0, 0)
        if name == "y":
            return (0, 1, 0)
        raise GroupError(f"unknown generator {name!r} for heis")

    def is_element(self, a):
        return isinstance(a, tuple) and len(a) == 3 and all(isinstance(x, int) for x in a)

    def presentation(self):
        comm = [("x", 1), ("y", 1), ("x", -1), ("y", -1)]
        rels = tuple(
            tuple(reduce_word([(g, 1)] + comm + [(g, -1)] + invert_word(comm)))
            for g in ("x", "y")
        )
        return Presentation(self.generator_names, rels)

    def metadata(self):
        return Metadata(self.generator_names, self.presentation(), True, (0, 0, 1), 2, "polynomial")


@dataclass(eq=False, repr=False)
class BaumslagSolitar(GroupSpec):
    """BS(1, m) = <a, t | t a t^-1 = a^m>."""

    m: int = 2
    family = "bs"
    generator_names = ("a", "t")

    def __post_init__(self):
        if self.m < 2:
            raise GroupError("bs:1:m needs m >= 2 (m = 1 is virtually nilpotent)")

    def label(self):
        return f"bs:1:{self.m}"

    def identity(self):
        return (ZERO, 0)

    def mul(self, a, b):
        return (madd(a[0], mscale(b[0], a[1], self.m), self.m), a[1] + b[1])

    def inv(self, a):
        return (mneg(mscale(a[0], -a[1], self.m)), -a[1])

    def pow(self, a, k):
        if a[1] == 0:
            return (mint(a[0], k, self.m), 0)
        return _square_and_multiply(self, a, k)

    def generator(self, name):
        if name == "a":
            return (ONE, 0)
        if name == "t":
            return (ZERO, 1)
        raise GroupError(f"unknown generator {name!r} for {self.label()}")

    def is_element(self, a):
        return (isinstance(a, tuple) and len(a) == 2 and isinstance(a[1], int)
                and _is_madic(a[0], self.m))

    def element(self, q: Fraction | int, s: int = 0):
        return (madic(q, self.m), s)

    def presentation(self):
        return Presentation(self.generator_names, ((("t", 1), ("a", 1), ("t", -1), ("a", -self.m)),))

    def metadata(self):
        return Metadata(self.generator_names, self.presentation(), False, (ONE, 0), 1, "exponential")


@dataclass(eq=False, repr=False)
class SolLattice(GroupSpec):
    """Z^2 semidirect Z, the generator t acting by a hyperbolic matrix A."""

    A: tuple[tuple[int, int], tuple[int, int]] = ((2, 1), (1, 1))
    family = "sol"
    generator_names = ("u", "v", "t")
    _powers: dict = field(default_factory=dict, init=False)

    def __post_init__(self):
        (a, b), (c, d) = self.A
        det = a * d - b * c
        if det not in (1, -1):
            raise GroupError("sol matrix must have determinant +-1")
        tr = a + d
        # det 1: |tr| >= 3; det -1: eigenvalues of modulus 1 only when tr = 0
        if (det == 1 and abs(tr) < 3) or (det == -1 and tr == 0):
            raise GroupError("sol matrix must have no eigenvalue of modulus 1")
        self._det = det
        self._inverse = ((d * det, -b * det), (-c * det, a * det))

    def label(self):
        (a, b), (c, d) = self.A
        return f"sol:{a},{b},{c},{d}"

    def matrix_power(self, s: int):
        cached = self._powers.get(s)
        if cached is not None:
            return cached
        base = self.A if s >= 0 else self._inverse
        result = ((1, 0), (0, 1))
        k = abs(s)
        while k:
            if k & 1:
                result = _mat_mul(result, base)
            k >>= 1
            if k:
                base = _mat_mul(base, base)
        if abs(s) <= 256:
            self._powers[s] = result
        return result

    def act(self, s: int, v):
        (a, b), (c, d) = self.matrix_power(s)
        return (a * v[0] + b * v[1], c * v[0] + d * v[1])

    def identity(self):
        return ((0, 0), 0)

    def mul(self, x, y):
        w = self.act(x[1], y[0]) if x[1] else y[0]
        return ((x[0][0] + w[0], x[0][1] + w[1]), x[1] + y[1])

    def inv(self, x):
        w = self.act(-x[1], x[0])
        return ((-w[0], -w[1]), -x[1])

    def pow(self, x, k):
        if x[1] == 0:
            return ((k * x[0][0], k * x[0][1]), 0)
        return _square_and_multiply(self, x, k)

    def generator(self, name):
        if name == "u":
            return ((1, 0), 0)
        if name == "v":
            return ((0, 1), 0)
        if name == "t":
            return ((0, 0), 1)
        raise GroupError(f"unknown generator {name!r} for {self.label()}")

    def is_element(self, x):
        return (isinstance(x, tuple) and len(x) == 2 and isinstance(x[1], int)
                and isinstance(x[0], tuple) and len(x[0]) == 2
                and all(isinstance(c, int) for c in x[0]))

    def presentation(self):
        (a, b), (c, d) = self.A
        rels = (
            (("u", 1), ("v", 1), ("u", -1), ("v", -1)),
            tuple(reduce_word([("t", 1), ("u", 1), ("t", -1), ("v", -c), ("u", -a)])),
            tuple(reduce_word([("t", 1), ("v", 1), ("t", -1), ("v", -d), ("u", -b)])),
        )
        return Presentation(self.generator_names, rels)

    def metadata(self):
        return Metadata(self.generator_names, self.presentation(), False, ((1, 0), 0), 1, "exponential")


def _mat_mul(x, y):
    (a, b), (c, d) = x
    (e, f), (g, h) = y
    return ((a * e + b * g, a * f + b * h), (c * e + d * g, c * f + d * h))


@dataclass(eq=False, repr=False)
class UT3Lamp(GroupSpec):
    """U3(Z[1/p]) semidirect <d>, d u(x, y, z) d^-1 = u(px, py, p^2 z)."""

    p: int = 2
    family = "ut3lamp"
    generator_names = ("x", "y", "z", "d")

    def __post_init__(self):
        if self.p < 2 or any(self.p % q == 0 for q in range(2, int(self.p**0.5) + 1)):
            raise GroupError("ut3lamp needs a prime p")

    def label(self):
        return f"ut3lamp:{self.p}"

    def identity(self):
        return (ZERO, ZERO, ZERO, 0)

    def twist(self, u, s):
        p = self.p
        return (mscale(u[0], s, p), mscale(u[1], s, p), mscale(u[2], 2 * s, p))

    def mul(self, a, b):
        p = self.p
        if a[3]:
            bx, by, bz = self.twist(b, a[3])
        else:
            bx, by, bz = b[0], b[1], b[2]
        z = madd(madd(a[2], bz, p), mmul(a[0], by, p), p)
        return (madd(a[0], bx, p), madd(a[1], by, p), z, a[3] + b[3])

    def inv(self, a):
        p = self.p
        x, y, z = a[0], a[1], a[2]
        # u(x,y,z)^-1 = u(-x, -y, -z + xy)
        ui = (mneg(x), mneg(y), madd(mneg(z), mmul(x, y, p), p))
        w = self.twist(ui, -a[3])
        return (w[0], w[1], w[2], -a[3])

    def pow(self, a, k):
        if a[3] == 0:
            p = self.p
            x, y, z = a[0], a[1], a[2]
            tri = k * (k - 1) // 2
            return (mint(x, k, p), mint(y, k, p), madd(mint(z, k, p), mint(mmul(x, y, p), tri, p), p), 0)
        return _square_and_multiply(self, a, k)

    def generator(self, name):
        if name == "x":
            return (ONE, ZERO, ZERO, 0)
        if name == "y":
            return (ZERO, ONE, ZERO, 0)
        if name == "z":
            return (ZERO, ZERO, ONE, 0)
        if name == "d":
            return (ZERO, ZERO, ZERO, 1)
        raise GroupError(f"unknown generator {name!r} for {self.label()}")

    def is_element(self, a):
        return (isinstance(a, tuple) and len(a) == 4 and isinstance(a[3], int)
                and all(_is_madic(c, self.p) for c in a[:3]))

    def element(self, x=0, y=0, z=0, s=0):
        p = self.p
        return (madic(x, p), madic(y, p), madic(z, p), s)

    def metadata(self):
        return Metadata(self.generator_names, None, False, (ZERO, ZERO, ONE, 0), 2, "exponential")


def _is_madic(x, m):
    return (isinstance(x, tuple) and len(x) == 2 and isinstance(x[0], int)
            and isinstance(x[1], int) and x[1] >= 0
            and (x[1] == 0 or x[0] % m != 0) and (x[0] != 0 or x[1] == 0))


# ---------------------------------------------------------------- spec strings

def parse_spec(text: str) -> GroupSpec:
    """Parse ``z:<d>``, ``heis``, ``bs:1:<m>``, ``sol:a,b,c,d``, ``ut3lamp:<p>``."""
    text = text.strip()
    try:
        if text == "heis":
            return Heisenberg()
        head, _, rest = text.partition(":")
        if head == "z":
            return FreeAbelian(int(rest))
        if head == "bs":
            k, _, m = rest.partition(":")
            if int(k) != 1:
                raise GroupError("only BS(1, m) is shipped")
            return BaumslagSolitar(int(m))
        if head == "sol":
            a, b, c, d = (int(v) for v in rest.split(","))
            return SolLattice(((a, b), (c, d)))
        if head == "ut3lamp":
            return UT3Lamp(int(rest))
    except (ValueError, TypeError) as exc:
        if isinstance(exc, GroupError):
            raise
        raise GroupError(f"bad group spec {text!r}: {exc}") from None
    raise GroupError(f"unknown group spec {text!r}")


# ---------------------------------------------------------------- checked API

def _check(spec: GroupSpec, *elements):
    for a in elements:
        if not spec.is_element(a):
            raise GroupError(f"{a!r} is not an element of {spec.label()}")


def multiply(spec: GroupSpec, a, b):
    _check(spec, a, b)
    return spec.mul(a, b)


def invert(spec: GroupSpec, a):
    _check(spec, a)
    return spec.inv(a)


def power(spec: GroupSpec, a, k: int):
    _check(spec, a)
    return spec.pow(a, k)


def evaluate_word(spec: GroupSpec, word: str | Sequence[Syllable]):
    """Product of the word's syllables, left to right."""
    if isinstance(word, str):
        word = parse_word(word)
    result = spec.identity()
    for g, k in word:
        if g not in spec.generator_names:
            raise GroupError(f"unknown generator {g!r} for {spec.label()}")
        result = spec.mul(result, spec.pow(spec.generator(g), k))
    return result


def metadata(spec: GroupSpec) -> Metadata:
    return spec.metadata()


def format_element(spec: GroupSpec, a) -> str:
    """Human readable coordinates, e.g. ``(-1/2, -1)`` for bs."""
    if isinstance(spec, BaumslagSolitar):
        return f"({mvalue(a[0], spec.m)}, {a[1]})"
    if isinstance(spec, UT3Lamp):
        p = spec.p
        return f"({mvalue(a[0], p)}, {mvalue(a[1], p)}, {mvalue(a[2], p)}, {a[3]})"
    return repr(a)
