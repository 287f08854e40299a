"""Free groups, their integral group rings, Fox calculus and abelianization.

Generators are numbered ``1..n``; a letter ``i`` stands for ``x_i`` and
``-i`` for its inverse.  Words are kept freely reduced at all times.
"""

from __future__ import annotations

from typing import Dict, Iterable, List, Sequence, Tuple

from .errors import IndexOutOfRange, ParseError, RankMismatch


class Word:
    """A freely reduced word in signed generator indices."""

    __slots__ = ("letters", "_hash")

    def __init__(self, letters: Iterable[int] = ()):
        out: List[int] = []
        for a in letters:
            if a == 0:
                raise ValueError("letter 0 is not a generator")
            if out and out[-1] == -a:
                out.pop()
            else:
                out.append(a)
        self.letters = tuple(out)
        self._hash = hash(self.letters)

    @classmethod
    def _raw(cls, letters: Tuple[int, ...]) -> "Word":
        # caller guarantees ``letters`` is reduced
        w = cls.__new__(cls)
        w.letters = letters
        w._hash = hash(letters)
        return w

    @classmethod
    def generator(cls, i: int) -> "Word":
        return cls._raw((i,))

    def __mul__(self, other: "Word") -> "Word":
        a, b = self.letters, other.letters
        k = 0
        n = min(len(a), len(b))
        while k < n and a[-1 - k] == -b[k]:
            k += 1
        return Word._raw(a[: len(a) - k] + b[k:])

    def __invert__(self) -> "Word":
        return Word._raw(tuple(-a for a in reversed(self.letters)))

    def __pow__(self, n: int) -> "Word":
        base = self if n >= 0 else ~self
        out = Word()
        for _ in range(abs(n)):
            out = out * base
        return out

    def __len__(self) -> int:
        return len(self.letters)

    def __iter__(self):
        return iter(self.letters)

    def __eq__(self, other) -> bool:
        return isinstance(other, Word) and self.letters == other.letters

    def __hash__(self) -> int:
        return self._hash

    def __lt__(self, other: "Word") -> bool:
        return word_key(self) < word_key(other)

    def __bool__(self) -> bool:
        return bool(self.letters)

    def __repr__(self) -> str:
        return f"Word({list(self.letters)})"

    def __str__(self) -> str:
        return format_word(self)

    def rank(self) -> int:
        return max((abs(a) for a in self.letters), default=0)


IDENTITY = Word()


def word_key(w: Word) -> Tuple[int, Tuple[int, ...]]:
    """Length-then-lexicographic order used for canonical term listings."""
    return (len(w.letters), w.letters)


def word_multiply(u: Word, v: Word) -> Word:
    return u * v


def commutator(a: Word, b: Word) -> Word:
    return a * b * ~a * ~b


def format_word(w: Word) -> str:
    return " ".join(str(a) for a in w.letters)


def parse_word(text: str) -> Word:
    try:
        return Word(int(tok) for tok in text.replace(",", " ").split())
    except ValueError as exc:
        raise ParseError(f"bad word {text!r}: {exc}") from None


# ---------------------------------------------------------------------------
# endomorphisms


class EndoMap:
    """Endomorphism of F_n given by the images of the generators."""

    __slots__ = ("images",)

    def __init__(self, images: Sequence[Word]):
        self.images = tuple(images)

    @classmethod
    def identity(cls, n: int) -> "EndoMap":
        return cls([Word.generator(i) for i in range(1, n + 1)])

    @property
    def rank(self) -> int:
        return len(self.images)

    def __call__(self, w: Word) -> Word:
        return apply_endo(self, w)

    def __eq__(self, other) -> bool:
        return isinstance(other, EndoMap) and self.images == other.images

    def __hash__(self) -> int:
        return hash(self.images)

    def __repr__(self) -> str:
        inner = ", ".join(f"x{i}->{format_word(w) or '1'}" for i, w in enumerate(self.images, 1))
        return f"EndoMap({inner})"

    def is_identity(self) -> bool:
        return all(w.letters == (i,) for i, w in enumerate(self.images, 1))


def apply_endo(phi: EndoMap, w: Word) -> Word:
    out = IDENTITY
    imgs = phi.images
    for a in w.letters:
        if abs(a) > len(imgs):
            raise IndexOutOfRange(f"letter {a} outside rank {len(imgs)}")
        out = out * (imgs[a - 1] if a > 0 else ~imgs[-a - 1])
    return out


def compose_endos(phi: EndoMap, psi: EndoMap) -> EndoMap:
    """Substitute ``phi`` into ``psi``: x_i -> psi(x_i)[x_j := phi(x_j)]."""
    if phi.rank != psi.rank:
        raise RankMismatch(f"ranks {phi.rank} and {psi.rank}")
    return EndoMap([apply_endo(phi, w) for w in psi.images])


# ---------------------------------------------------------------------------
# group ring Z[F_n]


class GroupRingElement:
    """Finite integer combination of reduced words."""

    __slots__ = ("terms",)

    def __init__(self, terms: Dict[Word, int] | None = None):
        self.terms = {w: c for w, c in (terms or {}).items() if c}

    @classmethod
    def from_word(cls, w: Word, coef: int = 1) -> "GroupRingElement":
        return cls({w: coef})

    @classmethod
    def one(cls) -> "GroupRingElement":
        return cls({IDENTITY: 1})

    @classmethod
    def zero(cls) -> "GroupRingElement":
        return cls()

    def __add__(self, other: "GroupRingElement") -> "GroupRingElement":
        out = dict(self.terms)
        for w, c in other.terms.items():
            out[w] = out.get(w, 0) + c
        return GroupRingElement(out)

    def __neg__(self) -> "GroupRingElement":
        return GroupRingElement({w: -c for w, c in self.terms.items()})

    def __sub__(self, other: "GroupRingElement") -> "GroupRingElement":
        return self + (-other)

    def __mul__(self, other) -> "GroupRingElement":
        if isinstance(other, int):
            return GroupRingElement({w: c * other for w, c in self.terms.items()})
        out: Dict[Word, int] = {}
        for u, a in self.terms.items():
            for v, b in other.terms.items():
                w = u * v
                out[w] = out.get(w, 0) + a * b
        return GroupRingElement(out)

    __rmul__ = __mul__

    def __eq__(self, other) -> bool:
        return isinstance(other, GroupRingElement) and self.terms == other.terms

    def __hash__(self) -> int:
        return hash(frozenset(self.terms.items()))

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __repr__(self) -> str:
        return f"GroupRingElement({format_group_ring(self)!r})"

    def augmentation(self) -> int:
        return sum(self.terms.values())

    def substitute(self, phi: EndoMap) -> "GroupRingElement":
        out: Dict[Word, int] = {}
        for w, c in self.terms.items():
            v = apply_endo(phi, w)
            out[v] = out.get(v, 0) + c
        return GroupRingElement(out)


def format_group_ring(x: GroupRingElement) -> str:
    return ";".join(
        f"{c}:{format_word(w)}" for w, c in sorted(x.terms.items(), key=lambda t: word_key(t[0]))
    )


def parse_group_ring(text: str) -> GroupRingElement:
    out: Dict[Word, int] = {}
    text = text.strip()
    if not text:
        return GroupRingElement()
    for chunk in text.split(";"):
        if ":" not in chunk:
            raise ParseError(f"bad group-ring term {chunk!r}")
        coef, word = chunk.split(":", 1)
        try:
            c = int(coef)
        except ValueError:
            raise ParseError(f"bad coefficient {coef!r}") from None
        w = parse_word(word)
        out[w] = out.get(w, 0) + c
    return GroupRingElement(out)


def fox_derivative(w: Word, i: int, rank: int | None = None) -> GroupRingElement:
    """Left Fox derivative d w / d x_i, expanded by the product rule."""
    if i < 1 or (rank is not None and i > rank):
        raise IndexOutOfRange(f"generator index {i}")
    out: Dict[Word, int] = {}
    prefix = IDENTITY
    for a in w.letters:
        if a == i:
            out[prefix] = out.get(prefix, 0) + 1
        prefix_next = prefix * Word._raw((a,))
        if a == -i:
            out[prefix_next] = out.get(prefix_next, 0) - 1
        prefix = prefix_next
    return GroupRingElement(out)


def fox_derivative_ring(x: GroupRingElement, i: int) -> GroupRingElement:
    out = GroupRingElement()
    for w, c in x.terms.items():
        out = out + fox_derivative(w, i) * c
    return out


def fox_jacobian(phi: EndoMap) -> List[List[GroupRingElement]]:
    n = phi.rank
    return [[fox_derivative(img, j, n) for j in range(1, n + 1)] for img in phi.images]


# ---------------------------------------------------------------------------
# abelianization


class LaurentElement:
    """Element of Z[t_1^{+-1}, ..., t_n^{+-1}] keyed by exponent vectors."""

    __slots__ = ("terms", "nvars")

    def __init__(self, nvars: int, terms: Dict[Tuple[int, ...], int] | None = None):
        self.nvars = nvars
        self.terms = {e: c for e, c in (terms or {}).items() if c}

    @classmethod
    def monomial(cls, exps: Sequence[int], coef: int = 1) -> "LaurentElement":
        return cls(len(exps), {tuple(exps): coef})

    @classmethod
    def one(cls, nvars: int) -> "LaurentElement":
        return cls(nvars, {(0,) * nvars: 1})

    @classmethod
    def zero(cls, nvars: int) -> "LaurentElement":
        return cls(nvars)

    def __add__(self, other: "LaurentElement") -> "LaurentElement":
        out = dict(self.terms)
        for e, c in other.terms.items():
            out[e] = out.get(e, 0) + c
        return LaurentElement(self.nvars, out)

    def __neg__(self) -> "LaurentElement":
        return LaurentElement(self.nvars, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other: "LaurentElement") -> "LaurentElement":
        return self + (-other)

    def __mul__(self, other) -> "LaurentElement":
        if isinstance(other, int):
            return LaurentElement(self.nvars, {e: c * other for e, c in self.terms.items()})
        out: Dict[Tuple[int, ...], int] = {}
        for e, a in self.terms.items():
            for f, b in other.terms.items():
                k = tuple(x + y for x, y in zip(e, f))
                out[k] = out.get(k, 0) + a * b
        return LaurentElement(self.nvars, out)

    __rmul__ = __mul__

    def __eq__(self, other) -> bool:
        return isinstance(other, LaurentElement) and self.terms == other.terms

    def __hash__(self) -> int:
        return hash(frozenset(self.terms.items()))

    def __repr__(self) -> str:
        return f"LaurentElement({format_laurent(self)!r})"

    def augmentation(self) -> int:
        return sum(self.terms.values())

    def substitute(self, matrix: Sequence[Sequence[int]]) -> "LaurentElement":
        """Apply t_j -> t^{matrix[j]} (row j = exponent vector of the image of t_j)."""
        out: Dict[Tuple[int, ...], int] = {}
        n = self.nvars
        for e, c in self.terms.items():
            k = [0] * n
            for j, ej in enumerate(e):
                if ej:
                    row = matrix[j]
                    for m in range(n):
                        k[m] += ej * row[m]
            key = tuple(k)
            out[key] = out.get(key, 0) + c
        return LaurentElement(n, out)


def format_laurent(x: LaurentElement) -> str:
    def mono(e):
        parts = []
        for i, k in enumerate(e, 1):
            if k == 1:
                parts.append(f"t{i}")
            elif k:
                parts.append(f"t{i}^{k}")
        return "*".join(parts) or "1"

    def term(e, c):
        m = mono(e)
        if m == "1":
            return str(c)
        return m if c == 1 else f"-{m}" if c == -1 else f"{c}*{m}"

    items = sorted(x.terms.items(), key=lambda t: (sum(map(abs, t[0])), t[0]))
    return " + ".join(term(e, c) for e, c in items) or "0"


def abelianize_word(w: Word, rank: int) -> Tuple[int, ...]:
    v = [0] * rank
    for a in w.letters:
        if abs(a) > rank:
            raise IndexOutOfRange(f"letter {a} outside rank {rank}")
        v[abs(a) - 1] += 1 if a > 0 else -1
    return tuple(v)


def abelianize(x, rank: int):
    """Word -> exponent-sum vector; group-ring element -> Laurent element."""
    if isinstance(x, Word):
        return abelianize_word(x, rank)
    out: Dict[Tuple[int, ...], int] = {}
    for w, c in x.terms.items():
        e = abelianize_word(w, rank)
        out[e] = out.get(e, 0) + c
    return LaurentElement(rank, out)


def abelianization_matrix(phi: EndoMap) -> List[List[int]]:
    """Row i = exponent sums of phi(x_i)."""
    return [list(abelianize_word(w, phi.rank)) for w in phi.images]
