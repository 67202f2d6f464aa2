"""Finite presentations, words, and the relator family used to check 2-cells."""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence


class PresentationError(ValueError):
    """Raised for malformed presentation text or words."""


@dataclass(frozen=True, order=True)
class Generator:
    index: int
    name: str


@dataclass(frozen=True, order=True)
class Letter:
    """A generator name with an exponent of +1 or -1."""

    gen: str
    sign: int = 1

    def __post_init__(self) -> None:
        if self.sign not in (1, -1):
            raise PresentationError(f"bad sign {self.sign!r} for letter {self.gen!r}")

    def inverse(self) -> "Letter":
        return Letter(self.gen, -self.sign)

    def __str__(self) -> str:
        return self.gen if self.sign == 1 else f"{self.gen}^-1"

    @classmethod
    def parse(cls, token: str) -> "Letter":
        token = token.strip()
        if token.endswith("^-1"):
            return cls(token[:-3], -1)
        if token.endswith("'"):
            return cls(token[:-1], -1)
        if token.endswith("^1"):
            return cls(token[:-2], 1)
        return cls(token, 1)


@dataclass(frozen=True)
class Word:
    """A word over generators and their inverses. Never reduced implicitly."""

    letters: tuple[Letter, ...] = ()

    def __len__(self) -> int:
        return len(self.letters)

    def __iter__(self) -> Iterator[Letter]:
        return iter(self.letters)

    def __getitem__(self, item):
        if isinstance(item, slice):
            return Word(self.letters[item])
        return self.letters[item]

    def __add__(self, other: "Word") -> "Word":
        return Word(self.letters + other.letters)

    def inverse(self) -> "Word":
        return Word(tuple(x.inverse() for x in reversed(self.letters)))

    def rotations(self) -> list["Word"]:
        n = len(self.letters)
        return [Word(self.letters[i:] + self.letters[:i]) for i in range(max(n, 1))]

    def freely_reduced(self) -> "Word":
        out: list[Letter] = []
        for x in self.letters:
            if out and out[-1] == x.inverse():
                out.pop()
            else:
                out.append(x)
        return Word(tuple(out))

    def __str__(self) -> str:
        return " ".join(str(x) for x in self.letters) if self.letters else "1"

    def compact(self) -> str:
        """Serialization that parse_word reads back (tokens joined by spaces)."""
        return str(self) if self.letters else ""


@dataclass(frozen=True)
class Presentation:
    generators: tuple[Generator, ...]
    relators: tuple[Word, ...]
    allow_free: bool = False

    def __post_init__(self) -> None:
        names = [g.name for g in self.generators]
        if len(set(names)) != len(names):
            raise PresentationError("duplicate generator name")
        for i, g in enumerate(self.generators):
            if g.index != i:
                raise PresentationError("generator indices must follow file order")
        known = set(names)
        for r in self.relators:
            if len(r) == 0:
                raise PresentationError("empty relator")
            for x in r:
                if x.gen not in known:
                    raise PresentationError(f"unknown generator {x.gen!r} in relator")
        if not self.relators and not self.allow_free:
            raise PresentationError("empty relator list (pass allow_free to accept)")

    @property
    def rho(self) -> int:
        return max((len(r) for r in self.relators), default=0)

    @property
    def names(self) -> tuple[str, ...]:
        return tuple(g.name for g in self.generators)

    def letters(self) -> list[Letter]:
        """All letters in a fixed order: a, a^-1, b, b^-1, ..."""
        out = []
        for g in self.generators:
            out.append(Letter(g.name, 1))
            out.append(Letter(g.name, -1))
        return out

    def code(self, x: Letter) -> int:
        """Integer code 2*index (+1 for inverses); inverse codes differ in bit 0."""
        return 2 * self.names.index(x.gen) + (0 if x.sign == 1 else 1)

    def letter(self, code: int) -> Letter:
        return Letter(self.generators[code >> 1].name, -1 if code & 1 else 1)

    def encode(self, w: Word) -> tuple[int, ...]:
        lookup = {g.name: g.index for g in self.generators}
        try:
            return tuple(2 * lookup[x.gen] + (x.sign == -1) for x in w)
        except KeyError as exc:
            raise PresentationError(f"unknown generator {exc.args[0]!r}") from None

    def decode(self, codes: Iterable[int]) -> Word:
        return Word(tuple(self.letter(c) for c in codes))

    def parse_word(self, text: str) -> Word:
        w = parse_word(text, self.names)
        return w

    def fingerprint(self) -> str:
        """Stable text form used for hashing and round-trips."""
        return serialize_presentation(self)


_NAME = r"[A-Za-z_][A-Za-z0-9_]*"
_TOKEN = re.compile(rf"\s*({_NAME})(\^-1|\^1|')?")


def parse_word(text: str, names: Sequence[str] | None = None) -> Word:
    """Parse a concatenation of tokens ``x``, ``x^-1`` or ``x'``.

    When ``names`` is given, tokens are matched greedily against the known
    generator names so that ``aba^-1b^-1`` splits into four letters even
    though the grammar alone would read ``aba`` as one name.
    """
    text = text.strip().replace("\u207b\u00b9", "^-1")
    if text in ("", "1"):
        return Word(())
    if names:
        return _parse_with_names(text, names)
    letters: list[Letter] = []
    pos = 0
    while pos < len(text):
        if text[pos].isspace():
            pos += 1
            continue
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise PresentationError(f"syntax error at position {pos}: {text[pos:pos + 10]!r}")
        name, suffix = m.group(1), m.group(2)
        letters.append(Letter(name, -1 if suffix in ("^-1", "'") else 1))
        pos = m.end()
    return Word(tuple(letters))


def _parse_with_names(text: str, names: Sequence[str]) -> Word:
    ordered = sorted(names, key=len, reverse=True)
    letters: list[Letter] = []
    pos = 0
    while pos < len(text):
        ch = text[pos]
        if ch.isspace() or ch == "*" or ch == ".":
            pos += 1
            continue
        for name in ordered:
            if text.startswith(name, pos):
                pos += len(name)
                sign = 1
                if text.startswith("^-1", pos):
                    sign, pos = -1, pos + 3
                elif text.startswith("^1", pos):
                    pos += 2
                elif text.startswith("'", pos):
                    sign, pos = -1, pos + 1
                letters.append(Letter(name, sign))
                break
        else:
            raise PresentationError(f"syntax error at position {pos}: unknown token {text[pos:pos + 10]!r}")
    return Word(tuple(letters))


def parse_presentation(text: str, allow_free: bool = False) -> Presentation:
    """Read the two-line ``gens:`` / ``rels:`` format.

    >>> p = parse_presentation("gens: a,b\\nrels: a b a^-1 b^-1")
    >>> p.rho
    4
    """
    gens_line = rels_line = None
    # one-line form "gens: a,b; rels: ..."
    text = re.sub(r";\s*(rels\s*:)", r"\n\1", text, flags=re.IGNORECASE)
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, rest = line.partition(":")
        if not sep:
            raise PresentationError(f"syntax error at line {lineno}: expected 'gens:' or 'rels:'")
        key = key.strip().lower()
        if key == "gens":
            if gens_line is not None:
                raise PresentationError(f"duplicate gens line at line {lineno}")
            gens_line = rest
        elif key == "rels":
            if rels_line is not None:
                raise PresentationError(f"duplicate rels line at line {lineno}")
            rels_line = rest
        else:
            raise PresentationError(f"syntax error at line {lineno}: unknown key {key!r}")
    if gens_line is None:
        raise PresentationError("missing gens line")
    names = [n.strip() for n in gens_line.split(",") if n.strip()]
    for n in names:
        if not re.fullmatch(_NAME, n):
            raise PresentationError(f"bad generator name {n!r}")
    if len(set(names)) != len(names):
        raise PresentationError("duplicate generator name")
    gens = tuple(Generator(i, n) for i, n in enumerate(names))
    relators: list[Word] = []
    rels_text = (rels_line or "").strip()
    if rels_text and rels_text.lower() not in ("(none)", "none"):
        for chunk in rels_text.split(";"):
            if not chunk.strip():
                raise PresentationError("empty relator")
            relators.append(parse_word(chunk, names))
    return Presentation(gens, tuple(relators), allow_free=allow_free)


def serialize_presentation(p: Presentation) -> str:
    gens = ",".join(p.names)
    rels = "; ".join(r.compact() for r in p.relators)
    return f"gens: {gens}\nrels: {rels}\n"


def relator_cyclic_family(p: Presentation) -> frozenset[Word]:
    """Closure of the relators under cyclic rotation and formal inversion."""
    family: set[Word] = set()
    for r in p.relators:
        for base in (r, r.inverse()):
            family.update(base.rotations())
    return frozenset(family)


def relator_family_codes(p: Presentation) -> frozenset[tuple[int, ...]]:
    return frozenset(p.encode(w) for w in relator_cyclic_family(p))


@dataclass(frozen=True)
class NontrivialityReport:
    status: str  # "verified" | "refuted" | "inconclusive"
    generator: str | None
    budget: int
    detail: str


def check_generators_nontrivial(p: Presentation, budget: int) -> NontrivialityReport:
    """Bounded search for a van Kampen diagram of a single-letter word.

    A diagram found for ``a`` refutes the hypothesis that ``a`` is nontrivial.
    Exhausting the search space only shows that no diagram with at most
    ``budget`` faces exists, so the best positive answer is ``verified`` at
    that cap (never a proof of nontriviality).
    """
    from .oracle import Oracle, SearchBudget

    if budget < 0:
        raise ValueError("budget must be non-negative")
    oracle = Oracle(p, SearchBudget(max_faces=max(budget, 0)), use_cache=False)
    all_exhaustive = True
    for g in p.generators:
        res = oracle.fillings(Word((Letter(g.name, 1),)))
        if res.diagrams:
            return NontrivialityReport("refuted", g.name, budget, f"diagram with {res.diagrams[0].face_count} faces")
        all_exhaustive = all_exhaustive and res.exhaustive
    if all_exhaustive:
        return NontrivialityReport("verified", None, budget, f"no filling with at most {budget} faces for any generator")
    return NontrivialityReport("inconclusive", None, budget, "search hit its time cap")
