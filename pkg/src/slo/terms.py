"""Signatures, terms, identities, and their textual DSL.

Terms are prefix-notation trees over a signature; any name that is not a
declared operation symbol is read as a variable.  Linearization replaces
repeated variables by fresh per-occurrence names so that the resulting
term is linear and round-trips exactly under the identification map.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Iterator, Mapping, Sequence


class DslError(ValueError):
    """Syntax or semantic error in the term/signature DSL."""

    def __init__(self, message: str, line: int | None = None, column: int | None = None):
        if line is not None:
            message = f"{message} (line {line}, column {column})"
        super().__init__(message)
        self.line = line
        self.column = column


@dataclass(frozen=True)
class Signature:
    """Finitary operation symbols with optional designated symbols."""

    name: str
    ops: tuple[tuple[str, int], ...]
    join_symbol: str | None = None
    zero_symbol: str | None = None
    unit_symbol: str | None = None

    def __post_init__(self):
        seen = set()
        for sym, arity in self.ops:
            if sym in seen:
                raise DslError(f"duplicate operation symbol {sym!r}")
            seen.add(sym)
            if arity < 0:
                raise DslError(f"negative arity for {sym!r}")
        for attr, want in (("join_symbol", 2), ("zero_symbol", 0), ("unit_symbol", 0)):
            sym = getattr(self, attr)
            if sym is None:
                continue
            if sym not in seen:
                raise DslError(f"{attr} {sym!r} is not a declared operation")
            if self.arity(sym) != want:
                raise DslError(f"{attr} {sym!r} must have arity {want}")

    @property
    def symbols(self) -> tuple[str, ...]:
        return tuple(sym for sym, _ in self.ops)

    def arity(self, sym: str) -> int:
        for s, a in self.ops:
            if s == sym:
                return a
        raise KeyError(sym)

    def has(self, sym: str) -> bool:
        return any(s == sym for s, _ in self.ops)

    def omega_ops(self) -> tuple[tuple[str, int], ...]:
        """Operations other than the designated join."""
        return tuple((s, a) for s, a in self.ops if s != self.join_symbol)

    def to_dsl(self) -> str:
        items = []
        for sym, arity in self.ops:
            if sym == self.join_symbol:
                items.append(f"join {sym}")
            elif sym == self.zero_symbol:
                items.append(f"zero {sym}")
            elif sym == self.unit_symbol:
                items.append(f"unit {sym}")
            elif arity == 0:
                items.append(f"const {sym}")
            else:
                items.append(f"op {sym}:{arity}")
        # constructed signatures may carry decorative names; keep the DSL parseable
        safe_name = re.sub(r"[^A-Za-z0-9_@'.]", "_", self.name) or "A"
        return f"signature {safe_name} " + " ".join(items) + " end"


@dataclass(frozen=True)
class Term:
    """A variable leaf or an operation node with exactly arity-many children."""

    head: str
    args: tuple["Term", ...] = ()
    is_var: bool = False

    def __post_init__(self):
        if self.is_var and self.args:
            raise ValueError("variable term cannot have arguments")

    @staticmethod
    def var(name: str) -> "Term":
        return Term(name, (), True)

    @staticmethod
    def app(sym: str, *args: "Term") -> "Term":
        return Term(sym, tuple(args), False)

    def variables(self) -> Iterator[str]:
        """Variable names in left-to-right occurrence order, with repeats."""
        if self.is_var:
            yield self.head
        else:
            for a in self.args:
                yield from a.variables()

    def var_set(self) -> frozenset[str]:
        return frozenset(self.variables())

    def distinct_vars(self) -> tuple[str, ...]:
        """Variable names in first-occurrence order, without repeats."""
        out: list[str] = []
        for v in self.variables():
            if v not in out:
                out.append(v)
        return tuple(out)

    def substitute(self, mapping: Mapping[str, "Term | str"]) -> "Term":
        if self.is_var:
            image = mapping.get(self.head, self)
            if isinstance(image, str):
                return Term.var(image)
            return image
        return Term(self.head, tuple(a.substitute(mapping) for a in self.args), False)

    def __str__(self) -> str:
        if self.is_var or not self.args:
            return self.head
        return f"{self.head}({', '.join(str(a) for a in self.args)})"


@dataclass(frozen=True)
class Identity:
    lhs: Term
    rhs: Term

    def var_set(self) -> frozenset[str]:
        return self.lhs.var_set() | self.rhs.var_set()

    def __str__(self) -> str:
        return f"{self.lhs} = {self.rhs}"


@dataclass(frozen=True)
class Linearization:
    """A linear term plus the variable identification that recovers the original."""

    linear_term: Term
    identification: Mapping[str, str]
    multiplicities: Mapping[str, int]


_TOKEN_RE = re.compile(r"[A-Za-z0-9_@'.]+|[():,=]|\S")


def _tokenize(text: str) -> list[tuple[str, int, int]]:
    tokens = []
    for lineno, line in enumerate(text.splitlines() or [""], start=1):
        line = line.split("#", 1)[0]
        for m in _TOKEN_RE.finditer(line):
            tokens.append((m.group(), lineno, m.start() + 1))
    return tokens


def parse_signature(text: str) -> Signature:
    """Parse the signature DSL; see the grammar in the package README."""
    toks = _tokenize(text)
    pos = 0

    def peek():
        return toks[pos][0] if pos < len(toks) else None

    def take(expected: str | None = None) -> str:
        nonlocal pos
        if pos >= len(toks):
            raise DslError(f"unexpected end of input, expected {expected or 'token'}")
        tok, line, col = toks[pos]
        if expected is not None and tok != expected:
            raise DslError(f"expected {expected!r}, got {tok!r}", line, col)
        pos += 1
        return tok

    take("signature")
    name = take()
    ops: list[tuple[str, int]] = []
    join = zero = unit = None
    while peek() != "end":
        kw = take()
        if kw == "op":
            sym = take()
            take(":")
            arity_tok = take()
            if not arity_tok.isdigit():
                raise DslError(f"arity must be a non-negative integer, got {arity_tok!r}")
            ops.append((sym, int(arity_tok)))
        elif kw == "const":
            ops.append((take(), 0))
        elif kw in ("join", "zero", "unit"):
            # designates a symbol, declaring it on the fly if not yet listed
            sym = take()
            implied_arity = 2 if kw == "join" else 0
            declared = dict(ops).get(sym)
            if declared is None:
                ops.append((sym, implied_arity))
            elif declared != implied_arity:
                raise DslError(
                    f"{kw} symbol {sym!r} must have arity {implied_arity}, "
                    f"declared with {declared}")
            if kw == "join":
                join = sym
            elif kw == "zero":
                zero = sym
            else:
                unit = sym
        else:
            raise DslError(f"unknown signature item {kw!r}")
    take("end")
    if pos != len(toks):
        raise DslError(f"trailing input after 'end': {toks[pos][0]!r}")
    return Signature(name, tuple(ops), join_symbol=join, zero_symbol=zero, unit_symbol=unit)


def parse_term(text: str, sig: Signature) -> Term:
    """Parse a prefix-notation term; arity-checks every operation node."""
    toks = _tokenize(text)
    pos = 0

    def take(expected: str | None = None) -> str:
        nonlocal pos
        if pos >= len(toks):
            raise DslError(f"unexpected end of term, expected {expected or 'token'}")
        tok, line, col = toks[pos]
        if expected is not None and tok != expected:
            raise DslError(f"expected {expected!r}, got {tok!r}", line, col)
        pos += 1
        return tok

    def term() -> Term:
        nonlocal pos
        head = take()
        if head in "():,=":
            raise DslError(f"unexpected token {head!r}")
        if pos < len(toks) and toks[pos][0] == "(":
            take("(")
            args = [term()]
            while pos < len(toks) and toks[pos][0] == ",":
                take(",")
                args.append(term())
            take(")")
            if not sig.has(head):
                raise DslError(f"unknown operation symbol {head!r}")
            if sig.arity(head) != len(args):
                raise DslError(
                    f"{head!r} expects {sig.arity(head)} arguments, got {len(args)}")
            return Term.app(head, *args)
        if sig.has(head):
            if sig.arity(head) != 0:
                raise DslError(f"{head!r} expects {sig.arity(head)} arguments, got 0")
            return Term.app(head)
        return Term.var(head)

    t = term()
    if pos != len(toks):
        raise DslError(f"trailing input after term: {toks[pos][0]!r}")
    return t


def parse_identity(text: str, sig: Signature) -> Identity:
    if text.count("=") != 1:
        raise DslError("identity must contain exactly one '='")
    left, right = text.split("=")
    return Identity(parse_term(left, sig), parse_term(right, sig))


def is_linear(t: Term) -> bool:
    seen: set[str] = set()
    for v in t.variables():
        if v in seen:
            return False
        seen.add(v)
    return True


def is_linear_identity(ident: Identity) -> bool:
    return is_linear(ident.lhs) and is_linear(ident.rhs)


def is_regular(ident: Identity) -> bool:
    return ident.lhs.var_set() == ident.rhs.var_set()


def linearize(t: Term) -> Linearization:
    """Split repeated variables into fresh per-occurrence names.

    Variables occurring once keep their name, so a linear term is returned
    unchanged with the identity identification.  A variable v occurring k >= 2
    times becomes v_1 .. v_k in left-to-right occurrence order (underscores are
    appended if a fresh name would clash with an existing variable).
    """
    occurrences = list(t.variables())
    counts: dict[str, int] = {}
    for v in occurrences:
        counts[v] = counts.get(v, 0) + 1
    taken = set(counts)

    def fresh(base: str, j: int) -> str:
        name = f"{base}_{j}"
        while name in taken:
            name += "_"
        taken.add(name)
        return name

    seen_so_far: dict[str, int] = {}
    identification: dict[str, str] = {}

    def walk(node: Term) -> Term:
        if node.is_var:
            v = node.head
            if counts[v] == 1:
                identification[v] = v
                return node
            seen_so_far[v] = seen_so_far.get(v, 0) + 1
            name = fresh(v, seen_so_far[v])
            identification[name] = v
            return Term.var(name)
        return Term(node.head, tuple(walk(a) for a in node.args), False)

    linear = walk(t)
    return Linearization(linear, identification, counts)


def canonical_identity(ident: Identity) -> Identity:
    """Rename variables to v1, v2, ... by first occurrence (lhs then rhs)."""
    order: list[str] = []
    for v in list(ident.lhs.variables()) + list(ident.rhs.variables()):
        if v not in order:
            order.append(v)
    mapping = {v: f"v{i + 1}" for i, v in enumerate(order)}
    return Identity(ident.lhs.substitute(mapping), ident.rhs.substitute(mapping))


def _partitions(items: Sequence[str]) -> Iterator[list[list[str]]]:
    """All set partitions of items, blocks ordered by least member index."""
    if not items:
        yield []
        return
    first, rest = items[0], items[1:]
    for part in _partitions(rest):
        yield [[first]] + part
        for i in range(len(part)):
            yield part[:i] + [[first] + part[i]] + part[i + 1:]


def identification_images(ids: Sequence[Identity], max_identifications: int = 10000) -> list[Identity]:
    """All identities obtained by merging variable classes of linear identities.

    Results are deduplicated up to canonical variable renaming; collection
    stops once max_identifications identities have been produced.
    """
    out: list[Identity] = []
    seen: set[tuple[str, str]] = set()
    for ident in ids:
        if not is_linear_identity(ident):
            raise ValueError(f"identity is not linear: {ident}")
        variables: list[str] = []
        for v in list(ident.lhs.variables()) + list(ident.rhs.variables()):
            if v not in variables:
                variables.append(v)
        for part in _partitions(variables):
            mapping = {v: block[0] for block in part for v in block}
            merged = canonical_identity(
                Identity(ident.lhs.substitute(mapping), ident.rhs.substitute(mapping)))
            key = (str(merged.lhs), str(merged.rhs))
            if key in seen:
                continue
            seen.add(key)
            out.append(merged)
            if len(out) >= max_identifications:
                return out
    return out
