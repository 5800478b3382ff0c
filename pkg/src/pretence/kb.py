"""Textual knowledge-base and scenario formats: parse, validate, lint, render.

The concrete syntax is parenthesized prefix form. ``;`` starts a comment
that runs to end of line. Symbols match ``[a-z][a-z0-9_-]*`` and variables
``?[a-z][a-z0-9_-]*``.

Grammar::

    kb        := decl*
    decl      := domain | fact | rule | metaphor | conversion
    domain    := "(domain" SYM ")"
    fact      := "(fact" prop CERT ")"
    rule      := "(rule" SYM "domain" SYM "(if" prop+ ")"
                 "(then" ["exists" "(" VAR+ ")"] prop ")" CERT ")"
    metaphor  := "(metaphor" SYM "vehicle" SYM+ "tenor" SYM ")"
    conversion:= "(conversion" SYM "metaphor" SYM prop "<->" prop CERT ")"
    scenario  := "(scenario" SYM item* ")"
    item      := "(space" SYM "metaphor" SYM "parent" SYM ")"
               | "(seed" SYM prop CERT ")"
               | "(query" SYM prop ")"
               | "(expect" SYM prop CERT ")"
    prop      := "(" ["not"] SYM term* ")"     ; "(not (p x))" also accepted
    term      := SYM | VAR | "(" SYM term+ ")"
    CERT      := "certain" | "presumed" | "suggested" | "possible"

Parsing is pure; the resulting KnowledgeBase and Scenario values are
immutable and freely shareable. Declaration order is preserved and drives
deterministic rule application downstream.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Optional, Sequence, Union

from .certainty import CERTAINTY_KEYWORDS, Certainty
from .terms import (
    Atom,
    Compound,
    Proposition,
    Term,
    Var,
    is_ground,
    prop_text,
    rename_apart,
    term_text,
    vars_of,
)

RESERVED_SPACE = "reality"

SYMBOL_RE = re.compile(r"[a-z][a-z0-9_-]*")
VARIABLE_RE = re.compile(r"\?[a-z][a-z0-9_-]*")


# ---------------------------------------------------------------------------
# Diagnostics


@dataclass(frozen=True)
class Diagnostic:
    level: str  # "error" | "warning"
    code: str
    message: str
    file: str = "<input>"
    line: int = 0
    col: int = 0

    def render(self) -> str:
        return f"{self.level.upper()} {self.code} {self.file}:{self.line}:{self.col} {self.message}"

    def __str__(self) -> str:
        return self.render()


def has_errors(diagnostics: Sequence[Diagnostic]) -> bool:
    return any(d.level == "error" for d in diagnostics)


# ---------------------------------------------------------------------------
# Domain model


@dataclass(frozen=True)
class Domain:
    name: str


@dataclass(frozen=True)
class Fact:
    prop: Proposition
    certainty: Certainty


@dataclass(frozen=True)
class Rule:
    """A domain-scoped defeasible implication.

    Antecedents are non-negated; every consequent variable either occurs in
    some antecedent or is declared existential.
    """

    name: str
    domain: str
    antecedents: tuple[Proposition, ...]
    consequent: Proposition
    certainty: Certainty
    existentials: tuple[Var, ...] = ()

    def rename_apart(self, suffix: str) -> "Rule":
        return Rule(
            self.name,
            self.domain,
            tuple(rename_apart(p, suffix) for p in self.antecedents),
            rename_apart(self.consequent, suffix),
            self.certainty,
            tuple(rename_apart(v, suffix) for v in self.existentials),
        )


@dataclass(frozen=True)
class ConversionRule:
    """A bidirectional correspondence between a vehicle-domain pattern and a
    tenor-domain pattern; the only channel between adjacent spaces."""

    name: str
    metaphor: str
    vehicle_pattern: Proposition
    tenor_pattern: Proposition
    certainty: Certainty


@dataclass(frozen=True)
class Metaphor:
    name: str
    vehicle_domains: tuple[str, ...]
    tenor_domain: str
    conversions: tuple[ConversionRule, ...] = ()


@dataclass(frozen=True)
class KnowledgeBase:
    domains: tuple[Domain, ...] = ()
    metaphors: tuple[Metaphor, ...] = ()
    rules: tuple[Rule, ...] = ()
    facts: tuple[Fact, ...] = ()
    # (kind, name) -> (file, line, col); parser bookkeeping, not identity
    positions: dict = field(default_factory=dict, compare=False, repr=False)

    def domain_names(self) -> tuple[str, ...]:
        return tuple(d.name for d in self.domains)

    def metaphor(self, name: str) -> Metaphor:
        for m in self.metaphors:
            if m.name == name:
                return m
        raise KeyError(name)

    @property
    def conversions(self) -> tuple[ConversionRule, ...]:
        out: list[ConversionRule] = []
        for m in self.metaphors:
            out.extend(m.conversions)
        return tuple(out)

    def vehicle_domain_names(self) -> set[str]:
        names: set[str] = set()
        for m in self.metaphors:
            names.update(m.vehicle_domains)
        return names


@dataclass(frozen=True)
class SpaceDecl:
    name: str
    metaphor: str
    parent: str


@dataclass(frozen=True)
class Seed:
    space: str
    prop: Proposition
    certainty: Certainty


@dataclass(frozen=True)
class Query:
    space: str
    pattern: Proposition


@dataclass(frozen=True)
class Expectation:
    space: str
    prop: Proposition
    certainty: Certainty


@dataclass(frozen=True)
class Scenario:
    name: str
    spaces: tuple[SpaceDecl, ...] = ()
    seeds: tuple[Seed, ...] = ()
    queries: tuple[Query, ...] = ()
    expectations: tuple[Expectation, ...] = ()

    def space(self, name: str) -> SpaceDecl:
        for s in self.spaces:
            if s.name == name:
                return s
        raise KeyError(name)

    def depth_of(self, name: str) -> int:
        depth = 0
        while name != RESERVED_SPACE:
            name = self.space(name).parent
            depth += 1
        return depth


# ---------------------------------------------------------------------------
# Lexer


@dataclass(frozen=True)
class Token:
    kind: str  # "(", ")", "sym", "var", "arrow"
    value: str
    line: int
    col: int


class _ParseAbort(Exception):
    """Internal: stop parsing the current form after recording a diagnostic."""


def tokenize(text: str, filename: str) -> tuple[list[Token], list[Diagnostic]]:
    tokens: list[Token] = []
    diagnostics: list[Diagnostic] = []
    line, col = 1, 1
    i, n = 0, len(text)
    while i < n:
        c = text[i]
        if c == "\n":
            line += 1
            col = 1
            i += 1
            continue
        if c in " \t\r":
            i += 1
            col += 1
            continue
        if c == ";":
            while i < n and text[i] != "\n":
                i += 1
            continue
        if c in "()":
            tokens.append(Token(c, c, line, col))
            i += 1
            col += 1
            continue
        if text.startswith("<->", i):
            tokens.append(Token("arrow", "<->", line, col))
            i += 3
            col += 3
            continue
        if c == "?":
            m = VARIABLE_RE.match(text, i)
            if m:
                tokens.append(Token("var", m.group()[1:], line, col))
                col += m.end() - i
                i = m.end()
                continue
            diagnostics.append(
                Diagnostic("error", "E-LEX", "malformed variable", filename, line, col)
            )
            i += 1
            col += 1
            continue
        m = SYMBOL_RE.match(text, i)
        if m:
            tokens.append(Token("sym", m.group(), line, col))
            col += m.end() - i
            i = m.end()
            continue
        diagnostics.append(
            Diagnostic("error", "E-LEX", f"unexpected character {c!r}", filename, line, col)
        )
        i += 1
        col += 1
    return tokens, diagnostics


# ---------------------------------------------------------------------------
# Reader: tokens -> nested forms


@dataclass(frozen=True)
class Form:
    items: tuple[Union[Token, "Form"], ...]
    line: int
    col: int


def read_forms(tokens: list[Token], filename: str) -> tuple[list[Form], list[Diagnostic]]:
    forms: list[Form] = []
    diagnostics: list[Diagnostic] = []
    stack: list[tuple[list, int, int]] = []
    for tok in tokens:
        if tok.kind == "(":
            stack.append(([], tok.line, tok.col))
        elif tok.kind == ")":
            if not stack:
                diagnostics.append(
                    Diagnostic(
                        "error", "E-PAREN", "unbalanced ')'", filename, tok.line, tok.col
                    )
                )
                continue
            items, line, col = stack.pop()
            form = Form(tuple(items), line, col)
            if stack:
                stack[-1][0].append(form)
            else:
                forms.append(form)
        else:
            if not stack:
                diagnostics.append(
                    Diagnostic(
                        "error",
                        "E-PAREN",
                        f"stray token {tok.value!r} outside any form",
                        filename,
                        tok.line,
                        tok.col,
                    )
                )
                continue
            stack[-1][0].append(tok)
    for _, line, col in stack:
        diagnostics.append(
            Diagnostic("error", "E-PAREN", "unclosed '('", filename, line, col)
        )
    return forms, diagnostics


# ---------------------------------------------------------------------------
# Form -> model parsing


class _DeclParser:
    def __init__(self, filename: str):
        self.filename = filename
        self.diagnostics: list[Diagnostic] = []

    def error(self, code: str, message: str, at) -> None:
        line = getattr(at, "line", 0)
        col = getattr(at, "col", 0)
        self.diagnostics.append(
            Diagnostic("error", code, message, self.filename, line, col)
        )

    def fail(self, code: str, message: str, at) -> "_ParseAbort":
        self.error(code, message, at)
        return _ParseAbort()

    def expect_sym(self, item, what: str) -> str:
        if isinstance(item, Token) and item.kind == "sym":
            return item.value
        raise self.fail("E-SHAPE", f"expected {what}", item)

    def expect_keyword(self, item, word: str) -> None:
        if not (isinstance(item, Token) and item.kind == "sym" and item.value == word):
            raise self.fail("E-SHAPE", f"expected keyword {word!r}", item)

    def parse_certainty(self, item) -> Certainty:
        if (
            isinstance(item, Token)
            and item.kind == "sym"
            and item.value in CERTAINTY_KEYWORDS
        ):
            return Certainty.from_keyword(item.value)
        raise self.fail(
            "E-SHAPE",
            "expected a certainty level (certain | presumed | suggested | possible)",
            item,
        )

    def parse_term(self, item) -> Term:
        if isinstance(item, Token):
            if item.kind == "sym":
                return Atom(item.value)
            if item.kind == "var":
                return Var(item.value)
            raise self.fail("E-SHAPE", f"unexpected {item.value!r} in term", item)
        if not item.items:
            raise self.fail("E-SHAPE", "empty compound term", item)
        functor = self.expect_sym(item.items[0], "a functor symbol")
        args = tuple(self.parse_term(a) for a in item.items[1:])
        if not args:
            raise self.fail("E-SHAPE", "compound terms need at least one argument", item)
        return Compound(functor, args)

    def parse_prop(self, form) -> Proposition:
        if not isinstance(form, Form) or not form.items:
            raise self.fail("E-SHAPE", "expected a proposition", form)
        items = form.items
        negated = False
        head = items[0]
        if isinstance(head, Token) and head.kind == "sym" and head.value == "not":
            negated = True
            rest = items[1:]
            if len(rest) == 1 and isinstance(rest[0], Form):
                inner = self.parse_prop(rest[0])
                if inner.negated:
                    raise self.fail("E-SHAPE", "double negation is not representable", form)
                return inner.negate()
            items = rest
            if not items:
                raise self.fail("E-SHAPE", "nothing to negate", form)
            head = items[0]
        predicate = self.expect_sym(head, "a predicate symbol")
        args = tuple(self.parse_term(a) for a in items[1:])
        return Proposition(predicate, args, negated)

    # -- declarations --------------------------------------------------

    def parse_decl(self, form: Form):
        if not form.items or not isinstance(form.items[0], Token):
            raise self.fail("E-KEYWORD", "expected a declaration keyword", form)
        head = form.items[0]
        if head.kind != "sym":
            raise self.fail("E-KEYWORD", "expected a declaration keyword", head)
        if head.value == "domain":
            return self.parse_domain(form)
        if head.value == "fact":
            return self.parse_fact(form)
        if head.value == "rule":
            return self.parse_rule(form)
        if head.value == "metaphor":
            return self.parse_metaphor(form)
        if head.value == "conversion":
            return self.parse_conversion(form)
        raise self.fail(
            "E-KEYWORD", f"unknown declaration keyword {head.value!r}", head
        )

    def parse_domain(self, form: Form) -> Domain:
        if len(form.items) != 2:
            raise self.fail("E-SHAPE", "domain takes exactly one name", form)
        return Domain(self.expect_sym(form.items[1], "a domain name"))

    def parse_fact(self, form: Form) -> Fact:
        if len(form.items) != 3:
            raise self.fail("E-SHAPE", "fact takes a proposition and a certainty", form)
        prop = self.parse_prop(form.items[1])
        cert = self.parse_certainty(form.items[2])
        if not is_ground(prop):
            raise self.fail("E-SHAPE", "facts must be ground", form)
        return Fact(prop, cert)

    def parse_rule(self, form: Form) -> Rule:
        items = form.items
        if len(items) != 7:
            raise self.fail(
                "E-SHAPE",
                "rule takes: name, 'domain', domain name, (if ...), (then ...), certainty",
                form,
            )
        name = self.expect_sym(items[1], "a rule name")
        self.expect_keyword(items[2], "domain")
        domain = self.expect_sym(items[3], "a domain name")
        if_form = items[4]
        if not (
            isinstance(if_form, Form)
            and if_form.items
            and isinstance(if_form.items[0], Token)
            and if_form.items[0].value == "if"
        ):
            raise self.fail("E-SHAPE", "expected (if ...)", if_form)
        antecedents = tuple(self.parse_prop(p) for p in if_form.items[1:])
        if not antecedents:
            raise self.fail("E-SHAPE", "a rule needs at least one antecedent", if_form)
        for a in antecedents:
            if a.negated:
                raise self.fail(
                    "E-NEGATED", "rule antecedents must be non-negated", if_form
                )
        then_form = items[5]
        if not (
            isinstance(then_form, Form)
            and then_form.items
            and isinstance(then_form.items[0], Token)
            and then_form.items[0].value == "then"
        ):
            raise self.fail("E-SHAPE", "expected (then ...)", then_form)
        rest = then_form.items[1:]
        existentials: tuple[Var, ...] = ()
        if (
            rest
            and isinstance(rest[0], Token)
            and rest[0].kind == "sym"
            and rest[0].value == "exists"
        ):
            if len(rest) != 3 or not isinstance(rest[1], Form):
                raise self.fail(
                    "E-SHAPE", "expected (then exists (?v ...) prop)", then_form
                )
            evars = []
            for item in rest[1].items:
                if not (isinstance(item, Token) and item.kind == "var"):
                    raise self.fail(
                        "E-SHAPE", "exists declares variables only", rest[1]
                    )
                evars.append(Var(item.value))
            if not evars:
                raise self.fail("E-SHAPE", "exists needs at least one variable", rest[1])
            existentials = tuple(evars)
            rest = rest[2:]
        if len(rest) != 1:
            raise self.fail("E-SHAPE", "then takes exactly one proposition", then_form)
        consequent = self.parse_prop(rest[0])
        cert = self.parse_certainty(items[6])
        bound = set().union(*(vars_of(a) for a in antecedents))
        loose = vars_of(consequent) - bound - set(existentials)
        if loose:
            names = ", ".join(sorted("?" + v.name for v in loose))
            raise self.fail(
                "E-RULE-VARS",
                f"consequent variables {names} occur in no antecedent and are not existential",
                then_form,
            )
        return Rule(name, domain, antecedents, consequent, cert, existentials)

    def parse_metaphor(self, form: Form) -> Metaphor:
        items = form.items
        if len(items) < 6:
            raise self.fail(
                "E-SHAPE", "metaphor takes: name, 'vehicle', domains..., 'tenor', domain", form
            )
        name = self.expect_sym(items[1], "a metaphor name")
        self.expect_keyword(items[2], "vehicle")
        vehicles: list[str] = []
        i = 3
        while i < len(items) and not (
            isinstance(items[i], Token) and items[i].value == "tenor"
        ):
            vehicles.append(self.expect_sym(items[i], "a vehicle domain name"))
            i += 1
        if not vehicles:
            raise self.fail("E-SHAPE", "metaphor needs at least one vehicle domain", form)
        if i >= len(items) - 1:
            raise self.fail("E-SHAPE", "expected 'tenor' followed by a domain", form)
        self.expect_keyword(items[i], "tenor")
        tenor = self.expect_sym(items[i + 1], "a tenor domain name")
        if i + 2 != len(items):
            raise self.fail("E-SHAPE", "trailing items after tenor domain", form)
        if tenor in vehicles:
            raise self.fail(
                "E-SHAPE", "a metaphor's tenor domain cannot also be a vehicle", form
            )
        return Metaphor(name, tuple(vehicles), tenor)

    def parse_conversion(self, form: Form) -> ConversionRule:
        items = form.items
        if len(items) != 8:
            raise self.fail(
                "E-SHAPE",
                "conversion takes: name, 'metaphor', name, prop, '<->', prop, certainty",
                form,
            )
        name = self.expect_sym(items[1], "a conversion name")
        self.expect_keyword(items[2], "metaphor")
        metaphor = self.expect_sym(items[3], "a metaphor name")
        vehicle = self.parse_prop(items[4])
        if not (isinstance(items[5], Token) and items[5].kind == "arrow"):
            raise self.fail("E-SHAPE", "expected '<->' between the two patterns", items[5])
        tenor = self.parse_prop(items[6])
        cert = self.parse_certainty(items[7])
        if vehicle.negated or tenor.negated:
            raise self.fail("E-NEGATED", "conversion patterns must be non-negated", form)
        if vars_of(vehicle) != vars_of(tenor):
            raise self.fail(
                "E-CONV-VARS",
                "the two patterns of a conversion must use identical variable sets",
                form,
            )
        return ConversionRule(name, metaphor, vehicle, tenor, cert)

    # -- scenario -------------------------------------------------------

    def parse_scenario_form(self, form: Form) -> Scenario:
        items = form.items
        if (
            not items
            or not isinstance(items[0], Token)
            or items[0].value != "scenario"
        ):
            raise self.fail("E-KEYWORD", "expected (scenario ...)", form)
        if len(items) < 2:
            raise self.fail("E-SHAPE", "scenario needs a name", form)
        name = self.expect_sym(items[1], "a scenario name")
        spaces: list[SpaceDecl] = []
        seeds: list[Seed] = []
        queries: list[Query] = []
        expectations: list[Expectation] = []
        for item in items[2:]:
            if not (isinstance(item, Form) and item.items and isinstance(item.items[0], Token)):
                raise self.fail("E-SHAPE", "expected a scenario item", item)
            head = item.items[0].value
            try:
                if head == "space":
                    if len(item.items) != 6:
                        raise self.fail(
                            "E-SHAPE",
                            "space takes: name, 'metaphor', name, 'parent', name",
                            item,
                        )
                    sname = self.expect_sym(item.items[1], "a space name")
                    self.expect_keyword(item.items[2], "metaphor")
                    metaphor = self.expect_sym(item.items[3], "a metaphor name")
                    self.expect_keyword(item.items[4], "parent")
                    parent = self.expect_sym(item.items[5], "a parent space name")
                    spaces.append(SpaceDecl(sname, metaphor, parent))
                elif head == "seed":
                    if len(item.items) != 4:
                        raise self.fail(
                            "E-SHAPE", "seed takes: space, proposition, certainty", item
                        )
                    space = self.expect_sym(item.items[1], "a space name")
                    prop = self.parse_prop(item.items[2])
                    cert = self.parse_certainty(item.items[3])
                    if not is_ground(prop):
                        raise self.fail("E-SHAPE", "seeds must be ground", item)
                    seeds.append(Seed(space, prop, cert))
                elif head == "query":
                    if len(item.items) != 3:
                        raise self.fail("E-SHAPE", "query takes: space, pattern", item)
                    space = self.expect_sym(item.items[1], "a space name")
                    queries.append(Query(space, self.parse_prop(item.items[2])))
                elif head == "expect":
                    if len(item.items) != 4:
                        raise self.fail(
                            "E-SHAPE", "expect takes: space, proposition, certainty", item
                        )
                    space = self.expect_sym(item.items[1], "a space name")
                    prop = self.parse_prop(item.items[2])
                    cert = self.parse_certainty(item.items[3])
                    if not is_ground(prop):
                        raise self.fail("E-SHAPE", "expectations must be ground", item)
                    expectations.append(Expectation(space, prop, cert))
                else:
                    raise self.fail(
                        "E-KEYWORD", f"unknown scenario item {head!r}", item
                    )
            except _ParseAbort:
                continue
        return Scenario(name, tuple(spaces), tuple(seeds), tuple(queries), tuple(expectations))


# ---------------------------------------------------------------------------
# Assembly and cross-reference validation


def assemble_kb(
    decls: Sequence[tuple[object, str, int, int]]
) -> tuple[Optional[KnowledgeBase], list[Diagnostic]]:
    """Build a KnowledgeBase from parsed declarations (decl, file, line, col)."""
    diagnostics: list[Diagnostic] = []
    domains: list[Domain] = []
    metaphors: list[Metaphor] = []
    rules: list[Rule] = []
    conversions: list[ConversionRule] = []
    facts: list[Fact] = []
    seen: dict[tuple[str, str], tuple[str, int, int]] = {}

    def dup(kind: str, name: str, file: str, line: int, col: int) -> bool:
        key = (kind, name)
        if key in seen:
            diagnostics.append(
                Diagnostic(
                    "error",
                    "E-DUP-NAME",
                    f"duplicate {kind} name {name!r}",
                    file,
                    line,
                    col,
                )
            )
            return True
        seen[key] = (file, line, col)
        return False

    for decl, file, line, col in decls:
        if isinstance(decl, Domain):
            if not dup("domain", decl.name, file, line, col):
                domains.append(decl)
        elif isinstance(decl, Metaphor):
            if not dup("metaphor", decl.name, file, line, col):
                metaphors.append(decl)
        elif isinstance(decl, Rule):
            if not dup("rule", decl.name, file, line, col):
                rules.append(decl)
        elif isinstance(decl, ConversionRule):
            if not dup("conversion", decl.name, file, line, col):
                conversions.append(decl)
        elif isinstance(decl, Fact):
            facts.append(decl)

    domain_names = {d.name for d in domains}
    positions = {}
    for decl, file, line, col in decls:
        positions[id(decl)] = (file, line, col)

    def where(decl) -> tuple[str, int, int]:
        return positions.get(id(decl), ("<input>", 0, 0))

    for m in metaphors:
        for d in m.vehicle_domains + (m.tenor_domain,):
            if d not in domain_names:
                f, l, c = where(m)
                diagnostics.append(
                    Diagnostic(
                        "error",
                        "E-UNKNOWN-DOMAIN",
                        f"metaphor {m.name!r} references undeclared domain {d!r}",
                        f,
                        l,
                        c,
                    )
                )
    for r in rules:
        if r.domain not in domain_names:
            f, l, c = where(r)
            diagnostics.append(
                Diagnostic(
                    "error",
                    "E-UNKNOWN-DOMAIN",
                    f"rule {r.name!r} references undeclared domain {r.domain!r}",
                    f,
                    l,
                    c,
                )
            )
    metaphor_names = {m.name for m in metaphors}
    for c_ in conversions:
        if c_.metaphor not in metaphor_names:
            f, l, c = where(c_)
            diagnostics.append(
                Diagnostic(
                    "error",
                    "E-UNKNOWN-METAPHOR",
                    f"conversion {c_.name!r} references undeclared metaphor {c_.metaphor!r}",
                    f,
                    l,
                    c,
                )
            )

    if has_errors(diagnostics):
        return None, diagnostics

    attached = tuple(
        Metaphor(
            m.name,
            m.vehicle_domains,
            m.tenor_domain,
            tuple(c for c in conversions if c.metaphor == m.name),
        )
        for m in metaphors
    )
    located = {}
    for decl, file, line, col in decls:
        kind = {
            Domain: "domain",
            Metaphor: "metaphor",
            Rule: "rule",
            ConversionRule: "conversion",
        }.get(type(decl))
        if kind is not None:
            located[(kind, decl.name)] = (file, line, col)
    kb = KnowledgeBase(tuple(domains), attached, tuple(rules), tuple(facts), located)
    return kb, diagnostics


def read_kb_decls(
    text: str, filename: str = "<kb>"
) -> tuple[list[tuple[object, str, int, int]], list[Diagnostic]]:
    tokens, diagnostics = tokenize(text, filename)
    forms, form_diags = read_forms(tokens, filename)
    diagnostics.extend(form_diags)
    parser = _DeclParser(filename)
    decls: list[tuple[object, str, int, int]] = []
    for form in forms:
        try:
            decl = parser.parse_decl(form)
            decls.append((decl, filename, form.line, form.col))
        except _ParseAbort:
            continue
    diagnostics.extend(parser.diagnostics)
    return decls, diagnostics


def parse_kb(
    text: str, filename: str = "<kb>"
) -> tuple[Optional[KnowledgeBase], list[Diagnostic]]:
    """Parse one KB text. Returns (kb, diagnostics); kb is None on errors."""
    decls, diagnostics = read_kb_decls(text, filename)
    if has_errors(diagnostics):
        return None, diagnostics
    kb, more = assemble_kb(decls)
    diagnostics.extend(more)
    return kb, diagnostics


def parse_kb_texts(
    texts: Sequence[tuple[str, str]]
) -> tuple[Optional[KnowledgeBase], list[Diagnostic]]:
    """Parse several (text, filename) KB sources as one concatenated KB.

    Declaration lists concatenate in argument order, so a shared domain
    file can be layered under scenario-specific rules.
    """
    decls: list[tuple[object, str, int, int]] = []
    diagnostics: list[Diagnostic] = []
    for text, filename in texts:
        d, diags = read_kb_decls(text, filename)
        decls.extend(d)
        diagnostics.extend(diags)
    if has_errors(diagnostics):
        return None, diagnostics
    kb, more = assemble_kb(decls)
    diagnostics.extend(more)
    return kb, diagnostics


def parse_scenario(
    text: str, kb: KnowledgeBase, filename: str = "<scn>"
) -> tuple[Optional[Scenario], list[Diagnostic]]:
    """Parse a scenario against an already-parsed KB.

    Verifies that space declarations form a tree rooted at ``reality`` and
    that every reference resolves.
    """
    tokens, diagnostics = tokenize(text, filename)
    forms, form_diags = read_forms(tokens, filename)
    diagnostics.extend(form_diags)
    if has_errors(diagnostics):
        return None, diagnostics
    parser = _DeclParser(filename)
    scenario: Optional[Scenario] = None
    for form in forms:
        try:
            parsed = parser.parse_scenario_form(form)
        except _ParseAbort:
            continue
        if scenario is None:
            scenario = parsed
        else:
            parser.error("E-SHAPE", "only one scenario per file", form)
    diagnostics.extend(parser.diagnostics)
    if scenario is None and not has_errors(diagnostics):
        diagnostics.append(
            Diagnostic("error", "E-SHAPE", "no scenario declaration found", filename)
        )
    if has_errors(diagnostics) or scenario is None:
        return None, diagnostics

    def err(code: str, message: str) -> None:
        diagnostics.append(Diagnostic("error", code, message, filename))

    metaphor_names = {m.name for m in kb.metaphors}
    space_names: set[str] = set()
    for s in scenario.spaces:
        if s.name == RESERVED_SPACE:
            err("E-SPACE-RESERVED", f"space name {RESERVED_SPACE!r} is reserved for the root")
            continue
        if s.name in space_names:
            err("E-DUP-NAME", f"duplicate space name {s.name!r}")
        space_names.add(s.name)
        if s.metaphor not in metaphor_names:
            err("E-UNKNOWN-METAPHOR", f"space {s.name!r} uses unknown metaphor {s.metaphor!r}")
    for s in scenario.spaces:
        if s.parent != RESERVED_SPACE and s.parent not in space_names:
            err("E-UNKNOWN-SPACE", f"space {s.name!r} has unknown parent {s.parent!r}")
    # Cycle check over the parent graph.
    parent = {s.name: s.parent for s in scenario.spaces}
    for start in parent:
        slow = start
        visited = set()
        while slow in parent:
            if slow in visited:
                err("E-SPACE-CYCLE", f"space parents form a cycle through {start!r}")
                break
            visited.add(slow)
            slow = parent[slow]
    valid_targets = space_names | {RESERVED_SPACE}
    for seed in scenario.seeds:
        if seed.space not in valid_targets:
            err("E-UNKNOWN-SPACE", f"seed targets undeclared space {seed.space!r}")
    for q in scenario.queries:
        if q.space not in valid_targets:
            err("E-UNKNOWN-SPACE", f"query targets undeclared space {q.space!r}")
    for e in scenario.expectations:
        if e.space not in valid_targets:
            err("E-UNKNOWN-SPACE", f"expectation targets undeclared space {e.space!r}")
    if has_errors(diagnostics):
        return None, diagnostics
    return scenario, diagnostics


def parse_prop_text(text: str) -> tuple[Optional[Proposition], list[Diagnostic]]:
    """Parse a single proposition pattern, e.g. a CLI query goal."""
    tokens, diagnostics = tokenize(text, "<goal>")
    forms, form_diags = read_forms(tokens, "<goal>")
    diagnostics.extend(form_diags)
    if has_errors(diagnostics):
        return None, diagnostics
    if len(forms) != 1:
        diagnostics.append(
            Diagnostic("error", "E-SHAPE", "expected exactly one proposition", "<goal>")
        )
        return None, diagnostics
    parser = _DeclParser("<goal>")
    try:
        prop = parser.parse_prop(forms[0])
    except _ParseAbort:
        prop = None
    diagnostics.extend(parser.diagnostics)
    if has_errors(diagnostics):
        return None, diagnostics
    return prop, diagnostics


# ---------------------------------------------------------------------------
# Lint


def lint_kb(kb: KnowledgeBase) -> list[Diagnostic]:
    """Static checks on the conversion-filter discipline.

    Reachability is predicate-level (argument structure is ignored), which
    is conservative: it may under-warn but never flags away a working KB.
    """
    diagnostics: list[Diagnostic] = []

    def at(kind: str, name: str) -> tuple[str, int, int]:
        return kb.positions.get((kind, name), ("<kb>", 0, 0))

    domain_names = {d.name for d in kb.domains}
    for m in kb.metaphors:
        for d in m.vehicle_domains + (m.tenor_domain,):
            if d not in domain_names:
                diagnostics.append(
                    Diagnostic(
                        "error",
                        "E-UNKNOWN-DOMAIN",
                        f"metaphor {m.name!r} references undeclared domain {d!r}",
                        *at("metaphor", m.name),
                    )
                )
    for r in kb.rules:
        if r.domain not in domain_names:
            diagnostics.append(
                Diagnostic(
                    "error",
                    "E-UNKNOWN-DOMAIN",
                    f"rule {r.name!r} references undeclared domain {r.domain!r}",
                    *at("rule", r.name),
                )
            )

    conversions = kb.conversions
    vehicle_preds = {c.vehicle_pattern.predicate for c in conversions}

    # Predicates from which some conversion's vehicle predicate is derivable,
    # closed backwards over rule antecedent -> consequent edges.
    reaches: set[str] = set(vehicle_preds)
    changed = True
    while changed:
        changed = False
        for r in kb.rules:
            if r.consequent.predicate in reaches:
                for a in r.antecedents:
                    if a.predicate not in reaches:
                        reaches.add(a.predicate)
                        changed = True

    vehicle_domains = kb.vehicle_domain_names()
    for r in kb.rules:
        if r.domain in vehicle_domains and r.consequent.predicate not in reaches:
            diagnostics.append(
                Diagnostic(
                    "warning",
                    "W-UNREACHABLE-RULE",
                    f"rule {r.name!r} concludes {r.consequent.predicate!r}, which can never "
                    "reach a conversion rule's vehicle pattern",
                    *at("rule", r.name),
                )
            )

    produced = {r.consequent.predicate for r in kb.rules}
    consumed = {a.predicate for r in kb.rules for a in r.antecedents}
    stated = {f.prop.predicate for f in kb.facts}
    for c in conversions:
        p = c.vehicle_pattern.predicate
        if p not in produced and p not in consumed and p not in stated:
            diagnostics.append(
                Diagnostic(
                    "warning",
                    "W-DEAD-CONVERSION",
                    f"conversion {c.name!r} matches {p!r}, which no rule produces or "
                    "consumes and no fact states; nothing plausibly feeds it",
                    *at("conversion", c.name),
                )
            )
    return diagnostics


# ---------------------------------------------------------------------------
# Rendering (canonical form; parse(render(kb)) is structurally equal to kb)


def render_kb(kb: KnowledgeBase) -> str:
    lines: list[str] = []
    for d in kb.domains:
        lines.append(f"(domain {d.name})")
    for m in kb.metaphors:
        vehicles = " ".join(m.vehicle_domains)
        lines.append(f"(metaphor {m.name} vehicle {vehicles} tenor {m.tenor_domain})")
    for c in kb.conversions:
        lines.append(
            f"(conversion {c.name} metaphor {c.metaphor} "
            f"{prop_text(c.vehicle_pattern)} <-> {prop_text(c.tenor_pattern)} "
            f"{c.certainty.keyword})"
        )
    for r in kb.rules:
        ants = " ".join(prop_text(a) for a in r.antecedents)
        if r.existentials:
            evars = " ".join("?" + v.name for v in r.existentials)
            then = f"(then exists ({evars}) {prop_text(r.consequent)})"
        else:
            then = f"(then {prop_text(r.consequent)})"
        lines.append(
            f"(rule {r.name} domain {r.domain} (if {ants}) {then} {r.certainty.keyword})"
        )
    for f in kb.facts:
        lines.append(f"(fact {prop_text(f.prop)} {f.certainty.keyword})")
    return "\n".join(lines) + ("\n" if lines else "")


def render_scenario(s: Scenario) -> str:
    lines = [f"(scenario {s.name}"]
    for sp in s.spaces:
        lines.append(f"  (space {sp.name} metaphor {sp.metaphor} parent {sp.parent})")
    for seed in s.seeds:
        lines.append(f"  (seed {seed.space} {prop_text(seed.prop)} {seed.certainty.keyword})")
    for q in s.queries:
        lines.append(f"  (query {q.space} {prop_text(q.pattern)})")
    for e in s.expectations:
        lines.append(f"  (expect {e.space} {prop_text(e.prop)} {e.certainty.keyword})")
    return "\n".join(lines) + ")\n"
