"""Problem-file parsing and structured reports.

File grammar (line oriented, ``#`` comments):

    source vars <name>+ divisor <name>*
    target vars <name>+ divisor <name>*
    map <target-var> = <expression>        one per target variable
    point <rational>(,<rational>)*         optional
    filtration <level>: <name>*            optional, nested, 1-based
    targetideal <expression>(,<expression>)*   optional

Expressions use integer literals, declared identifiers, ``+ - * ^`` and
parentheses; ``^`` binds tightest, then ``*``, then ``+``/``-``.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

from .chart import ChartedPair, MorphismOfPairs, RationalPoint
from .classify import DivisorFiltration
from .ideal import IdealPresentation
from .poly import Polynomial


class ProblemSyntaxError(ValueError):
    def __init__(self, message: str, line: int, column: int = 1):
        super().__init__(f"line {line}, column {column}: {message}")
        self.line = line
        self.column = column


# ---------------------------------------------------------------------------
# Expression parser

_TOKEN = re.compile(r"\s*(?:(\d+)|([a-zA-Z][a-zA-Z0-9_]*)|([-+*^()]))")


class _ExprParser:
    def __init__(self, text: str, ambient: tuple[str, ...], line: int):
        self.text = text
        self.ambient = ambient
        self.line = line
        self.tokens: list[tuple[str, str, int]] = []
        pos = 0
        while pos < len(text):
            m = _TOKEN.match(text, pos)
            if not m or m.end() == pos:
                rest = text[pos:].lstrip()
                if not rest:
                    break
                raise ProblemSyntaxError(
                    f"unexpected character {rest[0]!r}", line, pos + 1
                )
            pos = m.end()
            if m.group(1):
                self.tokens.append(("int", m.group(1), m.start(1) + 1))
            elif m.group(2):
                self.tokens.append(("name", m.group(2), m.start(2) + 1))
            else:
                self.tokens.append(("op", m.group(3), m.start(3) + 1))
        self.i = 0

    def peek(self) -> Optional[tuple[str, str, int]]:
        return self.tokens[self.i] if self.i < len(self.tokens) else None

    def next(self) -> tuple[str, str, int]:
        tok = self.peek()
        if tok is None:
            raise ProblemSyntaxError("unexpected end of expression", self.line)
        self.i += 1
        return tok

    def parse(self) -> Polynomial:
        p = self.sum()
        tok = self.peek()
        if tok is not None:
            raise ProblemSyntaxError(f"unexpected token {tok[1]!r}", self.line, tok[2])
        return p

    def sum(self) -> Polynomial:
        tok = self.peek()
        negate = False
        if tok and tok[1] in "+-" and tok[0] == "op":
            self.next()
            negate = tok[1] == "-"
        p = self.product()
        if negate:
            p = -p
        while True:
            tok = self.peek()
            if tok is None or tok[0] != "op" or tok[1] not in "+-":
                return p
            self.next()
            q = self.product()
            p = p + q if tok[1] == "+" else p - q

    def product(self) -> Polynomial:
        p = self.power()
        while True:
            tok = self.peek()
            if tok is None or tok[0] != "op" or tok[1] != "*":
                return p
            self.next()
            p = p * self.power()

    def power(self) -> Polynomial:
        p = self.atom()
        tok = self.peek()
        if tok and tok[0] == "op" and tok[1] == "^":
            self.next()
            etok = self.next()
            if etok[0] != "int":
                raise ProblemSyntaxError("exponent must be an integer", self.line, etok[2])
            return p ** int(etok[1])
        return p

    def atom(self) -> Polynomial:
        tok = self.next()
        if tok[0] == "int":
            return Polynomial.constant(int(tok[1]), self.ambient)
        if tok[0] == "name":
            if tok[1] not in self.ambient:
                raise ProblemSyntaxError(
                    f"undeclared variable {tok[1]!r}", self.line, tok[2]
                )
            return Polynomial.variable(tok[1], self.ambient)
        if tok[1] == "(":
            p = self.sum()
            close = self.next()
            if close[1] != ")":
                raise ProblemSyntaxError("expected ')'", self.line, close[2])
            return p
        raise ProblemSyntaxError(f"unexpected token {tok[1]!r}", self.line, tok[2])


def parse_expression(text: str, ambient: tuple[str, ...], line: int = 1) -> Polynomial:
    return _ExprParser(text, ambient, line).parse()


# ---------------------------------------------------------------------------
# Problem files


@dataclass
class ProblemFile:
    morphism: MorphismOfPairs
    point: Optional[RationalPoint] = None
    filtration: Optional[DivisorFiltration] = None
    target_ideal: Optional[IdealPresentation] = None

    def render(self) -> str:
        src = self.morphism.source
        tgt = self.morphism.target
        lines = [
            "source vars "
            + " ".join(src.variables)
            + (" divisor " + " ".join(src.divisor_vars) if src.divisor_vars else " divisor"),
            "target vars "
            + " ".join(tgt.variables)
            + (" divisor " + " ".join(tgt.divisor_vars) if tgt.divisor_vars else " divisor"),
        ]
        for x in tgt.variables:
            lines.append(f"map {x} = {self.morphism.components[x]}")
        if self.point is not None:
            lines.append("point " + ",".join(str(c) for c in self.point.coordinates))
        if self.filtration is not None:
            for k, level in enumerate(self.filtration.levels, start=1):
                lines.append(f"filtration {k}: " + " ".join(level))
        if self.target_ideal is not None:
            lines.append(
                "targetideal " + ", ".join(str(g) for g in self.target_ideal.generators)
            )
        return "\n".join(lines) + "\n"


def _parse_rational(text: str, line: int) -> Fraction:
    try:
        return Fraction(text.strip())
    except (ValueError, ZeroDivisionError):
        raise ProblemSyntaxError(f"bad rational {text.strip()!r}", line)


def _parse_chart_line(rest: str, line: int) -> ChartedPair:
    if "vars" not in rest.split():
        raise ProblemSyntaxError("expected 'vars'", line)
    words = rest.split()
    if words[0] != "vars":
        raise ProblemSyntaxError("expected 'vars' after the chart keyword", line)
    try:
        div_at = words.index("divisor")
    except ValueError:
        raise ProblemSyntaxError("expected 'divisor'", line)
    names = words[1:div_at]
    divisor = words[div_at + 1 :]
    if not names:
        raise ProblemSyntaxError("chart needs at least one variable", line)
    if len(set(names)) != len(names):
        raise ProblemSyntaxError("duplicate variable declaration", line)
    for d in divisor:
        if d not in names:
            raise ProblemSyntaxError(f"divisor variable {d!r} not declared", line)
    return ChartedPair(tuple(names), tuple(divisor))


def parse_problem(text: str) -> ProblemFile:
    source: Optional[ChartedPair] = None
    target: Optional[ChartedPair] = None
    maps: dict[str, tuple[str, int]] = {}
    point_line: Optional[tuple[str, int]] = None
    filtration_lines: list[tuple[int, str, int]] = []
    target_ideal_line: Optional[tuple[str, int]] = None

    for lineno, raw in enumerate(text.splitlines(), start=1):
        lineup = raw.split("#", 1)[0].strip()
        if not lineup:
            continue
        keyword, _, rest = lineup.partition(" ")
        if keyword == "source":
            if source is not None:
                raise ProblemSyntaxError("duplicate source declaration", lineno)
            source = _parse_chart_line(rest, lineno)
        elif keyword == "target":
            if target is not None:
                raise ProblemSyntaxError("duplicate target declaration", lineno)
            target = _parse_chart_line(rest, lineno)
        elif keyword == "map":
            name, eq, expr = rest.partition("=")
            name = name.strip()
            if not eq:
                raise ProblemSyntaxError("expected '=' in map line", lineno)
            if name in maps:
                raise ProblemSyntaxError(f"duplicate map for {name!r}", lineno)
            maps[name] = (expr.strip(), lineno)
        elif keyword == "point":
            point_line = (rest, lineno)
        elif keyword == "filtration":
            level_txt, colon, names = rest.partition(":")
            if not colon:
                raise ProblemSyntaxError("expected ':' in filtration line", lineno)
            try:
                level = int(level_txt.strip())
            except ValueError:
                raise ProblemSyntaxError("filtration level must be an integer", lineno)
            filtration_lines.append((level, names.strip(), lineno))
        elif keyword == "targetideal":
            target_ideal_line = (rest, lineno)
        else:
            raise ProblemSyntaxError(f"unknown keyword {keyword!r}", lineno)

    if source is None:
        raise ProblemSyntaxError("missing source declaration", 1)
    if target is None:
        raise ProblemSyntaxError("missing target declaration", 1)

    components = {}
    for x in target.variables:
        if x not in maps:
            raise ProblemSyntaxError(f"missing map for target variable {x!r}", 1)
        expr, lineno = maps[x]
        components[x] = parse_expression(expr, source.variables, lineno)
    for name, (_, lineno) in maps.items():
        if name not in target.variables:
            raise ProblemSyntaxError(f"map for undeclared variable {name!r}", lineno)

    morphism = MorphismOfPairs(source, target, components)

    point = None
    if point_line is not None:
        rest, lineno = point_line
        coords = [_parse_rational(c, lineno) for c in rest.split(",")]
        if len(coords) != len(source.variables):
            raise ProblemSyntaxError(
                f"point has {len(coords)} coordinates for {len(source.variables)} variables",
                lineno,
            )
        point = RationalPoint(tuple(coords))

    filtration = None
    if filtration_lines:
        filtration_lines.sort()
        levels = []
        for expected, (level, names, lineno) in enumerate(filtration_lines, start=1):
            if level != expected:
                raise ProblemSyntaxError(
                    f"filtration levels must be 1-based and consecutive", lineno
                )
            vars_ = tuple(names.split())
            for v in vars_:
                if v not in source.divisor_vars:
                    raise ProblemSyntaxError(
                        f"filtration variable {v!r} is not a source divisor variable",
                        lineno,
                    )
            levels.append(vars_)
        filtration = DivisorFiltration(levels)
        filtration.validate(source.divisor_vars)

    target_ideal = None
    if target_ideal_line is not None:
        rest, lineno = target_ideal_line
        gens = [
            parse_expression(part, target.variables, lineno)
            for part in rest.split(",")
            if part.strip()
        ]
        target_ideal = IdealPresentation(gens, target.variables)

    return ProblemFile(morphism, point, filtration, target_ideal)


# ---------------------------------------------------------------------------
# Reports


@dataclass
class Report:
    """Deterministic line-oriented report with a JSON rendering."""

    command: str
    fields: list[tuple[str, object]] = field(default_factory=list)
    ok: bool = True

    def add(self, key: str, value: object):
        self.fields.append((key, value))

    def render_text(self) -> str:
        lines = [f"command: {self.command}"]
        for key, value in self.fields:
            if isinstance(value, (list, tuple)):
                value = ", ".join(str(v) for v in value)
            lines.append(f"{key}: {value}")
        return "\n".join(lines) + "\n"

    def render_json(self) -> str:
        def clean(v):
            if isinstance(v, (list, tuple)):
                return [clean(x) for x in v]
            if isinstance(v, (int, bool, str, float)) or v is None:
                return v
            return str(v)

        payload = {"command": self.command, "ok": self.ok}
        payload.update({k: clean(v) for k, v in self.fields})
        return json.dumps(payload, indent=2, sort_keys=True) + "\n"
