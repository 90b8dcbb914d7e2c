"""Model formula notation: parsing, canonical ASTs, and plain-language readouts.

Supported grammar: `response ~ rhs`, `~ rhs`, or bare `rhs`, where rhs is
`1`, or terms joined with `+`. A term is a name, `a:b` (interaction), or
`a*b` (short for `a + b + a:b`). `0` or `- 1` drops the intercept. Anything
else the notation family offers (nesting, grouping, in-formula functions)
is rejected with an unsupported-operator message.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

from . import families
from .dataset import ColumnType, Dataset
from .errors import ParseError, UnknownVariableError, UnsupportedError


@dataclass(frozen=True)
class Term:
    """One additive term: a single variable or an interaction of several."""

    variables: tuple[str, ...]

    def key(self) -> frozenset:
        return frozenset(self.variables)

    @property
    def order(self) -> int:
        return len(self.variables)

    @property
    def label(self) -> str:
        return ":".join(self.variables)


@dataclass(frozen=True)
class FormulaAST:
    response: str | None
    intercept: bool
    terms: tuple[Term, ...]

    def variables(self) -> tuple[str, ...]:
        seen: dict[str, None] = {}
        for t in self.terms:
            for v in t.variables:
                seen.setdefault(v)
        return tuple(seen)


@dataclass(frozen=True)
class ModelSpec:
    """A provisional model: family plus location and optional scale formulas."""

    family: str
    location: FormulaAST
    scale: FormulaAST | None
    label: str


# --- tokenizer ---------------------------------------------------------------

_UNSUPPORTED_CHARS = set("()/|^&%<>=,[]{}")


def _tokenize(text: str) -> list[tuple[str, str, int]]:
    tokens = []
    i, n = 0, len(text)
    while i < n:
        ch = text[i]
        if ch.isspace():
            i += 1
            continue
        if ch in _UNSUPPORTED_CHARS:
            raise UnsupportedError(f"unsupported operator '{ch}' at position {i}",
                                   {"position": i})
        if ch == "~":
            tokens.append(("TILDE", ch, i))
            i += 1
        elif ch == "+":
            tokens.append(("PLUS", ch, i))
            i += 1
        elif ch == "-":
            tokens.append(("MINUS", ch, i))
            i += 1
        elif ch == ":":
            tokens.append(("COLON", ch, i))
            i += 1
        elif ch == "*":
            tokens.append(("STAR", ch, i))
            i += 1
        elif ch.isdigit():
            j = i
            while j < n and (text[j].isdigit() or text[j] == "."):
                j += 1
            tokens.append(("NUM", text[i:j], i))
            i = j
        elif ch.isalpha() or ch == "_":
            j = i
            while j < n and (text[j].isalnum() or text[j] in "._"):
                j += 1
            tokens.append(("NAME", text[i:j], i))
            i = j
        else:
            raise ParseError(f"syntax error at position {i}: unexpected '{ch}'",
                             position=i)
    tokens.append(("END", "", n))
    return tokens


class _Parser:
    def __init__(self, tokens: list[tuple[str, str, int]]):
        self.tokens = tokens
        self.pos = 0

    def peek(self) -> tuple[str, str, int]:
        return self.tokens[self.pos]

    def next(self) -> tuple[str, str, int]:
        tok = self.tokens[self.pos]
        self.pos += 1
        return tok

    def expect(self, kind: str) -> tuple[str, str, int]:
        tok = self.next()
        if tok[0] != kind:
            raise ParseError(
                f"syntax error at position {tok[2]}: expected {kind.lower()}, "
                f"got '{tok[1] or 'end of input'}'", position=tok[2])
        return tok

    # term_expr := colon_expr ("*" colon_expr)*
    def term_expr(self) -> list[Term]:
        acc = [self.colon_expr()]
        while self.peek()[0] == "STAR":
            self.next()
            rhs = self.colon_expr()
            crossed = [_merge_terms(u, rhs) for u in acc]
            acc = acc + [rhs] + crossed
        return acc

    # colon_expr := NAME (":" NAME)*
    def colon_expr(self) -> Term:
        tok = self.expect("NAME")
        names = [tok[1]]
        while self.peek()[0] == "COLON":
            self.next()
            names.append(self.expect("NAME")[1])
        deduped: dict[str, None] = {}
        for nm in names:
            deduped.setdefault(nm)
        return Term(tuple(deduped))


def _merge_terms(a: Term, b: Term) -> Term:
    extra = tuple(v for v in b.variables if v not in a.variables)
    return Term(a.variables + extra)


def parse_formula(text: str, expects_response: bool) -> FormulaAST:
    """Parse formula text into an AST with canonical term order.

    Location formulas must name a response (`y ~ ...`); scale formulas must
    not, and empty scale text means intercept-only. Duplicate terms are
    dropped with a warning. Terms are ordered by interaction order, then by
    first appearance in the source text.
    """
    if not text or not text.strip():
        if expects_response:
            raise ParseError("empty formula: expected 'response ~ terms'",
                             position=0)
        return FormulaAST(response=None, intercept=True, terms=())

    tokens = _tokenize(text)
    p = _Parser(tokens)

    response: str | None = None
    if p.peek()[0] == "NAME" and p.tokens[p.pos + 1][0] == "TILDE":
        response = p.next()[1]
        p.next()  # tilde
    elif p.peek()[0] == "TILDE":
        p.next()

    if expects_response and response is None:
        tok = p.peek()
        raise ParseError("location formula requires a response "
                         "('response ~ terms')", position=tok[2])
    if not expects_response and response is not None:
        raise ParseError("scale formula cannot name a response", position=0)

    intercept = True
    collected: list[Term] = []

    def drop_intercept_after_minus(minus_pos: int) -> None:
        nonlocal intercept
        kind, val, _pos = p.next()
        if kind == "NUM" and val == "1":
            intercept = False
            return
        raise UnsupportedError(
            f"only '- 1' is supported after '-' (position {minus_pos})",
            {"position": minus_pos})

    def add_item() -> None:
        nonlocal intercept
        kind, val, pos = p.peek()
        if kind == "MINUS":
            p.next()
            drop_intercept_after_minus(pos)
            return
        if kind == "NUM":
            p.next()
            if val == "1":
                return
            if val == "0":
                intercept = False
                return
            raise ParseError(f"syntax error at position {pos}: unexpected "
                             f"number '{val}'", position=pos)
        if kind == "NAME":
            collected.extend(p.term_expr())
            return
        raise ParseError(f"syntax error at position {pos}: expected a term, "
                         f"got '{val or 'end of input'}'", position=pos)

    add_item()
    while p.peek()[0] in ("PLUS", "MINUS"):
        op = p.next()
        if op[0] == "MINUS":
            drop_intercept_after_minus(op[2])
            continue
        add_item()
    p.expect("END")

    unique: list[Term] = []
    seen: set[frozenset] = set()
    for t in collected:
        if t.key() in seen:
            warnings.warn(f"duplicate term '{t.label}' ignored", UserWarning,
                          stacklevel=2)
            continue
        seen.add(t.key())
        unique.append(t)
    ordered = tuple(sorted(unique, key=lambda t: t.order))
    return FormulaAST(response=response, intercept=intercept, terms=ordered)


def unparse(ast: FormulaAST) -> str:
    """Canonical text for an AST; parse(unparse(ast)) == ast."""
    parts: list[str] = []
    if not ast.intercept:
        parts.append("0")
    parts.extend(t.label for t in ast.terms)
    if not parts:
        parts = ["1"]
    rhs = " + ".join(parts)
    return f"{ast.response} ~ {rhs}" if ast.response else f"~ {rhs}"


def model_spec(family: str, location: str, scale: str | None = None,
               label: str | None = None) -> ModelSpec:
    """Build a ModelSpec from formula text, enforcing the family's shape."""
    families.get_family(family)  # validates the name
    loc_ast = parse_formula(location, expects_response=True)
    if families.has_scale(family):
        scale_ast: FormulaAST | None = parse_formula(scale or "",
                                                     expects_response=False)
    else:
        if scale and scale.strip():
            raise UnsupportedError(
                f"family '{family}' has no scale parameter", {"family": family})
        scale_ast = None
    if label is None:
        label = f"{family}: {unparse(loc_ast)}"
        if scale_ast is not None and scale_ast.terms:
            label += f", scale {unparse(scale_ast)}"
    return ModelSpec(family=family, location=loc_ast, scale=scale_ast,
                     label=label)


def validate_spec(spec: ModelSpec, d: Dataset) -> list[tuple[str, ColumnType]]:
    """Resolve every referenced variable against a dataset.

    Returns the (variable, column type) bindings design-matrix construction
    uses, predictors only, in canonical order (location first, then scale).
    """
    families.get_family(spec.family)
    if spec.scale is not None and not families.has_scale(spec.family):
        raise UnsupportedError(f"family '{spec.family}' has no scale parameter",
                               {"family": spec.family})
    if spec.scale is None and families.has_scale(spec.family):
        raise UnsupportedError(
            f"family '{spec.family}' requires a scale sub-model",
            {"family": spec.family})
    if spec.location.response is None:
        raise ParseError("location formula requires a response")
    if not d.has_column(spec.location.response):
        raise UnknownVariableError(
            f"unknown variable '{spec.location.response}'",
            {"variable": spec.location.response})

    bindings: list[tuple[str, ColumnType]] = []
    seen: set[str] = set()
    asts = [spec.location] + ([spec.scale] if spec.scale is not None else [])
    for ast in asts:
        for var in ast.variables():
            if var in seen:
                continue
            seen.add(var)
            if not d.has_column(var):
                raise UnknownVariableError(f"unknown variable '{var}'",
                                           {"variable": var})
            bindings.append((var, d.column(var).ctype))
    return bindings


_FAMILY_SENTENCES = {
    "normal": "{y} is normally distributed",
    "log_normal": "{y} is log-normally distributed",
    "logit_normal": "{y} is logit-normally distributed",
    "logistic": "{y} is a binary outcome",
    "poisson": "{y} is a Poisson-distributed count",
    "negative_binomial": "{y} is an overdispersed count (negative binomial)",
}


def _sub_model_sentences(ast: FormulaAST, param: str) -> list[str]:
    if not ast.terms:
        return [f"its {param} is constant"]
    out = []
    for t in ast.terms:
        if t.order == 1:
            out.append(f"its {param} depends on {t.variables[0]}")
        else:
            rest = " and ".join(t.variables[1:])
            out.append(f"the effect of {t.variables[0]} on the {param} "
                       f"depends on {rest}")
    return out


def describe_model(spec: ModelSpec) -> list[str]:
    """Natural-language sentences stating what the model asserts."""
    y = spec.location.response or "the outcome"
    sentences = [_FAMILY_SENTENCES[spec.family].format(y=y)]
    loc_param = "probability" if spec.family == "logistic" else "mean"
    sentences.extend(_sub_model_sentences(spec.location, loc_param))
    if spec.scale is not None:
        scale_param = ("dispersion" if spec.family == "negative_binomial"
                       else "variance")
        sentences.extend(_sub_model_sentences(spec.scale, scale_param))
    return sentences
