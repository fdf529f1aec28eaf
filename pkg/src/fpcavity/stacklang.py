"""Plain-text stack-description language.

Grammar (EBNF):

    document   := header material* stackdef
    header     := "wavelength" NUMBER "nm"
    material   := "material" IDENT "n" "=" NUMBER ["k" "=" NUMBER]
    stackdef   := "stack" "from" IDENT "to" IDENT "{" item* "}"
    item       := layer | qw | repeat
    layer      := "layer" IDENT NUMBER "nm"
    qw         := "qw" IDENT
    repeat     := "repeat" INT "{" item* "}"

Comments run from "#" to end of line; whitespace is insignificant; numbers
are plain decimals. Materials from the standard library (vacuum, silica,
ta2o5, ...) may be referenced without being declared; document declarations
extend or override them.

Parsing never stops at the first problem: every error is recorded as a
positioned Diagnostic and the parser resynchronizes at the next directive.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .materials import (
    DEFAULT_LIBRARY,
    Layer,
    Material,
    MaterialLibrary,
    Stack,
    quarter_wave_thickness,
)

KEYWORDS = {"wavelength", "material", "stack", "from", "to", "layer", "qw", "repeat", "nm", "n", "k"}
_SYNC_TOKENS = {"material", "stack", "layer", "qw", "repeat", "}", ""}


@dataclass(frozen=True)
class Diagnostic:
    severity: str   # "error" | "warning"
    line: int       # 1-based
    column: int     # 1-based
    message: str

    def __str__(self):
        return f"{self.severity}:{self.line}:{self.column}: {self.message}"


@dataclass(frozen=True)
class LayerItem:
    material_name: str
    thickness_nm: float


@dataclass(frozen=True)
class QuarterWaveItem:
    material_name: str


@dataclass(frozen=True)
class RepeatItem:
    count: int
    items: tuple = ()


@dataclass(frozen=True)
class StackDocument:
    """Parsed stack description (positions live in the diagnostics only)."""

    wavelength_nm: float
    materials: tuple[tuple[str, complex], ...]
    incident_name: str
    exit_name: str
    items: tuple = ()

    def material_table(self, library: MaterialLibrary = DEFAULT_LIBRARY) -> MaterialLibrary:
        table = library.copy()
        for name, index in self.materials:
            table.add(Material(name, index))
        return table

    def to_stack(self, library: MaterialLibrary = DEFAULT_LIBRARY) -> Stack:
        table = self.material_table(library)

        def expand(items) -> list[Layer]:
            out: list[Layer] = []
            for item in items:
                if isinstance(item, LayerItem):
                    out.append(Layer(table.get(item.material_name), item.thickness_nm))
                elif isinstance(item, QuarterWaveItem):
                    mat = table.get(item.material_name)
                    out.append(Layer(mat, quarter_wave_thickness(mat, self.wavelength_nm)))
                elif isinstance(item, RepeatItem):
                    out.extend(expand(item.items) * item.count)
            return out

        return Stack(
            table.get(self.incident_name),
            tuple(expand(self.items)),
            table.get(self.exit_name),
        )


@dataclass
class ParseResult:
    document: StackDocument | None
    diagnostics: list[Diagnostic] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return self.document is not None and not any(
            d.severity == "error" for d in self.diagnostics
        )

    def errors(self) -> list[Diagnostic]:
        return [d for d in self.diagnostics if d.severity == "error"]


@dataclass(frozen=True)
class _Token:
    kind: str    # "ident" | "number" | "punct" | "eof"
    text: str
    line: int
    column: int


def _tokenize(source: str, diagnostics: list[Diagnostic]) -> list[_Token]:
    tokens: list[_Token] = []
    line, col = 1, 1
    i = 0
    n = len(source)
    while i < n:
        ch = source[i]
        if ch == "\n":
            line += 1
            col = 1
            i += 1
            continue
        if ch in " \t\r":
            i += 1
            col += 1
            continue
        if ch == "#":
            while i < n and source[i] != "\n":
                i += 1
            continue
        start_col = col
        if ch.isalpha() or ch == "_":
            j = i
            while j < n and (source[j].isalnum() or source[j] == "_"):
                j += 1
            tokens.append(_Token("ident", source[i:j], line, start_col))
            col += j - i
            i = j
            continue
        if ch.isdigit() or (ch == "-" and i + 1 < n and (source[i + 1].isdigit() or source[i + 1] == ".")) or ch == ".":
            j = i + 1 if ch == "-" else i
            seen_dot = False
            while j < n and (source[j].isdigit() or (source[j] == "." and not seen_dot)):
                seen_dot = seen_dot or source[j] == "."
                j += 1
            text = source[i:j]
            try:
                float(text)
                tokens.append(_Token("number", text, line, start_col))
            except ValueError:
                diagnostics.append(Diagnostic("error", line, start_col, f"malformed number {text!r}"))
            col += j - i
            i = j
            continue
        if ch in "{}=":
            tokens.append(_Token("punct", ch, line, start_col))
            i += 1
            col += 1
            continue
        diagnostics.append(Diagnostic("error", line, start_col, f"unexpected character {ch!r}"))
        i += 1
        col += 1
    tokens.append(_Token("eof", "", line, col))
    return tokens


class _Parser:
    def __init__(self, tokens: list[_Token], diagnostics: list[Diagnostic],
                 library: MaterialLibrary):
        self.tokens = tokens
        self.pos = 0
        self.diagnostics = diagnostics
        self.library = library
        self.declared: dict[str, complex] = {}

    # --- token plumbing -----------------------------------------------
    def peek(self) -> _Token:
        return self.tokens[self.pos]

    def advance(self) -> _Token:
        tok = self.tokens[self.pos]
        if tok.kind != "eof":
            self.pos += 1
        return tok

    def error(self, tok: _Token, message: str) -> None:
        self.diagnostics.append(Diagnostic("error", tok.line, tok.column, message))

    def warn(self, tok: _Token, message: str) -> None:
        self.diagnostics.append(Diagnostic("warning", tok.line, tok.column, message))

    def expect_ident(self, what: str) -> _Token | None:
        tok = self.peek()
        if tok.kind == "ident":
            return self.advance()
        self.error(tok, f"expected {what}, found {tok.text!r}" if tok.text else f"expected {what}")
        return None

    def expect_keyword(self, word: str) -> bool:
        tok = self.peek()
        if tok.kind == "ident" and tok.text == word:
            self.advance()
            return True
        self.error(tok, f"expected {word!r}" + (f", found {tok.text!r}" if tok.text else ""))
        return False

    def expect_number(self, what: str) -> tuple[float, _Token] | None:
        tok = self.peek()
        if tok.kind == "number":
            self.advance()
            return float(tok.text), tok
        self.error(tok, f"expected {what}" + (f", found {tok.text!r}" if tok.text else ""))
        return None

    def expect_punct(self, ch: str) -> bool:
        tok = self.peek()
        if tok.kind == "punct" and tok.text == ch:
            self.advance()
            return True
        self.error(tok, f"expected {ch!r}" + (f", found {tok.text!r}" if tok.text else ""))
        return False

    def synchronize(self) -> None:
        while True:
            tok = self.peek()
            if tok.kind == "eof" or tok.text in _SYNC_TOKENS:
                return
            self.advance()

    def check_material_known(self, tok: _Token) -> None:
        if tok.text not in self.declared and tok.text not in self.library:
            self.error(tok, f"unknown material {tok.text!r}")

    # --- grammar ------------------------------------------------------
    def parse_document(self) -> StackDocument | None:
        wavelength = self.parse_header()
        stackdef = None
        while self.peek().kind != "eof":
            tok = self.peek()
            if tok.kind == "ident" and tok.text == "material":
                self.parse_material()
            elif tok.kind == "ident" and tok.text == "stack":
                if stackdef is not None:
                    self.error(tok, "multiple stack definitions; only one allowed")
                    self.advance()
                    self.synchronize()
                    continue
                stackdef = self.parse_stackdef()
            else:
                self.error(tok, f"expected 'material' or 'stack', found {tok.text!r}")
                self.advance()
                self.synchronize()
        if stackdef is None:
            last = self.tokens[-1]
            self.error(last, "missing stack definition")
            return None
        if wavelength is None:
            return None
        incident, exit_name, items = stackdef
        return StackDocument(
            wavelength_nm=wavelength,
            materials=tuple(self.declared.items()),
            incident_name=incident,
            exit_name=exit_name,
            items=tuple(items),
        )

    def parse_header(self) -> float | None:
        tok = self.peek()
        if not (tok.kind == "ident" and tok.text == "wavelength"):
            self.error(tok, "missing header: expected 'wavelength NUMBER nm'")
            return None
        self.advance()
        got = self.expect_number("wavelength value")
        if got is None:
            self.synchronize()
            return None
        value, vtok = got
        if not self.expect_keyword("nm"):
            self.synchronize()
            return None
        if value <= 0:
            self.error(vtok, f"wavelength must be positive, got {vtok.text}")
            return None
        return value

    def parse_material(self) -> None:
        self.advance()  # 'material'
        name_tok = self.expect_ident("material name")
        if name_tok is None:
            self.synchronize()
            return
        if not self.expect_keyword("n"):
            self.synchronize()
            return
        if not self.expect_punct("="):
            self.synchronize()
            return
        got = self.expect_number("refractive index")
        if got is None:
            self.synchronize()
            return
        n_value, n_tok = got
        k_value = 0.0
        if self.peek().kind == "ident" and self.peek().text == "k":
            self.advance()
            if not self.expect_punct("="):
                self.synchronize()
                return
            got_k = self.expect_number("extinction coefficient")
            if got_k is None:
                self.synchronize()
                return
            k_value, k_tok = got_k
            if k_value < 0:
                self.error(k_tok, f"extinction coefficient must be >= 0, got {k_tok.text}")
                return
        if n_value <= 0:
            self.error(n_tok, f"refractive index must be positive, got {n_tok.text}")
            return
        if name_tok.text in self.declared:
            self.warn(name_tok, f"material {name_tok.text!r} redefined")
        self.declared[name_tok.text] = complex(n_value, k_value)

    def parse_stackdef(self):
        self.advance()  # 'stack'
        if not self.expect_keyword("from"):
            self.synchronize()
            return None
        incident = self.expect_ident("incident medium name")
        if incident is None:
            self.synchronize()
            return None
        self.check_material_known(incident)
        if not self.expect_keyword("to"):
            self.synchronize()
            return None
        exit_tok = self.expect_ident("exit medium name")
        if exit_tok is None:
            self.synchronize()
            return None
        self.check_material_known(exit_tok)
        items = self.parse_block()
        return incident.text, exit_tok.text, items

    def parse_block(self) -> list:
        items: list = []
        if not self.expect_punct("{"):
            self.synchronize()
            return items
        while True:
            tok = self.peek()
            if tok.kind == "punct" and tok.text == "}":
                self.advance()
                return items
            if tok.kind == "eof":
                self.error(tok, "unbalanced braces: missing '}'")
                return items
            item = self.parse_item()
            if item is not None:
                items.append(item)

    def parse_item(self):
        tok = self.peek()
        if tok.kind == "ident" and tok.text == "layer":
            self.advance()
            name = self.expect_ident("material name")
            if name is None:
                self.synchronize()
                return None
            self.check_material_known(name)
            got = self.expect_number("layer thickness")
            if got is None:
                self.synchronize()
                return None
            thickness, t_tok = got
            if not self.expect_keyword("nm"):
                self.synchronize()
                return None
            if thickness <= 0:
                self.error(t_tok, f"layer thickness must be positive, got {t_tok.text}")
                return None
            return LayerItem(name.text, thickness)
        if tok.kind == "ident" and tok.text == "qw":
            self.advance()
            name = self.expect_ident("material name")
            if name is None:
                self.synchronize()
                return None
            self.check_material_known(name)
            return QuarterWaveItem(name.text)
        if tok.kind == "ident" and tok.text == "repeat":
            self.advance()
            got = self.expect_number("repeat count")
            if got is None:
                self.synchronize()
                return None
            count, c_tok = got
            if count != int(count) or int(count) < 1:
                self.error(c_tok, f"repeat count must be a positive integer, got {c_tok.text}")
                self.synchronize()
                return None
            inner = self.parse_block()
            return RepeatItem(int(count), tuple(inner))
        self.error(tok, f"expected 'layer', 'qw' or 'repeat', found {tok.text!r}")
        self.advance()
        self.synchronize()
        return None


def parse_stack(source: str, library: MaterialLibrary = DEFAULT_LIBRARY) -> ParseResult:
    """Parse a stack document, collecting every diagnostic before returning."""
    diagnostics: list[Diagnostic] = []
    tokens = _tokenize(source, diagnostics)
    parser = _Parser(tokens, diagnostics, library)
    document = parser.parse_document()
    if any(d.severity == "error" for d in diagnostics):
        document = None if document is None else document
    return ParseResult(document, diagnostics)


def format_document(doc: StackDocument) -> str:
    """Canonical text form; parsing it again reproduces the same document."""
    lines = [f"wavelength {_fmt(doc.wavelength_nm)} nm"]
    for name, index in doc.materials:
        entry = f"material {name} n = {_fmt(index.real)}"
        if index.imag:
            entry += f" k = {_fmt(index.imag)}"
        lines.append(entry)
    lines.append(f"stack from {doc.incident_name} to {doc.exit_name} {{")
    lines.extend(_format_items(doc.items, indent=1))
    lines.append("}")
    return "\n".join(lines) + "\n"


def _format_items(items, indent: int) -> list[str]:
    pad = "  " * indent
    out = []
    for item in items:
        if isinstance(item, LayerItem):
            out.append(f"{pad}layer {item.material_name} {_fmt(item.thickness_nm)} nm")
        elif isinstance(item, QuarterWaveItem):
            out.append(f"{pad}qw {item.material_name}")
        elif isinstance(item, RepeatItem):
            out.append(f"{pad}repeat {item.count} {{")
            out.extend(_format_items(item.items, indent + 1))
            out.append(f"{pad}}}")
    return out


def _fmt(value: float) -> str:
    # repr gives the shortest digits that round-trip exactly through float()
    return repr(float(value))
