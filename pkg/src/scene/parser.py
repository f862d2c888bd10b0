"""Line-oriented scene script grammar.

::

    cube|sphere|cylinder NAME [pos X Y Z] [rot X Y Z] [scale X Y Z] [tess N...]
    add|subtract|intersect OUT A B
    resize NAME FX FY FZ
    resize_to NAME W H D
    dimension NAME
    match NAME [K]
    export NAME PATH [ascii|binary]

One command per line; ``#`` starts a comment. Verbs are case-insensitive,
names are not. Rotation angles are in degrees.
"""

import math
import re
from typing import NamedTuple

from src.exceptions import InteractiveOnlyCommandError, InvalidArgumentError, ScriptParseError
from src.models.geometry import Transform
from src.models.scene import BOOLEAN_VERBS, PRIMITIVE_VERBS, Command, SceneScript


INTERACTIVE_VERBS = ("sync", "capture", "select", "print")
TRANSFORM_CLAUSES = ("pos", "rot", "scale")
STL_MODES = ("ascii", "binary")
TESSELLATION_ARITY = {"cube": 0, "sphere": 2, "cylinder": 1}

_NAME = re.compile(r"[A-Za-z_][A-Za-z0-9_]*\Z")
_TOKEN = re.compile(r"\S+")


class Token(NamedTuple):
    text: str
    column: int


class _Cursor:
    """Consumes the tokens of one line, raising located errors."""

    def __init__(self, tokens: list[Token], line: int, end_column: int):
        self.tokens = tokens
        self.line = line
        self.end_column = end_column
        self.index = 1

    def error(self, message: str, token: Token | None = None) -> ScriptParseError:
        column = token.column if token is not None else self.end_column
        return ScriptParseError(message, line=self.line, column=column)

    def peek(self) -> Token | None:
        return self.tokens[self.index] if self.index < len(self.tokens) else None

    def take(self, what: str) -> Token:
        token = self.peek()
        if token is None:
            raise self.error(f"missing {what}")
        self.index += 1
        return token

    def name(self, what: str = "name") -> Token:
        token = self.take(what)
        if not _NAME.match(token.text):
            raise self.error(f"invalid {what} '{token.text}'", token)
        return token

    def number(self, what: str) -> float:
        token = self.take(what)
        try:
            value = float(token.text)
        except ValueError:
            raise self.error(f"expected a number for {what}, got '{token.text}'", token) from None
        if not math.isfinite(value):
            raise self.error(f"{what} must be finite", token)
        return value

    def vector(self, what: str) -> tuple[float, float, float]:
        return tuple(self.number(f"{what} {axis}") for axis in "xyz")

    def integer(self, what: str) -> int:
        token = self.take(what)
        try:
            return int(token.text)
        except ValueError:
            raise self.error(f"expected an integer for {what}, got '{token.text}'", token) from None

    def finish(self) -> None:
        token = self.peek()
        if token is not None:
            raise self.error(f"unexpected argument '{token.text}'", token)


def _tokenize(raw: str) -> tuple[list[Token], int]:
    content = raw.split("#", 1)[0]
    tokens = [Token(m.group(), m.start() + 1) for m in _TOKEN.finditer(content)]
    return tokens, len(content.rstrip()) + 1


def _parse_primitive(verb: str, cursor: _Cursor) -> Command:
    name = cursor.name().text
    clauses: dict[str, tuple[float, float, float]] = {}
    tessellation: tuple[int, ...] = ()
    seen_tess = False
    start = cursor.peek()
    while (token := cursor.peek()) is not None:
        keyword = token.text.lower()
        cursor.index += 1
        if keyword in TRANSFORM_CLAUSES:
            if keyword in clauses:
                raise cursor.error(f"'{keyword}' given twice", token)
            clauses[keyword] = cursor.vector(keyword)
        elif keyword == "tess":
            arity = TESSELLATION_ARITY[verb]
            if arity == 0:
                raise cursor.error(f"{verb} takes no tessellation", token)
            if seen_tess:
                raise cursor.error("'tess' given twice", token)
            tessellation = tuple(cursor.integer("tessellation") for _ in range(arity))
            if min(tessellation) < 3:
                raise cursor.error("tessellation counts must be at least 3", token)
            seen_tess = True
        else:
            raise cursor.error(f"unknown clause '{token.text}'", token)

    try:
        transform = Transform(
            position=clauses.get("pos", (0.0, 0.0, 0.0)),
            rotation=clauses.get("rot", (0.0, 0.0, 0.0)),
            scale=clauses.get("scale", (1.0, 1.0, 1.0)),
        )
    except InvalidArgumentError as exc:
        raise cursor.error(str(exc), start) from exc
    return Command(
        verb=verb,
        line=cursor.line,
        name=name,
        transform=transform,
        tessellation=tessellation,
    )


def _parse_boolean(verb: str, cursor: _Cursor) -> tuple[Command, list[Token]]:
    out = cursor.name("result name")
    a = cursor.name("first operand")
    b = cursor.name("second operand")
    cursor.finish()
    command = Command(verb=verb, line=cursor.line, name=out.text, operands=(a.text, b.text))
    return command, [a, b]


def _parse_subject(verb: str, cursor: _Cursor) -> tuple[Command, list[Token]]:
    subject = cursor.name()
    fields: dict = {}
    if verb == "resize":
        factors = cursor.vector("factor")
        if min(factors) <= 0:
            raise cursor.error("resize factors must be positive", subject)
        fields["vector"] = factors
    elif verb == "resize_to":
        target = cursor.vector("dimension")
        if min(target) <= 0:
            raise cursor.error("target dimensions must be positive", subject)
        fields["vector"] = target
    elif verb == "match":
        if cursor.peek() is not None:
            token = cursor.peek()
            k = cursor.integer("K")
            if k < 1:
                raise cursor.error("K must be at least 1", token)
            fields["top_k"] = k
    elif verb == "export":
        fields["path"] = cursor.take("path").text
        mode = cursor.peek()
        if mode is not None:
            if mode.text.lower() not in STL_MODES:
                raise cursor.error(f"export mode must be ascii or binary, got '{mode.text}'", mode)
            cursor.index += 1
            fields["stl_mode"] = mode.text.lower()
    cursor.finish()
    return Command(verb=verb, line=cursor.line, name=subject.text, **fields), [subject]


def parse_script(text: str | bytes) -> SceneScript:
    """
    Parse scene script text into validated commands.

    Args:
        text: UTF-8 script

    Returns:
        SceneScript whose commands only reference names defined earlier

    Raises:
        ScriptParseError: Unknown verb, bad arity, bad number or undefined name,
            located by line and column
        InteractiveOnlyCommandError: For sync, capture, select and print
    """
    if isinstance(text, (bytes, bytearray)):
        try:
            text = bytes(text).decode("utf-8")
        except UnicodeDecodeError as exc:
            raise ScriptParseError("script is not valid UTF-8", offset=exc.start) from exc

    commands: list[Command] = []
    defined: set[str] = set()
    for number, raw in enumerate(text.splitlines(), start=1):
        tokens, end_column = _tokenize(raw)
        if not tokens:
            continue
        head = tokens[0]
        verb = head.text.lower()
        cursor = _Cursor(tokens, number, end_column)

        if verb in INTERACTIVE_VERBS:
            raise InteractiveOnlyCommandError(
                f"'{verb}' is an interactive-only command", line=number, column=head.column
            )
        if verb in PRIMITIVE_VERBS:
            command, references = _parse_primitive(verb, cursor), []
        elif verb in BOOLEAN_VERBS:
            command, references = _parse_boolean(verb, cursor)
        elif verb in ("resize", "resize_to", "dimension", "match", "export"):
            command, references = _parse_subject(verb, cursor)
        else:
            raise ScriptParseError(f"unknown verb '{head.text}'", line=number, column=head.column)

        for token in references:
            if token.text not in defined:
                raise ScriptParseError(
                    f"undefined name '{token.text}'", line=number, column=token.column
                )
        if command.defines:
            defined.add(command.defines)
        commands.append(command)

    return SceneScript(commands=tuple(commands))
