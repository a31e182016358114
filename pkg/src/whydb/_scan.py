"""Cursor over input text with line/column tracking, shared by the parsers."""

from __future__ import annotations

import re

from .errors import ParseError

IDENTIFIER_RE = re.compile(r"[A-Za-z][A-Za-z0-9_]*")
_INT_RE = re.compile(r"\d+")


class Scanner:
    __slots__ = ("text", "pos", "line", "col")

    def __init__(self, text: str):
        self.text = text
        self.pos = 0
        self.line = 1
        self.col = 1

    def eof(self) -> bool:
        return self.pos >= len(self.text)

    def peek(self) -> str:
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def advance(self, n: int = 1) -> str:
        taken = self.text[self.pos : self.pos + n]
        for ch in taken:
            if ch == "\n":
                self.line += 1
                self.col = 1
            else:
                self.col += 1
        self.pos += n
        return taken

    def skip_layout(self) -> None:
        """Skip whitespace and `%` comments (which run to end of line)."""
        while not self.eof():
            ch = self.peek()
            if ch in " \t\r\n":
                self.advance()
            elif ch == "%":
                while not self.eof() and self.peek() != "\n":
                    self.advance()
            else:
                break

    def error(self, message: str) -> ParseError:
        return ParseError(message, line=self.line, column=self.col)

    def expect(self, token: str) -> None:
        self.skip_layout()
        if not self.text.startswith(token, self.pos):
            raise self.error(f"expected {token!r}")
        self.advance(len(token))

    def try_token(self, token: str) -> bool:
        self.skip_layout()
        if self.text.startswith(token, self.pos):
            self.advance(len(token))
            return True
        return False

    def read_identifier(self, what: str) -> str:
        self.skip_layout()
        m = IDENTIFIER_RE.match(self.text, self.pos)
        if not m:
            raise self.error(f"expected {what}")
        self.advance(m.end() - self.pos)
        return m.group()

    def read_int(self, what: str) -> int:
        self.skip_layout()
        m = _INT_RE.match(self.text, self.pos)
        if not m:
            raise self.error(f"expected {what}")
        self.advance(m.end() - self.pos)
        return int(m.group())

    def lookahead_after_layout(self, offset: int = 0) -> str:
        """First non-layout character at or after pos+offset, without consuming."""
        i = self.pos + offset
        text = self.text
        while i < len(text):
            ch = text[i]
            if ch in " \t\r\n":
                i += 1
            elif ch == "%":
                while i < len(text) and text[i] != "\n":
                    i += 1
            else:
                return ch
        return ""
