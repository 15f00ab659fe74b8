"""Line-oriented case files.

::

    # comment
    case twisted_cubic
    field F 32003
    ring x y z w
    order degrevlex
    ideal I:
    ideal a: x*z - y^2, x*w - y*z, y*w - z^2
    expect height 2

``ideal inner:`` optionally names an intermediate ideal contained in ``a``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field

from .errors import InputError
from .poly import DEGREVLEX, LEX, Field, MonomialOrder, PolyRing, parse_polynomial

EXPECT_KEYS = ("dim", "depth", "e", "N", "mu", "type", "height")
IDEAL_NAMES = ("I", "a", "inner")


@dataclass
class CaseFile:
    ring: PolyRing
    I: tuple = ()
    a: tuple = None
    inner: tuple = None
    expect: dict = field(default_factory=dict)
    case_id: str = None

    def __eq__(self, other):
        if not isinstance(other, CaseFile):
            return NotImplemented
        return (self.ring == other.ring and self.case_id == other.case_id
                and self.expect == other.expect
                and all(_same(getattr(self, k), getattr(other, k)) for k in IDEAL_NAMES))


def _same(a, b):
    if a is None or b is None:
        return a is None and b is None
    return [g.coeffs for g in a] == [g.coeffs for g in b]


def _split_generators(body: str, start: int):
    """Yield ``(text, column offset)`` for each comma-separated piece, honoring parentheses."""
    depth, begin = 0, 0
    pieces = []
    for i, ch in enumerate(body + ","):
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        elif ch == "," and depth == 0:
            pieces.append((body[begin:i], start + begin))
            begin = i + 1
    return pieces


def parse_case(text: str, case_id: str = None) -> CaseFile:
    fld, names, order = None, None, DEGREVLEX
    ideals, expect = {}, {}
    cid = case_id
    ring_line = None
    deferred = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].rstrip()
        if not line.strip():
            continue
        indent = len(line) - len(line.lstrip())
        words = line.split()
        head = words[0]
        if head == "case":
            if len(words) != 2:
                raise InputError("expected `case <id>`", lineno, indent + 1)
            cid = words[1]
        elif head == "field":
            if words[1:] == ["Q"]:
                fld = Field(0)
            elif len(words) == 3 and words[1] == "F" and words[2].isdigit():
                try:
                    fld = Field(int(words[2]))
                except InputError as exc:
                    raise InputError(str(exc), lineno, line.index(words[2]) + 1) from None
            else:
                raise InputError("expected `field Q` or `field F <p>`", lineno, indent + 1)
        elif head == "ring":
            if len(words) < 2:
                raise InputError("ring needs at least one variable", lineno, indent + 1)
            names = tuple(words[1:])
            ring_line = lineno
        elif head == "order":
            if words[1:] == ["degrevlex"]:
                order = DEGREVLEX
            elif words[1:] == ["lex"]:
                order = LEX
            elif len(words) == 3 and words[1] == "block" and words[2].isdigit():
                order = MonomialOrder.block(int(words[2]))
            else:
                raise InputError("expected `order degrevlex|lex|block <k>`", lineno, indent + 1)
        elif head == "ideal":
            m = re.match(r"\s*ideal\s+(\w+)\s*:", line)
            if not m or m.group(1) not in IDEAL_NAMES:
                raise InputError("expected `ideal I:`, `ideal a:` or `ideal inner:`",
                                 lineno, indent + 1)
            if m.group(1) in ideals:
                raise InputError(f"ideal {m.group(1)} declared twice", lineno, indent + 1)
            ideals[m.group(1)] = None
            deferred.append((m.group(1), line[m.end():], m.end(), lineno))
        elif head == "expect":
            if len(words) != 3 or words[1] not in EXPECT_KEYS:
                raise InputError(f"expected `expect <key> <int>` with key in {EXPECT_KEYS}",
                                 lineno, indent + 1)
            try:
                expect[words[1]] = int(words[2])
            except ValueError:
                raise InputError("expected an integer", lineno, line.rindex(words[2]) + 1) from None
        else:
            raise InputError(f"unknown directive {head!r}", lineno, indent + 1)
    if fld is None:
        raise InputError("missing `field` line")
    if names is None:
        raise InputError("missing `ring` line")
    try:
        ring = PolyRing(fld, names, order)
    except InputError as exc:
        raise InputError(str(exc), ring_line) from None
    for name, body, start, lineno in deferred:
        gens = []
        for piece, col in _split_generators(body, start):
            if not piece.strip():
                if body.strip():
                    raise InputError("empty generator", lineno, col + 1)
                continue
            g = parse_polynomial(piece, ring, line=lineno, offset=col)
            if not g.is_homogeneous():
                raise InputError("generator is not homogeneous", lineno, col + 1)
            gens.append(g)
        ideals[name] = tuple(gens)
    if "I" not in ideals:
        ideals["I"] = ()
    return CaseFile(ring, ideals["I"], ideals.get("a"), ideals.get("inner"), expect, cid)


def format_case(case: CaseFile) -> str:
    ring = case.ring
    lines = []
    if case.case_id:
        lines.append(f"case {case.case_id}")
    lines.append(f"field {ring.field}")
    lines.append("ring " + " ".join(ring.variables))
    lines.append(f"order {ring.order}")
    for name in IDEAL_NAMES:
        gens = getattr(case, name)
        if gens is None:
            continue
        body = ", ".join(str(g) for g in gens)
        lines.append(f"ideal {name}: {body}".rstrip())
    for key in EXPECT_KEYS:
        if key in case.expect:
            lines.append(f"expect {key} {case.expect[key]}")
    return "\n".join(lines) + "\n"


def read_case(path) -> CaseFile:
    from pathlib import Path
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except (OSError, UnicodeDecodeError) as exc:
        raise InputError(f"{path}: cannot read case file ({exc})") from None
    try:
        return parse_case(text, case_id=path.stem)
    except InputError as exc:
        raise InputError(f"{path}: {exc}") from None
