"""Text encoding of affine Weyl group elements and class keys.

Two element forms are accepted:

* a word ``"tau:1 s0 s1"``: the optional ``tau:<k>`` prefix names the k-th
  length-zero element and multiplies on the left; ``"1"`` is the identity;
* an explicit pair ``"t[2,0] * w[1,2]"``: translation coordinates followed by a
  word in finite simple reflections.

Class keys prefix an element with ``"B:"`` (sigma-conjugacy class) or ``"C:"``
(tilde class).
"""
from __future__ import annotations

import re
from typing import Tuple

from .affineweyl import AffineElt, AffineWeylGroup
from .errors import MalformedElement

__all__ = [
    "LEVEL_PREFIX",
    "parse_element",
    "format_element",
    "format_explicit",
    "split_class_key",
    "format_class_text",
]

LEVEL_PREFIX = {"conjclass": "B:", "tilde_class": "C:"}

_EXPLICIT_RE = re.compile(r"^\s*t\[([^\]]*)\]\s*\*\s*w\[([^\]]*)\]\s*$")
_TOKEN_RE = re.compile(r"^s(\d+)$")
_TAU_RE = re.compile(r"^tau:(\d+)$")


def _int_list(text: str) -> Tuple[int, ...]:
    text = text.strip()
    if not text:
        return ()
    try:
        return tuple(int(part) for part in text.split(","))
    except ValueError as exc:
        raise MalformedElement(f"expected comma separated integers, got {text!r}") from exc


def parse_element(group: AffineWeylGroup, text: str) -> AffineElt:
    """Parse either text form into a canonical element."""
    match = _EXPLICIT_RE.match(text)
    if match:
        lam = _int_list(match.group(1))
        word = _int_list(match.group(2))
        if len(lam) != group.datum.rank:
            raise MalformedElement(f"translation needs {group.datum.rank} coordinates, got {len(lam)}")
        if any(not 1 <= i <= group.datum.rank for i in word):
            raise MalformedElement(f"finite word {list(word)} uses labels outside 1..{group.datum.rank}")
        return AffineElt(lam, group.weyl.from_word(word))

    tokens = text.split()
    if not tokens:
        raise MalformedElement("empty element text")
    omega = group.identity
    if _TAU_RE.match(tokens[0]):
        k = int(_TAU_RE.match(tokens[0]).group(1))
        if k >= len(group.omega_elements):
            raise MalformedElement(f"tau:{k} out of range; Omega has {len(group.omega_elements)} elements")
        omega = group.omega_elements[k]
        tokens = tokens[1:]
    if tokens == ["1"]:
        return omega
    labels = []
    for token in tokens:
        match = _TOKEN_RE.match(token)
        if not match or int(match.group(1)) not in group.labels:
            raise MalformedElement(f"unknown simple reflection {token!r}")
        labels.append(int(match.group(1)))
    return group.from_labels(labels, omega)


def format_element(group: AffineWeylGroup, w: AffineElt) -> str:
    """Canonical word form built from the descent reduced word."""
    tau, word = group.reduced_word(w)
    parts = []
    if tau != group.identity:
        parts.append(f"tau:{group.omega_index(tau)}")
    parts.extend(f"s{s}" for s in word)
    return " ".join(parts) if parts else "1"


def format_explicit(group: AffineWeylGroup, w: AffineElt) -> str:
    lam = ",".join(str(x) for x in w.lam)
    word = ",".join(str(i) for i in group.weyl.canonical(w.u).word)
    return f"t[{lam}] * w[{word}]"


def split_class_key(text: str) -> Tuple[str, str]:
    """Return ``(level, element text)`` for ``"B:..."`` or ``"C:..."``."""
    for level, prefix in LEVEL_PREFIX.items():
        if text.startswith(prefix):
            return level, text[len(prefix):].strip()
    raise MalformedElement(f"class key {text!r} must start with 'B:' or 'C:'")


def format_class_text(group: AffineWeylGroup, level: str, rep: AffineElt) -> str:
    return LEVEL_PREFIX[level] + format_element(group, rep)
