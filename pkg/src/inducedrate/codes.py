"""Text format for check matrices and a few named code families."""
from __future__ import annotations

import re
from typing import Sequence

from .symplectic import PauliVec, check_generators, row_reduce

__all__ = [
    "CodeParseError",
    "BadCharacter",
    "LengthMismatch",
    "parse_code",
    "render_code",
    "all_z",
    "z_repetition",
    "canonical_key",
    "canonical_string",
]


class CodeParseError(ValueError):
    pass


class BadCharacter(CodeParseError):
    pass


class LengthMismatch(CodeParseError):
    pass


def all_z(n: int) -> tuple[PauliVec, ...]:
    """The [[n, n-1]] code with the single stabilizer Z...Z."""
    return (PauliVec(n, 0, (1 << n) - 1),)


def z_repetition(n: int) -> tuple[PauliVec, ...]:
    """The [[n, 1]] code with stabilizers Z_i Z_{i+1}."""
    return tuple(PauliVec(n, 0, 0b11 << i) for i in range(n - 1))


_PRESETS = {"allz": all_z, "zrep": z_repetition}
_PRESET_RE = re.compile(r"^(\w+):n=(\d+)$")


def parse_code(text: str) -> tuple[PauliVec, ...]:
    """Parse ``"ZZI,IZZ"`` or a preset ``allz:n=<int>`` / ``zrep:n=<int>``.

    The result is validated (commuting, independent, no identity rows).
    """
    text = text.strip()
    m = _PRESET_RE.match(text)
    if m:
        name, n = m.group(1), int(m.group(2))
        if name not in _PRESETS:
            raise CodeParseError(f"unknown preset {name!r}; expected one of {sorted(_PRESETS)}")
        if n < 2:
            raise CodeParseError(f"preset {name} needs n >= 2")
        return _PRESETS[name](n)
    rows = [row.strip() for row in text.split(",")]
    if not rows or not rows[0]:
        raise CodeParseError("empty code")
    n = len(rows[0])
    H = []
    for i, row in enumerate(rows):
        bad = set(row) - set("IXYZ")
        if bad:
            raise BadCharacter(f"row {i} ({row!r}) has characters {''.join(sorted(bad))!r}")
        if len(row) != n:
            raise LengthMismatch(f"row {i} ({row!r}) has length {len(row)}, expected {n}")
        H.append(PauliVec.from_string(row))
    H = tuple(H)
    check_generators(H)
    return H


def render_code(H: Sequence[PauliVec]) -> str:
    return ",".join(str(h) for h in H)


def canonical_key(H: Sequence[PauliVec]) -> tuple[int, tuple[int, ...]]:
    """Hashable key equal for check matrices with the same row space."""
    return (H[0].n if H else 0, row_reduce(H))


def canonical_string(H: Sequence[PauliVec]) -> str:
    n, rows = canonical_key(H)
    return render_code([PauliVec.from_bits(b, n) for b in rows])
