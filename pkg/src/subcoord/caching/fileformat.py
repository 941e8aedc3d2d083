"""Text format for schemes and subspace families.

Scheme files::

    field=2
    N=2
    K=2
    F=2
    # comment
    Z 1
    1010
    X 1 2
    0110
    1000

Family files use ``field=``, ``ambient=`` headers and ``A <i>`` sections.
Generators are digit strings, leftmost character = coordinate 0.  A blank
line or a new header closes a section.
"""

from __future__ import annotations

from typing import Dict, List

from ..gf import ContractError, Field
from ..subspace import Subspace

DIGITS = "0123456789abcdefghijklmnopqrstuvwxyz"


class ParseError(ContractError):
    def __init__(self, line: int, msg: str):
        super().__init__(f"line {line}: {msg}")
        self.line = line


def _lines(text: str):
    for no, raw in enumerate(text.splitlines(), start=1):
        yield no, raw.strip()


def _parse_vector(s: str, n: int, p: int, no: int) -> list:
    if len(s) != n:
        raise ParseError(no, f"generator has length {len(s)}, expected {n}")
    out = []
    for ch in s:
        v = DIGITS.find(ch.lower())
        if v < 0 or v >= p:
            raise ParseError(no, f"bad digit {ch!r} for GF({p})")
        out.append(v)
    return out


def _headers(lines, names):
    vals = {}
    for name in names:
        for no, line in lines:
            if not line or line.startswith("#"):
                continue
            key, eq, val = line.partition("=")
            if not eq or key.strip() != name:
                raise ParseError(no, f"expected header {name}=<int>")
            try:
                vals[name] = int(val)
            except ValueError:
                raise ParseError(no, f"header {name} needs an integer, got {val.strip()!r}") from None
            break
        else:
            raise ParseError(0, f"missing header {name}")
    return vals


def _sections(lines, n: int, p: int, parse_key):
    out: Dict = {}
    where: Dict = {}
    current = None
    for no, line in lines:
        if not line:
            current = None
            continue
        if line.startswith("#"):
            continue
        if line[0].isalpha() and not set(line) <= set(DIGITS[:p]):
            key = parse_key(line, no)
            if key in out:
                raise ParseError(no, f"duplicate section {line!r} (first at line {where[key]})")
            out[key] = []
            where[key] = no
            current = key
            continue
        if current is None:
            raise ParseError(no, "generator outside of a section")
        out[current].append(_parse_vector(line, n, p, no))
    return out


def _field(p: int, no: int = 1) -> Field:
    try:
        f = Field(p)
    except ContractError as e:
        raise ParseError(no, str(e)) from None
    if p > len(DIGITS):
        raise ParseError(no, f"no digit alphabet for GF({p})")
    return f


def parse_scheme(text: str):
    from .model import CachingScheme

    lines = iter(list(_lines(text)))
    h = _headers(lines, ["field", "N", "K", "F"])
    f = _field(h["field"])
    N, K, F = h["N"], h["K"], h["F"]
    if min(N, K, F) < 1:
        raise ParseError(0, "N, K and F must be positive")
    n = N * F

    def key(line, no):
        parts = line.split()
        tag, args = parts[0], parts[1:]
        try:
            nums = tuple(int(a) for a in args)
        except ValueError:
            raise ParseError(no, f"bad section header {line!r}") from None
        if tag == "Z":
            if len(nums) != 1 or not 1 <= nums[0] <= K:
                raise ParseError(no, f"Z section needs one user index in 1..{K}")
            return ("Z", nums[0])
        if tag == "X":
            if len(nums) != K or not all(1 <= x <= N for x in nums):
                raise ParseError(no, f"X section needs {K} document indices in 1..{N}")
            return ("X", nums)
        raise ParseError(no, f"unknown section {tag!r}")

    secs = _sections(lines, n, f.p, key)

    def sp(gens):
        return Subspace.from_rows(f, n, [f.pack(g) for g in gens])

    caches = tuple(sp(secs.get(("Z", j), [])) for j in range(1, K + 1))
    bc = {k[1]: sp(v) for k, v in secs.items() if k[0] == "X"}
    return CachingScheme(f, N, K, F, caches, bc)


def _vec_str(v) -> str:
    return "".join(DIGITS[x] for x in v)


def serialize_scheme(s) -> str:
    out = [f"field={s.field.p}", f"N={s.N}", f"K={s.K}", f"F={s.F}"]
    if s.name:
        out.append(f"# {s.name}")
    for j, z in enumerate(s.caches, start=1):
        out.append(f"Z {j}")
        out += [_vec_str(v) for v in z.basis]
        out.append("")
    for d in sorted(s.broadcasts):
        out.append("X " + " ".join(map(str, d)))
        out += [_vec_str(v) for v in s.broadcasts[d].basis]
        out.append("")
    return "\n".join(out)


def parse_family(text: str) -> List[Subspace]:
    lines = iter(list(_lines(text)))
    h = _headers(lines, ["field", "ambient"])
    f = _field(h["field"])
    n = h["ambient"]
    if n < 0:
        raise ParseError(0, "ambient must be non-negative")

    def key(line, no):
        parts = line.split()
        if parts[0] != "A" or len(parts) != 2 or not parts[1].isdigit() or int(parts[1]) < 1:
            raise ParseError(no, f"expected section 'A <i>', got {line!r}")
        return int(parts[1])

    secs = _sections(lines, n, f.p, key)
    if not secs:
        raise ParseError(0, "family has no members")
    m = max(secs)
    return [Subspace.from_rows(f, n, [f.pack(g) for g in secs.get(i, [])]) for i in range(1, m + 1)]


def serialize_family(fam) -> str:
    f, n = fam[0].field, fam[0].n
    out = [f"field={f.p}", f"ambient={n}"]
    for i, a in enumerate(fam, start=1):
        out.append(f"A {i}")
        out += [_vec_str(v) for v in a.basis]
        out.append("")
    return "\n".join(out)
