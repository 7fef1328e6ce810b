"""
Complex and Cochain Files
Plain-text formats for facet lists and cochains.

Complex:  ``dim <d> vertices <n>`` then one facet per line (d+1 increasing
          0-based vertex indices). ``#`` starts a comment.
Cochain:  ``degree <q> field <p> <k>`` then one line per q-face in face
          order: the face's vertices followed by the k polynomial-basis
          coefficients of the value, lowest degree first.
"""

from pathlib import Path
from typing import IO, Iterator, List, Optional, Tuple, Union

from services.algebra.field import Field, get_field
from services.simplicial.complex import Cochain, Complex, build_complex

PathLike = Union[str, Path]


class ComplexFormatError(ValueError):
    """Malformed complex or cochain file."""

    def __init__(self, message: str, line: Optional[int] = None):
        self.line = line
        prefix = f"line {line}: " if line is not None else ""
        super().__init__(prefix + message)


def _content_lines(stream: IO[str]) -> Iterator[Tuple[int, List[str]]]:
    for number, raw in enumerate(stream, start=1):
        text = raw.split("#", 1)[0].strip()
        if text:
            yield number, text.split()


def _parse_ints(tokens: List[str], line: int) -> List[int]:
    try:
        return [int(t) for t in tokens]
    except ValueError:
        raise ComplexFormatError(f"expected integers, got {' '.join(tokens)!r}", line)


def read_complex(source: Union[PathLike, IO[str]]) -> Complex:
    """Read a complex from a path or an open text stream."""
    if isinstance(source, (str, Path)):
        with open(source, "r", encoding="utf-8") as fh:
            return read_complex(fh)

    lines = _content_lines(source)
    try:
        number, header = next(lines)
    except StopIteration:
        raise ComplexFormatError("empty complex file")
    if len(header) != 4 or header[0] != "dim" or header[2] != "vertices":
        raise ComplexFormatError("header must be 'dim <d> vertices <n>'", number)
    dim, n_vertices = _parse_ints([header[1], header[3]], number)

    facets = []
    first_seen = {}
    for number, tokens in lines:
        facet = _parse_ints(tokens, number)
        if len(facet) != dim + 1:
            raise ComplexFormatError(f"facet has {len(facet)} vertices, expected {dim + 1}", number)
        if any(a >= b for a, b in zip(facet, facet[1:])):
            raise ComplexFormatError(f"facet {tuple(facet)} is not strictly increasing", number)
        if facet[0] < 0 or facet[-1] >= n_vertices:
            raise ComplexFormatError(f"facet {tuple(facet)} uses a vertex outside 0..{n_vertices - 1}", number)
        if tuple(facet) in first_seen:
            raise ComplexFormatError(
                f"duplicate facet {tuple(facet)}, first given on line {first_seen[tuple(facet)]}", number
            )
        first_seen[tuple(facet)] = number
        facets.append(tuple(facet))

    if not facets:
        raise ComplexFormatError("no facets")
    try:
        return build_complex(n_vertices, facets)
    except ValueError as e:
        raise ComplexFormatError(str(e))


def write_complex(c: Complex, target: Union[PathLike, IO[str]], comment: Optional[str] = None):
    """Write facets in canonical (sorted) order."""
    if isinstance(target, (str, Path)):
        with open(target, "w", encoding="utf-8") as fh:
            write_complex(c, fh, comment)
        return
    if comment:
        for line in comment.splitlines():
            target.write(f"# {line}\n")
    target.write(f"dim {c.dim} vertices {c.n_vertices}\n")
    for facet in c.facets:
        target.write(" ".join(str(v) for v in facet) + "\n")


def io_complex(path: Union[PathLike, IO[str]], direction: str = "read", c: Optional[Complex] = None) -> Complex:
    """Read or write a complex; returns the complex either way."""
    if direction == "read":
        return read_complex(path)
    if direction == "write":
        if c is None:
            raise ValueError("Writing needs a complex")
        write_complex(c, path)
        return c
    raise ValueError(f"Unknown direction: {direction}")


def write_cochain(cochain: Cochain, target: Union[PathLike, IO[str]]):
    if isinstance(target, (str, Path)):
        with open(target, "w", encoding="utf-8") as fh:
            write_cochain(cochain, fh)
        return
    f = cochain.field
    target.write(f"degree {cochain.degree} field {f.p} {f.k}\n")
    for face, value in zip(cochain.complex.faces[cochain.degree], Field.to_ints(cochain.values)):
        parts = [str(v) for v in face] + [str(a) for a in f.coefficients(value)]
        target.write(" ".join(parts) + "\n")


def read_cochain(source: Union[PathLike, IO[str]], c: Complex) -> Cochain:
    """Read a cochain on the given complex; faces must appear in face order."""
    if isinstance(source, (str, Path)):
        with open(source, "r", encoding="utf-8") as fh:
            return read_cochain(fh, c)

    lines = _content_lines(source)
    try:
        number, header = next(lines)
    except StopIteration:
        raise ComplexFormatError("empty cochain file")
    if len(header) != 5 or header[0] != "degree" or header[2] != "field":
        raise ComplexFormatError("header must be 'degree <q> field <p> <k>'", number)
    q, p, k = _parse_ints([header[1], header[3], header[4]], number)
    if not 0 <= q <= c.dim:
        raise ComplexFormatError(f"degree {q} out of range for a {c.dim}-complex", number)
    field = get_field(p, k)

    expected = c.faces[q]
    values = []
    for number, tokens in lines:
        ints = _parse_ints(tokens, number)
        if len(ints) != q + 1 + k:
            raise ComplexFormatError(f"expected {q + 1} vertices and {k} coefficients", number)
        face = tuple(ints[: q + 1])
        if len(values) >= len(expected) or face != expected[len(values)]:
            raise ComplexFormatError(f"face {face} out of order or not in the complex", number)
        try:
            values.append(field.from_coefficients(ints[q + 1 :]))
        except ValueError as e:
            raise ComplexFormatError(str(e), number)
    if len(values) != len(expected):
        raise ComplexFormatError(f"expected {len(expected)} faces, got {len(values)}")
    return Cochain(c, q, field, values)
