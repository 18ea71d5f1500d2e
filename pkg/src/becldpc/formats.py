"""Text formats: alist sparse parity-check matrices and degree matrices.

alist layout (1-based indices, zero padding)::

    n r
    max_col_degree max_row_degree
    <n column degrees>
    <r row degrees>
    <n lines: row indices of each column, padded with 0 to max_col_degree>
    <r lines: column indices of each row, padded with 0 to max_row_degree>

Degree-matrix layout: a ``rows cols`` header, then ``rows`` lines of ``cols``
integers; ``-1`` is a zero entry and ``e >= 0`` the monomial ``D^e``.
"""

from __future__ import annotations

import io
from pathlib import Path

import numpy as np

from .errors import DegreeMatrixParseError
from .gf2 import BitMatrix


def write_alist(h: BitMatrix, stream) -> None:
    dense = h.to_dense()
    r, n = dense.shape
    cols = [np.flatnonzero(dense[:, j]) + 1 for j in range(n)]
    rows = [np.flatnonzero(dense[i]) + 1 for i in range(r)]
    # at least one slot per line so empty columns or rows still print a 0
    max_c = max(1, max((len(c) for c in cols), default=0))
    max_r = max(1, max((len(x) for x in rows), default=0))
    print(n, r, file=stream)
    print(max_c, max_r, file=stream)
    print(" ".join(str(len(c)) for c in cols), file=stream)
    print(" ".join(str(len(x)) for x in rows), file=stream)
    for c in cols:
        print(" ".join(str(v) for v in list(c) + [0] * (max_c - len(c))), file=stream)
    for x in rows:
        print(" ".join(str(v) for v in list(x) + [0] * (max_r - len(x))), file=stream)


def dumps_alist(h: BitMatrix) -> str:
    buf = io.StringIO()
    write_alist(h, buf)
    return buf.getvalue()


def loads_alist(text: str) -> BitMatrix:
    """Parse alist text. Only the per-column index lists define the matrix."""
    tokens = [line.split() for line in text.splitlines() if line.strip()]
    if len(tokens) < 4:
        raise ValueError("alist: truncated header")
    n, r = int(tokens[0][0]), int(tokens[0][1])
    col_deg = [int(t) for t in tokens[2]]
    if len(col_deg) != n:
        raise ValueError(f"alist: expected {n} column degrees, got {len(col_deg)}")
    if len(tokens) < 4 + n:
        raise ValueError("alist: missing column index lines")
    dense = np.zeros((r, n), dtype=np.uint8)
    for j in range(n):
        idx = [int(t) for t in tokens[4 + j] if int(t) != 0]
        if len(idx) != col_deg[j]:
            raise ValueError(f"alist: column {j + 1} lists {len(idx)} rows, degree says {col_deg[j]}")
        for i in idx:
            if not 1 <= i <= r:
                raise ValueError(f"alist: row index {i} out of range in column {j + 1}")
            dense[i - 1, j] = 1
    return BitMatrix.from_dense(dense)


def read_alist(path) -> BitMatrix:
    return loads_alist(Path(path).read_text())


def parse_degree_text(text: str) -> np.ndarray:
    lines = [ln for ln in text.splitlines() if ln.strip() and not ln.lstrip().startswith("#")]
    if not lines:
        raise DegreeMatrixParseError("empty degree-matrix text")
    head = lines[0].split()
    try:
        rows, cols = int(head[0]), int(head[1])
    except (IndexError, ValueError):
        raise DegreeMatrixParseError(f"bad header {lines[0]!r}; expected 'rows cols'") from None
    if len(head) != 2 or rows <= 0 or cols <= 0:
        raise DegreeMatrixParseError(f"bad header {lines[0]!r}; expected two positive integers")
    body = lines[1:]
    if len(body) != rows:
        raise DegreeMatrixParseError(f"header declares {rows} rows, found {len(body)}")
    out = np.empty((rows, cols), dtype=np.int64)
    for i, line in enumerate(body):
        cells = line.split()
        if len(cells) != cols:
            raise DegreeMatrixParseError(f"row {i + 1} has {len(cells)} entries, expected {cols}")
        for j, cell in enumerate(cells):
            try:
                v = int(cell)
            except ValueError:
                raise DegreeMatrixParseError(f"cell ({i + 1},{j + 1}): {cell!r} is not an integer") from None
            if v < -1:
                raise DegreeMatrixParseError(f"cell ({i + 1},{j + 1}): entry {v} < -1")
            out[i, j] = v
    return out


def format_degree_text(entries: np.ndarray) -> str:
    rows, cols = entries.shape
    width = max(len(str(int(v))) for v in entries.ravel())
    lines = [f"{rows} {cols}"]
    lines += [" ".join(f"{int(v):>{width}}" for v in row) for row in entries]
    return "\n".join(lines) + "\n"
