"""
Text file formats.

All files are UTF-8, comma separated, with '#' comments. Floats are written
with 17 significant digits so a write-then-read reproduces them exactly;
complex numbers are two consecutive fields (re, im).

Potential file::

    n,points
    x, re(Q11), im(Q11), re(Q12), im(Q12), …      (points rows, row-major)

Boundary file::

    n
    re(U11), im(U11), …, re(U1n), im(U1n)         (n rows)

Scattering-data file::

    [meta]
    n,<n>
    [kgrid]
    <count>
    k                                             (count rows)
    [S]
    re, im, … (2n² fields)                        (one row per k)
    [uhat]
    n rows of 2n fields
    [boundstates]
    <count>
    kappa                                         (then n rows of 2n fields of C)
"""

from io import StringIO
from pathlib import Path
from typing import Any, Iterable, Union

import numpy as np
import pandas as pd

from scatter_lens.direct.bound_states import BoundState
from scatter_lens.direct.scattering import ScatteringData
from scatter_lens.exceptions import ParseError
from scatter_lens.spectral.grids import KGrid
from scatter_lens.spectral.potential import PotentialSpec, sampled_potential
from scatter_lens.utils.linalg import hermitian_part, null_projector
from scatter_lens.utils.logger import get_logger

logger = get_logger(__name__)

FLOAT_FORMAT = "%.17g"
SECTIONS = ("meta", "kgrid", "S", "uhat", "boundstates")


def _fmt(value: float) -> str:
    return FLOAT_FORMAT % value


def _interleave(z: np.ndarray) -> np.ndarray:
    """Complex (..., m) → real (..., 2m) as re, im pairs."""
    z = np.asarray(z, dtype=complex)
    out = np.empty(z.shape[:-1] + (2 * z.shape[-1],))
    out[..., 0::2] = z.real
    out[..., 1::2] = z.imag
    return out


def _deinterleave(a: np.ndarray) -> np.ndarray:
    return a[..., 0::2] + 1j * a[..., 1::2]


def _content_lines(text: str) -> list[str]:
    lines = []
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if line:
            lines.append(line)
    return lines


def _table(lines: list[str], columns: int, what: str) -> np.ndarray:
    """Parse comma-separated rows into a float array with exactly ``columns`` columns."""
    if not lines:
        return np.empty((0, columns))
    try:
        df = pd.read_csv(
            StringIO("\n".join(lines)),
            header=None,
            float_precision="round_trip",
            skipinitialspace=True,
        )
    except (pd.errors.ParserError, ValueError) as exc:
        raise ParseError(f"{what}: {exc}") from exc
    if df.shape[1] != columns:
        raise ParseError(f"{what}: expected {columns} fields per row, found {df.shape[1]}")
    try:
        values = df.to_numpy(dtype=float)
    except ValueError as exc:
        raise ParseError(f"{what}: non-numeric field") from exc
    if not np.all(np.isfinite(values)):
        raise ParseError(f"{what}: missing or non-finite value")
    return values


def _ints(line: str, count: int, what: str) -> list[int]:
    fields = [f.strip() for f in line.split(",")]
    try:
        values = [int(f) for f in fields]
    except ValueError as exc:
        raise ParseError(f"{what}: expected integers, got '{line}'") from exc
    if len(values) != count:
        raise ParseError(f"{what}: expected {count} integer(s), got '{line}'")
    return values


def _read_text(path: Union[str, Path]) -> str:
    try:
        return Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc}") from exc
    except UnicodeDecodeError as exc:
        raise ParseError(f"{path} is not UTF-8 text: {exc.reason} at byte {exc.start}") from exc


def _write_rows(buf: StringIO, rows: np.ndarray) -> None:
    if rows.size:
        pd.DataFrame(np.atleast_2d(rows)).to_csv(
            buf, header=False, index=False, float_format=FLOAT_FORMAT, lineterminator="\n"
        )


# potential


def read_potential_samples(path: Union[str, Path]) -> tuple[np.ndarray, np.ndarray]:
    """(x, Q) with Q of shape (points, n, n).

    Raises:
        ParseError: malformed header, row count or fields
    """
    lines = _content_lines(_read_text(path))
    if not lines:
        raise ParseError(f"{path}: empty potential file")
    n, points = _ints(lines[0], 2, f"{path} header")
    if n < 1 or points < 2:
        raise ParseError(f"{path}: invalid header n={n}, points={points}")
    data = _table(lines[1:], 1 + 2 * n * n, str(path))
    if data.shape[0] != points:
        raise ParseError(f"{path}: header announces {points} rows, found {data.shape[0]}")
    x = data[:, 0]
    q = _deinterleave(data[:, 1:]).reshape(points, n, n)
    return x, q


def read_potential(path: Union[str, Path]) -> PotentialSpec:
    """Sampled potential from a potential file.

    Raises:
        ParseError: malformed file
        ValidationError: grid not ascending
    """
    x, q = read_potential_samples(path)
    p = sampled_potential(x, q)
    logger.debug(f"read {p.n}×{p.n} potential with {x.size} samples from {path}")
    return p


def write_potential(path: Union[str, Path], x, q) -> None:
    x = np.asarray(x, dtype=float)
    q = np.asarray(q, dtype=complex)
    if q.ndim == 1:
        q = q[:, None, None]
    points, n, _ = q.shape
    buf = StringIO()
    buf.write(f"{n},{points}\n")
    _write_rows(buf, np.column_stack([x, _interleave(q.reshape(points, n * n))]))
    Path(path).write_text(buf.getvalue(), encoding="utf-8")


# boundary


def read_boundary_matrix(path: Union[str, Path]) -> np.ndarray:
    """U from a boundary file (no unitarity check).

    Raises:
        ParseError: malformed file
    """
    lines = _content_lines(_read_text(path))
    if not lines:
        raise ParseError(f"{path}: empty boundary file")
    (n,) = _ints(lines[0], 1, f"{path} header")
    if n < 1:
        raise ParseError(f"{path}: invalid size {n}")
    data = _table(lines[1:], 2 * n, str(path))
    if data.shape[0] != n:
        raise ParseError(f"{path}: expected {n} rows, found {data.shape[0]}")
    return _deinterleave(data)


def write_boundary(path: Union[str, Path], u) -> None:
    u = np.atleast_2d(np.asarray(u, dtype=complex))
    buf = StringIO()
    buf.write(f"{u.shape[0]}\n")
    _write_rows(buf, _interleave(u))
    Path(path).write_text(buf.getvalue(), encoding="utf-8")


# scattering data


def _split_sections(lines: list[str], path) -> dict[str, list[str]]:
    sections: dict[str, list[str]] = {}
    current = None
    for line in lines:
        if line.startswith("[") and line.endswith("]"):
            current = line[1:-1].strip()
            if current not in SECTIONS:
                raise ParseError(f"{path}: unknown section [{current}]")
            if current in sections:
                raise ParseError(f"{path}: duplicate section [{current}]")
            sections[current] = []
        elif current is None:
            raise ParseError(f"{path}: data before the first section")
        else:
            sections[current].append(line)
    missing = [s for s in SECTIONS if s not in sections]
    if missing:
        raise ParseError(f"{path}: missing section(s) {missing}")
    return sections


def _bound_state_from_c(kappa: float, c: np.ndarray) -> BoundState:
    c = hermitian_part(c)
    # P projects onto the range of C
    projector, dim, _ = null_projector(c, 1e-10)
    P = np.eye(c.shape[0]) - projector
    return BoundState(kappa=kappa, P=P, multiplicity=c.shape[0] - dim, C=c)


def read_scattering_data(path: Union[str, Path]) -> ScatteringData:
    """
    Raises:
        ParseError: malformed file
        ValidationError: k-grid or shapes invalid
    """
    sections = _split_sections(_content_lines(_read_text(path)), path)

    meta = sections["meta"]
    if len(meta) != 1 or not meta[0].startswith("n,"):
        raise ParseError(f"{path}: [meta] must hold one line 'n,<n>'")
    n = _ints(meta[0].split(",", 1)[1], 1, f"{path} [meta]")[0]

    kg = sections["kgrid"]
    if not kg:
        raise ParseError(f"{path}: empty [kgrid]")
    (count,) = _ints(kg[0], 1, f"{path} [kgrid] count")
    k = _table(kg[1:], 1, f"{path} [kgrid]")[:, 0]
    if k.size != count:
        raise ParseError(f"{path}: [kgrid] announces {count} points, found {k.size}")

    s_rows = _table(sections["S"], 2 * n * n, f"{path} [S]")
    if s_rows.shape[0] != count:
        raise ParseError(f"{path}: [S] has {s_rows.shape[0]} rows for {count} k-points")
    S = _deinterleave(s_rows).reshape(count, n, n)

    uhat_rows = _table(sections["uhat"], 2 * n, f"{path} [uhat]")
    if uhat_rows.shape[0] != n:
        raise ParseError(f"{path}: [uhat] needs {n} rows")
    uhat = _deinterleave(uhat_rows)

    bs_lines = sections["boundstates"]
    if not bs_lines:
        raise ParseError(f"{path}: empty [boundstates]")
    (n_states,) = _ints(bs_lines[0], 1, f"{path} [boundstates] count")
    body = bs_lines[1:]
    if len(body) != n_states * (n + 1):
        raise ParseError(f"{path}: [boundstates] expects {n_states * (n + 1)} lines, found {len(body)}")
    states = []
    for s in range(n_states):
        chunk = body[s * (n + 1) : (s + 1) * (n + 1)]
        kappa = _table(chunk[:1], 1, f"{path} κ")[0, 0]
        c = _deinterleave(_table(chunk[1:], 2 * n, f"{path} C"))
        states.append(_bound_state_from_c(float(kappa), c))

    sd = ScatteringData(kgrid=KGrid(k), S=S, Uhat=uhat, bound_states=states)
    logger.debug(f"read scattering data: n={n}, {count} k-points, {n_states} bound state(s)")
    return sd


def write_scattering_data(path: Union[str, Path], sd: ScatteringData) -> None:
    n = sd.n
    buf = StringIO()
    buf.write(f"[meta]\nn,{n}\n[kgrid]\n{sd.kgrid.size}\n")
    _write_rows(buf, sd.kgrid.k_values[:, None])
    buf.write("[S]\n")
    _write_rows(buf, _interleave(sd.S.reshape(sd.kgrid.size, n * n)))
    buf.write("[uhat]\n")
    _write_rows(buf, _interleave(sd.Uhat))
    buf.write(f"[boundstates]\n{len(sd.bound_states)}\n")
    for bs in sd.bound_states:
        buf.write(f"{_fmt(bs.kappa)}\n")
        _write_rows(buf, _interleave(bs.C))
    Path(path).write_text(buf.getvalue(), encoding="utf-8")


# reports


def write_report(path: Union[str, Path], items: Union[dict[str, Any], Iterable[tuple[str, Any]]]) -> None:
    """key,value CSV; floats with 17 significant digits."""
    pairs = list(items.items()) if isinstance(items, dict) else list(items)
    values = [_fmt(v) if isinstance(v, float) else str(v) for _, v in pairs]
    df = pd.DataFrame({"key": [k for k, _ in pairs], "value": values})
    df.to_csv(path, index=False, lineterminator="\n")


def read_report(path: Union[str, Path]) -> dict[str, str]:
    try:
        df = pd.read_csv(path, dtype=str, keep_default_na=False)
    except (OSError, pd.errors.ParserError) as exc:
        raise ParseError(f"cannot read report {path}: {exc}") from exc
    if list(df.columns) != ["key", "value"]:
        raise ParseError(f"{path}: report needs columns key,value")
    return dict(zip(df["key"], df["value"]))


def write_potential_comparison(path: Union[str, Path], x, q_in, q_rec) -> None:
    """CSV of x with input and recovered entries, one column per re/im part."""
    q_in = np.asarray(q_in, dtype=complex)
    q_rec = np.asarray(q_rec, dtype=complex)
    n = q_in.shape[-1]
    columns: dict[str, np.ndarray] = {"x": np.asarray(x, dtype=float)}
    for label, q in (("in", q_in), ("rec", q_rec)):
        for a in range(n):
            for b in range(n):
                columns[f"re_{label}_{a + 1}{b + 1}"] = q[:, a, b].real
                columns[f"im_{label}_{a + 1}{b + 1}"] = q[:, a, b].imag
    pd.DataFrame(columns).to_csv(path, index=False, float_format=FLOAT_FORMAT, lineterminator="\n")

