"""CHQ1 field dumps.

Layout: one UTF-8 JSON header line
``{"format":"CHQ1","dim":N,"n":n,"L":L,"dtype":"f64le","fields":[...]}`` ending
in ``\\n``, then each field's row-major little-endian float64 payload in the
order listed.
"""
import json
import os
import tempfile

import numpy as np

from .grid import Field, GridSpec, same_grid

FORMAT = "CHQ1"
_DTYPE = np.dtype("<f8")


def header(grid, names):
    return json.dumps(
        {"format": FORMAT, "dim": grid.dim, "n": grid.n, "L": grid.L, "dtype": "f64le", "fields": list(names)},
        separators=(",", ":"),
    )


def dumps(fields):
    """Serialize ``{name: Field}`` (insertion order kept) to bytes."""
    names = list(fields)
    if not names:
        raise ValueError("nothing to dump")
    grid = same_grid(*fields.values())
    parts = [(header(grid, names) + "\n").encode("utf-8")]
    for name in names:
        parts.append(np.ascontiguousarray(fields[name].values, dtype=_DTYPE).tobytes(order="C"))
    return b"".join(parts)


def loads(data):
    nl = data.index(b"\n")
    meta = json.loads(data[:nl].decode("utf-8"))
    if meta.get("format") != FORMAT or meta.get("dtype") != "f64le":
        raise ValueError(f"not a CHQ1 f64le dump: {meta}")
    grid = GridSpec(int(meta["dim"]), int(meta["n"]), float(meta["L"]))
    payload = data[nl + 1:]
    names = meta["fields"]
    nbytes = grid.size * _DTYPE.itemsize
    if len(payload) != nbytes * len(names):
        raise ValueError(f"payload has {len(payload)} bytes, expected {nbytes * len(names)}")
    out = {}
    for i, name in enumerate(names):
        vals = np.frombuffer(payload, dtype=_DTYPE, count=grid.size, offset=i * nbytes)
        out[name] = Field(grid, vals.astype(np.float64).reshape(grid.shape))
    return grid, out


def atomic_write(path, data):
    """Write bytes or text via a temp file in the target directory, then rename."""
    path = os.fspath(path)
    d = os.path.dirname(os.path.abspath(path))
    os.makedirs(d, exist_ok=True)
    mode = "wb" if isinstance(data, (bytes, bytearray)) else "w"
    fd, tmp = tempfile.mkstemp(dir=d, prefix=".tmp-", suffix=os.path.basename(path))
    try:
        with os.fdopen(fd, mode) as fh:
            fh.write(data)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def save(path, fields):
    atomic_write(path, dumps(fields))


def load(path):
    with open(path, "rb") as fh:
        return loads(fh.read())
