"""Flat parameter snapshots: text header (name, shape) + little-endian f64."""

import io

import numpy as np

MAGIC = "smartchoices-params 1"


def freeze(params):
    """Copy a name->array mapping into read-only float64 arrays."""
    out = {}
    for name, arr in params.items():
        a = np.array(arr, dtype=np.float64, copy=True)
        a.setflags(write=False)
        out[name] = a
    return out


def save_params(path, params):
    with open(path, "wb") as f:
        write_params(f, params)


def write_params(f, params):
    header = io.StringIO()
    header.write(MAGIC + "\n")
    for name, arr in params.items():
        if any(c.isspace() for c in name):
            raise ValueError(f"parameter name {name!r} contains whitespace")
        shape = ",".join(str(d) for d in np.asarray(arr).shape) or "0"
        header.write(f"{name} {shape}\n")
    header.write("\n")
    f.write(header.getvalue().encode("ascii"))
    for arr in params.values():
        f.write(np.ascontiguousarray(arr, dtype="<f8").tobytes())


def load_params(path):
    with open(path, "rb") as f:
        return read_params(f)


def read_params(f):
    line = f.readline().decode("ascii").rstrip("\n")
    if line != MAGIC:
        raise ValueError(f"bad snapshot header {line!r}")
    entries = []
    while True:
        line = f.readline().decode("ascii").rstrip("\n")
        if line == "":
            break
        name, shape_s = line.split(" ")
        shape = tuple(int(d) for d in shape_s.split(",")) if shape_s != "0" else ()
        entries.append((name, shape))
    params = {}
    for name, shape in entries:
        count = int(np.prod(shape)) if shape else 1
        data = np.frombuffer(f.read(count * 8), dtype="<f8", count=count)
        arr = data.astype(np.float64).reshape(shape)
        arr.setflags(write=False)
        params[name] = arr
    return params
