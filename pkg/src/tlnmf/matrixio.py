"""On-disk formats: the TLNMF1 binary matrix container and the CSV schemas.

The matrix container is deliberately library-neutral: 6 magic bytes
"TLNMF1", then rows and cols as little-endian signed 64-bit integers,
then the row-major float64 payload, also little-endian.
"""

import csv
import struct

import numpy as np

from .errors import CorruptHeader, DimensionMismatch

MAGIC = b"TLNMF1"

# Pinned CSV header rows; golden tests and the plotting frontend rely on
# these staying put.
CONVERGENCE_HEADER = ("iteration", "objective", "elapsed_s")
EXPERIMENT_HEADER = (
    "iteration",
    "objective",
    "fit",
    "penalty",
    "elapsed_s",
    "step_sizes",
    "grad_norm",
)
ENERGY_HEADER = ("atom_index", "energy", "cumulative")


def write_matrix(path, a):
    """Write a 2-D float64 array in the TLNMF1 container."""
    a = np.asarray(a, dtype=np.float64)
    if a.ndim != 2:
        raise DimensionMismatch(f"only 2-D matrices are stored, got shape {a.shape}")
    with open(path, "wb") as fh:
        fh.write(MAGIC)
        fh.write(struct.pack("<qq", a.shape[0], a.shape[1]))
        fh.write(np.ascontiguousarray(a).astype("<f8").tobytes())


def read_matrix(path):
    """Read a TLNMF1 container back into a float64 array."""
    with open(path, "rb") as fh:
        blob = fh.read()
    if len(blob) < len(MAGIC) + 16 or blob[: len(MAGIC)] != MAGIC:
        raise CorruptHeader(f"{path} lacks the TLNMF1 header")
    rows, cols = struct.unpack_from("<qq", blob, len(MAGIC))
    if rows < 0 or cols < 0:
        raise CorruptHeader(f"{path} declares negative dimensions {rows}x{cols}")
    payload = blob[len(MAGIC) + 16:]
    expected = rows * cols * 8
    if len(payload) != expected:
        raise CorruptHeader(
            f"{path} payload is {len(payload)} bytes, expected {expected}"
        )
    return np.frombuffer(payload, dtype="<f8").reshape(rows, cols).copy()


def write_csv(path, header, rows):
    """Comma-separated UTF-8 with a header row; floats written with repr."""
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(header)
        for row in rows:
            writer.writerow([_fmt(v) for v in row])


def _fmt(v):
    if isinstance(v, float):
        return repr(v)
    return v


def write_convergence_csv(path, log):
    write_csv(
        path,
        CONVERGENCE_HEADER,
        zip(log.iterations, log.objective, log.elapsed_s),
    )


def write_experiment_csv(path, log):
    rows = []
    for i in range(len(log)):
        rows.append(
            (
                log.iterations[i],
                log.objective[i],
                log.fit[i],
                log.penalty[i],
                log.elapsed_s[i],
                ";".join(repr(float(s)) for s in log.step_sizes[i]),
                log.grad_norm[i],
            )
        )
    write_csv(path, EXPERIMENT_HEADER, rows)


def write_energy_csv(path, profile):
    rows = []
    for rank, atom in enumerate(profile.order):
        rows.append(
            (
                int(atom),
                float(profile.energies[atom]),
                float(profile.sorted_cumulative[rank]),
            )
        )
    write_csv(path, ENERGY_HEADER, rows)


def write_similarity_csv(path, report):
    k = report.selected_count
    header = tuple(f"col_{j}" for j in range(k))
    write_csv(path, header, (map(float, row) for row in report.permuted_abs))


def write_permutation_csv(path, report):
    write_csv(
        path,
        ("position", "source_row"),
        ((i, int(p)) for i, p in enumerate(report.permutation)),
    )
