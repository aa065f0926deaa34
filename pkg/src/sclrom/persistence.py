"""Bit-exact file formats for snapshot histories and fitted models.

Snapshot binary layout: 8 magic bytes ``SCLROM01``, then n, m, flags as
unsigned 64-bit little-endian integers (flag bit 0 marks purely real
payloads), then the matrix entries in column-major order, each entry two
IEEE-754 binary64 little-endian values (real then imaginary; real-flagged
files store only the real part).

Snapshot CSV layout: first line ``n,m``, then one line per state row with
entries rendered as ``a``, ``a+bi``, or ``a-bi`` using shortest
round-trip decimals; only the ``i`` suffix is accepted when reading.

Model files: a fixed-order UTF-8 manifest, a blank line, then three
snapshot-encoded binary blocks holding V (n x m), Vhat (n x m), and the
coefficients (m x T). Projectors and the shift factor are recomputed on
load from V and Vhat — storing them would permit inconsistent files —
and every rebuilt-factorization invariant is re-validated before the
model is returned.
"""
from __future__ import annotations

import re
import struct

import numpy as np

from .errors import (
    BadMagic,
    DimensionMismatch,
    InvariantViolation,
    IoFailure,
    ParseError,
    SclRomError,
    VersionUnsupported,
)
from .model import SclRomModel
from .ohf import OhfFactorization, SnapshotHistory, derived_factors

SNAPSHOT_MAGIC = b"SCLROM01"
MODEL_FORMAT_VERSION = 1
_MODEL_HEADER_PREFIX = "SCLROM-MODEL v"
_LOAD_TOL = 1e-8

_FLOAT = r"[+-]?(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?"
_ENTRY_RE = re.compile(rf"^({_FLOAT})(?:([+-](?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)i)?$")


def format_float(x: float) -> str:
    """Shortest round-trip decimal, with integral values losing the '.0'."""
    s = repr(float(x))
    if s.endswith(".0"):
        s = s[:-2]
    return s


def format_complex_entry(z: complex) -> str:
    re_part = format_float(z.real)
    if z.imag == 0.0 and not np.signbit(z.imag):
        return re_part
    im = format_float(abs(z.imag))
    sign = "-" if (z.imag < 0.0 or np.signbit(z.imag)) else "+"
    return f"{re_part}{sign}{im}i"


def parse_complex_entry(text: str, line: int, column: int) -> complex:
    match = _ENTRY_RE.match(text.strip())
    if match is None:
        raise ParseError(f"malformed entry {text.strip()!r}", line, column)
    re_part = float(match.group(1))
    im_part = float(match.group(2)) if match.group(2) is not None else 0.0
    return complex(re_part, im_part)


def _payload_is_real(data: np.ndarray) -> bool:
    imag = data.imag
    return bool(np.all(imag == 0.0) and not np.signbit(imag).any())


def _encode_array(data: np.ndarray) -> bytes:
    n, m = data.shape
    real = _payload_is_real(data)
    header = SNAPSHOT_MAGIC + struct.pack("<QQQ", n, m, 1 if real else 0)
    if real:
        payload = np.ascontiguousarray(data.real).astype("<f8").tobytes(order="F")
    else:
        payload = data.astype("<c16", copy=False).tobytes(order="F")
    return header + payload


def _decode_array(buf: bytes, offset: int) -> tuple[np.ndarray, int]:
    if buf[offset : offset + 8] != SNAPSHOT_MAGIC:
        raise BadMagic(f"expected {SNAPSHOT_MAGIC!r} at byte {offset}")
    n, m, flags = struct.unpack_from("<QQQ", buf, offset + 8)
    start = offset + 32
    real = bool(flags & 1)
    expected = n * m * (8 if real else 16)
    available = len(buf) - start
    if available < expected:
        raise DimensionMismatch(
            f"payload truncated: expected {expected} bytes for {n}x{m}, found {available}"
        )
    raw = buf[start : start + expected]
    if real:
        arr = np.frombuffer(raw, dtype="<f8").reshape((n, m), order="F").astype(np.complex128)
    else:
        arr = np.frombuffer(raw, dtype="<c16").reshape((n, m), order="F").astype(np.complex128)
    return np.ascontiguousarray(arr), start + expected


def write_snapshots(history: SnapshotHistory, path, format: str = "binary") -> None:
    """Write a snapshot history as binary (default) or CSV."""
    if format not in ("binary", "csv"):
        raise ValueError(f"unknown format {format!r}")
    try:
        if format == "binary":
            with open(path, "wb") as fh:
                fh.write(_encode_array(history.data))
        else:
            lines = [f"{history.n},{history.m}"]
            for i in range(history.n):
                lines.append(",".join(format_complex_entry(z) for z in history.data[i, :]))
            with open(path, "w", encoding="utf-8") as fh:
                fh.write("\n".join(lines) + "\n")
    except OSError as exc:
        raise IoFailure(f"cannot write {path}: {exc}") from exc


def _read_csv_snapshots(text: str) -> SnapshotHistory:
    lines = text.splitlines()
    if not lines:
        raise ParseError("empty file", 1, 1)
    header = lines[0].split(",")
    if len(header) != 2:
        raise ParseError(f"header must be 'n,m', got {lines[0]!r}", 1, 1)
    try:
        n, m = int(header[0]), int(header[1])
    except ValueError:
        raise ParseError(f"header must be 'n,m', got {lines[0]!r}", 1, 1) from None
    rows = [line for line in lines[1:] if line.strip() != ""]
    if len(rows) != n:
        raise DimensionMismatch(f"declared {n} rows, found {len(rows)}")
    data = np.zeros((n, m), dtype=np.complex128)
    for i, row in enumerate(rows):
        fields = row.split(",")
        if len(fields) != m:
            raise DimensionMismatch(f"row {i + 1} has {len(fields)} entries, declared m={m}")
        for j, fieldtext in enumerate(fields):
            data[i, j] = parse_complex_entry(fieldtext, line=i + 2, column=j + 1)
    return SnapshotHistory(data)


def read_snapshots(path, format: str = "auto") -> SnapshotHistory:
    """Read a snapshot file; the format is sniffed from the magic bytes.

    ``format='binary'`` insists on the binary layout and raises BadMagic
    when the magic bytes are absent; ``'auto'`` falls back to CSV instead.
    """
    if format not in ("auto", "binary", "csv"):
        raise ValueError(f"unknown format {format!r}")
    try:
        with open(path, "rb") as fh:
            blob = fh.read()
    except OSError as exc:
        raise IoFailure(f"cannot read {path}: {exc}") from exc
    is_binary = blob[:8] == SNAPSHOT_MAGIC
    if format == "binary" and not is_binary:
        raise BadMagic(f"{path} does not start with {SNAPSHOT_MAGIC!r}")
    if format in ("auto", "binary") and is_binary:
        data, end = _decode_array(blob, 0)
        if end != len(blob):
            raise DimensionMismatch(
                f"trailing data: expected {end} bytes total, found {len(blob)}"
            )
        return SnapshotHistory(data)
    try:
        text = blob.decode("utf-8")
    except UnicodeDecodeError as exc:
        raise ParseError(f"not valid UTF-8: {exc}", 1, 1) from None
    return _read_csv_snapshots(text)


def write_model(model: SclRomModel, path) -> None:
    """Write a fitted model: manifest, blank line, three binary blocks."""
    ohf = model.ohf
    manifest = "\n".join(
        [
            f"{_MODEL_HEADER_PREFIX}{MODEL_FORMAT_VERSION}",
            f"n: {model.n}",
            f"m: {model.m}",
            f"T: {model.period}",
            f"kappa: {format_float(ohf.kappa.real)} {format_float(ohf.kappa.imag)}",
            f"rho: {format_float(ohf.rho.real)} {format_float(ohf.rho.imag)}",
            f"epsilon_achieved: {format_float(model.epsilon_achieved)}",
            "arrays: V Vhat coeffs",
        ]
    )
    try:
        with open(path, "wb") as fh:
            fh.write(manifest.encode("utf-8") + b"\n\n")
            fh.write(_encode_array(ohf.V))
            fh.write(_encode_array(ohf.Vhat))
            fh.write(_encode_array(model.coeffs))
    except OSError as exc:
        raise IoFailure(f"cannot write {path}: {exc}") from exc


def _manifest_value(lines: list[str], index: int, key: str) -> str:
    if index >= len(lines) or not lines[index].startswith(f"{key}: "):
        raise InvariantViolation(f"manifest line {index + 1} must be '{key}: ...'")
    return lines[index][len(key) + 2 :]


def read_model(path) -> SclRomModel:
    """Read a model file, recomputing and re-validating derived factors.

    Raises VersionUnsupported for unknown format versions and
    InvariantViolation when the stored arrays are inconsistent with the
    manifest or fail the factorization invariants.
    """
    try:
        with open(path, "rb") as fh:
            blob = fh.read()
    except OSError as exc:
        raise IoFailure(f"cannot read {path}: {exc}") from exc
    sep = blob.find(b"\n\n")
    if sep < 0:
        raise InvariantViolation("missing manifest separator")
    try:
        manifest = blob[:sep].decode("utf-8")
    except UnicodeDecodeError:
        raise InvariantViolation("manifest is not valid UTF-8") from None
    lines = manifest.splitlines()
    if not lines or not lines[0].startswith(_MODEL_HEADER_PREFIX):
        raise InvariantViolation(f"first line must start with {_MODEL_HEADER_PREFIX!r}")
    version = lines[0][len(_MODEL_HEADER_PREFIX) :]
    if version != str(MODEL_FORMAT_VERSION):
        raise VersionUnsupported(f"format version {version!r} is not supported")
    try:
        n = int(_manifest_value(lines, 1, "n"))
        m = int(_manifest_value(lines, 2, "m"))
        period = int(_manifest_value(lines, 3, "T"))
        kappa_re, kappa_im = (float(p) for p in _manifest_value(lines, 4, "kappa").split())
        rho_re, rho_im = (float(p) for p in _manifest_value(lines, 5, "rho").split())
        epsilon = float(_manifest_value(lines, 6, "epsilon_achieved"))
    except (ValueError, IndexError) as exc:
        raise InvariantViolation(f"malformed manifest: {exc}") from exc
    if _manifest_value(lines, 7, "arrays") != "V Vhat coeffs":
        raise InvariantViolation("unexpected array list")

    offset = sep + 2
    try:
        V, offset = _decode_array(blob, offset)
        Vhat, offset = _decode_array(blob, offset)
        coeffs, offset = _decode_array(blob, offset)
    except (BadMagic, DimensionMismatch) as exc:
        raise InvariantViolation(f"payload arrays unreadable: {exc}") from exc
    if offset != len(blob):
        raise InvariantViolation("trailing bytes after payload arrays")
    if V.shape != (n, m):
        raise InvariantViolation(f"V has shape {V.shape}, manifest says {(n, m)}")
    if Vhat.shape != (n, m):
        raise InvariantViolation(f"Vhat has shape {Vhat.shape}, manifest says {(n, m)}")
    if coeffs.shape != (m, period):
        raise InvariantViolation(f"coeffs has shape {coeffs.shape}, manifest says {(m, period)}")

    kappa = complex(kappa_re, kappa_im)
    rho = complex(rho_re, rho_im)
    if not (rho.real > 0.0 and abs(rho.imag) <= 1e-10 * abs(rho)):
        raise InvariantViolation(f"rho {rho} is not real and positive")

    try:
        K, T, U_csf = derived_factors(V, Vhat, tol=_LOAD_TOL)
    except SclRomError as exc:
        raise InvariantViolation(f"stored frames are inconsistent: {exc}") from exc
    eye_m = np.eye(m, dtype=np.complex128)
    eye_n = np.eye(n, dtype=np.complex128)
    checks = {
        "Vhat columns orthonormal": float(np.linalg.norm(Vhat.conj().T @ Vhat - eye_m)),
        "V columns orthonormal": float(np.linalg.norm(V.conj().T @ V - eye_m)),
        "shift factor unitary": float(np.linalg.norm(U_csf.conj().T @ U_csf - eye_n)),
        "K idempotent": float(np.linalg.norm(K @ K - K)),
        "T idempotent": float(np.linalg.norm(T @ T - T)),
    }
    for name, residual in checks.items():
        # "not <=" so NaN residuals from corrupt payloads also fail
        if not (residual <= _LOAD_TOL * max(1.0, float(m))):
            raise InvariantViolation(f"{name}: residual {residual:.3e}")

    ohf = OhfFactorization(
        Vhat=Vhat,
        V=V,
        kappa=kappa,
        rho=rho,
        K=K,
        T=T,
        U_csf=U_csf,
        singular_values=None,
        t_values=None,
        W=None,
    )
    return SclRomModel(
        ohf=ohf, coeffs=coeffs, period=period, epsilon_achieved=epsilon, n=n, m=m
    )
