"""Character-sum bias analysis for key sets over Z_N.

A key set K is a multiset of residues modulo N.  Its discrete Fourier
component at shift l is

    f_K(l) = sum_{k in K} exp(i * 2*pi*k*l / N)

and the two bias measures are the worst normalized component over all
nonzero shifts:

    lambda(K) = max_{l != 0} |f_K(l)| / |K|
    delta(K)  = max_{l != 0} |Re f_K(l)| / |K|

delta(K) bounds the inner product between the hash states of any two
distinct messages, which is what makes a low-bias K a usable hash
parameter.  Everything here is evaluated by direct trigonometric
summation; an FFT-based path exists for cross-validation.

A note on floors: at shift l = N/2 the character values are (-1)^k, so
Re f_K(N/2) is an integer with the same parity as d.  A key set of odd
cardinality therefore always has delta(K) >= 1/d.  The bundled table
fixtures all have odd d and declare a different, smaller statistic on
their epsilon line: padded_delta_squared, the squared worst real
component normalized by the padded register capacity 2^ceil(log2 d)
instead of d.  See that function's docstring.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path
from typing import NamedTuple

import numpy as np

__all__ = [
    "KeySet",
    "BiasProfile",
    "KeySetFormatError",
    "fourier_component",
    "fourier_components",
    "bias_profile",
    "padded_branch_count",
    "padded_delta_squared",
    "hash_inner_product",
    "load_keyset",
    "save_keyset",
]


class KeySetFormatError(ValueError):
    """A key-set file does not follow the text format."""


@dataclass(frozen=True)
class KeySet:
    """Multiset of residues mod N; repeats are kept and counted.

    Keys are stored exactly as given (order preserved) so files
    round-trip byte-exactly.
    """

    modulus: int
    keys: tuple[int, ...]

    def __post_init__(self) -> None:
        if self.modulus < 2:
            raise ValueError(f"modulus must be >= 2, got {self.modulus}")
        object.__setattr__(self, "keys", tuple(int(k) for k in self.keys))
        if len(self.keys) < 1:
            raise ValueError("key set must contain at least one key")
        for k in self.keys:
            if not 0 <= k < self.modulus:
                raise ValueError(
                    f"key {k} out of range [0, {self.modulus - 1}]"
                )

    @property
    def d(self) -> int:
        """Cardinality, counting repeats."""
        return len(self.keys)

    def key_array(self) -> np.ndarray:
        return np.asarray(self.keys, dtype=np.int64)


@dataclass(frozen=True)
class BiasProfile:
    """Worst-case normalized character sums of a key set."""

    modulus: int
    d: int
    delta: float
    lambda_: float
    worst_shift_delta: int
    worst_shift_lambda: int


def _angle_index(keys: np.ndarray, shift: int | np.ndarray, modulus: int) -> np.ndarray:
    # Reduce k*l mod N before scaling by 2*pi/N: k*l can reach ~2^40,
    # where cos() of the unreduced angle loses precision.
    return (keys * shift) % modulus


def fourier_component(keyset: KeySet, shift: int) -> complex:
    """f_K(l): the character sum of the key multiset at a given shift."""
    n = keyset.modulus
    if not 0 <= shift < n:
        raise ValueError(f"shift must be in [0, {n - 1}], got {shift}")
    angles = 2.0 * np.pi * _angle_index(keyset.key_array(), int(shift), n) / n
    return complex(np.cos(angles).sum(), np.sin(angles).sum())


def _component_tables(keyset: KeySet) -> tuple[np.ndarray, np.ndarray]:
    """Re f_K(l) and Im f_K(l) for every shift l in [0, N)."""
    n = keyset.modulus
    shifts = np.arange(n, dtype=np.int64)
    # cos/sin of 2*pi*j/N for j in [0, N); each key's terms are gathers
    # into these tables, which is exactly the reduced-angle evaluation.
    cos_table = np.cos(2.0 * np.pi * shifts / n)
    sin_table = np.sin(2.0 * np.pi * shifts / n)
    re = np.zeros(n)
    im = np.zeros(n)
    for k in keyset.keys:
        idx = _angle_index(shifts, int(k), n)
        re += cos_table[idx]
        im += sin_table[idx]
    return re, im


def _component_tables_fft(keyset: KeySet) -> tuple[np.ndarray, np.ndarray]:
    """FFT path over the multiplicity vector; cross-check for the direct scan."""
    n = keyset.modulus
    mult = np.bincount(keyset.key_array(), minlength=n).astype(np.float64)
    # ifft uses the e^{+2*pi*i*k*l/N} kernel with a 1/N factor.
    f = n * np.fft.ifft(mult)
    return f.real.copy(), f.imag.copy()


def _tables(keyset: KeySet, method: str) -> tuple[np.ndarray, np.ndarray]:
    if method == "direct":
        return _component_tables(keyset)
    if method == "fft":
        return _component_tables_fft(keyset)
    raise ValueError(f"unknown method {method!r}")


def fourier_components(keyset: KeySet, method: str = "direct") -> np.ndarray:
    """f_K(l) for every shift l in [0, N), as one complex vector."""
    re, im = _tables(keyset, method)
    return re + 1j * im


def bias_profile(keyset: KeySet, method: str = "direct") -> BiasProfile:
    """Scan every nonzero shift for the worst normalized character sum.

    Ties resolve to the smallest shift (argmax returns the first
    maximum of an ascending scan).
    """
    re, im = _tables(keyset, method)
    d = keyset.d
    re_bias = np.abs(re[1:]) / d
    mag_bias = np.hypot(re[1:], im[1:]) / d
    i_delta = int(np.argmax(re_bias))
    i_lambda = int(np.argmax(mag_bias))
    return BiasProfile(
        modulus=keyset.modulus,
        d=d,
        delta=float(re_bias[i_delta]),
        lambda_=float(mag_bias[i_lambda]),
        worst_shift_delta=i_delta + 1,
        worst_shift_lambda=i_lambda + 1,
    )


def padded_branch_count(d: int) -> int:
    """Smallest power of two >= d: the index-register capacity for d branches."""
    if d < 1:
        raise ValueError(f"need at least one branch, got {d}")
    return 1 << (d - 1).bit_length()


def padded_delta_squared(keyset: KeySet, method: str = "direct") -> float:
    """(max_{l != 0} |Re f_K(l)| / 2^ceil(log2 d))^2.

    The squared worst-case hash-state overlap under the padded-register
    amplitude convention: amplitudes laid out as 1/sqrt(D) over a
    register of D = 2^ceil(log2 d) index branches with only the d key
    branches populated.  Equals (delta(K) * d / D)^2.

    This is the statistic the bundled key-set tables declare as their
    epsilon bound.  Unlike delta(K), it has no 1/d parity floor for odd
    d, because the squared D-normalized sum at l = N/2 can be as small
    as (1/D)^2.
    """
    profile = bias_profile(keyset, method=method)
    d = keyset.d
    return (profile.delta * d / padded_branch_count(d)) ** 2


def hash_inner_product(keyset: KeySet, m1: int, m2: int) -> float:
    """(1/d) * sum_i cos(2*pi*k_i*(m1 - m2)/N), the hash-state overlap.

    Depends only on (m1 - m2) mod N and equals Re f_K(m1 - m2)/d, so it
    is bounded by delta(K) whenever m1 != m2 (mod N).
    """
    n = keyset.modulus
    for m in (m1, m2):
        if not 0 <= m < n:
            raise ValueError(f"message must be in [0, {n - 1}], got {m}")
    diff = (m1 - m2) % n
    angles = 2.0 * np.pi * _angle_index(keyset.key_array(), diff, n) / n
    return float(np.cos(angles).sum() / keyset.d)


class KeySetFile(NamedTuple):
    """A parsed key-set file: the set plus its declared bias bound, if any."""

    keyset: KeySet
    declared_epsilon: float | None


def load_keyset(path: str | Path) -> KeySetFile:
    """Parse the key-set text format.

    Layout: ``N <modulus>``, ``d <count>``, ``epsilon <bound-or-dash>``,
    then one key per line.  Whitespace-tolerant; lines starting with
    ``#`` are comments.
    """
    path = Path(path)
    header: list[tuple[int, str, str]] = []
    key_lines: list[tuple[int, str]] = []
    for lineno, raw in enumerate(path.read_text().splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        fields = line.split()
        if len(header) < 3:
            if len(fields) != 2:
                raise KeySetFormatError(
                    f"{path}:{lineno}: expected '<name> <value>' header, got {raw!r}"
                )
            header.append((lineno, fields[0], fields[1]))
        else:
            if len(fields) != 1:
                raise KeySetFormatError(
                    f"{path}:{lineno}: expected one key per line, got {raw!r}"
                )
            key_lines.append((lineno, fields[0]))

    if len(header) < 3:
        raise KeySetFormatError(f"{path}: truncated header (need N, d, epsilon lines)")
    expected = ("N", "d", "epsilon")
    values: dict[str, str] = {}
    for (lineno, name, value), want in zip(header, expected):
        if name != want:
            raise KeySetFormatError(
                f"{path}:{lineno}: expected {want!r} header line, got {name!r}"
            )
        values[name] = value

    def parse_int(name: str, text: str, lineno: int) -> int:
        try:
            return int(text)
        except ValueError:
            raise KeySetFormatError(
                f"{path}:{lineno}: {name} must be an integer, got {text!r}"
            ) from None

    modulus = parse_int("N", values["N"], header[0][0])
    count = parse_int("d", values["d"], header[1][0])
    if values["epsilon"] == "-":
        epsilon: float | None = None
    else:
        try:
            epsilon = float(values["epsilon"])
        except ValueError:
            raise KeySetFormatError(
                f"{path}:{header[2][0]}: epsilon must be a number or '-', "
                f"got {values['epsilon']!r}"
            ) from None

    keys = []
    for lineno, text in key_lines:
        k = parse_int("key", text, lineno)
        if not 0 <= k < modulus:
            raise KeySetFormatError(
                f"{path}:{lineno}: key {k} out of range [0, {modulus - 1}]"
            )
        keys.append(k)
    if len(keys) != count:
        raise KeySetFormatError(
            f"{path}: header declares d={count} but file lists {len(keys)} keys"
        )
    try:
        keyset = KeySet(modulus=modulus, keys=tuple(keys))
    except ValueError as exc:
        raise KeySetFormatError(f"{path}: {exc}") from None
    return KeySetFile(keyset, epsilon)


def save_keyset(
    keyset: KeySet, path: str | Path, declared_epsilon: float | None = None
) -> None:
    """Write the key-set text format; keys keep their stored order."""
    eps_text = "-" if declared_epsilon is None else repr(float(declared_epsilon))
    lines = [f"N {keyset.modulus}", f"d {keyset.d}", f"epsilon {eps_text}"]
    lines.extend(str(k) for k in keyset.keys)
    Path(path).write_text("\n".join(lines) + "\n")
