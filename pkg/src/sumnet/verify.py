"""Machine verification that a code computes the sum at every terminal.

``verify_exact`` is complete for the linear codes built here: it composes
each terminal's decoder with the global maps of its input bundles and
compares the result with the all-ones block map [I_m | I_m | ... | I_m].
Equality of those matrices is equivalent to correct decoding of every
message tuple, so a passing report is a proof, not a sample.

``verify_random`` re-checks by simulating topological edge propagation on
pseudorandom messages; it exists as an independent cross-check and demo.
The generator is fixed so reports are reproducible: trial t draws symbols
from a SplitMix64 stream with initial state (seed + t) mod 2^64, mapping
each 64-bit draw to a field symbol by rejection sampling (values at or
above floor(2^64/p)*p are discarded, the rest reduced mod p).

``exhaustive_oracle`` enumerates every message tuple outright; it is the
ground truth used to validate ``verify_exact`` itself on tiny instances.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product
from typing import Optional

import numpy as np

from .codes import NetworkCode
from .network import SumNetwork

_MASK = (1 << 64) - 1


def _splitmix64(state: int):
    state = (state + 0x9E3779B97F4A7C15) & _MASK
    z = state
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK
    return state, z ^ (z >> 31)


def _symbol_stream(seed: int, p: int):
    state = seed & _MASK
    bound = (1 << 64) // p * p
    while True:
        state, z = _splitmix64(state)
        if z < bound:
            yield z % p


@dataclass(frozen=True)
class VerifyReport:
    """Outcome of one verification run.

    ``failures`` holds (terminal, witness) pairs; a witness maps source
    labels to message tuples, with all-zero messages omitted.
    """

    mode: str  # "exact-basis", "randomized", or "exhaustive"
    ok: bool
    failures: tuple[tuple[str, dict[str, tuple[int, ...]]], ...]
    trials_or_dim: int
    seed: Optional[int] = None


def render_report(report: VerifyReport) -> str:
    lines = [
        f"mode {report.mode}",
        f"ok {'yes' if report.ok else 'no'}",
        f"trials_or_dim {report.trials_or_dim}",
        f"seed {'-' if report.seed is None else report.seed}",
        f"failures {len(report.failures)}",
    ]
    for terminal, witness in report.failures:
        parts = [
            f"{label}=({','.join(map(str, vec))})" for label, vec in sorted(witness.items())
        ]
        lines.append(f"  {terminal}: {' '.join(parts) if parts else 'zero message'}")
    return "\n".join(lines) + "\n"


def _source_labels(net: SumNetwork) -> list[str]:
    return [f"s_p{i}" for i in range(1, net.r + 1)] + [
        f"s_B{j}" for j in range(1, net.c + 1)
    ]


def _block_offset(net: SumNetwork, label: str, m: int) -> int:
    if label.startswith("s_p"):
        return (int(label[3:]) - 1) * m
    return (net.r + int(label[3:]) - 1) * m


def _payload_matrix(net: SumNetwork, code: NetworkCode, label: str) -> np.ndarray:
    """Global map of a direct-edge bundle: the source's message, round by round."""
    m, n, alpha = code.m, code.n, code.alpha
    width = m * (net.r + net.c)
    slice_len = m // alpha
    out = np.zeros((alpha * n, width), dtype=np.int64)
    off = _block_offset(net, label, m)
    for ell in range(alpha):
        for u in range(slice_len):
            out[ell * n + u, off + ell * slice_len + u] = 1
    return out


class _BundleCache:
    """Global maps of every bundle a terminal can read, built on demand."""

    def __init__(self, net: SumNetwork, code: NetworkCode):
        self.net = net
        self.code = code
        self._payloads: dict[str, np.ndarray] = {}

    def get(self, input_id: str) -> np.ndarray:
        if input_id.startswith("e"):
            return self.code.encoders[int(input_id[1:]) - 1]
        mat = self._payloads.get(input_id)
        if mat is None:
            mat = _payload_matrix(self.net, self.code, input_id)
            self._payloads[input_id] = mat
        return mat


def _check_dimensions(net: SumNetwork, code: NetworkCode) -> None:
    if (net.r, net.c) != (code.rows, code.cols):
        raise ValueError(
            f"code is for a {code.rows}x{code.cols} matrix, network has "
            f"{net.r}x{net.c}"
        )
    if net.alpha != code.alpha:
        raise ValueError(f"code alpha {code.alpha} != network alpha {net.alpha}")
    if code.m % code.alpha:
        raise ValueError("m must be divisible by alpha")
    width = code.m * (net.r + net.c)
    for i, enc in enumerate(code.encoders, start=1):
        if enc.shape != (code.alpha * code.n, width):
            raise ValueError(f"encoder e{i} has shape {enc.shape}")


def _check_locality(net: SumNetwork, code: NetworkCode) -> None:
    """Structural validity: encoders and decoders read only what reaches them."""
    m = code.m
    a = net.matrix
    for i in range(1, net.r + 1):
        allowed = np.zeros(m * (net.r + net.c), dtype=bool)
        allowed[(i - 1) * m : i * m] = True
        for j in range(1, net.c + 1):
            if a.at(i - 1, j - 1):
                off = (net.r + j - 1) * m
                allowed[off : off + m] = True
        enc = code.encoders[i - 1]
        if np.any(enc[:, ~allowed]):
            raise ValueError(
                f"encoder e{i} uses a message outside the sources feeding it"
            )
    for terminal in net.terminals():
        if terminal not in code.decoders:
            raise ValueError(f"no decoder for terminal {terminal}")
        dec = code.decoders[terminal]
        expected = tuple(net.terminal_inputs(terminal))
        if dec.inputs != expected:
            raise ValueError(
                f"decoder for {terminal} reads {dec.inputs}, expected {expected}"
            )
        if dec.matrix.shape != (m, code.alpha * code.n * len(expected)):
            raise ValueError(f"decoder for {terminal} has shape {dec.matrix.shape}")


def _sum_map(net: SumNetwork, m: int) -> np.ndarray:
    return np.hstack([np.eye(m, dtype=np.int64)] * (net.r + net.c))


def _unit_witness(net: SumNetwork, m: int, col: int) -> dict[str, tuple[int, ...]]:
    labels = _source_labels(net)
    block, comp = divmod(col, m)
    vec = [0] * m
    vec[comp] = 1
    return {labels[block]: tuple(vec)}


def verify_exact(net: SumNetwork, code: NetworkCode) -> VerifyReport:
    """Prove or refute the code by composing decoder and encoder maps.

    ok means every terminal's composite map equals the sum map, i.e. the
    code is correct for all q^(m(r+c)) messages.
    """
    _check_dimensions(net, code)
    _check_locality(net, code)
    p = code.p
    m = code.m
    target = _sum_map(net, m)
    bundles = _BundleCache(net, code)
    failures = []
    for terminal in net.terminals():
        dec = code.decoders[terminal]
        stacked = np.vstack([bundles.get(x) for x in dec.inputs])
        composite = dec.matrix @ stacked % p
        diff = (composite - target) % p
        if np.any(diff):
            col = int(np.flatnonzero(diff.any(axis=0))[0])
            failures.append((terminal, _unit_witness(net, m, col)))
    return VerifyReport(
        mode="exact-basis",
        ok=not failures,
        failures=tuple(failures),
        trials_or_dim=m * (net.r + net.c),
    )


def _decode_all(net: SumNetwork, code: NetworkCode, x: np.ndarray):
    """Propagate one message vector and decode at every terminal.

    Bottleneck values are computed from the masked message vector holding
    only the sources feeding that bottleneck, which asserts structurally
    that edge values depend on nothing else.
    """
    p, m = code.p, code.m
    n, alpha = code.n, code.alpha
    a = net.matrix
    slice_len = m // alpha
    bottleneck_vals = []
    for i in range(1, net.r + 1):
        mask = np.zeros_like(x)
        off = (i - 1) * m
        mask[off : off + m] = x[off : off + m]
        for j in range(1, net.c + 1):
            if a.at(i - 1, j - 1):
                off = (net.r + j - 1) * m
                mask[off : off + m] = x[off : off + m]
        bottleneck_vals.append(code.encoders[i - 1] @ mask % p)
    payload_vals: dict[str, np.ndarray] = {}
    out = {}
    for terminal in net.terminals():
        dec = code.decoders[terminal]
        pieces = []
        for input_id in dec.inputs:
            if input_id.startswith("e"):
                pieces.append(bottleneck_vals[int(input_id[1:]) - 1])
                continue
            val = payload_vals.get(input_id)
            if val is None:
                val = np.zeros(alpha * n, dtype=np.int64)
                off = _block_offset(net, input_id, m)
                for ell in range(alpha):
                    val[ell * n : ell * n + slice_len] = x[
                        off + ell * slice_len : off + (ell + 1) * slice_len
                    ]
                payload_vals[input_id] = val
            pieces.append(val)
        out[terminal] = dec.matrix @ np.concatenate(pieces) % p
    return out


def _true_sum(net: SumNetwork, m: int, x: np.ndarray, p: int) -> np.ndarray:
    return x.reshape(net.r + net.c, m).sum(axis=0) % p


def _assignment(net: SumNetwork, m: int, x: np.ndarray) -> dict[str, tuple[int, ...]]:
    out = {}
    for idx, label in enumerate(_source_labels(net)):
        vec = tuple(int(v) for v in x[idx * m : (idx + 1) * m])
        if any(vec):
            out[label] = vec
    return out


def verify_random(net: SumNetwork, code: NetworkCode, trials: int, seed: int) -> VerifyReport:
    """Simulate the code on seeded pseudorandom messages (reproducible)."""
    _check_dimensions(net, code)
    _check_locality(net, code)
    p, m = code.p, code.m
    dim = m * (net.r + net.c)
    failures = []
    for trial in range(trials):
        stream = _symbol_stream((seed + trial) & _MASK, p)
        x = np.fromiter((next(stream) for _ in range(dim)), dtype=np.int64, count=dim)
        want = _true_sum(net, m, x, p)
        decoded = _decode_all(net, code, x)
        for terminal, got in decoded.items():
            if not np.array_equal(got, want):
                failures.append((terminal, _assignment(net, m, x)))
    return VerifyReport(
        mode="randomized",
        ok=not failures,
        failures=tuple(failures),
        trials_or_dim=trials,
        seed=seed,
    )


def exhaustive_oracle(net: SumNetwork, code: NetworkCode, limit: int) -> VerifyReport:
    """Check every message tuple outright; refuses when q^dim exceeds limit."""
    _check_dimensions(net, code)
    _check_locality(net, code)
    p, m = code.p, code.m
    dim = m * (net.r + net.c)
    total = p**dim
    if total > limit:
        raise ValueError(f"{p}^{dim} = {total} message tuples exceed the limit {limit}")
    failures = []
    for tup in product(range(p), repeat=dim):
        x = np.array(tup, dtype=np.int64)
        want = _true_sum(net, m, x, p)
        decoded = _decode_all(net, code, x)
        for terminal, got in decoded.items():
            if not np.array_equal(got, want):
                failures.append((terminal, _assignment(net, m, x)))
    return VerifyReport(
        mode="exhaustive",
        ok=not failures,
        failures=tuple(failures),
        trials_or_dim=total,
    )
