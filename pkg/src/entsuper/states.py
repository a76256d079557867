"""Tripartite pure states, ensembles, sampling and the state file format."""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .linalg import DimensionError, as_matrix, partial_trace

NORM_TOL = 1e-10
KRAUS_TOL = 1e-10
ZERO_PROB = 1e-14
FIXTURE_NORM_TOL = 1e-3

_MASK64 = (1 << 64) - 1


class StateError(ValueError):
    pass


class StateFileError(StateError):
    """Malformed state file; ``line`` is 1-based (0 when not line-specific)."""

    def __init__(self, message: str, line: int = 0):
        super().__init__(f"line {line}: {message}" if line else message)
        self.line = line


class CompletenessError(ValueError):
    pass


@dataclass(frozen=True)
class PureTripartiteState:
    dims: tuple[int, int, int]
    amps: np.ndarray = field(repr=False)
    # ratio between the printed and renormalized norms, kept for fixtures
    correction: float = 1.0

    def __post_init__(self):
        dims = tuple(int(d) for d in self.dims)
        if len(dims) != 3 or min(dims) < 1:
            raise DimensionError(f"dims must be three positive integers, got {self.dims}")
        amps = np.array(self.amps, dtype=np.complex128).reshape(-1)
        if amps.size != dims[0] * dims[1] * dims[2]:
            raise DimensionError(f"{amps.size} amplitudes do not match dims {dims}")
        if not np.all(np.isfinite(amps)):
            raise StateError("amplitudes must be finite")
        amps.setflags(write=False)
        object.__setattr__(self, "dims", dims)
        object.__setattr__(self, "amps", amps)

    @property
    def norm_sq(self) -> float:
        return float(np.vdot(self.amps, self.amps).real)

    @property
    def norm(self) -> float:
        return float(np.sqrt(self.norm_sq))

    @property
    def normalized(self) -> bool:
        return abs(self.norm_sq - 1.0) <= NORM_TOL

    def normalize(self) -> "PureTripartiteState":
        n = self.norm
        if n == 0.0:
            raise StateError("cannot normalize the zero vector")
        return PureTripartiteState(self.dims, self.amps / n)

    def overlap(self, other: "PureTripartiteState") -> complex:
        """<self|other>."""
        return complex(np.vdot(self.amps, other.amps))

    def ab_factor(self) -> np.ndarray:
        """(dA*dB) x dC matrix M with Tr_C |x><x| = M M^dag."""
        da, db, dc = self.dims
        return self.amps.reshape(da * db, dc)

    def reduced_ab(self) -> np.ndarray:
        """Tr_C of the (unnormalized) projector."""
        m = self.ab_factor()
        return m @ m.conj().T

    def projector(self) -> np.ndarray:
        return np.outer(self.amps, self.amps.conj())


@dataclass(frozen=True)
class Ensemble:
    """Weighted bipartite pure states; ``states[i]`` is a normalized vector."""

    weights: np.ndarray
    states: np.ndarray

    def __len__(self) -> int:
        return len(self.weights)

    def density(self) -> np.ndarray:
        return np.einsum("i,ij,ik->jk", self.weights, self.states, self.states.conj())

    @classmethod
    def from_subnormalized(cls, vectors: np.ndarray, drop: float = ZERO_PROB) -> "Ensemble":
        """Build from rows sqrt(p_i)|w_i>, dropping outcomes with p_i < ``drop``."""
        vectors = np.asarray(vectors, dtype=np.complex128)
        p = np.sum(np.abs(vectors) ** 2, axis=1)
        keep = p >= drop
        p = p[keep]
        states = vectors[keep] / np.sqrt(p)[:, None]
        return cls(weights=p, states=states)


def _check_same_dims(x: PureTripartiteState, y: PureTripartiteState) -> None:
    if x.dims != y.dims:
        raise DimensionError(f"dimension mismatch: {x.dims} vs {y.dims}")


def superpose(a: complex, phi: PureTripartiteState, b: complex,
              psi: PureTripartiteState) -> PureTripartiteState:
    """a|phi> + b|psi>, deliberately left unnormalized."""
    _check_same_dims(phi, psi)
    for s in (phi, psi):
        if not s.normalized:
            raise StateError("component states must be normalized")
    return PureTripartiteState(phi.dims, a * phi.amps + b * psi.amps)


def superposition_norm_sq(a: complex, b: complex, overlap: complex) -> float:
    """|a|^2 + |b|^2 + 2 Re(conj(a) b <phi|psi>)."""
    return float(abs(a) ** 2 + abs(b) ** 2 + 2.0 * (np.conj(a) * b * overlap).real)


def rng_for(seed: int, *counters: int) -> np.random.Generator:
    """Counter-based stream keyed by (seed, counters...).

    Philox keyed through SeedSequence, so draw k of a sweep depends only on
    (seed, k) and never on evaluation order or worker count.
    """
    key = [int(seed) & _MASK64] + [int(c) & _MASK64 for c in counters]
    return np.random.Generator(np.random.Philox(np.random.SeedSequence(key)))


MODES = ("complex-gaussian", "real-uniform")


def sample_amplitudes(rng: np.random.Generator, dims, mode: str = "complex-gaussian") -> np.ndarray:
    n = int(np.prod(dims))
    if mode == "complex-gaussian":
        v = rng.standard_normal(n) + 1j * rng.standard_normal(n)
    elif mode == "real-uniform":
        v = rng.random(n).astype(np.complex128)
    else:
        raise ValueError(f"unknown sampling mode {mode!r}; expected one of {MODES}")
    return v / np.linalg.norm(v)


def sample_random(dims, seed: int, mode: str = "complex-gaussian", index: int = 0) -> PureTripartiteState:
    """Random normalized state; deterministic in (seed, index, mode)."""
    dims = tuple(int(d) for d in dims)
    return PureTripartiteState(dims, sample_amplitudes(rng_for(seed, index), dims, mode))


_FIXTURES = {
    "phi33": [0.4061, 0.1119, 0.1321, 0.4155,
              0.2188, 0.3618, 0.0422, 0.3351,
              0.2407, 0.1541, 0.1120, 0.0759,
              0.2656, 0.2659, 0.2019, 0.2402],
    "psi34": [0.3868, 0.0250, 0.4408, 0.0716,
              0.1171, 0.1588, 0.1093, 0.0930,
              0.0581, 0.2613, 0.1253, 0.0290,
              0.2439, 0.4571, 0.3642, 0.3189],
}
FIXTURE_NAMES = tuple(_FIXTURES)


def fixture_amplitudes(name: str) -> np.ndarray:
    """The printed 4-decimal amplitudes, before renormalization."""
    try:
        return np.array(_FIXTURES[name], dtype=float)
    except KeyError:
        raise KeyError(f"unknown fixture {name!r}; expected one of {FIXTURE_NAMES}") from None


def load_fixture(name: str) -> PureTripartiteState:
    raw = fixture_amplitudes(name)
    norm_sq = float(raw @ raw)
    if abs(norm_sq - 1.0) > FIXTURE_NORM_TOL:
        raise StateError(f"fixture {name} has printed norm^2 {norm_sq:.6f}")
    n = np.sqrt(norm_sq)
    return PureTripartiteState((2, 2, 4), raw / n, correction=float(n))


def ghz(dc: int = 2) -> PureTripartiteState:
    amps = np.zeros(4 * dc, dtype=np.complex128)
    amps[0] = amps[3 * dc + 1] = 1 / np.sqrt(2)
    return PureTripartiteState((2, 2, dc), amps)


def w_state(dc: int = 2) -> PureTripartiteState:
    """(|001> + |010> + |100>)/sqrt(3) embedded in a dC >= 2 register."""
    amps = np.zeros(4 * dc, dtype=np.complex128)
    for a, b, c in ((0, 0, 1), (0, 1, 0), (1, 0, 0)):
        amps[(a * 2 + b) * dc + c] = 1 / np.sqrt(3)
    return PureTripartiteState((2, 2, dc), amps)


def product_ab(ab_state, c_state) -> PureTripartiteState:
    """|ab> (x) |c> for a 4-vector on AB and any vector on C."""
    ab = np.asarray(ab_state, dtype=np.complex128).reshape(-1)
    c = np.asarray(c_state, dtype=np.complex128).reshape(-1)
    return PureTripartiteState((2, 2, c.size), np.kron(ab, c))


def measure_ensemble(gamma: PureTripartiteState, kraus) -> Ensemble:
    """Ensemble on AB induced by Kraus operators {N_j} acting on party C.

    Outcome (i, j) has sqrt(p_ij)|ups_ij> = <i|N_j|Gamma> / ||Gamma|| with
    <i| running over C's computational basis.
    """
    da, db, dc = gamma.dims
    ops = [as_matrix(k) for k in kraus]
    if not ops:
        raise CompletenessError("empty Kraus set")
    for k in ops:
        if k.shape[1] != dc:
            raise DimensionError(f"Kraus operator shape {k.shape} incompatible with dC={dc}")
    total = sum(k.conj().T @ k for k in ops)
    if np.max(np.abs(total - np.eye(dc))) > KRAUS_TOL:
        raise CompletenessError("Kraus operators do not satisfy sum N^dag N = I")
    nrm = gamma.norm
    if nrm == 0.0:
        raise StateError("state has zero norm")
    m = gamma.ab_factor() / nrm
    # (N_j applied on C)^T : columns of m are C components
    vectors = np.concatenate([(m @ k.T).T for k in ops], axis=0)
    return Ensemble.from_subnormalized(vectors)


# --- state file format -------------------------------------------------------

def format_state(state: PureTripartiteState) -> str:
    lines = ["dims {} {} {}".format(*state.dims)]
    lines += [f"{float(z.real)!r} {float(z.imag)!r}" for z in state.amps]
    return "\n".join(lines) + "\n"


def write_state(path, state: PureTripartiteState) -> None:
    Path(path).write_text(format_state(state), encoding="utf-8")


def parse_state(text: str) -> PureTripartiteState:
    """Parse ``dims dA dB dC`` followed by one ``re im`` pair per line.

    Blank lines and ``#`` comments are ignored.
    """
    dims = None
    amps: list[complex] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if dims is None:
            if parts[0] != "dims" or len(parts) != 4:
                raise StateFileError("expected 'dims dA dB dC'", lineno)
            try:
                dims = tuple(int(p) for p in parts[1:])
            except ValueError:
                raise StateFileError("dimensions must be integers", lineno) from None
            if min(dims) < 1:
                raise StateFileError("dimensions must be positive", lineno)
            continue
        if len(parts) != 2:
            raise StateFileError("expected two numbers 're im'", lineno)
        try:
            re, im = float(parts[0]), float(parts[1])
        except ValueError:
            raise StateFileError(f"cannot parse amplitude {line!r}", lineno) from None
        if not (np.isfinite(re) and np.isfinite(im)):
            raise StateFileError("amplitude is not finite", lineno)
        amps.append(complex(re, im))
    if dims is None:
        raise StateFileError("missing 'dims' header", 1)
    expected = dims[0] * dims[1] * dims[2]
    if len(amps) != expected:
        raise StateFileError(f"found {len(amps)} amplitudes, dims {dims} require {expected}")
    return PureTripartiteState(dims, np.array(amps))


def read_state(path) -> PureTripartiteState:
    return parse_state(Path(path).read_text(encoding="utf-8"))
