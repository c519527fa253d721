"""Frequency-domain circuit solving via complex-valued modified nodal analysis.

Capacitors and inductors enter as complex admittances jwC and 1/(jwL);
each voltage source contributes one branch-current unknown and one
constraint row (standard MNA). The dense system is solved per frequency
with partial-pivoting LU; circuits here stay small (~20 nodes), so no
sparsity machinery. A condition estimate above 1e12 attaches a warning to
the result rather than failing.

Netlists and results are immutable; every frequency point is an
independent solve, so sweeps may be evaluated concurrently without shared
state. The implementation here runs them in order, which also fixes the
output ordering.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field

import numpy as np

from .netlist import Element, Netlist

__all__ = [
    "ACSolution",
    "FrequencyGrid",
    "SingularCircuitError",
    "SweepResult",
    "solve_ac",
    "transfer",
    "sweep_csv",
]

COND_WARN_THRESHOLD = 1e12


class SingularCircuitError(ArithmeticError):
    """The MNA system is singular; ``nodes`` lists the implicated node set."""

    def __init__(self, message: str, nodes: tuple[int, ...] = ()):
        self.nodes = nodes
        if nodes:
            message = f"{message} (offending nodes: {list(nodes)})"
        super().__init__(message)


class ACSolution(dict):
    """Complex node-voltage map (node id -> phasor) for one frequency.

    Also exposes the source branch currents and any numerical warnings
    raised during the solve.
    """

    def __init__(self, voltages: dict[int, complex], source_currents: dict[str, complex],
                 warnings: tuple[str, ...] = ()):
        super().__init__(voltages)
        self.source_currents = dict(source_currents)
        self.warnings = tuple(warnings)


def _element_admittance(element: Element, omega: float) -> complex:
    if element.kind == "R":
        return 1.0 / element.value
    if element.kind == "C":
        return 1j * omega * element.value
    if element.kind == "L":
        return 1.0 / (1j * omega * element.value)
    raise ValueError(f"element {element.label} has no admittance stamp")


def _assemble(netlist: Netlist, f: float):
    nonground = sorted(n for n in netlist.nodes() if n != netlist.ground)
    index = {n: i for i, n in enumerate(nonground)}
    sources = netlist.sources()
    n, m = len(nonground), len(sources)
    a = np.zeros((n + m, n + m), dtype=complex)
    z = np.zeros(n + m, dtype=complex)
    omega = 2.0 * math.pi * f
    for element in netlist.elements:
        if element.kind == "V":
            continue
        y = _element_admittance(element, omega)
        i = index.get(element.nodes[0], -1)
        j = index.get(element.nodes[1], -1)
        if i >= 0:
            a[i, i] += y
        if j >= 0:
            a[j, j] += y
        if i >= 0 and j >= 0:
            a[i, j] -= y
            a[j, i] -= y
    for k, src in enumerate(sources):
        row = n + k
        i = index.get(src.nodes[0], -1)
        j = index.get(src.nodes[1], -1)
        if i >= 0:
            a[i, row] += 1.0
            a[row, i] += 1.0
        if j >= 0:
            a[j, row] -= 1.0
            a[row, j] -= 1.0
        z[row] = src.value
    return a, z, index, sources


def _singular_nodes(a: np.ndarray, index: dict[int, int]) -> tuple[int, ...]:
    # Smallest right singular vector localizes the undetermined voltages.
    _, s, vh = np.linalg.svd(a)
    null = np.abs(vh[-1])
    n = len(index)
    peak = null[:n].max() if n else 0.0
    if peak == 0.0:
        return ()
    rev = {i: node for node, i in index.items()}
    return tuple(sorted(rev[i] for i in range(n) if null[i] > 0.1 * peak))


def solve_ac(netlist: Netlist, f: float) -> ACSolution:
    """Solve node voltages at a single frequency.

    Returns an :class:`ACSolution` mapping every node id (ground included)
    to its complex voltage. KCL holds at every non-ground node to within
    1e-9 of the largest branch current.

    Raises
    ------
    ValueError
        If ``f`` is not positive.
    SingularCircuitError
        If the system has no unique solution; the offending node set is
        reported.
    """
    if f <= 0:
        raise ValueError(f"frequency must be > 0, got {f}")
    a, z, index, sources = _assemble(netlist, f)
    warnings: tuple[str, ...] = ()
    cond = np.linalg.cond(a)
    if not np.isfinite(cond):
        raise SingularCircuitError(
            f"singular MNA system at f={f:g} Hz", _singular_nodes(a, index))
    if cond > COND_WARN_THRESHOLD:
        warnings = (f"ill-conditioned MNA system at f={f:g} Hz (cond~{cond:.3g})",)
    try:
        x = np.linalg.solve(a, z)
    except np.linalg.LinAlgError:
        raise SingularCircuitError(
            f"singular MNA system at f={f:g} Hz", _singular_nodes(a, index)) from None
    voltages = {netlist.ground: 0j}
    for node, i in index.items():
        voltages[node] = complex(x[i])
    currents = {src.label: complex(x[len(index) + k]) for k, src in enumerate(sources)}
    return ACSolution(voltages, currents, warnings)


@dataclass(frozen=True)
class FrequencyGrid:
    """Strictly increasing, positive frequency points in hertz."""

    points: tuple[float, ...]

    def __post_init__(self):
        object.__setattr__(self, "points", tuple(float(p) for p in self.points))
        if not self.points:
            raise ValueError("empty frequency grid")
        if self.points[0] <= 0:
            raise ValueError("frequencies must be > 0")
        if any(b <= a for a, b in zip(self.points, self.points[1:])):
            raise ValueError("frequencies must be strictly increasing")

    def __len__(self) -> int:
        return len(self.points)

    def __iter__(self):
        return iter(self.points)

    @classmethod
    def log(cls, start: float = 1e5, stop: float = 1e9, n: int = 200) -> "FrequencyGrid":
        """Log-spaced grid; defaults cover 100 kHz - 1 GHz."""
        return cls(tuple(np.geomspace(start, stop, n)))

    @classmethod
    def linear(cls, start: float, stop: float, n: int) -> "FrequencyGrid":
        return cls(tuple(np.linspace(start, stop, n)))


@dataclass(frozen=True)
class SweepResult:
    """Per-frequency complex transfer gain (probe voltage / source voltage)."""

    freqs: tuple[float, ...]
    gain: tuple[complex, ...]
    source_label: str
    probe: tuple[int, int]
    warnings: tuple[str, ...] = field(default_factory=tuple)

    def __post_init__(self):
        if len(self.freqs) != len(self.gain):
            raise ValueError("freqs and gain must have equal length")
        if not all(math.isfinite(abs(g)) for g in self.gain):
            raise ValueError("non-finite gain in sweep result")

    def gain_db(self) -> np.ndarray:
        with np.errstate(divide="ignore"):
            return 20.0 * np.log10(np.abs(np.asarray(self.gain)))

    def phase_deg(self) -> np.ndarray:
        return np.degrees([cmath.phase(g) for g in self.gain])

    def magnitude(self) -> np.ndarray:
        return np.abs(np.asarray(self.gain))


def transfer(netlist: Netlist, source_label: str, probe: tuple[int, int],
             grid: FrequencyGrid) -> SweepResult:
    """Sweep the transfer gain (V[probe+] - V[probe-]) / V_source over a grid."""
    source = netlist.source(source_label)
    if source.value == 0:
        raise ValueError(f"source {source_label!r} has zero amplitude")
    nodes = netlist.nodes()
    for p in probe:
        if p not in nodes:
            raise ValueError(f"probe node {p} not present in netlist")
    gains: list[complex] = []
    warnings: list[str] = []
    for f in grid:
        sol = solve_ac(netlist, f)
        gains.append((sol[probe[0]] - sol[probe[1]]) / source.value)
        warnings.extend(sol.warnings)
    return SweepResult(freqs=tuple(grid), gain=tuple(gains),
                       source_label=source_label, probe=probe,
                       warnings=tuple(warnings))


def sweep_csv(result: SweepResult, regions: list[str] | None = None) -> str:
    """Render a sweep as CSV (freq_hz,gain_re,gain_im,gain_db,phase_deg[,region]).

    Floats use 9 significant digits so repeated runs are byte-identical.
    """
    header = "freq_hz,gain_re,gain_im,gain_db,phase_deg"
    if regions is not None:
        if len(regions) != len(result.freqs):
            raise ValueError("region column length mismatch")
        header += ",region"
    lines = [header]
    db = result.gain_db()
    ph = result.phase_deg()
    for i, (f, g) in enumerate(zip(result.freqs, result.gain)):
        row = f"{f:.9g},{g.real:.9g},{g.imag:.9g},{db[i]:.9g},{ph[i]:.9g}"
        if regions is not None:
            row += f",{regions[i]}"
        lines.append(row)
    return "\n".join(lines) + "\n"
