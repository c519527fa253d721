"""Security and interference analysis for capacitively coupled body channels.

A snooper standing at distance d picks up the on-body signal attenuated by
the flat-band coupling ratio C_C(d)/c_body, so its SNR is the intended
receiver's SNR plus 20*log10 of that ratio. On-off keying needs roughly
6 dB of SNR, which sets the default feasibility threshold. Interference
from N co-channel users adds the same way; interferer voltages add
linearly (coherent worst case), which is also the literal reading of the
voltage-sum SIR definition.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .bodychannel import CouplingCapModel, default_coupling_model

__all__ = [
    "AttackScenario",
    "InterferenceScenario",
    "MAX_COCHANNEL_USERS",
    "UnboundedResult",
    "attack_report",
    "is_attack_feasible",
    "max_cochannel_users",
    "max_safe_snr",
    "min_safe_distance",
    "sir_db",
    "snooper_snr_db",
]

MAX_COCHANNEL_USERS = 10 ** 6
DISTANCE_CAP_M = 100.0


class UnboundedResult(RuntimeError):
    """No finite answer below the search cap (e.g. unsafe at every distance)."""


@dataclass(frozen=True)
class AttackScenario:
    """Snooping attempt against a link with a known receiver-side SNR."""

    snr_intended_db: float
    attacker_distance: float
    snr_threshold_db: float = 6.0
    coupling: CouplingCapModel = field(default_factory=default_coupling_model)
    c_body: float = 150e-12

    def __post_init__(self):
        if self.attacker_distance < 0:
            raise ValueError("attacker_distance must be >= 0")
        if self.c_body <= 0:
            raise ValueError("c_body must be > 0")


@dataclass(frozen=True)
class InterferenceScenario:
    """One considered user plus co-channel interferers at given distances."""

    v_sig_user: float
    interferers: tuple[tuple[float, float], ...] = ()
    coupling: CouplingCapModel = field(default_factory=default_coupling_model)
    c_body: float = 150e-12

    def __post_init__(self):
        object.__setattr__(self, "interferers",
                           tuple((float(v), float(d)) for v, d in self.interferers))
        if self.v_sig_user <= 0:
            raise ValueError("v_sig_user must be > 0")
        for v, d in self.interferers:
            if v <= 0 or d <= 0:
                raise ValueError("interferer amplitudes and distances must be > 0")
        if self.c_body <= 0:
            raise ValueError("c_body must be > 0")


def _coupling_ratio(coupling: CouplingCapModel, d: float, c_body: float) -> float:
    return coupling.cap_at(d) / c_body


def snooper_snr_db(scenario: AttackScenario) -> float:
    """SNR seen by a snooper at the scenario's distance."""
    ratio = _coupling_ratio(scenario.coupling, scenario.attacker_distance, scenario.c_body)
    return scenario.snr_intended_db + 20.0 * math.log10(ratio)


def is_attack_feasible(scenario: AttackScenario) -> bool:
    """True when the snooper clears the demodulation threshold (boundary inclusive)."""
    return snooper_snr_db(scenario) >= scenario.snr_threshold_db


def min_safe_distance(snr_intended_db: float, threshold_db: float,
                      coupling: CouplingCapModel | None = None,
                      c_body: float = 150e-12) -> float:
    """Smallest distance at which an attack becomes infeasible.

    Returns 0.0 when snooping already fails at contact range. Raises
    :class:`UnboundedResult` when the snooper stays above threshold all
    the way out to the 100 m search cap (possible when the coupling
    model's far tail is non-zero).
    """
    coupling = coupling or default_coupling_model()

    def snr(d: float) -> float:
        return snr_intended_db + 20.0 * math.log10(_coupling_ratio(coupling, d, c_body))

    if snr(0.0) < threshold_db:
        return 0.0
    if snr(DISTANCE_CAP_M) >= threshold_db:
        raise UnboundedResult(
            f"snooper SNR stays at or above {threshold_db:g} dB out to "
            f"{DISTANCE_CAP_M:g} m; no finite safe distance")
    lo, hi = 0.0, DISTANCE_CAP_M
    # snr is strictly decreasing in d; shrink the bracket well below the
    # documented 1e-3 m tolerance.
    for _ in range(60):
        mid = 0.5 * (lo + hi)
        if snr(mid) >= threshold_db:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def max_safe_snr(threshold_db: float, d_protect: float,
                 coupling: CouplingCapModel | None = None,
                 c_body: float = 150e-12) -> float:
    """Largest intended SNR that keeps attacks infeasible at d >= d_protect."""
    if d_protect <= 0:
        raise ValueError("d_protect must be > 0")
    coupling = coupling or default_coupling_model()
    return threshold_db - 20.0 * math.log10(_coupling_ratio(coupling, d_protect, c_body))


def sir_db(scenario: InterferenceScenario) -> float:
    """Signal-to-interference ratio at the considered user's body.

    Interferer contributions add as voltages. An empty interferer list
    yields +inf.
    """
    if not scenario.interferers:
        return math.inf
    v_intf = sum(v * _coupling_ratio(scenario.coupling, d, scenario.c_body)
                 for v, d in scenario.interferers)
    return 20.0 * math.log10(scenario.v_sig_user / v_intf)


def max_cochannel_users(v_sig_user: float, v_sig_each: float, d_each: float,
                        sir_min_db: float,
                        coupling: CouplingCapModel | None = None,
                        c_body: float = 150e-12) -> int:
    """Largest N identical interferers at d_each with SIR still >= sir_min_db.

    Capped at MAX_COCHANNEL_USERS when the coupling tail makes any number
    tolerable.
    """
    if v_sig_user <= 0 or v_sig_each <= 0 or d_each <= 0:
        raise ValueError("amplitudes and distance must be > 0")
    coupling = coupling or default_coupling_model()
    ratio = _coupling_ratio(coupling, d_each, c_body)
    if ratio == 0.0:
        return MAX_COCHANNEL_USERS
    # sir(N) >= sir_min  <=>  N <= v_user / (v_each * ratio * 10^(sir_min/20))
    bound = v_sig_user / (v_sig_each * ratio * 10.0 ** (sir_min_db / 20.0))
    n = math.floor(bound * (1.0 + 1e-12))
    return max(0, min(n, MAX_COCHANNEL_USERS))


def attack_report(scenario: AttackScenario) -> dict:
    """JSON-ready record of the attack analysis."""
    snr = snooper_snr_db(scenario)
    try:
        safe_d = min_safe_distance(scenario.snr_intended_db, scenario.snr_threshold_db,
                                   scenario.coupling, scenario.c_body)
    except UnboundedResult:
        safe_d = None
    return {
        "snr_intended_db": scenario.snr_intended_db,
        "attacker_distance_m": scenario.attacker_distance,
        "snr_threshold_db": scenario.snr_threshold_db,
        "snooper_snr_db": snr,
        "feasible": bool(snr >= scenario.snr_threshold_db),
        "min_safe_distance_m": safe_d,
        "max_safe_snr_db": (max_safe_snr(scenario.snr_threshold_db,
                                         scenario.attacker_distance,
                                         scenario.coupling, scenario.c_body)
                            if scenario.attacker_distance > 0 else None),
    }
