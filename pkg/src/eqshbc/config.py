"""Key-value configuration files shared by the CLI and analysis modules.

Format: one ``key = value`` pair per line, ``#`` comments, dotted keys for
grouping. Values are JSON fragments (numbers, strings, booleans, lists),
so capacitances can be written as ``21e-12`` and anchor lists as
``[[1.0, 21e-12], [5.0, 6.6e-12]]``.

Documented keys
---------------
Channel:      c_g_tx, c_g_rx, c_body, r_b, r_s, load.kind, load.value,
              environment ("open_air"/"anechoic"), anechoic_boost,
              c_c, c_body2
Coupling:     coupling.anchors (list of [meters, farads]), coupling.d0
Multi-region: multiregion.em_height, multiregion.em_q,
              multiregion.em_ref_db, multiregion.device_length,
              multiregion.device_ref_db, multiregion.anechoic_em_attenuation_db
Attack:       snr_intended_db, attacker_distance, snr_threshold_db
Interference: v_sig_user, interferers (list of [volts, meters]), sir_min_db
Field decay:  fcc.anchor_field, fcc.anchor_distance, fcc.exponent

Bare scenario names given to the CLI resolve against the directory in
``$EQSHBC_CONFIG_DIR`` first and then the bundled defaults (inter_body.cfg,
intra_body.cfg).
"""

from __future__ import annotations

import json
import os
from importlib import resources
from pathlib import Path

from .bodychannel import (
    BodyChannelParams,
    CouplingCapModel,
    Environment,
    InterBodyParams,
    LoadSpec,
    default_coupling_model,
    fit_coupling_model,
)
from .fcc import DEFAULT_FIELD_MODEL, FieldDecayModel
from .multiregion import (
    ANECHOIC_EM_ATTENUATION_DB,
    DEVICE_REF_OPEN_AIR_DB,
    EM_REF_OPEN_AIR_DB,
    DeviceModel,
    EmBodyModel,
    RegionConfig,
)

__all__ = [
    "CONFIG_DIR_ENV",
    "ConfigError",
    "body_params_from_config",
    "coupling_model_from_config",
    "field_model_from_config",
    "inter_params_from_config",
    "load_config",
    "parse_config",
    "region_config_from_config",
    "resolve_config_path",
]

CONFIG_DIR_ENV = "EQSHBC_CONFIG_DIR"
BUNDLED_CONFIGS = ("inter_body.cfg", "intra_body.cfg")


class ConfigError(ValueError):
    pass


def parse_config(text: str) -> dict:
    """Parse config text into a flat {dotted-key: value} dict."""
    out: dict = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}: expected 'key = value', got {raw.strip()!r}")
        key, _, value = line.partition("=")
        key = key.strip()
        if not key:
            raise ConfigError(f"line {lineno}: empty key")
        if key in out:
            raise ConfigError(f"line {lineno}: duplicate key {key!r}")
        try:
            out[key] = json.loads(value.strip())
        except json.JSONDecodeError:
            raise ConfigError(
                f"line {lineno}: value for {key!r} is not a JSON fragment: "
                f"{value.strip()!r}") from None
    return out


def resolve_config_path(name: str) -> Path:
    """Resolve a scenario argument: explicit path, config dir, then bundled."""
    p = Path(name)
    if p.exists():
        return p
    env_dir = os.environ.get(CONFIG_DIR_ENV)
    if env_dir:
        candidate = Path(env_dir) / name
        if candidate.exists():
            return candidate
    if name in BUNDLED_CONFIGS:
        return Path(str(resources.files("eqshbc.data").joinpath(name)))
    raise ConfigError(f"config {name!r} not found (cwd, ${CONFIG_DIR_ENV}, bundled)")


def load_config(name: str) -> dict:
    return parse_config(resolve_config_path(name).read_text())


def body_params_from_config(cfg: dict, environment: str | None = None) -> BodyChannelParams:
    defaults = BodyChannelParams()
    load = defaults.load
    if "load.kind" in cfg or "load.value" in cfg:
        load = LoadSpec(cfg.get("load.kind", load.kind), cfg.get("load.value", load.value))
    env = environment or cfg.get("environment", defaults.environment.value)
    return BodyChannelParams(
        c_g_tx=cfg.get("c_g_tx", defaults.c_g_tx),
        c_g_rx=cfg.get("c_g_rx", defaults.c_g_rx),
        c_body=cfg.get("c_body", defaults.c_body),
        r_b=cfg.get("r_b", defaults.r_b),
        r_s=cfg.get("r_s", defaults.r_s),
        load=load,
        environment=Environment(env),
        anechoic_boost=cfg.get("anechoic_boost", defaults.anechoic_boost),
    )


def inter_params_from_config(cfg: dict, environment: str | None = None) -> InterBodyParams:
    if "c_c" not in cfg:
        raise ConfigError("inter-body scenario needs key 'c_c'")
    return InterBodyParams(base=body_params_from_config(cfg, environment),
                           c_c=cfg["c_c"], c_body2=cfg.get("c_body2"))


def coupling_model_from_config(cfg: dict) -> CouplingCapModel:
    if "coupling.anchors" not in cfg:
        return default_coupling_model()
    anchors = [(d, c) for d, c in cfg["coupling.anchors"]]
    return fit_coupling_model(anchors, cfg.get("coupling.d0", 0.2))


def region_config_from_config(cfg: dict, environment: str | None = None) -> RegionConfig:
    channel = inter_params_from_config(cfg, environment)
    em_ref = cfg.get("multiregion.em_ref_db", EM_REF_OPEN_AIR_DB)
    dev_ref = cfg.get("multiregion.device_ref_db", DEVICE_REF_OPEN_AIR_DB)
    if channel.base.environment is Environment.ANECHOIC:
        attn = cfg.get("multiregion.anechoic_em_attenuation_db", ANECHOIC_EM_ATTENUATION_DB)
        em_ref -= attn
        dev_ref -= attn
    em = EmBodyModel(height=cfg.get("multiregion.em_height", 1.8),
                     q=cfg.get("multiregion.em_q", 3.0), ref_db=em_ref)
    device = DeviceModel(electrode_length=cfg.get("multiregion.device_length", 0.05),
                         ref_db=dev_ref)
    return RegionConfig(channel=channel, em=em, device=device)


def field_model_from_config(cfg: dict) -> FieldDecayModel:
    if not any(k.startswith("fcc.") for k in cfg):
        return DEFAULT_FIELD_MODEL
    return FieldDecayModel(
        anchor_field=cfg.get("fcc.anchor_field", DEFAULT_FIELD_MODEL.anchor_field),
        anchor_distance=cfg.get("fcc.anchor_distance", DEFAULT_FIELD_MODEL.anchor_distance),
        exponent=cfg.get("fcc.exponent", DEFAULT_FIELD_MODEL.exponent),
    )
