import pytest

from eqshbc.bodychannel import Environment
from eqshbc.config import (
    ConfigError,
    body_params_from_config,
    coupling_model_from_config,
    field_model_from_config,
    inter_params_from_config,
    load_config,
    parse_config,
    region_config_from_config,
    resolve_config_path,
)
from eqshbc.fcc import DEFAULT_FIELD_MODEL
from eqshbc.multiregion import default_region_config


class TestParse:
    def test_values_are_json_fragments(self):
        cfg = parse_config('a = 1.5e-12\nb = "text"\nc = [[1.0, 2.0]]\nd = true')
        assert cfg == {"a": 1.5e-12, "b": "text", "c": [[1.0, 2.0]], "d": True}

    def test_comments_and_blanks(self):
        cfg = parse_config("# heading\n\nkey = 3  # trailing\n")
        assert cfg == {"key": 3}

    def test_missing_equals(self):
        with pytest.raises(ConfigError, match="line 1"):
            parse_config("just some text")

    def test_duplicate_key(self):
        with pytest.raises(ConfigError, match="duplicate"):
            parse_config("a = 1\na = 2")

    def test_bad_value(self):
        with pytest.raises(ConfigError, match="JSON"):
            parse_config("a = not-json")


class TestResolution:
    def test_explicit_path(self, tmp_path):
        p = tmp_path / "x.cfg"
        p.write_text("c_c = 21e-12\n")
        assert resolve_config_path(str(p)) == p

    def test_env_dir(self, tmp_path, monkeypatch):
        (tmp_path / "mine.cfg").write_text("c_c = 5e-12\n")
        monkeypatch.setenv("EQSHBC_CONFIG_DIR", str(tmp_path))
        cfg = load_config("mine.cfg")
        assert cfg["c_c"] == 5e-12

    def test_bundled_names(self):
        for name in ("inter_body.cfg", "intra_body.cfg"):
            cfg = load_config(name)
            assert cfg["c_body"] == 150e-12

    def test_unknown_name(self):
        with pytest.raises(ConfigError, match="not found"):
            resolve_config_path("no_such_scenario.cfg")


class TestBuilders:
    def test_body_params_defaults_when_empty(self):
        params = body_params_from_config({})
        assert params.c_g_tx == 0.6e-12
        assert params.load.kind == "capacitive"

    def test_body_params_overrides(self):
        cfg = parse_config('c_g_tx = 1e-12\nload.kind = "resistive"\nload.value = 50.0\n'
                           'environment = "anechoic"')
        params = body_params_from_config(cfg)
        assert params.c_g_tx == 1e-12
        assert params.load.kind == "resistive"
        assert params.environment is Environment.ANECHOIC

    def test_environment_argument_wins(self):
        params = body_params_from_config({"environment": "anechoic"}, environment="open_air")
        assert params.environment is Environment.OPEN_AIR

    def test_inter_params_require_cc(self):
        with pytest.raises(ConfigError, match="c_c"):
            inter_params_from_config({})

    def test_coupling_model_from_anchors(self):
        cfg = {"coupling.anchors": [[1.0, 21e-12], [5.0, 6.6e-12]], "coupling.d0": 0.2}
        model = coupling_model_from_config(cfg)
        assert model.cap_at(1.0) == pytest.approx(21e-12, rel=1e-9)

    def test_coupling_model_defaults(self):
        model = coupling_model_from_config({})
        assert model.cap_at(5.0) == pytest.approx(6.6e-12, rel=1e-9)

    def test_field_model(self):
        assert field_model_from_config({}) == DEFAULT_FIELD_MODEL
        model = field_model_from_config({"fcc.anchor_field": 0.1, "fcc.exponent": 2.0})
        assert model.anchor_field == 0.1
        assert model.exponent == 2.0


class TestBundledScenario:
    def test_inter_body_cfg_matches_default_region_config(self):
        cfg = load_config("inter_body.cfg")
        from_cfg = region_config_from_config(cfg)
        reference = default_region_config()
        for f in (5e5, 5e6, 5e7, 5e8):
            assert from_cfg.eqs_gain_db(f) == pytest.approx(reference.eqs_gain_db(f), abs=1e-6)
        assert from_cfg.em.ref_db == pytest.approx(reference.em.ref_db, abs=1e-4)
        assert from_cfg.device.ref_db == pytest.approx(reference.device.ref_db, abs=1e-4)

    def test_anechoic_override_applies_attenuation(self):
        cfg = load_config("inter_body.cfg")
        chamber = region_config_from_config(cfg, environment="anechoic")
        reference = default_region_config("anechoic")
        assert chamber.em.ref_db == pytest.approx(reference.em.ref_db, abs=1e-4)
        assert chamber.eqs_gain_db(5e5) == pytest.approx(-70.0, abs=0.05)
