import json

from core import config


def test_coerce_accepts_matching_types():
    assert config._coerce_override_value(False, True) is True
    assert config._coerce_override_value(3, 7) == 7


def test_coerce_rejects_mismatched_types():
    assert config._coerce_override_value(3, True) is None
    assert config._coerce_override_value(3, "7") is None
    assert config._coerce_override_value(False, 1) is None


def test_user_file_overrides_known_keys(tmp_path, monkeypatch, capsys):
    cfg = tmp_path / "endtrace.config.json"
    cfg.write_text(json.dumps({"MAX_LEVEL": 9, "NOT_A_KEY": 1, "JSON_INDENT": "wide"}), encoding="utf-8")
    monkeypatch.setenv("ENDTRACE_CONFIG", str(cfg))
    monkeypatch.setattr(config, "MAX_LEVEL", 16)
    monkeypatch.setattr(config, "JSON_INDENT", 2)
    monkeypatch.setattr(config, "LOADED_USER_CONFIG_PATH", None)

    config._apply_user_overrides()

    assert config.MAX_LEVEL == 9
    assert config.JSON_INDENT == 2
    assert config.LOADED_USER_CONFIG_PATH == str(cfg)
    err = capsys.readouterr().err
    assert "NOT_A_KEY" in err
    assert "JSON_INDENT" in err


def test_pairing_cap_env_override(monkeypatch):
    monkeypatch.setattr(config, "PAIRING_CAP", 1_000_000)
    monkeypatch.setenv(config.PAIRING_CAP_ENV, "42")
    config._apply_env_overrides()
    assert config.PAIRING_CAP == 42


def test_pairing_cap_env_ignores_garbage(monkeypatch, capsys):
    monkeypatch.setattr(config, "PAIRING_CAP", 1_000_000)
    monkeypatch.setenv(config.PAIRING_CAP_ENV, "lots")
    config._apply_env_overrides()
    assert config.PAIRING_CAP == 1_000_000
    assert "[config]" in capsys.readouterr().err
