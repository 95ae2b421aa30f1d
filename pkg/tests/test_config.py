from __future__ import annotations

import pytest

from cantormarkov.config import build_config, load_config, parse_config
from cantormarkov.errors import ConfigError


def test_parse_values_and_comments():
    text = """
    # model
    model.width_base = 0.5
    model.perturbation = 0.05   # small
    caps.exact = true
    caps.symbol_cap = 20
    mc.seed = 7
    """
    sec = parse_config(text)
    assert sec["model"] == {"width_base": 0.5, "perturbation": 0.05}
    assert sec["caps"] == {"exact": True, "symbol_cap": 20}
    cfg = build_config(sec)
    assert cfg.spec.perturbation == 0.05 and cfg.caps.symbol_cap == 20
    assert cfg.run_config().seed == 7
    assert cfg.run_config(seed=9).seed == 9


@pytest.mark.parametrize("text", ["model.width_base 0.5", "width_base = 0.5", "other.x = 1",
                                  "model.nope = 1", "mc.seed = 1\nmc.seed = 2"])
def test_malformed_config(text):
    with pytest.raises(ConfigError):
        parse_config(text)


def test_invalid_values_become_config_errors():
    with pytest.raises(ConfigError):
        build_config(parse_config("model.width_base = 2.0"))


def test_load_config(tmp_path):
    assert load_config(None).spec.width_base == 0.5
    p = tmp_path / "c.cfg"
    p.write_text("model.height_base = 0.25\n")
    cfg = load_config(p)
    assert cfg.spec.height_base == 0.25 and cfg.source == str(p)
    with pytest.raises(ConfigError):
        load_config(tmp_path / "missing.cfg")
