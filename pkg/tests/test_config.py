import pytest

from sqdiff.config import ConstantsConfig, format_constants, load_constants, parse_constants
from sqdiff.errors import ConfigError


def test_defaults():
    cfg = ConstantsConfig()
    assert cfg.c0_nprime == 0.01 and cfg.discard_exponent == 6 and cfg.n_floor == 32
    assert cfg.tuple_budget == 10**8 and cfg.seed == 0


def test_roundtrip():
    cfg = ConstantsConfig(c0_nprime=0.5, k_cap=7, seed=3)
    assert parse_constants(format_constants(cfg)) == cfg


def test_parse_comments_and_scientific():
    cfg = parse_constants("# note\ntuple_budget = 1e6\nC_kdef = 2.5  # trailing\n\n")
    assert cfg.tuple_budget == 10**6 and cfg.C_kdef == 2.5


@pytest.mark.parametrize("text", [
    "nonsense", "bogus = 1", "seed = 1\nseed = 2", "c0_nprime = -1",
    "discard_exponent = 5", "seed = abc", "n_floor = 0",
])
def test_parse_errors(text):
    with pytest.raises(ConfigError):
        parse_constants(text)


def test_load_from_env(tmp_path, monkeypatch):
    p = tmp_path / "c.txt"
    p.write_text("k_cap = 9\n")
    monkeypatch.setenv("SQDIFF_CONSTANTS", str(p))
    assert load_constants().k_cap == 9
    monkeypatch.delenv("SQDIFF_CONSTANTS")
    assert load_constants() == ConstantsConfig()
