import json

import pytest

from src.errors import ConfigError
from src.utils.config import (
    THREADS_VARIABLE,
    ConfigManager,
    RunConfig,
    Tolerances,
    parse_complex,
    parse_t_list,
    parse_tolerance_pairs,
)


@pytest.mark.parametrize(
    "text,expected",
    [
        ("3", 3),
        ("-2.5", -2.5),
        ("i", 1j),
        ("-i", -1j),
        ("-2i", -2j),
        ("5-5i", 5 - 5j),
        ("1.5e-3+2i", 0.0015 + 2j),
        ("2e+1-i", 20 - 1j),
        (" 1 + i ", 1 + 1j),
    ],
)
def test_parse_complex(text, expected):
    assert parse_complex(text) == expected


@pytest.mark.parametrize("text", ["", "abc", "1+2", "i+1i", "--i"])
def test_parse_complex_rejects(text):
    with pytest.raises(ConfigError):
        parse_complex(text)


def test_parse_t_list():
    assert parse_t_list("0,1,i,5-5i") == (0, 1, 1j, 5 - 5j)
    with pytest.raises(ConfigError):
        parse_t_list(" , ")


def test_tolerance_override():
    tolerances = Tolerances().override({"rank": "1e-8", "fit": 1e-6})
    assert tolerances.rank == 1e-8
    assert tolerances.fit == 1e-6
    assert tolerances.cartan == Tolerances().cartan


@pytest.mark.parametrize("updates", [{"bogus": 1e-3}, {"rank": -1}, {"rank": 0}, {"rank": "small"}])
def test_tolerance_override_rejects(updates):
    with pytest.raises(ConfigError):
        Tolerances().override(updates)


def test_tolerance_pairs():
    assert parse_tolerance_pairs(["rank=1e-8", " fit = 2e-7"]) == {"rank": "1e-8", "fit": "2e-7"}
    with pytest.raises(ConfigError):
        parse_tolerance_pairs(["rank"])


def test_run_config_defaults():
    config = RunConfig("fujiki")
    assert config.seed == 0
    assert config.format == "json"
    assert config.p is None


@pytest.mark.parametrize(
    "kwargs",
    [
        {"command": "nope"},
        {"command": "fujiki", "format": "xml"},
        {"command": "fujiki", "seed": -1},
        {"command": "fujiki", "seed": 2 ** 64},
        {"command": "fujiki", "trials": 0},
        {"command": "period-line", "kind": "straight"},
        {"command": "verify-lemmas", "p": -1},
    ],
)
def test_run_config_rejects(kwargs):
    with pytest.raises(ConfigError):
        RunConfig(**kwargs)


def test_run_config_json_omits_runtime_keys():
    data = RunConfig("family-sweep", output="out.json", verbose=True, t=(1j,)).to_json()
    assert "output" not in data and "verbose" not in data
    assert data["t"] == [[0.0, 1.0]]
    assert data["tolerances"]["rank"] == Tolerances().rank


@pytest.fixture
def manager(tmp_path, monkeypatch):
    monkeypatch.delenv(THREADS_VARIABLE, raising=False)
    return ConfigManager(env_file=str(tmp_path / "missing.env"))


def test_resolve_layers(manager, tmp_path):
    path = tmp_path / "run.json"
    path.write_text(json.dumps({"seed": 7, "trials": 5, "t": [[1, 2], "i"], "tolerances": {"fit": 1e-6}}))
    config = manager.resolve("fujiki", {"seed": 9, "n": None}, str(path), {"rank": "1e-7"})
    assert config.seed == 9
    assert config.trials == 5
    assert config.n == 1
    assert config.t == (1 + 2j, 1j)
    assert config.tolerances.fit == 1e-6
    assert config.tolerances.rank == 1e-7


def test_resolve_rejects_unknown_keys(manager, tmp_path):
    path = tmp_path / "run.json"
    path.write_text(json.dumps({"sead": 7}))
    with pytest.raises(ConfigError):
        manager.resolve("fujiki", {}, str(path))


def test_resolve_rejects_non_integer(manager):
    with pytest.raises(ConfigError):
        manager.resolve("fujiki", {"trials": 2.5})


def test_resolve_missing_file(manager, tmp_path):
    with pytest.raises(ConfigError):
        manager.resolve("fujiki", {}, str(tmp_path / "absent.json"))


def test_threads(manager, monkeypatch):
    assert manager.threads >= 1
    monkeypatch.setenv(THREADS_VARIABLE, "3")
    assert manager.threads == 3
    monkeypatch.setenv(THREADS_VARIABLE, "many")
    with pytest.raises(ConfigError):
        manager.threads


def test_threads_from_env_file(tmp_path, monkeypatch):
    monkeypatch.delenv(THREADS_VARIABLE, raising=False)
    env = tmp_path / ".env"
    env.write_text(f"{THREADS_VARIABLE}=2\n")
    assert ConfigManager(env_file=str(env)).threads == 2
