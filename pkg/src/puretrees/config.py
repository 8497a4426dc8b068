"""Per-algorithm hyperparameter records and the plain-text config format.

Config files are ``key = value`` lines (``#`` starts a comment).  Keys use
the parameter names of the original R packages, e.g.::

    algo = intf
    npairs = 99
    min.node.size = 22
    replace = true
    num.trees = 500

Dots and underscores are interchangeable in keys.
"""
from __future__ import annotations

import configparser
from dataclasses import asdict, dataclass, fields, replace
from pathlib import Path
from typing import Optional, Union

from .core import ConfigError


def _check_int(name, value, lo, hi=None):
    if isinstance(value, bool) or not isinstance(value, int):
        raise ConfigError(name, f"expected an integer, got {value!r}")
    if value < lo or (hi is not None and value > hi):
        bound = f"[{lo}, {hi}]" if hi is not None else f">= {lo}"
        raise ConfigError(name, f"{value} outside {bound}")


def _check_fraction(name, value):
    if not (0.0 < value <= 1.0):
        raise ConfigError(name, f"{value} outside (0, 1]")


@dataclass(frozen=True)
class _Common:
    min_node_size: int = 5
    num_trees: int = 500
    replace: bool = True
    sample_fraction: Optional[float] = None

    def fraction(self) -> float:
        if self.sample_fraction is not None:
            return self.sample_fraction
        return 1.0 if self.replace else 0.632

    def _validate_common(self):
        _check_int("min_node_size", self.min_node_size, 1)
        _check_int("num_trees", self.num_trees, 1)
        if self.sample_fraction is not None:
            _check_fraction("sample_fraction", self.sample_fraction)

    def to_dict(self) -> dict:
        out = {"algorithm": self.algorithm}
        out.update(asdict(self))
        return out


@dataclass(frozen=True)
class RfConfig(_Common):
    mtry: Optional[int] = None
    algorithm = "rf"

    def validate(self, d: int) -> "RfConfig":
        self._validate_common()
        mtry = d if self.mtry is None else self.mtry
        _check_int("mtry", mtry, 1, d)
        return replace(self, mtry=mtry)


@dataclass(frozen=True)
class EtConfig(_Common):
    mtry: Optional[int] = None
    num_random_splits: int = 1
    sample_fraction: Optional[float] = 1.0
    algorithm = "et"

    def validate(self, d: int) -> "EtConfig":
        self._validate_common()
        mtry = d if self.mtry is None else self.mtry
        _check_int("mtry", mtry, 1, d)
        _check_int("num_random_splits", self.num_random_splits, 1)
        return replace(self, mtry=mtry)


@dataclass(frozen=True)
class IntfConfig(_Common):
    npairs: int = 1
    algorithm = "intf"

    def validate(self, d: int) -> "IntfConfig":
        self._validate_common()
        if d < 2:
            raise ConfigError("npairs", "interaction splits need d >= 2")
        _check_int("npairs", self.npairs, 1)
        return self


@dataclass(frozen=True)
class RsrfConfig(_Common):
    """RSRF parameters; availability of the mtry fields depends on ``mtry_mode``.

    ``fixed``: ``mtry_random`` required, ``mtry_cart_cart`` not available.
    ``not_fixed``: ``mtry_random`` not available, ``mtry_cart_cart`` required
    when ``include_cartcart`` is set.
    """

    width: int = 1
    include_cartcart: bool = False
    mtry_mode: str = "not_fixed"
    mtry_random: Optional[int] = None
    mtry_random_cart: Optional[int] = None
    mtry_cart_cart: Optional[int] = None
    depth: int = 2
    num_trees: int = 100
    algorithm = "rsrf"

    def validate(self, d: int) -> "RsrfConfig":
        self._validate_common()
        _check_int("width", self.width, 1)
        _check_int("depth", self.depth, 2)
        mode = self.mtry_mode.replace("-", "_")
        if mode not in ("fixed", "not_fixed"):
            raise ConfigError("mtry_mode", f"expected fixed or not_fixed, got {self.mtry_mode!r}")
        mrc = d if self.mtry_random_cart is None else self.mtry_random_cart
        _check_int("mtry_random_cart", mrc, 1, d)
        mr, mcc = self.mtry_random, self.mtry_cart_cart
        if mode == "fixed":
            if mcc is not None:
                raise ConfigError("mtry_cart_cart", "not available in fixed mtry mode")
            mr = d if mr is None else mr
            _check_int("mtry_random", mr, 1, d)
        else:
            if mr is not None:
                raise ConfigError("mtry_random", "not available in not_fixed mtry mode")
            if mcc is not None:
                _check_int("mtry_cart_cart", mcc, 1, d)
            elif self.include_cartcart:
                mcc = d
        return replace(self, mtry_mode=mode, mtry_random=mr, mtry_random_cart=mrc, mtry_cart_cart=mcc)


GrowerConfig = Union[RfConfig, EtConfig, IntfConfig, RsrfConfig]

CONFIG_TYPES = {"rf": RfConfig, "et": EtConfig, "intf": IntfConfig, "rsrf": RsrfConfig}

# external key -> dataclass field
_ALIASES = {
    "num_trees": "num_trees",
    "min_node_size": "min_node_size",
    "min_nodesize": "min_node_size",
    "nodesize": "min_node_size",
    "replace": "replace",
    "sample_fraction": "sample_fraction",
    "mtry": "mtry",
    "num_random_splits": "num_random_splits",
    "npairs": "npairs",
    "width": "width",
    "include_cartcart": "include_cartcart",
    "mtrymode": "mtry_mode",
    "mtry_mode": "mtry_mode",
    "mtry_random": "mtry_random",
    "mtry_random_cart": "mtry_random_cart",
    "mtry_cart_cart": "mtry_cart_cart",
    "depth": "depth",
}


def normalise_key(key: str) -> str:
    return key.strip().lower().replace(".", "_").replace("-", "_")


def parse_value(text: str):
    """Interpret a config value as bool / int / float / None / str."""
    t = text.strip()
    low = t.lower()
    if low in ("true", "yes"):
        return True
    if low in ("false", "no"):
        return False
    if low in ("", "none", "-", "na"):
        return None
    try:
        return int(t)
    except ValueError:
        pass
    try:
        return float(t)
    except ValueError:
        return t


def read_config_text(text: str) -> dict:
    """Parse ``key = value`` lines into a dict with normalised keys."""
    parser = configparser.ConfigParser(inline_comment_prefixes=("#",), interpolation=None)
    parser.optionxform = str
    try:
        parser.read_string("[config]\n" + text)
    except configparser.Error as exc:
        raise ConfigError("config", str(exc)) from None
    return {normalise_key(k): parse_value(v) for k, v in parser["config"].items()}


def read_config_file(path) -> dict:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError("config", f"cannot read {path}: {exc}") from None
    return read_config_text(text)


def build_config(algorithm: str, params: dict) -> GrowerConfig:
    """Create a grower config from loosely-typed key/value pairs.

    Unknown keys raise :class:`ConfigError`; keys that belong to other
    algorithms are rejected as well.
    """
    algorithm = algorithm.lower()
    if algorithm == "rsrf_af":
        algorithm = "rsrf"
        params = {"mtry_mode": "fixed", **params}
    if algorithm not in CONFIG_TYPES:
        raise ConfigError("algo", f"unknown algorithm {algorithm!r}")
    cls = CONFIG_TYPES[algorithm]
    allowed = {f.name for f in fields(cls)}
    kwargs = {}
    for key, value in params.items():
        name = _ALIASES.get(normalise_key(key))
        if name is None or name not in allowed:
            raise ConfigError(key, f"not a parameter of {algorithm}")
        if value is None:
            continue
        if name == "sample_fraction":
            value = float(value)
        if name in ("replace", "include_cartcart") and not isinstance(value, bool):
            raise ConfigError(key, f"expected true/false, got {value!r}")
        kwargs[name] = value
    return cls(**kwargs)
