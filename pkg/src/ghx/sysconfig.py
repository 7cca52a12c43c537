"""
Parsing of the JSON system configurations and the symbol descriptors in their grid.

A system file looks like::

    {"group": "torus:2", "name": "gradient",
     "grid": [[{"kind": "torus_poly", "coeffs": [{"alpha": [1, 0], "re": 1, "im": 0}]}],
              [{"kind": "torus_poly", "coeffs": [{"alpha": [0, 1], "re": 1, "im": 0}]}]]}
"""

import dataclasses
import json
import os
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Optional

import numpy as np

from .block import SystemSymbol
from .env import Environ, PathName
from .groups import GroupId, parse_group, parse_rep, rep_meta
from .settings import Consts
from .symbols import (ScalarSymbol, add, bessel_symbol, compose, scale, su2_casimir_symbol,
                      su2_field_symbol, su2_sublaplacian_symbol, table_symbol,
                      torus_poly_symbol, zero_symbol)
from .util import ConfigError, GhxError

SYMBOL_KINDS = ("torus_poly", "bessel", "su2_field", "su2_casimir", "su2_sublaplacian",
                "table", "zero", "sum", "product", "scaled")


@dataclass(frozen=True)
class SystemConfig:
    """
    A parsed system configuration.

    Attributes:
        source: the file it was read from (or a description for embedded configurations)
        base_dir: directory against which relative table paths are resolved
        data: the raw JSON document, embedded as is in the records files
        group: the parsed group
        system: the `SystemSymbol` built from the grid
    """
    source: str
    base_dir: str
    data: dict[str, Any]
    group: GroupId
    system: SystemSymbol

    @property
    def m(self) -> int:
        """number of equations"""
        return self.system.m

    @property
    def n(self) -> int:
        """number of unknowns"""
        return self.system.n


def resolve_system_path(env: Environ, name: str) -> PathName:
    """
    Resolve a system file: existing paths are used as is, while a bare name like "grad2"
    is searched as "systems/grad2.json" in the configuration directories.
    """
    if os.access(name, os.R_OK) or os.path.isabs(name):
        return Path(name)
    if not name.endswith(".json"):
        name = f"{name}.json"
    if "/" not in name:
        name = f"{Consts.systems_dir()}/{name}"
    return env.search_config_path(name, quiet=True)


def load_system(env: Environ, name: str) -> SystemConfig:
    """
    Load and parse a system configuration file.

    :param env: the current `Environ` used for the path search
    :param name: a path or a bare system name
    :return: the `SystemConfig`
    """
    path = resolve_system_path(env, name)
    with path.open("r", encoding="utf-8") as sys_fd:
        text = sys_fd.read()
    try:
        data = json.loads(text)
    except json.JSONDecodeError as ex:
        raise ConfigError(f"invalid JSON: {ex.msg} (column {ex.colno})", str(path),
                          ex.lineno) from ex
    base_dir = str(path.parent) if isinstance(path, Path) else str(Path(str(path)).parent)
    return system_from_dict(data, str(path), base_dir)


def system_from_dict(data: Any, source: str, base_dir: str) -> SystemConfig:
    """
    Build a `SystemConfig` from a parsed JSON document.

    :param data: the document
    :param source: file name used in error messages
    :param base_dir: directory for relative table paths
    :return: the `SystemConfig`
    """
    if not isinstance(data, dict):
        raise ConfigError("system configuration must be a JSON object", source)
    try:
        group = parse_group(str(data.get("group", "")))
    except ValueError as ex:
        raise ConfigError(str(ex), source, location="group") from ex
    grid = data.get("grid")
    if not isinstance(grid, list) or not grid or not all(
            isinstance(row, list) and row for row in grid):
        raise ConfigError("'grid' must be a non-empty list of non-empty rows", source,
                          location="grid")
    for key, actual in (("m", len(grid)), ("n", len(grid[0]))):
        if key in data and data[key] != actual:
            raise ConfigError(f"'{key}' is {data[key]} but the grid has {actual}", source,
                              location=key)
    if any(len(row) != len(grid[0]) for row in grid):
        raise ConfigError("all rows of the grid must have the same length", source,
                          location="grid")
    symbols = [[build_symbol(desc, group, source, base_dir, f"grid[{j}][{i}]")
                for i, desc in enumerate(row)] for j, row in enumerate(grid)]
    name = str(data.get("name", Path(source).stem))
    return SystemConfig(source, base_dir, data, group, SystemSymbol.of(group, symbols, name))


def _number(desc: dict[str, Any], key: str, source: str, location: str,
            default: Optional[float] = None) -> float:
    value = desc.get(key, default)
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ConfigError(f"'{key}' must be a number", source, location=location)
    return float(value)


def _complex(desc: dict[str, Any], source: str, location: str) -> complex:
    return complex(_number(desc, "re", source, location, 0.0),
                   _number(desc, "im", source, location, 0.0))


def build_symbol(desc: Any, group: GroupId, source: str, base_dir: str,
                 location: str) -> ScalarSymbol:
    """
    Build a `ScalarSymbol` from its descriptor. Every kind accepts an optional "order" that
    replaces the declared order and an optional "name".

    :param desc: the descriptor object
    :param group: the group of the system
    :param source: file name for error messages
    :param base_dir: directory for relative table paths
    :param location: position of the descriptor for error messages, like "grid[0][1]"
    :return: the `ScalarSymbol`
    """
    if not isinstance(desc, dict):
        raise ConfigError("symbol descriptor must be a JSON object", source, location=location)
    kind = desc.get("kind")
    if kind not in SYMBOL_KINDS:
        raise ConfigError(f"unknown symbol kind '{kind}', expected one of "
                          f"{', '.join(SYMBOL_KINDS)}", source, location=location)
    try:
        symbol = _build_kind(kind, desc, group, source, base_dir, location)
    except ConfigError:
        raise
    except (GhxError, ValueError) as ex:
        raise ConfigError(str(ex), source, location=location) from ex
    if "order" in desc:
        symbol = dataclasses.replace(symbol, order=_number(desc, "order", source, location))
    if "name" in desc:
        symbol = dataclasses.replace(symbol, name=str(desc["name"]))
    return symbol


def _sub_symbols(desc: dict[str, Any], key: str, group: GroupId, source: str, base_dir: str,
                 location: str) -> list[ScalarSymbol]:
    parts = desc.get(key)
    if not isinstance(parts, list) or not parts:
        raise ConfigError(f"'{key}' must be a non-empty list of descriptors", source,
                          location=location)
    return [build_symbol(part, group, source, base_dir, f"{location}.{key}[{k}]")
            for k, part in enumerate(parts)]


def _build_kind(kind: str, desc: dict[str, Any], group: GroupId, source: str, base_dir: str,
                location: str) -> ScalarSymbol:
    # pylint: disable=too-many-return-statements
    if kind == "torus_poly":
        coeffs = desc.get("coeffs", [])
        if not isinstance(coeffs, list):
            raise ConfigError("'coeffs' must be a list", source, location=location)
        monomials = []
        for k, coeff in enumerate(coeffs):
            where = f"{location}.coeffs[{k}]"
            alpha = coeff.get("alpha") if isinstance(coeff, dict) else None
            if not isinstance(alpha, list) or not all(
                    isinstance(a, int) and not isinstance(a, bool) for a in alpha):
                raise ConfigError("'alpha' must be a list of integers", source, location=where)
            monomials.append((tuple(alpha), _complex(coeff, source, where)))
        return torus_poly_symbol(group, monomials)
    if kind == "bessel":
        return bessel_symbol(group, _number(desc, "s", source, location))
    if kind == "su2_field":
        return su2_field_symbol(group, int(_number(desc, "axis", source, location)))
    if kind == "su2_casimir":
        return su2_casimir_symbol(group)
    if kind == "su2_sublaplacian":
        return su2_sublaplacian_symbol(group, int(_number(desc, "axis", source, location, 3)))
    if kind == "table":
        return _table(desc, group, source, base_dir, location)
    if kind == "zero":
        return zero_symbol(group)
    if kind == "sum":
        return add(*_sub_symbols(desc, "terms", group, source, base_dir, location))
    if kind == "product":
        return compose(*_sub_symbols(desc, "factors", group, source, base_dir, location))
    inner = desc.get("symbol")
    return scale(_complex(desc, source, location),
                 build_symbol(inner, group, source, base_dir, f"{location}.symbol"))


def _table(desc: dict[str, Any], group: GroupId, source: str, base_dir: str,
           location: str) -> ScalarSymbol:
    if not isinstance(table_path := desc.get("path"), str):
        raise ConfigError("table symbol needs a 'path'", source, location=location)
    path = Path(table_path) if os.path.isabs(table_path) else Path(base_dir, table_path)
    try:
        with path.open("r", encoding="utf-8") as table_fd:
            data = json.load(table_fd)
    except OSError as ex:
        raise ConfigError(f"cannot read table: {ex}", source, location=location) from ex
    except json.JSONDecodeError as ex:
        raise ConfigError(f"invalid JSON: {ex.msg} (column {ex.colno})", str(path),
                          ex.lineno) from ex
    if not isinstance(data, dict):
        raise ConfigError("table must be a JSON object keyed by index", str(path))
    entries = {}
    for key, values in data.items():
        try:
            xi = parse_rep(group, key)
        except ValueError as ex:
            raise ConfigError(str(ex), str(path), location=key) from ex
        dim = rep_meta(group, xi).dim
        if not isinstance(values, list) or not all(
                isinstance(v, list) and len(v) == 2 for v in values):
            raise ConfigError("entries must be a list of [re, im] pairs", str(path),
                              location=key)
        if len(values) != dim * dim:
            raise ConfigError(f"wrong block size: {len(values)} entries but d_xi={dim}",
                              str(path), location=key)
        entries[xi] = np.array([complex(re, im) for re, im in values]).reshape(dim, dim)
    order = _number(desc, "order", source, location) if "order" in desc else None
    return table_symbol(str(desc.get("name", table_path)), group, entries, order)
