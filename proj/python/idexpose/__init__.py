# Copyright 2026 The idexpose Authors
# Licensed under the Apache License, Version 2.0
"""Thai national ID validation, query rendering, fixture scans and redacted reports."""

import functools
import json
import os
from pathlib import Path

from . import _core
from ._core import (
    ClassificationError,
    QueryError,
    Registry,
    RegistryError,
    UnsafeOutputError,
    classify_url,
    compute_checksum,
    find_candidates,
    is_well_formed_query,
    normalize_numerals,
    pseudonymize,
    render_query,
    report_table_names,
    rounded_percent,
)

__all__ = [
    "ClassificationError",
    "QueryError",
    "Registry",
    "RegistryError",
    "UnsafeOutputError",
    "classify_url",
    "compute_checksum",
    "decode",
    "default_registry",
    "find_candidates",
    "generate_corpus",
    "generate_valid_id",
    "is_well_formed_query",
    "normalize_numerals",
    "prefix_dorks",
    "pseudonymize",
    "render_query",
    "report",
    "report_table_names",
    "rounded_percent",
    "scan_fixture",
    "validate",
]


def _registry_path():
    env = os.environ.get("IDEXPOSE_REGISTRY")
    if env:
        return Path(env)
    return Path(__file__).parent / "data" / "registry.csv"


@functools.lru_cache(maxsize=None)
def _load(path):
    return Registry.load(path)


def default_registry():
    """Registry from IDEXPOSE_REGISTRY, else the one shipped with the package."""
    return _load(str(_registry_path()))


def validate(number, registry=None):
    return _core.validate(number, registry or default_registry())


def decode(number, registry=None):
    return _core.decode(number, registry or default_registry())


def generate_valid_id(prefix5, sequence7, registry=None):
    return _core.generate_valid_id(prefix5, sequence7, registry or default_registry())


def prefix_dorks(categories=range(1, 9), registry=None):
    return _core.prefix_dorks(registry or default_registry(), set(categories))


def generate_corpus(out, registry=None, **spec):
    return _core.generate_corpus(str(out), registry or default_registry(), **spec)


def scan_fixture(plan, index, store, extractors=None, registry=None, **crawl):
    return _core.scan_fixture(
        str(plan), str(index), str(store), registry or default_registry(),
        None if extractors is None else str(extractors), **crawl)


def report(store, tables=("filetype", "tld", "geo", "repeat"), salt=None, registry=None,
           unredacted=False, i_accept_risk=False):
    """Report tables as a dict parsed from the JSON report document."""
    text = _core.report_json(str(store), list(tables), registry or default_registry(), salt,
                             unredacted, i_accept_risk)
    return json.loads(text)
