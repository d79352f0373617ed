"""JSON formats for systems, partitions, certificates and window maps.

Rationals are written as ``"p/q"`` strings (``"1"`` for integers) and parsed
back exactly; group elements use the letter notation of
:mod:`freeinv.freegroup`.

System file::

    {"type": "finite", "rank": 2,
     "weights": ["1/2", "1/2"], "generators": [[1, 0], [1, 0]],
     "partitions": {"points": [0, 1]}}

    {"type": "bernoulli", "rank": 2,
     "alphabet": ["0", "1"], "probs": ["1/2", "1/2"],
     "partitions": {"coord": {"window": ["1"], "labels": {"0": 0, "1": 1}}}}

Bernoulli label tables are keyed by the window configuration, symbols joined
with commas in window order.
"""

from __future__ import annotations

import json
from fractions import Fraction
from pathlib import Path
from typing import Any

import numpy as np

from .factor import PushforwardReport, WindowMap
from .freegroup import parse_word
from .partitions import Partition, coordinate_partition, point_partition, trivial_partition
from .splittings import SplittingCertificate, SplittingStep
from .systems import DEFAULT_BUDGET, BernoulliSystem, FiniteSystem

__all__ = [
    "rational",
    "system_from_json",
    "system_to_json",
    "load_system",
    "partition_from_json",
    "partition_to_json",
    "resolve_partition",
    "certificate_to_json",
    "certificate_from_json",
    "window_map_from_json",
    "window_map_to_json",
    "pushforward_to_json",
]


def rational(x: Fraction) -> str:
    x = Fraction(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def _tuplify(v: Any) -> Any:
    if isinstance(v, list):
        return tuple(_tuplify(u) for u in v)
    return v


def _listify(v: Any) -> Any:
    if isinstance(v, tuple):
        return [_listify(u) for u in v]
    return v


def system_from_json(obj: dict, budget: int = DEFAULT_BUDGET):
    kind = obj.get("type")
    rank = int(obj["rank"])
    if kind == "finite":
        gens = obj["generators"]
        if len(gens) != rank:
            raise ValueError(f"rank {rank} but {len(gens)} generator permutations")
        return FiniteSystem(obj["weights"], gens, obj.get("points"), budget=budget)
    if kind == "bernoulli":
        return BernoulliSystem([_tuplify(a) for a in obj["alphabet"]], obj["probs"], rank, budget=budget)
    raise ValueError(f"unknown system type {kind!r}")


def system_to_json(system) -> dict:
    if isinstance(system, FiniteSystem):
        return {
            "type": "finite",
            "rank": system.rank,
            "points": list(system.points),
            "weights": [rational(w) for w in system.weights],
            "generators": [list(m) for m in system.generator_maps],
        }
    return {
        "type": "bernoulli",
        "rank": system.rank,
        "alphabet": [_listify(a) for a in system.alphabet],
        "probs": [rational(p) for p in system.probs],
    }


def _config_key(symbols) -> str:
    return ",".join(str(_listify(s)) for s in symbols)


def partition_from_json(system, obj) -> Partition:
    if isinstance(system, FiniteSystem):
        if not isinstance(obj, list):
            raise ValueError("finite partitions are label arrays")
        return Partition.from_labels(system, [_tuplify(l) for l in obj])
    window = [parse_word(t, system.rank) for t in obj["window"]]
    table = obj["labels"]
    by_key = {str(k): _tuplify(v) for k, v in table.items()}

    def rule(cfg):
        key = _config_key(cfg)
        if key not in by_key:
            raise ValueError(f"label table has no entry for configuration {key!r}")
        return by_key[key]

    return Partition.from_function(system, window, rule)


def partition_to_json(p: Partition):
    if not p.is_bernoulli:
        return p.labels.tolist()
    return {
        "window": [str(w) for w in p.window],
        "labels": {_config_key(cfg): label for cfg, label in p.table().items()},
    }


def load_system(path: str | Path, budget: int = DEFAULT_BUDGET):
    """Read a system file; returns ``(system, {name: Partition})``."""
    obj = json.loads(Path(path).read_text())
    system = system_from_json(obj, budget=budget)
    named = {name: partition_from_json(system, entry) for name, entry in obj.get("partitions", {}).items()}
    return system, named


def resolve_partition(system, named: dict[str, Partition], selector: str) -> Partition:
    """Look a partition up by file name, position in the file, or built-in name.

    Built-ins: ``points`` and ``trivial`` on finite systems, ``canonical``
    (alias ``coordinate``) and ``trivial`` on Bernoulli systems.
    """
    if selector in named:
        return named[selector]
    if selector.isdigit():
        names = list(named)
        i = int(selector)
        if i >= len(names):
            raise ValueError(f"partition index {i} out of range ({len(names)} in file)")
        return named[names[i]]
    if selector == "trivial":
        return trivial_partition(system)
    if isinstance(system, FiniteSystem) and selector == "points":
        return point_partition(system)
    if isinstance(system, BernoulliSystem) and selector in ("canonical", "coordinate"):
        return coordinate_partition(system)
    raise ValueError(f"unknown partition {selector!r}")


def certificate_to_json(cert: SplittingCertificate) -> dict:
    return {
        "start": partition_to_json(cert.start),
        "steps": [
            {"s": str(step.s), "merge": {str(k): v for k, v in sorted(step.merge.items())}} for step in cert.steps
        ],
        "end": partition_to_json(cert.end),
    }


def _partition_from_canonical(system, obj) -> Partition:
    if isinstance(system, FiniteSystem):
        return Partition(system, np.array(obj, dtype=np.int64))
    return partition_from_json(system, obj)


def certificate_from_json(system, obj: dict) -> SplittingCertificate:
    steps = [
        SplittingStep(parse_word(st["s"], system.rank), {int(k): int(v) for k, v in st["merge"].items()})
        for st in obj["steps"]
    ]
    return SplittingCertificate(
        _partition_from_canonical(system, obj["start"]), steps, _partition_from_canonical(system, obj["end"])
    )


def window_map_from_json(obj: dict) -> WindowMap:
    rank = int(obj["rank"])
    rule = {tuple(_tuplify(v) for v in inputs): _tuplify(out) for inputs, out in obj["rule"]}
    return WindowMap(
        tuple(_tuplify(a) for a in obj["input_alphabet"]),
        tuple(_tuplify(a) for a in obj["output_alphabet"]),
        tuple(parse_word(t, rank) for t in obj["dependency"]),
        rule,
    )


def window_map_to_json(wmap: WindowMap) -> dict:
    return {
        "rank": wmap.rank,
        "input_alphabet": [_listify(a) for a in wmap.input_alphabet],
        "output_alphabet": [_listify(a) for a in wmap.output_alphabet],
        "dependency": [str(d) for d in wmap.dependency],
        "rule": [[[_listify(v) for v in k], _listify(out)] for k, out in wmap.rule.items()],
    }


def pushforward_to_json(report: PushforwardReport) -> dict:
    cells = sorted(set(report.distribution) | set(report.target))
    return {
        "window": [str(w) for w in report.window],
        "n_inputs": report.n_inputs,
        "exact_match": report.exact_match,
        "cells": [
            {
                "cell": [_listify(c) for c in cell],
                "mass": rational(report.distribution.get(cell, Fraction(0))),
                "target": rational(report.target.get(cell, Fraction(0))),
            }
            for cell in cells
        ],
    }
