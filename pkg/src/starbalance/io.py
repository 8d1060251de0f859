"""JSON platform files and CSV timeline export."""

from __future__ import annotations

import csv
import io
import json
from fractions import Fraction
from pathlib import Path
from typing import Any

from .core import InvalidPlatform, Platform, Timeline, Worker
from .divisible import DivisiblePlatform, DivisibleWorker


def parse_rational(value: Any) -> Fraction:
    """Decimal string, "p/q" string or JSON number to an exact Fraction."""
    if isinstance(value, bool):
        raise InvalidPlatform(f"not a number: {value!r}")
    if isinstance(value, float):
        return Fraction(repr(value))
    try:
        return Fraction(value.strip() if isinstance(value, str) else value)
    except (TypeError, ValueError, ZeroDivisionError) as exc:
        raise InvalidPlatform(f"not a rational number: {value!r}") from exc


def fmt(x: Fraction) -> str:
    return str(Fraction(x))


def _read(source) -> Any:
    if isinstance(source, (dict, list)):
        return source
    return json.loads(Path(source).read_text())


def _workers(data) -> list:
    if not isinstance(data, dict) or not isinstance(data.get("workers"), list):
        raise InvalidPlatform('platform JSON must be an object with a "workers" list')
    return data["workers"]


def platform_from_dict(data: dict) -> Platform:
    workers = []
    for k, entry in enumerate(_workers(data)):
        try:
            c, w, load = entry["c"], entry["w"], entry.get("load", 0)
        except (KeyError, TypeError) as exc:
            raise InvalidPlatform(f'worker {k} needs "c" and "w"') from exc
        if isinstance(load, str) and load.strip().isdigit():
            load = int(load)
        if not isinstance(load, int) or isinstance(load, bool):
            raise InvalidPlatform(f"worker {k}: load must be an integer, got {load!r}")
        workers.append(Worker(parse_rational(c), parse_rational(w), load))
    return Platform(tuple(workers))


def platform_to_dict(platform: Platform) -> dict:
    return {"workers": [{"c": fmt(wk.c), "w": fmt(wk.w), "load": wk.load} for wk in platform.workers]}


def load_platform(source) -> Platform:
    return platform_from_dict(_read(source))


def dump_platform(platform: Platform, path) -> None:
    Path(path).write_text(json.dumps(platform_to_dict(platform), indent=2) + "\n")


def divisible_from_dict(data: dict) -> DivisiblePlatform:
    workers = []
    for k, entry in enumerate(_workers(data)):
        try:
            workers.append(DivisibleWorker(float(entry["bandwidth"]), float(entry["speed"]), float(entry.get("alpha", 0.0))))
        except (KeyError, TypeError, ValueError) as exc:
            raise InvalidPlatform(f'worker {k} needs numeric "bandwidth", "speed" and "alpha"') from exc
    return DivisiblePlatform(tuple(workers))


def load_divisible_platform(source) -> DivisiblePlatform:
    return divisible_from_dict(_read(source))


def timeline_csv(timeline: Timeline) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["kind", "worker", "start", "end"])
    for kind, worker, start, end in timeline.intervals():
        writer.writerow([kind, worker, fmt(start), fmt(end)])
    return buf.getvalue()
