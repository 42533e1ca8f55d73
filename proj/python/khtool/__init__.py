"""Khovanov homology of knots, tangles and movies."""

import json
from dataclasses import dataclass
from typing import Any

from . import _khtool

__all__ = ["Report", "homology", "jones", "skein", "compose", "movie",
           "check", "dump", "corpus"]


@dataclass
class Report:
    data: Any
    text: str
    passed: bool

    def __str__(self) -> str:
        return self.text


def _report(raw) -> Report:
    data, text, passed = raw
    return Report(json.loads(data), text, passed)


def homology(diagram: str, functor: str = "khovanov", ring: str = "Q",
             all: bool = False, threads: int = 1) -> Report:
    return _report(_khtool.homology(diagram, functor, ring, all, threads))


def jones(diagram: str) -> Report:
    return _report(_khtool.jones(diagram))


def skein(diagram: str) -> Report:
    return _report(_khtool.skein(diagram))


def compose(diagram: str, ring: str = "Q", threads: int = 1) -> Report:
    return _report(_khtool.compose(diagram, ring, threads))


def movie(text: str, threads: int = 1) -> Report:
    return _report(_khtool.movie(text, threads))


def check(suite: str, mm: int = 0, threads: int = 1) -> Report:
    return _report(_khtool.check(suite, mm, threads))


def dump(diagram: str, functor: str = "khovanov", ring: str = "Q") -> Report:
    return _report(_khtool.dump(diagram, functor, ring))


def corpus() -> list[tuple[str, int, str]]:
    return _khtool.corpus()
