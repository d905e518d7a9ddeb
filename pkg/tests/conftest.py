"""Shared helpers for the test suite."""

import pathlib

from hodp.parser import parse_system
from hodp.signature import RewriteSystem

SYSTEMS_DIR = pathlib.Path(__file__).resolve().parent.parent / "systems"


def load_system(name: str) -> RewriteSystem:
    return parse_system((SYSTEMS_DIR / f"{name}.hodp").read_text())


def system_text(name: str) -> str:
    return (SYSTEMS_DIR / f"{name}.hodp").read_text()
