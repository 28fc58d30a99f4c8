"""Bundled example structures."""
from importlib import resources

NAMES = ("n5", "fig2", "bowtie", "nonstrong")


def fixture_path(name: str):
    return resources.files(__name__) / f"{name}.poset"


def fixture_text(name: str) -> str:
    return fixture_path(name).read_text(encoding="utf-8")
