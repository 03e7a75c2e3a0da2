# config.py
"""
Runtime limits and project metadata.

Configuration comes from the environment, optionally seeded from
coalition_forge.env next to this file via python-dotenv.
"""
import os
from dataclasses import dataclass
from typing import Any, Optional, Tuple

from dotenv import load_dotenv

from coalition_forge.core import InvalidConfig

ENV_PATH = os.path.join(os.path.dirname(__file__), "coalition_forge.env")
if os.path.exists(ENV_PATH):
    load_dotenv(ENV_PATH, override=False)

ENV_PREFIX = "COALITION_FORGE_"


# empty values fall back to the default
def geti(name: str, default: int) -> int:
    v = os.getenv(name)
    if v is None or v.strip() == "":
        return int(default)
    try:
        return int(v)
    except ValueError:
        raise InvalidConfig(f"{name} must be an integer, got {v!r}") from None


def getb(name: str, default: bool) -> bool:
    v = os.getenv(name)
    if v is None:
        return default
    return v.strip().lower() in ("1", "true", "yes", "on")


@dataclass(frozen=True)
class Limits:
    # |N| bound for anything that enumerates all 2^|N|-1 coalitions
    guard_n: int = 20
    # |C| bound for MM matrices
    guard_matrix: int = 4096
    # memoize the generic hierarchy search on the placed set up to this |C|
    hierarchy_memo: int = 20
    # |C| bound for the generic hierarchy search
    guard_hierarchy: int = 40
    # |S| bound for C-feasible partition enumeration
    guard_partition: int = 10

    @classmethod
    def from_env(cls) -> "Limits":
        return cls(
            guard_n=geti(ENV_PREFIX + "GUARD_N", cls.guard_n),
            guard_matrix=geti(ENV_PREFIX + "GUARD_MATRIX", cls.guard_matrix),
            hierarchy_memo=geti(ENV_PREFIX + "HIERARCHY_MEMO", cls.hierarchy_memo),
            guard_hierarchy=geti(ENV_PREFIX + "GUARD_HIERARCHY", cls.guard_hierarchy),
            guard_partition=geti(ENV_PREFIX + "GUARD_PARTITION", cls.guard_partition),
        )


def resolve_limits(limits: Optional[Limits]) -> Limits:
    return limits if limits is not None else Limits.from_env()


def debug_enabled() -> bool:
    return getb(ENV_PREFIX + "DEBUG", False)


def get_name_and_version_from_toml_path(path: Optional[str] = None) -> Tuple[Any, Any]:
    """Read project.name and project.version; falls back to installed metadata."""
    if path is None:
        path = os.path.join(os.path.dirname(os.path.dirname(__file__)), "pyproject.toml")
    name = None
    version = None
    try:
        try:
            import tomllib
        except ModuleNotFoundError:  # Python < 3.11
            import tomli as tomllib
        if os.path.exists(path):
            with open(path, "rb") as f:
                data = tomllib.load(f)
        else:
            data = {}
        proj = data.get("project") if isinstance(data, dict) else None
        if proj and isinstance(proj, dict):
            name = proj.get("name")
            version = proj.get("version")
    except Exception:
        name = None
        version = None
    if name is None or version is None:
        try:
            from importlib.metadata import version as dist_version, PackageNotFoundError
            try:
                version = version or dist_version("coalition-forge")
                name = name or "coalition-forge"
            except PackageNotFoundError:
                pass
        except ImportError:
            pass
    return name, version
