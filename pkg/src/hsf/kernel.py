"""Kernel selection: compiled scan core when available, pure Python otherwise.

The compiled extension is optional; everything works on the pure kernel,
just slower on long inputs. `get_kernel` lets benchmarks and tests force a
specific backend.
"""

from __future__ import annotations

from types import ModuleType

from hsf import _pykernel

try:
    from hsf import _speedups  # type: ignore[attr-defined]
except ImportError:
    _speedups = None

URL_SPAN = _pykernel.URL_SPAN

DEFAULT_BACKEND = "c" if _speedups is not None else "python"


def available_backends() -> tuple[str, ...]:
    return ("python", "c") if _speedups is not None else ("python",)


def get_kernel(name: str = "auto") -> ModuleType:
    """Resolve a backend name ("auto", "python", "c") to its module."""
    if name == "auto":
        return _speedups if _speedups is not None else _pykernel
    if name == "python":
        return _pykernel
    if name == "c":
        if _speedups is None:
            raise ValueError("compiled kernel is not available in this install")
        return _speedups
    raise ValueError(f"unknown kernel backend {name!r}")


_default = get_kernel("auto")
scan_layer1 = _default.scan_layer1
url_match_len = _default.url_match_len
