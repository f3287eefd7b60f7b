"""Internal JSON helpers shared by the file-format loaders."""

import json
import os
from typing import Any

from .errors import ParseError

Source = "str | os.PathLike | TextIO"


def read_json(source) -> Any:
    """Parse JSON from a path or an open text stream.

    Raises ParseError carrying a line/column locus on malformed input.
    """
    if isinstance(source, (str, os.PathLike)):
        with open(source, "r", encoding="utf-8") as fh:
            text = fh.read()
    elif hasattr(source, "read"):
        text = source.read()
        if isinstance(text, bytes):
            text = text.decode("utf-8")
    else:
        raise TypeError(f"expected a path or text stream, got {type(source).__name__}")
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(exc.msg, locus=f"line {exc.lineno}, column {exc.colno}") from None


def write_json(data: Any, target) -> None:
    """Serialize ``data`` deterministically to a path or an open text stream."""
    text = dumps(data)
    if isinstance(target, (str, os.PathLike)):
        with open(target, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        target.write(text)


def dumps(data: Any) -> str:
    # sorted keys and a fixed layout keep repeated runs byte-identical
    return json.dumps(data, indent=2, sort_keys=True, ensure_ascii=False) + "\n"


def require(data: Any, key: str, kind, locus: str):
    """Fetch ``data[key]`` and type-check it, with a readable error locus."""
    if not isinstance(data, dict):
        raise ParseError(f"expected an object, got {type(data).__name__}", locus=locus)
    if key not in data:
        raise ParseError(f"missing required field '{key}'", locus=locus)
    value = data[key]
    if kind is not None and not isinstance(value, kind):
        names = kind.__name__ if isinstance(kind, type) else "/".join(k.__name__ for k in kind)
        raise ParseError(
            f"field '{key}' must be {names}, got {type(value).__name__}", locus=locus
        )
    return value
