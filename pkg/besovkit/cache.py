"""
The MIT License (MIT)

Copyright (c) 2024-present besovkit developers

Permission is hereby granted, free of charge, to any person obtaining a
copy of this software and associated documentation files (the "Software"),
to deal in the Software without restriction, including without limitation
the rights to use, copy, modify, merge, publish, distribute, sublicense,
and/or sell copies of the Software, and to permit persons to whom the
Software is furnished to do so, subject to the following conditions:

The above copyright notice and this permission notice shall be included in
all copies or substantial portions of the Software.

THE SOFTWARE IS PROVIDED "AS IS", WITHOUT WARRANTY OF ANY KIND, EXPRESS
OR IMPLIED, INCLUDING BUT NOT LIMITED TO THE WARRANTIES OF MERCHANTABILITY,
FITNESS FOR A PARTICULAR PURPOSE AND NONINFRINGEMENT. IN NO EVENT SHALL THE
AUTHORS OR COPYRIGHT HOLDERS BE LIABLE FOR ANY CLAIM, DAMAGES OR OTHER
LIABILITY, WHETHER IN AN ACTION OF CONTRACT, TORT OR OTHERWISE, ARISING
FROM, OUT OF OR IN CONNECTION WITH THE SOFTWARE OR THE USE OR OTHER
DEALINGS IN THE SOFTWARE.
"""

from __future__ import annotations

import logging
from collections import OrderedDict
from functools import wraps
from typing import (
    Any,
    Callable,
    TypeVar,
)
from typing_extensions import TypeAlias, ParamSpec


__all__ = (
    "Cache",
    "caching_function",
)

_log = logging.getLogger(__name__)

T = TypeVar("T")
P = ParamSpec("P")
Key: TypeAlias = tuple[tuple[Any, ...], frozenset[tuple[str, Any]], str]


class Cache:
    """Memo table for immutable results keyed by call arguments.

    Holds at most ``maxsize`` entries and evicts the least recently used one.
    """

    def __init__(self, maxsize: int = 64) -> None:
        if maxsize < 1:
            raise ValueError("maxsize must be at least 1")
        self.maxsize = maxsize
        self.data: OrderedDict[Key, Any] = OrderedDict()

    def get(self, key: Key) -> Any:
        self.data.move_to_end(key)
        return self.data[key]

    def put(self, key: Key, value: object) -> None:
        self.data[key] = value
        self.data.move_to_end(key)
        while len(self.data) > self.maxsize:
            evicted, _ = self.data.popitem(last=False)
            _log.debug("evicted %s%r", evicted[2], evicted[0])

    def clear(self) -> None:
        self.data.clear()

    def __len__(self) -> int:
        return len(self.data)


def caching_function(cache: Cache) -> Callable[[Callable[P, T]], Callable[P, T]]:
    """A decorator that caches the result of a pure function in ``cache``.

    Only use it for functions whose result is immutable and whose
    arguments are hashable.

    Parameters
    ----------
    cache: Cache
        The table to store results in.

    Returns
    -------
    Callable
        The decorator.
    """

    def decorator(func: Callable[P, T]) -> Callable[P, T]:

        @wraps(func)
        def wrapper(*args: P.args, **kwargs: P.kwargs) -> T:
            key = (args, frozenset(kwargs.items()), func.__qualname__)
            if key in cache.data:
                return cache.get(key)

            _log.debug("cache miss for %s%r", func.__qualname__, args)
            result = func(*args, **kwargs)
            cache.put(key, result)
            return result

        return wrapper

    return decorator
