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

from typing import (
    Any,
    Sequence,
    Type,
    TypeVar,
    Union,
)

import numpy as np
from numpy.typing import ArrayLike, NDArray

__all__ = (
    "_DictBased",
    "ComplexPair",
    "to_pair",
    "from_pair",
    "frozen_array",
    "as_points",
)

T = TypeVar("T")
ComplexPair = list[float]


class _DictBased:
    """A base class for objects that can be converted to a dictionary."""

    __slots__ = ()

    def to_dict(self) -> dict:
        """Converts this object to a dictionary.

        Returns
        -------
        dict
            The dictionary.
        """

        raise NotImplementedError

    def __repr__(self) -> str:
        return f"<{self.__class__.__name__} {self.to_dict()}>"

    def __setattr__(self, name: str, value: Any) -> None:
        # slots are written once, from __init__ (or _create)
        try:
            object.__getattribute__(self, name)
        except AttributeError:
            object.__setattr__(self, name, value)
        else:
            raise AttributeError(f"{self.__class__.__name__}.{name} is read-only")

    @classmethod
    def _create(cls: Type[T], **attrs: Any) -> T:
        """Creates an instance without running ``__init__``.

        Parameters
        ----------
        **attrs : Any
            Values for every slot of the class.

        Returns
        -------
        T
            The instance created.
        """

        self = cls.__new__(cls)  # bypass __init__
        for name, value in attrs.items():
            object.__setattr__(self, name, value)
        return self


def to_pair(z: complex) -> ComplexPair:
    """Encodes a complex number as ``[re, im]`` for JSON."""
    z = complex(z)
    return [z.real, z.imag]


def from_pair(pair: Sequence[float]) -> complex:
    """Decodes ``[re, im]`` into a complex number."""
    re, im = pair
    return complex(float(re), float(im))


def frozen_array(values: ArrayLike, dtype: Union[type, np.dtype] = complex) -> NDArray:
    """Copies ``values`` into a read-only numpy array."""
    array = np.array(values, dtype=dtype)
    array.setflags(write=False)
    return array


def as_points(z: Union[complex, ArrayLike]) -> NDArray[np.complex128]:
    """Views scalar or array input as a complex numpy array."""
    return np.asarray(z, dtype=np.complex128)
