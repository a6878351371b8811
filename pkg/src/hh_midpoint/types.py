from asyncio import Queue
from collections.abc import Callable
from os import PathLike
from typing import Any, Union

import numpy as np
from numpy.typing import NDArray

from .messages import Message

FloatArray = NDArray[np.float64]
"""Sample points or values of a real function."""

Integrand = Callable[[FloatArray], FloatArray]
"""A vectorised real function, evaluated at every point of an array at once."""

MessageQueue = Queue[Message]
"""Progress messages from a running check, read by the CLI."""

PathLikeObject = Union[PathLike[Any], str]
"""A corpus or report path; `bytes` paths are not accepted."""
