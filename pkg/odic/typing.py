import os
from typing import Tuple, Union

import numpy as np
import numpy.typing as npt

FloatArrayT = npt.NDArray[np.float64]
IntArrayT = npt.NDArray[np.int64]

ShapeT = Tuple[int, int]
PathLikeT = Union[str, os.PathLike]
