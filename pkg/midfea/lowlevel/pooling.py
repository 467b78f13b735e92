#===============================================================================
#
#  MidFea mid-level feature learning tools
#
#  Copyright (c) 2021  MidFea developers
#
#  Licensed under the Apache License, Version 2.0 (the "License");
#  you may not use this file except in compliance with the License.
#  You may obtain a copy of the License at
#
#      http://www.apache.org/licenses/LICENSE-2.0
#
#  Unless required by applicable law or agreed to in writing, software
#  distributed under the License is distributed on an "AS IS" BASIS,
#  WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
#  See the License for the specific language governing permissions and
#  limitations under the License.
#
#===============================================================================

import numpy as np

#===============================================================================

from midfea.exceptions import InvalidArgumentError
from midfea.numerics import tensor3

#===============================================================================

def map_pairs(depth):
#====================
    """
    The ``(i, j)``, ``i < j``, pairs of map indices in lexicographic order.
    """
    return np.triu_indices(depth, k=1)

def max_pool_3d(stack):
#======================
    """
    Max-pool every pair of maps over non-overlapping 2x2 spatial blocks.

    Each output value is the maximum of a 2x2x2 cuboid taken from maps ``i``
    and ``j``. A trailing odd row or column is dropped.

    :param stack: a ``(h, w, depth)`` array with ``depth >= 2``
    :returns: a ``(h//2, w//2, depth*(depth-1)/2)`` array
    """
    stack = np.asarray(stack, dtype=np.float64)
    if stack.ndim != 3:
        raise InvalidArgumentError('3D max-pooling needs a stack of maps')
    height, width, depth = stack.shape
    if depth < 2:
        raise InvalidArgumentError('3D max-pooling needs at least two maps')
    h2, w2 = height//2, width//2
    spatial = stack[:2*h2, :2*w2].reshape(h2, 2, w2, 2, depth).max(axis=(1, 3))
    first, second = map_pairs(depth)
    return np.maximum(spatial[:, :, first], spatial[:, :, second])

#===============================================================================

class DescriptorField(object):
    """
    Local descriptors on a grid.

    :param values: a ``(height, width, dim)`` array of non-negative values
    """
    def __init__(self, values):
        values = tensor3(values, 'Descriptor field')
        if values.size and values.min() < 0.0:
            raise InvalidArgumentError('Descriptors must be non-negative')
        self.__values = values

    def __str__(self):
        return 'DescriptorField {}x{} of dimension {}'.format(*self.__values.shape)

    @property
    def dim(self) -> int:
        return self.__values.shape[2]

    @property
    def height(self) -> int:
        return self.__values.shape[0]

    @property
    def values(self) -> np.ndarray:
        return self.__values

    @property
    def width(self) -> int:
        return self.__values.shape[1]

    def descriptors(self, stride=1):
    #===============================
        """
        Descriptors sampled every ``stride`` grid steps, one per column in
        row-major grid order.
        """
        sampled = self.__values[::stride, ::stride]
        return sampled.reshape(-1, self.dim).T

#===============================================================================

def assemble_descriptors(pooled):
#================================
    """
    Concatenate overlapping 2x2 neighbourhoods of every map.

    The descriptor at ``(r, c)`` holds, for each map ``m`` in turn, the values
    at ``(r, c)``, ``(r, c+1)``, ``(r+1, c)`` and ``(r+1, c+1)``; element
    ``4*m + q`` is neighbour ``q`` of map ``m``.
    """
    pooled = np.asarray(pooled, dtype=np.float64)
    if pooled.ndim != 3:
        raise InvalidArgumentError('Descriptors are assembled from a stack of maps')
    height, width, depth = pooled.shape
    if height < 2 or width < 2:
        raise InvalidArgumentError('Pooled maps of {}x{} are too small for 2x2 neighbourhoods'
                                   .format(height, width))
    neighbours = np.stack((pooled[:-1, :-1], pooled[:-1, 1:],
                           pooled[1:, :-1],  pooled[1:, 1:]), axis=-1)
    return DescriptorField(neighbours.reshape(height - 1, width - 1, 4*depth))

#===============================================================================
