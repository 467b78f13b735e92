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
from numpy.lib.stride_tricks import sliding_window_view

#===============================================================================

from midfea import EPS_NORM, FILTER_COUNT, FILTER_SIZE, KMEANS_ITERATIONS
from midfea.exceptions import InvalidArgumentError
from midfea.numerics import kmeans, matrix
from midfea.utils import ProgressBar, log

from .image import image_pixels

#===============================================================================

class FilterBank(object):
    """
    Square low-level filters, stored one flattened (row-major) patch per column.

    :param filters: a ``side*side`` by ``count`` matrix
    :param side: filter side in pixels
    """
    def __init__(self, filters, side):
        filters = matrix(filters, 'Filters')
        if side < 1 or filters.shape[0] != side*side:
            raise InvalidArgumentError('Filters of {} values are not {}x{}'
                                       .format(filters.shape[0], side, side))
        if filters.shape[1] < 2:
            raise InvalidArgumentError('A filter bank needs at least two filters')
        self.__filters = filters
        self.__side = side
        kernels = np.ascontiguousarray(filters.T.reshape(-1, side, side))
        kernels.setflags(write=False)
        self.__kernels = kernels

    def __str__(self):
        return 'FilterBank of {} {}x{} filters'.format(self.count, self.__side, self.__side)

    @property
    def count(self) -> int:
        return self.__filters.shape[1]

    @property
    def filters(self) -> np.ndarray:
        return self.__filters

    @property
    def kernels(self) -> np.ndarray:
        """
        The filters as a ``(count, side, side)`` array.
        """
        return self.__kernels

    @property
    def side(self) -> int:
        return self.__side

#===============================================================================

def sample_patches(images, side, patches_per_image, rng):
#========================================================
    """
    Draw random ``side x side`` patches from each image.

    :returns: A ``side*side`` by ``N`` array, one flattened patch per column.
    """
    columns = []
    with ProgressBar(total=len(images), unit='img', desc='Sampling patches') as progress:
        for img in images:
            pixels = image_pixels(img)
            if pixels.shape[0] < side or pixels.shape[1] < side:
                raise InvalidArgumentError('A {}x{} image is smaller than a {}x{} filter'
                                           .format(*pixels.shape, side, side))
            windows = sliding_window_view(pixels, (side, side))
            rows = rng.integers(0, windows.shape[0], size=patches_per_image)
            cols = rng.integers(0, windows.shape[1], size=patches_per_image)
            columns.append(windows[rows, cols].reshape(patches_per_image, -1).T)
            progress.update(1)
    if len(columns) == 0:
        return np.zeros((side*side, 0))
    return np.concatenate(columns, axis=1)

def learn_filters(images, side=FILTER_SIZE, count=FILTER_COUNT, patches_per_image=200,
                  rng=None, max_iter=KMEANS_ITERATIONS):
#=====================================================================================
    """
    Learn a :class:`FilterBank` by k-means over random image patches.

    Each patch has its mean removed and is scaled to unit length; patches
    with no contrast are discarded.

    :raises InvalidArgumentError: if ``count < 2`` or no patch has contrast
    """
    if rng is None:
        raise InvalidArgumentError('Learning filters needs a random stream')
    if count < 2:
        raise InvalidArgumentError('At least two filters are needed')
    if patches_per_image < 1:
        raise InvalidArgumentError('At least one patch per image is needed')
    patches = sample_patches(images, side, patches_per_image, rng)
    patches = patches - patches.mean(axis=0, keepdims=True)
    norms = np.sqrt(np.sum(patches*patches, axis=0))
    keep = norms >= EPS_NORM
    if not np.any(keep):
        raise InvalidArgumentError('No sampled patch has any contrast')
    patches = patches[:, keep]/norms[keep]
    if patches.shape[1] < count:
        raise InvalidArgumentError('Only {} usable patches for {} filters'
                                   .format(patches.shape[1], count))
    log.info('Learning {} {}x{} filters from {} patches'.format(count, side, side, patches.shape[1]))
    return FilterBank(kmeans(patches, count, rng, max_iter=max_iter), side)

#===============================================================================
