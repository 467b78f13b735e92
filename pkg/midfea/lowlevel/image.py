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

#===============================================================================

class GrayImage(object):
    """
    A grid of intensities in ``[0, 1]``.

    :param pixels: a 2-D array of intensities
    :param source: where the image came from, for messages
    """
    def __init__(self, pixels, source=None):
        pixels = np.array(pixels, dtype=np.float64, order='C')
        if pixels.ndim != 2:
            raise InvalidArgumentError('An image must be 2-D, not {}-D'.format(pixels.ndim))
        if pixels.size == 0:
            raise InvalidArgumentError('An image must have pixels')
        if not np.all(np.isfinite(pixels)) or pixels.min() < 0.0 or pixels.max() > 1.0:
            raise InvalidArgumentError('Image intensities must be in [0, 1]')
        pixels.setflags(write=False)
        self.__pixels = pixels
        self.__source = source

    def __str__(self):
        return 'GrayImage {}x{}{}'.format(self.height, self.width,
            '' if self.__source is None else ' from {}'.format(self.__source))

    @property
    def height(self) -> int:
        return self.__pixels.shape[0]

    @property
    def pixels(self) -> np.ndarray:
        return self.__pixels

    @property
    def shape(self):
        return self.__pixels.shape

    @property
    def source(self):
        return self.__source

    @property
    def width(self) -> int:
        return self.__pixels.shape[1]

#===============================================================================

def image_pixels(img):
#=====================
    """
    The intensity grid of a :class:`GrayImage`, or of any finite 2-D array.

    Plain arrays are not range checked, so that a scaled copy of an image,
    e.g. ``4*img.pixels``, can go through the pipeline.
    """
    if isinstance(img, GrayImage):
        return img.pixels
    pixels = np.asarray(img, dtype=np.float64)
    if pixels.ndim != 2:
        raise InvalidArgumentError('An image must be 2-D, not {}-D'.format(pixels.ndim))
    if not np.all(np.isfinite(pixels)):
        raise InvalidArgumentError('Image contains non-finite values')
    return pixels

#===============================================================================
