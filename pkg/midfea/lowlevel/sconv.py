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

"""
Soft convolution.

The image is correlated with each filter over the valid region, negative
responses are set to zero and every location's vector of responses (across
the maps) is scaled to unit length. Entries below that vector's mean are
then zeroed and the vector is scaled to unit length again. The result is a
sparse, non-negative stack of maps.

A positive scaling of the image scales every response at a location by the
same factor, which the first normalisation removes. When the factor is a
power of two the cancellation is exact.
"""

#===============================================================================

from collections import namedtuple

#===============================================================================

import cv2
import numpy as np

#===============================================================================

from midfea import EPS_NORM
from midfea.exceptions import InvalidArgumentError

from .image import image_pixels

#===============================================================================

# Intermediate maps: raw correlation (may be negative), rectified and normalised,
# thresholded at the per-location mean, and the final renormalised maps

SoftConvolution = namedtuple('SoftConvolution', 'raw normalised thresholded final')

#===============================================================================

def correlate(img, bank):
#========================
    """
    Valid-region correlation of an image with each filter of a bank.

    :returns: a ``(h-side+1, w-side+1, count)`` array
    """
    pixels = image_pixels(img)
    side = bank.side
    if pixels.shape[0] < side or pixels.shape[1] < side:
        raise InvalidArgumentError('A {}x{} image is smaller than a {}x{} filter'
                                   .format(*pixels.shape, side, side))
    rows = pixels.shape[0] - side + 1
    cols = pixels.shape[1] - side + 1
    responses = np.empty((rows, cols, bank.count))
    source = np.array(pixels, dtype=np.float64)      # cv2 wants writable buffers
    for n, kernel in enumerate(bank.kernels):
        # With the anchor at the kernel's origin, output (r, c) covers
        # pixels (r:r+side, c:c+side); only those are kept
        filtered = cv2.filter2D(source, cv2.CV_64F, np.array(kernel), anchor=(0, 0),
                                borderType=cv2.BORDER_CONSTANT)
        responses[:, :, n] = filtered[:rows, :cols]
    return responses

def normalise_depth(stack, eps=EPS_NORM):
#========================================
    """
    Scale the depth vector at each location to unit Euclidean length; vectors
    shorter than ``eps`` become zero.
    """
    norms = np.sqrt(np.sum(stack*stack, axis=2, keepdims=True))
    return np.divide(stack, norms, out=np.zeros_like(stack), where=(norms >= eps))

def threshold_mean(stack):
#=========================
    mean = stack.mean(axis=2, keepdims=True)
    return np.where(stack < mean, 0.0, stack)

#===============================================================================

def soft_convolve_stages(img, bank):
#===================================
    raw = correlate(img, bank)
    normalised = normalise_depth(np.maximum(raw, 0.0))
    thresholded = threshold_mean(normalised)
    final = normalise_depth(thresholded)
    return SoftConvolution(raw, normalised, thresholded, final)

def soft_convolve(img, bank):
#============================
    """
    :param img: a :class:`~midfea.lowlevel.image.GrayImage` or 2-D array
    :param bank: a :class:`~midfea.lowlevel.filters.FilterBank`
    :returns: a ``(h-side+1, w-side+1, count)`` array of values in ``[0, 1]``
    """
    return soft_convolve_stages(img, bank).final

#===============================================================================
