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
Dense containers.

A matrix is a 2-D ``float64`` :class:`numpy.ndarray` and a 3rd-order tensor is
a ``(height, width, depth)`` ``float64`` array. The constructors here copy
their input, reject non-finite values and return read-only arrays so that
values can be shared between threads.
"""

#===============================================================================

import numpy as np

#===============================================================================

from midfea import EPS_NORM
from midfea.exceptions import InvalidArgumentError

#===============================================================================

NEAREST_CHUNK = 4096    #: Points per block when searching for nearest centres

#===============================================================================

def __frozen(values, ndim, name):
    array = np.array(values, dtype=np.float64, order='C')
    if array.ndim != ndim:
        raise InvalidArgumentError('{} must have {} dimensions, not {}'
                                   .format(name, ndim, array.ndim))
    if not np.all(np.isfinite(array)):
        raise InvalidArgumentError('{} contains non-finite values'.format(name))
    array.setflags(write=False)
    return array

def matrix(values, name='Matrix'):
#=================================
    """
    :param values: anything :func:`numpy.array` accepts with two dimensions
    :returns: A read-only, finite, row-major ``float64`` matrix.
    :raises InvalidArgumentError: if not 2-D or not finite
    """
    return __frozen(values, 2, name)

def tensor3(values, name='Tensor3'):
#===================================
    """
    :returns: A read-only, finite ``(height, width, depth)`` tensor.
    """
    return __frozen(values, 3, name)

def vector(values, name='vector'):
#=================================
    return __frozen(values, 1, name)

#===============================================================================

def normalise_columns(m, eps=EPS_NORM):
#======================================
    """
    Scale each column of ``m`` to unit Euclidean length; columns with norm
    below ``eps`` become zero.
    """
    norms = np.sqrt(np.sum(m*m, axis=0))
    return np.divide(m, norms, out=np.zeros_like(m, dtype=np.float64),
                     where=(norms >= eps))

def l21_norm(m):
#===============
    """
    The sum over rows of each row's Euclidean norm.
    """
    m = np.asarray(m, dtype=np.float64)
    if m.size == 0:
        return 0.0
    return float(np.sum(np.sqrt(np.sum(m*m, axis=1))))

#===============================================================================

def nearest_columns(points, centres):
#====================================
    """
    Index of the nearest centre (column of ``centres``) for each column of
    ``points``, by squared Euclidean distance with ties going to the lowest
    index.

    Distances are first found with the expanded form
    ``|x|^2 - 2 x.c + |c|^2``; any centre within rounding of the minimum is
    then re-checked with exact differences so the result matches a direct
    scan.

    :returns: ``(indices, distances)``, distances being squared.
    """
    points = np.asarray(points, dtype=np.float64)
    centres = np.asarray(centres, dtype=np.float64)
    if points.shape[0] != centres.shape[0]:
        raise InvalidArgumentError('Point dimension {} does not match centre dimension {}'
                                   .format(points.shape[0], centres.shape[0]))
    if points.shape[1] > NEAREST_CHUNK:
        chunks = [__nearest(points[:, start:start+NEAREST_CHUNK], centres)
                    for start in range(0, points.shape[1], NEAREST_CHUNK)]
        return (np.concatenate([chunk[0] for chunk in chunks]),
                np.concatenate([chunk[1] for chunk in chunks]))
    return __nearest(points, centres)

def __nearest(points, centres):
    point_sq = np.sum(points*points, axis=0)
    centre_sq = np.sum(centres*centres, axis=0)
    distances = point_sq[:, np.newaxis] - 2.0*(points.T @ centres) + centre_sq[np.newaxis, :]
    np.maximum(distances, 0.0, out=distances)
    minimum = distances.min(axis=1)
    tolerance = 1e-9*(point_sq + centre_sq.max()) + 1e-300
    candidates = distances <= (minimum + tolerance)[:, np.newaxis]
    indices = np.argmax(candidates, axis=1)
    best = minimum.copy()
    for n in np.flatnonzero(candidates.sum(axis=1) > 1):
        columns = np.flatnonzero(candidates[n])
        diffs = centres[:, columns] - points[:, n:n+1]
        exact = np.sum(diffs*diffs, axis=0)
        choice = int(np.argmin(exact))      # first minimum is the lowest index
        indices[n] = columns[choice]
        best[n] = exact[choice]
    return indices, best

#===============================================================================
