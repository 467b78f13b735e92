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

from midfea import EPS_NORM
from midfea.exceptions import InvalidArgumentError
from midfea.numerics import matrix, vector

#===============================================================================

class MidFeature(object):
    """
    A projected feature of unit length, or all zeros when the projection of
    the pooled codes vanishes.
    """
    def __init__(self, values):
        self.__values = vector(values, 'Mid-level feature')

    def __len__(self):
        return len(self.__values)

    @property
    def dim(self) -> int:
        return len(self.__values)

    @property
    def is_zero(self) -> bool:
        return not np.any(self.__values)

    @property
    def values(self) -> np.ndarray:
        return self.__values

#===============================================================================

def projection_matrix(in_dim, out_dim, rng):
#===========================================
    """
    A Gaussian random projection from ``in_dim`` to ``out_dim`` dimensions.

    Entries have zero mean and standard deviation ``1/sqrt(out_dim)``, so
    squared lengths are preserved in expectation.
    """
    if out_dim < 1 or in_dim < 1:
        raise InvalidArgumentError('Projection dimensions must be positive')
    if out_dim > in_dim:
        raise InvalidArgumentError('Cannot project {} dimensions up to {}'.format(in_dim, out_dim))
    return matrix(rng.normal(1.0/np.sqrt(out_dim), (out_dim, in_dim)), 'Projection')

def project_normalize(v, P):
#===========================
    v = np.asarray(v, dtype=np.float64)
    if v.ndim != 1 or v.shape[0] != P.shape[1]:
        raise InvalidArgumentError('A vector of length {} cannot be projected by a {}x{} matrix'
                                   .format(v.size, *P.shape))
    u = P @ v
    norm = float(np.sqrt(u @ u))
    if norm < EPS_NORM:
        return MidFeature(np.zeros_like(u))
    return MidFeature(u/norm)

#===============================================================================
