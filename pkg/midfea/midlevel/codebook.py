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

from midfea import CODEBOOK_SIZE, KMEANS_ITERATIONS
from midfea.exceptions import InvalidArgumentError
from midfea.numerics import kmeans, matrix, nearest_columns
from midfea.utils import log

#===============================================================================

class Codebook(object):
    """
    VQ codewords, one per column.
    """
    def __init__(self, words):
        words = matrix(words, 'Codebook')
        if words.shape[1] < 2:
            raise InvalidArgumentError('A codebook needs at least two codewords')
        self.__words = words

    def __str__(self):
        return 'Codebook of {} words of dimension {}'.format(self.size, self.dim)

    @property
    def dim(self) -> int:
        return self.__words.shape[0]

    @property
    def size(self) -> int:
        return self.__words.shape[1]

    @property
    def words(self) -> np.ndarray:
        return self.__words

#===============================================================================

def sample_descriptors(fields, sample_cap, rng):
#===============================================
    """
    Uniformly sample up to ``sample_cap`` descriptors from a list of
    :class:`~midfea.lowlevel.pooling.DescriptorField`.

    :returns: the sampled descriptors as columns, in field then grid order
    """
    sizes = np.array([field.height*field.width for field in fields], dtype=np.int64)
    total = int(sizes.sum())
    chosen = rng.sample_without_replacement(total, sample_cap)
    offsets = np.concatenate(([0], np.cumsum(sizes)))
    owners = np.searchsorted(offsets, chosen, side='right') - 1
    columns = []
    for n in np.unique(owners):
        local = chosen[owners == n] - offsets[n]
        values = fields[n].values.reshape(-1, fields[n].dim)
        columns.append(values[local].T)
    return np.concatenate(columns, axis=1)

def learn_codebook(fields, m=CODEBOOK_SIZE, sample_cap=50000, rng=None,
                   max_iter=KMEANS_ITERATIONS):
#==========================================================================
    """
    Learn a :class:`Codebook` by k-means over sampled descriptors.

    :raises InvalidArgumentError: if there are fewer descriptors than codewords
    """
    if rng is None:
        raise InvalidArgumentError('Learning a codebook needs a random stream')
    if len(fields) == 0:
        raise InvalidArgumentError('No descriptors to learn a codebook from')
    dims = {field.dim for field in fields}
    if len(dims) != 1:
        raise InvalidArgumentError('Descriptor fields have differing dimensions {}'
                                   .format(sorted(dims)))
    total = sum(field.height*field.width for field in fields)
    if total < m:
        raise InvalidArgumentError('Only {} descriptors for {} codewords'.format(total, m))
    if sample_cap < m:
        raise InvalidArgumentError('A sample of {} descriptors cannot give {} codewords'
                                   .format(sample_cap, m))
    descriptors = sample_descriptors(fields, sample_cap, rng)
    log.info('Learning {} codewords from {} of {} descriptors'.format(m, descriptors.shape[1], total))
    return Codebook(kmeans(descriptors, m, rng, max_iter=max_iter))

#===============================================================================

class CodeMap(object):
    """
    Codeword indices on a grid.

    :param codes: a 2-D integer array
    :param pixel_step: distance in image pixels between adjacent codes
    """
    def __init__(self, codes, pixel_step=2):
        codes = np.array(codes, dtype=np.int64)
        if codes.ndim != 2:
            raise InvalidArgumentError('A code map must be 2-D')
        codes.setflags(write=False)
        self.__codes = codes
        self.__pixel_step = pixel_step

    @property
    def codes(self) -> np.ndarray:
        return self.__codes

    @property
    def height(self) -> int:
        return self.__codes.shape[0]

    @property
    def pixel_step(self) -> int:
        return self.__pixel_step

    @property
    def shape(self):
        return self.__codes.shape

    @property
    def width(self) -> int:
        return self.__codes.shape[1]

#===============================================================================

def vq_encode(field, cb, stride=1):
#==================================
    """
    Hard-assign the descriptors of a field to their nearest codewords.

    Descriptors are taken every ``stride`` grid steps. Equidistant codewords
    go to the lowest index.

    :returns: a :class:`CodeMap`; a descriptor grid step is two image pixels
    """
    if stride < 1:
        raise InvalidArgumentError('VQ stride must be at least 1')
    if field.dim != cb.dim:
        raise InvalidArgumentError('Descriptor dimension {} does not match codebook dimension {}'
                                   .format(field.dim, cb.dim))
    rows = len(range(0, field.height, stride))
    cols = len(range(0, field.width, stride))
    indices, _ = nearest_columns(field.descriptors(stride), cb.words)
    return CodeMap(indices.reshape(rows, cols), pixel_step=2*stride)

#===============================================================================
