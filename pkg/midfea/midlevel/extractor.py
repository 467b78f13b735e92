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

from concurrent.futures import ThreadPoolExecutor
from contextlib import nullcontext

#===============================================================================

import numpy as np

#===============================================================================

from midfea.exceptions import InvalidArgumentError
from midfea.lowlevel import assemble_descriptors, max_pool_3d, soft_convolve
from midfea.numerics import matrix
from midfea.utils import ProgressBar

from .codebook import vq_encode
from .partitions import spatial_pool
from .projection import project_normalize

#===============================================================================

# Feed-forward stages, in the order they run

SOFT_CONVOLUTION  = 'soft convolution'
MAX_POOLING_3D    = '3D max-pooling'
LOCAL_DESCRIPTOR  = 'local descriptor'
VQ_CODING         = 'VQ'
SP_POOLING        = 'SP pooling'
RANDOM_PROJECTION = 'random projection'

FEED_FORWARD_STAGES = [SOFT_CONVOLUTION, MAX_POOLING_3D, LOCAL_DESCRIPTOR,
                       VQ_CODING, SP_POOLING, RANDOM_PROJECTION]

#===============================================================================

class PipelineModel(object):
    """
    Everything needed to turn an image into a mid-level feature.

    :param bank: a :class:`~midfea.lowlevel.filters.FilterBank`
    :param codebook: a :class:`~midfea.midlevel.codebook.Codebook`
    :param partition: a :class:`~midfea.midlevel.partitions.PartitionSpec`
    :param projection: the random projection, whose column count is the
                       pooled length for the training image size
    :param vq_stride: grid step between coded descriptors
    """
    def __init__(self, bank, codebook, partition, projection, vq_stride=1):
        descriptor_dim = 2*bank.count*(bank.count - 1)
        if codebook.dim != descriptor_dim:
            raise InvalidArgumentError('Codebook dimension {} does not match {} filters'
                                       .format(codebook.dim, bank.count))
        if vq_stride < 1:
            raise InvalidArgumentError('VQ stride must be at least 1')
        self.__bank = bank
        self.__codebook = codebook
        self.__partition = partition
        self.__projection = matrix(projection, 'Projection')
        self.__vq_stride = vq_stride

    @property
    def bank(self):
        return self.__bank

    @property
    def codebook(self):
        return self.__codebook

    @property
    def feature_dim(self) -> int:
        return self.__projection.shape[0]

    @property
    def partition(self):
        return self.__partition

    @property
    def pooled_dim(self) -> int:
        return self.__projection.shape[1]

    @property
    def projection(self) -> np.ndarray:
        return self.__projection

    @property
    def vq_stride(self) -> int:
        return self.__vq_stride

#===============================================================================

def extract_midfeature(img, model, timer=None):
#==============================================
    """
    Run an image through the feed-forward pipeline.

    :param img: a :class:`~midfea.lowlevel.image.GrayImage` or 2-D array
    :param model: a :class:`PipelineModel`
    :param timer: if given, each stage runs inside ``timer.stage(name)``
    :rtype: :class:`~midfea.midlevel.projection.MidFeature`
    """
    def stage(name):
        return timer.stage(name) if timer is not None else nullcontext()

    with stage(SOFT_CONVOLUTION):
        maps = soft_convolve(img, model.bank)
    with stage(MAX_POOLING_3D):
        pooled = max_pool_3d(maps)
    with stage(LOCAL_DESCRIPTOR):
        field = assemble_descriptors(pooled)
    with stage(VQ_CODING):
        codes = vq_encode(field, model.codebook, model.vq_stride)
    with stage(SP_POOLING):
        histogram = spatial_pool(codes, model.codebook.size, model.partition)
    if len(histogram) != model.pooled_dim:
        raise InvalidArgumentError('Image gives {} pooled values, the projection expects {}; '
                                   'are all images the same size?'.format(len(histogram), model.pooled_dim))
    with stage(RANDOM_PROJECTION):
        return project_normalize(histogram, model.projection)

def extract_features(images, model, threads=1):
#==============================================
    """
    Mid-level features of a list of images.

    Images are processed concurrently when ``threads > 1``; the result does
    not depend on the number of threads.

    :returns: a ``feature_dim x len(images)`` matrix, one feature per column
    """
    features = np.zeros((model.feature_dim, len(images)))
    with ProgressBar(total=len(images), unit='img', desc='Extracting features') as progress:
        if threads > 1:
            with ThreadPoolExecutor(max_workers=threads) as executor:
                for n, feature in enumerate(executor.map(lambda img: extract_midfeature(img, model), images)):
                    features[:, n] = feature.values
                    progress.update(1)
        else:
            for n, img in enumerate(images):
                features[:, n] = extract_midfeature(img, model).values
                progress.update(1)
    return matrix(features, 'Features')

#===============================================================================
