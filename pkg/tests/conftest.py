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
import pytest

#===============================================================================

from midfea.dataset import oriented_texture
from midfea.lowlevel import GrayImage, describe, learn_filters
from midfea.midlevel import PartitionSpec, PipelineModel, learn_codebook, pooled_length, projection_matrix, vq_encode
from midfea.numerics import SeededRng
from midfea.settings import settings

#===============================================================================

@pytest.fixture(autouse=True)
def no_progress_bars():
    settings['quiet'] = True
    yield
    settings.pop('quiet', None)

@pytest.fixture
def rng():
    return SeededRng(1234)

#===============================================================================

def texture_images(count=6, size=32, seed=5):
    rng = SeededRng(seed)
    return [GrayImage(oriented_texture(size, 180.0*n/count, rng)) for n in range(count)]

@pytest.fixture(scope='module')
def textures():
    return texture_images()

@pytest.fixture(scope='module')
def small_pipeline(textures):
    """
    Five 5x5 filters, eight codewords and a two level pyramid.
    """
    rng = SeededRng(11)
    bank = learn_filters(textures, side=5, count=5, patches_per_image=60, rng=rng.derive('filters'))
    fields = [describe(img, bank) for img in textures]
    codebook = learn_codebook(fields, m=8, sample_cap=2000, rng=rng.derive('codebook'))
    partition = PartitionSpec.parse('pyramid:2')
    codes = vq_encode(fields[0], codebook)
    in_dim = pooled_length(partition, codebook.size, codes.height, codes.width, codes.pixel_step)
    projection = projection_matrix(in_dim, 16, rng.derive('projection'))
    return PipelineModel(bank, codebook, partition, projection)

#===============================================================================

def labelled_blobs(classes, per_class, dim, rng, spread=0.05):
    """
    Non-negative unit-length samples around one random centre per class.
    """
    centres = rng.uniform(0.0, 1.0, (dim, classes))
    X = np.concatenate([centres[:, [c]] + spread*rng.uniform(0.0, 1.0, (dim, per_class))
                            for c in range(classes)], axis=1)
    labels = np.repeat(np.arange(classes), per_class)
    return X/np.sqrt(np.sum(X*X, axis=0)), labels

#===============================================================================
