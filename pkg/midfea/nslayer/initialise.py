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
from scipy.spatial.distance import cdist

#===============================================================================

from midfea import EPS_NORM, KMEANS_ITERATIONS
from midfea.exceptions import InvalidArgumentError
from midfea.numerics import kmeans
from midfea.utils import log

from .objective import class_indices

#===============================================================================

SIMILARITY_FLOOR = 1e-12    #: Smallest distance used when computing similarities

RANDOM_SCALE = 0.1          #: Random initial values are uniform in [0, RANDOM_SCALE]

#===============================================================================

def allocate_neurons(class_sizes, d):
#====================================
    """
    Split ``d`` neurons equally among classes, the remainder going to the
    earliest classes. A class with fewer samples than its share gets one
    neuron per sample.
    """
    classes = len(class_sizes)
    if d < classes:
        raise InvalidArgumentError('{} neurons are too few for {} classes'.format(d, classes))
    allocation = [d//classes + (1 if c < d % classes else 0) for c in range(classes)]
    for c, size in enumerate(class_sizes):
        if size < allocation[c]:
            log.warning('Class {} has {} samples, reducing its neurons from {} to {}'
                        .format(c, size, allocation[c], size))
            allocation[c] = size
    return allocation

def unit_columns(D, rng):
#========================
    """
    Scale columns to unit length; columns with no length are replaced by
    random unit vectors.
    """
    D = np.array(D, dtype=np.float64)
    norms = np.sqrt(np.sum(D*D, axis=0))
    for j in np.flatnonzero(norms < EPS_NORM):
        column = rng.normal(1.0, D.shape[0])
        D[:, j] = column
        norms[j] = np.sqrt(column @ column)
    return D/norms[np.newaxis, :]

def similarity_codes(X, D):
#==========================
    """
    Initial activations from inverse distances to the decoder's columns.

    For each sample ``x``, ``z_i = s_i/sum(s)`` with
    ``s_i = 1/max(|x - d_i|, SIMILARITY_FLOOR)``, and the activation is
    ``z/|z|``.
    """
    distances = cdist(D.T, X.T)
    similarity = 1.0/np.maximum(distances, SIMILARITY_FLOOR)
    z = similarity/similarity.sum(axis=0, keepdims=True)
    return z/np.sqrt(np.sum(z*z, axis=0, keepdims=True))

#===============================================================================

def init_classwise(X, labels, hyper, rng, max_iter=KMEANS_ITERATIONS):
#=====================================================================
    """
    Decoder columns from k-means within each class, activations from
    similarities to those columns.

    :returns: ``(D, H)``
    """
    X = np.asarray(X, dtype=np.float64)
    classes = class_indices(labels)
    allocation = allocate_neurons([len(idx) for idx in classes], hyper.neurons(len(classes)))
    blocks = []
    for c, idx in enumerate(classes):
        blocks.append(kmeans(X[:, idx], allocation[c], rng.derive('class-{}'.format(c)),
                             max_iter=max_iter))
    D = unit_columns(np.concatenate(blocks, axis=1), rng)
    return D, similarity_codes(X, D)

def init_random(p, n, hyper, rng, classes=1):
#============================================
    """
    Non-negative random initial values, uniform in ``[0, 0.1]``, with unit
    length decoder columns.

    :param p: input dimension
    :param n: number of samples
    :returns: ``(D, H, W, b)``
    """
    d = hyper.neurons(classes)
    D = unit_columns(rng.uniform(0.0, RANDOM_SCALE, (p, d)), rng)
    H = rng.uniform(0.0, RANDOM_SCALE, (d, n))
    W = rng.uniform(0.0, RANDOM_SCALE, (d, p))
    b = rng.uniform(0.0, RANDOM_SCALE, d)
    return D, H, W, b

#===============================================================================
