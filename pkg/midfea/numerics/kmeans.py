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
from sklearn.cluster import kmeans_plusplus

#===============================================================================

from midfea import KMEANS_ITERATIONS
from midfea.exceptions import InvalidArgumentError
from midfea.utils import log

from .arrays import matrix, nearest_columns

#===============================================================================

def kmeans_objective(points, centres, labels):
#=============================================
    """
    Sum of squared distances from each point (column) to its assigned centre.
    """
    diffs = points - centres[:, labels]
    return float(np.sum(diffs*diffs))

#===============================================================================

def __repair_empty_clusters(points, centres, labels, k):
    counts = np.bincount(labels, minlength=k)
    empty = np.flatnonzero(counts == 0)
    if len(empty) == 0:
        return labels
    labels = labels.copy()
    diffs = points - centres[:, labels]
    distances = np.sum(diffs*diffs, axis=0)
    for j in empty:
        # Only points that leave a non-empty cluster behind can move
        movable = np.where(counts[labels] > 1, distances, -1.0)
        farthest = int(np.argmax(movable))
        counts[labels[farthest]] -= 1
        counts[j] = 1
        labels[farthest] = j
        distances[farthest] = 0.0
    log.debug('k-means: re-seeded {} empty cluster(s)'.format(len(empty)))
    return labels

def __cluster_means(points, labels, k):
    # Every cluster is non-empty after repair
    order = np.argsort(labels, kind='stable')
    counts = np.bincount(labels, minlength=k)
    starts = np.concatenate(([0], np.cumsum(counts)[:-1]))
    sums = np.add.reduceat(points[:, order], starts, axis=1)
    return sums/counts[np.newaxis, :]

#===============================================================================

def kmeans(points, k, rng, max_iter=KMEANS_ITERATIONS, objective_trace=None):
#============================================================================
    """
    Lloyd's k-means clustering with k-means++ seeding.

    :param points: one point per column
    :param k: number of clusters
    :param rng: a :class:`~midfea.numerics.rng.SeededRng`
    :param max_iter: maximum number of assignment/update iterations
    :param objective_trace: if a list, the objective after each update is
                            appended to it
    :returns: The centroids, one per column.
    :raises InvalidArgumentError: if there are fewer points than clusters
    """
    points = np.asarray(points, dtype=np.float64)
    if points.ndim != 2:
        raise InvalidArgumentError('k-means points must be a matrix')
    if k < 1:
        raise InvalidArgumentError('k-means needs at least one cluster')
    if max_iter < 1:
        raise InvalidArgumentError('k-means needs at least one iteration')
    if points.shape[1] < k:
        raise InvalidArgumentError('Cannot find {} clusters among {} points'
                                   .format(k, points.shape[1]))

    seeds, _ = kmeans_plusplus(np.ascontiguousarray(points.T), n_clusters=k,
                               random_state=rng.seed_int())
    centres = np.ascontiguousarray(seeds.T)
    labels = None
    for iteration in range(max_iter):
        new_labels, _ = nearest_columns(points, centres)
        new_labels = __repair_empty_clusters(points, centres, new_labels, k)
        if labels is not None and np.array_equal(new_labels, labels):
            break
        labels = new_labels
        centres = __cluster_means(points, labels, k)
        if objective_trace is not None:
            objective_trace.append(kmeans_objective(points, centres, labels))
    log.debug('k-means: {} clusters from {} points in {} iterations'
              .format(k, points.shape[1], iteration + 1))
    return matrix(centres, 'centroids')

#===============================================================================
