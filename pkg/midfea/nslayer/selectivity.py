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

from collections import namedtuple

#===============================================================================

import numpy as np

#===============================================================================

from midfea.numerics import normalise_columns

from .objective import class_indices

#===============================================================================

SelectivityReport = namedtuple('SelectivityReport', 'within_class cross_class coherence')

#===============================================================================

def cross_class_coherence(H, labels):
#====================================
    """
    Sum over classes of ``|H_c^T H_/c|^2``.
    """
    H = np.asarray(H, dtype=np.float64)
    total = 0.0
    everything = np.arange(H.shape[1])
    for idx in class_indices(labels):
        others = np.setdiff1d(everything, idx, assume_unique=True)
        cross = H[:, idx].T @ H[:, others]
        total += float(np.sum(cross*cross))
    return total

def selectivity_report(H, labels):
#=================================
    """
    How selectively neurons respond to classes.

    :param H: activations, one sample per column
    :param labels: class index of each sample
    :returns: the mean cosine similarity between activations of distinct
              samples of the same class, the mean over pairs from different
              classes, and :func:`cross_class_coherence`
    :rtype: SelectivityReport
    """
    H = np.asarray(H, dtype=np.float64)
    labels = np.asarray(labels)
    unit = normalise_columns(H)
    cosines = unit.T @ unit
    same = labels[:, np.newaxis] == labels[np.newaxis, :]
    distinct = ~np.eye(len(labels), dtype=bool)
    within = cosines[same & distinct]
    cross = cosines[~same]
    return SelectivityReport(float(within.mean()) if within.size else 0.0,
                             float(cross.mean()) if cross.size else 0.0,
                             cross_class_coherence(H, labels))

#===============================================================================
