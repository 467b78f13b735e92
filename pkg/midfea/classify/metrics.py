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
from sklearn.metrics import accuracy_score, mean_absolute_error

#===============================================================================

from midfea.exceptions import InvalidArgumentError

#===============================================================================

def __matched(pred, truth):
    pred = np.asarray(pred)
    truth = np.asarray(truth)
    if pred.ndim != 1 or pred.shape != truth.shape:
        raise InvalidArgumentError('{} predictions for {} true labels'.format(pred.size, truth.size))
    if pred.size == 0:
        raise InvalidArgumentError('No predictions to score')
    return pred, truth

def accuracy(pred, truth):
#=========================
    """
    Fraction of predictions equal to the truth.
    """
    pred, truth = __matched(pred, truth)
    return float(accuracy_score(truth, pred))

def mae(pred, truth):
#====================
    """
    Mean absolute error between integer labels, e.g. ages.
    """
    pred, truth = __matched(pred, truth)
    return float(mean_absolute_error(truth.astype(np.int64), pred.astype(np.int64)))

#===============================================================================
