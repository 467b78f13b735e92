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
One-vs-rest linear support vector machine.

Each class ``k`` has weights ``w_k`` and bias ``b_k`` minimising::

    reg/2 |(w_k, b_k)|^2 + mean over samples of max(0, 1 - y_k (w_k.x + b_k))

with ``y_k = +1`` for samples of class ``k`` and ``-1`` otherwise. The bias
is learnt as the weight of a constant input of 1.

Minimisation is by full-batch projected subgradient descent with step
``1/(reg t)`` at iteration ``t``, returning the average of the iterates.
Using every sample at every iteration makes training deterministic and
unchanged when the training set is repeated.
"""

#===============================================================================

import numpy as np
from sklearn.preprocessing import label_binarize

#===============================================================================

from midfea.exceptions import InvalidArgumentError
from midfea.numerics import matrix, vector
from midfea.utils import ProgressBar, log

#===============================================================================

CLF_REGULARISATION = 1e-4
CLF_EPOCHS = 100

#===============================================================================

class LinearClassifier(object):
    """
    :param weights: a ``C x dim`` matrix, one row per class
    :param biases: a vector of length ``C``
    :param classes: the label of each class, in row order
    :param reg: the regularisation it was trained with
    """
    def __init__(self, weights, biases, classes, reg=CLF_REGULARISATION):
        weights = matrix(weights, 'Classifier weights')
        biases = vector(biases, 'Classifier biases')
        classes = np.array(classes, dtype=np.int64)
        if weights.shape[0] < 2:
            raise InvalidArgumentError('A classifier needs at least two classes')
        if biases.shape[0] != weights.shape[0] or classes.shape != biases.shape:
            raise InvalidArgumentError('Classifier weights, biases and classes disagree')
        classes.setflags(write=False)
        self.__weights = weights
        self.__biases = biases
        self.__classes = classes
        self.__reg = float(reg)

    def __str__(self):
        return 'LinearClassifier of {} classes over {} features'.format(*self.__weights.shape)

    @property
    def biases(self) -> np.ndarray:
        return self.__biases

    @property
    def classes(self) -> np.ndarray:
        return self.__classes

    @property
    def dim(self) -> int:
        return self.__weights.shape[1]

    @property
    def reg(self) -> float:
        return self.__reg

    @property
    def weights(self) -> np.ndarray:
        return self.__weights

    def scores(self, features):
    #==========================
        """
        :param features: one sample per column
        :returns: a ``C x N`` array of class scores
        """
        features = np.asarray(features, dtype=np.float64)
        if features.ndim != 2 or features.shape[0] != self.dim:
            raise InvalidArgumentError('Features of shape {} given to a classifier of dimension {}'
                                       .format(features.shape, self.dim))
        return self.__weights @ features + self.__biases[:, np.newaxis]

#===============================================================================

def signed_targets(labels, classes):
#===================================
    """
    ``+1``/``-1`` one-vs-rest targets, one row per class.
    """
    Y = label_binarize(labels, classes=classes, neg_label=-1, pos_label=1)
    if len(classes) == 2:
        Y = np.hstack((-Y, Y))
    return Y.T.astype(np.float64)

def train_linear(features, labels, reg=CLF_REGULARISATION, epochs=CLF_EPOCHS):
#=============================================================================
    """
    Train a one-vs-rest linear SVM.

    There is no random stream to pass: every iteration uses the whole
    training set, so no shuffle order enters and the same inputs always give
    the same classifier.

    :param features: one sample per column
    :param labels: integer class label of each sample
    :raises InvalidArgumentError: if there are fewer than two classes
    """
    X = np.asarray(features, dtype=np.float64)
    labels = np.asarray(labels, dtype=np.int64)
    if X.ndim != 2 or X.shape[1] != len(labels):
        raise InvalidArgumentError('Features and labels disagree on the number of samples')
    if len(labels) < 2:
        raise InvalidArgumentError('A classifier needs at least two samples')
    if reg <= 0.0 or epochs < 1:
        raise InvalidArgumentError('Classifier regularisation and epochs must be positive')
    classes = np.unique(labels)
    if len(classes) < 2:
        raise InvalidArgumentError('A classifier needs at least two classes')

    n = X.shape[1]
    augmented = np.vstack((X, np.ones((1, n))))
    Y = signed_targets(labels, classes)
    radius = 1.0/np.sqrt(reg)
    w = np.zeros((len(classes), augmented.shape[0]))
    average = np.zeros_like(w)
    with ProgressBar(total=epochs, unit='epoch', desc='Training classifier') as progress:
        for t in range(1, epochs + 1):
            margins = Y*(w @ augmented)
            violated = np.where(margins < 1.0, Y, 0.0)
            step = 1.0/(reg*t)
            w = (1.0 - step*reg)*w + (step/n)*(violated @ augmented.T)
            norms = np.sqrt(np.sum(w*w, axis=1, keepdims=True))
            w = w*np.minimum(1.0, radius/np.maximum(norms, radius))
            average += (w - average)/t
            progress.update(1)
    log.debug('Trained classifier of {} classes on {} samples'.format(len(classes), n))
    return LinearClassifier(average[:, :-1], average[:, -1], classes, reg)

#===============================================================================

def predict(features, clf):
#==========================
    """
    The label of the highest scoring class for each sample; ties go to the
    first class.
    """
    return clf.classes[np.argmax(clf.scores(features), axis=0)]

#===============================================================================
